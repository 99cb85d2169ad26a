//! Deterministic random generators for states, channels, and ensembles.
//!
//! Everything is driven by a counter-based stream cipher RNG seeded
//! explicitly, so any property-test failure or verification report can be
//! reproduced bit-for-bit from its seed.

use crate::channel::{ChannelSpec, Ensemble, KrausPair};
use crate::mat2::{c64, C64, Mat2};
use crate::state::{density_from_bloch, BlochVector, DensityOperator};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Seeded source of random quantum objects.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn gauss(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    fn gauss_c(&mut self) -> C64 {
        c64(self.gauss(), self.gauss())
    }

    /// Uniform direction on the unit sphere.
    pub fn unit_vector(&mut self) -> [f64; 3] {
        loop {
            let v = [self.gauss(), self.gauss(), self.gauss()];
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if n > 1e-6 {
                return [v[0] / n, v[1] / n, v[2] / n];
            }
        }
    }

    /// Haar-uniform pure state vector.
    pub fn pure_vector(&mut self) -> [C64; 2] {
        loop {
            let v = [self.gauss_c(), self.gauss_c()];
            let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            if n > 1e-6 {
                return [v[0] / n, v[1] / n];
            }
        }
    }

    /// Haar-uniform pure state.
    pub fn pure_state(&mut self) -> DensityOperator {
        DensityOperator::from_pure(self.pure_vector()).expect("normalized by construction")
    }

    /// Uniform Bloch vector in the ball of the given radius.
    pub fn bloch_in_ball(&mut self, max_radius: f64) -> BlochVector {
        let dir = self.unit_vector();
        let u: f64 = self.rng.gen_range(0.0..1.0);
        let r = max_radius * u.cbrt();
        BlochVector::new(r * dir[0], r * dir[1], r * dir[2])
    }

    /// Mixed state drawn uniformly from the Bloch ball of the given radius.
    pub fn mixed_state(&mut self, max_radius: f64) -> DensityOperator {
        density_from_bloch(self.bloch_in_ball(max_radius)).expect("inside the ball")
    }

    /// Matrix with independent standard complex Gaussian entries.
    pub fn gaussian_matrix(&mut self) -> Mat2 {
        Mat2::new(self.gauss_c(), self.gauss_c(), self.gauss_c(), self.gauss_c())
    }

    /// Linearly independent Kraus pair with Gaussian entries, scaled to
    /// unit Frobenius norm so downstream residuals stay O(1). Generally
    /// not trace-preserving.
    pub fn kraus_pair_raw(&mut self) -> KrausPair {
        loop {
            let a = self.gaussian_matrix();
            let b = self.gaussian_matrix();
            let (na, nb) = (a.norm_fro(), b.norm_fro());
            if na < 1e-6 || nb < 1e-6 {
                continue;
            }
            if let Ok(pair) = KrausPair::new(a.scale(c64(1.0 / na, 0.0)), b.scale(c64(1.0 / nb, 0.0)))
            {
                return pair;
            }
        }
    }

    /// Trace-preserving Kraus pair: the rows of `[A; B]` are built as a
    /// Haar-random 4×2 isometry, which is exactly the condition
    /// `A†A + B†B = 1`.
    pub fn kraus_pair_tp(&mut self) -> KrausPair {
        loop {
            let mut c0 = [self.gauss_c(), self.gauss_c(), self.gauss_c(), self.gauss_c()];
            let mut c1 = [self.gauss_c(), self.gauss_c(), self.gauss_c(), self.gauss_c()];
            let n0 = c0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if n0 < 1e-6 {
                continue;
            }
            for z in &mut c0 {
                *z /= n0;
            }
            let overlap: C64 = c0.iter().zip(&c1).map(|(a, b)| a.conj() * b).sum();
            for (z, base) in c1.iter_mut().zip(&c0) {
                *z -= overlap * base;
            }
            let n1 = c1.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if n1 < 1e-6 {
                continue;
            }
            for z in &mut c1 {
                *z /= n1;
            }
            let a = Mat2::new(c0[0], c1[0], c0[1], c1[1]);
            let b = Mat2::new(c0[2], c1[2], c0[3], c1[3]);
            if let Ok(pair) = KrausPair::new(a, b) {
                return pair;
            }
        }
    }

    /// Random trace-preserving channel spec (Kraus variant).
    pub fn channel_tp(&mut self) -> ChannelSpec {
        ChannelSpec::from_pair(self.kraus_pair_tp())
    }

    /// Haar-random 2×2 unitary.
    pub fn unitary(&mut self) -> Mat2 {
        loop {
            let mut u = [self.gauss_c(), self.gauss_c()];
            let nu = (u[0].norm_sqr() + u[1].norm_sqr()).sqrt();
            if nu < 1e-6 {
                continue;
            }
            u[0] /= nu;
            u[1] /= nu;
            let mut v = [self.gauss_c(), self.gauss_c()];
            let overlap = u[0].conj() * v[0] + u[1].conj() * v[1];
            v[0] -= overlap * u[0];
            v[1] -= overlap * u[1];
            let nv = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            if nv < 1e-6 {
                continue;
            }
            v[0] /= nv;
            v[1] /= nv;
            return Mat2::new(u[0], v[0], u[1], v[1]);
        }
    }

    /// Random invertible 2×2 matrix, conditioned away from singularity.
    pub fn invertible(&mut self) -> Mat2 {
        loop {
            let m = self.gaussian_matrix();
            if m.det().norm() > 0.2 {
                return m;
            }
        }
    }

    /// Random canonical-form channel: `A = diag(cos φ₁·e^{iξ}, cos φ₂·e^{iη})`,
    /// `B` antidiagonal completing each row to unit norm, with the mixing
    /// angles bounded away from the degenerate ends.
    pub fn canonical_spec(&mut self) -> ChannelSpec {
        let lo = 0.1;
        let hi = std::f64::consts::FRAC_PI_2 - 0.1;
        let phi1: f64 = self.rng.gen_range(lo..hi);
        let phi2: f64 = self.rng.gen_range(lo..hi);
        let mut phase = |r: f64| {
            let t: f64 = self.rng.gen_range(0.0..std::f64::consts::TAU);
            c64(r * t.cos(), r * t.sin())
        };
        let a00 = phase(phi1.cos());
        let b10 = phase(phi1.sin());
        let a11 = phase(phi2.cos());
        let b01 = phase(phi2.sin());
        ChannelSpec::canonical(a00, a11, b01, b10).expect("rows are unit-norm by construction")
    }

    /// Random ensemble of up to four mixed states with Dirichlet-like
    /// weights.
    pub fn ensemble(&mut self, len: usize, max_radius: f64) -> Ensemble {
        assert!((1..=8).contains(&len), "ensemble length out of range");
        let mut raw: Vec<f64> = (0..len)
            .map(|_| -> f64 {
                let u: f64 = self.rng.gen_range(1e-9..1.0_f64);
                -u.ln()
            })
            .collect();
        let total: f64 = raw.iter().sum();
        for w in &mut raw {
            *w /= total;
        }
        let members = raw
            .into_iter()
            .map(|w| (w, self.mixed_state(max_radius)))
            .collect();
        Ensemble::new(members).expect("weights normalized by construction")
    }
}
