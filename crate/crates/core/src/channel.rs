//! Length-two channels: Kraus pairs, named channel specs, ensembles, and the
//! Holevo bound.
//!
//! A channel spec is either a raw Kraus pair, one of the two named
//! one-parameter families (phase damping, amplitude damping), or the
//! canonical form `A = diag(a00, a11)`, `B = antidiag(b01, b10)` that every
//! trace-preserving length-two channel can be rotated into.

use crate::error::Error;
use crate::mat2::{c64, C64, Mat2};
use crate::state::{entropy_of_spectrum, eig2, DensityOperator};
use crate::tol;
use crate::Result;

/// A validated pair of 2x2 Kraus matrices defining `T(X) = AXA† + BXB†`.
///
/// Construction requires linear independence (the channel really has length
/// two); trace preservation is checked separately because the θ machinery
/// is defined for arbitrary pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrausPair {
    a: Mat2,
    b: Mat2,
}

impl KrausPair {
    /// Validates linear independence of `a` and `b` as 4-vectors, at
    /// relative tolerance [`tol::KRAUS_INDEPENDENCE`].
    pub fn new(a: Mat2, b: Mat2) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::ParameterOutOfRange("non-finite Kraus entries".into()));
        }
        let na = a.norm_fro();
        let nb = b.norm_fro();
        if na == 0.0 || nb == 0.0 {
            return Err(Error::DependentKraus);
        }
        // Residual of b after removing its component along a.
        let coeff = a.hs_dot(&b) / c64(na * na, 0.0);
        let resid = (b - a.scale(coeff)).norm_fro();
        if resid <= tol::KRAUS_INDEPENDENCE * nb {
            return Err(Error::DependentKraus);
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> Mat2 {
        self.a
    }

    pub fn b(&self) -> Mat2 {
        self.b
    }

    /// Residual of the trace-preservation condition `A†A + B†B = 1`.
    pub fn trace_preservation_residual(&self) -> f64 {
        let s = self.a.dagger() * self.a + self.b.dagger() * self.b;
        s.max_abs_diff(&Mat2::IDENTITY)
    }

    /// True when the pair preserves the trace within [`tol::TRACE_PRESERVING`].
    pub fn is_trace_preserving(&self) -> bool {
        self.trace_preservation_residual() <= tol::TRACE_PRESERVING
    }

    /// Raw action `AXA† + BXB†` on an arbitrary matrix.
    pub fn apply_matrix(&self, x: &Mat2) -> Mat2 {
        self.a * *x * self.a.dagger() + self.b * *x * self.b.dagger()
    }

    /// Applies the channel to a state. Requires trace preservation.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        let resid = self.trace_preservation_residual();
        if resid > tol::TRACE_PRESERVING {
            return Err(Error::NotTracePreserving { residual: resid });
        }
        DensityOperator::new(self.apply_matrix(&rho.matrix()))
    }

    /// Recombines the pair by an invertible matrix μ:
    /// `A' = μ₀₀A + μ₀₁B`, `B' = μ₁₀A + μ₁₁B`. Unitary μ preserves the
    /// channel itself; general invertible μ preserves only the module
    /// (and with it every geometric object derived from θ, up to scale).
    pub fn mixed_by(&self, mu: &Mat2) -> Result<Self> {
        if mu.det().norm() < 1e-12 {
            return Err(Error::ParameterOutOfRange(
                "mixing matrix must be invertible".into(),
            ));
        }
        Self::new(
            self.a.scale(mu.m00) + self.b.scale(mu.m01),
            self.a.scale(mu.m10) + self.b.scale(mu.m11),
        )
    }
}

/// Declarative description of a length-two channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelSpec {
    /// Arbitrary validated Kraus pair.
    Kraus(KrausPair),
    /// Phase damping: diagonal preserved, `x01 → z·x01` with `|z| < 1`.
    PhaseDamping { z: C64 },
    /// Amplitude damping with retention parameter `0 < p ≤ 1` (Kraus
    /// operators `diag(1, √p)` and `antidiag(√(1−p), 0)`; `p = 1` is the
    /// noiseless limit, which is no longer a length-two pair).
    AmplitudeDamping { p: f64 },
    /// Canonical form `A = diag(a00, a11)`, `B = antidiag(b01, b10)`,
    /// trace-preserving: `|a00|² + |b10|² = 1`, `|a11|² + |b01|² = 1`.
    Canonical { a00: C64, a11: C64, b01: C64, b10: C64 },
}

impl ChannelSpec {
    /// Phase-damping spec; requires `|z| < 1`.
    pub fn phase_damping(z: C64) -> Result<Self> {
        if !(z.norm() < 1.0) {
            return Err(Error::ParameterOutOfRange(format!(
                "phase damping needs |z| < 1, got |z| = {}",
                z.norm()
            )));
        }
        Ok(Self::PhaseDamping { z })
    }

    /// Amplitude-damping spec; requires `0 < p ≤ 1`.
    pub fn amplitude_damping(p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::ParameterOutOfRange(format!(
                "amplitude damping needs 0 < p ≤ 1, got {p}"
            )));
        }
        Ok(Self::AmplitudeDamping { p })
    }

    /// Canonical-form spec; checks the two trace-preservation rows within
    /// `1e-10` and that `B ≠ 0`.
    pub fn canonical(a00: C64, a11: C64, b01: C64, b10: C64) -> Result<Self> {
        let row0 = a00.norm_sqr() + b10.norm_sqr();
        let row1 = a11.norm_sqr() + b01.norm_sqr();
        if (row0 - 1.0).abs() > tol::TRACE_PRESERVING || (row1 - 1.0).abs() > tol::TRACE_PRESERVING
        {
            return Err(Error::ParameterOutOfRange(format!(
                "canonical form is not trace-preserving: rows ({row0}, {row1})"
            )));
        }
        let spec = Self::Canonical { a00, a11, b01, b10 };
        // Surfaces degenerate pairs (B = 0) early.
        spec.kraus()?;
        Ok(spec)
    }

    /// Wraps a validated Kraus pair.
    pub fn from_pair(pair: KrausPair) -> Self {
        Self::Kraus(pair)
    }

    /// Kind label used in reports and CLI output.
    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Kraus(_) => "kraus",
            Self::PhaseDamping { .. } => "phase_damping",
            Self::AmplitudeDamping { .. } => "amplitude_damping",
            Self::Canonical { .. } => "canonical",
        }
    }

    /// The defining matrices, without length-two validation. `kraus()` is
    /// the validated constructor; this raw accessor exists because θ is
    /// well-defined even for dependent pairs (e.g. amplitude damping p = 1).
    pub fn raw_matrices(&self) -> (Mat2, Mat2) {
        match *self {
            Self::Kraus(pair) => (pair.a(), pair.b()),
            Self::PhaseDamping { z } => (
                // diag(1, conj(z)) reproduces x01 → z·x01 exactly.
                Mat2::diag(c64(1.0, 0.0), z.conj()),
                Mat2::diag(C64::ZERO, c64((1.0 - z.norm_sqr()).max(0.0).sqrt(), 0.0)),
            ),
            Self::AmplitudeDamping { p } => (
                Mat2::diag(c64(1.0, 0.0), c64(p.sqrt(), 0.0)),
                Mat2::antidiag(c64((1.0 - p).max(0.0).sqrt(), 0.0), C64::ZERO),
            ),
            Self::Canonical { a00, a11, b01, b10 } => {
                (Mat2::diag(a00, a11), Mat2::antidiag(b01, b10))
            }
        }
    }

    /// A validated Kraus realization of the spec.
    pub fn kraus(&self) -> Result<KrausPair> {
        let (a, b) = self.raw_matrices();
        KrausPair::new(a, b)
    }

    /// Raw action of the channel on an arbitrary matrix. Named kinds use
    /// their closed-form action (exact for every parameter, including the
    /// amplitude-damping noiseless limit p = 1).
    pub fn apply_matrix(&self, x: &Mat2) -> Mat2 {
        match *self {
            Self::Kraus(pair) => pair.apply_matrix(x),
            Self::PhaseDamping { z } => Mat2::new(x.m00, z * x.m01, z.conj() * x.m10, x.m11),
            Self::AmplitudeDamping { p } => {
                let s = p.sqrt();
                Mat2::new(
                    x.m00 + (1.0 - p) * x.m11,
                    s * x.m01,
                    s * x.m10,
                    p * x.m11,
                )
            }
            Self::Canonical { .. } => {
                let (a, b) = self.raw_matrices();
                a * *x * a.dagger() + b * *x * b.dagger()
            }
        }
    }

    /// Applies the channel to a state. Requires trace preservation.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        match self {
            Self::Kraus(pair) => pair.apply(rho),
            // Named and canonical kinds are trace-preserving by construction.
            _ => DensityOperator::new(self.apply_matrix(&rho.matrix())),
        }
    }

    /// True when the channel preserves the trace.
    pub fn is_trace_preserving(&self) -> bool {
        match self {
            Self::Kraus(pair) => pair.is_trace_preserving(),
            _ => true,
        }
    }

    /// Entropy of the channel output for a state given by its matrix.
    /// Cheap path used by optimizers and the roof oracle.
    pub fn output_entropy(&self, rho_mat: &Mat2) -> f64 {
        let out = self.apply_matrix(rho_mat);
        // Outputs of completely positive maps on Hermitian inputs are
        // Hermitian; eig2 only re-checks.
        entropy_of_spectrum(eig2(&out).expect("channel output is Hermitian"))
    }
}

/// Default cap on ensemble length.
pub const ENSEMBLE_DEFAULT_CAP: usize = 16;

/// A finite ensemble `{(w_j, ρ_j)}` with positive weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    members: Vec<(f64, DensityOperator)>,
}

impl Ensemble {
    /// Validates an ensemble against the default length cap.
    pub fn new(members: Vec<(f64, DensityOperator)>) -> Result<Self> {
        Self::with_cap(members, ENSEMBLE_DEFAULT_CAP)
    }

    /// Validates an ensemble with an explicit length cap.
    pub fn with_cap(members: Vec<(f64, DensityOperator)>, cap: usize) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidEnsemble("empty ensemble".into()));
        }
        if members.len() > cap {
            return Err(Error::InvalidEnsemble(format!(
                "{} members exceeds the cap of {cap}",
                members.len()
            )));
        }
        let mut sum = 0.0;
        for &(w, _) in &members {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidEnsemble(format!("weight {w} is not positive")));
            }
            sum += w;
        }
        if (sum - 1.0).abs() > tol::STRUCTURAL {
            return Err(Error::InvalidEnsemble(format!("weights sum to {sum}, expected 1")));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[(f64, DensityOperator)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The ensemble average `Σ w_j ρ_j`.
    pub fn average(&self) -> DensityOperator {
        let mut acc = Mat2::ZERO;
        for (w, rho) in &self.members {
            acc = acc + rho.matrix() * *w;
        }
        DensityOperator::new(acc).expect("convex mixture of states is a state")
    }

    /// Pushes the ensemble through a channel member-wise.
    pub fn through(&self, channel: &ChannelSpec) -> Result<Ensemble> {
        let mut out = Vec::with_capacity(self.members.len());
        for (w, rho) in &self.members {
            out.push((*w, channel.apply(rho)?));
        }
        Ok(Ensemble { members: out })
    }
}

/// Holevo quantity `χ = S(Σ w_j ρ_j) − Σ w_j S(ρ_j)` in nats, optionally of
/// the image ensemble under a channel. Clamped at zero: concavity of the
/// von Neumann entropy makes χ nonnegative, so any negative residual is
/// rounding.
pub fn holevo_chi(ensemble: &Ensemble, channel: Option<&ChannelSpec>) -> Result<f64> {
    let image;
    let e = match channel {
        Some(ch) => {
            if !ch.is_trace_preserving() {
                return Err(Error::NotTracePreserving {
                    residual: match ch {
                        ChannelSpec::Kraus(p) => p.trace_preservation_residual(),
                        _ => 0.0,
                    },
                });
            }
            image = ensemble.through(ch)?;
            &image
        }
        None => ensemble,
    };
    let mut avg_member_entropy = 0.0;
    for (w, rho) in e.members() {
        avg_member_entropy += w * rho.entropy();
    }
    let chi = e.average().entropy() - avg_member_entropy;
    debug_assert!(chi > -tol::STRUCTURAL, "χ must be nonnegative, got {chi}");
    Ok(chi.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{density_from_bloch, BlochVector};

    const LN_2: f64 = std::f64::consts::LN_2;

    fn state(x1: f64, x2: f64, x3: f64) -> DensityOperator {
        density_from_bloch(BlochVector::new(x1, x2, x3)).unwrap()
    }

    #[test]
    fn kraus_pair_independence() {
        let a = Mat2::IDENTITY * (1.0 / 2.0_f64.sqrt());
        assert!(KrausPair::new(a, a * 2.0).is_err(), "scalar multiples are dependent");
        assert!(KrausPair::new(a, Mat2::ZERO).is_err());
        assert!(KrausPair::new(a, Mat2::SIGMA_X * (1.0 / 2.0_f64.sqrt())).is_ok());
    }

    #[test]
    fn apply_mixing_pair() {
        let pair = KrausPair::new(
            Mat2::IDENTITY * (1.0 / 2.0_f64.sqrt()),
            Mat2::SIGMA_X * (1.0 / 2.0_f64.sqrt()),
        )
        .unwrap();
        assert!(pair.is_trace_preserving());
        let out = pair.apply(&state(0.0, 0.0, 1.0)).unwrap();
        assert!(out.matrix().max_abs_diff(&(Mat2::IDENTITY * 0.5)) < 1e-15);
    }

    #[test]
    fn phase_damping_action_matches_defining_map() {
        let z = c64(0.3, 0.4);
        let spec = ChannelSpec::phase_damping(z).unwrap();
        let rho = state(0.5, -0.3, 0.2);
        let out = spec.apply(&rho).unwrap().matrix();
        let m = rho.matrix();
        assert!((out.m00 - m.m00).norm() < 1e-15);
        assert!((out.m11 - m.m11).norm() < 1e-15);
        assert!((out.m01 - z * m.m01).norm() < 1e-15, "x01 → z·x01");
        assert!((out.m10 - z.conj() * m.m10).norm() < 1e-15);

        // The Kraus realization reproduces the defining map on a basis.
        let pair = spec.kraus().unwrap();
        for basis in [
            Mat2::IDENTITY,
            Mat2::SIGMA_X,
            Mat2::SIGMA_Y,
            Mat2::SIGMA_Z,
        ] {
            let d = pair.apply_matrix(&basis).max_abs_diff(&spec.apply_matrix(&basis));
            assert!(d < 1e-12);
        }
    }

    #[test]
    fn phase_damping_fixes_poles() {
        let spec = ChannelSpec::phase_damping(c64(0.7, 0.1)).unwrap();
        for pole in [state(0.0, 0.0, 1.0), state(0.0, 0.0, -1.0)] {
            let out = spec.apply(&pole).unwrap();
            assert!(out.matrix().max_abs_diff(&pole.matrix()) < 1e-15);
        }
    }

    #[test]
    fn amplitude_damping_action() {
        let p = 0.3;
        let spec = ChannelSpec::amplitude_damping(p).unwrap();
        let rho = state(0.4, 0.2, -0.1);
        let m = rho.matrix();
        let out = spec.apply(&rho).unwrap().matrix();
        assert!((out.m00 - (m.m00 + (1.0 - p) * m.m11)).norm() < 1e-15);
        assert!((out.m11 - p * m.m11).norm() < 1e-15);
        assert!((out.m01 - p.sqrt() * m.m01).norm() < 1e-15);

        // Matches its own Kraus realization on a basis.
        let pair = spec.kraus().unwrap();
        assert!(
            pair.a().max_abs_diff(&Mat2::diag(c64(1.0, 0.0), c64(p.sqrt(), 0.0))) < 1e-15
        );
        assert!(
            pair.b().max_abs_diff(&Mat2::antidiag(c64((1.0 - p).sqrt(), 0.0), C64::ZERO)) < 1e-15
        );
        for basis in [Mat2::IDENTITY, Mat2::SIGMA_X, Mat2::SIGMA_Y, Mat2::SIGMA_Z] {
            let d = pair.apply_matrix(&basis).max_abs_diff(&spec.apply_matrix(&basis));
            assert!(d < 1e-12);
        }

        // Example: p = 1/2 sends |1⟩⟨1| to the maximally mixed state.
        let half = ChannelSpec::amplitude_damping(0.5).unwrap();
        let out = half.apply(&state(0.0, 0.0, -1.0)).unwrap();
        assert!(out.matrix().max_abs_diff(&(Mat2::IDENTITY * 0.5)) < 1e-15);
    }

    #[test]
    fn amplitude_damping_noiseless_limit() {
        let spec = ChannelSpec::amplitude_damping(1.0).unwrap();
        let rho = state(0.3, 0.1, 0.4);
        let out = spec.apply(&rho).unwrap();
        assert!(out.matrix().max_abs_diff(&rho.matrix()) < 1e-15, "p = 1 is the identity");
        assert!(spec.kraus().is_err(), "p = 1 is not a length-two pair");
    }

    #[test]
    fn parameter_validation() {
        assert!(ChannelSpec::phase_damping(c64(1.0, 0.0)).is_err());
        assert!(ChannelSpec::phase_damping(c64(0.8, 0.6)).is_err());
        assert!(ChannelSpec::amplitude_damping(0.0).is_err());
        assert!(ChannelSpec::amplitude_damping(1.2).is_err());
        assert!(ChannelSpec::canonical(c64(1.0, 0.0), c64(1.0, 0.0), c64(0.3, 0.0), C64::ZERO).is_err());
    }

    #[test]
    fn canonical_spec_round_trip() {
        let (s, c) = (0.6_f64, 0.8_f64);
        let spec = ChannelSpec::canonical(c64(c, 0.0), c64(c, 0.0), c64(s, 0.0), c64(s, 0.0)).unwrap();
        let pair = spec.kraus().unwrap();
        assert!(pair.is_trace_preserving());
        for basis in [Mat2::IDENTITY, Mat2::SIGMA_X, Mat2::SIGMA_Y, Mat2::SIGMA_Z] {
            let d = pair.apply_matrix(&basis).max_abs_diff(&spec.apply_matrix(&basis));
            assert!(d < 1e-12);
        }
    }

    #[test]
    fn phase_damping_zero_kraus() {
        let spec = ChannelSpec::phase_damping(C64::ZERO).unwrap();
        let pair = spec.kraus().unwrap();
        assert!(pair.a().max_abs_diff(&Mat2::diag(c64(1.0, 0.0), C64::ZERO)) < 1e-15);
        assert!(pair.b().max_abs_diff(&Mat2::diag(C64::ZERO, c64(1.0, 0.0))) < 1e-15);
    }

    #[test]
    fn ensemble_validation() {
        let s = state(0.0, 0.0, 0.5);
        assert!(Ensemble::new(vec![]).is_err());
        assert!(Ensemble::new(vec![(0.5, s), (0.6, s)]).is_err(), "weights must sum to 1");
        assert!(Ensemble::new(vec![(0.0, s), (1.0, s)]).is_err(), "weights must be positive");
        assert!(Ensemble::new(vec![(1.0, s); 17]).is_err(), "cap at 16");
        let e = Ensemble::new(vec![(0.25, state(0.0, 0.0, 1.0)), (0.75, state(0.0, 0.0, -1.0))])
            .unwrap();
        let b = e.average().bloch();
        assert!((b.x3 - (-0.5)).abs() < 1e-15);
    }

    #[test]
    fn holevo_examples() {
        // Orthogonal pure pair, no channel: ln 2.
        let e = Ensemble::new(vec![
            (0.5, state(0.0, 0.0, 1.0)),
            (0.5, state(0.0, 0.0, -1.0)),
        ])
        .unwrap();
        assert!((holevo_chi(&e, None).unwrap() - LN_2).abs() < 1e-14);

        // Single member: 0.
        let single = Ensemble::new(vec![(1.0, state(0.3, 0.0, 0.2))]).unwrap();
        assert!(holevo_chi(&single, None).unwrap().abs() < 1e-14);

        // Frozen oracle value: the pair {|0⟩, |1⟩; 1/2, 1/2} through
        // amplitude damping p = 1/2 gives h(1/4) − ln(2)/2.
        let ad = ChannelSpec::amplitude_damping(0.5).unwrap();
        let chi = holevo_chi(&e, Some(&ad)).unwrap();
        assert!((chi - 0.21576155433883570).abs() < 1e-14);
    }
}
