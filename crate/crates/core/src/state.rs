//! Density operators, Bloch-ball coordinates, and 2x2 Hermitian spectra.
//!
//! States are parametrized as `ρ = (1 + x₁σ₁ + x₂σ₂ + x₃σ₃)/2` with the
//! Bloch vector `x` inside the closed unit ball; pure states sit on the
//! sphere. Spectra come from the closed-form quadratic, never iteration.

use crate::error::Error;
use crate::mat2::{c64, vec2_norm, vec2_outer, C64, Mat2};
use crate::tol;
use crate::Result;

/// Bloch coordinates of a one-qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl BlochVector {
    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Self { x1, x2, x3 }
    }

    /// Euclidean norm of the Bloch vector.
    pub fn norm(&self) -> f64 {
        (self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3).sqrt()
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

/// Eigenvalue pair of a 2x2 Hermitian matrix, ordered `hi ≥ lo`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum2 {
    pub hi: f64,
    pub lo: f64,
}

/// A validated one-qubit density operator.
///
/// Construction checks Hermiticity, unit trace, and positivity at the
/// [`tol::STRUCTURAL`] tier, then stores an exactly Hermitian matrix so that
/// downstream algebra never re-accumulates asymmetry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityOperator {
    mat: Mat2,
}

impl DensityOperator {
    /// Validates `mat` as a density operator.
    pub fn new(mat: Mat2) -> Result<Self> {
        if !mat.is_finite() {
            return Err(Error::InvalidState("non-finite entries".into()));
        }
        let herm = mat.hermiticity_residual();
        if herm > tol::STRUCTURAL {
            return Err(Error::NotHermitian { residual: herm, tol: tol::STRUCTURAL });
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > tol::STRUCTURAL || tr.im.abs() > tol::STRUCTURAL {
            return Err(Error::InvalidState(format!(
                "trace is {} + {}i, expected 1",
                tr.re, tr.im
            )));
        }
        let sym = Self::hermitize(mat);
        let det = sym.det().re;
        if det < -tol::STRUCTURAL {
            return Err(Error::InvalidState(format!("negative determinant {det}")));
        }
        if sym.m00.re < -tol::STRUCTURAL || sym.m11.re < -tol::STRUCTURAL {
            return Err(Error::InvalidState("negative diagonal entry".into()));
        }
        Ok(Self { mat: sym })
    }

    /// Projects onto the Hermitian part (used after validation, so the
    /// adjustment is at rounding scale).
    fn hermitize(m: Mat2) -> Mat2 {
        let off = (m.m01 + m.m10.conj()) * 0.5;
        Mat2::new(c64(m.m00.re, 0.0), off, off.conj(), c64(m.m11.re, 0.0))
    }

    /// Builds the projector `|v⟩⟨v|` from a unit vector.
    pub fn from_pure(v: [C64; 2]) -> Result<Self> {
        let n = vec2_norm(v);
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { norm: n });
        }
        // Normalize exactly so the projector has unit trace to rounding.
        let v = [v[0] / n, v[1] / n];
        Ok(Self { mat: Self::hermitize(vec2_outer(v, v)) })
    }

    /// Projector from any nonzero vector, normalizing first. Used by hot
    /// paths whose vectors are unit by construction.
    pub(crate) fn from_pure_unnormalized(v: [C64; 2]) -> Result<Self> {
        let n = vec2_norm(v);
        if n <= 0.0 || !n.is_finite() {
            return Err(Error::InvalidState("zero vector has no projector".into()));
        }
        let v = [v[0] / n, v[1] / n];
        Ok(Self { mat: Self::hermitize(vec2_outer(v, v)) })
    }

    /// The underlying matrix.
    pub fn matrix(&self) -> Mat2 {
        self.mat
    }

    /// Bloch coordinates of the state.
    pub fn bloch(&self) -> BlochVector {
        bloch_from_density(self)
    }

    /// Real determinant of the state.
    pub fn det(&self) -> f64 {
        self.mat.det().re
    }

    /// Eigenvalues, descending.
    pub fn spectrum(&self) -> Spectrum2 {
        // Construction guarantees Hermiticity.
        eig2(&self.mat).expect("validated density operator is Hermitian")
    }

    /// True when the state is pure at the [`tol::PURITY_DET`] tier.
    pub fn is_pure(&self) -> bool {
        self.det() <= tol::PURITY_DET
    }

    /// Von Neumann entropy in nats.
    pub fn entropy(&self) -> f64 {
        von_neumann_entropy(self)
    }
}

/// Builds the density operator for a Bloch vector.
///
/// Errors when `‖b‖ > 1 + tol::STRUCTURAL` (not a state).
pub fn density_from_bloch(b: BlochVector) -> Result<DensityOperator> {
    let n = b.norm();
    if !n.is_finite() || n > 1.0 + tol::STRUCTURAL {
        return Err(Error::InvalidState(format!(
            "Bloch vector norm {n} exceeds the unit ball"
        )));
    }
    let mat = Mat2::new(
        c64((1.0 + b.x3) / 2.0, 0.0),
        c64(b.x1 / 2.0, -b.x2 / 2.0),
        c64(b.x1 / 2.0, b.x2 / 2.0),
        c64((1.0 - b.x3) / 2.0, 0.0),
    );
    Ok(DensityOperator { mat })
}

/// Reads the Bloch coordinates off a density operator.
pub fn bloch_from_density(rho: &DensityOperator) -> BlochVector {
    let m = rho.matrix();
    BlochVector::new(
        2.0 * m.m10.re,
        2.0 * m.m10.im,
        m.m00.re - m.m11.re,
    )
}

/// Eigenvalues of a Hermitian 2x2 matrix, descending.
///
/// The input must be Hermitian within `1e-10`; discriminants at or below
/// [`tol::EIG_DEGENERATE`] collapse to the degenerate pair `(tr/2, tr/2)`.
pub fn eig2(m: &Mat2) -> Result<Spectrum2> {
    let herm = m.hermiticity_residual();
    if herm > 1e-10 {
        return Err(Error::NotHermitian { residual: herm, tol: 1e-10 });
    }
    let t = m.trace().re;
    let d = m.det().re;
    let disc = t * t / 4.0 - d;
    if disc <= tol::EIG_DEGENERATE {
        return Ok(Spectrum2 { hi: t / 2.0, lo: t / 2.0 });
    }
    let s = disc.sqrt();
    Ok(Spectrum2 { hi: t / 2.0 + s, lo: t / 2.0 - s })
}

/// Eigen-decomposition of a Hermitian 2x2 matrix: `(spectrum, e_hi, e_lo)`
/// with orthonormal eigenvectors. Degenerate spectra get the standard basis.
pub(crate) fn eigh2(m: &Mat2) -> Result<(Spectrum2, [C64; 2], [C64; 2])> {
    let spec = eig2(m)?;
    if spec.hi - spec.lo <= 0.0 {
        return Ok((spec, [c64(1.0, 0.0), C64::ZERO], [C64::ZERO, c64(1.0, 0.0)]));
    }
    // (M − λ)v = 0 gives two candidate rows; pick the better conditioned.
    let cand1 = [m.m01, c64(spec.hi, 0.0) - m.m00];
    let cand2 = [c64(spec.hi, 0.0) - m.m11, m.m10];
    let v = if vec2_norm(cand1) >= vec2_norm(cand2) { cand1 } else { cand2 };
    let n = vec2_norm(v);
    if n == 0.0 {
        // hi == lo handled above; a zero candidate here means m is diagonal.
        return Ok((spec, [c64(1.0, 0.0), C64::ZERO], [C64::ZERO, c64(1.0, 0.0)]));
    }
    let e_hi = [v[0] / n, v[1] / n];
    let e_lo = [-e_hi[1].conj(), e_hi[0].conj()];
    Ok((spec, e_hi, e_lo))
}

/// Von Neumann entropy `S(ρ) = −Σ λ ln λ` in nats.
pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    entropy_of_spectrum(rho.spectrum())
}

/// Entropy of an eigenvalue pair, clamping rounding-scale negatives to zero.
pub(crate) fn entropy_of_spectrum(spec: Spectrum2) -> f64 {
    let term = |lambda: f64| -> f64 {
        let l = lambda.clamp(0.0, 1.0);
        if l <= 0.0 {
            0.0
        } else {
            -l * l.ln()
        }
    };
    term(spec.hi) + term(spec.lo)
}
