//! The anti-linear Hermitian operator θ attached to a Kraus pair.
//!
//! For `T(X) = AXA† + BXB†` the operator `θ_{A,B} v = α · conj(v)` (with a
//! symmetric matrix α) encodes everything entanglement-related about the
//! channel: `4·det T(|a⟩⟨a|) = |⟨a|θ|a⟩|²` for every unit vector `a`, which
//! turns concurrence computations into expectation values of θ.
//!
//! Two independent constructions are provided (the closed-form entries and
//! the spin-flip composition) plus the two covariance laws used to certify
//! them: module changes `(A,B) → μ·(A,B)` rescale θ by `conj(det μ)`, and
//! conjugations `(A,B) → (C₁AC₂, C₁BC₂)` act by `conj(det C₁)·C₂†·θ·C₂`.

use crate::error::Error;
use crate::mat2::{c64, vec2_norm, C64, Mat2};
use crate::Result;

/// An anti-linear Hermitian operator `v ↦ α·conj(v)` with symmetric α.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntilinearHermitian {
    alpha: Mat2,
}

impl AntilinearHermitian {
    /// Validates symmetry of α (anti-linear Hermiticity) to `1e-14` relative
    /// to the matrix scale.
    pub fn from_alpha(alpha: Mat2) -> Result<Self> {
        let scale = alpha.norm_max().max(1.0);
        let resid = alpha.symmetry_residual();
        if resid > 1e-14 * scale {
            return Err(Error::NotSymmetric { residual: resid });
        }
        // Store exactly symmetric entries.
        let off = (alpha.m01 + alpha.m10) * 0.5;
        Ok(Self { alpha: Mat2::new(alpha.m00, off, off, alpha.m11) })
    }

    /// Internal constructor for exactly symmetric matrices.
    pub(crate) fn from_symmetric(m00: C64, off: C64, m11: C64) -> Self {
        Self { alpha: Mat2::new(m00, off, off, m11) }
    }

    /// The symmetric matrix α.
    pub fn alpha(&self) -> Mat2 {
        self.alpha
    }

    /// Applies the operator: `θv = α·conj(v)`.
    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        self.alpha.apply([v[0].conj(), v[1].conj()])
    }

    /// The symmetric pairing `⟨a|θ|b⟩ = conj(a)ᵀ·α·conj(b)`.
    pub fn pairing(&self, a: [C64; 2], b: [C64; 2]) -> C64 {
        let tb = self.apply(b);
        a[0].conj() * tb[0] + a[1].conj() * tb[1]
    }

    /// Matrix of the linear operator `θρθ`, namely `α·conj(ρ)·conj(α)`.
    pub fn sandwich(&self, rho: &Mat2) -> Mat2 {
        self.alpha * rho.conj() * self.alpha.conj()
    }

    /// Matrix of the positive linear operator `θ²= α·conj(α)`.
    pub fn squared(&self) -> Mat2 {
        self.alpha * self.alpha.conj()
    }

    /// `|det α|`, which equals `det √(θ²)`.
    pub fn abs_det(&self) -> f64 {
        self.alpha.det().norm()
    }

    /// Rescales the operator (anti-linearity: θ ↦ s·θ has matrix s·α).
    pub fn scale(&self, s: C64) -> Self {
        Self { alpha: self.alpha.scale(s) }
    }

    /// Largest |entry| difference between two operators' matrices.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.alpha.max_abs_diff(&other.alpha)
    }
}

/// The spin-flip matrix: `θ_f v = (conj(v₁), −conj(v₀))` has matrix
/// `[[0, 1], [−1, 0]]` (anti-unitary but not Hermitian; α is not symmetric).
pub fn spin_flip_matrix() -> Mat2 {
    Mat2::new(C64::ZERO, c64(1.0, 0.0), c64(-1.0, 0.0), C64::ZERO)
}

/// θ for the phase-damping channel: `α = √(1−|z|²)·antidiag(1, 1)`.
pub fn theta_phase_damping(z: C64) -> AntilinearHermitian {
    let w = (1.0 - z.norm_sqr()).max(0.0).sqrt();
    AntilinearHermitian::from_symmetric(C64::ZERO, c64(w, 0.0), C64::ZERO)
}

/// Builds `θ_{A,B}` from closed-form matrix entries.
pub fn theta_from_kraus(a: &Mat2, b: &Mat2) -> AntilinearHermitian {
    let a00 = (b.m10 * a.m00 - a.m10 * b.m00).conj() * 2.0;
    let a11 = (a.m01 * b.m11 - b.m01 * a.m11).conj() * 2.0;
    let off = (a.m00 * b.m11 - a.m11 * b.m00 + a.m01 * b.m10 - a.m10 * b.m01).conj();
    AntilinearHermitian::from_symmetric(a00, off, a11)
}

/// Builds `θ_{A,B}` as the spin-flip composition `A†θ_f B − B†θ_f A`.
///
/// As anti-linear operators, `X θ_f Y` has matrix `X·Θf·conj(Y)` with
/// `Θf = [[0,1],[−1,0]]`; this is the independent dual route to
/// [`theta_from_kraus`].
pub fn theta_spinflip_form(a: &Mat2, b: &Mat2) -> Result<AntilinearHermitian> {
    let tf = spin_flip_matrix();
    let m = a.dagger() * tf * b.conj() - b.dagger() * tf * a.conj();
    AntilinearHermitian::from_alpha(m)
}

/// Covariance under a module change `A' = μ₀₀A + μ₀₁B`, `B' = μ₁₀A + μ₁₁B`:
/// `θ' = conj(det μ)·θ`.
pub fn theta_module_change(theta: &AntilinearHermitian, mu: &Mat2) -> AntilinearHermitian {
    theta.scale(mu.det().conj())
}

/// Covariance under `(A, B) → (C₁AC₂, C₁BC₂)`:
/// `α' = conj(det C₁)·C₂†·α·conj(C₂)`.
pub fn theta_conjugate_transform(
    theta: &AntilinearHermitian,
    c1: &Mat2,
    c2: &Mat2,
) -> Result<AntilinearHermitian> {
    let m = (c2.dagger() * theta.alpha() * c2.conj()).scale(c1.det().conj());
    AntilinearHermitian::from_alpha(m)
}

/// Expectation `⟨a|θ|a⟩` for a unit vector (norm checked to `1e-10`).
pub fn pure_expectation(theta: &AntilinearHermitian, a: [C64; 2]) -> Result<C64> {
    let n = vec2_norm(a);
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm: n });
    }
    Ok(theta.pairing(a, a))
}

/// Residual of the two-copy identity
/// `(A⊗B − B⊗A)|aa⟩ = ½·conj(⟨a|θ_{A,B}|a⟩)·(|01⟩ − |10⟩)`,
/// as the Euclidean norm of the difference. The input vector is normalized
/// defensively; zero vectors yield a zero residual (both sides vanish).
pub fn antisymmetric_identity_residual(a: &Mat2, b: &Mat2, v: [C64; 2]) -> f64 {
    let n = vec2_norm(v);
    if n <= 0.0 || !n.is_finite() {
        return 0.0;
    }
    let v = [v[0] / n, v[1] / n];
    let av = a.apply(v);
    let bv = b.apply(v);
    let kron = |u: [C64; 2], w: [C64; 2]| [u[0] * w[0], u[0] * w[1], u[1] * w[0], u[1] * w[1]];
    let lhs_a = kron(av, bv);
    let lhs_b = kron(bv, av);
    let theta = theta_from_kraus(a, b);
    let coeff = theta.pairing(v, v).conj() * 0.5;
    let rhs = [C64::ZERO, coeff, -coeff, C64::ZERO];
    let mut sq = 0.0;
    for i in 0..4 {
        sq += (lhs_a[i] - lhs_b[i] - rhs[i]).norm_sqr();
    }
    sq.sqrt()
}
