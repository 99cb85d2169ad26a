//! Exact 2x2 complex matrix algebra.
//!
//! Everything downstream (channels, θ operators, concurrence, foliations)
//! works in dimension two, so a dedicated value type with closed-form
//! determinant, trace, and adjoint keeps the numerics transparent. Row-major
//! entry order: `m00, m01, m10, m11`.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Shorthand constructor for a complex scalar.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A 2x2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub m00: C64,
    pub m01: C64,
    pub m10: C64,
    pub m11: C64,
}

impl Mat2 {
    /// Builds a matrix from row-major entries.
    #[inline]
    pub const fn new(m00: C64, m01: C64, m10: C64, m11: C64) -> Self {
        Self { m00, m01, m10, m11 }
    }

    /// The zero matrix.
    pub const ZERO: Mat2 = Mat2::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0));

    /// The identity matrix.
    pub const IDENTITY: Mat2 = Mat2::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0));

    /// Pauli σ₁.
    pub const SIGMA_X: Mat2 = Mat2::new(C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0));

    /// Pauli σ₂.
    pub const SIGMA_Y: Mat2 = Mat2::new(C64::new(0.0, 0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0));

    /// Pauli σ₃.
    pub const SIGMA_Z: Mat2 = Mat2::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(-1.0, 0.0));

    /// Diagonal matrix `diag(d0, d1)`.
    #[inline]
    pub fn diag(d0: C64, d1: C64) -> Self {
        Self::new(d0, C64::ZERO, C64::ZERO, d1)
    }

    /// Anti-diagonal matrix with `m01 = u` and `m10 = l`.
    #[inline]
    pub fn antidiag(u: C64, l: C64) -> Self {
        Self::new(C64::ZERO, u, l, C64::ZERO)
    }

    /// Matrix trace.
    #[inline]
    pub fn trace(&self) -> C64 {
        self.m00 + self.m11
    }

    /// Matrix determinant.
    #[inline]
    pub fn det(&self) -> C64 {
        self.m00 * self.m11 - self.m01 * self.m10
    }

    /// Transpose.
    #[inline]
    pub fn transpose(&self) -> Self {
        Self::new(self.m00, self.m10, self.m01, self.m11)
    }

    /// Entry-wise complex conjugate.
    #[inline]
    pub fn conj(&self) -> Self {
        Self::new(self.m00.conj(), self.m01.conj(), self.m10.conj(), self.m11.conj())
    }

    /// Conjugate transpose.
    #[inline]
    pub fn dagger(&self) -> Self {
        Self::new(self.m00.conj(), self.m10.conj(), self.m01.conj(), self.m11.conj())
    }

    /// Scalar multiple.
    #[inline]
    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.m00 * s, self.m01 * s, self.m10 * s, self.m11 * s)
    }

    /// Matrix-vector product.
    #[inline]
    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        [self.m00 * v[0] + self.m01 * v[1], self.m10 * v[0] + self.m11 * v[1]]
    }

    /// Largest entry magnitude.
    pub fn norm_max(&self) -> f64 {
        self.m00
            .norm()
            .max(self.m01.norm())
            .max(self.m10.norm())
            .max(self.m11.norm())
    }

    /// Frobenius norm.
    pub fn norm_fro(&self) -> f64 {
        (self.m00.norm_sqr() + self.m01.norm_sqr() + self.m10.norm_sqr() + self.m11.norm_sqr())
            .sqrt()
    }

    /// Hilbert-Schmidt inner product `Tr(self† other)`.
    pub fn hs_dot(&self, other: &Mat2) -> C64 {
        self.m00.conj() * other.m00
            + self.m01.conj() * other.m01
            + self.m10.conj() * other.m10
            + self.m11.conj() * other.m11
    }

    /// Largest entry magnitude of `self − other`.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        (*self - *other).norm_max()
    }

    /// Deviation from Hermiticity, as the largest entry magnitude of `M − M†`.
    pub fn hermiticity_residual(&self) -> f64 {
        self.max_abs_diff(&self.dagger())
    }

    /// Deviation of `m01` from `m10` (symmetry of the matrix, not Hermiticity).
    pub fn symmetry_residual(&self) -> f64 {
        (self.m01 - self.m10).norm()
    }

    /// True when every entry is finite.
    pub fn is_finite(&self) -> bool {
        [self.m00, self.m01, self.m10, self.m11]
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    #[inline]
    fn add(self, rhs: Mat2) -> Mat2 {
        Mat2::new(self.m00 + rhs.m00, self.m01 + rhs.m01, self.m10 + rhs.m10, self.m11 + rhs.m11)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    #[inline]
    fn sub(self, rhs: Mat2) -> Mat2 {
        Mat2::new(self.m00 - rhs.m00, self.m01 - rhs.m01, self.m10 - rhs.m10, self.m11 - rhs.m11)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    #[inline]
    fn mul(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.m00 * rhs.m00 + self.m01 * rhs.m10,
            self.m00 * rhs.m01 + self.m01 * rhs.m11,
            self.m10 * rhs.m00 + self.m11 * rhs.m10,
            self.m10 * rhs.m01 + self.m11 * rhs.m11,
        )
    }
}

impl Mul<C64> for Mat2 {
    type Output = Mat2;
    #[inline]
    fn mul(self, s: C64) -> Mat2 {
        self.scale(s)
    }
}

impl Mul<f64> for Mat2 {
    type Output = Mat2;
    #[inline]
    fn mul(self, s: f64) -> Mat2 {
        self.scale(C64::new(s, 0.0))
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    #[inline]
    fn neg(self) -> Mat2 {
        self.scale(C64::new(-1.0, 0.0))
    }
}

/// Inner product `⟨a|b⟩ = Σ conj(a_i) b_i`.
#[inline]
pub fn vec2_dot(a: [C64; 2], b: [C64; 2]) -> C64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

/// Euclidean norm of a 2-vector.
#[inline]
pub fn vec2_norm(v: [C64; 2]) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()
}

/// Normalizes a 2-vector; returns `None` for the zero vector.
pub fn vec2_normalize(v: [C64; 2]) -> Option<[C64; 2]> {
    let n = vec2_norm(v);
    if n <= 0.0 || !n.is_finite() {
        None
    } else {
        Some([v[0] / n, v[1] / n])
    }
}

/// Outer product `|a⟩⟨b|`.
#[inline]
pub fn vec2_outer(a: [C64; 2], b: [C64; 2]) -> Mat2 {
    Mat2::new(
        a[0] * b[0].conj(),
        a[0] * b[1].conj(),
        a[1] * b[0].conj(),
        a[1] * b[1].conj(),
    )
}
