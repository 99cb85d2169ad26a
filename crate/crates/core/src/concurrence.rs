//! Concurrence of a state with respect to a length-two channel.
//!
//! Four routes to the same quantity, kept separate so they can certify each
//! other:
//!
//! - pure states: `C(π) = 2·√(det T(π))`;
//! - generic mixed states via θ: `C² = Tr(ρθρθ) − 2·det ρ·|det α|`, equal to
//!   the eigenvalue difference route (both are exposed);
//! - canonical-form channels: `C² = 4L₁² + 4L₂²` with two affine forms in
//!   the Bloch coordinates;
//! - the named channels' closed forms (phase damping, amplitude damping).
//!
//! Values below [`tol::CONCURRENCE_FLOOR`] are reported as exactly zero.

use crate::channel::ChannelSpec;
use crate::error::Error;
use crate::mat2::{C64, Mat2};
use crate::state::DensityOperator;
use crate::theta::{theta_from_kraus, AntilinearHermitian};
use crate::tol;
use crate::Result;

/// A computed concurrence: nonnegative, and at most `1 + 1e-9` for
/// trace-preserving channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceValue {
    value: f64,
}

impl ConcurrenceValue {
    /// Wraps a raw value, clamping rounding-scale negatives and flooring
    /// values below [`tol::CONCURRENCE_FLOOR`] to exactly zero.
    pub(crate) fn from_raw(value: f64) -> Self {
        debug_assert!(value > -1e-9, "concurrence must be nonnegative, got {value}");
        let v = value.max(0.0);
        Self { value: if v < tol::CONCURRENCE_FLOOR { 0.0 } else { v } }
    }

    pub fn value(&self) -> f64 {
        self.value
    }
}

/// Which route produced a concurrence (surfaced as CLI provenance).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConcurrenceMethod {
    NamedClosedForm,
    Canonical,
    Theta,
}

impl ConcurrenceMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::NamedClosedForm => "named-closed-form",
            Self::Canonical => "canonical",
            Self::Theta => "theta",
        }
    }
}

/// Concurrence of a pure state: `C = 2·√(det T(π))`.
///
/// Errors with [`Error::NotPure`] when `det π` exceeds [`tol::PURITY_DET`].
pub fn concurrence_pure(channel: &ChannelSpec, pi: &DensityOperator) -> Result<ConcurrenceValue> {
    let det = pi.det();
    if det > tol::PURITY_DET {
        return Err(Error::NotPure { det });
    }
    Ok(ConcurrenceValue::from_raw(pure_value(channel, &pi.matrix())))
}

/// Unchecked pure-state value on a projector matrix (roof-oracle hot path).
#[inline]
pub(crate) fn pure_value(channel: &ChannelSpec, pi_mat: &Mat2) -> f64 {
    let out = channel.apply_matrix(pi_mat);
    2.0 * out.det().re.max(0.0).sqrt()
}

/// Concurrence via the θ route:
/// `C = √(max(0, Tr(ρθρθ) − 2·det ρ·det √(θ²)))`.
pub fn concurrence_theta(theta: &AntilinearHermitian, rho: &DensityOperator) -> ConcurrenceValue {
    let m = rho.matrix();
    let tr = (m * theta.sandwich(&m)).trace().re;
    let c2 = tr - 2.0 * rho.det() * theta.abs_det();
    ConcurrenceValue::from_raw(c2.max(0.0).sqrt())
}

/// Concurrence via the spectral route: `max(0, λ₁ − λ₂)` where `λ_i` are
/// the square roots of the eigenvalues of `ρθρθ`. Agrees with
/// [`concurrence_theta`] to rounding; exposed as the independent dual path.
pub fn concurrence_theta_spectral(
    theta: &AntilinearHermitian,
    rho: &DensityOperator,
) -> ConcurrenceValue {
    let m = rho.matrix();
    let n = m * theta.sandwich(&m);
    // ρθρθ is similar to a positive semidefinite operator: real spectrum.
    let tr = n.trace().re;
    let det = n.det().re.max(0.0);
    let disc = (tr * tr / 4.0 - det).max(0.0);
    let mu_hi = (tr / 2.0 + disc.sqrt()).max(0.0);
    let mu_lo = (tr / 2.0 - disc.sqrt()).max(0.0);
    ConcurrenceValue::from_raw((mu_hi.sqrt() - mu_lo.sqrt()).max(0.0))
}

/// The two canonical-form products `P = b₁₀·a₀₀` and `Q = b₀₁·a₁₁`.
pub(crate) fn canonical_products(spec: &ChannelSpec) -> Result<(C64, C64)> {
    match *spec {
        ChannelSpec::Canonical { a00, a11, b01, b10 } => Ok((b10 * a00, b01 * a11)),
        _ => Err(Error::NotCanonical),
    }
}

/// Evaluates the canonical affine forms `(L₁, L₂)` at a state.
///
/// `L₁ = ρ₀₀·|P| − ρ₁₁·|Q|` and `L₂ = −2·Im(ρ₀₁·u)` where `u = √(P·conj(Q))`
/// with the branch pair chosen so the root product is `+|P·Q|`.
pub(crate) fn canonical_forms_at(p: C64, q: C64, rho: &Mat2) -> (f64, f64) {
    let l1 = rho.m00.re * p.norm() - rho.m11.re * q.norm();
    let u = (p * q.conj()).sqrt();
    let l2 = -2.0 * (rho.m01 * u).im;
    (l1, l2)
}

/// Concurrence for a canonical-form channel: `C = 2·√(L₁² + L₂²)`.
pub fn concurrence_canonical(
    spec: &ChannelSpec,
    rho: &DensityOperator,
) -> Result<ConcurrenceValue> {
    let (p, q) = canonical_products(spec)?;
    let (l1, l2) = canonical_forms_at(p, q, &rho.matrix());
    Ok(ConcurrenceValue::from_raw(2.0 * (l1 * l1 + l2 * l2).sqrt()))
}

/// Concurrence by the named channels' closed forms:
/// phase damping `√((1−|z|²)·(x₁² + x₂²))`, amplitude damping
/// `2·√(p(1−p))·ρ₁₁`. Other specs fall through to the generic θ route.
pub fn concurrence_named(spec: &ChannelSpec, rho: &DensityOperator) -> ConcurrenceValue {
    match *spec {
        ChannelSpec::PhaseDamping { z } => {
            let b = rho.bloch();
            let c = ((1.0 - z.norm_sqr()).max(0.0) * (b.x1 * b.x1 + b.x2 * b.x2)).sqrt();
            ConcurrenceValue::from_raw(c)
        }
        ChannelSpec::AmplitudeDamping { p } => {
            let c = 2.0 * (p * (1.0 - p)).max(0.0).sqrt() * rho.matrix().m11.re;
            ConcurrenceValue::from_raw(c)
        }
        _ => {
            let (a, b) = spec.raw_matrices();
            concurrence_theta(&theta_from_kraus(&a, &b), rho)
        }
    }
}

/// Concurrence through the preferred route for the spec kind, with the
/// route reported: named closed forms for the one-parameter families, the
/// canonical quadratic form for canonical specs, θ otherwise.
pub fn concurrence(
    spec: &ChannelSpec,
    rho: &DensityOperator,
) -> (ConcurrenceValue, ConcurrenceMethod) {
    match spec {
        ChannelSpec::PhaseDamping { .. } | ChannelSpec::AmplitudeDamping { .. } => {
            (concurrence_named(spec, rho), ConcurrenceMethod::NamedClosedForm)
        }
        ChannelSpec::Canonical { .. } => (
            concurrence_canonical(spec, rho).expect("canonical spec"),
            ConcurrenceMethod::Canonical,
        ),
        ChannelSpec::Kraus(pair) => {
            let theta = theta_from_kraus(&pair.a(), &pair.b());
            (concurrence_theta(&theta, rho), ConcurrenceMethod::Theta)
        }
    }
}
