//! The binary-entropy family `h`, `h₁`, `h₂` (natural log).
//!
//! `h₂` maps a concurrence to an entanglement value: for a pure two-qubit
//! state with concurrence C the reduced entropy is `h((1 + √(1−C²))/2)`.
//! All three accept inputs up to `1e-12` outside their closed domain and
//! clamp; anything further out is a domain error.

use crate::error::Error;
use crate::Result;

const DOMAIN_SLACK: f64 = 1e-12;

fn clamp_into(x: f64, lo: f64, hi: f64, name: &str) -> Result<f64> {
    if !x.is_finite() || x < lo - DOMAIN_SLACK || x > hi + DOMAIN_SLACK {
        return Err(Error::Domain(format!("{name}({x}) outside [{lo}, {hi}]")));
    }
    Ok(x.clamp(lo, hi))
}

/// Binary entropy `h(x) = −x ln x − (1−x) ln(1−x)` in nats, `h(0)=h(1)=0`.
pub fn h(x: f64) -> Result<f64> {
    let x = clamp_into(x, 0.0, 1.0, "h")?;
    Ok(h_unchecked(x))
}

#[inline]
pub(crate) fn h_unchecked(x: f64) -> f64 {
    let term = |y: f64| if y <= 0.0 { 0.0 } else { -y * y.ln() };
    term(x) + term(1.0 - x)
}

/// `h₁(x) = h((1+x)/2)` for `x ∈ [−1, 1]`.
pub fn h1(x: f64) -> Result<f64> {
    let x = clamp_into(x, -1.0, 1.0, "h1")?;
    Ok(h_unchecked((1.0 + x) / 2.0))
}

/// `h₂(x) = h₁(√(1−x²))` for `x ∈ [−1, 1]`; nondecreasing and convex on
/// `[0, 1]` with `h₂(0) = 0` and `h₂(1) = ln 2`.
pub fn h2(x: f64) -> Result<f64> {
    let x = clamp_into(x, -1.0, 1.0, "h2")?;
    Ok(h2_unchecked(x))
}

#[inline]
pub(crate) fn h2_unchecked(x: f64) -> f64 {
    let y = (1.0 - x * x).max(0.0).sqrt();
    h_unchecked((1.0 + y) / 2.0)
}

/// Converts an entropy-like quantity from nats to bits.
pub fn nats_to_bits(x: f64) -> f64 {
    x / std::f64::consts::LN_2
}
