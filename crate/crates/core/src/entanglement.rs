//! Entanglement and exchange-entropy figures of a channel/state pair, and
//! the one-shot classical capacity they induce.
//!
//! For a trace-preserving Kraus pair the entanglement of the evolution on a
//! state ρ is `E = h₂(C)` with `C` the concurrence, the exchange entropy is
//! `H = S(T(ρ)) − E`, and the one-shot capacity is the maximum of `H` over
//! input states. For amplitude damping the maximum lives on the diagonal
//! slice, giving a one-dimensional profile that is searched directly; a
//! generic multi-start search over the Bloch ball cross-checks it.

use crate::channel::ChannelSpec;
use crate::concurrence::concurrence;
use crate::entropy::{h2_unchecked, h_unchecked};
use crate::error::Error;
use crate::state::{density_from_bloch, entropy_of_spectrum, BlochVector, DensityOperator};
use crate::Result;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Entanglement `E(T; ρ) = h₂(C(T; ρ))` of the evolution, in nats.
///
/// Requires a trace-preserving channel; the concurrence is clamped to
/// `[0, 1]` before the entropy map to absorb closed-form rounding.
pub fn entanglement_e(spec: &ChannelSpec, rho: &DensityOperator) -> Result<f64> {
    if !spec.is_trace_preserving() {
        return Err(Error::NotTracePreserving {
            residual: spec.kraus()?.trace_preservation_residual(),
        });
    }
    let (c, _) = concurrence(spec, rho);
    Ok(h2_unchecked(c.value().clamp(0.0, 1.0)))
}

/// Exchange entropy `H(T; ρ) = S(T(ρ)) − E(T; ρ)`, in nats.
///
/// Equals the entropy left in the environment after the optimal
/// entanglement is discounted; it is what the one-shot capacity maximizes.
pub fn entropy_h(spec: &ChannelSpec, rho: &DensityOperator) -> Result<f64> {
    let e = entanglement_e(spec, rho)?;
    Ok(spec.output_entropy(&rho.matrix()) - e)
}

/// Result of a capacity optimization.
#[derive(Debug, Clone)]
pub struct CapacityResult {
    /// Maximum of `H` over input states, in nats.
    pub capacity: f64,
    /// Excited-state population `ρ₁₁` of the maximizer (diagonal searches);
    /// for general searches, the Bloch norm of the maximizer.
    pub maximizer_r: f64,
    /// The maximizing input state.
    pub maximizer: DensityOperator,
    /// Whether the search met its tolerance before hitting iteration caps.
    pub converged: bool,
}

/// Diagonal-slice capacity profile of amplitude damping:
/// `f(r) = h(p·r) − h₂(2√(p(1−p))·r)` at `ρ = diag(1−r, r)`.
pub(crate) fn ad_profile(p: f64, r: f64) -> f64 {
    let s = (1.0 - 4.0 * p * (1.0 - p) * r * r).max(0.0).sqrt();
    h_unchecked(p * r) - h_unchecked(0.5 * (1.0 - s))
}

/// One-shot capacity of amplitude damping with excited-state survival `p`,
/// by ternary search of the concave diagonal profile.
///
/// Requires `0 < p ≤ 1` and `tol ≥ 1e-12` (bracket width at termination).
/// At `p = 1` the channel is noiseless and the capacity is `ln 2` at
/// `r₀ = 1/2`.
pub fn capacity_amplitude_damping(p: f64, tol: f64) -> Result<CapacityResult> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::ParameterOutOfRange(format!(
            "amplitude damping requires 0 < p <= 1, got {p}"
        )));
    }
    if !(tol >= 1e-12) {
        return Err(Error::ParameterOutOfRange(format!(
            "tolerance {tol} below the floor of 1e-12"
        )));
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut iterations = 0usize;
    while hi - lo > tol && iterations < 400 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if ad_profile(p, m1) < ad_profile(p, m2) {
            lo = m1;
        } else {
            hi = m2;
        }
        iterations += 1;
    }
    let r0 = 0.5 * (lo + hi);
    let rho = density_from_bloch(BlochVector::new(0.0, 0.0, 1.0 - 2.0 * r0))?;
    Ok(CapacityResult {
        capacity: ad_profile(p, r0),
        maximizer_r: r0,
        maximizer: rho,
        converged: hi - lo <= tol,
    })
}

/// Options for the generic capacity search.
#[derive(Debug, Clone, Copy)]
pub struct CapacityOptions {
    /// Step size at which coordinate descent stops (positional tolerance).
    pub tol: f64,
    /// Seed for the random starts.
    pub seed: u64,
    /// Number of descent starts (first ones come from a fixed grid).
    pub starts: usize,
    /// Objective-evaluation budget across all starts.
    pub budget: usize,
}

impl Default for CapacityOptions {
    fn default() -> Self {
        Self { tol: 1e-7, seed: 11, starts: 8, budget: 60_000 }
    }
}

/// One-shot capacity of an arbitrary trace-preserving channel by multi-start
/// coordinate ascent of `H` over the Bloch ball.
///
/// Amplitude damping restricts the search to the diagonal slice where its
/// maximizer provably lives; every other channel spec is searched over all
/// three Bloch coordinates. This routine deliberately drives the generic
/// concurrence/entropy pipeline so it can cross-check the closed-form
/// profile of [`capacity_amplitude_damping`].
pub fn capacity_numeric(spec: &ChannelSpec, opts: &CapacityOptions) -> Result<CapacityResult> {
    if !spec.is_trace_preserving() {
        return Err(Error::NotTracePreserving {
            residual: spec.kraus()?.trace_preservation_residual(),
        });
    }
    if !(opts.tol >= 1e-12) {
        return Err(Error::ParameterOutOfRange(format!(
            "tolerance {} below the floor of 1e-12",
            opts.tol
        )));
    }
    if opts.starts == 0 || opts.budget < 1000 {
        return Err(Error::ParameterOutOfRange(
            "capacity search needs at least one start and a budget of 1000".into(),
        ));
    }
    let objective = |x: &[f64; 3]| -> f64 {
        let rho = density_from_bloch(BlochVector::new(x[0], x[1], x[2]))
            .expect("search stays inside the ball");
        let out = spec.apply_matrix(&rho.matrix());
        let s = entropy_of_spectrum(crate::state::eig2(&out).expect("channel output"));
        let (c, _) = concurrence(spec, &rho);
        s - h2_unchecked(c.value().clamp(0.0, 1.0))
    };
    let diagonal_only = matches!(spec, ChannelSpec::AmplitudeDamping { .. });

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut evals = 0usize;
    let mut best_x = [0.0_f64; 3];
    let mut best_v = f64::NEG_INFINITY;
    let mut converged = false;
    let grid: &[[f64; 3]] = if diagonal_only {
        &[[0.0, 0.0, 0.6], [0.0, 0.0, 0.0], [0.0, 0.0, -0.6]]
    } else {
        &[[0.0, 0.0, 0.0], [0.0, 0.0, 0.5], [0.5, 0.0, 0.0], [0.0, 0.5, 0.0]]
    };

    for start in 0..opts.starts {
        let mut x = if start < grid.len() {
            grid[start]
        } else {
            // Uniform point in the ball via direction × radius^(1/3) scaling.
            let mut v;
            loop {
                v = [
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                ];
                let n2: f64 = v.iter().map(|t| t * t).sum();
                if n2 <= 1.0 && n2 > 1e-12 {
                    break;
                }
            }
            if diagonal_only {
                [0.0, 0.0, v[2]]
            } else {
                v
            }
        };
        let coords: &[usize] = if diagonal_only { &[2] } else { &[0, 1, 2] };

        if evals >= opts.budget {
            break;
        }
        evals += 1;
        let mut fx = objective(&x);
        let mut step = 0.5_f64;
        let mut truncated = false;
        'descent: while step >= opts.tol {
            let mut improved = false;
            for &i in coords {
                for delta in [step, -step] {
                    let mut cand = x;
                    cand[i] += delta;
                    let n2: f64 = cand.iter().map(|t| t * t).sum();
                    if n2 > 1.0 {
                        let scale = (1.0 - 1e-12) / n2.sqrt();
                        for t in &mut cand {
                            *t *= scale;
                        }
                    }
                    if evals >= opts.budget {
                        truncated = true;
                        break 'descent;
                    }
                    evals += 1;
                    let fc = objective(&cand);
                    if fc > fx {
                        fx = fc;
                        x = cand;
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        if fx > best_v {
            best_v = fx;
            best_x = x;
            converged = !truncated;
        }
    }

    let bloch = BlochVector::new(best_x[0], best_x[1], best_x[2]);
    let maximizer = density_from_bloch(bloch)?;
    let maximizer_r = if diagonal_only {
        0.5 * (1.0 - best_x[2])
    } else {
        bloch.norm()
    };
    Ok(CapacityResult { capacity: best_v, maximizer_r, maximizer, converged })
}
