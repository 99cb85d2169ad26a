//! Brute-force convex/concave roof oracle.
//!
//! The roof of a function `g` over pure decompositions of ρ,
//! `min / max Σ w_j g(π_j)` with `Σ w_j π_j = ρ`, is the ground truth every
//! closed form in this crate is certified against. Decompositions are
//! parametrized by m×2 isometric mixers applied to the eigendecomposition
//! (`|ψ_j⟩ = Σ_k mixer_jk √λ_k |e_k⟩`), with lengths m ∈ {2, 3, 4} covering
//! the Caratheodory bound in dimension two. The optimizer is a seeded
//! multi-start coordinate descent over elementary rotation angles: slow but
//! simple, derivative-free, and fully deterministic for a given seed.

use crate::error::Error;
use crate::mat2::{c64, C64, Mat2};
use crate::state::{eigh2, DensityOperator};
use crate::tol;
use crate::Result;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// A pure decomposition `{(w_j, π_j)}` of a target state.
///
/// Lengths 2..=4 arise from mixers (Caratheodory bound `d² = 4`); length 1
/// is the trivial decomposition of a pure target. Weights are positive and
/// sum to one; the weighted average reproduces the target within `1e-8`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureDecomposition {
    members: Vec<(f64, DensityOperator)>,
}

impl PureDecomposition {
    /// Validates a decomposition against its target state.
    pub fn new(members: Vec<(f64, DensityOperator)>, target: &DensityOperator) -> Result<Self> {
        if members.is_empty() || members.len() > 4 {
            return Err(Error::InvalidEnsemble(format!(
                "decomposition length {} outside 1..=4",
                members.len()
            )));
        }
        let mut sum = 0.0;
        for &(w, ref pi) in &members {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidEnsemble(format!("weight {w} is not positive")));
            }
            if pi.det() > tol::PURITY_DET {
                return Err(Error::NotPure { det: pi.det() });
            }
            sum += w;
        }
        if (sum - 1.0).abs() > tol::STRUCTURAL {
            return Err(Error::InvalidEnsemble(format!("weights sum to {sum}")));
        }
        let d = Self { members };
        let resid = d.average_residual(target);
        if resid > 1e-8 {
            return Err(Error::InvalidEnsemble(format!(
                "average misses the target by {resid}"
            )));
        }
        Ok(d)
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

    /// Largest entry deviation of `Σ w_j π_j` from the target.
    pub fn average_residual(&self, target: &DensityOperator) -> f64 {
        let mut acc = Mat2::ZERO;
        for (w, pi) in &self.members {
            acc = acc + pi.matrix() * *w;
        }
        acc.max_abs_diff(&target.matrix())
    }

    /// Weighted value `Σ w_j g(π_j)`.
    pub fn value_of(&self, g: &dyn Fn(&DensityOperator) -> f64) -> f64 {
        self.members.iter().map(|(w, pi)| w * g(pi)).sum()
    }
}

/// Result of a roof optimization.
#[derive(Debug, Clone)]
pub struct RoofResult {
    /// The roof value `Σ w_j g(π_j)` of the returned decomposition.
    pub value: f64,
    /// The optimizing decomposition.
    pub decomposition: PureDecomposition,
    /// `g` evaluated at each member, aligned with the decomposition.
    pub member_values: Vec<f64>,
    /// False when the winning search was cut off by the evaluation budget.
    pub converged: bool,
}

/// Spread of member values around the roof value; zero for an exactly flat
/// optimal decomposition.
pub fn flatness_residual(result: &RoofResult) -> f64 {
    result
        .member_values
        .iter()
        .map(|v| (v - result.value).abs())
        .fold(0.0, f64::max)
}

/// Options for the roof search.
#[derive(Debug, Clone, Copy)]
pub struct RoofOptions {
    /// Total objective-evaluation budget (minimum the default of 20 000),
    /// shared by the value search across all starts; whatever the starts
    /// leave unused drives the flatness polish of the winning decomposition.
    pub budget: usize,
    /// Seed for the deterministic start generator.
    pub seed: u64,
}

impl Default for RoofOptions {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET, seed: 7 }
    }
}

/// Default (and minimum) evaluation budget.
pub const DEFAULT_BUDGET: usize = 20_000;

/// Starts per mixer length m = 2, 3, 4 (20 in total). Length-2 mixers get
/// the most starts: they already cover every two-member decomposition, and
/// the flat optimal decompositions live there.
const STARTS_PER_LENGTH: [usize; 3] = [10, 5, 5];
const LENGTHS: [usize; 3] = [2, 3, 4];
const STEP_INIT: f64 = std::f64::consts::FRAC_PI_4;
const STEP_MIN: f64 = 1e-8;
/// Candidates within this of the best value compete on flatness: a flat
/// optimal decomposition always exists for these roofs, so among
/// value-equivalent candidates the flattest is the sharpest certificate.
const VALUE_SLACK: f64 = 1e-7;
/// Quadratic penalty weight tying the flatness polish to the best value: a
/// hard wall at the value slack would leave a corridor too thin to descend
/// in, so the polish pays `VALUE_PENALTY · excess²` for rising above the
/// best value. Flattening pays off at most a few units of squared spread,
/// so the worthwhile rise stays below ~2e-5 — inside every tolerance.
const VALUE_PENALTY: f64 = 1e10;
/// Polished decompositions that rose more than this above the best value
/// are rejected outright; well inside every value tolerance.
const POLISH_DRIFT: f64 = 3e-5;
/// A polished spread at or below this certifies flatness far beyond the
/// reporting tolerance; the polish stops spending budget once reached.
const POLISH_FLAT_TARGET: f64 = 1e-7;
/// Minimum evaluation slice granted to each polish descent, so a stubborn
/// early seed cannot starve the rest of the queue.
const POLISH_SLICE_MIN: usize = 1_500;
/// Jittered restart rounds for the polish while budget remains.
const POLISH_RESTARTS: usize = 8;

/// Builds the decomposition induced by an isometric m×2 mixer applied to
/// the eigendecomposition of ρ. Columns must be orthonormal within `1e-10`;
/// members with weight below `1e-12` are dropped and the surviving weights
/// renormalized.
pub fn decomposition_from_mixer(
    rho: &DensityOperator,
    mixer: &[[C64; 2]],
) -> Result<PureDecomposition> {
    let m = mixer.len();
    if !(2..=4).contains(&m) {
        return Err(Error::InvalidEnsemble(format!("mixer length {m} outside 2..=4")));
    }
    // Column orthonormality.
    let mut gram = [[C64::ZERO; 2]; 2];
    for row in mixer {
        for k in 0..2 {
            for l in 0..2 {
                gram[k][l] += row[k].conj() * row[l];
            }
        }
    }
    let mut resid: f64 = 0.0;
    for k in 0..2 {
        for l in 0..2 {
            let expected = if k == l { c64(1.0, 0.0) } else { C64::ZERO };
            resid = resid.max((gram[k][l] - expected).norm());
        }
    }
    if resid > 1e-10 {
        return Err(Error::NotIsometric { residual: resid });
    }

    let kernel = MixKernel::new(rho)?;
    let mut members = Vec::with_capacity(m);
    for row in mixer {
        if let Some((w, pi)) = kernel.member(*row)? {
            members.push((w, pi));
        }
    }
    // Dropped rows and mixer rounding leave the sum a few ulps shy of one;
    // renormalizing keeps the structural weight check exact while moving the
    // average by far less than its own tolerance.
    let total: f64 = members.iter().map(|&(w, _)| w).sum();
    if total > 0.0 {
        for member in &mut members {
            member.0 /= total;
        }
    }
    PureDecomposition::new(members, rho)
}

/// Scaled eigenbasis of the target: `f_k = √λ_k e_k`.
struct MixKernel {
    f0: [C64; 2],
    f1: [C64; 2],
}

impl MixKernel {
    fn new(rho: &DensityOperator) -> Result<Self> {
        let (spec, e_hi, e_lo) = eigh2(&rho.matrix())?;
        let s0 = spec.hi.max(0.0).sqrt();
        let s1 = spec.lo.max(0.0).sqrt();
        Ok(Self {
            f0: [e_hi[0] * s0, e_hi[1] * s0],
            f1: [e_lo[0] * s1, e_lo[1] * s1],
        })
    }

    /// Weight and projector for one mixer row; `None` when the weight is
    /// below the drop threshold of `1e-12`.
    fn member(&self, row: [C64; 2]) -> Result<Option<(f64, DensityOperator)>> {
        let psi = [
            row[0] * self.f0[0] + row[1] * self.f1[0],
            row[0] * self.f0[1] + row[1] * self.f1[1],
        ];
        let w = psi[0].norm_sqr() + psi[1].norm_sqr();
        if w < 1e-12 {
            return Ok(None);
        }
        Ok(Some((w, DensityOperator::from_pure_unnormalized(psi)?)))
    }

    /// Weighted objective value of the decomposition induced by a mixer,
    /// without constructing the validated decomposition (hot path).
    fn value(&self, mixer: &[[C64; 2]], g: &dyn Fn(&DensityOperator) -> f64) -> f64 {
        let mut acc = 0.0;
        for row in mixer {
            let psi = [
                row[0] * self.f0[0] + row[1] * self.f1[0],
                row[0] * self.f0[1] + row[1] * self.f1[1],
            ];
            let w = psi[0].norm_sqr() + psi[1].norm_sqr();
            if w < 1e-12 {
                continue;
            }
            let n = w.sqrt();
            let pi = DensityOperator::from_pure_unnormalized([psi[0] / n, psi[1] / n])
                .expect("nonzero vector");
            acc += w * g(&pi);
        }
        acc
    }

    /// Objective value, unweighted spread `max_j |g(π_j) − value|`, and the
    /// smooth companion `Σ_j (g(π_j) − value)²` of the induced decomposition
    /// — the hot path of the flatness polish, which descends the sum of
    /// squares (differentiable where the max has kinks) and reports the max.
    fn member_stats(
        &self,
        mixer: &[[C64; 2]],
        g: &dyn Fn(&DensityOperator) -> f64,
    ) -> (f64, f64, f64) {
        let mut vals = [0.0_f64; 4];
        let mut count = 0usize;
        let mut acc = 0.0;
        for row in mixer {
            let psi = [
                row[0] * self.f0[0] + row[1] * self.f1[0],
                row[0] * self.f0[1] + row[1] * self.f1[1],
            ];
            let w = psi[0].norm_sqr() + psi[1].norm_sqr();
            if w < 1e-12 {
                continue;
            }
            let n = w.sqrt();
            let pi = DensityOperator::from_pure_unnormalized([psi[0] / n, psi[1] / n])
                .expect("nonzero vector");
            let v = g(&pi);
            acc += w * v;
            vals[count] = v;
            count += 1;
        }
        let mut spread = 0.0_f64;
        let mut sqdev = 0.0_f64;
        for v in &vals[..count] {
            let d = (v - acc).abs();
            spread = spread.max(d);
            sqdev += d * d;
        }
        (acc, spread, sqdev)
    }
}

/// Row pairs touched by the elementary rotations, per mixer length.
fn rotation_pairs(m: usize) -> &'static [(usize, usize)] {
    match m {
        2 => &[(0, 1)],
        3 => &[(0, 1), (0, 2), (1, 2)],
        _ => &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)],
    }
}

/// Number of angles for a length-m mixer: one rotation and one phase per
/// row pair, plus two column phases.
fn param_count(m: usize) -> usize {
    2 * rotation_pairs(m).len() + 2
}

/// Builds the m×2 isometry from rotation/phase angles: the seed `[e₁ e₂]`
/// run through a product of two-row complex rotations, then column phases.
fn mixer_from_angles(m: usize, angles: &[f64]) -> Vec<[C64; 2]> {
    let mut v: Vec<[C64; 2]> = vec![[C64::ZERO; 2]; m];
    v[0][0] = c64(1.0, 0.0);
    v[1][1] = c64(1.0, 0.0);
    for (i, &(p, q)) in rotation_pairs(m).iter().enumerate() {
        let (theta, phi) = (angles[2 * i], angles[2 * i + 1]);
        let (s, c) = theta.sin_cos();
        let e_pos = c64(phi.cos(), phi.sin());
        let e_neg = e_pos.conj();
        for k in 0..2 {
            let rp = v[p][k];
            let rq = v[q][k];
            v[p][k] = rp * c - rq * (e_neg * s);
            v[q][k] = rp * (e_pos * s) + rq * c;
        }
    }
    let n = angles.len();
    let col_phase = [
        c64(angles[n - 2].cos(), angles[n - 2].sin()),
        c64(angles[n - 1].cos(), angles[n - 1].sin()),
    ];
    for row in &mut v {
        row[0] *= col_phase[0];
        row[1] *= col_phase[1];
    }
    v
}

/// Convex roof: minimizes `Σ w_j g(π_j)` over pure decompositions of ρ.
///
/// Pure targets short-circuit to the trivial decomposition. Budget
/// exhaustion returns the best found with `converged = false`.
pub fn roof_min(
    g: &dyn Fn(&DensityOperator) -> f64,
    rho: &DensityOperator,
    opts: &RoofOptions,
) -> Result<RoofResult> {
    roof_search(g, rho, opts, false)
}

/// Concave roof: maximizes `Σ w_j g(π_j)` over pure decompositions of ρ.
pub fn roof_max(
    g: &dyn Fn(&DensityOperator) -> f64,
    rho: &DensityOperator,
    opts: &RoofOptions,
) -> Result<RoofResult> {
    roof_search(g, rho, opts, true)
}

struct Candidate {
    m: usize,
    angles: Vec<f64>,
    value: f64,
    converged: bool,
}

/// Strict-improvement descent over angle space: axis sweeps with step
/// halving from π/4 down to 1e-8, a pattern move repeating the aggregate
/// sweep displacement while it pays off (the Hooke–Jeeves acceleration that
/// keeps curved valleys from degenerating into step-halving crawl), and
/// random-direction probes whenever an axis sweep stalls. `eval` returns
/// `None` once the budget is exhausted. Returns the best value seen and
/// whether the budget cut the descent short; `angles` is left at the best
/// point.
fn descend(
    eval: &mut impl FnMut(&[f64]) -> Option<f64>,
    angles: &mut [f64],
    start_value: f64,
    probe_rng: &mut ChaCha8Rng,
) -> (f64, bool) {
    let n = angles.len();
    let mut dir = vec![0.0_f64; n];
    let mut prev = vec![0.0_f64; n];
    let mut best = start_value;
    let mut step = STEP_INIT;
    while step >= STEP_MIN {
        let mut improved = false;
        prev.copy_from_slice(angles);
        for i in 0..n {
            for delta in [step, -step] {
                angles[i] += delta;
                match eval(angles) {
                    Some(v) if v < best => {
                        best = v;
                        improved = true;
                    }
                    Some(_) => {
                        angles[i] -= delta;
                    }
                    None => {
                        angles[i] -= delta;
                        return (best, true);
                    }
                }
            }
        }
        if improved {
            // Pattern acceleration: keep repeating the net sweep
            // displacement while it improves.
            loop {
                for k in 0..n {
                    dir[k] = angles[k] - prev[k];
                }
                if dir.iter().all(|&d| d == 0.0) {
                    break;
                }
                prev.copy_from_slice(angles);
                for k in 0..n {
                    angles[k] += dir[k];
                }
                match eval(angles) {
                    Some(v) if v < best => {
                        best = v;
                    }
                    Some(_) => {
                        for k in 0..n {
                            angles[k] -= dir[k];
                        }
                        break;
                    }
                    None => {
                        for k in 0..n {
                            angles[k] -= dir[k];
                        }
                        return (best, true);
                    }
                }
            }
        } else {
            for _ in 0..n {
                let mut norm = 0.0;
                for d in dir.iter_mut() {
                    *d = probe_rng.sample(StandardNormal);
                    norm += *d * *d;
                }
                let scale = step / norm.sqrt().max(1e-300);
                for (a, d) in angles.iter_mut().zip(&dir) {
                    *a += scale * d;
                }
                match eval(angles) {
                    Some(v) if v < best => {
                        best = v;
                        improved = true;
                    }
                    Some(_) => {
                        for (a, d) in angles.iter_mut().zip(&dir) {
                            *a -= scale * d;
                        }
                    }
                    None => {
                        for (a, d) in angles.iter_mut().zip(&dir) {
                            *a -= scale * d;
                        }
                        return (best, true);
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (best, false)
}

/// One flatness-polish descent: minimizes the smooth surrogate
/// `Σ_j (g(π_j) − value)² + VALUE_PENALTY · max(0, signed value − best)²`
/// from the given angles under an evaluation cap. Leaves `angles` at the
/// best point found and returns the number of evaluations spent.
#[allow(clippy::too_many_arguments)]
fn polish_descent(
    kernel: &MixKernel,
    g: &dyn Fn(&DensityOperator) -> f64,
    m: usize,
    angles: &mut [f64],
    sign: f64,
    best_value: f64,
    cap: usize,
    stream_seed: u64,
) -> usize {
    let mut used = 0usize;
    let mut flat_of = |a: &[f64]| -> Option<f64> {
        if used >= cap {
            return None;
        }
        used += 1;
        let (value, _, sqdev) = kernel.member_stats(&mixer_from_angles(m, a), g);
        let excess = (sign * value - best_value).max(0.0);
        Some(sqdev + VALUE_PENALTY * excess * excess)
    };
    if let Some(first) = flat_of(angles) {
        let mut probe_rng = ChaCha8Rng::seed_from_u64(stream_seed);
        descend(&mut flat_of, angles, first, &mut probe_rng);
    }
    used
}

fn roof_search(
    g: &dyn Fn(&DensityOperator) -> f64,
    rho: &DensityOperator,
    opts: &RoofOptions,
    maximize: bool,
) -> Result<RoofResult> {
    if opts.budget < DEFAULT_BUDGET {
        return Err(Error::ParameterOutOfRange(format!(
            "budget {} below the minimum of {DEFAULT_BUDGET}",
            opts.budget
        )));
    }

    // Pure target: the only decomposition is the trivial one.
    if rho.is_pure() {
        let value = g(rho);
        return Ok(RoofResult {
            value,
            decomposition: PureDecomposition::new(vec![(1.0, *rho)], rho)?,
            member_values: vec![value],
            converged: true,
        });
    }

    let kernel = MixKernel::new(rho)?;
    let sign = if maximize { -1.0 } else { 1.0 };
    let objective = |mixer: &[[C64; 2]]| sign * kernel.value(mixer, g);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let total_starts: usize = STARTS_PER_LENGTH.iter().sum();
    // A sixth of the budget is reserved for the flatness polish so the
    // value starts can never starve it; whatever the starts leave unused is
    // added back to the polish pool.
    let polish_reserve = opts.budget / 6;
    let value_budget = opts.budget - polish_reserve;
    let per_start_cap = value_budget / total_starts;
    let mut remaining = value_budget;
    let mut candidates: Vec<Candidate> = Vec::with_capacity(total_starts);

    for (li, &m) in LENGTHS.iter().enumerate() {
        let n_params = param_count(m);
        for start in 0..STARTS_PER_LENGTH[li] {
            // Start 0 of each length is the eigenbasis itself (all-zero
            // angles); the rest are uniform random draws. Draws happen
            // unconditionally to keep the stream aligned across budgets.
            let draws: Vec<f64> =
                (0..n_params).map(|_| rng.gen_range(0.0..std::f64::consts::PI)).collect();
            let mut angles = if start == 0 { vec![0.0; n_params] } else { draws };

            if remaining == 0 {
                break;
            }
            let cap = per_start_cap.min(remaining);
            let mut used = 0usize;
            let mut eval = |a: &[f64]| -> Option<f64> {
                if used >= cap {
                    return None;
                }
                used += 1;
                Some(objective(&mixer_from_angles(m, a)))
            };

            let first = match eval(&angles) {
                Some(v) => v,
                None => break,
            };
            // Probe draws come from a per-start fork so the main stream
            // feeding the start angles stays aligned across budgets.
            let mut probe_rng = ChaCha8Rng::seed_from_u64(
                opts.seed ^ 0xd1ce_0000 ^ ((li as u64) << 32) ^ ((start as u64) << 8),
            );
            let (best, truncated) = descend(&mut eval, &mut angles, first, &mut probe_rng);
            remaining -= used;
            candidates.push(Candidate { m, angles, value: best, converged: !truncated });
        }
    }

    // The signed best value across candidates anchors the optimal face.
    let (best_idx, best_value) = candidates
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.value.partial_cmp(&b.1.value).expect("finite values"))
        .map(|(idx, c)| (idx, c.value))
        .expect("at least one start always runs");

    // Every candidate on the face (within the value slack) seeds a flatness
    // polish: the value search pins the roof value, but the optimal face
    // usually holds many decompositions and coordinate descent stops
    // anywhere on it. The polish descends the smooth squared spread,
    // penalized for leaving the slack, to exhibit the flat optimal
    // decomposition the roof is guaranteed to possess.
    let mut seeds: Vec<(f64, usize)> = Vec::new();
    for (idx, cand) in candidates.iter().enumerate() {
        if cand.value <= best_value + VALUE_SLACK {
            let (_, spread, _) =
                kernel.member_stats(&mixer_from_angles(cand.m, &cand.angles), g);
            seeds.push((spread, idx));
        }
    }
    // The flat optimal decompositions always live in the two-member family;
    // when no within-slack candidate is an m = 2 mixer (its value search
    // stalled just above the slack), polish the best m = 2 candidate too —
    // the value penalty pulls it onto the face while the spread flattens.
    if !seeds.iter().any(|&(_, idx)| candidates[idx].m == 2) {
        if let Some((idx, cand)) = candidates
            .iter()
            .enumerate()
            .filter(|(_, c)| c.m == 2)
            .min_by(|a, b| a.1.value.partial_cmp(&b.1.value).expect("finite values"))
        {
            let (_, spread, _) =
                kernel.member_stats(&mixer_from_angles(cand.m, &cand.angles), g);
            seeds.push((spread, idx));
        }
    }
    // Queue order: seeds already at the flat target run first (they are
    // adopted without spending budget), then two-member seeds (the family
    // guaranteed to contain a flat optimum, and the cheapest to descend),
    // then the rest; flattest first within each group.
    seeds.sort_by(|a, b| a.partial_cmp(b).expect("finite spreads"));
    seeds.sort_by_key(|&(spread, idx)| {
        if spread <= POLISH_FLAT_TARGET {
            0
        } else if candidates[idx].m == 2 {
            1
        } else {
            2
        }
    });

    let mut pool = remaining + polish_reserve;
    // Best outcome so far: spread first, signed value as the tiebreak.
    // Starting from the unpolished best-value candidate guarantees a result
    // even if every polish drifts off the face and is rejected.
    let mut best_final: (f64, f64, usize, Vec<f64>) = {
        let cand = &candidates[best_idx];
        let (value, spread, _) =
            kernel.member_stats(&mixer_from_angles(cand.m, &cand.angles), g);
        (spread, sign * value, best_idx, cand.angles.clone())
    };

    for (k, &(spread0, idx)) in seeds.iter().enumerate() {
        if best_final.0 <= POLISH_FLAT_TARGET {
            break;
        }
        let cand = &candidates[idx];
        let mut angles = cand.angles.clone();
        if spread0 > POLISH_FLAT_TARGET && pool > 0 {
            // Equal slice of the remaining pool (with a floor), so one
            // stubborn descent cannot starve the seeds behind it.
            let slice = (pool / (seeds.len() - k)).max(POLISH_SLICE_MIN).min(pool);
            pool -= polish_descent(
                &kernel,
                g,
                cand.m,
                &mut angles,
                sign,
                best_value,
                slice,
                opts.seed ^ 0x705f_15e1 ^ ((idx as u64) << 16),
            );
        }
        let (value, spread, _) = kernel.member_stats(&mixer_from_angles(cand.m, &angles), g);
        let signed = sign * value;
        // The penalty keeps polishes near the best value; anything that
        // still drifted out is rejected rather than reported.
        if signed > best_value + POLISH_DRIFT {
            continue;
        }
        if spread < best_final.0 || (spread == best_final.0 && signed < best_final.1) {
            best_final = (spread, signed, idx, angles);
        }
    }

    // Restart rounds: while budget remains and the best outcome is not yet
    // flat, jitter it (proportionally to the residual spread) and descend
    // again under a fresh probe stream to escape the stall.
    let mut jitter_rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x4a17_7e2d);
    for round in 0..POLISH_RESTARTS {
        if best_final.0 <= POLISH_FLAT_TARGET || pool < POLISH_SLICE_MIN {
            break;
        }
        let idx = best_final.2;
        let m = candidates[idx].m;
        let mut angles = best_final.3.clone();
        let scale = best_final.0.sqrt().clamp(0.05, 0.5);
        for a in angles.iter_mut() {
            *a += jitter_rng.gen_range(-scale..scale);
        }
        let slice = (pool / 2).max(POLISH_SLICE_MIN).min(pool);
        pool -= polish_descent(
            &kernel,
            g,
            m,
            &mut angles,
            sign,
            best_value,
            slice,
            opts.seed ^ 0xbead_0000 ^ ((round as u64) << 4),
        );
        let (value, spread, _) = kernel.member_stats(&mixer_from_angles(m, &angles), g);
        let signed = sign * value;
        if signed > best_value + POLISH_DRIFT {
            continue;
        }
        if spread < best_final.0 || (spread == best_final.0 && signed < best_final.1) {
            best_final = (spread, signed, idx, angles);
        }
    }

    let (_, _, idx, final_angles) = best_final;
    let winner = &candidates[idx];
    let mixer = mixer_from_angles(winner.m, &final_angles);
    let decomposition = decomposition_from_mixer(rho, &mixer)?;
    let member_values: Vec<f64> =
        decomposition.members().iter().map(|(_, pi)| g(pi)).collect();
    let value = decomposition
        .members()
        .iter()
        .zip(&member_values)
        .map(|((w, _), v)| w * v)
        .sum();
    Ok(RoofResult { value, decomposition, member_values, converged: winner.converged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelSpec;
    use crate::concurrence::concurrence_named;
    use crate::state::{density_from_bloch, BlochVector};

    fn state(x1: f64, x2: f64, x3: f64) -> DensityOperator {
        density_from_bloch(BlochVector::new(x1, x2, x3)).unwrap()
    }

    const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn identity_mixer_recovers_eigendecomposition() {
        let rho = state(0.0, 0.0, 0.5);
        let mixer = vec![[c64(1.0, 0.0), C64::ZERO], [C64::ZERO, c64(1.0, 0.0)]];
        let d = decomposition_from_mixer(&rho, &mixer).unwrap();
        assert_eq!(d.len(), 2);
        // Eigenvalues 0.75 / 0.25 with eigenprojectors |0⟩⟨0| and |1⟩⟨1|.
        assert!((d.members()[0].0 - 0.75).abs() < 1e-14);
        assert!((d.members()[1].0 - 0.25).abs() < 1e-14);
        assert!((d.members()[0].1.bloch().x3 - 1.0).abs() < 1e-12);
        assert!((d.members()[1].1.bloch().x3 + 1.0).abs() < 1e-12);
    }

    #[test]
    fn hadamard_mixer_gives_plus_minus_pair() {
        let rho = state(0.0, 0.0, 0.0);
        let mixer = vec![
            [c64(SQRT_HALF, 0.0), c64(SQRT_HALF, 0.0)],
            [c64(SQRT_HALF, 0.0), c64(-SQRT_HALF, 0.0)],
        ];
        let d = decomposition_from_mixer(&rho, &mixer).unwrap();
        assert_eq!(d.len(), 2);
        for ((w, pi), expected_x1) in d.members().iter().zip([1.0, -1.0]) {
            assert!((w - 0.5).abs() < 1e-14);
            assert!((pi.bloch().x1 - expected_x1).abs() < 1e-12);
        }
    }

    #[test]
    fn mixer_validation() {
        let rho = state(0.0, 0.0, 0.5);
        // Not an isometry.
        let bad = vec![[c64(1.0, 0.0), C64::ZERO], [c64(1.0, 0.0), C64::ZERO]];
        assert!(matches!(
            decomposition_from_mixer(&rho, &bad),
            Err(Error::NotIsometric { .. })
        ));
        // Wrong length.
        let short = vec![[c64(1.0, 0.0), C64::ZERO]];
        assert!(decomposition_from_mixer(&rho, &short).is_err());
    }

    #[test]
    fn average_is_reproduced_for_random_mixers() {
        let rho = state(0.3, -0.2, 0.4);
        for m in [2usize, 3, 4] {
            let n = param_count(m);
            let angles: Vec<f64> = (0..n).map(|i| 0.7 * (i as f64 + 1.0)).collect();
            let mixer = mixer_from_angles(m, &angles);
            let d = decomposition_from_mixer(&rho, &mixer).unwrap();
            assert!(d.average_residual(&rho) < 1e-10, "m = {m}");
        }
    }

    #[test]
    fn constant_g_has_flat_roof() {
        let rho = state(0.2, 0.1, -0.3);
        let g = |_: &DensityOperator| 0.75;
        let opts = RoofOptions::default();
        let lo = roof_min(&g, &rho, &opts).unwrap();
        let hi = roof_max(&g, &rho, &opts).unwrap();
        assert!((lo.value - 0.75).abs() < 1e-12);
        assert!((hi.value - 0.75).abs() < 1e-12);
        assert_eq!(flatness_residual(&lo), 0.0);
    }

    #[test]
    fn pure_target_short_circuits() {
        let pi = state(0.0, 0.0, 1.0);
        let g = |rho: &DensityOperator| rho.bloch().x3;
        let r = roof_min(&g, &pi, &RoofOptions::default()).unwrap();
        assert_eq!(r.decomposition.len(), 1);
        assert!((r.value - 1.0).abs() < 1e-14);
        assert!(r.converged);
    }

    #[test]
    fn budget_below_minimum_rejected() {
        let rho = state(0.0, 0.0, 0.5);
        let g = |_: &DensityOperator| 0.0;
        let opts = RoofOptions { budget: 100, ..Default::default() };
        assert!(roof_min(&g, &rho, &opts).is_err());
    }

    #[test]
    fn phase_damping_concurrence_roof_at_center() {
        // The Bloch-ball center decomposes into the poles, which phase
        // damping leaves pure: the concurrence roof is zero.
        let spec = ChannelSpec::phase_damping(c64(0.5, 0.0)).unwrap();
        let g = move |pi: &DensityOperator| concurrence_named(&spec, pi).value();
        let r = roof_min(&g, &state(0.0, 0.0, 0.0), &RoofOptions::default()).unwrap();
        assert!(r.value < 1e-6, "roof value {}", r.value);
    }

    #[test]
    fn roof_min_matches_closed_form_concurrence() {
        let spec = ChannelSpec::phase_damping(c64(0.5, 0.0)).unwrap();
        let rho = state(0.4, 0.1, 0.3);
        let g = move |pi: &DensityOperator| concurrence_named(&spec, pi).value();
        let r = roof_min(&g, &rho, &RoofOptions::default()).unwrap();
        let closed = concurrence_named(&spec, &rho).value();
        assert!(
            (r.value - closed).abs() < tol::ORACLE,
            "oracle {} vs closed form {closed}",
            r.value
        );
        assert!(flatness_residual(&r) < 1e-3);
    }

    #[test]
    fn roof_max_bounds_roof_min() {
        let spec = ChannelSpec::amplitude_damping(0.4).unwrap();
        let rho = state(0.2, -0.3, 0.1);
        let g = move |pi: &DensityOperator| concurrence_named(&spec, pi).value();
        let opts = RoofOptions::default();
        let lo = roof_min(&g, &rho, &opts).unwrap();
        let hi = roof_max(&g, &rho, &opts).unwrap();
        assert!(lo.value <= hi.value + 1e-9);

        // Any fixed decomposition sits between the roofs.
        let angles: Vec<f64> = (0..param_count(3)).map(|i| 0.31 * (i as f64 + 1.0)).collect();
        let mixer = mixer_from_angles(3, &angles);
        let mid = decomposition_from_mixer(&rho, &mixer).unwrap().value_of(&g);
        assert!(lo.value <= mid + tol::ORACLE && mid <= hi.value + tol::ORACLE);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let spec = ChannelSpec::amplitude_damping(0.6).unwrap();
        let rho = state(0.1, 0.2, -0.4);
        let g = move |pi: &DensityOperator| concurrence_named(&spec, pi).value();
        let opts = RoofOptions { budget: 20_000, seed: 99 };
        let r1 = roof_min(&g, &rho, &opts).unwrap();
        let r2 = roof_min(&g, &rho, &opts).unwrap();
        assert_eq!(r1.value.to_bits(), r2.value.to_bits(), "bit-identical values");
        assert_eq!(r1.member_values.len(), r2.member_values.len());
        for (a, b) in r1.member_values.iter().zip(&r2.member_values) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn suboptimal_decomposition_is_not_flat() {
        // Eigendecomposition of an off-axis state under phase damping mixes
        // member concurrences; the residual must be visibly positive.
        let spec = ChannelSpec::phase_damping(c64(0.5, 0.0)).unwrap();
        let rho = state(0.5, 0.0, 0.3);
        let g = move |pi: &DensityOperator| concurrence_named(&spec, pi).value();
        let angles = vec![0.9, 0.4, 0.2, 0.1];
        let mixer = mixer_from_angles(2, &angles);
        let d = decomposition_from_mixer(&rho, &mixer).unwrap();
        let value = d.value_of(&g);
        let spread = d
            .members()
            .iter()
            .map(|(_, pi)| (g(pi) - value).abs())
            .fold(0.0, f64::max);
        assert!(spread > 1e-3, "expected a visibly non-flat decomposition, got {spread}");
    }
}
