//! Central tolerance policy.
//!
//! Every module validates and cross-checks against the same three tiers so a
//! tolerance never has to be re-derived (or silently diverge) at a call site:
//!
//! - [`STRUCTURAL`]: validation of algebraic structure that holds to rounding
//!   (Hermiticity, unit trace, weight normalization).
//! - [`CLOSED_FORM`]: agreement between two independent exact formulas for
//!   the same quantity; slack covers accumulated f64 rounding only.
//! - [`ORACLE`]: agreement between a closed form and an iterative search
//!   (roof oracle, capacity search); slack covers optimizer convergence.

/// Structural validation: Hermiticity, trace normalization, isometry checks.
pub const STRUCTURAL: f64 = 1e-12;

/// Cross-checks between independent closed-form routes.
pub const CLOSED_FORM: f64 = 1e-10;

/// Comparisons against derivative-free search results.
pub const ORACLE: f64 = 1e-4;

/// Linear-independence test for Kraus pairs (relative).
pub const KRAUS_INDEPENDENCE: f64 = 1e-10;

/// Trace-preservation test for Kraus pairs.
pub const TRACE_PRESERVING: f64 = 1e-10;

/// Purity test: a state is treated as pure when `det ρ` is at or below this.
pub const PURITY_DET: f64 = 1e-10;

/// Concurrence values below this are reported as exactly zero.
pub const CONCURRENCE_FLOOR: f64 = 1e-12;

/// Relative eigenvalue threshold deciding the rank of the concurrence
/// quadratic form (line leaves vs. plane-disc leaves).
pub const FOLIATION_RANK_REL: f64 = 1e-9;

/// Discriminants at or below this are treated as a degenerate spectrum.
pub const EIG_DEGENERATE: f64 = 1e-30;
