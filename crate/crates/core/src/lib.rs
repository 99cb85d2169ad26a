//! Entanglement-quantifying functions for one-qubit channels of length two.
//!
//! A length-two channel acts as `T(X) = A X A† + B X B†` for a pair of 2x2
//! Kraus matrices. For such channels the entanglement `E(T; ρ)` (the convex
//! roof of the output entropy over pure decompositions of ρ), the exchange
//! quantity `H(T; ρ) = S(T(ρ)) − E(T; ρ)`, the Holevo bound χ, and the
//! one-shot classical capacity all reduce to closed forms built from a single
//! anti-linear Hermitian operator θ attached to the Kraus pair.
//!
//! The crate provides:
//!
//! - exact 2x2 complex algebra and Bloch-ball state handling ([`mat2`],
//!   [`state`], [`entropy`]),
//! - channel construction and application plus Holevo χ ([`channel`]),
//! - the θ operator with its covariance laws ([`theta`]),
//! - concurrence along several independent routes ([`concurrence`]),
//! - a brute-force convex-roof oracle used to certify every closed form
//!   ([`roof`]),
//! - entanglement, exchange entropy, and one-shot capacities
//!   ([`entanglement`]),
//! - the foliation of the Bloch ball into leaves of constant concurrence,
//!   with optimal decompositions read off geometrically ([`foliation`]),
//! - seeded random generators and the property-check suite driven by the
//!   CLI `verify` command and the acceptance tests ([`sampling`], [`verify`]).
//!
//! All entropies are natural-log (nats) unless converted explicitly.

pub mod channel;
pub mod concurrence;
pub mod entanglement;
pub mod entropy;
pub mod error;
pub mod foliation;
pub mod mat2;
pub mod roof;
pub mod sampling;
pub mod state;
pub mod theta;
pub mod tol;
pub mod verify;

pub use channel::{holevo_chi, ChannelSpec, Ensemble, KrausPair};
pub use concurrence::{concurrence, ConcurrenceMethod, ConcurrenceValue};
pub use entanglement::{
    capacity_amplitude_damping, capacity_numeric, entanglement_e, entropy_h, CapacityOptions,
    CapacityResult,
};
pub use entropy::{h, h1, h2, nats_to_bits};
pub use error::Error;
pub use foliation::{
    foliation_forms, leaf_through, optimal_decomposition, zero_concurrence_states, Leaf, LeafKind,
    LinearForm,
};
pub use mat2::{c64, C64, Mat2};
pub use roof::{
    decomposition_from_mixer, flatness_residual, roof_max, roof_min, PureDecomposition,
    RoofOptions, RoofResult,
};
pub use state::{
    bloch_from_density, density_from_bloch, eig2, von_neumann_entropy, BlochVector,
    DensityOperator, Spectrum2,
};
pub use sampling::Sampler;
pub use theta::{
    antisymmetric_identity_residual, pure_expectation, theta_conjugate_transform,
    theta_from_kraus, theta_module_change, theta_spinflip_form, AntilinearHermitian,
};
pub use verify::{run_all, run_with, PropertyReport};

/// Convenience result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
