//! State-space models of linear quantum systems.

pub mod examples;
pub mod generator;
mod params;
mod realizability;
mod response;
mod state_space;

pub use generator::{random_exact_params, random_lossless_block, random_params, SystemKind};
pub use params::{ExactParams, QSystemParams};
pub use realizability::{check_physical_realizability, RealizabilityReport};
pub use response::{flat_reflected_response, verify_inverse_identity, InverseIdentityReport};
pub use state_space::{
    build_exact_state_space, build_state_space, from_quadrature, quadrature_unitary, to_quadrature, ExactStateSpace,
    Representation, StateSpace,
};
