//! Analysis of linear quantum input-output systems: realizability, poles and
//! zeros, Kalman structure, left invertibility and SISO coherent feedback.

pub mod error;
pub mod exact;
pub mod feedback;
pub mod invertibility;
pub mod kalman;
pub mod numeric;
pub mod system;
pub mod zeros;

pub use error::{Error, Result};

pub type Complex = num_complex::Complex64;
