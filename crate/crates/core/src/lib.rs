//! Quantum computation on a linear Ising spin chain driven only by global
//! pulses plus selective control of the two chain ends.

pub mod algorithms;
pub mod compiler;
pub mod error;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod pauli_frame;
pub mod protocol;
pub mod simulator;
pub mod verify;

pub use error::{Error, Result};
