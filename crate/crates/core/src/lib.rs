//! Discrete phase space over GF(2^n) for n qubits.

pub mod error;
pub mod field;
pub mod linalg;
pub mod mub;
pub mod operators;
pub mod phase_space;
pub mod states;
pub mod system;
pub mod tomography;
pub mod verify;
pub mod wigner;

pub use error::{Error, Result};
pub use system::QubitSystem;
