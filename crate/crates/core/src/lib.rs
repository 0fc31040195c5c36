//! Description-length estimates for quantum states and circuits.

pub mod bounds;
pub mod circuit;
pub mod compress;
pub mod encode;
pub mod error;
pub mod sources;
pub mod statevec;

pub use error::{Error, Result};
pub mod synth;
