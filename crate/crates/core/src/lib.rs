//! Spectral toolkit and estimate-verification harness for the Schrödinger
//! equation on irrational tori.

pub mod cli;
pub mod counting;
pub mod error;
pub mod grid;
pub mod mixed_norms;
pub mod nls;
pub mod spectral;
pub mod torus;
pub mod verify;

pub use error::{Error, Result};
pub use spectral::{DyadicCutoff, FourierState, FrequencyRegion, StripDecomposition};
pub use torus::{critical_index, IrrationalTorus, LatticePoint};
