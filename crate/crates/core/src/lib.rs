//! Exact and quasi-resonances of discrete wave systems on the integer
//! lattice: enumeration, classification, detuning bounds, cluster topology
//! and symbolic cluster dynamics.

pub mod arith;
pub mod cluster;
pub mod dynsys;
mod error;
pub mod lattice;
pub mod precision;
pub mod quasi;
pub mod solver;

pub use error::{Error, Result};
pub use lattice::{
    build_circle_index, detuning, frequency, CircleIndex, Conservation, Detuning, Dispersion,
    DispersionId, DomainMode, RadicalForm, SpectralDomain, WaveVector,
};
pub use precision::{Certified, PrecisionConfig};
