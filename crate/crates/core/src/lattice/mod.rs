//! Wave vectors, spectral domains, dispersion laws and exact frequency
//! arithmetic.

mod circle;
mod detuning;
mod dispersion;
mod domain;
pub mod radical;
mod vector;

pub use circle::{build_circle_index, Circle, CircleIndex};
pub use detuning::{detuning, enclose_groups, evaluate_terms, Detuning};
pub use dispersion::{frequency, Conservation, Dispersion, DispersionId};
pub use domain::{DomainMode, SpectralDomain};
pub use radical::{KernelKey, RadicalForm};
pub use vector::WaveVector;
