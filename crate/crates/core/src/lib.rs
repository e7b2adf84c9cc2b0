//! Spectral limit theory and Monte Carlo verification for supercritical
//! super-Ornstein-Uhlenbeck processes.

pub mod cli;
pub mod cltlab;
pub mod error;
pub mod measure;
pub mod moments;
pub mod quadrature;
pub mod simulator;
pub mod spectral;

pub use error::{Error, Result};
pub use measure::{Atom, InitialMeasure};
pub use spectral::{EigenIndex, SpectralFunction, SuperOUConfig};
