//! Band-limited shearlet generators, the continuous shearlet transform and
//! frame diagnostics built on it.

pub mod error;
pub mod frame;
pub mod generator;
pub mod grid;
pub mod hap;
pub mod amalgam;
pub mod b0;
pub mod decay;
pub mod transform;
pub mod witness;

pub use error::{AnalysisError, Result};
pub use generator::{BumpSpectrum, GeneratorParams, ShearletGenerator, Spectrum, Warped};
pub use grid::GridFunction;
