//! Channel distributions and capacities of a JRC-capable coherent MIMO radar.

pub mod accuracy;
pub mod capacity;
pub mod distributions;
pub mod error;
pub mod montecarlo;
pub mod quadrature;
pub mod specfun;
pub mod validation;
pub mod waveform;

pub use accuracy::AccuracySpec;
pub use error::{JrcError, Result};
