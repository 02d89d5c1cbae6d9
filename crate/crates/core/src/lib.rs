//! Thermodynamic formalism on one-sided shift spaces: languages, partition
//! sums and pressure, Hamming approachability, and the generating-series
//! analysis of staircase coded shifts.

pub mod error;
pub mod numeric;
pub mod seq;
pub mod series;
pub mod shift;
pub mod thermo;
pub mod approach;
pub mod structure;
pub mod gaplab;
pub mod words;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use seq::IntSeq;
pub use shift::{ClassSelector, LanguageSlice, ShiftModel};
pub use words::{Alphabet, Word};
