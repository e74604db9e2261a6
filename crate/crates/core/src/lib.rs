//! Discrete Morse-Bott theory on finite regular CW complexes.
//!
//! A complex is given by cells and facet incidences ([`complex`]), a function
//! assigns exact rational values to cells ([`morse`]), and the remaining
//! modules compute homology, vector fields, the Morse-Bott inequalities and
//! Conley indices on top of that.

pub mod analysis;
pub mod complex;
pub mod conley;
pub mod flow;
pub mod homology;
pub mod io;
pub mod morse;

pub use complex::{CellIdx, CellSet, Complex, ComplexError, FaceRecord};
pub use homology::{Coefficients, Polynomial};
pub use morse::DiscreteFunction;
