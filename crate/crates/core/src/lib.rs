//! Spectral laboratory for fractional operators, commutators and generalized
//! Beltrami equations on periodic grids.

pub mod beltrami;
pub mod commutator;
pub mod criteria;
pub mod error;
pub mod experiment;
pub mod family;
pub mod grid;
pub mod lattice;
pub mod linalg;
pub mod multiplier;
pub mod pv;
pub mod sobolev;
pub mod tolerances;

pub use error::{LabError, Result};
pub use grid::{ComplexField, GridSpec, SpectralField};
