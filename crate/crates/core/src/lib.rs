//! Exact finite-field computations around the theta map of rank-2 bundles on
//! hyperelliptic curves: interpolation of vanishing linear systems, secant
//! incidences, rational normal curves, and the genus-3 Segre cubic / Kummer
//! quartic picture.

pub mod error;
pub mod exactfield;
pub mod unipoly;
pub mod multipoly;
pub mod linsolve;
pub mod vanishsys;
pub mod hypcurve;
pub mod incidence;
pub mod kumar;
pub mod harness;

pub use error::{Error, Result};
pub use exactfield::{Fe, FieldRng, PrimeContext, PrimeField, DEFAULT_PRIME};
