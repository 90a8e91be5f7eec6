//! Tarski type monoids on finite stationarily measurable spaces.

pub mod congruence;
pub mod corpus;
pub mod error;
pub mod inverse_semigroup;
pub mod io;
pub mod lattice_quantity;
pub mod linalg;
pub mod lp;
pub mod measures;
pub mod statmeas;
pub mod suites;
pub mod symbolic;
pub mod type_engine;

pub use error::{Error, Result};
