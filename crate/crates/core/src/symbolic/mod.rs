//! Symbolic infinite backends and equidecomposition certificates.

pub mod certificates;
pub mod dfa;
pub mod ep;
