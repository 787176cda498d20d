//! Exact verification of locus configurations, Baker–Akhiezer functions and
//! Hadamard chains.

pub mod baker;
pub mod config;
pub mod huygens;
pub mod linalg;
pub mod locus;
pub mod numeric;
pub mod onedim;
pub mod scalar;
pub mod symbolic;
