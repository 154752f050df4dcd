#![forbid(unsafe_code)]

pub mod cli;
pub mod constructions;
pub mod continuous;
pub mod geometry;
pub mod lattice;
pub mod scalar;
pub mod signal;
pub mod tolerance;
pub mod verification;
