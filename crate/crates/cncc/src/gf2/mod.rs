//! Exact arithmetic over GF(2): binary polynomials in the delay variable
//! `D`, rational functions of `D`, word-packed linear algebra, and
//! systematic generator matrices.

mod generator;
mod matrix;
mod poly;
mod rational;

pub use generator::{GeneratorMatrix, ValidationReport};
pub use matrix::BitMatrix;
pub use poly::BinaryPoly;
pub use rational::RationalFn;
