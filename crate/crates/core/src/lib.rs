//! Finite models of twisted group and groupoid Lp-operator algebras.

pub mod algebra;
pub mod analysis;
pub mod cohomology;
pub mod scalar;
pub mod structures;
pub mod weyl;

pub use scalar::UnitScalar;
