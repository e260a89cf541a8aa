//! Operator norms on ℓ^p, Lamperti isometries, commutants and hermitian elements.

mod commutant;
mod core;
mod isometries;
mod lamperti;
pub mod linalg;
mod norm;
mod oracle;

pub use self::core::{core_basis, hermitian_test, CoreResult, HermitianConfig, HermitianVerdict};
pub use commutant::{commutant, double_commutant};
pub use isometries::{isometries_in_algebra, IsometryFamily, IsometryGroup, IsometrySearchConfig};
pub use lamperti::{is_contraction, is_p_isometry, isometry_distance, lamperti_decompose, IsometryForm, LAMPERTI_TOL};
pub use norm::{
    diagonal_blocks, pnorm, pnorm_operator, spectral_norm, vec_norm, CMatrix, Exponent, LinearOperator, NormEstimate,
    NormMethod, PnormConfig, SparseMatrix,
};
pub use oracle::{pnorm_oracle, pnorm_oracle_with, OracleConfig, ORACLE_MAX_DIM};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("bad exponent: {0}")]
    BadExponent(String),
    #[error("dimension {dim} exceeds the oracle limit {max}")]
    TooLarge { dim: usize, max: usize },
    #[error("not an invertible isometry: {0}")]
    NotAnIsometry(String),
    #[error("isometry search exceeded its budget of {budget} nodes")]
    SearchTooLarge { budget: usize },
    #[error("inconclusive: {0}")]
    Inconclusive(String),
}
