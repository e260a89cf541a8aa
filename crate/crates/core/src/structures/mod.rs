//! Finite groups, finite discrete groupoids and bisections.

mod bisection;
mod group;
mod groupoid;
mod iso;

pub use bisection::{bisections, is_bisection, Bisection, MAX_BISECTION_ARROWS};
pub use group::{build_group, FiniteGroup, GroupJson};
pub use groupoid::{build_groupoid, groupoid_properties, FiniteGroupoid, GroupoidJson, GroupoidProperties};
pub use iso::{find_isomorphism, generators, is_isomorphism, isomorphisms};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("not associative: ({0}·{1})·{2} ≠ {0}·({1}·{2})")]
    NotAssociative(usize, usize, usize),
    #[error("no identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("product domain mismatch at pair ({0},{1})")]
    DomainMismatch(usize, usize),
    #[error("not associative: ({0}·{1})·{2} ≠ {0}·({1}·{2})")]
    NonAssociative(usize, usize, usize),
    #[error("bad units: {0}")]
    BadUnits(String),
    #[error("bad inverse for arrow {0}")]
    BadInverse(usize),
    #[error("bisection enumeration is capped at {cap} arrows, got {arrows}")]
    TooManyArrows { arrows: usize, cap: usize },
}

/// Common view of groups and groupoids: a group is a groupoid with one unit.
pub trait Carrier {
    fn size(&self) -> usize;
    fn source(&self, a: usize) -> usize;
    fn range(&self, a: usize) -> usize;
    fn compose(&self, a: usize, b: usize) -> Option<usize>;
    fn inverse(&self, a: usize) -> usize;
    fn unit_list(&self) -> &[usize];
    fn is_unit(&self, a: usize) -> bool {
        self.unit_list().contains(&a)
    }
    /// All composable pairs (a, b, ab).
    fn composable(&self) -> Vec<(usize, usize, usize)> {
        let n = self.size();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if let Some(c) = self.compose(a, b) {
                    out.push((a, b, c));
                }
            }
        }
        out
    }
}
