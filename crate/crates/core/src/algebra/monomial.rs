use crate::analysis::CMatrix;
use num_complex::Complex64;
use std::f64::consts::TAU;

/// A monomial matrix over μ_m: column j holds ω^{exps[j]} in row rows[j], ω = e^{2πi/m}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialMatrix {
    m: u64,
    rows: Vec<usize>,
    exps: Vec<u64>,
}

impl MonomialMatrix {
    pub fn new(m: u64, rows: Vec<usize>, exps: Vec<u64>) -> Self {
        assert_eq!(rows.len(), exps.len());
        let exps = exps.into_iter().map(|e| e % m).collect();
        MonomialMatrix { m, rows, exps }
    }

    pub fn identity(n: usize, m: u64) -> Self {
        MonomialMatrix { m, rows: (0..n).collect(), exps: vec![0; n] }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    pub fn mul(&self, other: &MonomialMatrix) -> MonomialMatrix {
        assert_eq!(self.m, other.m, "monomial matrices over different μ_m");
        let rows = other.rows.iter().map(|&r| self.rows[r]).collect();
        let exps = other.rows.iter().zip(&other.exps).map(|(&r, &e)| (self.exps[r] + e) % self.m).collect();
        MonomialMatrix { m: self.m, rows, exps }
    }

    /// ω^e times the matrix.
    pub fn scale(&self, e: u64) -> MonomialMatrix {
        MonomialMatrix {
            m: self.m,
            rows: self.rows.clone(),
            exps: self.exps.iter().map(|x| (x + e) % self.m).collect(),
        }
    }

    pub fn to_matrix(&self) -> CMatrix {
        let n = self.dim();
        let mut out = CMatrix::zeros(n, n);
        for (j, (&r, &e)) in self.rows.iter().zip(&self.exps).enumerate() {
            out[(r, j)] = Complex64::from_polar(1.0, TAU * e as f64 / self.m as f64);
        }
        out
    }
}
