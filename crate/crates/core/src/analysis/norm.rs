//! Matrix p→p operator norms: exact for p ∈ {1, 2, ∞}, bracketed otherwise.

use super::AnalysisError;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;

pub type CMatrix = DMatrix<Complex64>;

/// A Hölder exponent p ∈ [1, ∞].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self, AnalysisError> {
        if p == f64::INFINITY {
            Ok(Exponent::Infinity)
        } else if p.is_finite() && p >= 1.0 {
            Ok(Exponent::Finite(p))
        } else {
            Err(AnalysisError::BadExponent(format!("p = {p} is not in [1, ∞]")))
        }
    }

    pub fn parse(s: &str) -> Result<Self, AnalysisError> {
        match s.trim() {
            "inf" | "infinity" | "∞" | "Inf" => Ok(Exponent::Infinity),
            t => Exponent::new(
                t.parse::<f64>().map_err(|_| AnalysisError::BadExponent(format!("cannot parse p = {t:?}")))?,
            ),
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    pub fn is_two(&self) -> bool {
        matches!(*self, Exponent::Finite(p) if p == 2.0)
    }

    /// Refuses p = 2 for statements that need p ≠ 2.
    pub fn require_not_two(&self, what: &str) -> Result<(), AnalysisError> {
        if self.is_two() {
            return Err(AnalysisError::BadExponent(format!(
                "{what} requires p ≠ 2 (for p = 2 the isometry groups are unitary groups and the rigidity statements fail)"
            )));
        }
        Ok(())
    }

    pub fn conjugate(&self) -> Exponent {
        match *self {
            Exponent::Infinity => Exponent::Finite(1.0),
            Exponent::Finite(1.0) => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            Exponent::Finite(p) => s.serialize_f64(p),
            Exponent::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(p) => Exponent::new(p),
            Raw::Str(s) => Exponent::parse(&s),
        }
        .map_err(serde::de::Error::custom)
    }
}

/// ℓ^p norm of a vector.
pub fn vec_norm(x: &[Complex64], p: Exponent) -> f64 {
    match p {
        Exponent::Infinity => x.iter().map(|z| z.norm()).fold(0.0, f64::max),
        Exponent::Finite(1.0) => x.iter().map(|z| z.norm()).sum(),
        Exponent::Finite(2.0) => x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
        Exponent::Finite(p) => {
            let s = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if s == 0.0 {
                return 0.0;
            }
            s * x.iter().map(|z| (z.norm() / s).powf(p)).sum::<f64>().powf(1.0 / p)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormMethod {
    Exact,
    PowerIteration,
    Oracle,
    Interpolation,
}

/// A bracket lower ≤ ‖M‖ ≤ upper.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub lower: f64,
    pub upper: f64,
    pub method: NormMethod,
    pub iterations: usize,
}

impl NormEstimate {
    pub fn exact(v: f64) -> Self {
        NormEstimate { lower: v, upper: v, method: NormMethod::Exact, iterations: 0 }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, v: f64, tol: f64) -> bool {
        v >= self.lower - tol && v <= self.upper + tol
    }

    /// Bracket of a direct sum: the maximum of the parts.
    pub fn max(self, other: NormEstimate) -> NormEstimate {
        let method = if self.method == NormMethod::Exact && other.method == NormMethod::Exact {
            NormMethod::Exact
        } else {
            NormMethod::PowerIteration
        };
        NormEstimate {
            lower: self.lower.max(other.lower),
            upper: self.upper.max(other.upper),
            method,
            iterations: self.iterations.max(other.iterations),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PnormConfig {
    pub seed: u64,
    pub random_starts: usize,
    /// Basis vectors are used as extra starts when the dimension is at most this.
    pub basis_start_limit: usize,
    pub max_iter: usize,
    pub rel_tol: f64,
}

impl Default for PnormConfig {
    fn default() -> Self {
        PnormConfig { seed: 0, random_starts: 32, basis_start_limit: 64, max_iter: 10_000, rel_tol: 1e-10 }
    }
}

/// A linear map given through its action and adjoint action.
pub trait LinearOperator: Sync {
    fn ncols(&self) -> usize;
    fn nrows(&self) -> usize;
    fn apply(&self, x: &[Complex64]) -> Vec<Complex64>;
    fn apply_adjoint(&self, y: &[Complex64]) -> Vec<Complex64>;
    /// Maximum column ℓ¹ sum.
    fn one_norm(&self) -> f64;
    /// Maximum row ℓ¹ sum.
    fn inf_norm(&self) -> f64;
    /// Spectral norm when cheaply available.
    fn two_norm(&self) -> Option<f64> {
        None
    }
}

impl LinearOperator for CMatrix {
    fn ncols(&self) -> usize {
        self.ncols()
    }
    fn nrows(&self) -> usize {
        self.nrows()
    }
    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.nrows()];
        for (j, xj) in x.iter().enumerate() {
            if *xj == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (i, yi) in y.iter_mut().enumerate() {
                *yi += self[(i, j)] * xj;
            }
        }
        y
    }
    fn apply_adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        (0..self.ncols()).map(|j| (0..self.nrows()).map(|i| self[(i, j)].conj() * y[i]).sum()).collect()
    }
    fn one_norm(&self) -> f64 {
        (0..self.ncols()).map(|j| self.column(j).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
    }
    fn inf_norm(&self) -> f64 {
        (0..self.nrows()).map(|i| self.row(i).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
    }
    fn two_norm(&self) -> Option<f64> {
        Some(spectral_norm(self))
    }
}

/// Row-compressed sparse matrix.
#[derive(Debug, Clone)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub rows: Vec<Vec<(usize, Complex64)>>,
}

impl SparseMatrix {
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Complex64)>,
    ) -> Self {
        let mut rows = vec![Vec::new(); nrows];
        for (i, j, v) in entries {
            rows[i].push((j, v));
        }
        SparseMatrix { nrows, ncols, rows }
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.nrows, self.ncols);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m[(i, j)] += v;
            }
        }
        m
    }
}

impl LinearOperator for SparseMatrix {
    fn ncols(&self) -> usize {
        self.ncols
    }
    fn nrows(&self) -> usize {
        self.nrows
    }
    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.rows.iter().map(|row| row.iter().map(|&(j, v)| v * x[j]).sum()).collect()
    }
    fn apply_adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        let mut x = vec![Complex64::new(0.0, 0.0); self.ncols];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                x[j] += v.conj() * y[i];
            }
        }
        x
    }
    fn one_norm(&self) -> f64 {
        let mut cols = vec![0.0; self.ncols];
        for row in &self.rows {
            for &(j, v) in row {
                cols[j] += v.norm();
            }
        }
        cols.into_iter().fold(0.0, f64::max)
    }
    fn inf_norm(&self) -> f64 {
        self.rows.iter().map(|r| r.iter().map(|(_, v)| v.norm()).sum::<f64>()).fold(0.0, f64::max)
    }
}

pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

/// ‖M‖_{p→p}. Exact for p ∈ {1, 2, ∞}; otherwise a multistart power-iteration
/// lower bound and an interpolation upper bound. Block-diagonal matrices (up to
/// a simultaneous permutation) are split into blocks first.
pub fn pnorm(m: &CMatrix, p: Exponent, cfg: &PnormConfig) -> Result<NormEstimate, AnalysisError> {
    if let Exponent::Finite(v) = p {
        if !(v >= 1.0) {
            return Err(AnalysisError::BadExponent(format!("p = {v}")));
        }
    }
    match p {
        Exponent::Finite(1.0) => return Ok(NormEstimate::exact(m.one_norm())),
        Exponent::Infinity => return Ok(NormEstimate::exact(m.inf_norm())),
        Exponent::Finite(2.0) => return Ok(NormEstimate::exact(spectral_norm(m))),
        _ => {}
    }
    if m.nrows() == m.ncols() {
        let blocks = diagonal_blocks(m);
        if blocks.len() > 1 {
            let mut est = NormEstimate { lower: 0.0, upper: 0.0, method: NormMethod::PowerIteration, iterations: 0 };
            for b in blocks {
                let sub = CMatrix::from_fn(b.len(), b.len(), |i, j| m[(b[i], b[j])]);
                let e = pnorm_operator(&sub, p, cfg)?;
                est = NormEstimate { method: NormMethod::PowerIteration, ..est.max(e) };
            }
            return Ok(est);
        }
    }
    pnorm_operator(m, p, cfg)
}

/// Connected components of the graph with an edge i–j whenever M[i,j] ≠ 0.
pub fn diagonal_blocks(m: &CMatrix) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for i in 0..n {
        for j in 0..n {
            if m[(i, j)] != Complex64::new(0.0, 0.0) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_of[r] {
            Some(b) => blocks[b].push(i),
            None => {
                root_of[r] = Some(blocks.len());
                blocks.push(vec![i]);
            }
        }
    }
    blocks
}

/// Norm bracket for any operator. p ∈ {1, ∞} is exact; other p use power iteration.
pub fn pnorm_operator<A: LinearOperator + ?Sized>(
    a: &A,
    p: Exponent,
    cfg: &PnormConfig,
) -> Result<NormEstimate, AnalysisError> {
    let pv = match p {
        Exponent::Infinity => return Ok(NormEstimate::exact(a.inf_norm())),
        Exponent::Finite(1.0) => return Ok(NormEstimate::exact(a.one_norm())),
        Exponent::Finite(v) if v > 1.0 => v,
        Exponent::Finite(v) => return Err(AnalysisError::BadExponent(format!("p = {v}"))),
    };
    let n = a.ncols();
    if n == 0 || a.nrows() == 0 {
        return Ok(NormEstimate::exact(0.0));
    }
    let mut starts: Vec<Start> = (0..cfg.random_starts).map(Start::Random).collect();
    if n <= cfg.basis_start_limit {
        starts.extend((0..n).map(Start::Basis));
    }
    starts.push(Start::Ones);
    let results: Vec<(f64, usize)> = starts
        .par_iter()
        .enumerate()
        .map(|(idx, s)| {
            let x0 = s.vector(n, pv, cfg.seed, idx);
            power_iteration(a, pv, x0, cfg)
        })
        .collect();
    let (mut lower, mut iterations) = (0.0, 0);
    for &(v, it) in &results {
        if v > lower {
            lower = v;
            iterations = it;
        }
    }
    let (n1, ninf) = (a.one_norm(), a.inf_norm());
    let mut upper = n1.powf(1.0 / pv) * ninf.powf(1.0 - 1.0 / pv);
    if let Some(s2) = a.two_norm() {
        let dim = a.ncols().max(a.nrows()) as f64;
        upper = upper.min(dim.powf((1.0 / pv - 0.5).abs()) * s2);
    }
    // rounding in either bound must not invert the bracket
    let upper = upper.max(lower);
    Ok(NormEstimate { lower, upper, method: NormMethod::PowerIteration, iterations })
}

#[derive(Debug, Clone, Copy)]
enum Start {
    Random(usize),
    Basis(usize),
    Ones,
}

impl Start {
    fn vector(&self, n: usize, p: f64, seed: u64, _idx: usize) -> Vec<Complex64> {
        let mut x = match *self {
            Start::Random(k) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                (0..n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
            }
            Start::Basis(j) => {
                let mut v = vec![Complex64::new(0.0, 0.0); n];
                v[j] = Complex64::new(1.0, 0.0);
                v
            }
            Start::Ones => vec![Complex64::new(1.0, 0.0); n],
        };
        let s = vec_norm(&x, Exponent::Finite(p));
        x.iter_mut().for_each(|z| *z /= s);
        x
    }
}

/// y ↦ |y|^{r−1}·sign(y), normalised to unit norm in the conjugate exponent of r.
fn dual_map(y: &[Complex64], r: f64) -> Vec<Complex64> {
    let s = y.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if s == 0.0 {
        return vec![Complex64::new(0.0, 0.0); y.len()];
    }
    let mut z: Vec<Complex64> = y
        .iter()
        .map(|w| {
            let a = w.norm() / s;
            if a == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                (w / w.norm()) * a.powf(r - 1.0)
            }
        })
        .collect();
    let q = r / (r - 1.0);
    let nz = vec_norm(&z, Exponent::Finite(q));
    z.iter_mut().for_each(|w| *w /= nz);
    z
}

/// Boyd–Higham iteration x ← dual_q(A* dual_p(Ax)); returns the best ‖Ax‖_p seen.
fn power_iteration<A: LinearOperator + ?Sized>(
    a: &A,
    p: f64,
    mut x: Vec<Complex64>,
    cfg: &PnormConfig,
) -> (f64, usize) {
    let q = p / (p - 1.0);
    let pe = Exponent::Finite(p);
    let mut best = 0.0f64;
    let mut it = 0;
    let mut stall = 0;
    while it < cfg.max_iter {
        it += 1;
        let y = a.apply(&x);
        let est = vec_norm(&y, pe);
        if est == 0.0 {
            break;
        }
        let gain = est - best;
        best = best.max(est);
        if gain <= cfg.rel_tol * est {
            stall += 1;
            if stall >= 2 {
                break;
            }
        } else {
            stall = 0;
        }
        let z = a.apply_adjoint(&dual_map(&y, p));
        x = dual_map(&z, q);
    }
    (best, it)
}
