//! Hermitian elements (‖exp(itA)‖_p = 1 for all real t) and the C*-core A_h + iA_h.

use super::linalg::{independent_subset, span_basis};
use super::{pnorm, AnalysisError, CMatrix, Exponent, PnormConfig};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy)]
pub struct HermitianConfig {
    pub tol: f64,
    pub grid_points: usize,
    pub t_max: f64,
    /// Adds t = ±10^{-k} for k = 1..=small_scales.
    pub small_scales: u32,
    pub pnorm: PnormConfig,
    pub closure_samples: usize,
    pub max_pair_tests: usize,
    pub seed: u64,
}

impl Default for HermitianConfig {
    fn default() -> Self {
        HermitianConfig {
            tol: 1e-7,
            grid_points: 41,
            t_max: 5.0,
            small_scales: 4,
            pnorm: PnormConfig::default(),
            closure_samples: 6,
            max_pair_tests: 4000,
            seed: 0,
        }
    }
}

impl HermitianConfig {
    fn times(&self) -> Vec<f64> {
        let mut ts: Vec<f64> = (0..self.grid_points)
            .map(|k| -self.t_max + 2.0 * self.t_max * k as f64 / (self.grid_points.max(2) - 1) as f64)
            .filter(|t| *t != 0.0)
            .collect();
        for k in 1..=self.small_scales {
            let t = 10f64.powi(-(k as i32));
            ts.extend([t, -t]);
        }
        // large |t| first: non-hermitian elements usually fail there
        ts.sort_by(|a, b| b.abs().total_cmp(&a.abs()).then(a.total_cmp(b)));
        ts
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct HermitianVerdict {
    pub hermitian: bool,
    /// The largest norm seen sits within a factor 10 of the tolerance band.
    pub inconclusive: bool,
    pub worst_t: f64,
    pub worst_norm: f64,
}

/// Samples ‖exp(itA)‖_p on a grid of t and stops at the first value above 1 + tol.
pub fn hermitian_test(a: &CMatrix, p: Exponent, cfg: &HermitianConfig) -> Result<HermitianVerdict, AnalysisError> {
    let mut worst = HermitianVerdict { hermitian: true, inconclusive: false, worst_t: 0.0, worst_norm: 1.0 };
    for t in cfg.times() {
        let e = (a * Complex64::new(0.0, t)).exp();
        let v = pnorm(&e, p, &cfg.pnorm)?.lower;
        if v > worst.worst_norm {
            worst.worst_norm = v;
            worst.worst_t = t;
        }
        if v > 1.0 + cfg.tol {
            worst.hermitian = false;
            break;
        }
    }
    let excess = worst.worst_norm - 1.0;
    worst.inconclusive = excess > cfg.tol / 10.0 && excess < cfg.tol * 10.0;
    Ok(worst)
}

#[derive(Debug, Clone, Serialize)]
pub struct CoreResult {
    /// Orthonormal basis of A_h + iA_h.
    #[serde(skip)]
    pub basis: Vec<CMatrix>,
    pub complex_dim: usize,
    pub hermitian_real_dim: usize,
    pub tests: usize,
    pub inconclusive: bool,
}

struct RealSpan {
    basis: Vec<Vec<f64>>,
}

impl RealSpan {
    fn residual(&self, v: &[f64]) -> Vec<f64> {
        let mut r = v.to_vec();
        for b in &self.basis {
            let c: f64 = b.iter().zip(&r).map(|(x, y)| x * y).sum();
            r.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        r
    }

    fn contains(&self, v: &[f64]) -> bool {
        let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let r: f64 = self.residual(v).iter().map(|x| x * x).sum::<f64>().sqrt();
        r <= 1e-9 * n.max(1.0)
    }

    fn push(&mut self, v: &[f64]) -> bool {
        let r = self.residual(v);
        let n: f64 = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n <= 1e-9 {
            return false;
        }
        self.basis.push(r.into_iter().map(|x| x / n).collect());
        true
    }
}

/// A_h + iA_h for the algebra spanned by `basis`. Tests the real directions B_k and
/// iB_k, closes the passing span under sampled combinations, then tries sums and
/// differences of failing directions. Refuses p = 2, where every self-adjoint
/// element is hermitian and the core is the whole algebra.
pub fn core_basis(basis: &[CMatrix], p: Exponent, cfg: &HermitianConfig) -> Result<CoreResult, AnalysisError> {
    p.require_not_two("the core computation")?;
    let b = independent_subset(basis);
    let k = b.len();
    let to_matrix = |r: &[f64]| -> CMatrix {
        let mut m = CMatrix::zeros(b[0].nrows(), b[0].ncols());
        for l in 0..k {
            let c = Complex64::new(r[l], r[k + l]);
            if c != Complex64::new(0.0, 0.0) {
                m += &b[l] * c;
            }
        }
        m
    };
    if k == 0 {
        return Ok(CoreResult {
            basis: Vec::new(),
            complex_dim: 0,
            hermitian_real_dim: 0,
            tests: 0,
            inconclusive: false,
        });
    }
    let mut tests = 0;
    let inconclusive = std::cell::Cell::new(false);
    let test = |r: &[f64], tests: &mut usize| -> Result<bool, AnalysisError> {
        *tests += 1;
        let v = hermitian_test(&to_matrix(r), p, cfg)?;
        inconclusive.set(inconclusive.get() | v.inconclusive);
        Ok(v.hermitian)
    };
    let unit = |i: usize| {
        let mut v = vec![0.0; 2 * k];
        v[i] = 1.0;
        v
    };
    let mut span = RealSpan { basis: Vec::new() };
    let mut passing = Vec::new();
    let mut failing = Vec::new();
    for i in 0..2 * k {
        let d = unit(i);
        if test(&d, &mut tests)? {
            span.push(&d);
            passing.push(d);
        } else {
            failing.push(d);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut closure_ok = true;
    if passing.len() > 1 {
        for _ in 0..cfg.closure_samples {
            let mut v = vec![0.0; 2 * k];
            for d in &passing {
                let c: f64 = rng.random_range(-1.0..1.0);
                v.iter_mut().zip(d).for_each(|(x, y)| *x += c * y);
            }
            closure_ok &= test(&v, &mut tests)?;
        }
    }
    let mut pair_tests = 0;
    'pairs: for a in 0..failing.len() {
        for c in a + 1..failing.len() {
            for sign in [1.0, -1.0] {
                let v: Vec<f64> = failing[a].iter().zip(&failing[c]).map(|(x, y)| x + sign * y).collect();
                if span.contains(&v) {
                    continue;
                }
                if pair_tests >= cfg.max_pair_tests {
                    inconclusive.set(true);
                    break 'pairs;
                }
                pair_tests += 1;
                if test(&v, &mut tests)? {
                    span.push(&v);
                }
            }
        }
    }
    let hermitian: Vec<CMatrix> = span.basis.iter().map(|r| to_matrix(r)).collect();
    let core = span_basis(&hermitian);
    Ok(CoreResult {
        complex_dim: core.len(),
        hermitian_real_dim: span.basis.len(),
        basis: core,
        tests,
        inconclusive: inconclusive.get() || !closure_ok,
    })
}
