//! Brute-force p-norm for tiny matrices: a dense grid over the unit sphere
//! followed by compass-search refinement. Shares no code with the power iteration.

use super::{AnalysisError, CMatrix, Exponent};
use num_complex::Complex64;
use std::f64::consts::TAU;

pub const ORACLE_MAX_DIM: usize = 3;

#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    /// Simplex subdivisions for the amplitudes |ξ_j|^p.
    pub simplex_steps: usize,
    /// Phase subdivisions per free phase.
    pub phase_steps: usize,
    /// Grid points refined by local search.
    pub refine_top: usize,
    pub min_step: f64,
}

impl OracleConfig {
    /// At least 10⁵ samples for every supported dimension.
    pub fn for_dim(n: usize, p: Exponent) -> Self {
        match (n, p) {
            (_, Exponent::Infinity) => OracleConfig {
                simplex_steps: 0,
                phase_steps: if n <= 2 { 100_000 } else { 320 },
                refine_top: 12,
                min_step: 1e-11,
            },
            (2, _) => OracleConfig { simplex_steps: 400, phase_steps: 256, refine_top: 12, min_step: 1e-11 },
            _ => OracleConfig { simplex_steps: 40, phase_steps: 12, refine_top: 12, min_step: 1e-11 },
        }
    }
}

fn ratio(m: &CMatrix, xi: &[Complex64], p: f64) -> f64 {
    let n = xi.len();
    let y: Vec<Complex64> = (0..m.nrows()).map(|i| (0..n).map(|j| m[(i, j)] * xi[j]).sum()).collect();
    let norm = |v: &[Complex64]| {
        if p.is_infinite() {
            v.iter().map(|z| z.norm()).fold(0.0, f64::max)
        } else {
            v.iter().map(|z| z.norm().powf(p)).sum::<f64>().powf(1.0 / p)
        }
    };
    let d = norm(xi);
    if d == 0.0 {
        0.0
    } else {
        norm(&y) / d
    }
}

/// ξ from parameters: n amplitudes then n−1 phases (the first phase is 0).
fn vector(params: &[f64], n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|j| {
            let theta = if j == 0 { 0.0 } else { params[n + j - 1] };
            Complex64::from_polar(params[j].abs(), theta)
        })
        .collect()
}

fn simplex_points(n: usize, steps: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(n - 1, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, steps, &mut Vec::new(), &mut out);
    out
}

fn phase_points(free: usize, steps: usize) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..free {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..steps).map(move |t| {
                    let mut w = v.clone();
                    w.push(TAU * t as f64 / steps as f64);
                    w
                })
            })
            .collect();
    }
    out
}

/// Grid-plus-refinement estimate of ‖M‖_p for n ≤ 3. Returns the best ratio found,
/// which is a lower bound that converges to the norm as the grid is refined.
pub fn pnorm_oracle(m: &CMatrix, p: Exponent) -> Result<f64, AnalysisError> {
    let n = m.ncols();
    pnorm_oracle_with(m, p, &OracleConfig::for_dim(n, p))
}

pub fn pnorm_oracle_with(m: &CMatrix, p: Exponent, cfg: &OracleConfig) -> Result<f64, AnalysisError> {
    let n = m.ncols();
    if n > ORACLE_MAX_DIM || m.nrows() > ORACLE_MAX_DIM {
        return Err(AnalysisError::TooLarge { dim: n.max(m.nrows()), max: ORACLE_MAX_DIM });
    }
    if n == 0 {
        return Ok(0.0);
    }
    let pv = p.value();
    let mut samples: Vec<(f64, Vec<f64>)> = Vec::new();
    let phases = phase_points(n - 1, cfg.phase_steps);
    if pv.is_infinite() {
        for ph in &phases {
            let mut params = vec![1.0; n];
            params.extend_from_slice(ph);
            samples.push((ratio(m, &vector(&params, n), pv), params));
        }
    } else {
        for w in simplex_points(n, cfg.simplex_steps) {
            let amps: Vec<f64> = w.iter().map(|&k| (k as f64 / cfg.simplex_steps as f64).powf(1.0 / pv)).collect();
            for ph in &phases {
                let mut params = amps.clone();
                params.extend_from_slice(ph);
                samples.push((ratio(m, &vector(&params, n), pv), params));
            }
        }
    }
    samples.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = samples.first().map(|s| s.0).unwrap_or(0.0);
    let amp_step = if cfg.simplex_steps > 0 { 1.0 / cfg.simplex_steps as f64 } else { 0.0 };
    let phase_step = TAU / cfg.phase_steps.max(1) as f64;
    for (v0, start) in samples.into_iter().take(cfg.refine_top) {
        best = best.max(refine(m, pv, n, start, v0, amp_step, phase_step, cfg.min_step));
    }
    Ok(best)
}

#[allow(clippy::too_many_arguments)]
fn refine(m: &CMatrix, p: f64, n: usize, mut x: Vec<f64>, mut fx: f64, amp: f64, phase: f64, min_step: f64) -> f64 {
    // amplitudes are frozen at 1 for p = ∞: the maximum sits on the torus
    let movable: Vec<usize> = if p.is_infinite() { (n..2 * n - 1).collect() } else { (0..2 * n - 1).collect() };
    let mut step: Vec<f64> = (0..2 * n - 1).map(|i| if i < n { amp.max(1e-3) } else { phase }).collect();
    while step.iter().any(|&s| s > min_step) {
        let mut improved = false;
        for &i in &movable {
            if step[i] <= min_step {
                continue;
            }
            for dir in [1.0, -1.0] {
                let mut y = x.clone();
                y[i] += dir * step[i];
                let fy = ratio(m, &vector(&y, n), p);
                if fy > fx {
                    x = y;
                    fx = fy;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step.iter_mut().for_each(|s| *s *= 0.5);
        }
    }
    fx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_and_ones() {
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(0.5, 0.),
            Complex64::new(0., -2.),
        ]));
        for p in [1.0, 1.7, 3.0] {
            assert!((pnorm_oracle(&d, Exponent::Finite(p)).unwrap() - 2.0).abs() < 1e-9);
        }
        let ones = CMatrix::from_element(2, 2, Complex64::new(1., 0.));
        assert!((pnorm_oracle(&ones, Exponent::Finite(3.0)).unwrap() - 2.0).abs() < 1e-8);
        assert!((pnorm_oracle(&ones, Exponent::Infinity).unwrap() - 2.0).abs() < 1e-8);
    }

    #[test]
    fn too_large() {
        assert!(matches!(
            pnorm_oracle(&CMatrix::identity(4, 4), Exponent::Finite(3.0)),
            Err(AnalysisError::TooLarge { .. })
        ));
    }

    #[test]
    fn two_norm_matches_svd() {
        let m =
            CMatrix::from_row_slice(3, 3, &[1., 2., 0., 0., 1., -1., 3., 0., 1.].map(|v| Complex64::new(v, 0.5 * v)));
        let s = super::super::spectral_norm(&m);
        assert!((pnorm_oracle(&m, Exponent::Finite(2.0)).unwrap() - s).abs() < 1e-7);
    }
}
