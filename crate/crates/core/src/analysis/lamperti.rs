use super::{pnorm, vec_norm, AnalysisError, CMatrix, Exponent, PnormConfig};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// An invertible ℓ^p isometry M = diag(f)·P_φ: column j has the single entry
/// f[φ(j)] in row φ(j), with |f| ≡ 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsometryForm {
    pub f: Vec<Complex64>,
    pub phi: Vec<usize>,
}

impl IsometryForm {
    pub fn to_matrix(&self) -> CMatrix {
        let n = self.phi.len();
        let mut m = CMatrix::zeros(n, n);
        for (j, &i) in self.phi.iter().enumerate() {
            m[(i, j)] = self.f[i];
        }
        m
    }

    pub fn compose(&self, other: &IsometryForm) -> IsometryForm {
        // (diag f P_φ)(diag g P_ψ) = diag(f · g∘φ⁻¹) P_{φψ}
        let n = self.phi.len();
        let phi: Vec<usize> = (0..n).map(|j| self.phi[other.phi[j]]).collect();
        let mut f = vec![Complex64::new(0.0, 0.0); n];
        for &i in &other.phi {
            f[self.phi[i]] = self.f[self.phi[i]] * other.f[i];
        }
        IsometryForm { f, phi }
    }
}

pub const LAMPERTI_TOL: f64 = 1e-9;

/// Writes an isometry as diag(f)·P_φ. Refuses p = 2, where isometries need not
/// be monomial.
pub fn lamperti_decompose(m: &CMatrix, p: Exponent, tol: f64) -> Result<IsometryForm, AnalysisError> {
    p.require_not_two("the Lamperti decomposition")?;
    let n = m.ncols();
    if m.nrows() != n {
        return Err(AnalysisError::NotAnIsometry("matrix is not square".into()));
    }
    let mut phi = vec![usize::MAX; n];
    let mut f = vec![Complex64::new(0.0, 0.0); n];
    let mut hit = vec![false; n];
    for j in 0..n {
        let support: Vec<usize> = (0..n).filter(|&i| m[(i, j)].norm() > tol).collect();
        if support.len() != 1 {
            return Err(AnalysisError::NotAnIsometry(format!("column {j} has {} nonzero entries", support.len())));
        }
        let i = support[0];
        if (m[(i, j)].norm() - 1.0).abs() > tol {
            return Err(AnalysisError::NotAnIsometry(format!("entry ({i},{j}) has modulus {}", m[(i, j)].norm())));
        }
        if hit[i] {
            return Err(AnalysisError::NotAnIsometry(format!("row {i} is hit twice")));
        }
        hit[i] = true;
        phi[j] = i;
        f[i] = m[(i, j)];
    }
    Ok(IsometryForm { f, phi })
}

/// max(‖f − g‖_∞, 2·[φ ≠ ψ]).
pub fn isometry_distance(a: &IsometryForm, b: &IsometryForm) -> f64 {
    let phase = a.f.iter().zip(&b.f).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    if a.phi != b.phi {
        phase.max(2.0)
    } else {
        phase
    }
}

/// Probes ‖Mx‖_p = ‖x‖_p on basis vectors, on e_i + ωe_j for ω ∈ {±1, ±i} and on
/// `random` seeded vectors, and checks invertibility.
pub fn is_p_isometry(m: &CMatrix, p: Exponent, tol: f64, random: usize, seed: u64) -> bool {
    let n = m.ncols();
    if m.nrows() != n {
        return false;
    }
    let check = |x: &[Complex64]| {
        let y: Vec<Complex64> = (0..n).map(|i| (0..n).map(|j| m[(i, j)] * x[j]).sum()).collect();
        let (a, b) = (vec_norm(&y, p), vec_norm(x, p));
        (a - b).abs() <= tol * b.max(1.0)
    };
    let zero = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let mut e = vec![zero; n];
        e[i] = Complex64::new(1.0, 0.0);
        if !check(&e) {
            return false;
        }
        for j in i + 1..n {
            for w in [Complex64::new(1., 0.), Complex64::new(-1., 0.), Complex64::new(0., 1.), Complex64::new(0., -1.)]
            {
                let mut x = e.clone();
                x[j] = w;
                if !check(&x) {
                    return false;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        let x: Vec<Complex64> =
            (0..n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        if !check(&x) {
            return false;
        }
    }
    m.clone().try_inverse().is_some()
}

/// ‖M‖_p ≤ 1 + tol, judged on the lower bound of the norm bracket.
pub fn is_contraction(m: &CMatrix, p: Exponent, tol: f64, cfg: &PnormConfig) -> Result<bool, AnalysisError> {
    Ok(pnorm(m, p, cfg)?.lower <= 1.0 + tol)
}
