//! Rotation cocycles on ℤ_N² (a discretization of the noncommutative torus, not
//! F^p(ℤ², σ_θ) itself) and Følner-box compressions of λ^{σ_θ} on ℓ^p(ℤ²).

use super::{AlgElement, AlgebraError, GroupAlgebra, MonomialMatrix};
use crate::analysis::{pnorm_operator, Exponent, NormEstimate, PnormConfig, SparseMatrix};
use crate::cohomology::{are_cohomologous, GroupCocycle};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;

/// F^p_λ(ℤ_N², σ_{k/N}) with σ((a,b),(c,d)) = e^{2πi·b·c·k/N}; (a,b) sits at a·N + b.
#[derive(Debug, Clone)]
pub struct TorusQuotient {
    pub k: i64,
    pub n: usize,
    pub alg: GroupAlgebra,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationCheck {
    /// λ(U)λ(V) = e^{2πik/N}·λ(V)λ(U) with U = δ_{(0,1)}, V = δ_{(1,0)}.
    pub uv_relation: bool,
    /// λ(δ_{(1,0)})λ(δ_{(0,1)}) = e^{−2πik/N}·λ(δ_{(0,1)})λ(δ_{(1,0)}).
    pub swapped_relation: bool,
    pub exponent: u64,
    pub order: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormRow {
    pub p: Exponent,
    pub estimate: NormEstimate,
}

impl TorusQuotient {
    pub fn new(k: i64, n: usize) -> Result<Self, AlgebraError> {
        if n == 0 {
            return Err(AlgebraError::BadTheta("denominator 0".into()));
        }
        Ok(TorusQuotient { k, n, alg: GroupAlgebra::new(GroupCocycle::rotation(n, k)) })
    }

    pub fn cocycle(&self) -> &GroupCocycle {
        self.alg.cocycle()
    }

    pub fn u(&self) -> usize {
        1 % (self.n * self.n)
    }

    pub fn v(&self) -> usize {
        self.n % (self.n * self.n)
    }

    fn exact(&self, y: usize) -> MonomialMatrix {
        self.alg.left_regular_exact(y, self.n as u64).expect("rotation cocycle takes values in μ_N")
    }

    /// The commutation relation, decided in μ_N arithmetic.
    pub fn relation_check(&self) -> RelationCheck {
        let m = self.n as u64;
        let e = self.k.rem_euclid(m as i64) as u64;
        let (u, v) = (self.exact(self.u()), self.exact(self.v()));
        RelationCheck {
            uv_relation: u.mul(&v) == v.mul(&u).scale(e),
            swapped_relation: v.mul(&u) == u.mul(&v).scale((m - e) % m),
            exponent: e,
            order: m,
        }
    }

    /// U + V + U⁻¹ + V⁻¹ as δ-coefficients (with multiplicity when N ≤ 2).
    pub fn generator_sum(&self) -> AlgElement {
        let g = self.alg.carrier();
        let mut f = self.alg.zero();
        for y in [self.u(), self.v(), g.inv(self.u()), g.inv(self.v())] {
            f.coeffs[y] += Complex64::new(1.0, 0.0);
        }
        f
    }

    pub fn norm_table(&self, ps: &[Exponent], cfg: &PnormConfig) -> Result<Vec<NormRow>, AlgebraError> {
        let f = self.generator_sum();
        ps.iter().map(|&p| Ok(NormRow { p, estimate: self.alg.reduced_norm(&f, p, cfg)? })).collect()
    }
}

/// Whether σ_{k/N} ∼ σ_{k′/N} on ℤ_N², by the exact solver.
pub fn rotation_classes_agree(k: i64, k2: i64, n: usize) -> Result<bool, AlgebraError> {
    if n == 0 {
        return Err(AlgebraError::BadTheta("denominator 0".into()));
    }
    Ok(are_cohomologous(&GroupCocycle::rotation(n, k), &GroupCocycle::rotation(n, k2))?.is_some())
}

/// σ_θ((a,b),(c,d)) = e^{2πiθ·b·c} on ℤ².
pub fn sigma_theta(theta: f64, x: (i64, i64), y: (i64, i64)) -> Complex64 {
    Complex64::from_polar(1.0, TAU * theta * (x.1 * y.0) as f64)
}

/// P_N λ^{σ_θ}(f) P_N on the box [−N, N]², for f given as (group element, coefficient).
/// Index of (a, b) is (a + N)(2N + 1) + (b + N).
pub fn folner_compression(theta: f64, n: usize, f: &[((i64, i64), Complex64)]) -> Result<SparseMatrix, AlgebraError> {
    if !theta.is_finite() {
        return Err(AlgebraError::BadTheta(format!("θ = {theta}")));
    }
    let side = 2 * n + 1;
    let r = n as i64;
    let index = |(a, b): (i64, i64)| -> Option<usize> {
        (a.abs() <= r && b.abs() <= r).then(|| ((a + r) as usize) * side + (b + r) as usize)
    };
    let mut entries = Vec::new();
    for a in -r..=r {
        for b in -r..=r {
            let h = (a, b);
            let col = index(h).expect("in box");
            for &(g, c) in f {
                let gh = (g.0 + h.0, g.1 + h.1);
                if let Some(row) = index(gh) {
                    entries.push((row, col, c * sigma_theta(theta, g, h)));
                }
            }
        }
    }
    Ok(SparseMatrix::from_triplets(side * side, side * side, entries))
}

pub fn torus_generator_sum() -> Vec<((i64, i64), Complex64)> {
    let one = Complex64::new(1.0, 0.0);
    vec![((0, 1), one), ((1, 0), one), ((0, -1), one), ((-1, 0), one)]
}

#[derive(Debug, Clone, Serialize)]
pub struct FolnerRow {
    pub box_radius: usize,
    pub dim: usize,
    /// A lower bound for ‖λ^{σ_θ}(f)‖_p; compressions only increase with the box.
    pub lower: f64,
    pub upper_of_compression: f64,
}

/// Lower bounds ‖P_N λ^{σ_θ}(U + V + U⁻¹ + V⁻¹) P_N‖_p for each radius.
pub fn folner_lower_bounds(
    theta: f64,
    radii: &[usize],
    p: Exponent,
    cfg: &PnormConfig,
) -> Result<Vec<FolnerRow>, AlgebraError> {
    let f = torus_generator_sum();
    radii
        .iter()
        .map(|&n| {
            let op = folner_compression(theta, n, &f)?;
            let est = pnorm_operator(&op, p, cfg)?;
            Ok(FolnerRow { box_radius: n, dim: op.nrows, lower: est.lower, upper_of_compression: est.upper })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn generator_relation_holds_exactly() {
        for n in 1..=4 {
            for k in 0..n as i64 {
                let t = TorusQuotient::new(k, n).unwrap();
                let r = t.relation_check();
                assert!(r.uv_relation && r.swapped_relation, "k = {k}, N = {n}");
            }
        }
        // a wrong phase is detected
        let t = TorusQuotient::new(1, 4).unwrap();
        let (u, v) = (t.exact(t.u()), t.exact(t.v()));
        assert_ne!(u.mul(&v), v.mul(&u).scale(3));
    }

    #[test]
    fn classes_follow_the_residue() {
        for n in 2..=3usize {
            for k in 0..n as i64 {
                for k2 in 0..n as i64 {
                    assert_eq!(rotation_classes_agree(k, k2, n).unwrap(), k == k2);
                }
            }
        }
        assert!(rotation_classes_agree(1, 4, 3).unwrap());
    }

    #[test]
    fn untwisted_box_is_a_grid_graph() {
        // the adjacency of a (2N+1)-path has top eigenvalue 2cos(π/(2N+2))
        let op = folner_compression(0.0, 2, &torus_generator_sum()).unwrap().to_dense();
        let top = op.map(|z| z.re).symmetric_eigenvalues().max();
        assert!((top - 4.0 * (PI / 6.0).cos()).abs() < 1e-10);
    }
}
