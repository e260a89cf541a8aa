//! Invertible ℓ^p isometries inside a matrix algebra, found by backtracking over
//! the permutation φ while cutting down the admissible coefficient subspace.

use super::lamperti::{lamperti_decompose, IsometryForm, LAMPERTI_TOL};
use super::linalg::{null_space, span_basis, RANK_TOL};
use super::{AnalysisError, CMatrix, Exponent};
use crate::structures::{build_group, FiniteGroup};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::atomic::{AtomicUsize, Ordering};

#[derive(Debug, Clone, Copy)]
pub struct IsometrySearchConfig {
    pub node_budget: usize,
    pub tol: f64,
}

impl Default for IsometrySearchConfig {
    fn default() -> Self {
        IsometrySearchConfig { node_budget: 200_000, tol: 1e-8 }
    }
}

/// All isometries sharing a permutation: base·diag(phases) over a torus of
/// dimension `free_phases`. The base is normalised so its column-0 entry is 1.
#[derive(Debug, Clone, Serialize)]
pub struct IsometryFamily {
    pub base: IsometryForm,
    pub free_phases: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct IsometryGroup {
    pub families: Vec<IsometryFamily>,
    /// Permutations whose admissible f-space could not be classified.
    pub inconclusive: usize,
    pub nodes: usize,
}

impl IsometryGroup {
    pub fn family_of(&self, phi: &[usize]) -> Option<usize> {
        self.families.iter().position(|f| f.base.phi == phi)
    }

    /// π₀ = families under composition.
    pub fn pi0(&self) -> Result<FiniteGroup, AnalysisError> {
        let index: HashMap<&[usize], usize> =
            self.families.iter().enumerate().map(|(i, f)| (f.base.phi.as_slice(), i)).collect();
        let k = self.families.len();
        let mut table = vec![vec![0; k]; k];
        for a in 0..k {
            for b in 0..k {
                let prod = self.families[a].base.compose(&self.families[b].base);
                table[a][b] = *index.get(prod.phi.as_slice()).ok_or_else(|| {
                    AnalysisError::Inconclusive("isometry families are not closed under products".into())
                })?;
            }
        }
        build_group(&table).map_err(|e| AnalysisError::Inconclusive(e.to_string()))
    }

    /// The group of isometries with phases in μ_m: elements (k, family) with index
    /// k·|families| + family. Needs one free phase per family.
    pub fn phase_group(&self, m: u64) -> Result<FiniteGroup, AnalysisError> {
        if self.families.iter().any(|f| f.free_phases != 1) {
            return Err(AnalysisError::Inconclusive("phase group needs one free phase per family".into()));
        }
        let nf = self.families.len();
        let mu = m as usize;
        let size = nf * mu;
        let mut table = vec![vec![0; size]; size];
        for a in 0..nf {
            for b in 0..nf {
                let prod = self.families[a].base.compose(&self.families[b].base);
                let c = self.family_of(&prod.phi).ok_or_else(|| {
                    AnalysisError::Inconclusive("isometry families are not closed under products".into())
                })?;
                let base = &self.families[c].base;
                let r = prod.f[base.phi[0]] / base.f[base.phi[0]];
                let k = (r.arg() / TAU * m as f64).round().rem_euclid(m as f64) as usize;
                let snapped = Complex64::from_polar(1.0, TAU * k as f64 / m as f64);
                let close = prod.f.iter().zip(&base.f).all(|(x, y)| (x - snapped * y).norm() < 1e-7);
                if !close {
                    return Err(AnalysisError::Inconclusive(format!(
                        "product of families {a}, {b} has a phase outside μ_{m}"
                    )));
                }
                for ka in 0..mu {
                    for kb in 0..mu {
                        table[ka * nf + a][kb * nf + b] = ((ka + kb + k) % mu) * nf + c;
                    }
                }
            }
        }
        build_group(&table).map_err(|e| AnalysisError::Inconclusive(e.to_string()))
    }
}

struct Search<'a> {
    n: usize,
    /// entry[i*n + j] = (B_k[i,j])_k as a row vector
    entry: Vec<CMatrix>,
    tol: f64,
    budget: usize,
    nodes: &'a AtomicUsize,
}

/// A complete permutation and what its admissible f-space turned out to be.
type Found = (Vec<usize>, Leaf);

enum Leaf {
    Family(IsometryFamily),
    Inconclusive,
}

impl Search<'_> {
    fn entry_row(&self, i: usize, j: usize, c: &CMatrix) -> CMatrix {
        &self.entry[i * self.n + j] * c
    }

    fn branch(&self, j: usize, i: usize, c: &CMatrix, used: &[bool]) -> Option<CMatrix> {
        let n = self.n;
        if used[i] || self.entry_row(i, j, c).norm() <= self.tol {
            return None;
        }
        let d = c.ncols();
        let mut w = CMatrix::zeros(n - 1, d);
        for (r, i2) in (0..n).filter(|&i2| i2 != i).enumerate() {
            w.row_mut(r).copy_from(&self.entry_row(i2, j, c));
        }
        let ns = null_space(&w, RANK_TOL);
        if ns.ncols() == 0 {
            return None;
        }
        let c2 = c * ns;
        if self.entry_row(i, j, &c2).norm() <= self.tol {
            return None;
        }
        Some(c2)
    }

    fn run(
        &self,
        j: usize,
        c: CMatrix,
        phi: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Found>,
    ) -> Result<(), AnalysisError> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(AnalysisError::SearchTooLarge { budget: self.budget });
        }
        if j == self.n {
            out.push((phi.clone(), self.leaf(phi, &c)));
            return Ok(());
        }
        for i in 0..self.n {
            if let Some(c2) = self.branch(j, i, &c, used) {
                phi.push(i);
                used[i] = true;
                self.run(j + 1, c2, phi, used, out)?;
                used[i] = false;
                phi.pop();
            }
        }
        Ok(())
    }

    fn leaf(&self, phi: &[usize], c: &CMatrix) -> Leaf {
        let n = self.n;
        let d = c.ncols();
        // rows of fm span the admissible f-vectors
        let mut fm = CMatrix::zeros(d, n);
        for (j, &i) in phi.iter().enumerate() {
            let row = self.entry_row(i, j, c);
            for l in 0..d {
                fm[(l, i)] = row[(0, l)];
            }
        }
        let rows = rref(&fm, self.tol);
        let mut owner = vec![None; n];
        let mut f = vec![Complex64::new(0.0, 0.0); n];
        for (l, row) in rows.iter().enumerate() {
            let support: Vec<usize> = (0..n).filter(|&k| row[k].norm() > self.tol).collect();
            let Some(&k0) = support.first() else { return Leaf::Inconclusive };
            let modulus = row[k0].norm();
            for &k in &support {
                if owner[k].is_some() || (row[k].norm() - modulus).abs() > 1e-7 * modulus {
                    return Leaf::Inconclusive;
                }
                owner[k] = Some(l);
                f[k] = row[k] / modulus;
            }
        }
        if owner.iter().any(|o| o.is_none()) {
            return Leaf::Inconclusive;
        }
        // rotate the phase block holding column 0 so that entry becomes 1
        let anchor = f[phi[0]].conj();
        let anchor_block = owner[phi[0]];
        for k in 0..n {
            if owner[k] == anchor_block {
                f[k] *= anchor;
            }
        }
        Leaf::Family(IsometryFamily { base: IsometryForm { f, phi: phi.to_vec() }, free_phases: rows.len() })
    }
}

/// Reduced row echelon form; returns the nonzero rows.
fn rref(m: &CMatrix, tol: f64) -> Vec<Vec<Complex64>> {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let (piv, val) = (r..rows).map(|i| (i, a[(i, c)].norm())).fold((r, -1.0), |b, x| if x.1 > b.1 { x } else { b });
        if val <= tol {
            continue;
        }
        a.swap_rows(r, piv);
        let p = a[(r, c)];
        for k in 0..cols {
            a[(r, k)] /= p;
        }
        for i in 0..rows {
            if i != r {
                let fct = a[(i, c)];
                if fct != Complex64::new(0.0, 0.0) {
                    for k in 0..cols {
                        let v = a[(r, k)];
                        a[(i, k)] -= fct * v;
                    }
                }
            }
        }
        r += 1;
    }
    (0..r).map(|i| a.row(i).iter().copied().collect()).collect()
}

/// Invertible isometries of ℓ^p(n) lying in span(basis), grouped by permutation.
pub fn isometries_in_algebra(
    basis: &[CMatrix],
    p: Exponent,
    cfg: &IsometrySearchConfig,
) -> Result<IsometryGroup, AnalysisError> {
    p.require_not_two("the isometry search")?;
    let basis = span_basis(basis);
    let Some(first) = basis.first() else {
        return Ok(IsometryGroup { families: Vec::new(), inconclusive: 0, nodes: 0 });
    };
    let n = first.nrows();
    let k = basis.len();
    let entry: Vec<CMatrix> =
        (0..n * n).map(|idx| CMatrix::from_fn(1, k, |_, l| basis[l][(idx / n, idx % n)])).collect();
    let nodes = AtomicUsize::new(0);
    let search = Search { n, entry, tol: cfg.tol, budget: cfg.node_budget, nodes: &nodes };
    let root = CMatrix::identity(k, k);
    let used0 = vec![false; n];
    let per_branch: Vec<Result<Vec<Found>, AnalysisError>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            if search.nodes.fetch_add(1, Ordering::Relaxed) >= search.budget {
                return Err(AnalysisError::SearchTooLarge { budget: search.budget });
            }
            if let Some(c2) = search.branch(0, i, &root, &used0) {
                let mut used = used0.clone();
                used[i] = true;
                search.run(1, c2, &mut vec![i], &mut used, &mut out)?;
            }
            Ok(out)
        })
        .collect();
    let mut families = Vec::new();
    let mut inconclusive = 0;
    for branch in per_branch {
        for (_, leaf) in branch? {
            match leaf {
                Leaf::Family(f) => families.push(f),
                Leaf::Inconclusive => inconclusive += 1,
            }
        }
    }
    // sanity: every base is a genuine isometry in Lamperti form
    for fam in &families {
        let back = lamperti_decompose(&fam.base.to_matrix(), p, LAMPERTI_TOL)?;
        debug_assert_eq!(back.phi, fam.base.phi);
    }
    Ok(IsometryGroup { families, inconclusive, nodes: nodes.load(Ordering::Relaxed) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(n: usize, s: usize) -> CMatrix {
        CMatrix::from_fn(n, n, |i, j| if i == (j + s) % n { Complex64::new(1., 0.) } else { Complex64::new(0., 0.) })
    }

    #[test]
    fn cyclic_shift_algebra() {
        let basis: Vec<CMatrix> = (0..4).map(|s| perm(4, s)).collect();
        let g = isometries_in_algebra(&basis, Exponent::Finite(3.0), &IsometrySearchConfig::default()).unwrap();
        assert_eq!(g.families.len(), 4);
        assert!(g.families.iter().all(|f| f.free_phases == 1));
        assert_eq!(g.inconclusive, 0);
        let pi0 = g.pi0().unwrap();
        assert!(crate::structures::find_isomorphism(&pi0, &FiniteGroup::cyclic(4)).is_some());
        assert_eq!(g.phase_group(2).unwrap().len(), 8);
    }

    #[test]
    fn diagonal_algebra_has_a_torus() {
        let basis: Vec<CMatrix> = (0..3)
            .map(|i| {
                CMatrix::from_fn(
                    3,
                    3,
                    |a, b| if a == i && b == i { Complex64::new(1., 0.) } else { Complex64::new(0., 0.) },
                )
            })
            .collect();
        let g = isometries_in_algebra(&basis, Exponent::Infinity, &IsometrySearchConfig::default()).unwrap();
        assert_eq!(g.families.len(), 1);
        assert_eq!(g.families[0].free_phases, 3);
    }

    #[test]
    fn full_matrix_algebra_budget() {
        let n = 6;
        let basis: Vec<CMatrix> = (0..n * n)
            .map(|idx| {
                CMatrix::from_fn(
                    n,
                    n,
                    |a, b| if a * n + b == idx { Complex64::new(1., 0.) } else { Complex64::new(0., 0.) },
                )
            })
            .collect();
        let cfg = IsometrySearchConfig { node_budget: 100, tol: 1e-8 };
        assert!(matches!(
            isometries_in_algebra(&basis, Exponent::Finite(3.0), &cfg),
            Err(AnalysisError::SearchTooLarge { .. })
        ));
    }

    #[test]
    fn refuses_p_two() {
        assert!(isometries_in_algebra(&[perm(2, 1)], Exponent::Finite(2.0), &IsometrySearchConfig::default()).is_err());
    }
}
