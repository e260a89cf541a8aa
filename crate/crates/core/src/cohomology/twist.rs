use super::{CohomologyError, GroupoidCocycle};
use crate::scalar::UnitScalar;
use crate::structures::{build_groupoid, FiniteGroupoid};

/// The twist E_σ over 𝒢 with μ_m fibers. Arrow (γ, k) has index γ·m + k and
/// stands for (γ, e^{2πik/m}).
#[derive(Debug, Clone)]
pub struct Twist {
    pub total: FiniteGroupoid,
    pub base: FiniteGroupoid,
    pub m: u64,
}

impl Twist {
    pub fn element(&self, gamma: usize, k: u64) -> usize {
        gamma * self.m as usize + (k % self.m) as usize
    }

    /// π(γ, z) = γ.
    pub fn pi(&self, e: usize) -> usize {
        e / self.m as usize
    }

    pub fn phase(&self, e: usize) -> u64 {
        (e % self.m as usize) as u64
    }

    /// i(x, z) = (x, z) for a unit x.
    pub fn incl(&self, x: usize, k: u64) -> usize {
        self.element(x, k)
    }

    /// z·ε = i(r(ε), z)·ε.
    pub fn act(&self, k: u64, e: usize) -> usize {
        let r = self.base.r(self.pi(e));
        self.total.mul(self.incl(r, k), e).expect("composable")
    }

    /// Cocycle of a section S with S(x) = (x, 1) on units, read off from
    /// S(α)S(β)S(αβ)⁻¹ = i(r(α), ω(α,β)).
    pub fn section_cocycle(&self, section: &[usize]) -> Result<GroupoidCocycle, CohomologyError> {
        let g = &self.base;
        let n = g.len();
        if section.len() != n || (0..n).any(|a| self.pi(section[a]) != a) {
            return Err(CohomologyError::Malformed("not a section of π".into()));
        }
        if g.units().iter().any(|&x| section[x] != self.incl(x, 0)) {
            return Err(CohomologyError::Malformed("section must be trivial on units".into()));
        }
        let t = &self.total;
        let mut table = vec![UnitScalar::ONE; n * n];
        for a in 0..n {
            for b in 0..n {
                let Some(ab) = g.mul(a, b) else { continue };
                let prod = t.mul(section[a], section[b]).expect("composable");
                let w = t.mul(prod, t.inv(section[ab])).expect("composable");
                debug_assert_eq!(self.pi(w), g.r(a));
                table[a * n + b] = UnitScalar::mu(self.phase(w) as i64, self.m);
            }
        }
        GroupoidCocycle::validate(g.clone(), table)
    }

    /// Checks the twist axioms for μ_m fibers; returns a description of the
    /// first violation.
    pub fn check_axioms(&self) -> Result<(), String> {
        let g = &self.base;
        let t = &self.total;
        let m = self.m;
        for &x in g.units() {
            for k in 0..m {
                if self.pi(self.incl(x, k)) != x {
                    return Err(format!("π∘i is not the unit embedding at ({x},{k})"));
                }
            }
        }
        // π⁻¹(units) = i(units × μ_m)
        for e in 0..t.len() {
            if g.units().contains(&self.pi(e)) && self.incl(self.pi(e), self.phase(e)) != e {
                return Err(format!("element {e} over a unit is not in the image of i"));
            }
        }
        for e in 0..t.len() {
            let gamma = self.pi(e);
            // centrality: i(r(ε),z)ε = ε i(s(ε),z)
            for k in 0..m {
                let left = t.mul(self.incl(g.r(gamma), k), e);
                let right = t.mul(e, self.incl(g.s(gamma), k));
                if left.is_none() || left != right {
                    return Err(format!("centrality fails at ({e},{k})"));
                }
            }
            // the fiber over π(ε) is a free transitive μ_m-orbit
            let mut orbit: Vec<usize> = (0..m).map(|k| self.act(k, e)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            let fiber: Vec<usize> = (0..m).map(|k| self.element(gamma, k)).collect();
            if orbit != fiber {
                return Err(format!("μ_m does not act freely and transitively on the fiber of {e}"));
            }
        }
        Ok(())
    }
}

/// E_σ with the least fiber order carrying σ.
pub fn twist_groupoid(sigma: &GroupoidCocycle) -> Result<Twist, CohomologyError> {
    let m = sigma.exact_order().ok_or(CohomologyError::NotExact)?;
    twist_groupoid_with_order(sigma, m)
}

/// (α,z)(β,w) = (αβ, zwσ(α,β)); (α,z)⁻¹ = (α⁻¹, conj(σ(α⁻¹,α)z)).
pub fn twist_groupoid_with_order(sigma: &GroupoidCocycle, m: u64) -> Result<Twist, CohomologyError> {
    let g = sigma.groupoid();
    let n = g.len();
    let e = sigma.exponents(m).ok_or(CohomologyError::NotExact)?;
    let mu = m as usize;
    let idx = |a: usize, k: u64| a * mu + (k % m) as usize;
    let size = n * mu;
    let units: Vec<usize> = g.units().iter().map(|&x| idx(x, 0)).collect();
    let s: Vec<usize> = (0..size).map(|a| idx(g.s(a / mu), 0)).collect();
    let r: Vec<usize> = (0..size).map(|a| idx(g.r(a / mu), 0)).collect();
    let mut mul = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let Some(ab) = g.mul(a, b) else { continue };
            for k1 in 0..m {
                for k2 in 0..m {
                    mul.push([idx(a, k1), idx(b, k2), idx(ab, k1 + k2 + e[a * n + b])]);
                }
            }
        }
    }
    let inv: Vec<usize> = (0..size)
        .map(|x| {
            let (a, k) = (x / mu, (x % mu) as u64);
            let ai = g.inv(a);
            idx(ai, (2 * m - k - e[ai * n + a]) % m)
        })
        .collect();
    let total =
        build_groupoid(size, &units, &s, &r, &mul, &inv).map_err(|err| CohomologyError::Malformed(err.to_string()))?;
    Ok(Twist { total, base: g.clone(), m })
}
