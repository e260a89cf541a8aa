use super::{CohomologyError, GroupCocycle};
use crate::structures::{build_group, FiniteGroup};

/// The finite Mackey group μ_m ×_σ G. Element (k, x) stands for (e^{2πik/m}, x)
/// and has index k·|G| + x.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MackeyGroup {
    pub group: FiniteGroup,
    pub m: u64,
    pub base_len: usize,
}

impl MackeyGroup {
    pub fn index(&self, k: u64, x: usize) -> usize {
        (k % self.m) as usize * self.base_len + x
    }

    pub fn split(&self, idx: usize) -> (u64, usize) {
        ((idx / self.base_len) as u64, idx % self.base_len)
    }
}

/// Mackey group with the least fiber order m carrying σ.
pub fn mackey_group(sigma: &GroupCocycle) -> Result<MackeyGroup, CohomologyError> {
    let m = sigma.exact_order().ok_or(CohomologyError::NotExact)?;
    mackey_group_with_order(sigma, m)
}

/// (γ₁,x₁)(γ₂,x₂) = (γ₁γ₂σ(x₁,x₂), x₁x₂) with fibers μ_m; m must carry σ.
pub fn mackey_group_with_order(sigma: &GroupCocycle, m: u64) -> Result<MackeyGroup, CohomologyError> {
    let g = sigma.group();
    let n = g.len();
    let e = sigma.exponents(m).ok_or(CohomologyError::NotExact)?;
    let size = m as usize * n;
    let table: Vec<Vec<usize>> = (0..size)
        .map(|a| {
            let (k1, x1) = (a / n, a % n);
            (0..size)
                .map(|b| {
                    let (k2, x2) = (b / n, b % n);
                    let k = (k1 as u64 + k2 as u64 + e[x1 * n + x2]) % m;
                    k as usize * n + g.op(x1, x2)
                })
                .collect()
        })
        .collect();
    let group = build_group(&table).map_err(|err| CohomologyError::Malformed(err.to_string()))?;
    Ok(MackeyGroup { group, m, base_len: n })
}
