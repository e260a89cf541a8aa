//! Linear systems over ℤ_M and the cohomologous-ness decision.

use super::{Coboundary, Cocycle, CohomologyError};
use crate::scalar::{gcd, lcm, UnitScalar};
use crate::structures::{Carrier, FiniteGroup, FiniteGroupoid};
use serde::Serialize;

/// Solves A·x ≡ b (mod modulus) by diagonalising A with unimodular integer
/// row and column operations, reducing modulo `modulus` throughout.
/// Returns one solution (free coordinates set to 0) or `None`.
pub fn solve_mod(a: &[Vec<i64>], b: &[i64], modulus: u64) -> Option<Vec<u64>> {
    assert!(modulus > 0);
    let md = modulus as i128;
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    assert_eq!(b.len(), rows);
    let red = |x: i128| x.rem_euclid(md);
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| red(x as i128)).collect()).collect();
    let mut rhs: Vec<i128> = b.iter().map(|&x| red(x as i128)).collect();
    let mut v: Vec<Vec<i128>> = (0..cols).map(|i| (0..cols).map(|j| (i == j) as i128).collect()).collect();

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| m[i][j] != 0)
            .min_by_key(|&(i, j)| m[i][j])
        else {
            break;
        };
        m.swap(t, pi);
        rhs.swap(t, pi);
        if pj != t {
            for row in m.iter_mut().chain(v.iter_mut()) {
                row.swap(t, pj);
            }
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if m[i][t] != 0 {
                    dirty = true;
                    let (x, y, u, w) = combine(m[t][t], m[i][t]);
                    for j in t..cols {
                        let (rt, ri) = (m[t][j], m[i][j]);
                        m[t][j] = red(x * rt + y * ri);
                        m[i][j] = red(u * rt + w * ri);
                    }
                    let (rt, ri) = (rhs[t], rhs[i]);
                    rhs[t] = red(x * rt + y * ri);
                    rhs[i] = red(u * rt + w * ri);
                }
            }
            for j in t + 1..cols {
                if m[t][j] != 0 {
                    dirty = true;
                    let (x, y, u, w) = combine(m[t][t], m[t][j]);
                    for row in m.iter_mut().skip(t).chain(v.iter_mut()) {
                        let (ct, cj) = (row[t], row[j]);
                        row[t] = red(x * ct + y * cj);
                        row[j] = red(u * ct + w * cj);
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        t += 1;
    }

    let mut y = vec![0i128; cols];
    for i in 0..rows {
        let d = if i < cols { m[i][i] } else { 0 };
        let c = rhs[i];
        let g = gcd(d as u64, modulus) as i128;
        if c % g != 0 {
            return None;
        }
        if i < cols && d != 0 {
            let mg = md / g;
            let inv = mod_inverse((d / g).rem_euclid(mg), mg).expect("unit after dividing by gcd");
            y[i] = red((c / g) * inv % mg);
        }
    }
    let x: Vec<u64> = (0..cols).map(|i| red((0..cols).map(|j| v[i][j] * y[j] % md).sum::<i128>()) as u64).collect();
    Some(x)
}

/// Unimodular 2×2 transform [[x, y], [u, w]] sending (p, q) to (gcd, 0).
/// When p divides q it is a plain elimination, so the pivot is unchanged;
/// otherwise the pivot strictly decreases, which makes the sweep terminate.
fn combine(p: i128, q: i128) -> (i128, i128, i128, i128) {
    if q % p == 0 {
        return (1, 0, -(q / p), 1);
    }
    let (g, x, y) = ext_gcd(p, q);
    (x, y, -q / g, p / g)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd(a, m);
    (g == 1).then(|| x.rem_euclid(m))
}

/// Result of a cohomology decision.
#[derive(Debug, Clone)]
pub struct CohomologyAnswer<C> {
    /// γ with δγ = σ·conj(κ), if one was found.
    pub witness: Option<Coboundary<C>>,
    /// m*: the order of the roots of unity searched.
    pub search_order: u64,
    /// True when a negative answer is a proof (exact inputs, m* a multiple of
    /// the sufficient order). Positive answers are always verified.
    pub certified: bool,
}

impl<C> CohomologyAnswer<C> {
    pub fn cohomologous(&self) -> bool {
        self.witness.is_some()
    }

    pub fn summary(&self) -> CohomologySummary {
        CohomologySummary {
            cohomologous: self.witness.is_some(),
            search_order: self.search_order,
            certified: self.certified || self.witness.is_some(),
            note: if self.witness.is_some() {
                "witness verified exactly"
            } else if self.certified {
                "certified negative"
            } else {
                "not found up to search order"
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CohomologySummary {
    pub cohomologous: bool,
    pub search_order: u64,
    pub certified: bool,
    pub note: &'static str,
}

/// Carriers for which a sufficient coboundary order is known.
pub trait CohomologyCarrier: Carrier + Clone + PartialEq {
    /// L such that, for σ, κ in μ_m, a coboundary exists over 𝕋 iff one
    /// exists over μ_{m·L}.
    fn sufficient_factor(&self) -> u64;
}

impl CohomologyCarrier for FiniteGroup {
    fn sufficient_factor(&self) -> u64 {
        self.len() as u64
    }
}

impl CohomologyCarrier for FiniteGroupoid {
    fn sufficient_factor(&self) -> u64 {
        self.units().iter().fold(1, |acc, &x| lcm(acc, self.isotropy(x).1.len() as u64))
    }
}

/// Decides whether σ ∼ κ. With `search_order = None` exact inputs use
/// m* = m·L (see [`CohomologyCarrier`]); float inputs need an explicit m*.
pub fn decide_cohomologous<C: CohomologyCarrier>(
    sigma: &Cocycle<C>,
    kappa: &Cocycle<C>,
    search_order: Option<u64>,
) -> Result<CohomologyAnswer<C>, CohomologyError> {
    if sigma.carrier() != kappa.carrier() {
        return Err(CohomologyError::MismatchedCarriers);
    }
    let carrier = sigma.carrier();
    let exact = sigma.is_exact() && kappa.is_exact();
    let sufficient = match (sigma.exact_order(), kappa.exact_order()) {
        (Some(a), Some(b)) => Some(lcm(a, b) * carrier.sufficient_factor()),
        _ => None,
    };
    let ms = match (search_order, sufficient) {
        (Some(0), _) => return Err(CohomologyError::Malformed("search order 0".into())),
        (Some(ms), _) => ms,
        (None, Some(s)) => s,
        (None, None) => return Err(CohomologyError::NotExact),
    };
    let certified = exact && sufficient.is_some_and(|s| ms % s == 0);
    let target = sigma.product(&kappa.conj())?;
    let Some(t) = target.exponents(ms) else {
        return Ok(CohomologyAnswer { witness: None, search_order: ms, certified });
    };
    let n = carrier.size();
    let pairs = carrier.composable();
    let a: Vec<Vec<i64>> = pairs
        .iter()
        .map(|&(x, y, xy)| {
            let mut row = vec![0i64; n];
            row[x] += 1;
            row[y] += 1;
            row[xy] -= 1;
            row
        })
        .collect();
    let b: Vec<i64> = pairs.iter().map(|&(x, y, _)| t[x * n + y] as i64).collect();
    let Some(g) = solve_mod(&a, &b, ms) else {
        return Ok(CohomologyAnswer { witness: None, search_order: ms, certified });
    };
    let gamma: Vec<UnitScalar> = g.iter().map(|&e| UnitScalar::mu(e as i64, ms)).collect();
    let cob = Coboundary::new(carrier.clone(), gamma)?;
    // exact check against the (snapped) target exponents
    let d = cob.cocycle();
    let ok = pairs.iter().all(|&(x, y, _)| d.value(x, y).exponent_in(ms) == Some(t[x * n + y]));
    assert!(ok, "solver witness failed verification");
    Ok(CohomologyAnswer { witness: Some(cob), search_order: ms, certified })
}

/// Witness γ with δγ = σ·conj(κ), or `None` (certified negative for exact input).
pub fn are_cohomologous<C: CohomologyCarrier>(
    sigma: &Cocycle<C>,
    kappa: &Cocycle<C>,
) -> Result<Option<Coboundary<C>>, CohomologyError> {
    Ok(decide_cohomologous(sigma, kappa, None)?.witness)
}
