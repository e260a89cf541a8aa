use super::CohomologyError;
use crate::scalar::{lcm, UnitScalar};
use crate::structures::{Carrier, FiniteGroup, FiniteGroupoid};
use serde::{Deserialize, Serialize};

/// A normalized 2-cocycle on a group or groupoid. The table is dense n×n;
/// entries at non-composable pairs are 1 and carry no meaning.
#[derive(Debug, Clone, PartialEq)]
pub struct Cocycle<C> {
    carrier: C,
    table: Vec<UnitScalar>,
}

pub type GroupCocycle = Cocycle<FiniteGroup>;
pub type GroupoidCocycle = Cocycle<FiniteGroupoid>;

/// A 1-cochain γ, trivial on units, with coboundary δγ(x,y) = γ(x)γ(y)conj(γ(xy)).
#[derive(Debug, Clone, PartialEq)]
pub struct Coboundary<C> {
    carrier: C,
    gamma: Vec<UnitScalar>,
}

/// JSON form. Exact cocycles use `m` and `exp`: an n×n exponent table for groups,
/// `[a, b, e]` triples for groupoids. Float cocycles use `values` (groups) or
/// `entries` (groupoids). Missing groupoid triples default to exponent 0.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CocycleJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exp: Option<Vec<Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<Vec<UnitScalar>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<(usize, usize, UnitScalar)>>,
}

impl<C: Carrier + Clone + PartialEq> Cocycle<C> {
    /// Validates a dense table (non-composable entries are ignored).
    pub fn validate(carrier: C, mut table: Vec<UnitScalar>) -> Result<Self, CohomologyError> {
        let n = carrier.size();
        if table.len() != n * n {
            return Err(CohomologyError::Malformed(format!("table has {} entries, expected {}", table.len(), n * n)));
        }
        for a in 0..n {
            for b in 0..n {
                if carrier.compose(a, b).is_none() {
                    table[a * n + b] = UnitScalar::ONE;
                }
            }
        }
        let v = |a: usize, b: usize| table[a * n + b];
        for g in 0..n {
            if !v(carrier.range(g), g).is_one() || !v(g, carrier.source(g)).is_one() {
                return Err(CohomologyError::NotNormalized(g));
            }
        }
        for (a, b, ab) in carrier.composable() {
            for c in 0..n {
                let Some(bc) = carrier.compose(b, c) else { continue };
                let lhs = v(a, b) * v(ab, c);
                let rhs = v(b, c) * v(a, bc);
                if !lhs.same(&rhs) {
                    return Err(CohomologyError::CocycleIdentityFails(a, b, c));
                }
            }
        }
        Ok(Cocycle { carrier, table })
    }

    pub fn trivial(carrier: C) -> Self {
        let n = carrier.size();
        Cocycle { carrier, table: vec![UnitScalar::ONE; n * n] }
    }

    /// Builds an exact cocycle in μ_m from an exponent function on composable pairs.
    pub fn from_exponents(carrier: C, m: u64, exp: impl Fn(usize, usize) -> i64) -> Result<Self, CohomologyError> {
        if m == 0 {
            return Err(CohomologyError::Malformed("m = 0".into()));
        }
        let n = carrier.size();
        let mut table = vec![UnitScalar::ONE; n * n];
        for (a, b, _) in carrier.composable() {
            table[a * n + b] = UnitScalar::mu(exp(a, b), m);
        }
        Self::validate(carrier, table)
    }

    pub fn carrier(&self) -> &C {
        &self.carrier
    }

    pub fn value(&self, a: usize, b: usize) -> UnitScalar {
        self.table[a * self.carrier.size() + b]
    }

    pub fn table(&self) -> &[UnitScalar] {
        &self.table
    }

    pub fn is_exact(&self) -> bool {
        self.table.iter().all(|z| z.is_exact())
    }

    /// Least m with all values in μ_m, or `None` for float cocycles.
    pub fn exact_order(&self) -> Option<u64> {
        self.table.iter().try_fold(1u64, |acc, z| z.order().map(|o| lcm(acc, o)))
    }

    /// Exponents in ℤ_m of every table entry.
    pub fn exponents(&self, m: u64) -> Option<Vec<u64>> {
        self.table.iter().map(|z| z.exponent_in(m)).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.table.iter().all(|z| z.is_one())
    }

    pub fn conj(&self) -> Self {
        Cocycle { carrier: self.carrier.clone(), table: self.table.iter().map(|z| z.conj()).collect() }
    }

    pub fn power(&self, k: i64) -> Self {
        Cocycle { carrier: self.carrier.clone(), table: self.table.iter().map(|z| z.pow(k)).collect() }
    }

    /// Pointwise product σ·κ.
    pub fn product(&self, other: &Self) -> Result<Self, CohomologyError> {
        if self.carrier != other.carrier {
            return Err(CohomologyError::MismatchedCarriers);
        }
        let table = self.table.iter().zip(&other.table).map(|(a, b)| *a * *b).collect();
        Ok(Cocycle { carrier: self.carrier.clone(), table })
    }

    /// Pointwise equality (exact where possible).
    pub fn same(&self, other: &Self) -> bool {
        self.carrier == other.carrier && self.table.iter().zip(&other.table).all(|(a, b)| a.same(b))
    }

    fn to_json_with(&self, group_like: bool) -> CocycleJson {
        let n = self.carrier.size();
        match self.exact_order() {
            Some(m) => {
                let e = self.exponents(m).expect("exact");
                let exp = if group_like {
                    e.chunks(n).map(|r| r.iter().map(|&x| x as i64).collect()).collect()
                } else {
                    self.carrier
                        .composable()
                        .into_iter()
                        .map(|(a, b, _)| vec![a as i64, b as i64, e[a * n + b] as i64])
                        .collect()
                };
                CocycleJson { m: Some(m), exp: Some(exp), ..Default::default() }
            }
            None if group_like => {
                CocycleJson { values: Some(self.table.chunks(n).map(|r| r.to_vec()).collect()), ..Default::default() }
            }
            None => CocycleJson {
                entries: Some(
                    self.carrier.composable().into_iter().map(|(a, b, _)| (a, b, self.value(a, b))).collect(),
                ),
                ..Default::default()
            },
        }
    }
}

impl GroupCocycle {
    pub fn group(&self) -> &FiniteGroup {
        &self.carrier
    }

    pub fn to_json(&self) -> CocycleJson {
        self.to_json_with(true)
    }

    pub fn from_json(g: &FiniteGroup, j: &CocycleJson) -> Result<Self, CohomologyError> {
        let n = g.len();
        let table: Vec<UnitScalar> = match (j.m, &j.exp, &j.values) {
            (Some(m), Some(exp), None) => {
                if m == 0 {
                    return Err(CohomologyError::Malformed("m = 0".into()));
                }
                check_square(exp.len(), exp.iter().map(|r| r.len()), n)?;
                exp.iter().flatten().map(|&e| UnitScalar::mu(e, m)).collect()
            }
            (None, None, Some(values)) => {
                check_square(values.len(), values.iter().map(|r| r.len()), n)?;
                values.iter().flatten().copied().collect()
            }
            _ => return Err(CohomologyError::Malformed("expected {m, exp} or {values}".into())),
        };
        Self::validate(g.clone(), table)
    }

    /// Pull back along a map ψ: domain → self.group(): (x, y) ↦ σ(ψx, ψy).
    pub fn pullback(&self, domain: &FiniteGroup, psi: &[usize]) -> Result<Self, CohomologyError> {
        let n = domain.len();
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(self.value(psi[a], psi[b]));
            }
        }
        Self::validate(domain.clone(), table)
    }

    /// σ_{k/N}((a,b),(c,d)) = e^{2πi·b·c·k/N} on ℤ_N² (index a*N + b).
    pub fn rotation(n: usize, k: i64) -> Self {
        let g = FiniteGroup::cyclic_square(n);
        Self::from_exponents(g, n as u64, |x, y| ((x % n) * (y / n)) as i64 * k).expect("rotation cocycle is valid")
    }
}

impl GroupoidCocycle {
    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.carrier
    }

    pub fn to_json(&self) -> CocycleJson {
        self.to_json_with(false)
    }

    pub fn from_json(g: &FiniteGroupoid, j: &CocycleJson) -> Result<Self, CohomologyError> {
        let n = g.len();
        let mut table = vec![UnitScalar::ONE; n * n];
        match (j.m, &j.exp, &j.entries) {
            (Some(m), Some(exp), None) => {
                if m == 0 {
                    return Err(CohomologyError::Malformed("m = 0".into()));
                }
                for t in exp {
                    let &[a, b, e] = t.as_slice() else {
                        return Err(CohomologyError::Malformed("groupoid entries are [a, b, e]".into()));
                    };
                    let (a, b) = (index(a, n)?, index(b, n)?);
                    if g.mul(a, b).is_none() {
                        return Err(CohomologyError::Malformed(format!("pair ({a},{b}) is not composable")));
                    }
                    table[a * n + b] = UnitScalar::mu(e, m);
                }
            }
            (None, None, Some(entries)) => {
                for &(a, b, z) in entries {
                    if a >= n || b >= n || g.mul(a, b).is_none() {
                        return Err(CohomologyError::Malformed(format!("pair ({a},{b}) is not composable")));
                    }
                    table[a * n + b] = z;
                }
            }
            _ => return Err(CohomologyError::Malformed("expected {m, exp} or {entries}".into())),
        }
        Self::validate(g.clone(), table)
    }
}

fn index(a: i64, n: usize) -> Result<usize, CohomologyError> {
    usize::try_from(a)
        .ok()
        .filter(|&a| a < n)
        .ok_or_else(|| CohomologyError::Malformed(format!("arrow {a} out of range")))
}

fn check_square(rows: usize, lens: impl Iterator<Item = usize>, n: usize) -> Result<(), CohomologyError> {
    if rows != n {
        return Err(CohomologyError::Malformed(format!("{rows} rows, expected {n}")));
    }
    for l in lens {
        if l != n {
            return Err(CohomologyError::Malformed(format!("row of length {l}, expected {n}")));
        }
    }
    Ok(())
}

/// Checks a full group table given as rows.
pub fn validate_group_cocycle(g: &FiniteGroup, table: &[Vec<UnitScalar>]) -> Result<GroupCocycle, CohomologyError> {
    check_square(table.len(), table.iter().map(|r| r.len()), g.len())?;
    Cocycle::validate(g.clone(), table.iter().flatten().copied().collect())
}

/// Checks a groupoid table given as (a, b, value) on composable pairs; missing pairs are 1.
pub fn validate_groupoid_cocycle(
    g: &FiniteGroupoid,
    entries: &[(usize, usize, UnitScalar)],
) -> Result<GroupoidCocycle, CohomologyError> {
    let n = g.len();
    let mut table = vec![UnitScalar::ONE; n * n];
    for &(a, b, z) in entries {
        if a >= n || b >= n || g.mul(a, b).is_none() {
            return Err(CohomologyError::Malformed(format!("pair ({a},{b}) is not composable")));
        }
        table[a * n + b] = z;
    }
    Cocycle::validate(g.clone(), table)
}

impl<C: Carrier + Clone + PartialEq> Coboundary<C> {
    pub fn new(carrier: C, gamma: Vec<UnitScalar>) -> Result<Self, CohomologyError> {
        if gamma.len() != carrier.size() {
            return Err(CohomologyError::Malformed("γ needs one value per element".into()));
        }
        if let Some(&u) = carrier.unit_list().iter().find(|&&u| !gamma[u].is_one()) {
            return Err(CohomologyError::NotNormalizedAtIdentity(u));
        }
        Ok(Coboundary { carrier, gamma })
    }

    pub fn trivial(carrier: C) -> Self {
        let n = carrier.size();
        Coboundary { carrier, gamma: vec![UnitScalar::ONE; n] }
    }

    pub fn gamma(&self) -> &[UnitScalar] {
        &self.gamma
    }

    pub fn carrier(&self) -> &C {
        &self.carrier
    }

    /// δγ(x,y) = γ(x)γ(y)conj(γ(xy)).
    pub fn cocycle(&self) -> Cocycle<C> {
        let n = self.carrier.size();
        let mut table = vec![UnitScalar::ONE; n * n];
        for (a, b, ab) in self.carrier.composable() {
            table[a * n + b] = self.gamma[a] * self.gamma[b] * self.gamma[ab].conj();
        }
        Cocycle::validate(self.carrier.clone(), table).expect("coboundaries are cocycles")
    }
}

/// The coboundary of γ; fails if γ is not 1 on units.
pub fn coboundary<C: Carrier + Clone + PartialEq>(
    carrier: C,
    gamma: Vec<UnitScalar>,
) -> Result<Cocycle<C>, CohomologyError> {
    Ok(Coboundary::new(carrier, gamma)?.cocycle())
}
