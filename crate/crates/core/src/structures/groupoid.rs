use super::{Carrier, FiniteGroup, StructureError};
use serde::{Deserialize, Serialize};

/// A finite discrete groupoid. Arrows are `0..arrows`; the units are a subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    n: usize,
    units: Vec<usize>,
    is_unit: Vec<bool>,
    s: Vec<usize>,
    r: Vec<usize>,
    mul: Vec<Option<usize>>,
    inv: Vec<usize>,
}

/// JSON form `{ "arrows", "units", "s", "r", "mul": [[a,b,c]], "inv" }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupoidJson {
    pub arrows: usize,
    pub units: Vec<usize>,
    pub s: Vec<usize>,
    pub r: Vec<usize>,
    pub mul: Vec<[usize; 3]>,
    pub inv: Vec<usize>,
}

impl FiniteGroupoid {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn units(&self) -> &[usize] {
        &self.units
    }

    pub fn s(&self, a: usize) -> usize {
        self.s[a]
    }

    pub fn r(&self, a: usize) -> usize {
        self.r[a]
    }

    pub fn mul(&self, a: usize, b: usize) -> Option<usize> {
        self.mul[a * self.n + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn unit_position(&self, x: usize) -> Option<usize> {
        self.units.iter().position(|&u| u == x)
    }

    /// Arrows with source `x`, in increasing id order (the fiber 𝒢ₓ).
    pub fn source_fiber(&self, x: usize) -> Vec<usize> {
        (0..self.n).filter(|&a| self.s[a] == x).collect()
    }

    /// Arrows with range `x` (the fiber 𝒢ˣ).
    pub fn range_fiber(&self, x: usize) -> Vec<usize> {
        (0..self.n).filter(|&a| self.r[a] == x).collect()
    }

    pub fn to_json(&self) -> GroupoidJson {
        let mut mul = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if let Some(c) = self.mul(a, b) {
                    mul.push([a, b, c]);
                }
            }
        }
        GroupoidJson {
            arrows: self.n,
            units: self.units.clone(),
            s: self.s.clone(),
            r: self.r.clone(),
            mul,
            inv: self.inv.clone(),
        }
    }

    pub fn from_json(j: &GroupoidJson) -> Result<Self, StructureError> {
        build_groupoid(j.arrows, &j.units, &j.s, &j.r, &j.mul, &j.inv)
    }

    /// Pair groupoid on k points. Arrow (i, j) has index i*k + j, range i and source j.
    pub fn pair(k: usize) -> Self {
        let idx = |i: usize, j: usize| i * k + j;
        let n = k * k;
        let units: Vec<usize> = (0..k).map(|i| idx(i, i)).collect();
        let s: Vec<usize> = (0..n).map(|a| idx(a % k, a % k)).collect();
        let r: Vec<usize> = (0..n).map(|a| idx(a / k, a / k)).collect();
        let mut mul = Vec::new();
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    mul.push([idx(i, j), idx(j, l), idx(i, l)]);
                }
            }
        }
        let inv: Vec<usize> = (0..n).map(|a| idx(a % k, a / k)).collect();
        build_groupoid(n, &units, &s, &r, &mul, &inv).expect("pair groupoid is valid")
    }

    /// A group as a groupoid with one unit.
    pub fn from_group(g: &FiniteGroup) -> Self {
        let n = g.len();
        let e = g.identity();
        let mut mul = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                mul.push([a, b, g.op(a, b)]);
            }
        }
        let inv: Vec<usize> = (0..n).map(|a| g.inv(a)).collect();
        build_groupoid(n, &[e], &vec![e; n], &vec![e; n], &mul, &inv).expect("group is a groupoid")
    }

    /// Disjoint union; arrows of `other` are shifted by `self.len()`.
    pub fn disjoint_union(&self, other: &FiniteGroupoid) -> Self {
        let off = self.n;
        let n = self.n + other.n;
        let units: Vec<usize> = self.units.iter().copied().chain(other.units.iter().map(|u| u + off)).collect();
        let s: Vec<usize> = self.s.iter().copied().chain(other.s.iter().map(|x| x + off)).collect();
        let r: Vec<usize> = self.r.iter().copied().chain(other.r.iter().map(|x| x + off)).collect();
        let inv: Vec<usize> = self.inv.iter().copied().chain(other.inv.iter().map(|x| x + off)).collect();
        let mut mul = self.to_json().mul;
        mul.extend(other.to_json().mul.into_iter().map(|[a, b, c]| [a + off, b + off, c + off]));
        build_groupoid(n, &units, &s, &r, &mul, &inv).expect("disjoint union is valid")
    }

    /// Isotropy group 𝒢ₓˣ together with the arrow ids of its elements.
    pub fn isotropy(&self, x: usize) -> (FiniteGroup, Vec<usize>) {
        let arrows: Vec<usize> = (0..self.n).filter(|&a| self.s[a] == x && self.r[a] == x).collect();
        let pos = |a: usize| arrows.iter().position(|&b| b == a).expect("closed under product");
        let table: Vec<Vec<usize>> = arrows
            .iter()
            .map(|&a| arrows.iter().map(|&b| pos(self.mul(a, b).expect("composable"))).collect())
            .collect();
        (super::build_group(&table).expect("isotropy is a group"), arrows)
    }

    pub fn properties(&self) -> GroupoidProperties {
        let isotropy: Vec<(usize, FiniteGroup)> = self.units.iter().map(|&x| (x, self.isotropy(x).0)).collect();
        let principal = isotropy.iter().all(|(_, g)| g.len() == 1);
        GroupoidProperties { is_principal: principal, is_effective: principal, isotropy }
    }

    pub fn is_principal(&self) -> bool {
        self.units.iter().all(|&x| (0..self.n).filter(|&a| self.s[a] == x && self.r[a] == x).count() == 1)
    }
}

/// Output of `groupoid_properties`.
#[derive(Debug, Clone)]
pub struct GroupoidProperties {
    pub is_principal: bool,
    /// For finite discrete groupoids effectiveness coincides with principality.
    pub is_effective: bool,
    pub isotropy: Vec<(usize, FiniteGroup)>,
}

pub fn groupoid_properties(g: &FiniteGroupoid) -> GroupoidProperties {
    g.properties()
}

pub fn build_groupoid(
    arrows: usize,
    units: &[usize],
    s: &[usize],
    r: &[usize],
    mul: &[[usize; 3]],
    inv: &[usize],
) -> Result<FiniteGroupoid, StructureError> {
    let n = arrows;
    if s.len() != n || r.len() != n || inv.len() != n {
        return Err(StructureError::Malformed("s, r and inv must have one entry per arrow".into()));
    }
    if let Some(&a) = units.iter().chain(s).chain(r).chain(inv).find(|&&a| a >= n) {
        return Err(StructureError::Malformed(format!("arrow id {a} out of range")));
    }
    let mut is_unit = vec![false; n];
    for &u in units {
        if is_unit[u] {
            return Err(StructureError::BadUnits(format!("unit {u} listed twice")));
        }
        is_unit[u] = true;
    }
    for a in 0..n {
        if !is_unit[s[a]] || !is_unit[r[a]] {
            return Err(StructureError::BadUnits(format!("s or r of arrow {a} is not a unit")));
        }
    }
    for &u in units {
        if s[u] != u || r[u] != u {
            return Err(StructureError::BadUnits(format!("unit {u} is not fixed by s and r")));
        }
    }
    let mut table = vec![None; n * n];
    for &[a, b, c] in mul {
        if a >= n || b >= n || c >= n {
            return Err(StructureError::Malformed(format!("product ({a},{b}) -> {c} out of range")));
        }
        if s[a] != r[b] {
            return Err(StructureError::DomainMismatch(a, b));
        }
        if table[a * n + b].replace(c).is_some_and(|old| old != c) {
            return Err(StructureError::Malformed(format!("product ({a},{b}) given twice")));
        }
        if r[c] != r[a] || s[c] != s[b] {
            return Err(StructureError::DomainMismatch(a, b));
        }
    }
    for a in 0..n {
        for b in 0..n {
            if s[a] == r[b] && table[a * n + b].is_none() {
                return Err(StructureError::DomainMismatch(a, b));
            }
        }
    }
    let m = |a: usize, b: usize| table[a * n + b];
    for a in 0..n {
        if m(r[a], a) != Some(a) || m(a, s[a]) != Some(a) {
            return Err(StructureError::BadUnits(format!("units do not act trivially on arrow {a}")));
        }
    }
    for a in 0..n {
        if m(a, inv[a]) != Some(r[a]) || m(inv[a], a) != Some(s[a]) {
            return Err(StructureError::BadInverse(a));
        }
    }
    for a in 0..n {
        for b in 0..n {
            let Some(ab) = m(a, b) else { continue };
            for c in 0..n {
                let Some(bc) = m(b, c) else { continue };
                if m(ab, c) != m(a, bc) {
                    return Err(StructureError::NonAssociative(a, b, c));
                }
            }
        }
    }
    // units are exactly the products α·α⁻¹
    let mut hit = vec![false; n];
    for a in 0..n {
        if let Some(u) = m(a, inv[a]) {
            hit[u] = true;
        }
    }
    if hit != is_unit {
        return Err(StructureError::BadUnits("unit set differs from {α·α⁻¹}".into()));
    }
    Ok(FiniteGroupoid {
        n,
        units: units.to_vec(),
        is_unit,
        s: s.to_vec(),
        r: r.to_vec(),
        mul: table,
        inv: inv.to_vec(),
    })
}

impl Carrier for FiniteGroupoid {
    fn size(&self) -> usize {
        self.n
    }
    fn source(&self, a: usize) -> usize {
        self.s[a]
    }
    fn range(&self, a: usize) -> usize {
        self.r[a]
    }
    fn compose(&self, a: usize, b: usize) -> Option<usize> {
        self.mul(a, b)
    }
    fn inverse(&self, a: usize) -> usize {
        self.inv[a]
    }
    fn unit_list(&self) -> &[usize] {
        &self.units
    }
    fn is_unit(&self, a: usize) -> bool {
        self.is_unit[a]
    }
}
