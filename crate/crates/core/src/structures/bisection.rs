use super::{FiniteGroupoid, StructureError};
use std::collections::BTreeMap;

pub const MAX_BISECTION_ARROWS: usize = 24;

/// An arrow set on which s and r are injective. Arrows are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bisection {
    arrows: Vec<usize>,
}

impl Bisection {
    pub fn new(g: &FiniteGroupoid, arrows: &[usize]) -> Option<Self> {
        is_bisection(g, arrows).then(|| {
            let mut a = arrows.to_vec();
            a.sort_unstable();
            a.dedup();
            Bisection { arrows: a }
        })
    }

    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    pub fn contains(&self, a: usize) -> bool {
        self.arrows.binary_search(&a).is_ok()
    }

    pub fn units(g: &FiniteGroupoid) -> Self {
        Bisection { arrows: g.units().to_vec() }
    }

    /// The arrow of B with source x, i.e. Bx.
    pub fn arrow_from(&self, g: &FiniteGroupoid, x: usize) -> Option<usize> {
        self.arrows.iter().copied().find(|&a| g.s(a) == x)
    }

    pub fn source_set(&self, g: &FiniteGroupoid) -> Vec<usize> {
        let mut v: Vec<usize> = self.arrows.iter().map(|&a| g.s(a)).collect();
        v.sort_unstable();
        v
    }

    pub fn range_set(&self, g: &FiniteGroupoid) -> Vec<usize> {
        let mut v: Vec<usize> = self.arrows.iter().map(|&a| g.r(a)).collect();
        v.sort_unstable();
        v
    }

    /// β_B(x) = r(Bx) on s(B).
    pub fn beta(&self, g: &FiniteGroupoid) -> BTreeMap<usize, usize> {
        self.arrows.iter().map(|&a| (g.s(a), g.r(a))).collect()
    }

    pub fn inverse(&self, g: &FiniteGroupoid) -> Self {
        let mut a: Vec<usize> = self.arrows.iter().map(|&x| g.inv(x)).collect();
        a.sort_unstable();
        Bisection { arrows: a }
    }

    /// BC = {bc : b ∈ B, c ∈ C composable}.
    pub fn product(&self, other: &Bisection, g: &FiniteGroupoid) -> Self {
        let mut a = Vec::new();
        for &b in &self.arrows {
            for &c in &other.arrows {
                if let Some(bc) = g.mul(b, c) {
                    a.push(bc);
                }
            }
        }
        a.sort_unstable();
        a.dedup();
        Bisection { arrows: a }
    }
}

pub fn is_bisection(g: &FiniteGroupoid, arrows: &[usize]) -> bool {
    let mut seen_s = vec![false; g.len()];
    let mut seen_r = vec![false; g.len()];
    let mut seen = vec![false; g.len()];
    for &a in arrows {
        if a >= g.len() {
            return false;
        }
        if seen[a] {
            continue;
        }
        seen[a] = true;
        if std::mem::replace(&mut seen_s[g.s(a)], true) || std::mem::replace(&mut seen_r[g.r(a)], true) {
            return false;
        }
    }
    true
}

/// All maximal bisections, built as maximal partial matchings between sources and ranges.
pub fn bisections(g: &FiniteGroupoid) -> Result<Vec<Bisection>, StructureError> {
    if g.len() > MAX_BISECTION_ARROWS {
        return Err(StructureError::TooManyArrows { arrows: g.len(), cap: MAX_BISECTION_ARROWS });
    }
    let units = g.units().to_vec();
    let by_source: Vec<Vec<usize>> = units.iter().map(|&x| g.source_fiber(x)).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let mut used_r = vec![false; g.len()];
    extend(g, &units, &by_source, 0, &mut chosen, &mut used_r, &mut out);
    out.sort();
    Ok(out)
}

fn extend(
    g: &FiniteGroupoid,
    units: &[usize],
    by_source: &[Vec<usize>],
    i: usize,
    chosen: &mut Vec<usize>,
    used_r: &mut [bool],
    out: &mut Vec<Bisection>,
) {
    if i == units.len() {
        let mut used_s = vec![false; g.len()];
        for &a in chosen.iter() {
            used_s[g.s(a)] = true;
        }
        let maximal = (0..g.len()).all(|a| used_s[g.s(a)] || used_r[g.r(a)]);
        if maximal {
            let mut arrows = chosen.clone();
            arrows.sort_unstable();
            out.push(Bisection { arrows });
        }
        return;
    }
    for &a in &by_source[i] {
        if !used_r[g.r(a)] {
            used_r[g.r(a)] = true;
            chosen.push(a);
            extend(g, units, by_source, i + 1, chosen, used_r, out);
            chosen.pop();
            used_r[g.r(a)] = false;
        }
    }
    extend(g, units, by_source, i + 1, chosen, used_r, out);
}
