use super::{Carrier, StructureError};
use serde::{Deserialize, Serialize};

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    mul: Vec<usize>,
    e: usize,
    inv: Vec<usize>,
    units: [usize; 1],
}

/// JSON form `{ "n": int, "mul": [[int]] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupJson {
    pub n: usize,
    pub mul: Vec<Vec<usize>>,
}

impl FiniteGroup {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn identity(&self) -> usize {
        self.e
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.e {
            x = self.op(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.op(a, b) == self.op(b, a)))
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson { n: self.n, mul: self.table() }
    }

    pub fn from_json(j: &GroupJson) -> Result<Self, StructureError> {
        if j.mul.len() != j.n {
            return Err(StructureError::Malformed(format!("table has {} rows, expected {}", j.mul.len(), j.n)));
        }
        build_group(&j.mul)
    }

    /// ℤ_n with addition.
    pub fn cyclic(n: usize) -> Self {
        let t: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        build_group(&t).expect("cyclic table is a group")
    }

    /// Direct product; element (a, b) has index a * |other| + b.
    pub fn product(&self, other: &FiniteGroup) -> Self {
        let (n1, n2) = (self.n, other.n);
        let t: Vec<Vec<usize>> = (0..n1 * n2)
            .map(|x| (0..n1 * n2).map(|y| self.op(x / n2, y / n2) * n2 + other.op(x % n2, y % n2)).collect())
            .collect();
        build_group(&t).expect("product of groups is a group")
    }

    /// ℤ_N × ℤ_N with (a, b) at index a * N + b.
    pub fn cyclic_square(n: usize) -> Self {
        Self::cyclic(n).product(&Self::cyclic(n))
    }
}

/// Validates a multiplication table. Checks run in the order: shape, identity,
/// inverses, associativity.
pub fn build_group(mul: &[Vec<usize>]) -> Result<FiniteGroup, StructureError> {
    let n = mul.len();
    if n == 0 {
        return Err(StructureError::Malformed("empty table".into()));
    }
    for (a, row) in mul.iter().enumerate() {
        if row.len() != n {
            return Err(StructureError::Malformed(format!("row {a} has length {}", row.len())));
        }
        if let Some(&v) = row.iter().find(|&&v| v >= n) {
            return Err(StructureError::Malformed(format!("entry {v} out of range in row {a}")));
        }
    }
    let flat: Vec<usize> = mul.iter().flatten().copied().collect();
    let op = |a: usize, b: usize| flat[a * n + b];
    let e = (0..n).find(|&e| (0..n).all(|x| op(e, x) == x && op(x, e) == x)).ok_or(StructureError::NoIdentity)?;
    let mut inv = vec![0; n];
    for x in 0..n {
        inv[x] = (0..n).find(|&y| op(x, y) == e && op(y, x) == e).ok_or(StructureError::NoInverse(x))?;
    }
    for a in 0..n {
        for b in 0..n {
            let ab = op(a, b);
            for c in 0..n {
                if op(ab, c) != op(a, op(b, c)) {
                    return Err(StructureError::NotAssociative(a, b, c));
                }
            }
        }
    }
    Ok(FiniteGroup { n, mul: flat, e, inv, units: [e] })
}

impl Carrier for FiniteGroup {
    fn size(&self) -> usize {
        self.n
    }
    fn source(&self, _a: usize) -> usize {
        self.e
    }
    fn range(&self, _a: usize) -> usize {
        self.e
    }
    fn compose(&self, a: usize, b: usize) -> Option<usize> {
        Some(self.op(a, b))
    }
    fn inverse(&self, a: usize) -> usize {
        self.inv[a]
    }
    fn unit_list(&self) -> &[usize] {
        &self.units
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_four() {
        let g = FiniteGroup::cyclic(4);
        assert_eq!(g.identity(), 0);
        assert_eq!(g.inv(1), 3);
        assert_eq!(g.element_order(1), 4);
        assert_eq!(g.element_order(2), 2);
    }

    #[test]
    fn klein_is_self_inverse() {
        let g = FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(2));
        assert!((0..4).all(|x| g.inv(x) == x));
    }

    #[test]
    fn forced_failures() {
        assert_eq!(build_group(&[vec![1, 1], vec![0, 1]]), Err(StructureError::NoIdentity));
        assert_eq!(build_group(&[vec![0, 1], vec![1, 1]]), Err(StructureError::NoInverse(1)));
        // identity and inverses exist but (1·2)·2 ≠ 1·(2·2)
        let t = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 0]];
        assert!(matches!(build_group(&t), Err(StructureError::NotAssociative(..))));
        assert!(matches!(build_group(&[vec![0, 5], vec![1, 0]]), Err(StructureError::Malformed(_))));
    }

    #[test]
    fn json_round_trip() {
        let g = FiniteGroup::cyclic_square(3);
        let back = FiniteGroup::from_json(&g.to_json()).unwrap();
        assert_eq!(g, back);
    }
}
