use super::FiniteGroup;

/// A greedy generating set: repeatedly adds the smallest element outside the
/// subgroup generated so far.
pub fn generators(g: &FiniteGroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut inside = vec![false; g.len()];
    inside[g.identity()] = true;
    while let Some(x) = (0..g.len()).find(|&x| !inside[x]) {
        gens.push(x);
        inside = closure(g, &gens);
    }
    gens
}

fn closure(g: &FiniteGroup, gens: &[usize]) -> Vec<bool> {
    let mut inside = vec![false; g.len()];
    let mut stack = vec![g.identity()];
    inside[g.identity()] = true;
    while let Some(x) = stack.pop() {
        for &s in gens {
            let y = g.op(x, s);
            if !inside[y] {
                inside[y] = true;
                stack.push(y);
            }
        }
    }
    inside
}

pub fn is_isomorphism(g: &FiniteGroup, h: &FiniteGroup, map: &[usize]) -> bool {
    if map.len() != g.len() || g.len() != h.len() {
        return false;
    }
    let mut hit = vec![false; h.len()];
    for &y in map {
        if y >= h.len() || std::mem::replace(&mut hit[y], true) {
            return false;
        }
    }
    (0..g.len()).all(|a| (0..g.len()).all(|b| map[g.op(a, b)] == h.op(map[a], map[b])))
}

/// Extends generator images to a homomorphism by breadth-first search over
/// words; returns `None` on inconsistency or if the result is not bijective.
fn extend(g: &FiniteGroup, h: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; g.len()];
    map[g.identity()] = h.identity();
    let mut queue = std::collections::VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        for (&s, &t) in gens.iter().zip(images) {
            let y = g.op(x, s);
            let v = h.op(map[x], t);
            if map[y] == usize::MAX {
                map[y] = v;
                queue.push_back(y);
            } else if map[y] != v {
                return None;
            }
        }
    }
    is_isomorphism(g, h, &map).then_some(map)
}

/// Calls `visit` on every isomorphism g → h until it returns `false`.
fn for_each_isomorphism(g: &FiniteGroup, h: &FiniteGroup, mut visit: impl FnMut(Vec<usize>) -> bool) {
    if g.len() != h.len() {
        return;
    }
    let mut og: Vec<usize> = (0..g.len()).map(|x| g.element_order(x)).collect();
    let mut oh: Vec<usize> = (0..h.len()).map(|x| h.element_order(x)).collect();
    let gens = generators(g);
    let candidates: Vec<Vec<usize>> =
        gens.iter().map(|&s| (0..h.len()).filter(|&t| oh[t] == og[s]).collect()).collect();
    og.sort_unstable();
    oh.sort_unstable();
    if og != oh {
        return;
    }
    let mut images = vec![0; gens.len()];
    fn rec(
        i: usize,
        g: &FiniteGroup,
        h: &FiniteGroup,
        gens: &[usize],
        cands: &[Vec<usize>],
        images: &mut Vec<usize>,
        visit: &mut dyn FnMut(Vec<usize>) -> bool,
    ) -> bool {
        if i == gens.len() {
            return match extend(g, h, gens, images) {
                Some(m) => visit(m),
                None => true,
            };
        }
        for &t in &cands[i] {
            images[i] = t;
            if !rec(i + 1, g, h, gens, cands, images, visit) {
                return false;
            }
        }
        true
    }
    rec(0, g, h, &gens, &candidates, &mut images, &mut visit);
}

pub fn find_isomorphism(g: &FiniteGroup, h: &FiniteGroup) -> Option<Vec<usize>> {
    let mut found = None;
    for_each_isomorphism(g, h, |m| {
        found = Some(m);
        false
    });
    found
}

/// All isomorphisms g → h, at most `cap` of them.
pub fn isomorphisms(g: &FiniteGroup, h: &FiniteGroup, cap: usize) -> Vec<Vec<usize>> {
    let mut all = Vec::new();
    for_each_isomorphism(g, h, |m| {
        all.push(m);
        all.len() < cap
    });
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_vs_klein() {
        let z4 = FiniteGroup::cyclic(4);
        let k = FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(2));
        assert!(find_isomorphism(&z4, &k).is_none());
        assert!(find_isomorphism(&k, &z4).is_none());
        assert_eq!(isomorphisms(&z4, &z4, 100).len(), 2);
        assert_eq!(isomorphisms(&k, &k, 100).len(), 6);
    }

    #[test]
    fn z6_is_z2_times_z3() {
        let a = FiniteGroup::cyclic(6);
        let b = FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(3));
        let m = find_isomorphism(&a, &b).unwrap();
        assert!(is_isomorphism(&a, &b, &m));
    }

    #[test]
    fn automorphisms_of_z4_squared() {
        // |GL_2(ℤ_4)| = 96
        let g = FiniteGroup::cyclic_square(4);
        assert_eq!(isomorphisms(&g, &g, 1000).len(), 96);
    }
}
