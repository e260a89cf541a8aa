use lptwist_core::algebra::{mackey_embed, GroupAlgebra, GroupoidAlgebra, MackeyAlgebra};
use lptwist_core::analysis::{lamperti_decompose, pnorm, CMatrix, Exponent, IsometryForm, PnormConfig};
use lptwist_core::cohomology::{
    are_cohomologous, coboundary, mackey_group_with_order, twist_groupoid_with_order, Cocycle, GroupCocycle,
    GroupoidCocycle,
};
use lptwist_core::structures::{bisections, find_isomorphism, FiniteGroup, FiniteGroupoid};
use lptwist_core::weyl::{admissible_from_bisection, check_admissible, product, reverse};
use lptwist_core::UnitScalar;
use num_complex::Complex64;
use proptest::prelude::*;
use std::collections::BTreeMap;

fn groups() -> Vec<FiniteGroup> {
    vec![
        FiniteGroup::cyclic(1),
        FiniteGroup::cyclic(2),
        FiniteGroup::cyclic(3),
        FiniteGroup::cyclic(4),
        FiniteGroup::cyclic(6),
        FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(2)),
        FiniteGroup::cyclic_square(3),
    ]
}

fn groupoids() -> Vec<FiniteGroupoid> {
    vec![
        FiniteGroupoid::pair(2),
        FiniteGroupoid::pair(3),
        FiniteGroupoid::pair(2).disjoint_union(&FiniteGroupoid::pair(2)),
        FiniteGroupoid::from_group(&FiniteGroup::cyclic(3)),
        FiniteGroupoid::pair(2).disjoint_union(&FiniteGroupoid::from_group(&FiniteGroup::cyclic(2))),
    ]
}

fn principal() -> Vec<FiniteGroupoid> {
    groupoids().into_iter().take(3).collect()
}

/// A cochain in μ_4 that is 1 on units.
fn cochain(units: &[usize], exps: &[u8]) -> Vec<UnitScalar> {
    exps.iter()
        .enumerate()
        .map(|(a, &e)| if units.contains(&a) { UnitScalar::ONE } else { UnitScalar::mu(e as i64, 4) })
        .collect()
}

fn group_cocycle(g: &FiniteGroup, twist: bool, exps: &[u8]) -> GroupCocycle {
    // the rotation cocycles represent the nontrivial classes on ℤ₂² and ℤ₃²
    let base = match (twist, g.len()) {
        (true, 9) => GroupCocycle::rotation(3, 1),
        (true, 4) if g.element_order(1) == 2 => GroupCocycle::rotation(2, 1),
        _ => GroupCocycle::trivial(g.clone()),
    };
    let d = coboundary(g.clone(), cochain(&[g.identity()], &exps[..g.len()])).unwrap();
    base.product(&d).unwrap()
}

fn complex(v: &[(f64, f64)]) -> Vec<Complex64> {
    v.iter().map(|&(a, b)| Complex64::new(a, b)).collect()
}

fn matrix(n: usize, v: &[(f64, f64)]) -> CMatrix {
    CMatrix::from_column_slice(n, n, &complex(&v[..n * n]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coboundaries_validate(gi in 0usize..7, exps in prop::collection::vec(0u8..4, 16)) {
        let g = &groups()[gi];
        let d = coboundary(g.clone(), cochain(&[g.identity()], &exps[..g.len()])).unwrap();
        prop_assert!(Cocycle::validate(g.clone(), d.table().to_vec()).is_ok());
        let gg = &groupoids()[gi % 5];
        let d = coboundary(gg.clone(), cochain(gg.units(), &exps[..gg.len()])).unwrap();
        prop_assert!(Cocycle::validate(gg.clone(), d.table().to_vec()).is_ok());
    }

    #[test]
    fn cohomology_is_an_equivalence(
        twists in prop::collection::vec(any::<bool>(), 3),
        exps in prop::collection::vec(prop::collection::vec(0u8..4, 4), 3),
    ) {
        let g = FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(2));
        let c: Vec<GroupCocycle> = (0..3).map(|i| group_cocycle(&g, twists[i], &exps[i])).collect();
        let rel = |a: usize, b: usize| are_cohomologous(&c[a], &c[b]).unwrap().is_some();
        for a in 0..3 {
            prop_assert!(rel(a, a));
            for b in 0..3 {
                prop_assert_eq!(rel(a, b), rel(b, a));
                prop_assert_eq!(rel(a, b), twists[a] == twists[b]);
                for d in 0..3 {
                    prop_assert!(!(rel(a, b) && rel(b, d)) || rel(a, d));
                }
            }
        }
    }

    #[test]
    fn cohomologous_cocycles_have_isomorphic_mackey_groups(gi in 1usize..7, twist: bool, exps in prop::collection::vec(0u8..4, 16)) {
        let g = &groups()[gi];
        if g.len() * 4 > 16 {
            return Ok(());
        }
        let sigma = group_cocycle(g, twist, &exps);
        let kappa = group_cocycle(g, twist, &[0; 16]);
        prop_assert!(are_cohomologous(&sigma, &kappa).unwrap().is_some());
        let a = mackey_group_with_order(&sigma, 4).unwrap();
        let b = mackey_group_with_order(&kappa, 4).unwrap();
        prop_assert!(find_isomorphism(&a.group, &b.group).is_some());
    }

    #[test]
    fn twist_fibers_are_torsors(gi in 0usize..5, exps in prop::collection::vec(0u8..4, 16)) {
        let g = &groupoids()[gi];
        let sigma = coboundary(g.clone(), cochain(g.units(), &exps[..g.len()])).unwrap();
        let t = twist_groupoid_with_order(&sigma, 4).unwrap();
        prop_assert!(t.check_axioms().is_ok());
        for &x in g.units() {
            prop_assert!(t.total.units().contains(&t.incl(x, 0)));
            prop_assert_eq!(t.pi(t.incl(x, 3)), x);
        }
        for gamma in 0..g.len() {
            let mut orbit: Vec<usize> = (0..4).map(|k| t.act(k, t.element(gamma, 0))).collect();
            orbit.sort_unstable();
            orbit.dedup();
            prop_assert_eq!(orbit.len(), 4);
            prop_assert!(orbit.iter().all(|&e| t.pi(e) == gamma));
        }
    }

    #[test]
    fn regular_representation_is_exactly_multiplicative(gi in 0usize..7, twist: bool, exps in prop::collection::vec(0u8..4, 16)) {
        let g = &groups()[gi];
        let alg = GroupAlgebra::new(group_cocycle(g, twist, &exps));
        let m = 12;
        let n = g.len();
        for x in 0..n {
            let lx = alg.left_regular_exact(x, m).unwrap();
            for y in 0..n {
                let ly = alg.left_regular_exact(y, m).unwrap();
                let e = alg.cocycle().value(x, y).exponent_in(m).unwrap();
                prop_assert_eq!(lx.mul(&ly), alg.left_regular_exact(g.op(x, y), m).unwrap().scale(e));
                let ry = alg.right_regular_exact(y, m).unwrap();
                prop_assert_eq!(lx.mul(&ry), ry.mul(&lx));
            }
        }
    }

    #[test]
    fn norms_are_sandwiched(
        exps in prop::collection::vec(0u8..4, 9),
        coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 9),
        pi in 0usize..3,
    ) {
        let g = FiniteGroupoid::pair(3);
        let alg = GroupoidAlgebra::new(coboundary(g.clone(), cochain(g.units(), &exps)).unwrap());
        let f = alg.element(complex(&coeffs)).unwrap();
        let p = [Exponent::Finite(1.5), Exponent::Finite(3.0), Exponent::Infinity][pi];
        let est = alg.reduced_norm(&f, p, &PnormConfig { random_starts: 8, ..PnormConfig::default() }).unwrap();
        prop_assert!(alg.sup_norm(&f) <= est.lower + 1e-9);
        prop_assert!(est.lower <= est.upper + 1e-12);
        prop_assert!(est.upper <= alg.i_norm(&f) + 1e-9);
    }

    #[test]
    fn groupoid_representations_respect_convolution(
        gi in 0usize..5,
        exps in prop::collection::vec(0u8..4, 16),
        a in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16),
        b in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16),
    ) {
        let g = &groupoids()[gi];
        let n = g.len();
        let alg = GroupoidAlgebra::new(coboundary(g.clone(), cochain(g.units(), &exps[..n])).unwrap());
        let f = alg.element(complex(&a[..n])).unwrap();
        let h = alg.element(complex(&b[..n])).unwrap();
        let fh = alg.convolve(&f, &h);
        for u in 0..g.units().len() {
            let lhs = alg.rep_matrix(&fh, u);
            let rhs = alg.rep_matrix(&f, u) * alg.rep_matrix(&h, u);
            prop_assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn mackey_embedding_is_an_isometric_homomorphism(
        exps in prop::collection::vec(0u8..4, 9),
        a in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 9),
        b in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 9),
    ) {
        let g = FiniteGroup::cyclic_square(3);
        let sigma = group_cocycle(&g, true, &exps);
        let alg = GroupAlgebra::new(sigma.clone());
        let mg = mackey_group_with_order(&sigma, 12).unwrap();
        let mackey = MackeyAlgebra::new(mg.clone());
        let f = alg.element(complex(&a)).unwrap();
        let h = alg.element(complex(&b)).unwrap();
        let jf = mackey_embed(&f, &mg);
        let l1 = |x: &[Complex64]| x.iter().map(|z| z.norm()).sum::<f64>();
        prop_assert!((l1(&jf.coeffs) / 12.0 - l1(&f.coeffs)).abs() < 1e-10);
        let lhs = mackey_embed(&alg.convolve(&f, &h), &mg);
        let rhs = mackey.convolve(&jf, &mackey_embed(&h, &mg));
        prop_assert!(lhs.max_diff(&rhs) < 1e-10);
    }

    #[test]
    fn pnorm_brackets_and_submultiplicativity(
        n in 1usize..5,
        a in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16),
        b in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16),
        p in 1.0f64..6.0,
    ) {
        let (ma, mb) = (matrix(n, &a), matrix(n, &b));
        let p = Exponent::Finite(p);
        let cfg = PnormConfig { random_starts: 8, ..PnormConfig::default() };
        let ea = pnorm(&ma, p, &cfg).unwrap();
        let eb = pnorm(&mb, p, &cfg).unwrap();
        let eab = pnorm(&(&ma * &mb), p, &cfg).unwrap();
        for e in [ea, eb, eab] {
            prop_assert!(e.lower <= e.upper + 1e-12);
        }
        prop_assert!(eab.lower <= ea.upper * eb.upper + 1e-9);
    }

    #[test]
    fn lamperti_reconstructs_weighted_permutations(
        perm in Just((0..5usize).collect::<Vec<_>>()).prop_shuffle(),
        angles in prop::collection::vec(0.0f64..std::f64::consts::TAU, 5),
        p in prop::sample::select(vec![1.0, 1.5, 3.0, 4.0]),
    ) {
        let f: Vec<Complex64> = angles.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
        let m = IsometryForm { f, phi: perm }.to_matrix();
        let form = lamperti_decompose(&m, Exponent::Finite(p), 1e-9).unwrap();
        prop_assert!((form.to_matrix() - &m).iter().all(|z| z.norm() <= 1e-12));
    }

    #[test]
    fn bisections_form_an_inverse_semigroup(gi in 0usize..5, i in 0usize..64, j in 0usize..64) {
        let g = &groupoids()[gi];
        let all = bisections(g).unwrap();
        let (b, c) = (&all[i % all.len()], &all[j % all.len()]);
        prop_assert_eq!(&b.product(&b.inverse(g), g).product(b, g), b);
        let (bb, bc) = (b.beta(g), c.beta(g));
        let composed: BTreeMap<usize, usize> =
            bc.iter().filter_map(|(&x, y)| bb.get(y).map(|&z| (x, z))).collect();
        prop_assert_eq!(b.product(c, g).beta(g), composed);
        for a in 0..g.len() {
            let u = g.mul(a, g.inv(a)).unwrap();
            prop_assert!(g.units().contains(&u));
            prop_assert_eq!(g.s(g.s(a)), g.s(a));
            prop_assert_eq!(g.r(g.r(a)), g.r(a));
        }
    }

    #[test]
    fn pairs_invert_compose_and_stay_positive(
        gi in 0usize..3,
        i in 0usize..64,
        j in 0usize..64,
        exps in prop::collection::vec(0u8..4, 16),
        weights in prop::collection::vec(0.25f64..4.0, 16),
        phases in prop::collection::vec(0u8..6, 16),
    ) {
        let g = &principal()[gi];
        let n = g.len();
        let alg = GroupoidAlgebra::new(coboundary(g.clone(), cochain(g.units(), &exps[..n])).unwrap());
        let all = bisections(g).unwrap();
        let p = Exponent::Finite(3.0);
        let make = |k: usize| {
            let bis = &all[k % all.len()];
            let h: BTreeMap<usize, f64> = bis.source_set(g).into_iter().map(|x| (x, weights[x])).collect();
            let u: BTreeMap<usize, UnitScalar> =
                bis.arrows().iter().map(|&a| (a, UnitScalar::mu(phases[a] as i64, 6))).collect();
            admissible_from_bisection(&alg, bis, Some(&h), Some(&u), p).unwrap()
        };
        let (a, c) = (make(i), make(j));
        let ra = reverse(&a);
        prop_assert_eq!(check_admissible(&alg, &ra.a, &ra.b, p).unwrap(), a.realized.inverse());
        let ac = product(&alg, &a, &c, p).unwrap();
        prop_assert_eq!(&ac.realized, &a.realized.after(&c.realized));
        let sigma: &GroupoidCocycle = alg.cocycle();
        for pair in [&a, &c, &ac] {
            for gamma in 0..n {
                let gi = g.inv(gamma);
                let v = pair.b.coeffs[gi] * pair.a.coeffs[gamma] * sigma.value(gi, gamma).to_complex();
                prop_assert!(v.re >= -1e-9 && v.im.abs() <= 1e-9);
            }
        }
    }
}
