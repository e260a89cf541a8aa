//! Admissible pairs and the reconstruction of a principal twisted groupoid from
//! its L^p algebra: the Weyl groupoid with θ and the Weyl twist with φ.
//!
//! Everything is computed in C(𝒢, σ) with the canonical section S(γ) = (γ, 1), so
//! a(S(γ)) is the coefficient a(γ) and S(γ)⁻¹ = conj(σ(γ⁻¹,γ))·S(γ⁻¹).

mod pair;

pub use pair::{
    admissible_from_bisection, bisection_from_pair, check_admissible, equivalent_by_witness, identity_pair, product,
    reverse, scale, AdmissiblePair, PartialMap, PAIR_TOL,
};

use crate::algebra::GroupoidAlgebra;
use crate::analysis::Exponent;
use crate::cohomology::{
    are_cohomologous, twist_groupoid_with_order, CocycleJson, CohomologyError, GroupoidCocycle, Twist,
};
use crate::scalar::lcm;
use crate::structures::{bisections, build_groupoid, Bisection, FiniteGroupoid};
use crate::UnitScalar;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeylError {
    #[error("bad support: {0}")]
    BadSupport(String),
    #[error("not an admissible pair: condition ({condition}) fails: {detail}")]
    NotAdmissible { condition: u8, detail: String },
    #[error("the carrier groupoid is not principal")]
    NotPrincipal,
    #[error("induced set is not the expected bisection: {0}")]
    NotABisection(String),
    #[error("germs miss arrows {missing:?}")]
    NotCovering { missing: Vec<usize> },
    #[error("phase inconsistency: {0}")]
    PhaseInconsistent(String),
    #[error("phases are not roots of unity of the configured order")]
    NotExact,
    #[error("{0}")]
    BadExponent(String),
    #[error("structure error: {0}")]
    Structure(String),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

/// The Weyl groupoid with germs collapsed to (x, α(x)), and θ: germ ↦ B_n x.
#[derive(Debug, Clone, Serialize)]
pub struct WeylGroupoid {
    /// (source unit, range unit) per germ, sorted; germ i is arrow i of `groupoid`.
    pub germs: Vec<(usize, usize)>,
    #[serde(skip)]
    pub groupoid: FiniteGroupoid,
    pub theta: Vec<usize>,
    /// Arrows of 𝒢 outside the image of θ.
    pub missing: Vec<usize>,
    pub homomorphism: bool,
    pub injective: bool,
}

impl WeylGroupoid {
    pub fn ensure_covering(&self) -> Result<(), WeylError> {
        if self.missing.is_empty() {
            Ok(())
        } else {
            Err(WeylError::NotCovering { missing: self.missing.clone() })
        }
    }

    pub fn is_isomorphism(&self) -> bool {
        self.homomorphism && self.injective && self.missing.is_empty()
    }

    pub fn germ_index(&self, x: usize, y: usize) -> Option<usize> {
        self.germs.binary_search(&(x, y)).ok()
    }
}

/// Germ groupoid of the partial maps realized by `pairs`, closed under products and
/// inverses and containing every unit, together with θ.
pub fn weyl_groupoid(alg: &GroupoidAlgebra, pairs: &[AdmissiblePair]) -> Result<WeylGroupoid, WeylError> {
    let g = alg.carrier();
    if !g.is_principal() {
        return Err(WeylError::NotPrincipal);
    }
    let induced: Vec<Bisection> = pairs.par_iter().map(|n| bisection_from_pair(alg, n)).collect::<Result<_, _>>()?;
    let mut theta: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let insert = |theta: &mut BTreeMap<(usize, usize), usize>, germ: (usize, usize), arrow: usize| match theta
        .insert(germ, arrow)
    {
        Some(old) if old != arrow => Err(WeylError::Structure(format!("germ {germ:?} maps to {old} and {arrow}"))),
        _ => Ok(()),
    };
    for (n, bis) in pairs.iter().zip(&induced) {
        for &(x, y) in &n.realized.pairs {
            let arrow = bis.arrow_from(g, x).expect("x ∈ s(B_n)");
            insert(&mut theta, (x, y), arrow)?;
        }
    }
    for &x in g.units() {
        insert(&mut theta, (x, x), x)?;
    }
    loop {
        let current: Vec<((usize, usize), usize)> = theta.iter().map(|(k, v)| (*k, *v)).collect();
        let before = theta.len();
        for &((x, y), t) in &current {
            insert(&mut theta, (y, x), g.inv(t))?;
            for &((y2, z), t2) in &current {
                if y2 == y {
                    let prod =
                        g.mul(t2, t).ok_or_else(|| WeylError::Structure("θ does not respect composability".into()))?;
                    insert(&mut theta, (x, z), prod)?;
                }
            }
        }
        if theta.len() == before {
            break;
        }
    }
    let germs: Vec<(usize, usize)> = theta.keys().copied().collect();
    let idx: HashMap<(usize, usize), usize> = germs.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let units: Vec<usize> = g.units().iter().map(|&x| idx[&(x, x)]).collect();
    let s: Vec<usize> = germs.iter().map(|&(x, _)| idx[&(x, x)]).collect();
    let r: Vec<usize> = germs.iter().map(|&(_, y)| idx[&(y, y)]).collect();
    let mut mul = Vec::new();
    for (i, &(y, z)) in germs.iter().enumerate() {
        for (j, &(x, y2)) in germs.iter().enumerate() {
            if y == y2 {
                mul.push([i, j, idx[&(x, z)]]);
            }
        }
    }
    let inv: Vec<usize> = germs.iter().map(|&(x, y)| idx[&(y, x)]).collect();
    let groupoid =
        build_groupoid(germs.len(), &units, &s, &r, &mul, &inv).map_err(|e| WeylError::Structure(e.to_string()))?;
    let theta_vec: Vec<usize> = germs.iter().map(|k| theta[k]).collect();
    let mut image = theta_vec.clone();
    image.sort_unstable();
    let injective = image.windows(2).all(|w| w[0] != w[1]);
    let missing: Vec<usize> = (0..g.len()).filter(|a| image.binary_search(a).is_err()).collect();
    let homomorphism = mul.iter().all(|&[i, j, k]| g.mul(theta_vec[i], theta_vec[j]) == Some(theta_vec[k]))
        && (0..germs.len()).all(|i| {
            g.s(theta_vec[i]) == germs[i].0
                && g.r(theta_vec[i]) == germs[i].1
                && theta_vec[inv[i]] == g.inv(theta_vec[i])
        });
    Ok(WeylGroupoid { germs, groupoid, theta: theta_vec, missing, homomorphism, injective })
}

/// A class [[z·n, x]] with its canonical form (B_n x, phase of a at B_n x).
#[derive(Debug, Clone, Serialize)]
pub struct WeylTwistElement {
    pub pair: usize,
    pub unit: usize,
    /// The representative is ω^scale·n.
    pub scale: u64,
    pub arrow: usize,
    pub phase: UnitScalar,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeylTwist {
    pub m: u64,
    pub elements: Vec<WeylTwistElement>,
    /// φ of each element as an index into the twist E_σ.
    pub phi: Vec<usize>,
    /// φ hits every element of E_σ.
    pub surjective: bool,
    pub diagram_failures: Vec<String>,
    #[serde(skip)]
    pub extracted: GroupoidCocycle,
    pub twist_class_match: bool,
}

impl WeylTwist {
    pub fn diagram_holds(&self) -> bool {
        self.surjective && self.diagram_failures.is_empty()
    }
}

fn snap(z: Complex64, m: u64) -> Result<u64, WeylError> {
    let u = z / z.norm();
    let k = (u.arg() / TAU * m as f64).round().rem_euclid(m as f64) as u64;
    if (u - Complex64::from_polar(1.0, TAU * k as f64 / m as f64)).norm() > 1e-9 {
        return Err(WeylError::NotExact);
    }
    Ok(k)
}

/// (B_n x, exponent of a(B_n x)/|a(B_n x)| in μ_m).
fn canonical(alg: &GroupoidAlgebra, n: &AdmissiblePair, x: usize, m: u64) -> Result<(usize, u64), WeylError> {
    let bis = bisection_from_pair(alg, n)?;
    let g = alg.carrier();
    let arrow = bis
        .arrow_from(g, x)
        .ok_or_else(|| WeylError::BadSupport(format!("unit {x} is outside the domain of the pair")))?;
    Ok((arrow, snap(n.a.coeffs[arrow], m)?))
}

/// The Weyl twist of the pairs, φ into E_σ (fibers μ_m), the commuting-diagram
/// checks, and a cocycle extracted from pair products alone.
pub fn weyl_twist(
    alg: &GroupoidAlgebra,
    pairs: &[AdmissiblePair],
    weyl: &WeylGroupoid,
    m: u64,
    p: Exponent,
) -> Result<WeylTwist, WeylError> {
    let g = alg.carrier();
    let sigma = alg.cocycle();
    let twist: Twist = twist_groupoid_with_order(sigma, m)?;
    let omega = |k: u64| Complex64::from_polar(1.0, TAU * k as f64 / m as f64);
    let mut failures = Vec::new();

    let base: Vec<Vec<(usize, (usize, u64))>> = pairs
        .par_iter()
        .map(|n| n.domain().into_iter().map(|x| canonical(alg, n, x, m).map(|c| (x, c))).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    let phi_of = |i: usize, x: usize| base[i].iter().find(|e| e.0 == x).map(|e| twist.element(e.1 .0, e.1 .1));

    let mut elements = Vec::new();
    let mut phi = Vec::new();
    for (i, row) in base.iter().enumerate() {
        for &(x, (arrow, k0)) in row {
            for k in 0..m {
                let k1 = (k0 + k) % m;
                elements.push(WeylTwistElement {
                    pair: i,
                    unit: x,
                    scale: k,
                    arrow,
                    phase: UnitScalar::mu(k1 as i64, m),
                });
                phi.push(twist.element(arrow, k1));
            }
        }
    }

    // ≈ decided by canonical form must agree with the witness condition
    let scaled: Vec<AdmissiblePair> = elements.iter().map(|e| scale(&pairs[e.pair], omega(e.scale))).collect();
    for i in 0..elements.len() {
        for j in i + 1..elements.len() {
            if elements[i].unit != elements[j].unit {
                continue;
            }
            let same_form = phi[i] == phi[j];
            let witness = equivalent_by_witness(g, &scaled[i], &scaled[j], elements[i].unit);
            if witness && !same_form {
                return Err(WeylError::PhaseInconsistent(format!(
                    "representatives {i} and {j} are ≈-equivalent with different phases"
                )));
            }
            if same_form && !witness {
                failures.push(format!("representatives {i} and {j} share a canonical form without a witness"));
            }
        }
    }

    // π ∘ φ = θ ∘ π_A
    for (e, &f) in elements.iter().zip(&phi) {
        let y = pairs[e.pair].realized.apply(e.unit).expect("unit in domain");
        match weyl.germ_index(e.unit, y) {
            Some(gi) if weyl.theta[gi] == twist.pi(f) => {}
            _ => failures.push(format!("π∘φ ≠ θ∘π_A at pair {} unit {}", e.pair, e.unit)),
        }
    }
    // φ ∘ i_A = i
    for &x in g.units() {
        for k in 0..m {
            let f: BTreeMap<usize, Complex64> = g.units().iter().map(|&y| (y, omega(k))).collect();
            let nf = identity_pair(alg, &f, p)?;
            let (arrow, ph) = canonical(alg, &nf, x, m)?;
            if twist.element(arrow, ph) != twist.incl(x, k) {
                failures.push(format!("φ∘i_A ≠ i at ({x}, ω^{k})"));
            }
        }
    }
    // products and inverses
    for (i, n) in pairs.iter().enumerate() {
        for (x, _) in &base[i] {
            let rev = reverse(n);
            let y = n.realized.apply(*x).expect("in domain");
            let (arrow, ph) = canonical(alg, &rev, y, m)?;
            if Some(twist.element(arrow, ph)) != phi_of(i, *x).map(|e| twist.total.inv(e)) {
                failures.push(format!("φ([[n♯, α(x)]]) ≠ φ([[n, x]])⁻¹ for pair {i} at {x}"));
            }
        }
        for (j, mm) in pairs.iter().enumerate() {
            let nm = product(alg, n, mm, p)?;
            for &(x, y) in &mm.realized.pairs {
                let (Some(left), Some(right)) = (phi_of(i, y), phi_of(j, x)) else { continue };
                let (arrow, ph) = canonical(alg, &nm, x, m)?;
                if twist.total.mul(left, right) != Some(twist.element(arrow, ph)) {
                    failures.push(format!("φ is not multiplicative on pairs {i}, {j} at {x}"));
                }
            }
        }
    }

    let mut hit = phi.clone();
    hit.sort_unstable();
    hit.dedup();
    let surjective = hit.len() == twist.total.len();

    let extracted = extract_cocycle(alg, pairs, &base, m, p)?;
    let twist_class_match = are_cohomologous(&extracted, sigma)?.is_some();
    Ok(WeylTwist { m, elements, phi, surjective, diagram_failures: failures, extracted, twist_class_match })
}

/// ω(α, β) = S(α)S(β)S(αβ)⁻¹ for the section S(γ) = [[n_γ, s(γ)]], with n_γ the first
/// pair whose bisection contains γ, rescaled to phase 1 on units. Products are taken
/// as pair products (ac, db), never through the multiplication of E_σ.
fn extract_cocycle(
    alg: &GroupoidAlgebra,
    pairs: &[AdmissiblePair],
    base: &[Vec<(usize, (usize, u64))>],
    m: u64,
    p: Exponent,
) -> Result<GroupoidCocycle, WeylError> {
    let g = alg.carrier();
    let n = g.len();
    let mut section: Vec<Option<(usize, u64)>> = vec![None; n];
    for (i, row) in base.iter().enumerate() {
        for &(_, (arrow, k)) in row {
            if section[arrow].is_none() {
                section[arrow] = Some((i, k));
            }
        }
    }
    let section: Vec<(usize, u64)> = section
        .into_iter()
        .enumerate()
        .map(|(a, s)| s.ok_or(WeylError::NotCovering { missing: vec![a] }))
        .collect::<Result<_, _>>()?;
    let phase = |a: usize| if g.units().contains(&a) { 0 } else { section[a].1 };
    let mut table = vec![UnitScalar::ONE; n * n];
    let mut products: HashMap<(usize, usize), AdmissiblePair> = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            let Some(ab) = g.mul(a, b) else { continue };
            let (ia, ib) = (section[a].0, section[b].0);
            if let Entry::Vacant(slot) = products.entry((ia, ib)) {
                slot.insert(product(alg, &pairs[ia], &pairs[ib], p)?);
            }
            let nm = &products[&(ia, ib)];
            let (arrow, k) = canonical(alg, nm, g.s(b), m)?;
            if arrow != ab {
                return Err(WeylError::Structure(format!("B_nm s(β) = {arrow}, expected αβ = {ab}")));
            }
            // S(α)S(β) carries the raw phases of n_α, n_β; undo the unit rescaling
            let raw_a = section[a].1 - phase(a);
            let raw_b = section[b].1 - phase(b);
            let e = (k + 2 * m - raw_a - raw_b + m - phase(ab)) % m;
            table[a * n + b] = UnitScalar::mu(e as i64, m);
        }
    }
    Ok(GroupoidCocycle::validate(g.clone(), table)?)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RoundTripOptions {
    /// Draw the phases u of the pairs from μ_q.
    pub phase_order: Option<u64>,
    /// Draw the weights h from [1/2, 2] instead of indicators.
    pub random_weights: bool,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThetaEntry {
    pub source: usize,
    pub range: usize,
    pub arrow: usize,
}

/// φ([[ω^scale·n_pair, unit]]) = (arrow, ω^phase) in E_σ.
#[derive(Debug, Clone, Serialize)]
pub struct PhiEntry {
    pub pair: usize,
    pub unit: usize,
    pub scale: u64,
    pub arrow: usize,
    pub phase: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RoundTripReport {
    pub groupoid_iso: bool,
    pub theta: Vec<ThetaEntry>,
    pub phi: Vec<PhiEntry>,
    pub twist_class_match: bool,
    pub extracted_cocycle: CocycleJson,
    pub diagram_holds: bool,
    pub diagram_failures: Vec<String>,
    pub bisection_roundtrip: bool,
    pub pairs: usize,
    pub germs: usize,
    pub twist_elements: usize,
    pub fiber_order: u64,
}

/// Pairs from every maximal bisection, then the Weyl groupoid and twist.
pub fn roundtrip(sigma: &GroupoidCocycle, p: Exponent, opts: &RoundTripOptions) -> Result<RoundTripReport, WeylError> {
    let alg = GroupoidAlgebra::new(sigma.clone());
    let g = alg.carrier().clone();
    if !g.is_principal() {
        return Err(WeylError::NotPrincipal);
    }
    let m0 = sigma.exact_order().ok_or(WeylError::NotExact)?;
    let m = lcm(m0, opts.phase_order.unwrap_or(1));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let all = bisections(&g).map_err(|e| WeylError::Structure(e.to_string()))?;
    let mut pairs = Vec::new();
    let mut bisection_roundtrip = true;
    for bis in &all {
        let u: Option<BTreeMap<usize, UnitScalar>> = opts
            .phase_order
            .map(|q| bis.arrows().iter().map(|&a| (a, UnitScalar::mu(rng.random_range(0..q) as i64, q))).collect());
        let h: Option<BTreeMap<usize, f64>> = opts
            .random_weights
            .then(|| bis.source_set(&g).into_iter().map(|x| (x, rng.random_range(0.5..2.0))).collect());
        let n = admissible_from_bisection(&alg, bis, h.as_ref(), u.as_ref(), p)?;
        bisection_roundtrip &= bisection_from_pair(&alg, &n)? == *bis;
        pairs.push(n);
    }
    let weyl = weyl_groupoid(&alg, &pairs)?;
    weyl.ensure_covering()?;
    let tw = weyl_twist(&alg, &pairs, &weyl, m, p)?;
    Ok(RoundTripReport {
        groupoid_iso: weyl.is_isomorphism(),
        theta: weyl
            .germs
            .iter()
            .zip(&weyl.theta)
            .map(|(&(source, range), &arrow)| ThetaEntry { source, range, arrow })
            .collect(),
        phi: tw
            .elements
            .iter()
            .zip(&tw.phi)
            .map(|(e, &f)| PhiEntry {
                pair: e.pair,
                unit: e.unit,
                scale: e.scale,
                arrow: f / m as usize,
                phase: f as u64 % m,
            })
            .collect(),
        twist_class_match: tw.twist_class_match,
        extracted_cocycle: tw.extracted.to_json(),
        diagram_holds: tw.diagram_holds(),
        diagram_failures: tw.diagram_failures.clone(),
        bisection_roundtrip,
        pairs: pairs.len(),
        germs: weyl.germs.len(),
        twist_elements: tw.elements.len(),
        fiber_order: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::coboundary;
    use crate::structures::FiniteGroup;

    const P: Exponent = Exponent::Finite(3.0);

    fn trivial(g: FiniteGroupoid) -> GroupoidAlgebra {
        GroupoidAlgebra::new(GroupoidCocycle::trivial(g))
    }

    #[test]
    fn off_diagonal_arrow_moves_the_second_unit_to_the_first() {
        let alg = trivial(FiniteGroupoid::pair(2));
        let bis = Bisection::new(alg.carrier(), &[1]).unwrap();
        let n = admissible_from_bisection(&alg, &bis, None, None, P).unwrap();
        assert_eq!(n.realized.pairs, vec![(3, 0)]);
        assert_eq!(bisection_from_pair(&alg, &n).unwrap(), bis);
    }

    #[test]
    fn matrix_unit_paired_with_itself_realizes_the_empty_map() {
        // e12·f·e12 = 0 for every f, so all three conditions hold vacuously
        let alg = trivial(FiniteGroupoid::pair(2));
        let e = alg.delta(1);
        assert_eq!(check_admissible(&alg, &e, &e, P).unwrap().pairs, vec![]);
    }

    #[test]
    fn off_diagonal_product_fails_positivity() {
        let alg = trivial(FiniteGroupoid::pair(2));
        match check_admissible(&alg, &alg.one(), &alg.delta(1), P) {
            Err(WeylError::NotAdmissible { condition, .. }) => assert_eq!(condition, 1),
            other => panic!("expected a condition failure, got {other:?}"),
        }
    }

    #[test]
    fn identity_pair_realizes_the_identity() {
        let alg = trivial(FiniteGroupoid::pair(3));
        let f: BTreeMap<usize, Complex64> =
            alg.carrier().units().iter().map(|&x| (x, Complex64::new(1.0, 0.0))).collect();
        let n = identity_pair(&alg, &f, P).unwrap();
        assert_eq!(n.realized.pairs, vec![(0, 0), (4, 4), (8, 8)]);
    }

    #[test]
    fn scaling_keeps_the_bisection_and_rotates_the_phase() {
        let alg = trivial(FiniteGroupoid::pair(2));
        let bis = Bisection::new(alg.carrier(), &[1, 2]).unwrap();
        let n = admissible_from_bisection(&alg, &bis, None, None, P).unwrap();
        let i = Complex64::new(0.0, 1.0);
        let zn = scale(&n, i);
        assert_eq!(check_admissible(&alg, &zn.a, &zn.b, P).unwrap(), n.realized);
        assert_eq!(bisection_from_pair(&alg, &zn).unwrap(), bis);
        assert_eq!(canonical(&alg, &n, 3, 4).unwrap(), (1, 0));
        assert_eq!(canonical(&alg, &zn, 3, 4).unwrap(), (1, 1));
    }

    #[test]
    fn unit_phase_is_carried_into_the_twist() {
        let g = FiniteGroupoid::pair(2);
        let gamma = vec![UnitScalar::ONE, UnitScalar::mu(1, 4), UnitScalar::mu(1, 2), UnitScalar::ONE];
        let alg = GroupoidAlgebra::new(coboundary(g, gamma).unwrap());
        let bis = Bisection::new(alg.carrier(), &[1]).unwrap();
        let u: BTreeMap<usize, UnitScalar> = [(1, UnitScalar::mu(1, 4))].into();
        let n = admissible_from_bisection(&alg, &bis, None, Some(&u), P).unwrap();
        assert_eq!(bisection_from_pair(&alg, &n).unwrap(), bis);
        assert_eq!(canonical(&alg, &n, 3, 4).unwrap(), (1, 1));
    }

    #[test]
    fn witness_oracle_separates_phases() {
        let alg = trivial(FiniteGroupoid::pair(2));
        let bis = Bisection::new(alg.carrier(), &[1, 2]).unwrap();
        let mut h = BTreeMap::new();
        h.insert(0, 0.5);
        h.insert(3, 2.0);
        let n = admissible_from_bisection(&alg, &bis, None, None, P).unwrap();
        let weighted = admissible_from_bisection(&alg, &bis, Some(&h), None, P).unwrap();
        let g = alg.carrier();
        assert!(equivalent_by_witness(g, &n, &weighted, 3));
        assert!(!equivalent_by_witness(g, &n, &scale(&n, Complex64::new(-1.0, 0.0)), 3));
    }

    #[test]
    fn principal_carriers_are_recovered() {
        for g in [FiniteGroupoid::pair(3), FiniteGroupoid::pair(2).disjoint_union(&FiniteGroupoid::pair(2))] {
            let sigma = GroupoidCocycle::trivial(g);
            let r = roundtrip(&sigma, P, &RoundTripOptions::default()).unwrap();
            assert!(r.groupoid_iso);
            assert!(r.diagram_holds, "{:?}", r.diagram_failures);
            assert!(r.twist_class_match);
            assert!(r.bisection_roundtrip);
            assert_eq!(r.germs, sigma.groupoid().len());
        }
    }

    #[test]
    fn units_alone_do_not_cover() {
        let alg = trivial(FiniteGroupoid::pair(2));
        let f: BTreeMap<usize, Complex64> = [(0, Complex64::new(1.0, 0.0)), (3, Complex64::new(1.0, 0.0))].into();
        let n = identity_pair(&alg, &f, P).unwrap();
        let w = weyl_groupoid(&alg, &[n]).unwrap();
        assert_eq!(w.germs, vec![(0, 0), (3, 3)]);
        assert_eq!(w.ensure_covering(), Err(WeylError::NotCovering { missing: vec![1, 2] }));
    }

    #[test]
    fn coboundary_twists_round_trip() {
        let g = FiniteGroupoid::pair(3);
        let gamma: Vec<UnitScalar> = (0..g.len())
            .map(|a| if g.units().contains(&a) { UnitScalar::ONE } else { UnitScalar::mu((a * a) as i64, 4) })
            .collect();
        let sigma = coboundary(g, gamma).unwrap();
        assert!(!sigma.is_trivial());
        let opts = RoundTripOptions { phase_order: Some(3), random_weights: true, seed: 7 };
        let r = roundtrip(&sigma, Exponent::Finite(1.5), &opts).unwrap();
        assert_eq!(r.fiber_order, lcm(sigma.exact_order().unwrap(), 3));
        assert!(r.groupoid_iso && r.diagram_holds && r.twist_class_match && r.bisection_roundtrip);
    }

    #[test]
    fn refusals() {
        let sigma = GroupoidCocycle::trivial(FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)));
        assert_eq!(roundtrip(&sigma, P, &RoundTripOptions::default()).unwrap_err(), WeylError::NotPrincipal);
        let sigma = GroupoidCocycle::trivial(FiniteGroupoid::pair(2));
        assert!(matches!(
            roundtrip(&sigma, Exponent::Finite(2.0), &RoundTripOptions::default()),
            Err(WeylError::BadExponent(_))
        ));
    }
}
