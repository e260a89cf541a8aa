use super::WeylError;
use crate::algebra::{AlgElement, GroupoidAlgebra};
use crate::analysis::Exponent;
use crate::structures::{Bisection, FiniteGroupoid};
use crate::UnitScalar;
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;

/// Absolute tolerance for zero tests on products of pair coefficients.
pub const PAIR_TOL: f64 = 1e-9;

/// A partial bijection of the unit space, as (x, α(x)) with unit arrow ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartialMap {
    pub pairs: Vec<(usize, usize)>,
}

impl PartialMap {
    pub fn apply(&self, x: usize) -> Option<usize> {
        self.pairs.iter().find(|p| p.0 == x).map(|p| p.1)
    }

    pub fn domain(&self) -> Vec<usize> {
        self.pairs.iter().map(|p| p.0).collect()
    }

    pub fn codomain(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.pairs.iter().map(|p| p.1).collect();
        v.sort_unstable();
        v
    }

    pub fn inverse(&self) -> PartialMap {
        let mut pairs: Vec<(usize, usize)> = self.pairs.iter().map(|&(x, y)| (y, x)).collect();
        pairs.sort_unstable();
        PartialMap { pairs }
    }

    /// self ∘ other on the composable domain.
    pub fn after(&self, other: &PartialMap) -> PartialMap {
        let pairs = other.pairs.iter().filter_map(|&(x, y)| self.apply(y).map(|z| (x, z))).collect();
        PartialMap { pairs }
    }
}

/// An admissible pair n = (a, b) with the partial map α_n it realizes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissiblePair {
    pub a: AlgElement,
    pub b: AlgElement,
    pub realized: PartialMap,
}

impl AdmissiblePair {
    pub fn domain(&self) -> Vec<usize> {
        self.realized.domain()
    }
}

fn scale_of(a: &AlgElement, b: &AlgElement) -> f64 {
    let m = |f: &AlgElement| f.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    (m(a) * m(b)).max(1.0)
}

fn unit_fn(alg: &GroupoidAlgebra, x: usize) -> AlgElement {
    alg.delta(x)
}

fn fail(condition: u8, detail: String) -> WeylError {
    WeylError::NotAdmissible { condition, detail }
}

/// Conditions (1)–(3) of an admissible pair, with f ranging over unit indicators.
/// Returns the realized partial map.
pub fn check_admissible(
    alg: &GroupoidAlgebra,
    a: &AlgElement,
    b: &AlgElement,
    p: Exponent,
) -> Result<PartialMap, WeylError> {
    p.require_not_two("admissible pairs").map_err(|e| WeylError::BadExponent(e.to_string()))?;
    let g = alg.carrier();
    let tol = PAIR_TOL * scale_of(a, b);
    let units = g.units().to_vec();
    let check_diag = |h: &AlgElement, what: &str| -> Result<(), WeylError> {
        for (arrow, z) in h.coeffs.iter().enumerate() {
            let on_units = units.contains(&arrow);
            if (!on_units && z.norm() > tol) || (on_units && (z.im.abs() > tol || z.re < -tol)) {
                return Err(fail(1, format!("{what} has value {z} at arrow {arrow}")));
            }
        }
        Ok(())
    };
    let mut bxa = BTreeMap::new();
    let mut axb = BTreeMap::new();
    for &x in &units {
        let f = unit_fn(alg, x);
        let v = alg.convolve(&alg.convolve(b, &f), a);
        check_diag(&v, &format!("b·δ{x}·a"))?;
        let w = alg.convolve(&alg.convolve(a, &f), b);
        check_diag(&w, &format!("a·δ{x}·b"))?;
        bxa.insert(x, v);
        axb.insert(x, w);
    }
    let ba = alg.convolve(b, a);
    let ab = alg.convolve(a, b);
    let u: Vec<usize> = units.iter().copied().filter(|&x| ba.coeffs[x].re > tol).collect();
    let v: Vec<usize> = units.iter().copied().filter(|&y| ab.coeffs[y].re > tol).collect();
    let mut pairs = Vec::new();
    for &x in &u {
        let hits: Vec<usize> = v.iter().copied().filter(|y| bxa[y].coeffs[x].norm() > tol).collect();
        let [y] = hits[..] else {
            return Err(fail(3, format!("f(α({x}))·ba({x}) = bfa({x}) has {} candidate images", hits.len())));
        };
        if (bxa[&y].coeffs[x] - ba.coeffs[x]).norm() > tol {
            return Err(fail(3, format!("b·δ{y}·a({x}) differs from ba({x})")));
        }
        pairs.push((x, y));
    }
    let map = PartialMap { pairs };
    let mut image = map.codomain();
    image.dedup();
    if image.len() != u.len() || image != v {
        return Err(fail(3, format!("realized map {:?} is not a bijection onto {v:?}", map.pairs)));
    }
    let inv = map.inverse();
    for &y in &v {
        let x = inv.apply(y).expect("bijection");
        for &x2 in &u {
            let val = axb[&x2].coeffs[y];
            let expect = if x2 == x { ab.coeffs[y] } else { Complex64::new(0.0, 0.0) };
            if (val - expect).norm() > tol {
                return Err(fail(3, format!("g(α⁻¹({y}))·ab({y}) = agb({y}) fails for g = δ{x2}")));
            }
        }
    }
    Ok(map)
}

/// The pair realizing β_B: a = u·(h∘s) on B and b = a^{*σ}, supported on B⁻¹.
/// `h` maps units to nonnegative weights with support s(B) (default: indicator of
/// s(B)); `u` maps arrows of B to phases (default 1).
pub fn admissible_from_bisection(
    alg: &GroupoidAlgebra,
    bis: &Bisection,
    h: Option<&BTreeMap<usize, f64>>,
    u: Option<&BTreeMap<usize, UnitScalar>>,
    p: Exponent,
) -> Result<AdmissiblePair, WeylError> {
    let g = alg.carrier();
    let src = bis.source_set(g);
    let weight = |x: usize| -> f64 {
        match h {
            None => {
                if src.contains(&x) {
                    1.0
                } else {
                    0.0
                }
            }
            Some(h) => h.get(&x).copied().unwrap_or(0.0),
        }
    };
    if let Some(h) = h {
        for (&x, &w) in h {
            if !g.units().contains(&x) || !(w >= 0.0) {
                return Err(WeylError::BadSupport(format!("h({x}) = {w} is not a nonnegative unit weight")));
            }
        }
        let mut supp: Vec<usize> = h.iter().filter(|(_, &w)| w > 0.0).map(|(&x, _)| x).collect();
        supp.sort_unstable();
        if supp != src {
            return Err(WeylError::BadSupport(format!("supp(h) = {supp:?} differs from s(B) = {src:?}")));
        }
    }
    if let Some(u) = u {
        if let Some(&bad) = u.keys().find(|k| !bis.contains(**k)) {
            return Err(WeylError::BadSupport(format!("u is given at {bad}, outside B")));
        }
    }
    let mut a = alg.zero();
    for &gamma in bis.arrows() {
        let phase = u.and_then(|u| u.get(&gamma)).copied().unwrap_or(UnitScalar::ONE);
        a.coeffs[gamma] = phase.to_complex() * weight(g.s(gamma));
    }
    let b = alg.star(&a);
    let realized = check_admissible(alg, &a, &b, p)?;
    Ok(AdmissiblePair { a, b, realized })
}

/// n_f = (f, f̄) for a function f on the units.
pub fn identity_pair(
    alg: &GroupoidAlgebra,
    f: &BTreeMap<usize, Complex64>,
    p: Exponent,
) -> Result<AdmissiblePair, WeylError> {
    let g = alg.carrier();
    let mut a = alg.zero();
    for (&x, &z) in f {
        if !g.units().contains(&x) {
            return Err(WeylError::BadSupport(format!("{x} is not a unit")));
        }
        a.coeffs[x] = z;
    }
    let b = AlgElement::new(a.coeffs.iter().map(|z| z.conj()).collect());
    let realized = check_admissible(alg, &a, &b, p)?;
    Ok(AdmissiblePair { a, b, realized })
}

/// n^♯ = (b, a).
pub fn reverse(pair: &AdmissiblePair) -> AdmissiblePair {
    AdmissiblePair { a: pair.b.clone(), b: pair.a.clone(), realized: pair.realized.inverse() }
}

/// nm = (ac, db) for n = (a, b), m = (c, d), rechecked.
pub fn product(
    alg: &GroupoidAlgebra,
    n: &AdmissiblePair,
    m: &AdmissiblePair,
    p: Exponent,
) -> Result<AdmissiblePair, WeylError> {
    let a = alg.convolve(&n.a, &m.a);
    let b = alg.convolve(&m.b, &n.b);
    let realized = check_admissible(alg, &a, &b, p)?;
    Ok(AdmissiblePair { a, b, realized })
}

/// z·n = (za, z̄b).
pub fn scale(pair: &AdmissiblePair, z: Complex64) -> AdmissiblePair {
    AdmissiblePair { a: pair.a.scale(z), b: pair.b.scale(z.conj()), realized: pair.realized.clone() }
}

/// B_n = {γ : a(γ) ≠ 0 and b(γ⁻¹) ≠ 0}, checked to be a bisection with β_{B_n} = α_n,
/// together with the positivity lemma b(γ⁻¹)a(γ)σ(γ⁻¹,γ) ≥ 0.
pub fn bisection_from_pair(alg: &GroupoidAlgebra, pair: &AdmissiblePair) -> Result<Bisection, WeylError> {
    let g: &FiniteGroupoid = alg.carrier();
    if !g.is_principal() {
        return Err(WeylError::NotPrincipal);
    }
    let tol = PAIR_TOL * scale_of(&pair.a, &pair.b);
    let sigma = alg.cocycle();
    for gamma in 0..g.len() {
        let gi = g.inv(gamma);
        let term = pair.b.coeffs[gi] * pair.a.coeffs[gamma] * sigma.value(gi, gamma).to_complex();
        if term.im.abs() > tol || term.re < -tol {
            return Err(WeylError::NotABisection(format!("b(γ⁻¹)a(γ)σ(γ⁻¹,γ) = {term} is not ≥ 0 at γ = {gamma}")));
        }
    }
    let arrows: Vec<usize> = (0..g.len())
        .filter(|&c| pair.a.coeffs[c].norm() > PAIR_TOL && pair.b.coeffs[g.inv(c)].norm() > PAIR_TOL)
        .collect();
    let bis = Bisection::new(g, &arrows).ok_or_else(|| WeylError::NotABisection(format!("{arrows:?}")))?;
    let beta: Vec<(usize, usize)> = bis.beta(g).into_iter().collect();
    if beta != pair.realized.pairs {
        return Err(WeylError::NotABisection(format!("β_B = {beta:?} but α_n = {:?}", pair.realized.pairs)));
    }
    Ok(bis)
}

/// Decides (n, x) ≈ (m, x) by the witness condition n·n_f = m·n_g with f(x), g(x) > 0.
/// Multiplying a witness by δ_x gives one supported at x, so it suffices to find
/// t = f(x)/g(x) > 0 with a·t = c on 𝒢_x and b·t = d on 𝒢^x.
pub fn equivalent_by_witness(g: &FiniteGroupoid, n: &AdmissiblePair, m: &AdmissiblePair, x: usize) -> bool {
    let tol = PAIR_TOL * scale_of(&n.a, &n.b).max(scale_of(&m.a, &m.b));
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for gamma in 0..g.len() {
        if g.s(gamma) == x {
            lhs.push(n.a.coeffs[gamma]);
            rhs.push(m.a.coeffs[gamma]);
        }
        if g.r(gamma) == x {
            lhs.push(n.b.coeffs[gamma]);
            rhs.push(m.b.coeffs[gamma]);
        }
    }
    let Some(k) = lhs.iter().position(|z| z.norm() > tol) else { return false };
    let t = rhs[k] / lhs[k];
    if t.norm() <= tol || t.im.abs() > tol * t.norm().max(1.0) || t.re <= 0.0 {
        return false;
    }
    lhs.iter().zip(&rhs).all(|(l, r)| (l * t.re - r).norm() <= tol * t.re.max(1.0))
}
