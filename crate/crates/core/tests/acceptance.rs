//! Acceptance suite. One line per criterion; every tolerance and time budget is
//! pinned below. Runs without the test harness so the lines always print.

use lptwist_core::algebra::torus::{folner_lower_bounds, rotation_classes_agree};
use lptwist_core::algebra::{GroupAlgebra, GroupoidAlgebra};
use lptwist_core::analysis::linalg::in_span;
use lptwist_core::analysis::{
    core_basis, double_commutant, isometries_in_algebra, pnorm, pnorm_oracle, vec_norm, CMatrix, Exponent,
    HermitianConfig, IsometryGroup, IsometrySearchConfig, PnormConfig,
};
use lptwist_core::cohomology::{coboundary, mackey_group_with_order, CocycleJson, GroupCocycle, GroupoidCocycle};
use lptwist_core::structures::{bisections, find_isomorphism, FiniteGroup, FiniteGroupoid, GroupJson, GroupoidJson};
use lptwist_core::weyl::{roundtrip, RoundTripOptions};
use lptwist_core::UnitScalar;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::{PI, TAU};
use std::path::Path;
use std::time::{Duration, Instant};

const LAMPERTI_TOL: f64 = 1e-4;
const HERMITIAN_TOL: f64 = 1e-7;
const SPAN_TOL: f64 = 1e-6;
const SANDWICH_TOL: f64 = 1e-9;
const BISECTION_TOL: f64 = 1e-6;
const ORACLE_TOL: f64 = 1e-4;
const RANK_ONE_TOL: f64 = 1e-6;
const FOLNER_TOL: f64 = 1e-6;
const ISOMETRY_TOL: f64 = 1e-8;
const SEED: u64 = 20_240_601;

/// Criteria whose failure is analysed in the decisions ledger. They must fail;
/// if one starts passing the suite flags it.
const KNOWN_RED: &[usize] = &[2];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn mu(k: i64, m: u64) -> Complex64 {
    UnitScalar::mu(k, m).to_complex()
}

fn cyclic_pair_cocycle(g: FiniteGroupoid, exps: &[i64]) -> GroupoidCocycle {
    let units = g.units().to_vec();
    let gamma =
        (0..g.len()).map(|a| if units.contains(&a) { UnitScalar::ONE } else { UnitScalar::mu(exps[a], 4) }).collect();
    coboundary(g, gamma).expect("coboundary")
}

fn r2r2() -> FiniteGroupoid {
    FiniteGroupoid::pair(2).disjoint_union(&FiniteGroupoid::pair(2))
}

fn regular_isometries(sigma: &GroupCocycle, p: Exponent) -> IsometryGroup {
    let alg = GroupAlgebra::new(sigma.clone());
    let n = alg.dim();
    let mats: Vec<CMatrix> = (0..n).map(|g| alg.left_regular(&alg.delta(g))).collect();
    let dc = double_commutant(&mats, n);
    let cfg = IsometrySearchConfig { tol: ISOMETRY_TOL, ..IsometrySearchConfig::default() };
    isometries_in_algebra(&dc, p, &cfg).expect("isometry search")
}

#[derive(serde::Deserialize)]
struct CorpusFile {
    name: String,
    group: Option<GroupJson>,
    groupoid: Option<GroupoidJson>,
    cocycle: Option<CocycleJson>,
}

fn load(path: &Path) -> Result<(), String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let file: CorpusFile = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let _ = &file.name;
    match (&file.group, &file.groupoid, &file.cocycle) {
        (Some(gj), None, Some(cj)) => {
            let g = FiniteGroup::from_json(gj).map_err(|e| e.to_string())?;
            GroupCocycle::from_json(&g, cj).map(drop).map_err(|e| e.to_string())
        }
        (Some(gj), None, None) => FiniteGroup::from_json(gj).map(drop).map_err(|e| e.to_string()),
        (None, Some(gj), cj) => {
            let g = FiniteGroupoid::from_json(gj).map_err(|e| e.to_string())?;
            match cj {
                Some(cj) => GroupoidCocycle::from_json(&g, cj).map(drop).map_err(|e| e.to_string()),
                None => Ok(()),
            }
        }
        _ => Err("expected one carrier".into()),
    }
}

fn cocycle_axioms() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut files: Vec<_> = std::fs::read_dir(&dir).expect("corpus").map(|e| e.unwrap().path()).collect();
    files.sort();
    let rejects = ["broken_cocycle.json", "bad_units.json"];
    let mut wrong = Vec::new();
    let mut good = 0;
    for f in &files {
        let name = f.file_name().unwrap().to_string_lossy().to_string();
        let ok = load(f).is_ok();
        if ok == rejects.contains(&name.as_str()) {
            wrong.push(name);
        } else if ok {
            good += 1;
        }
    }
    let families = ["z2_sign", "rot2_", "rot3_", "rot4_", "r2_coboundary", "r3_coboundary", "_trivial"];
    let covered = families.iter().all(|fam| files.iter().any(|f| f.to_string_lossy().contains(fam)));
    outcome(
        wrong.is_empty() && covered,
        format!("{good} files validate, {} rejected as expected, misjudged {wrong:?}", rejects.len()),
    )
}

fn lamperti_distance() -> Outcome {
    let ps = [1.0, 1.5, 3.0, 4.0];
    let cfg = PnormConfig { seed: SEED, ..PnormConfig::default() };
    let (mut tight, mut bracket_only, mut contradicted, mut worst) = (0usize, 0usize, 0usize, (0.0f64, String::new()));
    for n in [3usize, 4] {
        let alg = GroupAlgebra::new(GroupCocycle::trivial(FiniteGroup::cyclic(n)));
        let lambda: Vec<CMatrix> = (0..n).map(|g| alg.left_regular(&alg.delta(g))).collect();
        for &p in &ps {
            let p = Exponent::Finite(p);
            // γ̄λ(h)⁻¹ is an isometry, so the certified value depends only on (g − h, β/γ)
            let certified: Vec<Option<f64>> = (0..n * 8)
                .into_par_iter()
                .map(|idx| {
                    let d = &lambda[idx / 8] - lambda[0].map(|z| z * mu((idx % 8) as i64, 8));
                    (n <= 3).then(|| pnorm_oracle(&d, p).expect("oracle"))
                })
                .collect();
            let cases: Vec<(usize, usize, i64, i64)> = (0..n)
                .flat_map(|g| (0..n).flat_map(move |h| (0..8).flat_map(move |a| (0..8).map(move |b| (g, h, a, b)))))
                .collect();
            let rows: Vec<(f64, f64, f64, bool, Option<f64>, String)> = cases
                .par_iter()
                .map(|&(g, h, a, b)| {
                    let (gamma, beta) = (mu(a, 8), mu(b, 8));
                    let diff = lambda[g].map(|z| z * gamma) - lambda[h].map(|z| z * beta);
                    let expected = if g == h { (beta - gamma).norm() } else { (beta - gamma).norm().max(2.0) };
                    let est = pnorm(&diff, p, &cfg).expect("pnorm");
                    let certified = certified[((g + n - h) % n) * 8 + (b - a).rem_euclid(8) as usize];
                    let tag = format!("Z{n} p={} g={g} h={h} gamma=mu8^{a} beta=mu8^{b}", p.value());
                    (expected, est.lower, est.upper, est.contains(expected, LAMPERTI_TOL), certified, tag)
                })
                .collect();
            for (expected, lower, upper, contains, certified, tag) in rows {
                let off = certified.map_or(0.0, |v| (v - expected).abs());
                if !contains || off > LAMPERTI_TOL {
                    contradicted += 1;
                    let gap = off.max(expected - upper).max(lower - expected);
                    if gap > worst.0 {
                        worst = (gap, format!("{tag}: expected {expected:.6}, certified {certified:?}, bracket [{lower:.6}, {upper:.6}]"));
                    }
                } else if upper - lower <= LAMPERTI_TOL {
                    tight += 1;
                } else {
                    bracket_only += 1;
                }
            }
        }
    }
    outcome(
        contradicted == 0,
        format!(
            "{tight} tight, {bracket_only} covered only by the bracket, {contradicted} contradicted by certified values; worst: {}",
            if worst.1.is_empty() { "none".into() } else { worst.1 }
        ),
    )
}

fn isometry_rigidity() -> Outcome {
    let p = Exponent::Finite(3.0);
    let z4 = FiniteGroup::cyclic(4);
    let v4 = FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(2));
    let a = regular_isometries(&GroupCocycle::trivial(z4.clone()), p);
    let b = regular_isometries(&GroupCocycle::trivial(v4.clone()), p);
    let (pa, pb) = (a.pi0().expect("pi0"), b.pi0().expect("pi0"));
    let pass = a.families.len() == 4
        && b.families.len() == 4
        && a.inconclusive + b.inconclusive == 0
        && find_isomorphism(&pa, &z4).is_some()
        && find_isomorphism(&pb, &v4).is_some()
        && find_isomorphism(&pa, &pb).is_none();
    outcome(
        pass,
        format!(
            "Z4: {} families, pi0 cyclic {}; Z2xZ2: {} families, pi0 exponent-2 {}; pi0 groups isomorphic: {}",
            a.families.len(),
            find_isomorphism(&pa, &z4).is_some(),
            b.families.len(),
            find_isomorphism(&pb, &v4).is_some(),
            find_isomorphism(&pa, &pb).is_some()
        ),
    )
}

fn mackey_structure() -> Outcome {
    let sigma = GroupCocycle::from_exponents(FiniteGroup::cyclic(2), 2, |a, b| (a * b) as i64).expect("sign cocycle");
    let iso = regular_isometries(&sigma, Exponent::Finite(3.0));
    let phases = iso.phase_group(2).expect("phase group");
    let mackey = mackey_group_with_order(&sigma, 2).expect("mackey group");
    let z4 = FiniteGroup::cyclic(4);
    let pass = find_isomorphism(&phases, &z4).is_some() && find_isomorphism(&mackey.group, &z4).is_some();
    outcome(
        pass,
        format!("phase group order {}, Mackey group order {}, both cyclic: {pass}", phases.len(), mackey.group.len()),
    )
}

fn rotation_classes() -> Outcome {
    let mut checked = 0;
    let mut wrong = Vec::new();
    for n in 2..=4usize {
        for k in 0..n as i64 {
            for k2 in 0..n as i64 {
                checked += 1;
                if rotation_classes_agree(k, k2, n).expect("solver") != ((k - k2).rem_euclid(n as i64) == 0) {
                    wrong.push((n, k, k2));
                }
            }
        }
    }
    outcome(wrong.is_empty(), format!("{checked} pairs (k, k') on Z_N^2 for N = 2..4, wrong verdicts {wrong:?}"))
}

fn c_star_core() -> Outcome {
    let cfg = HermitianConfig { tol: HERMITIAN_TOL, seed: SEED, ..HermitianConfig::default() };
    let mut summary = Vec::new();
    let mut pass = true;
    for (name, g) in [("R3", FiniteGroupoid::pair(3)), ("R2+R2", r2r2())] {
        let alg = GroupoidAlgebra::new(GroupoidCocycle::trivial(g));
        let units = alg.carrier().units().to_vec();
        for p in [1.0, 3.0, 4.0] {
            let core = core_basis(&alg.basis_matrices(), Exponent::Finite(p), &cfg).expect("core");
            let diagonal = units.iter().all(|&x| in_span(&alg.regular(&alg.delta(x)), &core.basis, SPAN_TOL));
            let ok = diagonal && core.complex_dim == units.len() && !core.inconclusive;
            pass &= ok;
            summary.push(format!("{name} p={p}: dim {}", core.complex_dim));
        }
    }
    outcome(pass, summary.join(", "))
}

fn weyl_roundtrip() -> Outcome {
    let p = Exponent::Finite(3.0);
    let opts = RoundTripOptions { phase_order: Some(4), random_weights: true, seed: SEED };
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut summary = Vec::new();
    let mut pass = true;
    for (name, g) in [("R2", FiniteGroupoid::pair(2)), ("R3", FiniteGroupoid::pair(3)), ("R2+R2", r2r2())] {
        let exps: Vec<i64> = (0..g.len()).map(|_| rng.random_range(0..4)).collect();
        let trivial = GroupoidCocycle::trivial(g.clone());
        for (kind, sigma) in [("trivial", trivial), ("coboundary", cyclic_pair_cocycle(g, &exps))] {
            let r = roundtrip(&sigma, p, &opts).expect("round trip");
            let ok = r.groupoid_iso && r.twist_class_match && r.diagram_holds && r.bisection_roundtrip;
            pass &= ok;
            summary.push(format!(
                "{name}/{kind}: {} germs, {} classes{}",
                r.germs,
                r.twist_elements,
                if ok { "" } else { " FAILED" }
            ));
        }
    }
    outcome(pass, summary.join(", "))
}

fn norm_sandwich() -> Outcome {
    let g = FiniteGroupoid::pair(3);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let exps: Vec<i64> = (0..g.len()).map(|_| rng.random_range(0..4)).collect();
    let alg = GroupoidAlgebra::new(cyclic_pair_cocycle(g.clone(), &exps));
    let cfg = PnormConfig { seed: SEED, ..PnormConfig::default() };
    let ps = [
        Exponent::Finite(1.0),
        Exponent::Finite(1.5),
        Exponent::Finite(3.0),
        Exponent::Finite(4.0),
        Exponent::Infinity,
    ];
    let mut violations = 0;
    for i in 0..200 {
        let coeffs = (0..alg.dim()).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let f = alg.element(coeffs).unwrap();
        let est = alg.reduced_norm(&f, ps[i % ps.len()], &cfg).expect("norm");
        let ok = alg.sup_norm(&f) <= est.lower + SANDWICH_TOL
            && est.lower <= est.upper + SANDWICH_TOL
            && est.upper <= alg.i_norm(&f) + SANDWICH_TOL;
        violations += usize::from(!ok);
    }
    let mut worst = 0.0f64;
    let all = bisections(&g).expect("bisections");
    for bis in all.iter().filter(|b| !b.arrows().is_empty()) {
        let mut coeffs = vec![c(0.0, 0.0); alg.dim()];
        for &a in bis.arrows() {
            coeffs[a] = Complex64::from_polar(rng.random_range(0.1..2.0), rng.random_range(0.0..TAU));
        }
        let f = alg.element(coeffs).unwrap();
        for &p in &ps {
            let est = alg.reduced_norm(&f, p, &cfg).expect("norm");
            let sup = alg.sup_norm(&f);
            worst = worst.max((est.lower - sup).abs()).max((est.upper - sup).abs());
        }
    }
    outcome(
        violations == 0 && worst <= BISECTION_TOL,
        format!(
            "200 random elements, {violations} violations; {} bisections, max |norm - sup| = {worst:.2e}",
            all.len()
        ),
    )
}

fn pnorm_engine() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let cfg = PnormConfig { seed: SEED, ..PnormConfig::default() };
    let ps = [
        Exponent::Finite(1.0),
        Exponent::Finite(1.7),
        Exponent::Finite(2.0),
        Exponent::Finite(3.0),
        Exponent::Infinity,
    ];
    let mats: Vec<CMatrix> = (0..100)
        .map(|_| CMatrix::from_fn(3, 3, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
        .collect();
    let worst = mats
        .par_iter()
        .flat_map_iter(|m| ps.iter().map(move |&p| (m, p)))
        .map(|(m, p)| {
            let est = pnorm(m, p, &cfg).expect("pnorm");
            let exact = pnorm_oracle(m, p).expect("oracle");
            (est.lower - exact).abs().max(exact - est.upper)
        })
        .reduce(|| 0.0, f64::max);
    // ‖u v*‖_p = ‖u‖_p ‖v‖_{p'}
    let mut rank_one = 0.0f64;
    for _ in 0..20 {
        let u = CMatrix::from_fn(4, 1, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let v = CMatrix::from_fn(4, 1, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let m = &u * v.adjoint();
        for &p in &ps {
            let exact = vec_norm(u.as_slice(), p) * vec_norm(v.as_slice(), p.conjugate());
            let est = pnorm(&m, p, &cfg).expect("pnorm");
            rank_one = rank_one.max((est.lower - exact).abs()).max(exact - est.upper);
        }
    }
    outcome(
        worst <= ORACLE_TOL && rank_one <= RANK_ONE_TOL,
        format!("500 oracle comparisons, max deviation {worst:.2e}; 100 rank-one cases, max error {rank_one:.2e}"),
    )
}

/// Largest eigenvalue of the path graph on k vertices, computed numerically.
fn path_eigenvalue(k: usize) -> f64 {
    let a = DMatrix::<f64>::from_fn(k, k, |i, j| if i.abs_diff(j) == 1 { 1.0 } else { 0.0 });
    a.symmetric_eigen().eigenvalues.max()
}

fn folner_monotonicity() -> Outcome {
    let radii = [4usize, 8, 16];
    let cfg = PnormConfig { seed: SEED, ..PnormConfig::default() };
    let rows = folner_lower_bounds(0.0, &radii, Exponent::Finite(2.0), &cfg).expect("folner");
    let increasing = rows.windows(2).all(|w| w[1].lower > w[0].lower);
    let mut err = 0.0f64;
    let mut parts = Vec::new();
    for r in &rows {
        let oracle = 2.0 * path_eigenvalue(2 * r.box_radius + 1);
        let closed = 4.0 * (PI / (2 * r.box_radius + 2) as f64).cos();
        err = err.max((r.lower - oracle).abs()).max((oracle - closed).abs());
        parts.push(format!("N={}: {:.9}", r.box_radius, r.lower));
    }
    outcome(
        increasing && err <= FOLNER_TOL,
        format!("{}; strictly increasing {increasing}, max error {err:.2e}", parts.join(", ")),
    )
}

type Criterion = (usize, &'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "cocycle axioms on the corpus", Duration::from_secs(1), cocycle_axioms),
        (2, "Lamperti distance on Z3, Z4", Duration::from_secs(60), lamperti_distance),
        (3, "isometry-group rigidity Z4 vs Z2xZ2", Duration::from_secs(10), isometry_rigidity),
        (4, "Mackey structure of the Z2 sign cocycle", Duration::from_secs(1), mackey_structure),
        (5, "rotation cocycle classes on Z_N^2", Duration::from_secs(30), rotation_classes),
        (6, "C*-core equals the unit diagonal", Duration::from_secs(60), c_star_core),
        (7, "Weyl groupoid and twist round trip", Duration::from_secs(120), weyl_roundtrip),
        (8, "norm sandwich on R3", Duration::from_secs(60), norm_sandwich),
        (9, "pnorm engine against the oracle", Duration::from_secs(120), pnorm_engine),
        (10, "Folner lower bounds at theta = 0", Duration::from_secs(30), folner_monotonicity),
    ];
    let mut unexpected = Vec::new();
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let pass = out.pass && elapsed <= budget;
        let known = KNOWN_RED.contains(&id);
        println!(
            "{} {id:>2} {name}: {} [{:.2} s of {} s]{}",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if known { " (known red, see decisions ledger)" } else { "" }
        );
        if pass == known {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
