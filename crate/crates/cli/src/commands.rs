use crate::config::{Command, ExperimentConfig, TorusMode};
use crate::dataset::{Dataset, Loaded};
use crate::report::{Report, Table};
use crate::CliError;
use lptwist_core::algebra::torus::{folner_lower_bounds, rotation_classes_agree, TorusQuotient};
use lptwist_core::algebra::{GroupAlgebra, GroupoidAlgebra};
use lptwist_core::analysis::linalg::in_span;
use lptwist_core::analysis::{
    core_basis, double_commutant, isometries_in_algebra, pnorm, pnorm_oracle, CMatrix, Exponent, HermitianConfig,
    IsometryGroup, IsometrySearchConfig, PnormConfig, ORACLE_MAX_DIM,
};
use lptwist_core::cohomology::{are_cohomologous, mackey_group_with_order, GroupCocycle};
use lptwist_core::structures::{find_isomorphism, isomorphisms, FiniteGroup};
use lptwist_core::weyl::{roundtrip, RoundTripOptions};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};
use std::path::Path;
use std::time::Instant;

/// Runs the configured experiment.
pub fn run(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let start = Instant::now();
    let mut report = match cfg.command {
        Command::Validate => validate(cfg)?,
        Command::Rigidity => rigidity(cfg)?,
        Command::Weyl => weyl(cfg)?,
        Command::Nctorus => nctorus(cfg)?,
        Command::Pnorm => pnorm_cmd(cfg)?,
        Command::Isometries => isometries(cfg)?,
        Command::Core => core(cfg)?,
    };
    if cfg.timing {
        report.provenance.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(report)
}

fn pnorm_config(cfg: &ExperimentConfig) -> PnormConfig {
    PnormConfig { seed: cfg.seed, random_starts: cfg.starts, ..PnormConfig::default() }
}

fn validate(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let mut table = Table::new("files", &["file", "name", "kind", "ok", "stage", "message", "arrows", "order"]);
    let mut passed = 0;
    for path in &cfg.inputs {
        let file = path.display().to_string();
        let ds = match Dataset::load(path) {
            Ok(ds) => ds,
            Err(e) => {
                table.push(vec![
                    file.into(),
                    Value::Null,
                    Value::Null,
                    false.into(),
                    "parse".into(),
                    e.to_string().into(),
                    Value::Null,
                    Value::Null,
                ]);
                continue;
            }
        };
        let name: Value = ds.name.clone().map(Value::from).unwrap_or(Value::Null);
        match ds.build() {
            Ok(loaded) => {
                passed += 1;
                let (arrows, order) = match &loaded {
                    Loaded::Group(s) => (s.group().len(), s.exact_order()),
                    Loaded::Groupoid(s) => (s.groupoid().len(), s.exact_order()),
                };
                table.push(vec![
                    file.into(),
                    name,
                    loaded.kind().into(),
                    true.into(),
                    Value::Null,
                    Value::Null,
                    arrows.into(),
                    order.into(),
                ]);
            }
            Err(r) => {
                let kind = if ds.group.is_some() { "group" } else { "groupoid" };
                table.push(vec![
                    file.into(),
                    name,
                    kind.into(),
                    false.into(),
                    json!(r.stage),
                    r.message.into(),
                    Value::Null,
                    Value::Null,
                ]);
            }
        }
    }
    let total = cfg.inputs.len();
    let mut report = Report::new(cfg, json!({ "files": total, "passed": passed }))
        .method("exhaustive-table-check")
        .tolerance("unit-scalar", lptwist_core::scalar::UNIT_TOL)
        .table(table);
    report.ok = passed == total;
    Ok(report)
}

struct IsometryData {
    group: IsometryGroup,
    pi0: FiniteGroup,
    algebra_dim: usize,
}

/// Isometries of ℓ^p(G) inside the double commutant of λ^σ(G).
fn isometry_data(sigma: &GroupCocycle, cfg: &ExperimentConfig) -> Result<IsometryData, CliError> {
    cfg.p.require_not_two("the isometry-group computation")?;
    let alg = GroupAlgebra::new(sigma.clone());
    let n = alg.dim();
    let mats: Vec<CMatrix> = (0..n).map(|g| alg.left_regular(&alg.delta(g))).collect();
    let dc = double_commutant(&mats, n);
    let search = IsometrySearchConfig { tol: cfg.tol.unwrap_or(1e-8), ..IsometrySearchConfig::default() };
    let group = isometries_in_algebra(&dc, cfg.p, &search)?;
    let pi0 = group.pi0()?;
    Ok(IsometryData { group, pi0, algebra_dim: dc.len() })
}

fn rigidity(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let sigma = Dataset::open(&cfg.inputs[0])?.into_group(&cfg.inputs[0])?;
    let kappa = Dataset::open(&cfg.inputs[1])?.into_group(&cfg.inputs[1])?;
    let a = isometry_data(&sigma, cfg)?;
    let b = isometry_data(&kappa, cfg)?;
    let side = |d: &IsometryData| {
        json!({
            "double_commutant_dim": d.algebra_dim,
            "families": d.group.families.len(),
            "pi0_order": d.pi0.len(),
            "pi0_abelian": d.pi0.is_abelian(),
            "inconclusive": d.group.inconclusive,
        })
    };
    let mut results = json!({ "a": side(&a), "b": side(&b) });
    let (g, h) = (sigma.group(), kappa.group());
    if find_isomorphism(&a.pi0, &b.pi0).is_none() {
        results["verdict"] = "OBSTRUCTED".into();
        results["obstruction"] = "pi0-mismatch".into();
    } else {
        let psis = isomorphisms(g, h, 100_000);
        let mut witness = None;
        for psi in &psis {
            let pulled = kappa.pullback(g, psi)?;
            if let Some(w) = are_cohomologous(&sigma, &pulled)? {
                witness = Some((psi.clone(), w));
                break;
            }
        }
        match (psis.is_empty(), witness) {
            (true, _) => {
                results["verdict"] = "OBSTRUCTED".into();
                results["obstruction"] = "group-mismatch".into();
            }
            (false, None) => {
                results["verdict"] = "OBSTRUCTED".into();
                results["obstruction"] = "cocycle-class-mismatch".into();
            }
            (false, Some((psi, w))) => {
                results["verdict"] = "ISOMETRIC-ISO-POSSIBLE".into();
                results["psi"] = json!(psi);
                results["gamma"] = json!(w.gamma());
                results["induced_map"] = "delta_x -> gamma(x) * delta_{psi(x)}".into();
            }
        }
        results["isomorphisms_checked"] = psis.len().into();
    }
    Ok(Report::new(cfg, results)
        .method("double-commutant-nullspace")
        .method("isometry-backtracking")
        .method("smith-solver-over-z-m")
        .tolerance("rank", lptwist_core::analysis::linalg::RANK_TOL)
        .tolerance("isometry", cfg.tol.unwrap_or(1e-8)))
}

fn weyl(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let sigma = Dataset::open(&cfg.inputs[0])?.into_groupoid();
    let opts = RoundTripOptions { phase_order: cfg.phase_order, random_weights: true, seed: cfg.seed };
    let r = roundtrip(&sigma, cfg.p, &opts)?;
    let ok = r.groupoid_iso && r.twist_class_match && r.diagram_holds && r.bisection_roundtrip;
    let mut theta = Table::new("theta", &["source", "range", "arrow"]);
    for e in &r.theta {
        theta.push(vec![e.source.into(), e.range.into(), e.arrow.into()]);
    }
    let mut phi = Table::new("phi", &["pair", "unit", "scale", "arrow", "phase"]);
    for e in &r.phi {
        phi.push(vec![e.pair.into(), e.unit.into(), e.scale.into(), e.arrow.into(), e.phase.into()]);
    }
    let mut results = serde_json::to_value(&r).map_err(|e| CliError::Core(e.to_string()))?;
    if let Value::Object(map) = &mut results {
        map.remove("theta");
        map.remove("phi");
    }
    let mut report = Report::new(cfg, results)
        .method("pairs-from-maximal-bisections")
        .method("canonical-form-phases")
        .method("witness-cross-check")
        .tolerance("pair", lptwist_core::weyl::PAIR_TOL)
        .table(theta)
        .table(phi);
    report.ok = ok;
    Ok(report)
}

fn nctorus(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let mode = cfg.torus.clone().ok_or_else(|| CliError::Config("nctorus needs --theta k/N or --folner".into()))?;
    let pcfg = pnorm_config(cfg);
    match mode {
        TorusMode::Quotient { k, n } => {
            let t = TorusQuotient::new(k, n)?;
            let rel = t.relation_check();
            let mut classes = Table::new("classes", &["k", "k_prime", "cohomologous"]);
            for k2 in 0..n as i64 {
                classes.push(vec![k.into(), k2.into(), rotation_classes_agree(k, k2, n)?.into()]);
            }
            let mut ps = vec![Exponent::Finite(1.0), Exponent::Finite(2.0), cfg.p, Exponent::Infinity];
            ps.dedup();
            let mut norms = Table::new("norms", &["p", "lower", "upper", "method"]);
            for row in t.norm_table(&ps, &pcfg)? {
                norms.push(vec![
                    json!(row.p),
                    row.estimate.lower.into(),
                    row.estimate.upper.into(),
                    json!(row.estimate.method),
                ]);
            }
            let class = k.rem_euclid(n as i64);
            let mut report = Report::new(
                cfg,
                json!({
                    "model": "finite quotient Z_N^2 (a discretization, not the rotation algebra itself)",
                    "k": k,
                    "n": n,
                    "class_residue": class,
                    "relation": rel,
                }),
            )
            .method("exact-monomial-arithmetic")
            .method("smith-solver-over-z-m")
            .note("the Z_N^2 quotient is a discretization of the noncommutative torus")
            .table(classes)
            .table(norms);
            report.ok = rel.uv_relation && rel.swapped_relation;
            Ok(report)
        }
        TorusMode::Folner { theta, radii } => {
            let rows = folner_lower_bounds(theta, &radii, cfg.p, &pcfg)?;
            let increasing = rows.windows(2).all(|w| w[1].lower > w[0].lower);
            let mut table = Table::new("folner", &["box_radius", "dim", "lower_bound"]);
            for r in &rows {
                table.push(vec![r.box_radius.into(), r.dim.into(), r.lower.into()]);
            }
            let mut report = Report::new(cfg, json!({ "theta": theta, "strictly_increasing": increasing }))
                .method("box-compression")
                .method("power-iteration")
                .note("values are lower bounds for the norm on l^p(Z^2); no convergence rate is claimed")
                .tolerance("pnorm-rel", pcfg.rel_tol)
                .table(table);
            report.ok = increasing;
            Ok(report)
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    matrix: Vec<Vec<Entry>>,
}

fn load_matrix(path: &Path) -> Result<CMatrix, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let parsed: MatrixFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse { path: path.display().to_string(), message: e.to_string() })?;
    let rows = parsed.matrix.len();
    let cols = parsed.matrix.first().map_or(0, |r| r.len());
    if parsed.matrix.iter().any(|r| r.len() != cols) {
        return Err(CliError::Validation("matrix rows have different lengths".into()));
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| match parsed.matrix[i][j] {
        Entry::Real(x) => Complex64::new(x, 0.0),
        Entry::Complex([a, b]) => Complex64::new(a, b),
    }))
}

fn pnorm_cmd(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let m = load_matrix(&cfg.inputs[0])?;
    let pcfg = pnorm_config(cfg);
    let est = pnorm(&m, cfg.p, &pcfg)?;
    let oracle = if m.nrows().max(m.ncols()) <= ORACLE_MAX_DIM && m.nrows() == m.ncols() {
        Some(pnorm_oracle(&m, cfg.p)?)
    } else {
        None
    };
    Ok(Report::new(
        cfg,
        json!({
            "rows": m.nrows(),
            "cols": m.ncols(),
            "lower": est.lower,
            "upper": est.upper,
            "method": est.method,
            "iterations": est.iterations,
            "oracle": oracle,
        }),
    )
    .method("boyd-higham-multistart")
    .tolerance("pnorm-rel", pcfg.rel_tol))
}

fn isometries(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let sigma = Dataset::open(&cfg.inputs[0])?.into_group(&cfg.inputs[0])?;
    let d = isometry_data(&sigma, cfg)?;
    let mut families = Table::new("families", &["family", "permutation", "free_phases"]);
    for (i, f) in d.group.families.iter().enumerate() {
        families.push(vec![i.into(), json!(f.base.phi), f.free_phases.into()]);
    }
    let m = cfg.search_order.or(sigma.exact_order()).unwrap_or(1);
    let mackey = match d.group.phase_group(m) {
        Ok(pg) => {
            let mg = mackey_group_with_order(&sigma, m)?;
            json!({ "order": m, "phase_group_size": pg.len(), "isomorphic_to_mackey_group": find_isomorphism(&pg, &mg.group).is_some() })
        }
        Err(e) => json!({ "order": m, "error": e.to_string() }),
    };
    let pi0_matches = find_isomorphism(&d.pi0, sigma.group()).is_some();
    let mut report = Report::new(
        cfg,
        json!({
            "group_order": sigma.group().len(),
            "double_commutant_dim": d.algebra_dim,
            "families": d.group.families.len(),
            "inconclusive": d.group.inconclusive,
            "nodes": d.group.nodes,
            "pi0_order": d.pi0.len(),
            "pi0_isomorphic_to_group": pi0_matches,
            "phases": mackey,
        }),
    )
    .method("double-commutant-nullspace")
    .method("isometry-backtracking")
    .tolerance("isometry", cfg.tol.unwrap_or(1e-8))
    .table(families);
    report.ok = pi0_matches && d.group.inconclusive == 0;
    Ok(report)
}

fn core(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let sigma = Dataset::open(&cfg.inputs[0])?.into_groupoid();
    let alg = GroupoidAlgebra::new(sigma);
    let hcfg = HermitianConfig {
        tol: cfg.tol.unwrap_or(1e-7),
        pnorm: pnorm_config(cfg),
        seed: cfg.seed,
        ..HermitianConfig::default()
    };
    let result = core_basis(&alg.basis_matrices(), cfg.p, &hcfg)?;
    let units = alg.carrier().units().to_vec();
    let diagonal_in_core = units.iter().all(|&x| in_span(&alg.regular(&alg.delta(x)), &result.basis, 1e-6));
    let equals = diagonal_in_core && result.complex_dim == units.len();
    let mut report = Report::new(
        cfg,
        json!({
            "algebra_dim": alg.dim(),
            "units": units.len(),
            "core_dim": result.complex_dim,
            "hermitian_real_dim": result.hermitian_real_dim,
            "tests": result.tests,
            "inconclusive": result.inconclusive,
            "equals_unit_diagonal": equals,
        }),
    )
    .method("exp-itA-grid")
    .method("boyd-higham-multistart")
    .tolerance("hermitian", hcfg.tol)
    .tolerance("span", 1e-6);
    report.ok = equals;
    Ok(report)
}
