//! Command dispatch: each command maps onto one library operation and fills a
//! [`Report`].

use serde_json::{json, Map, Value};
use zakfiber::oracle::{brute_membership, dense_fiber_ranks, dense_frame_bounds, dense_riesz_bounds};
use zakfiber::{
    bracket, frame_check, membership, parseval_decompose, range_of, riesz_check, single_generator_report,
    verify_decomposition, Action64, Tolerances64, TranslationScenario, Zak64, C64,
};

use crate::report::{bounds_summary, complex, complex_vec, fiber_records, Report, Status};
use crate::scenario::{Model, Scenario, TranslationModel};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TranslationOp {
    Weil,
    Zak,
    Fiberize,
    Duality,
    Analyze,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Validate,
    Zak,
    Range,
    Length,
    Member,
    Frame,
    Riesz,
    Bracket { generator: usize },
    Decompose,
    Translation(TranslationOp),
    Verify,
}

impl Op {
    pub fn name(&self) -> String {
        let t = |op: &TranslationOp| match op {
            TranslationOp::Weil => "weil",
            TranslationOp::Zak => "zak",
            TranslationOp::Fiberize => "fiberize",
            TranslationOp::Duality => "duality",
            TranslationOp::Analyze => "analyze",
        };
        match self {
            Op::Validate => "validate".into(),
            Op::Zak => "zak".into(),
            Op::Range => "range".into(),
            Op::Length => "length".into(),
            Op::Member => "member".into(),
            Op::Frame => "frame".into(),
            Op::Riesz => "riesz".into(),
            Op::Bracket { .. } => "bracket".into(),
            Op::Decompose => "decompose".into(),
            Op::Translation(op) => format!("translation {}", t(op)),
            Op::Verify => "verify".into(),
        }
    }
}

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Thresholds used by `verify`.
pub const ISOMETRY_TOLERANCE: f64 = 1e-12;
pub const BOUNDS_TOLERANCE: f64 = 1e-8;
pub const BRIDGE_TOLERANCE: f64 = 1e-10;
pub const DECOMPOSITION_TOLERANCE: f64 = 1e-10;

fn lib(e: zakfiber::Error) -> CliError {
    CliError::Validation(e.to_string())
}

fn incompatible(op: &Op, what: &str) -> CliError {
    CliError::Validation(format!("command `{}` is incompatible with this scenario: {what}", op.name()))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// The action a scenario's action-level commands run on, with its generators,
/// probes and fiber labels.
struct ActionView {
    action: Action64,
    generators: Vec<Vec<C64>>,
    probes: Vec<Vec<C64>>,
    normalization: Value,
}

fn action_normalization(a: &Action64) -> Value {
    let order = a.group().order();
    json!({
        "space": "counting measure weighted by space.weights",
        "dual_point_mass": 1.0 / order as f64,
        "fiber_measure": 1.0 / order as f64,
        "zak": "Z[psi](a)(x) = sum_g (Pi(g) psi)(x) conj((g, a)), x in the tiling transversal",
        "representation": "Pi(g) psi(x) = J(-g, x)^(1/2) psi(sigma(-g, x))",
    })
}

fn translation_normalization(s: &TranslationScenario) -> Value {
    let n = s.normalization::<f64>();
    json!({
        "group": n.group,
        "subgroup": n.subgroup,
        "section": n.section,
        "dual": n.dual,
        "dual_section": n.dual_section,
        "annihilator": n.annihilator,
        "annihilator_fourier_factor": s.subgroup().order() as f64 / s.group().order() as f64,
        "zak": "Z f(w)(x) = sum_{h in H} f(x - h) conj((h, w)), w in Omega, x in C",
        "fiberization": "T f(w) = (f^(w + d))_{d in H*}",
    })
}

fn action_view(scenario: &Scenario) -> Result<ActionView, CliError> {
    match &scenario.model {
        Model::Action(m) => Ok(ActionView {
            normalization: action_normalization(&m.action),
            action: m.action.clone(),
            generators: m.generators.clone(),
            probes: m.probes.clone(),
        }),
        Model::Translation(t) => {
            let bridge = t.scenario.as_action::<f64>().map_err(lib)?;
            let mut normalization = action_normalization(&bridge.action);
            normalization["action"] = json!("translation by the subgroup, in its cyclic decomposition");
            normalization["subgroup_generators"] = json!(bridge.generators);
            Ok(ActionView {
                action: bridge.action,
                generators: t.generators.clone(),
                probes: t.probes.clone(),
                normalization,
            })
        }
    }
}

fn labels(a: &Action64) -> Vec<Vec<usize>> {
    a.group().elements().collect()
}

fn translation_labels(s: &TranslationScenario) -> Vec<Vec<usize>> {
    s.dual_section().iter().map(|&w| s.group().element(w)).collect()
}

fn summary_map(report: &mut Report) -> &mut Map<String, Value> {
    report.summary.as_object_mut().expect("summary is an object")
}

/// Runs `op` on a parsed scenario. `tolerance` is the rank tolerance and the
/// Parseval verdict slack.
pub fn run(op: Op, scenario: &Scenario, tolerance: f64) -> Result<Report, CliError> {
    if !(tolerance > 0.0 && tolerance < 1.0) {
        return Err(CliError::Validation("tolerance must be in (0, 1)".into()));
    }
    let tol = Tolerances64::with_global(tolerance);
    match op {
        Op::Translation(t) => {
            let Model::Translation(m) = &scenario.model else {
                return Err(incompatible(&op, "no translation block"));
            };
            run_translation(op, t, m, &scenario.name, &tol)
        }
        Op::Validate => run_validate(op, scenario, &tol),
        Op::Verify => match &scenario.model {
            Model::Action(_) => verify_action(op, scenario, &tol),
            Model::Translation(m) => verify_translation(op, scenario, m, &tol),
        },
        _ => {
            let view = action_view(scenario)?;
            run_action(op, &view, &scenario.name, &tol)
        }
    }
}

fn run_validate(op: Op, scenario: &Scenario, tol: &Tolerances64) -> Result<Report, CliError> {
    let view = action_view(scenario)?;
    let mut report = Report::new(&op.name(), &scenario.name, tol, view.normalization.clone());
    let v = view.action.validate();
    let transversal = view.action.tiling_transversal();
    let violations: Vec<Value> = v
        .violations
        .iter()
        .map(|x| json!({"condition": x.condition.to_string(), "gamma": x.gamma, "point": x.point}))
        .collect();
    let m = summary_map(&mut report);
    m.insert("ok".into(), v.ok.into());
    m.insert("violations".into(), violations.into());
    m.insert("free".into(), transversal.is_ok().into());
    match &transversal {
        Ok(t) => {
            m.insert("transversal".into(), t.points().to_vec().into());
        }
        Err(e) => {
            m.insert("transversal".into(), Value::Null);
            m.insert("transversal_error".into(), e.to_string().into());
        }
    }
    if let Model::Translation(t) = &scenario.model {
        let s = &t.scenario;
        let g = s.group().order();
        m.insert("subgroup".into(), json!(s.subgroup().member_elements()));
        m.insert("annihilator".into(), json!(s.annihilator().member_elements()));
        m.insert("section".into(), json!(s.section()));
        m.insert("dual_section".into(), json!(s.dual_section()));
        let counts = s.subgroup().order() * s.section().len() == g && s.annihilator().order() * s.dual_section().len() == g;
        m.insert("index_bookkeeping".into(), counts.into());
        if !counts {
            report.status = Status::ValidationFailure;
        }
    }
    if !v.ok || transversal.is_err() {
        report.status = Status::ValidationFailure;
    }
    Ok(report)
}

fn run_action(op: Op, view: &ActionView, name: &str, tol: &Tolerances64) -> Result<Report, CliError> {
    let mut report = Report::new(&op.name(), name, tol, view.normalization.clone());
    let a = &view.action;
    let zak = Zak64::new(a).map_err(lib)?;
    let labels = labels(a);
    let gens = &view.generators;
    match op {
        Op::Zak => {
            let frame = frame_check(&zak, gens, tol).map_err(lib)?;
            report.fibers = fiber_records(&frame, &labels);
            let transforms: Vec<Value> = gens
                .iter()
                .map(|g| {
                    let z = zak.forward(g)?;
                    let fibers: Vec<Vec<[f64; 2]>> = z.fibers().iter().map(|f| complex_vec(f)).collect();
                    Ok(json!({
                        "fibers": fibers,
                        "norm_sqr": a.space().norm_sqr(g),
                        "zak_norm_sqr": z.norm_sqr(),
                    }))
                })
                .collect::<Result<_, zakfiber::Error>>()
                .map_err(lib)?;
            let m = summary_map(&mut report);
            m.insert("transversal".into(), zak.transversal().points().to_vec().into());
            m.insert("transforms".into(), transforms.into());
        }
        Op::Range | Op::Length | Op::Frame | Op::Riesz => {
            let r = if op == Op::Riesz { riesz_check(&zak, gens, tol) } else { frame_check(&zak, gens, tol) }.map_err(lib)?;
            report.fibers = fiber_records(&r, &labels);
            let dims: Vec<usize> = r.fibers.iter().map(|f| f.dim).collect();
            let length = dims.iter().copied().max().unwrap_or(0);
            report.summary = match op {
                Op::Frame | Op::Riesz => Value::Object(bounds_summary(&r)),
                Op::Range => json!({"dims": dims, "length": length, "total_dim": dims.iter().sum::<usize>()}),
                _ => json!({"length": length}),
            };
        }
        Op::Member => {
            if view.probes.is_empty() {
                return Err(incompatible(&op, "scenario has no probes"));
            }
            let range = range_of(&zak, gens, tol).map_err(lib)?;
            report.fibers = fiber_records(&frame_check(&zak, gens, tol).map_err(lib)?, &labels);
            let probes: Vec<Value> = view
                .probes
                .iter()
                .map(|p| membership(&zak, p, &range, tol).map(|r| json!({"member": r.member, "residual": r.residual})))
                .collect::<Result<_, _>>()
                .map_err(lib)?;
            let m = summary_map(&mut report);
            m.insert("length".into(), range.length().into());
            m.insert("probes".into(), probes.into());
        }
        Op::Bracket { generator } => {
            let psi = gens
                .get(generator)
                .ok_or_else(|| incompatible(&op, &format!("generator {generator} does not exist")))?;
            let (r, br) = single_generator_report(&zak, psi, tol).map_err(lib)?;
            report.fibers = fiber_records(&r, &labels);
            for (rec, v) in report.fibers.iter_mut().zip(br.values()) {
                rec.bracket = Some(complex(*v));
            }
            let mut m = bounds_summary(&r);
            m.insert("generator".into(), generator.into());
            m.insert("integral".into(), json!(complex(br.integral())));
            m.insert("norm_sqr".into(), a.space().norm_sqr(psi).into());
            report.summary = Value::Object(m);
        }
        Op::Decompose => {
            let parts = parseval_decompose(&zak, gens, tol).map_err(lib)?;
            let check = verify_decomposition(&zak, gens, &parts, tol).map_err(lib)?;
            let union = frame_check(&zak, &parts, tol).map_err(lib)?;
            report.fibers = fiber_records(&union, &labels);
            let union_parseval = union
                .bounds()
                .map(|(a, b)| (a - 1.0).abs() <= DECOMPOSITION_TOLERANCE && (b - 1.0).abs() <= DECOMPOSITION_TOLERANCE);
            let passed = check.passed() && union_parseval != Some(false);
            report.summary = json!({
                "parts": parts.len(),
                "functions": parts.iter().map(|p| complex_vec(p)).collect::<Vec<_>>(),
                "orthogonality_defect": check.orthogonality_defect,
                "orthogonal": check.orthogonal,
                "norm_defect": check.norm_defect,
                "norms_binary": check.norms_binary,
                "parseval": check.parseval,
                "part_dims": check.part_dims,
                "space_dims": check.space_dims,
                "dims_match": check.dims_match,
                "generator_residuals": check.generator_residuals,
                "generators_covered": check.generators_covered,
                "union_A": union.lower,
                "union_B": union.upper,
                "union_parseval": union_parseval,
                "passed": passed,
            });
            if !passed {
                report.status = Status::ValidationFailure;
            }
        }
        Op::Validate | Op::Verify | Op::Translation(_) => unreachable!("dispatched elsewhere"),
    }
    Ok(report)
}

fn translation_functions(m: &TranslationModel) -> Vec<&Vec<C64>> {
    m.generators.iter().chain(&m.probes).collect()
}

fn run_translation(
    op: Op,
    t: TranslationOp,
    m: &TranslationModel,
    name: &str,
    tol: &Tolerances64,
) -> Result<Report, CliError> {
    let s = &m.scenario;
    let mut report = Report::new(&op.name(), name, tol, translation_normalization(s));
    let labels = translation_labels(s);
    let analysis = s.ti_analyze(&m.generators, tol).map_err(lib)?;
    report.fibers = fiber_records(&analysis.frame, &labels);
    let functions = translation_functions(m);
    let summary = match t {
        TranslationOp::Weil => {
            let checks: Vec<Value> = functions
                .iter()
                .map(|f| {
                    s.weil_check(f)
                        .map(|w| json!({"lhs": complex(w.lhs), "rhs": complex(w.rhs), "deviation": w.deviation}))
                })
                .collect::<Result<_, _>>()
                .map_err(lib)?;
            json!({"functions": checks})
        }
        TranslationOp::Zak => {
            let transforms: Vec<Value> = functions
                .iter()
                .map(|f| {
                    s.zak_forward(f).map(|z| {
                        json!({
                            "fibers": z.fibers().iter().map(|v| complex_vec(v)).collect::<Vec<_>>(),
                            "norm_sqr": norm_sqr(f),
                            "zak_norm_sqr": z.norm_sqr(),
                        })
                    })
                })
                .collect::<Result<_, _>>()
                .map_err(lib)?;
            json!({"section": s.section(), "dual_section": s.dual_section(), "transforms": transforms})
        }
        TranslationOp::Fiberize => {
            let values: Vec<Value> = functions
                .iter()
                .map(|f| s.fiberize(f).map(|tf| json!(tf.iter().map(|v| complex_vec(v)).collect::<Vec<_>>())))
                .collect::<Result<_, _>>()
                .map_err(lib)?;
            json!({"annihilator": s.annihilator().members(), "dual_section": s.dual_section(), "fiberized": values})
        }
        TranslationOp::Duality => {
            let duality: Vec<f64> = functions.iter().map(|f| s.duality_check(f)).collect::<Result<_, _>>().map_err(lib)?;
            let mut gramian = Vec::new();
            for (i, f) in functions.iter().enumerate() {
                for (j, g) in functions.iter().enumerate().skip(i) {
                    gramian.push(json!({"pair": [i, j], "deviation": s.gramian_check(f, g).map_err(lib)?}));
                }
            }
            json!({"duality_deviation": duality, "gramian": gramian})
        }
        TranslationOp::Analyze => {
            let mut map = bounds_summary(&analysis.frame);
            map.insert("dims".into(), analysis.range.dims().into());
            map.insert("riesz_A".into(), analysis.riesz.lower.into());
            map.insert("riesz_B".into(), analysis.riesz.upper.into());
            Value::Object(map)
        }
    };
    report.summary = summary;
    Ok(report)
}

#[derive(Default)]
struct Checks {
    entries: Vec<Value>,
    failed: bool,
}

impl Checks {
    fn push(&mut self, name: &str, value: f64, threshold: f64) {
        let pass = value <= threshold;
        self.failed |= !pass;
        self.entries.push(json!({"check": name, "value": value, "threshold": threshold, "pass": pass}));
    }

    fn flag(&mut self, name: &str, pass: bool, detail: Value) {
        self.failed |= !pass;
        self.entries.push(json!({"check": name, "pass": pass, "detail": detail}));
    }

    fn finish(self, report: &mut Report) {
        let total = self.entries.len();
        let passed = self.entries.iter().filter(|e| e["pass"] == Value::Bool(true)).count();
        report.summary = json!({"checks": self.entries, "total": total, "passed": passed});
        if self.failed {
            report.status = Status::OracleDisagreement;
        }
    }
}

fn bounds_deviation(fiber: Option<(f64, f64)>, dense: Option<(f64, f64)>) -> f64 {
    match (fiber, dense) {
        (Some((a, b)), Some((c, d))) => rel(a, c).max(rel(b, d)),
        (None, None) => 0.0,
        _ => f64::INFINITY,
    }
}

/// Fiber-side results against the dense oracle on one action.
fn oracle_checks(checks: &mut Checks, prefix: &str, zak: &Zak64, view: &ActionView, tol: &Tolerances64) -> Result<(), CliError> {
    let a = &view.action;
    let gens = &view.generators;
    for (i, psi) in gens.iter().chain(&view.probes).enumerate() {
        let n2 = a.space().norm_sqr(psi);
        let z = zak.forward(psi).map_err(lib)?;
        checks.push(&format!("{prefix}zak_isometry[{i}]"), (n2 - z.norm_sqr()).abs(), ISOMETRY_TOLERANCE * n2.max(1.0));
        let back = zak.inverse(&z).map_err(lib)?;
        let dev = back.iter().zip(psi).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        let scale = psi.iter().map(|x| x.norm()).fold(1.0, f64::max);
        checks.push(&format!("{prefix}round_trip[{i}]"), dev, ISOMETRY_TOLERANCE * scale);
    }

    let frame = frame_check(zak, gens, tol).map_err(lib)?;
    let dense = dense_frame_bounds(a, gens).map_err(lib)?;
    checks.push(&format!("{prefix}frame_bounds"), bounds_deviation(frame.bounds(), dense), BOUNDS_TOLERANCE);

    let riesz = riesz_check(zak, gens, tol).map_err(lib)?;
    let dense_riesz = dense_riesz_bounds(a, gens).map_err(lib)?;
    let independent = dense_riesz.as_ref().is_some_and(|d| d.independent);
    checks.flag(
        &format!("{prefix}riesz_verdict"),
        riesz.is_riesz == independent,
        json!({"fiber": riesz.is_riesz, "dense": independent}),
    );
    if riesz.is_riesz && independent {
        let d = dense_riesz.as_ref().map(|d| (d.lower, d.upper));
        checks.push(&format!("{prefix}riesz_bounds"), bounds_deviation(riesz.bounds(), d), BOUNDS_TOLERANCE);
    }

    let range = range_of(zak, gens, tol).map_err(lib)?;
    let dims = range.dims();
    let ranks = dense_fiber_ranks(a, gens).map_err(lib)?;
    checks.flag(&format!("{prefix}fiber_dims"), dims == ranks, json!({"fiber": dims, "dense": ranks}));
    let dense_length = ranks.iter().copied().max().unwrap_or(0);
    checks.flag(
        &format!("{prefix}length"),
        range.length() == dense_length,
        json!({"fiber": range.length(), "dense": dense_length}),
    );

    for (i, psi) in gens.iter().chain(&view.probes).enumerate() {
        let fiber = membership(zak, psi, &range, tol).map_err(lib)?;
        let (dense, residual) = brute_membership(a, psi, gens).map_err(lib)?;
        checks.flag(
            &format!("{prefix}membership[{i}]"),
            fiber.member == dense,
            json!({"fiber": fiber.member, "fiber_residual": fiber.residual, "dense": dense, "dense_residual": residual}),
        );
    }

    if gens.len() == 1 {
        let (single, _) = single_generator_report(zak, &gens[0], tol).map_err(lib)?;
        checks.push(&format!("{prefix}single_generator_bounds"), bounds_deviation(single.bounds(), frame.bounds()), BOUNDS_TOLERANCE);
    }

    if !frame.degenerate {
        let dtol = Tolerances64 { verdict: DECOMPOSITION_TOLERANCE, ..*tol };
        let parts = parseval_decompose(zak, gens, &dtol).map_err(lib)?;
        let check = verify_decomposition(zak, gens, &parts, &dtol).map_err(lib)?;
        checks.flag(
            &format!("{prefix}decomposition"),
            check.passed(),
            json!({"parts": parts.len(), "orthogonality_defect": check.orthogonality_defect, "norm_defect": check.norm_defect}),
        );
        let union = frame_check(zak, &parts, &dtol).map_err(lib)?;
        checks.push(&format!("{prefix}union_parseval"), bounds_deviation(union.bounds(), Some((1.0, 1.0))), DECOMPOSITION_TOLERANCE);
        if let Some(first) = gens.first() {
            let br = bracket(zak, first, first).map_err(lib)?;
            let n2 = a.space().norm_sqr(first);
            checks.push(&format!("{prefix}bracket_integral"), (br.integral().re - n2).abs(), ISOMETRY_TOLERANCE * n2.max(1.0));
        }
    }
    Ok(())
}

fn verify_action(op: Op, scenario: &Scenario, tol: &Tolerances64) -> Result<Report, CliError> {
    let view = action_view(scenario)?;
    let mut report = Report::new(&op.name(), &scenario.name, tol, view.normalization.clone());
    if !view.action.validate().ok {
        return Err(CliError::Validation("action fails validation; run `validate` for details".into()));
    }
    let zak = Zak64::new(&view.action).map_err(lib)?;
    let mut checks = Checks::default();
    oracle_checks(&mut checks, "", &zak, &view, tol)?;
    report.fibers = fiber_records(&frame_check(&zak, &view.generators, tol).map_err(lib)?, &labels(&view.action));
    checks.finish(&mut report);
    Ok(report)
}

fn verify_translation(op: Op, scenario: &Scenario, m: &TranslationModel, tol: &Tolerances64) -> Result<Report, CliError> {
    let s = &m.scenario;
    let mut report = Report::new(&op.name(), &scenario.name, tol, translation_normalization(s));
    let mut checks = Checks::default();
    let functions = translation_functions(m);
    for (i, f) in functions.iter().enumerate() {
        let n2 = norm_sqr(f);
        let w = s.weil_check(f).map_err(lib)?;
        checks.push(&format!("weil[{i}]"), w.deviation, ISOMETRY_TOLERANCE * n2.sqrt().max(1.0));
        let z = s.zak_forward(f).map_err(lib)?;
        checks.push(&format!("zak_isometry[{i}]"), (n2 - z.norm_sqr()).abs(), ISOMETRY_TOLERANCE * n2.max(1.0));
        let back = s.zak_inverse(&z).map_err(lib)?;
        let dev = back.iter().zip(f.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        checks.push(&format!("round_trip[{i}]"), dev, ISOMETRY_TOLERANCE * f.iter().map(|x| x.norm()).fold(1.0, f64::max));
        checks.push(&format!("duality[{i}]"), s.duality_check(f).map_err(lib)?, ISOMETRY_TOLERANCE * n2.max(1.0));
    }
    for (i, f) in functions.iter().enumerate() {
        for (j, g) in functions.iter().enumerate().skip(i) {
            let scale = (norm_sqr(f) * norm_sqr(g)).sqrt().max(1.0);
            checks.push(&format!("gramian[{i},{j}]"), s.gramian_check(f, g).map_err(lib)?, ISOMETRY_TOLERANCE * scale);
        }
    }

    let ti = s.ti_analyze(&m.generators, tol).map_err(lib)?;
    let view = action_view(scenario)?;
    let bridge = s.as_action::<f64>().map_err(lib)?;
    let zak = Zak64::new(&view.action).map_err(lib)?;
    let generic = range_of(&zak, &m.generators, tol).map_err(lib)?;
    let mapped: Vec<usize> = bridge.omega_to_dual.iter().map(|&a| generic.dim(a)).collect();
    let ti_dims = ti.range.dims();
    checks.flag("bridge_dims", ti_dims == mapped, json!({"translation": ti_dims, "action": mapped}));
    let frame = frame_check(&zak, &m.generators, tol).map_err(lib)?;
    checks.push("bridge_bounds", bounds_deviation(ti.frame.bounds(), frame.bounds()), BRIDGE_TOLERANCE);

    oracle_checks(&mut checks, "action.", &zak, &view, tol)?;
    report.fibers = fiber_records(&ti.frame, &translation_labels(s));
    checks.finish(&mut report);
    Ok(report)
}

