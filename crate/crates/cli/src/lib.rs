//! Commands behind the `loceret` binary.
//!
//! Each command returns a [`CommandOutput`]: a human summary for standard
//! output, a JSON report document and an `ok` flag that decides the exit
//! code. Report documents carry `schema_version` and keep keys in insertion
//! order.

use std::fmt::Write as _;

use loceret_core::codeops::{
    check_bounds, BoundReport, CodeError, LocalityReport, SearchMode,
};
use loceret_core::descriptor::{BuiltCode, CodeDescriptor, CodeKind, FieldDescriptor};
use loceret_core::localrepair::{RecoveryPlan, RepairOutcome, Verdict};
use loceret_core::storagesim::{self, Channel, ClusterConfig, Execution, Policy, SimReport, SweepRow};
use loceret_core::{Felt, Field};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use thiserror::Error;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("word has no `?` erasure")]
    MissingErasure,
    #[error("word has {0} `?` erasures, exactly one is supported")]
    MultipleErasures(usize),
    #[error("erasure at position {found} but target is coordinate {target}")]
    ErasureNotAtTarget { found: usize, target: usize },
    #[error("word has {got} symbols, expected {n} (full word) or {barred} (recovery set with target)")]
    WordLength { got: usize, n: usize, barred: usize },
    #[error("bad symbol `{0}` in word")]
    BadSymbol(String),
    #[error("a recovery-set word needs an explicit target")]
    TargetRequired,
    #[error("config parse error at `{path}` (line {line}, column {column}): {message}")]
    ConfigParse { path: String, line: usize, column: usize, message: String },
    #[error(transparent)]
    Descriptor(#[from] loceret_core::descriptor::DescriptorError),
    #[error(transparent)]
    Repair(#[from] loceret_core::localrepair::RepairError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Field(#[from] loceret_core::galois::FieldError),
    #[error(transparent)]
    Sim(#[from] storagesim::SimError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub summary: String,
    pub report: Value,
    pub ok: bool,
}

fn document(command: &str, body: Value) -> Value {
    let mut map = Map::new();
    map.insert("schema_version".into(), json!(SCHEMA_VERSION));
    map.insert("command".into(), json!(command));
    if let Value::Object(fields) = body {
        map.extend(fields);
    }
    Value::Object(map)
}

/// Pretty JSON with a trailing newline.
pub fn emit_report(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("json values serialize");
    s.push('\n');
    s
}

pub fn parse_report(text: &str) -> Result<Value, serde_json::Error> {
    serde_json::from_str(text)
}

fn ints(v: &[Felt]) -> Vec<u32> {
    v.iter().map(|x| x.0).collect()
}

fn fmt_ints(v: &[impl std::fmt::Display]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceMethod {
    Enumeration,
    /// `n − k + 1` for Reed-Solomon codes.
    Mds,
    /// Lower bound `n − δ` for LRC-RS codes.
    GoppaLowerBound,
}

fn distance(built: &BuiltCode) -> Result<(usize, DistanceMethod), CliError> {
    match built.code.min_distance() {
        Ok(d) => Ok((d, DistanceMethod::Enumeration)),
        Err(CodeError::TooLargeToEnumerate { .. }) => match &built.kind {
            CodeKind::Rs(s) => Ok((s.n() - s.k() + 1, DistanceMethod::Mds)),
            CodeKind::LrcRs(s) => Ok((s.goppa_bound(), DistanceMethod::GoppaLowerBound)),
            CodeKind::Generator(_) => Err(built.code.min_distance().unwrap_err().into()),
        },
        Err(e) => Err(e.into()),
    }
}

fn locality(built: &BuiltCode, t: usize, mode: SearchMode) -> Result<LocalityReport, CliError> {
    match built.code.t_locality(t, mode) {
        Err(CodeError::TooLargeToEnumerate { .. }) if mode == SearchMode::Exhaustive => {
            Ok(built.code.t_locality(t, SearchMode::Greedy)?)
        }
        other => Ok(other?),
    }
}

pub fn analyze(descriptor: &str, t: usize, mode: SearchMode) -> Result<CommandOutput, CliError> {
    let desc = CodeDescriptor::from_json(descriptor)?;
    let built = desc.build()?;
    let (n, k) = (built.n(), built.code.dim());
    let (d, d_method) = distance(&built)?;
    let loc = locality(&built, t, mode)?;
    let dual = built.code.dual();
    let dual_ghw = if t < dual.dim() {
        match dual.ghw(t + 1) {
            Ok(g) => Some(g),
            Err(CodeError::TooLargeToEnumerate { .. }) => None,
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    let bounds: Option<BoundReport> = loc.r_t.map(|r_t| check_bounds(n, k, d, t, r_t, dual_ghw));
    // A lower bound on d and an upper bound on r_t can only hide a violation,
    // never create one, so violations stay meaningful for inexact inputs.
    let ok = !bounds.as_ref().is_some_and(BoundReport::any_violated);
    let exact = loc.exact && d_method != DistanceMethod::GoppaLowerBound;
    let verdict = match (&bounds, loc.is_t_lredc()) {
        (_, false) => format!("not {t}-LREDC"),
        (Some(b), true) if b.t_optimal && exact => format!("{t}-optimal"),
        (Some(b), true) if b.t_optimal => format!("{t}-optimal (from inexact inputs)"),
        _ => format!("{t}-LREDC, not {t}-optimal"),
    };

    let mut summary = String::new();
    writeln!(summary, "{} code over GF({}^{}): n = {n}, k = {k}", built.kind_name(), built.field.characteristic(), built.field.degree()).unwrap();
    writeln!(summary, "d = {d} ({})", match d_method {
        DistanceMethod::Enumeration => "exact, by enumeration",
        DistanceMethod::Mds => "exact, MDS",
        DistanceMethod::GoppaLowerBound => "lower bound n - delta",
    })
    .unwrap();
    for c in &loc.per_coord {
        match (&c.locality, &c.witness) {
            (Some(l), Some(w)) => writeln!(summary, "  coordinate {}: locality {l}, helpers {}", c.coord, fmt_ints(w.indices())),
            _ => writeln!(summary, "  coordinate {}: no {t}-edr set", c.coord),
        }
        .unwrap();
    }
    match loc.r_t {
        Some(r) => writeln!(summary, "r_{t} = {r}{}", if loc.exact { "" } else { " (greedy upper bound)" }),
        None => writeln!(summary, "r_{t} undefined: coordinates {} have no {t}-edr set", fmt_ints(&loc.not_lredc)),
    }
    .unwrap();
    if let Some(g) = dual_ghw {
        writeln!(summary, "d_{}(dual) = {g}", t + 1).unwrap();
    }
    if let Some(b) = &bounds {
        for c in &b.checks {
            writeln!(summary, "bound {}: {} vs {} ({:?})", c.name, c.lhs, c.rhs, c.verdict).unwrap();
        }
    }
    writeln!(summary, "verdict: {verdict}").unwrap();

    let per_coord: Vec<Value> = loc
        .per_coord
        .iter()
        .map(|c| json!({ "coord": c.coord, "locality": c.locality, "helpers": c.witness.as_ref().map(|w| w.indices().to_vec()) }))
        .collect();
    let body = json!({
        "code": { "kind": built.kind_name(), "digest": built.digest, "n": n, "k": k },
        "distance": { "value": d, "method": d_method, "exact": d_method != DistanceMethod::GoppaLowerBound },
        "locality": { "t": t, "exact": loc.exact, "r_t": loc.r_t, "not_lredc": loc.not_lredc, "per_coord": per_coord },
        "dual_ghw": { "s": t + 1, "value": dual_ghw },
        "bounds": bounds.as_ref().map(|b| &b.checks),
        "t_optimal": bounds.as_ref().is_some_and(|b| b.t_optimal),
        "verdict": verdict,
        "ok": ok,
    });
    Ok(CommandOutput { summary, report: document("analyze", body), ok })
}

fn plan_record(plan: &RecoveryPlan) -> Value {
    json!({
        "target": plan.target,
        "t": plan.t,
        "helpers": plan.helpers,
        "barred": plan.barred,
        "w": ints(&plan.w),
        "z": plan.z.iter().map(|row| ints(row)).collect::<Vec<_>>(),
    })
}

fn plan_summary(plan: &RecoveryPlan) -> String {
    let mut s = String::new();
    writeln!(s, "target coordinate {} (t = {})", plan.target, plan.t).unwrap();
    writeln!(s, "helper coordinates {}", fmt_ints(&plan.helpers)).unwrap();
    writeln!(s, "w over coordinates {}: {}", fmt_ints(&plan.barred), fmt_ints(&ints(&plan.w))).unwrap();
    if plan.z.is_empty() {
        writeln!(s, "no detection vectors").unwrap();
    }
    for row in &plan.z {
        writeln!(s, "z over helpers: {}", fmt_ints(&ints(row))).unwrap();
    }
    s
}

pub fn plan(descriptor: &str, target: usize, t: usize, helpers: Option<&[usize]>) -> Result<CommandOutput, CliError> {
    let built = CodeDescriptor::from_json(descriptor)?.build()?;
    let plan = built.plan(target, t, helpers)?;
    let body = json!({ "code_digest": built.digest, "plan": plan_record(&plan), "ok": true });
    Ok(CommandOutput { summary: plan_summary(&plan), report: document("plan", body), ok: true })
}

/// Symbols of a word file, `None` for `?`.
pub fn parse_word(text: &str, field: &Field) -> Result<Vec<Option<Felt>>, CliError> {
    text.split_whitespace()
        .map(|tok| {
            if tok == "?" {
                return Ok(None);
            }
            let v: i64 = tok.parse().map_err(|_| CliError::BadSymbol(tok.to_string()))?;
            Ok(Some(field.from_signed(v)?))
        })
        .collect()
}

/// Repairs the erased symbol of `word`, given either as a full length-`n`
/// word or as the symbols on `R̄` in coordinate order. For full words the
/// target defaults to the erased position.
pub fn repair(
    descriptor: &str,
    word: &str,
    target: Option<usize>,
    t: usize,
    helpers: Option<&[usize]>,
) -> Result<CommandOutput, CliError> {
    let built = CodeDescriptor::from_json(descriptor)?.build()?;
    let field = &built.field;
    let symbols = parse_word(word, field)?;
    let erased: Vec<usize> = symbols.iter().enumerate().filter(|(_, s)| s.is_none()).map(|(i, _)| i).collect();
    let pos = match erased.as_slice() {
        [] => return Err(CliError::MissingErasure),
        [p] => *p,
        many => return Err(CliError::MultipleErasures(many.len())),
    };
    let n = built.n();
    let (plan, x_r): (RecoveryPlan, Vec<Felt>) = if symbols.len() == n {
        let target = target.unwrap_or(pos);
        if pos != target {
            return Err(CliError::ErasureNotAtTarget { found: pos, target });
        }
        let plan = built.plan(target, t, helpers)?;
        let x_r = plan.helpers.iter().map(|&c| symbols[c].expect("only the target is erased")).collect();
        (plan, x_r)
    } else {
        let target = target.ok_or(CliError::TargetRequired)?;
        let plan = built.plan(target, t, helpers)?;
        if symbols.len() != plan.barred.len() {
            return Err(CliError::WordLength { got: symbols.len(), n, barred: plan.barred.len() });
        }
        if plan.barred[pos] != target {
            return Err(CliError::ErasureNotAtTarget { found: plan.barred[pos], target });
        }
        let x_r = plan
            .barred
            .iter()
            .zip(&symbols)
            .filter(|(&c, _)| c != target)
            .map(|(_, s)| s.expect("only the target is erased"))
            .collect();
        (plan, x_r)
    };
    let verdict = plan.detect(field, &x_r)?;
    let outcome = plan.repair(field, &x_r)?;
    let mut summary = plan_summary(&plan);
    writeln!(summary, "helper symbols {}", fmt_ints(&ints(&x_r))).unwrap();
    match outcome {
        RepairOutcome::Recovered(v) => writeln!(summary, "recovered coordinate {}: {}", plan.target, v.0),
        RepairOutcome::ErrorDetected => writeln!(summary, "error detected, coordinate {} not repaired", plan.target),
    }
    .unwrap();
    let body = json!({
        "code_digest": built.digest,
        "plan": plan_record(&plan),
        "helper_symbols": ints(&x_r),
        "verdict": verdict,
        "outcome": outcome,
        "ok": true,
    });
    Ok(CommandOutput { summary, report: document("repair", body), ok: true })
}

/// Simulation config file: a cluster config plus an optional sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateFile {
    #[serde(flatten)]
    pub cluster: ClusterConfig,
    #[serde(default)]
    pub sweep: Option<Sweep>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    #[serde(default)]
    pub policies: Vec<Policy>,
    #[serde(default)]
    pub channels: Vec<Channel>,
}

pub fn parse_simulate_file(text: &str) -> Result<SimulateFile, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        CliError::ConfigParse { path, line: inner.line(), column: inner.column(), message: inner.to_string() }
    })
}

const CSV_CELLS: [&str; 5] = ["clean_correct", "naive_wrong", "detected", "missed_wrong", "missed_right"];

/// The sweep table, one row per policy and channel point.
pub fn sweep_csv(rows: &[SweepRow]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> =
        ["policy", "epsilon_or_e", "trials"].iter().map(ToString::to_string).collect();
    header.extend(CSV_CELLS.iter().map(ToString::to_string));
    for prefix in ["rate", "ci_low", "ci_high"] {
        header.extend(CSV_CELLS.iter().map(|c| format!("{prefix}_{c}")));
    }
    w.write_record(&header)?;
    for row in rows {
        let r = &row.report.rates;
        let cells = [r.clean_correct, r.naive_wrong, r.detected, r.missed_wrong, r.missed_right];
        let mut rec = vec![row.policy.clone(), row.channel.parameter().to_string(), row.report.counts.trials.to_string()];
        rec.extend(cells.iter().map(|c| c.count.to_string()));
        rec.extend(cells.iter().map(|c| c.rate.to_string()));
        rec.extend(cells.iter().map(|c| c.ci_low.to_string()));
        rec.extend(cells.iter().map(|c| c.ci_high.to_string()));
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulateOutput {
    pub output: CommandOutput,
    pub csv: String,
}

fn sim_summary(s: &mut String, label: &str, report: &SimReport) {
    let c = &report.counts;
    let r = &report.rates;
    writeln!(s, "{label}: {} trials", c.trials).unwrap();
    writeln!(
        s,
        "  naive: clean_correct {}, right_under_error {}, wrong {} (rate {:.6})",
        c.naive.clean_correct, c.naive.right_under_error, c.naive.wrong, r.naive_wrong.rate
    )
    .unwrap();
    writeln!(
        s,
        "  detecting: clean_correct {}, detected {}, missed_wrong {}, missed_right {} (miss rate {:.6})",
        c.detecting.clean_correct, c.detecting.detected, c.detecting.missed_wrong, c.detecting.missed_right, r.missed_wrong.rate
    )
    .unwrap();
}

fn channel_label(c: &Channel) -> String {
    match c {
        Channel::Bernoulli { epsilon } => format!("bernoulli epsilon={epsilon}"),
        Channel::ExactErrors { errors } => format!("exact errors={errors}"),
    }
}

/// Runs the configured simulation, or the sweep when one is given.
/// `seed` and `t` override the file.
pub fn simulate(config: &str, seed: Option<u64>, t: Option<usize>, exec: Execution) -> Result<SimulateOutput, CliError> {
    let mut file = parse_simulate_file(config)?;
    if let Some(seed) = seed {
        file.cluster.seed = seed;
    }
    if let Some(t) = t {
        file.cluster.t = t;
    }
    let base = file.cluster;
    let (policies, channels) = match &file.sweep {
        Some(sw) => {
            let policies = if sw.policies.is_empty() {
                vec![Policy { name: format!("t={}", base.t), t: base.t }]
            } else {
                sw.policies.clone()
            };
            (policies, sw.channels.clone())
        }
        None => (vec![Policy { name: format!("t={}", base.t), t: base.t }], Vec::new()),
    };
    let rows = storagesim::compare_policies(&base, &policies, &channels, exec)?;
    let ok = rows.iter().all(|r| r.report.counts.wrong_within_capacity(r.report.config.t) == 0);
    let mut summary = String::new();
    for row in &rows {
        sim_summary(&mut summary, &format!("{} / {}", row.policy, channel_label(&row.channel)), &row.report);
    }
    let body = if file.sweep.is_some() {
        json!({ "seed": base.seed, "rows": rows, "ok": ok })
    } else {
        json!({ "seed": base.seed, "report": rows[0].report, "ok": ok })
    };
    let csv = sweep_csv(&rows)?;
    Ok(SimulateOutput { output: CommandOutput { summary, report: document("simulate", body), ok }, csv })
}

/// One checked quantity of the worked example.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExampleCheck {
    pub quantity: &'static str,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

fn check(quantity: &'static str, expected: impl std::fmt::Debug, actual: impl std::fmt::Debug) -> ExampleCheck {
    let (expected, actual) = (format!("{expected:?}"), format!("{actual:?}"));
    ExampleCheck { quantity, pass: expected == actual, expected, actual }
}

/// The worked example over F13 with `p(x) = x^4` and `l = (2, 2)`.
pub fn paper_example() -> CommandOutput {
    paper_example_over(FieldDescriptor { p: 13, m: 1, modulus: None })
}

/// The worked example built over `field`, checked against the F13 values.
/// Anything but F13 must fail.
pub fn paper_example_over(field: FieldDescriptor) -> CommandOutput {
    let checks = example_checks(field).unwrap_or_else(|e| {
        vec![ExampleCheck { quantity: "construction", expected: "ok".into(), actual: e.to_string(), pass: false }]
    });
    let ok = checks.len() == 8 && checks.iter().all(|c| c.pass);
    let mut summary = String::new();
    for c in &checks {
        let mark = if c.pass { "PASS" } else { "FAIL" };
        writeln!(summary, "{mark} {}: expected {}, got {}", c.quantity, c.expected, c.actual).unwrap();
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    writeln!(summary, "{}: {passed}/{} quantities", if ok { "PASS" } else { "FAIL" }, checks.len()).unwrap();
    let body = json!({ "checks": checks, "passed": passed, "ok": ok });
    CommandOutput { summary, report: document("paper-example", body), ok }
}

fn example_checks(field: FieldDescriptor) -> Result<Vec<ExampleCheck>, CliError> {
    let desc = CodeDescriptor {
        field,
        construction: loceret_core::descriptor::Construction::Lrcrs { p_poly: vec![0, 0, 0, 0, 1], l: vec![2, 2] },
    };
    let built = desc.build()?;
    let CodeKind::LrcRs(spec) = &built.kind else { unreachable!("lrcrs descriptor") };
    let f = &built.field;
    let fibres: Vec<Vec<u32>> = spec.fibres().iter().map(|fb| ints(&fb.members)).collect();
    let mut out = vec![
        check("fibres", vec![vec![1, 5, 8, 12], vec![2, 3, 10, 11], vec![4, 6, 7, 9]], fibres),
        check("n", 12, built.n()),
        check("k", 6, built.k()),
    ];
    // Coordinate of the point x = 1.
    let target = spec.points().iter().position(|&a| a == Felt::ONE).expect("1 is a root of x^4 - 1");
    let plan = built.plan(target, 1, None)?;
    let signed = |v: &[i64]| -> Result<Vec<u32>, CliError> {
        v.iter().map(|&x| Ok(f.from_signed(x)?.0)).collect()
    };
    let z = plan.z.first().map(|row| ints(row)).unwrap_or_default();
    out.push(check("z", signed(&[8, -1, 6])?, z));
    out.push(check("w", signed(&[3, 2, -2, -3])?, ints(&plan.w)));
    let clean = signed(&[6, 9, 0])?.into_iter().map(Felt).collect::<Vec<_>>();
    out.push(check("detect(6, 9, 0)", Verdict::Clean, plan.detect(f, &clean)?));
    out.push(check("recover(6, 9, 0)", 2, plan.recover(f, &clean)?.0));
    let dirty = signed(&[7, 9, 0])?.into_iter().map(Felt).collect::<Vec<_>>();
    out.push(check("detect(7, 9, 0)", Verdict::Corrupted, plan.detect(f, &dirty)?));
    Ok(out)
}
