//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p loceret --test acceptance -- --nocapture`.

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use loceret::{emit_report, parse_report};
use loceret_core::codeops::{
    check_bounds, gaussian_binomial, Combinations, CoordSet, LinearCode, SearchMode, BOUND_LREDC_SINGLETON,
    BoundVerdict,
};
use loceret_core::descriptor::{CodeDescriptor, FieldDescriptor};
use loceret_core::galois::{Felt, Field, FieldSpec, Poly};
use loceret_core::localrepair::{self, eval_f_tallied, OpTally, PlanCache, PlanKey, RepairOutcome, Verdict};
use loceret_core::rscodes::{LrcRsSpec, RsSpec};
use loceret_core::storagesim::{self, Channel, ClusterConfig, TargetPolicy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed for every Monte Carlo criterion, fixed before any run.
const MC_SEED: u64 = 1;
/// Seed for the random-code corpus and seeded codewords.
const CORPUS_SEED: u64 = 2;
const MC_TRIALS: u64 = 100_000;
/// Agreement band for Monte Carlo rates, in binomial standard deviations.
const SIGMAS: f64 = 3.0;
const CORPUS_SIZE: usize = 200;
/// Upper limit on `gaussian_binomial` for the subcode-enumeration GHW route.
const SUBCODE_CAP: u64 = 5_000_000;

const EXAMPLE: &str = r#"{"field":{"p":13},"construction":"lrcrs","p_poly":[0,0,0,0,1],"l":[2,2]}"#;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn f13() -> Arc<Field> {
    Arc::new(Field::new(FieldSpec::prime(13)).unwrap())
}

fn example_spec() -> LrcRsSpec {
    let p = Poly::new(vec![Felt(0), Felt(0), Felt(0), Felt(0), Felt(1)]);
    LrcRsSpec::new(f13(), p, vec![2, 2]).unwrap()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_loceret"))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let out = loceret::paper_example();
    let elapsed = start.elapsed();
    let checks = out.report["checks"].as_array().unwrap();
    ensure(out.ok && checks.len() == 8, || format!("in-process run failed:\n{}", out.summary))?;
    within(elapsed, Duration::from_secs(1))?;
    let run = bin().arg("paper-example").output().map_err(|e| e.to_string())?;
    ensure(run.status.success(), || format!("binary exited with {}", run.status))?;
    let again = bin().arg("paper-example").output().map_err(|e| e.to_string())?;
    ensure(run.stdout == again.stdout, || "repeated runs differ".into())?;
    let control = loceret::paper_example_over(FieldDescriptor { p: 17, m: 1, modulus: None });
    ensure(!control.ok, || "negative control over F17 passed".into())?;
    Ok(format!("8/8 quantities in {elapsed:.2?}; F17 control fails"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    for (n, k) in [(8usize, 3usize), (10, 4), (13, 5)] {
        let rs = RsSpec::new(f13(), (0..n as u32).map(Felt).collect(), k).unwrap();
        let code = rs.code();
        let d = code.min_distance().unwrap();
        let r0 = code.t_locality(0, SearchMode::Exhaustive).unwrap().r_t;
        let r1 = code.t_locality(1, SearchMode::Exhaustive).unwrap().r_t;
        ensure(r0 == Some(k) && r1 == Some(k + 1), || format!("[{n},{k}]: r_0 = {r0:?}, r_1 = {r1:?}"))?;
        let dual = code.dual();
        let g = dual.ghw(2).unwrap();
        let feasible = gaussian_binomial(13, dual.dim(), 2) <= SUBCODE_CAP as u128;
        if feasible {
            let by_subcodes = dual.ghw_by_subcodes(2, SUBCODE_CAP).unwrap();
            ensure(by_subcodes == g, || format!("[{n},{k}]: subcode GHW {by_subcodes} vs support GHW {g}"))?;
        }
        let bounds = check_bounds(n, k, d, 1, k + 1, Some(g));
        let eq = bounds.get(BOUND_LREDC_SINGLETON).unwrap().verdict;
        ensure(eq == BoundVerdict::Equality && bounds.t_optimal, || format!("[{n},{k}]: bound verdict {eq:?}"))?;
        ensure(k + 1 == g - 1, || format!("[{n},{k}]: r_1 = {} but d_2(dual) - 1 = {}", k + 1, g - 1))?;
        notes.push(format!("[{n},{k}] d_2(dual)={g}{}", if feasible { " (both GHW routes)" } else { "" }));
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("{} in {:.2?}", notes.join(", "), start.elapsed()))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let code = example_spec().code();
    let d = code.min_distance().map_err(|e| e.to_string())?;
    let r1 = code.t_locality(1, SearchMode::Exhaustive).unwrap().r_t;
    ensure(d == 3 && r1 == Some(3), || format!("d = {d}, r_1 = {r1:?}"))?;
    let bounds = check_bounds(12, 6, d, 1, 3, None);
    ensure(bounds.t_optimal, || format!("{bounds:?}"))?;
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!("d=3, r_1=3, equality 15=15 in {:.2?}", start.elapsed()))
}

struct Sample {
    code: LinearCode,
    set: CoordSet,
}

fn corpus() -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    (0..CORPUS_SIZE)
        .map(|_| {
            let q = [2u32, 3, 5, 13][rng.random_range(0..4)];
            let n = rng.random_range(1..=8usize);
            let k = rng.random_range(1..=n.min(4));
            let rows = (0..k).map(|_| (0..n).map(|_| Felt(rng.random_range(0..q))).collect()).collect();
            let f = Arc::new(Field::new(FieldSpec::prime(q)).unwrap());
            let code = LinearCode::from_rows(f, n, rows).unwrap();
            let set: Vec<usize> = loop {
                let s: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
                if !s.is_empty() {
                    break s;
                }
            };
            Sample { code, set: CoordSet::new(set, n).unwrap() }
        })
        .collect()
}

fn criterion_4(corpus: &[Sample]) -> Outcome {
    let start = Instant::now();
    let matches = corpus
        .iter()
        .filter(|s| s.code.puncture(&s.set).unwrap().dual() == s.code.dual().shorten(&s.set).unwrap())
        .count();
    ensure(matches == corpus.len(), || format!("{matches}/{} match", corpus.len()))?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("{matches}/{} in {:.2?}", corpus.len(), start.elapsed()))
}

/// Minimum nonzero weight over all `q^k` messages, `None` for the zero code.
fn brute_distance(code: &LinearCode) -> Option<usize> {
    let q = code.field().order();
    let mut msg = vec![0u32; code.dim()];
    let mut best = None;
    loop {
        let m: Vec<Felt> = msg.iter().map(|&v| Felt(v)).collect();
        let w = code.encode(&m).iter().filter(|x| !x.is_zero()).count();
        if w > 0 && best.is_none_or(|b| w < b) {
            best = Some(w);
        }
        let Some(pos) = msg.iter().position(|&v| v + 1 < q) else { break };
        msg[pos] += 1;
        msg[..pos].fill(0);
    }
    best
}

fn criterion_5(corpus: &[Sample]) -> Outcome {
    let mut checked = 0usize;
    let mut edr_checked = 0usize;
    for (idx, s) in corpus.iter().enumerate() {
        let (n, k) = (s.code.len(), s.code.dim());
        let d = brute_distance(&s.code).unwrap_or(n + 1);
        for bound in 1..=n {
            let ranks = ((n - bound + 1)..=n).all(|size| Combinations::new(n, size).all(|c| s.code.rank_of(&c) == k));
            ensure((d >= bound) == ranks, || format!("code {idx}: d = {d}, bound {bound}, ranks {ranks}"))?;
            checked += 1;
        }
        let i = s.set.indices()[0];
        let r = s.set.without(i);
        let dist = brute_distance(&s.code.puncture(&r.with(i)).unwrap());
        for t in 0..3 {
            let literal = dist.is_none_or(|d| d > t + 1);
            let by_ranks = s.code.is_edr_set_by_ranks(i, &r, t).unwrap();
            ensure(literal == by_ranks, || format!("code {idx}: t = {t}, distance test {literal}, rank test {by_ranks}"))?;
            edr_checked += 1;
        }
    }
    Ok(format!("{checked} distance thresholds and {edr_checked} edr tests, 100% match"))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let spec = example_spec();
    let f = spec.field().clone();
    let plans: Vec<_> = (0..12).map(|i| localrepair::plan_lrcrs(&spec, i).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    let (mut triples, mut detected, mut naive_wrong) = (0u64, 0u64, 0u64);
    for _ in 0..50 {
        let msg: Vec<Felt> = (0..6).map(|_| Felt(rng.random_range(0..13))).collect();
        let x = spec.encode(&msg).unwrap();
        for plan in &plans {
            let clean = plan.helper_symbols(&x);
            for slot in 0..plan.r() {
                for e in 1..13 {
                    let mut x_r = clean.clone();
                    x_r[slot] = f.add(x_r[slot], Felt(e));
                    triples += 1;
                    detected += u64::from(plan.detect(&f, &x_r).unwrap() == Verdict::Corrupted);
                    naive_wrong += u64::from(plan.recover(&f, &x_r).unwrap() != x[plan.target]);
                }
            }
        }
    }
    ensure(detected == triples && naive_wrong == triples, || {
        format!("detected {detected}/{triples}, naive wrong {naive_wrong}/{triples}")
    })?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("{triples} triples on 50 codewords, detection 100%, naive wrong 100%"))
}

fn example_config(t: usize, channel: Channel) -> ClusterConfig {
    ClusterConfig {
        code: CodeDescriptor::from_json(EXAMPLE).unwrap(),
        t,
        channel,
        trials: MC_TRIALS,
        seed: MC_SEED,
        target_policy: TargetPolicy::RoundRobin,
    }
}

fn sigma(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let spec = example_spec();
    let f = spec.field().clone();
    let x = spec.encode(&[Felt(0); 6]).unwrap();
    let (mut missed, mut total) = (0u64, 0u64);
    for i in 0..12 {
        let plan = localrepair::plan_lrcrs(&spec, i).unwrap();
        let clean = plan.helper_symbols(&x);
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            for ea in 1..13 {
                for eb in 1..13 {
                    let mut x_r = clean.clone();
                    x_r[a] = f.add(x_r[a], Felt(ea));
                    x_r[b] = f.add(x_r[b], Felt(eb));
                    total += 1;
                    if let RepairOutcome::Recovered(v) = plan.repair(&f, &x_r).unwrap() {
                        missed += u64::from(v != x[i]);
                    }
                }
            }
        }
    }
    ensure(missed * 12 == total, || format!("exhaustive miss rate {missed}/{total}"))?;
    let report = storagesim::run_sim(&example_config(1, Channel::ExactErrors { errors: 2 })).map_err(|e| e.to_string())?;
    let p = 1.0 / 12.0;
    let rate = report.rates.missed_wrong.rate;
    let z = (rate - p) / sigma(p, MC_TRIALS);
    ensure(z.abs() <= SIGMAS, || format!("Monte Carlo miss rate {rate:.6} is {z:.2} sigma from 1/12"))?;
    within(start.elapsed(), Duration::from_secs(120))?;
    Ok(format!("exhaustive {missed}/{total} = 1/12; Monte Carlo {rate:.6} ({z:+.2} sigma)"))
}

fn criterion_8() -> Outcome {
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    for eps in [0.01, 0.05, 0.1] {
        let report =
            storagesim::run_sim(&example_config(1, Channel::Bernoulli { epsilon: eps })).map_err(|e| e.to_string())?;
        let expected = 1.0 - (1.0 - eps).powi(3);
        let rate = report.rates.naive_wrong.rate;
        let z = (rate - expected) / sigma(expected, MC_TRIALS);
        let note = format!("eps={eps}: {rate:.5} vs {expected:.5} ({z:+.2} sigma)");
        if z.abs() > SIGMAS {
            failures.push(note.clone());
        }
        notes.push(note);
    }
    ensure(failures.is_empty(), || failures.join("; "))?;
    Ok(notes.join(", "))
}

fn criterion_9() -> Outcome {
    let f = f13();
    for r in 1..=12usize {
        let barred: Vec<Felt> = (0..=r as u32).map(Felt).collect();
        for &alpha in &barred {
            let mut tally = OpTally::default();
            eval_f_tallied(&f, &barred, alpha, &mut tally).unwrap();
            ensure(tally.mul == r as u64, || format!("eval_F with r = {r}: {} multiplications", tally.mul))?;
        }
    }
    let cache = PlanCache::new();
    let mut worst = String::new();
    let mut cases = Vec::new();
    let example = CodeDescriptor::from_json(EXAMPLE).unwrap().build().unwrap();
    for t in 0..=1 {
        cases.push((example.clone(), t));
    }
    for (n, k, t) in [(8, 3, 1), (10, 4, 2), (13, 5, 3)] {
        let json = format!(r#"{{"field":{{"p":13}},"construction":"rs","points":{:?},"k":{k}}}"#, (0..n).collect::<Vec<_>>());
        cases.push((CodeDescriptor::from_json(&json).unwrap().build().unwrap(), t));
    }
    for (built, t) in &cases {
        let x = built.encode(&vec![Felt(1); built.k()]).unwrap();
        for target in 0..built.n() {
            let key = PlanKey { code_digest: built.digest.clone(), target, barred: None, t: *t };
            let plan = cache.get_or_build(key, || built.plan(target, *t, None)).unwrap();
            let x_r = plan.helper_symbols(&x);
            let mut tally = OpTally::default();
            let out = plan.repair_tallied(&built.field, &x_r, &mut tally).unwrap();
            ensure(out == RepairOutcome::Recovered(x[target]), || format!("wrong repair at {target}"))?;
            let budget = (*t as u64 + 1) * plan.r() as u64 + *t as u64 + 2;
            ensure(tally.total() <= budget, || format!("t = {t}, r = {}: {tally:?} over budget {budget}", plan.r()))?;
            worst = format!("{} ops, budget {budget} (r={}, t={t})", tally.total(), plan.r());
        }
    }
    Ok(format!("eval_F = r multiplications for r in 1..=12; repair within budget, last case {worst}"))
}

fn criterion_10() -> Outcome {
    let dir = std::env::temp_dir().join(format!("loceret-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let config = dir.join("sim.json");
    std::fs::write(
        &config,
        format!(
            r#"{{"code":{EXAMPLE},"t":1,"channel":{{"kind":"bernoulli","epsilon":0.1}},"trials":50000,"seed":{MC_SEED},
"target_policy":"uniform_random",
"sweep":{{"policies":[{{"name":"t0","t":0}},{{"name":"t1","t":1}}],"channels":[{{"kind":"bernoulli","epsilon":0.05}},{{"kind":"exact_errors","errors":2}}]}}}}"#
        ),
    )
    .map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for (tag, serial) in [("a", false), ("b", false), ("c", true)] {
        let out = dir.join(format!("{tag}.json"));
        let csv = dir.join(format!("{tag}.csv"));
        let mut cmd = bin();
        cmd.arg("simulate").arg(&config).arg("--out").arg(&out).arg("--csv").arg(&csv);
        if serial {
            cmd.arg("--serial");
        }
        let status = cmd.output().map_err(|e| e.to_string())?.status;
        ensure(status.success(), || format!("simulate exited with {status}"))?;
        outputs.push((std::fs::read(&out).unwrap(), std::fs::read(&csv).unwrap()));
    }
    ensure(outputs.windows(2).all(|w| w[0] == w[1]), || "reports differ between runs".into())?;
    let text = String::from_utf8(outputs[0].0.clone()).unwrap();
    ensure(emit_report(&parse_report(&text).unwrap()) == text, || "report does not round-trip".into())?;
    std::fs::remove_dir_all(&dir).ok();
    Ok(format!("3 runs (2 parallel, 1 serial) byte-identical, {} byte report", text.len()))
}

#[test]
fn acceptance() {
    let corpus = corpus();
    let results: Vec<(&str, Outcome)> = vec![
        ("1 worked example reproduction", criterion_1()),
        ("2 RS localities", criterion_2()),
        ("3 LRC-RS optimality", criterion_3()),
        ("4 dual of puncture equals shortened dual", criterion_4(&corpus)),
        ("5 distance rank characterization", criterion_5(&corpus)),
        ("6 single-error exhaustive properties", criterion_6()),
        ("7 two-error miss rate", criterion_7()),
        ("8 channel sweep sanity", criterion_8()),
        ("9 multiplication counts", criterion_9()),
        ("10 determinism", criterion_10()),
    ];
    let mut failed = Vec::new();
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                println!("FAIL criterion {name}: {detail}");
                failed.push(*name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
