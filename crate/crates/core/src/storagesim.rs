//! Fault-injection simulation of a storage cluster holding one code symbol
//! per node.
//!
//! Each trial draws a message, encodes it, erases one target node and
//! corrupts some of the target's helpers with additive errors uniform over
//! the nonzero field elements. Two arms repair the target from the same
//! corrupted helpers: the naive arm applies the recovery vector directly,
//! the detecting arm runs the detection checks first.
//!
//! Every random draw comes from ChaCha8 keyed by `(seed, lane)` on stream
//! `trial`, so a trial's draws do not depend on scheduling. Lane 0 holds the
//! message and target, lane `1 + j` the fault on node `j`, and a separate
//! lane the error positions of the exact-count channel.

use std::sync::Arc;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::descriptor::{BuiltCode, CodeDescriptor, DescriptorError};
use crate::galois::{Felt, Field};
use crate::localrepair::{PlanCache, PlanKey, RecoveryPlan, RepairError, RepairOutcome};
use crate::rscodes::ConstructionError;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Descriptor(#[from] DescriptorError),
    #[error("no plan for coordinate {coord}: {source}")]
    PlanUnavailable { coord: usize, source: RepairError },
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Repair(#[from] RepairError),
    #[error("byte ingestion needs GF(2^m) with m in {{4, 8, 16}}, got GF({p}^{m})")]
    UnsupportedField { p: u32, m: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Channel {
    /// Each helper is corrupted independently with probability `epsilon`.
    Bernoulli { epsilon: f64 },
    /// Exactly `errors` distinct helpers are corrupted.
    ExactErrors { errors: usize },
}

impl Channel {
    /// The swept parameter, for tables.
    pub fn parameter(&self) -> f64 {
        match *self {
            Channel::Bernoulli { epsilon } => epsilon,
            Channel::ExactErrors { errors } => errors as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetPolicy {
    #[default]
    RoundRobin,
    UniformRandom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterConfig {
    pub code: CodeDescriptor,
    pub t: usize,
    pub channel: Channel,
    pub trials: u64,
    pub seed: u64,
    #[serde(default)]
    pub target_policy: TargetPolicy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Serial,
    Parallel,
}

/// Naive arm: recovery without detection.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct NaiveCounts {
    pub clean_correct: u64,
    pub right_under_error: u64,
    pub wrong: u64,
}

/// Detecting arm.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct DetectCounts {
    pub clean_correct: u64,
    pub detected: u64,
    pub missed_wrong: u64,
    pub missed_right: u64,
}

/// Outcomes of trials with a given number of corrupted helpers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ErrorBucket {
    pub errors: usize,
    pub trials: u64,
    pub naive_wrong: u64,
    pub detected: u64,
    pub missed_wrong: u64,
    pub missed_right: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub trials: u64,
    pub naive: NaiveCounts,
    pub detecting: DetectCounts,
    pub by_errors: Vec<ErrorBucket>,
}

impl Counts {
    fn merge(mut self, other: Counts) -> Counts {
        self.trials += other.trials;
        self.naive.clean_correct += other.naive.clean_correct;
        self.naive.right_under_error += other.naive.right_under_error;
        self.naive.wrong += other.naive.wrong;
        self.detecting.clean_correct += other.detecting.clean_correct;
        self.detecting.detected += other.detecting.detected;
        self.detecting.missed_wrong += other.detecting.missed_wrong;
        self.detecting.missed_right += other.detecting.missed_right;
        for b in other.by_errors {
            let slot = self.bucket(b.errors);
            slot.trials += b.trials;
            slot.naive_wrong += b.naive_wrong;
            slot.detected += b.detected;
            slot.missed_wrong += b.missed_wrong;
            slot.missed_right += b.missed_right;
        }
        self
    }

    fn bucket(&mut self, errors: usize) -> &mut ErrorBucket {
        while self.by_errors.len() <= errors {
            let e = self.by_errors.len();
            self.by_errors.push(ErrorBucket { errors: e, ..Default::default() });
        }
        &mut self.by_errors[errors]
    }

    fn record(&mut self, trace: &TrialTrace) {
        let (errors, naive_ok) = (trace.errors, trace.naive_ok);
        let outcome = match (trace.detected, trace.repaired_ok) {
            (true, _) => ArmOutcome::Detected,
            (false, true) => ArmOutcome::Right,
            (false, false) => ArmOutcome::Wrong,
        };
        self.trials += 1;
        let clean = errors == 0;
        match (naive_ok, clean) {
            (true, true) => self.naive.clean_correct += 1,
            (true, false) => self.naive.right_under_error += 1,
            (false, _) => self.naive.wrong += 1,
        }
        match outcome {
            ArmOutcome::Detected => self.detecting.detected += 1,
            ArmOutcome::Right if clean => self.detecting.clean_correct += 1,
            ArmOutcome::Right => self.detecting.missed_right += 1,
            ArmOutcome::Wrong => self.detecting.missed_wrong += 1,
        }
        let b = self.bucket(errors);
        b.trials += 1;
        b.naive_wrong += u64::from(!naive_ok);
        match outcome {
            ArmOutcome::Detected => b.detected += 1,
            ArmOutcome::Wrong => b.missed_wrong += 1,
            ArmOutcome::Right if !clean => b.missed_right += 1,
            ArmOutcome::Right => {}
        }
    }

    /// Detecting-arm miscorrections on trials with at most `t` errors.
    pub fn wrong_within_capacity(&self, t: usize) -> u64 {
        self.by_errors.iter().filter(|b| b.errors <= t).map(|b| b.missed_wrong).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ArmOutcome {
    Right,
    Wrong,
    Detected,
}

/// A proportion with its Wilson 95% score interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rate {
    pub count: u64,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Rate {
    pub fn new(count: u64, trials: u64) -> Rate {
        let (low, high) = wilson_interval(count, trials);
        Rate {
            count,
            rate: if trials == 0 { 0.0 } else { count as f64 / trials as f64 },
            ci_low: low,
            ci_high: high,
        }
    }
}

const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(count: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = count as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let low = if count == 0 { 0.0 } else { (center - half).max(0.0) };
    let high = if count == trials { 1.0 } else { (center + half).min(1.0) };
    (low, high)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rates {
    pub clean_correct: Rate,
    pub naive_wrong: Rate,
    pub naive_right_under_error: Rate,
    pub detected: Rate,
    pub missed_wrong: Rate,
    pub missed_right: Rate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub config: ClusterConfig,
    pub code_digest: String,
    pub n: usize,
    pub k: usize,
    pub helpers_per_target: Vec<usize>,
    pub counts: Counts,
    pub rates: Rates,
}

impl SimReport {
    fn new(config: &ClusterConfig, ctx: &SimContext, counts: Counts) -> SimReport {
        let n = counts.trials;
        let rates = Rates {
            clean_correct: Rate::new(counts.detecting.clean_correct, n),
            naive_wrong: Rate::new(counts.naive.wrong, n),
            naive_right_under_error: Rate::new(counts.naive.right_under_error, n),
            detected: Rate::new(counts.detecting.detected, n),
            missed_wrong: Rate::new(counts.detecting.missed_wrong, n),
            missed_right: Rate::new(counts.detecting.missed_right, n),
        };
        SimReport {
            config: config.clone(),
            code_digest: ctx.code.digest.clone(),
            n: ctx.code.n(),
            k: ctx.code.k(),
            helpers_per_target: ctx.plans.iter().map(|p| p.r()).collect(),
            counts,
            rates,
        }
    }
}

const LANE_MAIN: u64 = 0;
const LANE_POSITIONS: u64 = u64::MAX;

fn lane_rng(seed: u64, lane: u64, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&lane.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}

fn node_lane(node: usize) -> u64 {
    1 + node as u64
}

struct SimContext {
    code: BuiltCode,
    plans: Vec<Arc<RecoveryPlan>>,
}

impl SimContext {
    fn build(config: &ClusterConfig, cache: &PlanCache) -> Result<SimContext, SimError> {
        validate(config)?;
        let code = config.code.build()?;
        let plans = (0..code.n())
            .map(|coord| {
                let key = PlanKey { code_digest: code.digest.clone(), target: coord, barred: None, t: config.t };
                cache
                    .get_or_build(key, || code.plan(coord, config.t, None))
                    .map_err(|source| SimError::PlanUnavailable { coord, source })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if let Channel::ExactErrors { errors } = config.channel {
            if let Some(p) = plans.iter().find(|p| p.r() < errors) {
                return Err(SimError::InvalidConfig(format!(
                    "{errors} errors requested but coordinate {} has only {} helpers",
                    p.target,
                    p.r()
                )));
            }
        }
        Ok(SimContext { code, plans })
    }
}

fn validate(config: &ClusterConfig) -> Result<(), SimError> {
    if config.trials == 0 {
        return Err(SimError::InvalidConfig("trials must be at least 1".into()));
    }
    if let Channel::Bernoulli { epsilon } = config.channel {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(SimError::InvalidConfig(format!("epsilon {epsilon} outside [0, 1]")));
        }
    }
    Ok(())
}

/// Error values added to each helper, aligned with `plan.helpers`.
fn draw_faults(field: &Field, plan: &RecoveryPlan, channel: Channel, seed: u64, trial: u64) -> Vec<Felt> {
    let q = field.order();
    let node_value = |rng: &mut ChaCha8Rng| Felt(rng.random_range(1..q));
    match channel {
        Channel::Bernoulli { epsilon } => plan
            .helpers
            .iter()
            .map(|&node| {
                let mut rng = lane_rng(seed, node_lane(node), trial);
                let hit = rng.random::<f64>() < epsilon;
                let value = node_value(&mut rng);
                if hit { value } else { Felt::ZERO }
            })
            .collect(),
        Channel::ExactErrors { errors } => {
            let mut pos_rng = lane_rng(seed, LANE_POSITIONS, trial);
            let chosen = index::sample(&mut pos_rng, plan.r(), errors);
            let mut out = vec![Felt::ZERO; plan.r()];
            for slot in chosen.iter() {
                let node = plan.helpers[slot];
                let mut rng = lane_rng(seed, node_lane(node), trial);
                let _coin: f64 = rng.random();
                out[slot] = node_value(&mut rng);
            }
            out
        }
    }
}

fn run_trial(ctx: &SimContext, config: &ClusterConfig, trial: u64) -> Result<TrialTrace, SimError> {
    let field = &ctx.code.field;
    let q = field.order();
    let n = ctx.code.n();
    let mut main = lane_rng(config.seed, LANE_MAIN, trial);
    let message: Vec<Felt> = (0..ctx.code.k()).map(|_| Felt(main.random_range(0..q))).collect();
    let target = match config.target_policy {
        TargetPolicy::RoundRobin => (trial % n as u64) as usize,
        TargetPolicy::UniformRandom => main.random_range(0..n),
    };
    let codeword = ctx.code.encode(&message)?;
    let plan = &ctx.plans[target];
    let faults = draw_faults(field, plan, config.channel, config.seed, trial);
    let errors = faults.iter().filter(|e| !e.is_zero()).count();
    let x_r: Vec<Felt> = plan
        .helper_symbols(&codeword)
        .iter()
        .zip(&faults)
        .map(|(&x, &e)| field.add(x, e))
        .collect();
    let truth = codeword[target];
    let naive_ok = plan.recover(field, &x_r)? == truth;
    let (detected, repaired_ok) = match plan.repair(field, &x_r)? {
        RepairOutcome::ErrorDetected => (true, false),
        RepairOutcome::Recovered(v) => (false, v == truth),
    };
    Ok(TrialTrace { target, errors, naive_ok, detected, repaired_ok })
}

const CHUNK: u64 = 4096;

fn run_counts(ctx: &SimContext, config: &ClusterConfig, exec: Execution) -> Result<Counts, SimError> {
    let chunk = |start: u64| -> Result<Counts, SimError> {
        let mut counts = Counts::default();
        for trial in start..(start + CHUNK).min(config.trials) {
            counts.record(&run_trial(ctx, config, trial)?);
        }
        Ok(counts)
    };
    let starts: Vec<u64> = (0..config.trials).step_by(CHUNK as usize).collect();
    let parts: Vec<Counts> = match exec {
        Execution::Serial => starts.into_iter().map(chunk).collect::<Result<_, _>>()?,
        Execution::Parallel => starts.into_par_iter().map(chunk).collect::<Result<_, _>>()?,
    };
    Ok(parts.into_iter().fold(Counts::default(), Counts::merge))
}

pub fn run_sim(config: &ClusterConfig) -> Result<SimReport, SimError> {
    run_sim_with(config, Execution::Parallel)
}

pub fn run_sim_with(config: &ClusterConfig, exec: Execution) -> Result<SimReport, SimError> {
    let cache = PlanCache::new();
    let ctx = SimContext::build(config, &cache)?;
    let counts = run_counts(&ctx, config, exec)?;
    Ok(SimReport::new(config, &ctx, counts))
}

/// A detection capacity to compare under the same fault stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Policy {
    pub name: String,
    pub t: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub policy: String,
    pub channel: Channel,
    pub report: SimReport,
}

/// One report per `(policy, channel)` pair. All runs share the base seed, so
/// every policy sees the same messages, targets and node faults.
pub fn compare_policies(
    base: &ClusterConfig,
    policies: &[Policy],
    channels: &[Channel],
    exec: Execution,
) -> Result<Vec<SweepRow>, SimError> {
    if policies.is_empty() {
        return Err(SimError::InvalidConfig("at least one policy is required".into()));
    }
    let channels: Vec<Channel> = if channels.is_empty() { vec![base.channel] } else { channels.to_vec() };
    let cache = PlanCache::new();
    let mut rows = Vec::new();
    for policy in policies {
        for &channel in &channels {
            let config = ClusterConfig { t: policy.t, channel, ..base.clone() };
            let ctx = SimContext::build(&config, &cache)?;
            let counts = run_counts(&ctx, &config, exec)?;
            rows.push(SweepRow { policy: policy.name.clone(), channel, report: SimReport::new(&config, &ctx, counts) });
        }
    }
    Ok(rows)
}

/// Per-trial detail for paired comparisons: target and whether each arm
/// returned the true symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialTrace {
    pub target: usize,
    pub errors: usize,
    pub naive_ok: bool,
    pub detected: bool,
    pub repaired_ok: bool,
}

/// Runs trials serially and returns one trace per trial.
pub fn trace_trials(config: &ClusterConfig) -> Result<Vec<TrialTrace>, SimError> {
    let cache = PlanCache::new();
    let ctx = SimContext::build(config, &cache)?;
    (0..config.trials).map(|trial| run_trial(&ctx, config, trial)).collect()
}

/// A block of `k` field symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message(pub Vec<Felt>);

/// Messages cut from a byte string, with the original length kept for
/// [`emit`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ingested {
    pub messages: Vec<Message>,
    pub byte_len: usize,
}

fn symbol_bits(field: &Field) -> Result<u32, SimError> {
    match (field.characteristic(), field.degree()) {
        (2, m @ (4 | 8 | 16)) => Ok(m),
        (p, m) => Err(SimError::UnsupportedField { p, m }),
    }
}

/// Cuts bytes into `m`-bit symbols (most significant bits first) and groups
/// them into messages of `k` symbols. An input that does not fill whole
/// messages is padded with `0x80` then zero bits.
pub fn ingest(bytes: &[u8], field: &Field, k: usize) -> Result<Ingested, SimError> {
    let m = symbol_bits(field)? as usize;
    if k == 0 {
        return Err(SimError::InvalidConfig("k must be at least 1".into()));
    }
    let block_bits = m * k;
    let mut data = bytes.to_vec();
    if !(data.len() * 8).is_multiple_of(block_bits) {
        data.push(0x80);
        while !(data.len() * 8).is_multiple_of(block_bits) && (data.len() * 8) % block_bits + 8 <= block_bits {
            data.push(0);
        }
    }
    let mut symbols = Vec::with_capacity(data.len() * 8 / m + k);
    match m {
        4 => {
            for &b in &data {
                symbols.push(Felt((b >> 4) as u32));
                symbols.push(Felt((b & 0x0f) as u32));
            }
        }
        8 => symbols.extend(data.iter().map(|&b| Felt(b as u32))),
        _ => {
            for pair in data.chunks(2) {
                let hi = pair[0] as u32;
                let lo = pair.get(1).copied().unwrap_or(0) as u32;
                symbols.push(Felt(hi << 8 | lo));
            }
        }
    }
    symbols.resize(symbols.len().div_ceil(k) * k, Felt::ZERO);
    let messages = symbols.chunks(k).map(|c| Message(c.to_vec())).collect();
    Ok(Ingested { messages, byte_len: bytes.len() })
}

/// Inverse of [`ingest`].
pub fn emit(ingested: &Ingested, field: &Field) -> Result<Vec<u8>, SimError> {
    let m = symbol_bits(field)?;
    let symbols = ingested.messages.iter().flat_map(|msg| msg.0.iter().copied());
    let mut out = Vec::new();
    match m {
        4 => {
            let nibbles: Vec<u8> = symbols.map(|s| s.0 as u8).collect();
            for pair in nibbles.chunks(2) {
                out.push(pair[0] << 4 | pair.get(1).copied().unwrap_or(0));
            }
        }
        8 => out.extend(symbols.map(|s| s.0 as u8)),
        _ => {
            for s in symbols {
                out.push((s.0 >> 8) as u8);
                out.push(s.0 as u8);
            }
        }
    }
    out.truncate(ingested.byte_len);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::FieldSpec;

    const EXAMPLE: &str = r#"{"field":{"p":13},"construction":"lrcrs","p_poly":[0,0,0,0,1],"l":[2,2]}"#;

    fn example_config(channel: Channel, trials: u64) -> ClusterConfig {
        ClusterConfig {
            code: CodeDescriptor::from_json(EXAMPLE).unwrap(),
            t: 1,
            channel,
            trials,
            seed: 7,
            target_policy: TargetPolicy::RoundRobin,
        }
    }

    fn gf(m: u32) -> Field {
        Field::new(FieldSpec::extension(2, m, None)).unwrap()
    }

    #[test]
    fn noiseless_channel_is_always_correct() {
        let report = run_sim(&example_config(Channel::Bernoulli { epsilon: 0.0 }, 500)).unwrap();
        assert_eq!(report.counts.naive.clean_correct, 500);
        assert_eq!(report.counts.detecting.clean_correct, 500);
        assert_eq!(report.rates.clean_correct.rate, 1.0);
    }

    #[test]
    fn single_errors_are_all_detected() {
        let report = run_sim(&example_config(Channel::ExactErrors { errors: 1 }, 2000)).unwrap();
        assert_eq!(report.counts.detecting.detected, 2000);
        assert_eq!(report.counts.naive.wrong, 2000);
    }

    #[test]
    fn serial_equals_parallel() {
        let cfg = example_config(Channel::Bernoulli { epsilon: 0.2 }, 10_000);
        let a = run_sim_with(&cfg, Execution::Serial).unwrap();
        let b = run_sim_with(&cfg, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts.wrong_within_capacity(1), 0);
    }

    #[test]
    fn config_validation() {
        let mut cfg = example_config(Channel::Bernoulli { epsilon: 1.5 }, 10);
        assert!(matches!(run_sim(&cfg), Err(SimError::InvalidConfig(_))));
        cfg.channel = Channel::ExactErrors { errors: 4 };
        assert!(matches!(run_sim(&cfg), Err(SimError::InvalidConfig(_))));
        cfg.channel = Channel::ExactErrors { errors: 1 };
        cfg.trials = 0;
        assert!(matches!(run_sim(&cfg), Err(SimError::InvalidConfig(_))));
        let mut cfg = example_config(Channel::ExactErrors { errors: 1 }, 10);
        cfg.t = 2;
        cfg.code = CodeDescriptor::from_json(
            r#"{"field":{"p":3},"construction":"generator","rows":[[1,1,0],[0,0,1]]}"#,
        )
        .unwrap();
        assert!(matches!(run_sim(&cfg), Err(SimError::PlanUnavailable { .. })));
    }

    #[test]
    fn wilson_interval_brackets_rate() {
        let (lo, hi) = wilson_interval(50, 100);
        assert!(lo < 0.5 && hi > 0.5);
        assert!((hi - lo - 0.1923).abs() < 1e-3);
        let (lo, hi) = wilson_interval(0, 100);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.05);
    }

    #[test]
    fn ingest_examples() {
        let f = gf(8);
        assert!(ingest(&[], &f, 4).unwrap().messages.is_empty());
        let bytes: Vec<u8> = (0..16).collect();
        let msgs = ingest(&bytes, &f, 4).unwrap();
        assert_eq!(msgs.messages.len(), 4);
        assert_eq!(msgs.messages[1].0, vec![Felt(4), Felt(5), Felt(6), Felt(7)]);
        // one byte short of a block: 0x80 fills it
        let msgs = ingest(&bytes[..15], &f, 4).unwrap();
        assert_eq!(msgs.messages[3].0, vec![Felt(12), Felt(13), Felt(14), Felt(0x80)]);
        let f4 = gf(4);
        let msgs = ingest(&[0xAB], &f4, 2).unwrap();
        assert_eq!(msgs.messages[0].0, vec![Felt(0xA), Felt(0xB)]);
        let f16 = gf(16);
        let msgs = ingest(&[0x12, 0x34], &f16, 1).unwrap();
        assert_eq!(msgs.messages[0].0, vec![Felt(0x1234)]);
    }

    #[test]
    fn ingest_rejects_odd_characteristic() {
        let f = Field::new(FieldSpec::prime(13)).unwrap();
        assert!(matches!(ingest(&[1], &f, 2), Err(SimError::UnsupportedField { p: 13, m: 1 })));
        assert!(matches!(ingest(&[1], &gf(5), 2), Err(SimError::UnsupportedField { .. })));
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(1000))]
        #[test]
        fn ingest_emit_roundtrip(bytes in proptest::collection::vec(proptest::num::u8::ANY, 0..200), k in 1usize..9, m in proptest::sample::select(vec![4u32, 8, 16])) {
            let f = gf(m);
            let ing = ingest(&bytes, &f, k).unwrap();
            proptest::prop_assert!(ing.messages.iter().all(|msg| msg.0.len() == k));
            proptest::prop_assert_eq!(emit(&ing, &f).unwrap(), bytes);
        }
    }
}
