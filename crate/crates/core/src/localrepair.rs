//! Local repair with error detection.
//!
//! A [`RecoveryPlan`] for a target coordinate `i` holds a helper set `R`,
//! a recovery vector `w` over `R̄ = R ∪ {i}` with `w_i ≠ 0`, and detection
//! vectors `Z` over `R`, all dual codewords. Repair first checks
//! `z·x_R = 0` for every detection row, then returns
//! `x_i = −w_i^{−1} (w_R · x_R)`.
//!
//! For evaluation codes whose restriction to `R̄` is `RS(R̄, k − 1)` the
//! vectors come from `F(x) = ∏_{γ ∈ F_q ∖ R̄} (x − γ)`:
//! `w = ev_{R̄}(F)` and `Z_s = ev_R(x^s (x − α_i) F)` for `s < t`.
//! `F(α)` is computed as `−φ(α)^{−1}` with `φ(α) = ∏_{γ ∈ R̄, γ ≠ α} (α − γ)`,
//! which needs `r` multiplications instead of `q − r − 1`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use serde::Serialize;
use thiserror::Error;

use crate::codeops::{CodeError, CoordSet, LinearCode, SearchMode};
use crate::galois::{Felt, Field, FieldError};
use crate::rscodes::{LrcRsSpec, RsSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepairError {
    #[error("point {0} is not in the recovery set")]
    AlphaNotInSet(Felt),
    #[error("need {needed} coordinates, code has {available}")]
    NotEnoughCoordinates { needed: usize, available: usize },
    #[error("helpers {helpers:?} do not detect {t} errors for coordinate {target}")]
    HelpersNotEdr { target: usize, helpers: Vec<usize>, t: usize },
    #[error("expected {expected} helper symbols, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("detection capacity {t} unsupported for this construction (max {max})")]
    UnsupportedT { t: usize, max: usize },
    #[error("coordinate {0} has no recovery set detecting the requested errors")]
    NoEdrSet(usize),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Field multiplications and inversions performed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct OpTally {
    pub mul: u64,
    pub inv: u64,
}

impl OpTally {
    pub fn total(&self) -> u64 {
        self.mul + self.inv
    }

    fn mul(&mut self, f: &Field, a: Felt, b: Felt) -> Felt {
        self.mul += 1;
        f.mul(a, b)
    }

    fn inv(&mut self, f: &Field, a: Felt) -> Result<Felt, FieldError> {
        self.inv += 1;
        f.inv(a)
    }

    fn dot(&mut self, f: &Field, a: &[Felt], b: &[Felt]) -> Felt {
        a.iter()
            .zip(b)
            .fold(Felt::ZERO, |acc, (&x, &y)| f.add(acc, self.mul(f, x, y)))
    }
}

/// `F(α) = ∏_{γ ∈ F_q ∖ R̄} (α − γ)`, evaluated as `−φ(α)^{−1}`.
pub fn eval_f(field: &Field, barred: &[Felt], alpha: Felt) -> Result<Felt, RepairError> {
    eval_f_tallied(field, barred, alpha, &mut OpTally::default())
}

/// As [`eval_f`], counting operations: `|R̄| − 1` multiplications (the
/// product accumulates from one) and one inversion.
pub fn eval_f_tallied(field: &Field, barred: &[Felt], alpha: Felt, tally: &mut OpTally) -> Result<Felt, RepairError> {
    if !barred.contains(&alpha) {
        return Err(RepairError::AlphaNotInSet(alpha));
    }
    let mut phi = Felt::ONE;
    for &gamma in barred.iter().filter(|&&g| g != alpha) {
        phi = tally.mul(field, phi, field.sub(alpha, gamma));
    }
    Ok(field.neg(tally.inv(field, phi)?))
}

/// Verdict of the detection check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Clean,
    Corrupted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "outcome", content = "value")]
pub enum RepairOutcome {
    Recovered(Felt),
    ErrorDetected,
}

/// Everything needed to repair one coordinate from its helpers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecoveryPlan {
    pub target: usize,
    /// `R`, ascending. Helper symbols are passed in this order.
    pub helpers: Vec<usize>,
    /// `R̄ = R ∪ {target}`, ascending.
    pub barred: Vec<usize>,
    /// Recovery vector aligned with `barred`.
    pub w: Vec<Felt>,
    /// Detection vectors aligned with `helpers`.
    pub z: Vec<Vec<Felt>>,
    pub t: usize,
    /// Operations spent building the plan.
    pub build_cost: OpTally,
}

impl RecoveryPlan {
    pub fn r(&self) -> usize {
        self.helpers.len()
    }

    fn target_slot(&self) -> usize {
        self.barred.iter().position(|&c| c == self.target).expect("target in barred set")
    }

    /// `w` restricted to the helpers.
    pub fn w_helpers(&self) -> Vec<Felt> {
        let slot = self.target_slot();
        self.w
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != slot)
            .map(|(_, &v)| v)
            .collect()
    }

    pub fn w_target(&self) -> Felt {
        self.w[self.target_slot()]
    }

    /// `w` extended by zeros to length `n`.
    pub fn w_extended(&self, n: usize) -> Vec<Felt> {
        let mut v = vec![Felt::ZERO; n];
        for (&c, &x) in self.barred.iter().zip(&self.w) {
            v[c] = x;
        }
        v
    }

    /// Detection rows extended by zeros to length `n`.
    pub fn z_extended(&self, n: usize) -> Vec<Vec<Felt>> {
        self.z
            .iter()
            .map(|row| {
                let mut v = vec![Felt::ZERO; n];
                for (&c, &x) in self.helpers.iter().zip(row) {
                    v[c] = x;
                }
                v
            })
            .collect()
    }

    /// Picks the helper symbols out of a full-length word.
    pub fn helper_symbols(&self, word: &[Felt]) -> Vec<Felt> {
        self.helpers.iter().map(|&c| word[c]).collect()
    }

    fn check_len(&self, x_r: &[Felt]) -> Result<(), RepairError> {
        if x_r.len() != self.r() {
            return Err(RepairError::WrongLength { expected: self.r(), got: x_r.len() });
        }
        Ok(())
    }

    pub fn detect(&self, field: &Field, x_r: &[Felt]) -> Result<Verdict, RepairError> {
        self.detect_tallied(field, x_r, &mut OpTally::default())
    }

    pub fn detect_tallied(&self, field: &Field, x_r: &[Felt], tally: &mut OpTally) -> Result<Verdict, RepairError> {
        self.check_len(x_r)?;
        for row in &self.z {
            if !tally.dot(field, row, x_r).is_zero() {
                return Ok(Verdict::Corrupted);
            }
        }
        Ok(Verdict::Clean)
    }

    /// `−w_i^{−1}(w_R · x_R)`, without any error check.
    pub fn recover(&self, field: &Field, x_r: &[Felt]) -> Result<Felt, RepairError> {
        self.recover_tallied(field, x_r, &mut OpTally::default())
    }

    pub fn recover_tallied(&self, field: &Field, x_r: &[Felt], tally: &mut OpTally) -> Result<Felt, RepairError> {
        self.check_len(x_r)?;
        let s = tally.dot(field, &self.w_helpers(), x_r);
        let inv = tally.inv(field, self.w_target())?;
        Ok(field.neg(tally.mul(field, inv, s)))
    }

    pub fn repair(&self, field: &Field, x_r: &[Felt]) -> Result<RepairOutcome, RepairError> {
        self.repair_tallied(field, x_r, &mut OpTally::default())
    }

    /// Detection then recovery. Costs at most `t·r` multiplications for the
    /// checks plus `r + 1` multiplications and one inversion for recovery.
    pub fn repair_tallied(&self, field: &Field, x_r: &[Felt], tally: &mut OpTally) -> Result<RepairOutcome, RepairError> {
        match self.detect_tallied(field, x_r, tally)? {
            Verdict::Corrupted => Ok(RepairOutcome::ErrorDetected),
            Verdict::Clean => Ok(RepairOutcome::Recovered(self.recover_tallied(field, x_r, tally)?)),
        }
    }
}

/// Builds the `F(x)` plan over explicit evaluation points.
///
/// `barred` lists coordinates ascending and `alphas` their points; the
/// restricted code must be `RS(R̄, |R̄| − t − 2)` or a subcode of it.
pub fn plan_from_points(
    field: &Field,
    target: usize,
    barred: &[usize],
    alphas: &[Felt],
    t: usize,
) -> Result<RecoveryPlan, RepairError> {
    debug_assert_eq!(barred.len(), alphas.len());
    let mut tally = OpTally::default();
    let w: Vec<Felt> = alphas
        .iter()
        .map(|&a| eval_f_tallied(field, alphas, a, &mut tally))
        .collect::<Result<_, _>>()?;
    let slot = barred.iter().position(|&c| c == target).expect("target in barred set");
    let alpha_i = alphas[slot];
    let helpers: Vec<usize> = barred.iter().copied().filter(|&c| c != target).collect();
    // z_s[j] = α_j^s (α_j − α_i) F(α_j)
    let mut z = Vec::with_capacity(t);
    let mut base: Vec<Felt> = alphas
        .iter()
        .zip(&w)
        .enumerate()
        .filter(|&(j, _)| j != slot)
        .map(|(_, (&a, &fa))| tally.mul(field, field.sub(a, alpha_i), fa))
        .collect();
    let helper_alphas: Vec<Felt> = alphas
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != slot)
        .map(|(_, &a)| a)
        .collect();
    for s in 0..t {
        if s > 0 {
            base = base
                .iter()
                .zip(&helper_alphas)
                .map(|(&b, &a)| tally.mul(field, b, a))
                .collect();
        }
        z.push(base.clone());
    }
    Ok(RecoveryPlan {
        target,
        helpers,
        barred: barred.to_vec(),
        w,
        z,
        t,
        build_cost: tally,
    })
}

fn default_barred(n: usize, target: usize, size: usize) -> Vec<usize> {
    let mut barred: Vec<usize> = (0..n).filter(|&c| c != target).take(size - 1).collect();
    barred.push(target);
    barred.sort_unstable();
    barred
}

/// Plan for `RS(P, k − 1)` with `k + t` helpers. Without explicit helpers
/// the lowest-indexed coordinates other than the target are used.
pub fn plan_rs(spec: &RsSpec, target: usize, t: usize, helpers: Option<&[usize]>) -> Result<RecoveryPlan, RepairError> {
    let n = spec.n();
    if target >= n {
        return Err(CodeError::IndexOutOfRange { index: target, n }.into());
    }
    let size = spec.k() + t + 1;
    if n < size {
        return Err(RepairError::NotEnoughCoordinates { needed: size, available: n });
    }
    let barred = match helpers {
        None => default_barred(n, target, size),
        Some(h) => {
            let set = CoordSet::from_unsorted(h.to_vec(), n)?;
            let not_edr = || RepairError::HelpersNotEdr { target, helpers: set.indices().to_vec(), t };
            if set.len() != h.len() || set.len() != spec.k() + t || set.contains(target) {
                return Err(not_edr());
            }
            if !spec.code().is_edr_set(target, &set, t)? {
                return Err(not_edr());
            }
            set.with(target).indices().to_vec()
        }
    };
    let alphas: Vec<Felt> = barred.iter().map(|&c| spec.points()[c]).collect();
    plan_from_points(spec.field(), target, &barred, &alphas, t)
}

/// Plan over the full fibre containing `target` (`t = 1`).
pub fn plan_lrcrs(spec: &LrcRsSpec, target: usize) -> Result<RecoveryPlan, RepairError> {
    plan_lrcrs_with_t(spec, target, 1)
}

/// `t = 1` uses the whole fibre; `t = 0` drops its highest-indexed helper.
pub fn plan_lrcrs_with_t(spec: &LrcRsSpec, target: usize, t: usize) -> Result<RecoveryPlan, RepairError> {
    if t > 1 {
        return Err(RepairError::UnsupportedT { t, max: 1 });
    }
    let fibre = spec.fibre_coords(target)?;
    let size = spec.r() + t;
    let barred: Vec<usize> = {
        let mut b: Vec<usize> = fibre.iter().copied().filter(|&c| c != target).take(size - 1).collect();
        b.push(target);
        b.sort_unstable();
        b
    };
    let alphas: Vec<Felt> = barred.iter().map(|&c| spec.points()[c]).collect();
    plan_from_points(spec.field(), target, &barred, &alphas, t)
}

/// Plan for an arbitrary linear code: `w` is a dual codeword supported in
/// `R̄` with `w_i ≠ 0`, and `Z` is a basis of the dual words supported in
/// `R`. Without explicit helpers the minimum t-edr set is searched.
pub fn plan_generic(code: &LinearCode, target: usize, t: usize, helpers: Option<&[usize]>) -> Result<RecoveryPlan, RepairError> {
    let n = code.len();
    if target >= n {
        return Err(CodeError::IndexOutOfRange { index: target, n }.into());
    }
    let r = match helpers {
        Some(h) => {
            let set = CoordSet::from_unsorted(h.to_vec(), n)?;
            let ok = set.len() == h.len()
                && !set.contains(target)
                && code.is_recovery_set(target, &set)?
                && code.is_edr_set_by_ranks(target, &set, t)?;
            if !ok {
                return Err(RepairError::HelpersNotEdr { target, helpers: set.indices().to_vec(), t });
            }
            set
        }
        None => min_edr_set(code, target, t)?,
    };
    let barred = r.with(target);
    let dual = code.dual();
    // A zero column has the trivial repair w = e_i.
    let w = if code.rank_of(&[target]) == 0 {
        barred.indices().iter().map(|&c| if c == target { Felt::ONE } else { Felt::ZERO }).collect()
    } else {
        let shortened = dual.shorten(&barred)?;
        let slot = barred.indices().iter().position(|&c| c == target).expect("target in set");
        shortened
            .generator()
            .iter()
            .find(|row| !row[slot].is_zero())
            .cloned()
            .ok_or(RepairError::NoEdrSet(target))?
    };
    let z = if r.is_empty() {
        Vec::new()
    } else {
        dual.shorten(&r)?.generator().to_vec()
    };
    Ok(RecoveryPlan {
        target,
        helpers: r.indices().to_vec(),
        barred: barred.indices().to_vec(),
        w,
        z,
        t,
        build_cost: OpTally::default(),
    })
}

fn min_edr_set(code: &LinearCode, target: usize, t: usize) -> Result<CoordSet, RepairError> {
    let mode = if code.len() <= crate::codeops::EXHAUSTIVE_MAX_LEN {
        SearchMode::Exhaustive
    } else {
        SearchMode::Greedy
    };
    code.min_edr_set(target, t, mode)?.ok_or(RepairError::NoEdrSet(target))
}

/// Key for cached plans: code digest, target, barred set and `t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlanKey {
    pub code_digest: String,
    pub target: usize,
    pub barred: Option<Vec<usize>>,
    pub t: usize,
}

/// Precomputed plans, shared between readers.
#[derive(Debug, Default)]
pub struct PlanCache {
    plans: RwLock<HashMap<PlanKey, Arc<RecoveryPlan>>>,
}

impl PlanCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: &PlanKey) -> Option<Arc<RecoveryPlan>> {
        self.plans.read().expect("plan cache poisoned").get(key).cloned()
    }

    pub fn get_or_build<E>(
        &self,
        key: PlanKey,
        build: impl FnOnce() -> Result<RecoveryPlan, E>,
    ) -> Result<Arc<RecoveryPlan>, E> {
        if let Some(plan) = self.get(&key) {
            return Ok(plan);
        }
        let plan = Arc::new(build()?);
        let mut map = self.plans.write().expect("plan cache poisoned");
        Ok(map.entry(key).or_insert(plan).clone())
    }

    pub fn len(&self) -> usize {
        self.plans.read().expect("plan cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
