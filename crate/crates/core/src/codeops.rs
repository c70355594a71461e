//! Linear codes held as canonical generator matrices, and the operations on
//! them: puncturing, shortening, duals, exhaustive distance and generalized
//! Hamming weights, recovery-set and t-edr-set tests, locality search, and
//! the locality bounds.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::galois::{Felt, Field};

/// Default budget for exhaustive enumeration (codewords or subcodes).
pub const DEFAULT_ENUM_CAP: u64 = 1 << 26;

/// Largest length for which subset searches run exhaustively.
pub const EXHAUSTIVE_MAX_LEN: usize = 20;

/// Largest length for which the support-based weight search runs.
pub const SUPPORT_SEARCH_MAX_LEN: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("row {row} has length {len}, expected {expected}")]
    InconsistentLength { row: usize, len: usize, expected: usize },
    #[error("coordinate set is empty")]
    EmptySet,
    #[error("coordinate {index} out of range for length {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("coordinate set is not strictly increasing")]
    UnsortedSet,
    #[error("target coordinate {0} is inside the helper set")]
    TargetInSet(usize),
    #[error("the zero code has no minimum distance")]
    ZeroCode,
    #[error("enumeration of {count} items exceeds the cap of {cap}")]
    TooLargeToEnumerate { count: u128, cap: u64 },
    #[error("subcode dimension {s} outside 1..={k}")]
    BadRank { s: usize, k: usize },
}

/// A sorted set of 0-based coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct CoordSet(Vec<usize>);

impl CoordSet {
    /// Validates a strictly increasing index list against length `n`.
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self, CodeError> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CodeError::UnsortedSet);
        }
        if let Some(&index) = indices.iter().find(|&&i| i >= n) {
            return Err(CodeError::IndexOutOfRange { index, n });
        }
        Ok(CoordSet(indices))
    }

    /// Sorts and deduplicates before validating.
    pub fn from_unsorted(mut indices: Vec<usize>, n: usize) -> Result<Self, CodeError> {
        indices.sort_unstable();
        indices.dedup();
        Self::new(indices, n)
    }

    pub fn full(n: usize) -> Self {
        CoordSet((0..n).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// `self ∪ {i}`.
    pub fn with(&self, i: usize) -> CoordSet {
        let mut v = self.0.clone();
        if let Err(pos) = v.binary_search(&i) {
            v.insert(pos, i);
        }
        CoordSet(v)
    }

    /// `self ∖ {i}`.
    pub fn without(&self, i: usize) -> CoordSet {
        CoordSet(self.0.iter().copied().filter(|&j| j != i).collect())
    }
}

/// Row-reduces `rows` in place (reduced row echelon form, zero rows dropped)
/// and returns the pivot column of each remaining row.
pub fn rref(field: &Field, rows: &mut Vec<Vec<Felt>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(sel) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = field.inv(rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c];
            for (x, &p) in row.iter_mut().zip(&pivot_row) {
                *x = field.sub(*x, field.mul(factor, p));
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Rank of a matrix given by rows.
pub fn rank(field: &Field, rows: &[Vec<Felt>]) -> usize {
    let mut m = rows.to_vec();
    rref(field, &mut m).len()
}

/// Basis of the right null space `{v : M v = 0}` of an `_ × ncols` matrix.
pub fn nullspace(field: &Field, rows: &[Vec<Felt>], ncols: usize) -> Vec<Vec<Felt>> {
    let mut m = rows.to_vec();
    let pivots = rref(field, &mut m);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Felt::ZERO; ncols];
            v[free] = Felt::ONE;
            for (row, &p) in m.iter().zip(&pivots) {
                v[p] = field.neg(row[free]);
            }
            v
        })
        .collect()
}

/// Hamming weight.
pub fn weight(v: &[Felt]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

/// A linear code of length `n` over a finite field, stored as its unique
/// reduced row echelon generator matrix so that equal row spaces compare
/// equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    field: Arc<Field>,
    n: usize,
    gen: Vec<Vec<Felt>>,
    pivots: Vec<usize>,
}

impl LinearCode {
    /// Builds the code spanned by `rows`; dependent rows are allowed and the
    /// dimension is their rank.
    pub fn from_rows(field: Arc<Field>, n: usize, rows: Vec<Vec<Felt>>) -> Result<Self, CodeError> {
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(CodeError::InconsistentLength { row, len: r.len(), expected: n });
        }
        let mut gen = rows;
        let pivots = rref(&field, &mut gen);
        Ok(LinearCode { field, n, gen, pivots })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.gen.len()
    }

    pub fn generator(&self) -> &[Vec<Felt>] {
        &self.gen
    }

    /// Columns of the generator indexed by `coords`, as rows of a submatrix.
    fn columns(&self, coords: &[usize]) -> Vec<Vec<Felt>> {
        self.gen
            .iter()
            .map(|row| coords.iter().map(|&c| row[c]).collect())
            .collect()
    }

    /// `dim C[S]`, i.e. the rank of the columns in `coords`. Zero for an
    /// empty set.
    pub fn rank_of(&self, coords: &[usize]) -> usize {
        if coords.is_empty() || self.gen.is_empty() {
            return 0;
        }
        rank(&self.field, &self.columns(coords))
    }

    pub fn encode(&self, message: &[Felt]) -> Vec<Felt> {
        assert_eq!(message.len(), self.dim());
        let f = &self.field;
        let mut out = vec![Felt::ZERO; self.n];
        for (row, &m) in self.gen.iter().zip(message) {
            if m.is_zero() {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(row) {
                *o = f.add(*o, f.mul(m, g));
            }
        }
        out
    }

    /// Whether `v` is a codeword.
    pub fn contains(&self, v: &[Felt]) -> bool {
        if v.len() != self.n {
            return false;
        }
        // reduce v against the RREF rows
        let f = &self.field;
        let mut r = v.to_vec();
        for (row, &p) in self.gen.iter().zip(&self.pivots) {
            let c = r[p];
            if !c.is_zero() {
                for (x, &g) in r.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, g));
                }
            }
        }
        r.iter().all(|x| x.is_zero())
    }

    fn check_set(&self, s: &CoordSet) -> Result<(), CodeError> {
        if s.is_empty() {
            return Err(CodeError::EmptySet);
        }
        match s.indices().last() {
            Some(&index) if index >= self.n => Err(CodeError::IndexOutOfRange { index, n: self.n }),
            _ => Ok(()),
        }
    }

    /// `C[S] = {x_S : x ∈ C}`.
    pub fn puncture(&self, s: &CoordSet) -> Result<LinearCode, CodeError> {
        self.check_set(s)?;
        LinearCode::from_rows(self.field.clone(), s.len(), self.columns(s.indices()))
    }

    /// `C[[S]] = {x_S : x ∈ C, supp(x) ⊆ S}`, computed from the messages that
    /// vanish on the complement of `S`.
    pub fn shorten(&self, s: &CoordSet) -> Result<LinearCode, CodeError> {
        self.check_set(s)?;
        let k = self.dim();
        let complement: Vec<usize> = (0..self.n).filter(|&c| !s.contains(c)).collect();
        // messages u with u·G_comp = 0 are the null space of G_comp^T
        let transposed: Vec<Vec<Felt>> = complement
            .iter()
            .map(|&c| self.gen.iter().map(|row| row[c]).collect())
            .collect();
        let messages = if complement.is_empty() {
            (0..k)
                .map(|i| (0..k).map(|j| if i == j { Felt::ONE } else { Felt::ZERO }).collect())
                .collect()
        } else {
            nullspace(&self.field, &transposed, k)
        };
        let rows = messages
            .iter()
            .map(|u| {
                let cw = self.encode(u);
                s.indices().iter().map(|&c| cw[c]).collect()
            })
            .collect();
        LinearCode::from_rows(self.field.clone(), s.len(), rows)
    }

    /// The dual code `C^⊥`.
    pub fn dual(&self) -> LinearCode {
        let rows = if self.gen.is_empty() {
            (0..self.n)
                .map(|i| (0..self.n).map(|j| if i == j { Felt::ONE } else { Felt::ZERO }).collect())
                .collect()
        } else {
            nullspace(&self.field, &self.gen, self.n)
        };
        LinearCode::from_rows(self.field.clone(), self.n, rows).expect("null space vectors have length n")
    }

    /// `q^k`, saturating.
    fn codeword_count(&self) -> u128 {
        (self.field.order() as u128).saturating_pow(self.dim() as u32)
    }

    /// Minimum distance by exhaustive enumeration, one message per
    /// projective class.
    pub fn min_distance(&self) -> Result<usize, CodeError> {
        self.min_distance_with_cap(DEFAULT_ENUM_CAP)
    }

    pub fn min_distance_with_cap(&self, cap: u64) -> Result<usize, CodeError> {
        if self.dim() == 0 {
            return Err(CodeError::ZeroCode);
        }
        let count = self.codeword_count();
        if count > cap as u128 {
            return Err(CodeError::TooLargeToEnumerate { count, cap });
        }
        let k = self.dim();
        let q = self.field.order();
        // Work units: (leading row, value of the next coefficient when present).
        let mut units: Vec<(usize, Option<u32>)> = Vec::new();
        for lead in 0..k {
            if lead + 1 < k {
                units.extend((0..q).map(|v| (lead, Some(v))));
            } else {
                units.push((lead, None));
            }
        }
        let best = units
            .par_iter()
            .map(|&(lead, second)| self.min_weight_unit(lead, second))
            .min()
            .expect("at least one unit");
        Ok(best)
    }

    fn min_weight_unit(&self, lead: usize, second: Option<u32>) -> usize {
        let f = &self.field;
        let k = self.dim();
        let mut cw = self.gen[lead].clone();
        let mut free_start = lead + 1;
        if let Some(v) = second {
            let c = Felt(v);
            for (x, &g) in cw.iter_mut().zip(&self.gen[lead + 1]) {
                *x = f.add(*x, f.mul(c, g));
            }
            free_start += 1;
        }
        let mut best = weight(&cw);
        let free = k - free_start;
        if free == 0 {
            return best;
        }
        let q = f.order();
        let mut digits = vec![0u32; free];
        'outer: loop {
            // odometer increment; digit d updates the word by (new − old)·row
            let mut d = 0;
            loop {
                if d == free {
                    break 'outer;
                }
                let row = &self.gen[free_start + d];
                let old = Felt(digits[d]);
                let next = if digits[d] + 1 == q { 0 } else { digits[d] + 1 };
                let delta = f.sub(Felt(next), old);
                for (x, &g) in cw.iter_mut().zip(row) {
                    *x = f.add(*x, f.mul(delta, g));
                }
                digits[d] = next;
                if next != 0 {
                    break;
                }
                d += 1;
            }
            let w = weight(&cw);
            if w < best {
                best = w;
                if best <= 1 {
                    break;
                }
            }
        }
        best
    }

    /// Dimension of the subcode supported inside `s` (given as a sorted
    /// index list), `k − rank(G restricted to the complement)`.
    pub fn supported_dim(&self, s: &[usize]) -> usize {
        let complement: Vec<usize> = (0..self.n).filter(|c| s.binary_search(c).is_err()).collect();
        self.dim() - self.rank_of(&complement)
    }

    /// The `s`-th generalized Hamming weight, found as the smallest `|S|`
    /// whose supported subcode has dimension at least `s`.
    pub fn ghw(&self, s: usize) -> Result<usize, CodeError> {
        let k = self.dim();
        if s == 0 || s > k {
            return Err(CodeError::BadRank { s, k });
        }
        if self.n > SUPPORT_SEARCH_MAX_LEN {
            return Err(CodeError::TooLargeToEnumerate {
                count: 1u128 << self.n,
                cap: 1 << SUPPORT_SEARCH_MAX_LEN,
            });
        }
        for size in s..=self.n {
            let hit = Combinations::new(self.n, size).any(|set| self.supported_dim(&set) >= s);
            if hit {
                return Ok(size);
            }
        }
        unreachable!("the full support carries the whole code")
    }

    /// The `s`-th generalized Hamming weight by enumerating every
    /// `s`-dimensional subcode (as reduced echelon message bases) and taking
    /// the smallest support.
    pub fn ghw_by_subcodes(&self, s: usize, cap: u64) -> Result<usize, CodeError> {
        let k = self.dim();
        if s == 0 || s > k {
            return Err(CodeError::BadRank { s, k });
        }
        let count = gaussian_binomial(self.field.order() as u128, k, s);
        if count > cap as u128 {
            return Err(CodeError::TooLargeToEnumerate { count, cap });
        }
        let q = self.field.order();
        let codewords: Vec<Vec<Felt>> = (0..k)
            .map(|i| self.gen[i].clone())
            .collect();
        let f = &self.field;
        let best = Combinations::new(k, s)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|pivots| {
                // free slots: for row r, the non-pivot columns after pivots[r]
                let slots: Vec<(usize, usize)> = pivots
                    .iter()
                    .enumerate()
                    .flat_map(|(r, &p)| {
                        let pivots = &pivots;
                        (p + 1..k).filter(move |c| !pivots.contains(c)).map(move |c| (r, c))
                    })
                    .collect();
                let mut digits = vec![0u32; slots.len()];
                let mut best = usize::MAX;
                loop {
                    let mut support = vec![false; self.n];
                    for (r, &p) in pivots.iter().enumerate() {
                        let mut word = codewords[p].clone();
                        for (slot, &(sr, c)) in slots.iter().enumerate() {
                            if sr != r || digits[slot] == 0 {
                                continue;
                            }
                            let coef = Felt(digits[slot]);
                            for (x, &g) in word.iter_mut().zip(&codewords[c]) {
                                *x = f.add(*x, f.mul(coef, g));
                            }
                        }
                        for (b, x) in support.iter_mut().zip(&word) {
                            *b |= !x.is_zero();
                        }
                    }
                    best = best.min(support.iter().filter(|&&b| b).count());
                    // odometer
                    let mut d = 0;
                    loop {
                        if d == digits.len() {
                            return best;
                        }
                        digits[d] += 1;
                        if digits[d] < q {
                            break;
                        }
                        digits[d] = 0;
                        d += 1;
                    }
                }
            })
            .min()
            .expect("at least one pivot pattern");
        Ok(best)
    }

    fn check_target(&self, i: usize, r: &CoordSet) -> Result<(), CodeError> {
        if i >= self.n {
            return Err(CodeError::IndexOutOfRange { index: i, n: self.n });
        }
        if let Some(&index) = r.indices().last().filter(|&&x| x >= self.n) {
            return Err(CodeError::IndexOutOfRange { index, n: self.n });
        }
        if r.contains(i) {
            return Err(CodeError::TargetInSet(i));
        }
        Ok(())
    }

    /// Column `i` lies in the span of the columns in `r`.
    pub fn is_recovery_set(&self, i: usize, r: &CoordSet) -> Result<bool, CodeError> {
        self.check_target(i, r)?;
        Ok(self.rank_of(r.indices()) == self.rank_of(r.with(i).indices()))
    }

    /// `d(C[R ∪ {i}]) > t + 1`, by exhaustive distance of the punctured code.
    /// A punctured code of dimension zero counts as infinitely distant.
    pub fn is_edr_set(&self, i: usize, r: &CoordSet, t: usize) -> Result<bool, CodeError> {
        self.check_target(i, r)?;
        let punctured = self.puncture(&r.with(i))?;
        match punctured.min_distance() {
            Ok(d) => Ok(d > t + 1),
            Err(CodeError::ZeroCode) => Ok(true),
            Err(e) => Err(e),
        }
    }

    /// Rank-only test equivalent to [`is_edr_set`](Self::is_edr_set): the
    /// punctured code `D = C[R̄]` has distance at least `t + 2` iff every
    /// subset of `R̄` with `t + 1` coordinates removed keeps `dim D`.
    pub fn is_edr_set_by_ranks(&self, i: usize, r: &CoordSet, t: usize) -> Result<bool, CodeError> {
        self.check_target(i, r)?;
        Ok(self.edr_by_ranks(r.with(i).indices(), t))
    }

    fn edr_by_ranks(&self, barred: &[usize], t: usize) -> bool {
        let full = self.rank_of(barred);
        if full == 0 {
            return true;
        }
        let n = barred.len();
        if n < t + 1 {
            return false;
        }
        // necessary condition first: dim C[R̄] ≤ |R̄| − (t+1)
        if full + t + 1 > n {
            return false;
        }
        Combinations::new(n, t + 1).all(|removed| {
            let kept: Vec<usize> = (0..n)
                .filter(|j| removed.binary_search(j).is_err())
                .map(|j| barred[j])
                .collect();
            self.rank_of(&kept) == full
        })
    }

    /// Per-coordinate minimum t-edr sets and the t-locality.
    pub fn t_locality(&self, t: usize, mode: SearchMode) -> Result<LocalityReport, CodeError> {
        if mode == SearchMode::Exhaustive && self.n > EXHAUSTIVE_MAX_LEN {
            return Err(CodeError::TooLargeToEnumerate {
                count: 1u128 << self.n,
                cap: 1 << EXHAUSTIVE_MAX_LEN,
            });
        }
        let per_coord: Vec<CoordLocality> = (0..self.n)
            .into_par_iter()
            .map(|i| {
                let witness = match mode {
                    SearchMode::Exhaustive => self.min_edr_exhaustive(i, t),
                    SearchMode::Greedy => self.min_edr_greedy(i, t),
                };
                CoordLocality {
                    coord: i,
                    locality: witness.as_ref().map(CoordSet::len),
                    witness,
                }
            })
            .collect();
        let not_lredc: Vec<usize> = per_coord
            .iter()
            .filter(|c| c.locality.is_none())
            .map(|c| c.coord)
            .collect();
        let r_t = if not_lredc.is_empty() {
            per_coord.iter().filter_map(|c| c.locality).max()
        } else {
            None
        };
        Ok(LocalityReport { t, exact: mode == SearchMode::Exhaustive, per_coord, r_t, not_lredc })
    }

    /// First t-edr set for coordinate `i` in cardinality-then-lexicographic
    /// order (exhaustive), or an inclusion-minimal one (greedy).
    pub fn min_edr_set(&self, i: usize, t: usize, mode: SearchMode) -> Result<Option<CoordSet>, CodeError> {
        if i >= self.n {
            return Err(CodeError::IndexOutOfRange { index: i, n: self.n });
        }
        if mode == SearchMode::Exhaustive && self.n > EXHAUSTIVE_MAX_LEN {
            return Err(CodeError::TooLargeToEnumerate {
                count: 1u128 << self.n,
                cap: 1 << EXHAUSTIVE_MAX_LEN,
            });
        }
        Ok(match mode {
            SearchMode::Exhaustive => self.min_edr_exhaustive(i, t),
            SearchMode::Greedy => self.min_edr_greedy(i, t),
        })
    }

    fn min_edr_exhaustive(&self, i: usize, t: usize) -> Option<CoordSet> {
        let others: Vec<usize> = (0..self.n).filter(|&j| j != i).collect();
        for size in 0..=others.len() {
            for combo in Combinations::new(others.len(), size) {
                let r: Vec<usize> = combo.iter().map(|&j| others[j]).collect();
                let mut barred = r.clone();
                barred.push(i);
                barred.sort_unstable();
                if self.rank_of(&r) != self.rank_of(&barred) {
                    continue;
                }
                if self.edr_by_ranks(&barred, t) {
                    return Some(CoordSet(r));
                }
            }
        }
        None
    }

    fn min_edr_greedy(&self, i: usize, t: usize) -> Option<CoordSet> {
        let mut r = CoordSet::full(self.n).without(i);
        let ok = |r: &CoordSet| {
            self.rank_of(r.indices()) == self.rank_of(r.with(i).indices())
                && self.edr_by_ranks(r.with(i).indices(), t)
        };
        if !ok(&r) {
            return None;
        }
        for j in (0..self.n).filter(|&j| j != i) {
            let candidate = r.without(j);
            if ok(&candidate) {
                r = candidate;
            }
        }
        Some(r)
    }
}

/// Exhaustive search over subsets, or an inclusion-minimal greedy upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    Greedy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoordLocality {
    pub coord: usize,
    pub locality: Option<usize>,
    pub witness: Option<CoordSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalityReport {
    pub t: usize,
    /// False when produced by the greedy search; localities are then upper bounds.
    pub exact: bool,
    pub per_coord: Vec<CoordLocality>,
    /// `None` when some coordinate has no t-edr set.
    pub r_t: Option<usize>,
    /// Coordinates without any t-edr set (the code is then not t-LREDC).
    pub not_lredc: Vec<usize>,
}

impl LocalityReport {
    pub fn is_t_lredc(&self) -> bool {
        self.not_lredc.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundVerdict {
    Equality,
    Slack,
    Violated,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub name: &'static str,
    pub lhs: i64,
    pub rhs: i64,
    /// `lhs − rhs`; nonnegative when the bound holds.
    pub slack: i64,
    pub verdict: BoundVerdict,
}

impl BoundCheck {
    fn new(name: &'static str, lhs: i64, rhs: i64) -> Self {
        let slack = lhs - rhs;
        let verdict = match slack {
            0 => BoundVerdict::Equality,
            s if s > 0 => BoundVerdict::Slack,
            _ => BoundVerdict::Violated,
        };
        BoundCheck { name, lhs, rhs, slack, verdict }
    }

    fn not_applicable(name: &'static str) -> Self {
        BoundCheck { name, lhs: 0, rhs: 0, slack: 0, verdict: BoundVerdict::NotApplicable }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub checks: Vec<BoundCheck>,
    /// Equality in `n + t + 2 ≥ k + d + ⌈k/(r_t − t)⌉(t + 1)`.
    pub t_optimal: bool,
}

impl BoundReport {
    pub fn any_violated(&self) -> bool {
        self.checks.iter().any(|c| c.verdict == BoundVerdict::Violated)
    }

    pub fn get(&self, name: &str) -> Option<&BoundCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const BOUND_LRC_SINGLETON: &str = "lrc_singleton";
pub const BOUND_LREDC_SINGLETON: &str = "lredc_singleton";
pub const BOUND_DUAL_GHW: &str = "dual_ghw";

/// Evaluates the locality bounds on integer parameters. Violations are
/// reported in the result, never raised.
///
/// * `lredc_singleton`: `n + t + 2 ≥ k + d + ⌈k/(r_t − t)⌉·(t + 1)`
/// * `lrc_singleton` (only for `t = 0`): `n + 2 ≥ k + d + ⌈k/r_0⌉`
/// * `dual_ghw` (when `d_{t+1}(C^⊥)` is supplied): `r_t ≥ d_{t+1}(C^⊥) − 1`
pub fn check_bounds(n: usize, k: usize, d: usize, t: usize, r_t: usize, dual_ghw: Option<usize>) -> BoundReport {
    let (n, k, d, t, r_t) = (n as i64, k as i64, d as i64, t as i64, r_t as i64);
    let mut checks = Vec::new();
    let lredc = if k >= 1 && r_t > t {
        let ceil = (k + (r_t - t) - 1) / (r_t - t);
        BoundCheck::new(BOUND_LREDC_SINGLETON, n + t + 2, k + d + ceil * (t + 1))
    } else {
        BoundCheck::not_applicable(BOUND_LREDC_SINGLETON)
    };
    let t_optimal = lredc.verdict == BoundVerdict::Equality;
    checks.push(lredc);
    if t == 0 {
        checks.push(if k >= 1 && r_t >= 1 {
            BoundCheck::new(BOUND_LRC_SINGLETON, n + 2, k + d + (k + r_t - 1) / r_t)
        } else {
            BoundCheck::not_applicable(BOUND_LRC_SINGLETON)
        });
    }
    if let Some(g) = dual_ghw {
        checks.push(BoundCheck::new(BOUND_DUAL_GHW, r_t, g as i64 - 1));
    }
    BoundReport { checks, t_optimal }
}

/// Number of `s`-dimensional subspaces of `F_q^k`, saturating.
pub fn gaussian_binomial(q: u128, k: usize, s: usize) -> u128 {
    if s > k {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..s {
        num = num.saturating_mul(q.saturating_pow((k - i) as u32).saturating_sub(1));
        den = den.saturating_mul(q.saturating_pow((i + 1) as u32) - 1);
    }
    if num == u128::MAX {
        u128::MAX
    } else {
        num / den
    }
}

/// Lexicographic `size`-subsets of `0..n`.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, size: usize) -> Self {
        let current = (size <= n).then(|| (0..size).collect());
        Combinations { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let size = out.len();
        let mut next = out.clone();
        let mut i = size;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - size + i {
                next[i] += 1;
                for j in i + 1..size {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                return Some(out);
            }
        }
        Some(out)
    }
}
