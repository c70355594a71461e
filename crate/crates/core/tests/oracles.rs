//! Code operations checked against brute-force enumeration of codewords.

use std::collections::BTreeSet;
use std::sync::Arc;

use loceret_core::codeops::{check_bounds, BoundVerdict, Combinations, CoordSet, LinearCode, SearchMode};
use loceret_core::galois::{Felt, Field, FieldSpec};
use proptest::prelude::*;

fn field(q: u32) -> Arc<Field> {
    Arc::new(Field::new(FieldSpec::prime(q)).unwrap())
}

/// Every codeword as a list of integers.
fn codewords(code: &LinearCode) -> BTreeSet<Vec<u32>> {
    let q = code.field().order();
    let k = code.dim();
    let mut out = BTreeSet::new();
    let mut msg = vec![0u32; k];
    loop {
        let m: Vec<Felt> = msg.iter().map(|&v| Felt(v)).collect();
        out.insert(code.encode(&m).iter().map(|x| x.0).collect());
        let Some(pos) = msg.iter().position(|&v| v + 1 < q) else { break };
        msg[pos] += 1;
        msg[..pos].fill(0);
    }
    out
}

fn all_vectors(q: u32, n: usize) -> impl Iterator<Item = Vec<u32>> {
    (0..(q as u64).pow(n as u32)).map(move |mut idx| {
        (0..n)
            .map(|_| {
                let d = (idx % q as u64) as u32;
                idx /= q as u64;
                d
            })
            .collect()
    })
}

fn weight_of(v: &[u32]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

fn brute_distance(code: &LinearCode) -> Option<usize> {
    codewords(code).iter().map(|c| weight_of(c)).filter(|&w| w > 0).min()
}

/// Strategy: a field order, a generator with up to `max_k` rows over length
/// `1..=max_n`, and a nonempty coordinate subset.
fn code_and_set(max_n: usize, max_k: usize) -> impl Strategy<Value = (LinearCode, CoordSet)> {
    (prop::sample::select(vec![2u32, 3, 5, 13]), 1..=max_n)
        .prop_flat_map(move |(q, n)| {
            let rows = prop::collection::vec(prop::collection::vec(0..q, n), 1..=max_k.min(n));
            let set = prop::collection::btree_set(0..n, 1..=n);
            (Just(q), Just(n), rows, set)
        })
        .prop_map(|(q, n, rows, set)| {
            let f = field(q);
            let rows = rows.into_iter().map(|r| r.into_iter().map(Felt).collect()).collect();
            let code = LinearCode::from_rows(f, n, rows).unwrap();
            (code, CoordSet::new(set.into_iter().collect(), n).unwrap())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn puncture_matches_projection((code, s) in code_and_set(6, 3)) {
        let projected: BTreeSet<Vec<u32>> = codewords(&code)
            .iter()
            .map(|c| s.indices().iter().map(|&i| c[i]).collect())
            .collect();
        prop_assert_eq!(codewords(&code.puncture(&s).unwrap()), projected);
    }

    #[test]
    fn shorten_matches_support_filter((code, s) in code_and_set(6, 3)) {
        let filtered: BTreeSet<Vec<u32>> = codewords(&code)
            .iter()
            .filter(|c| (0..c.len()).all(|i| s.contains(i) || c[i] == 0))
            .map(|c| s.indices().iter().map(|&i| c[i]).collect())
            .collect();
        prop_assert_eq!(codewords(&code.shorten(&s).unwrap()), filtered);
    }

    #[test]
    fn dual_matches_orthogonal_vectors((code, _s) in code_and_set(5, 3)) {
        let q = code.field().order();
        let words = codewords(&code);
        let orth: BTreeSet<Vec<u32>> = all_vectors(q, code.len())
            .filter(|v| words.iter().all(|c| c.iter().zip(v).map(|(a, b)| a * b).sum::<u32>() % q == 0))
            .collect();
        prop_assert_eq!(codewords(&code.dual()), orth);
    }

    #[test]
    fn dual_of_puncture_is_shortened_dual((code, s) in code_and_set(8, 4)) {
        prop_assert_eq!(code.puncture(&s).unwrap().dual(), code.dual().shorten(&s).unwrap());
    }

    #[test]
    fn distance_matches_enumeration((code, _s) in code_and_set(7, 3)) {
        match brute_distance(&code) {
            Some(d) => prop_assert_eq!(code.min_distance().unwrap(), d),
            None => prop_assert!(code.min_distance().is_err()),
        }
    }

    // d(C) >= d iff every S with |S| > n - d keeps the full dimension.
    #[test]
    fn distance_rank_characterization((code, _s) in code_and_set(7, 3)) {
        let n = code.len();
        let k = code.dim();
        let d = brute_distance(&code).unwrap_or(n + 1);
        for bound in 1..=n {
            let ranks_ok = ((n - bound + 1)..=n)
                .all(|size| Combinations::new(n, size).all(|s| code.rank_of(&s) == k));
            prop_assert_eq!(d >= bound, ranks_ok, "bound {}", bound);
        }
    }

    #[test]
    fn edr_tests_agree((code, s) in code_and_set(7, 3), t in 0usize..3) {
        let i = s.indices()[0];
        let r = s.without(i);
        let barred = r.with(i);
        let by_distance = match code.puncture(&barred).unwrap().min_distance() {
            Ok(d) => d > t + 1,
            Err(_) => true,
        };
        let literal = code.is_edr_set(i, &r, t).unwrap();
        prop_assert_eq!(literal, by_distance);
        prop_assert_eq!(code.is_edr_set_by_ranks(i, &r, t).unwrap(), literal);
    }

    #[test]
    fn recovery_set_iff_dual_word((code, s) in code_and_set(6, 3)) {
        let i = s.indices()[0];
        let r = s.without(i);
        let barred = r.with(i);
        let slot = barred.indices().iter().position(|&c| c == i).unwrap();
        let has_word = codewords(&code.dual().shorten(&barred).unwrap()).iter().any(|w| w[slot] != 0);
        prop_assert_eq!(code.is_recovery_set(i, &r).unwrap(), has_word);
    }

    #[test]
    fn ghw_routes_agree((code, _s) in code_and_set(6, 3), s in 1usize..4) {
        prop_assume!(s <= code.dim());
        prop_assert_eq!(code.ghw(s).unwrap(), code.ghw_by_subcodes(s, 1 << 20).unwrap());
    }

    #[test]
    fn locality_witnesses_and_bounds((code, _s) in code_and_set(6, 3), t in 0usize..2) {
        let report = code.t_locality(t, SearchMode::Exhaustive).unwrap();
        let n = code.len();
        for c in &report.per_coord {
            let Some(w) = &c.witness else {
                // no set at all: even the full complement fails
                prop_assert!(!code.is_edr_set(c.coord, &CoordSet::full(n).without(c.coord), t).unwrap());
                continue;
            };
            prop_assert!(!w.contains(c.coord));
            prop_assert!(code.is_edr_set(c.coord, w, t).unwrap());
            // R ∪ {i} \ {j} is a t-edr set for j
            for &j in w.indices() {
                prop_assert!(code.is_edr_set(j, &w.with(c.coord).without(j), t).unwrap());
            }
            // nothing smaller works
            let others: Vec<usize> = (0..n).filter(|&j| j != c.coord).collect();
            for size in 0..w.len() {
                for combo in Combinations::new(others.len(), size) {
                    let cand = CoordSet::new(combo.iter().map(|&j| others[j]).collect(), n).unwrap();
                    prop_assert!(!code.is_edr_set(c.coord, &cand, t).unwrap());
                }
            }
        }
        if let (Some(r_t), Some(d)) = (report.r_t, brute_distance(&code)) {
            let dual = code.dual();
            let g = (t < dual.dim()).then(|| dual.ghw(t + 1).unwrap());
            let bounds = check_bounds(n, code.dim(), d, t, r_t, g);
            prop_assert!(bounds.checks.iter().all(|b| b.verdict != BoundVerdict::Violated), "{:?}", bounds);
        }
    }
}
