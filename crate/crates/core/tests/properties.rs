use proptest::prelude::*;

use wftop::exterior::{base_change_fiber_check, ext_presentation};
use wftop::instance::{parse_instance, InstanceFile};
use wftop::module::Presentation;
use wftop::ordinal::Ordinal;
use wftop::ring::RingInstance;
use wftop::verify::{default_corpus, generate_corpus, run_all, Instance, SuiteId};

/// `|(Z/n)^g / span(rows)|` by walking the span.
fn cokernel_size(n: u64, g: usize, rows: &[Vec<i64>]) -> u128 {
    let total = n.pow(g as u32) as usize;
    let encode = |v: &[u64]| v.iter().fold(0usize, |a, &x| a * n as usize + x as usize);
    let mut seen = vec![false; total];
    seen[0] = true;
    let mut stack = vec![vec![0u64; g]];
    let mut span = 1u128;
    while let Some(v) = stack.pop() {
        for r in rows {
            let w: Vec<u64> = v
                .iter()
                .zip(r)
                .map(|(&a, &b)| (a + b.rem_euclid(n as i64) as u64) % n)
                .collect();
            let c = encode(&w);
            if !seen[c] {
                seen[c] = true;
                span += 1;
                stack.push(w);
            }
        }
    }
    total as u128 / span
}

fn zmod_presentation() -> impl Strategy<Value = (u64, usize, Vec<Vec<i64>>)> {
    (1u64..=12, 0usize..=3).prop_flat_map(|(n, g)| {
        let row = proptest::collection::vec(0..n as i64, g);
        (Just(n), Just(g), proptest::collection::vec(row, 0..=3))
    })
}

fn zloc_presentation() -> impl Strategy<Value = (Vec<u64>, usize, Vec<Vec<i64>>)> {
    let primes = proptest::sample::subsequence(vec![2u64, 3, 5, 7], 1..=3);
    (primes, 0usize..=3).prop_flat_map(|(ps, g)| {
        let row = proptest::collection::vec(-20i64..=20, g);
        (Just(ps), Just(g), proptest::collection::vec(row, 0..=3))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cardinality_matches_enumeration((n, g, rows) in zmod_presentation()) {
        let m = Presentation::new(RingInstance::zmod(n).unwrap(), g, rows.clone()).unwrap();
        let c = m.classify().unwrap();
        prop_assert_eq!(c.cardinality, Some(cokernel_size(n, g, &rows)));
        let table = Presentation::new(
            RingInstance::table(wftop::ring::table::TableRing::zmod(n as usize).unwrap()),
            g,
            rows,
        ).unwrap();
        let t = table.classify().unwrap();
        prop_assert_eq!(t.is_projective, c.is_projective);
        prop_assert_eq!(t.cardinality, c.cardinality);
    }

    #[test]
    fn rank_grows_under_specialization((ps, g, rows) in zloc_presentation()) {
        let m = Presentation::new(RingInstance::zloc(&ps).unwrap(), g, rows).unwrap();
        let ranks = m.rank_map().unwrap();
        let values = ranks.values();
        let poset = ranks.poset();
        for p in 0..poset.len() {
            for q in 0..poset.len() {
                if poset.leq(p, q) {
                    prop_assert!(values[p] <= values[q]);
                }
            }
        }
    }

    #[test]
    fn projective_iff_rank_map_locally_constant((ps, g, rows) in zloc_presentation()) {
        let m = Presentation::new(RingInstance::zloc(&ps).unwrap(), g, rows).unwrap();
        let c = m.classify().unwrap();
        let values = m.rank_map().unwrap().values();
        // Over a domain the spectrum is connected, so locally constant means constant.
        prop_assert_eq!(c.is_projective, values.iter().all(|&v| v == values[0]));
    }

    #[test]
    fn exterior_fibers_are_binomials((n, g, rows) in zmod_presentation(), k in 0usize..=4) {
        let m = Presentation::new(RingInstance::zmod(n).unwrap(), g, rows).unwrap();
        let ext = ext_presentation(&m, k).unwrap();
        for p in m.ring().enum_primes().unwrap() {
            let v = base_change_fiber_check(&m, k, &p).unwrap();
            prop_assert!(v.equal, "{:?}", v);
            prop_assert_eq!(ext.fiber_dim(&p).unwrap() as u128, v.rhs as u128);
        }
    }

    #[test]
    fn ordinal_tokens_round_trip(w in 0u8..=1, k in 0u64..1000) {
        let a = Ordinal::new(w, k).unwrap();
        prop_assert_eq!(a.to_string().parse::<Ordinal>().unwrap(), a);
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<Ordinal>(&json).unwrap(), a);
    }
}

#[test]
fn corpus_modules_round_trip_through_json() {
    for i in generate_corpus(5, 100).unwrap() {
        let file = match i {
            Instance::Module(m) => InstanceFile::module(m),
            Instance::Ordinal(a) => InstanceFile::ordinal(a),
            Instance::Table(_) => continue,
        };
        assert_eq!(parse_instance(&file.to_json()).unwrap(), file);
    }
}

#[test]
fn no_failures_across_seeds() {
    for seed in [1, 2, 3] {
        let s = run_all(&default_corpus(seed, 100).unwrap(), &SuiteId::ALL);
        assert!(
            s.success,
            "seed {seed}: {:?}",
            s.failures().collect::<Vec<_>>()
        );
        assert!(s.necessity_witnesses >= 1);
    }
}

#[test]
fn summary_serializes_with_stable_keys() {
    let s = run_all(&default_corpus(0, 10).unwrap(), &SuiteId::ALL);
    let v = serde_json::to_value(&s).unwrap();
    for key in [
        "counts",
        "instances",
        "necessity_witnesses",
        "success",
        "notes",
        "verdicts",
    ] {
        assert!(v.get(key).is_some(), "{key}");
    }
    for verdict in v["verdicts"].as_array().unwrap() {
        for key in [
            "suite",
            "instance",
            "status",
            "witnesses",
            "notes",
            "runtime_us",
        ] {
            assert!(verdict.get(key).is_some(), "{key}");
        }
    }
}
