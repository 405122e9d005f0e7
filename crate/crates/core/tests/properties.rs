use std::collections::BTreeSet;

use dynmis::det::DetMis;
use dynmis::harness::Algo;
use dynmis::oracle::{brute_force_lex_mis, greedy_mis, verify_mis};
use dynmis::{DynamicGraph, Neighbors, UpdateEvent, UpdateKind};
use proptest::prelude::*;

/// Pairs to toggle on `n` vertices, as raw indices reduced modulo `n`.
fn toggles(max_n: usize, max_len: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2..=max_n).prop_flat_map(move |n| {
        let pair = (0..n, 0..n).prop_filter("no self-loops", |(a, b)| a != b);
        (Just(n), prop::collection::vec(pair, 0..max_len))
    })
}

/// Turns pair toggles into well-formed events against a running edge set.
fn events(pairs: &[(usize, usize)]) -> Vec<UpdateEvent> {
    let mut edges = BTreeSet::new();
    pairs
        .iter()
        .map(|&(a, b)| {
            let key = (a.min(b), a.max(b));
            let kind = if edges.remove(&key) {
                UpdateKind::Delete
            } else {
                edges.insert(key);
                UpdateKind::Insert
            };
            UpdateEvent::new(kind, a, b)
        })
        .collect()
}

fn graph_of(n: usize, pairs: &[(usize, usize)]) -> DynamicGraph {
    let mut g = DynamicGraph::new(n).unwrap();
    for e in events(pairs) {
        g.apply(e).unwrap();
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn graph_matches_edge_set_model((n, pairs) in toggles(12, 80)) {
        let mut g = DynamicGraph::new(n).unwrap();
        let mut model = BTreeSet::new();
        for e in events(&pairs) {
            g.apply(e).unwrap();
            if e.is_insert() { model.insert((e.u, e.v)); } else { model.remove(&(e.u, e.v)); }
            prop_assert_eq!(g.edge_count(), model.len());
        }
        let mut listed = g.edges();
        listed.sort_unstable();
        prop_assert_eq!(listed, model.iter().copied().collect::<Vec<_>>());
        let degree_sum: usize = (0..n).map(|v| g.degree(v)).sum();
        prop_assert_eq!(degree_sum, 2 * model.len());
        for v in 0..n {
            for &w in g.neighbors(v) {
                prop_assert!(g.has_edge(w, v));
            }
        }
        let mut live = g.non_isolated().to_vec();
        live.sort_unstable();
        let expected: Vec<usize> = (0..n).filter(|&v| g.degree(v) > 0).collect();
        prop_assert_eq!(live, expected);
    }

    #[test]
    fn greedy_is_a_valid_mis_under_any_mask((n, pairs) in toggles(14, 60), mask in any::<u16>()) {
        let g = graph_of(n, &pairs);
        let keep = |v: usize| mask >> v & 1 == 1;
        let s = greedy_mis(&g, keep);
        prop_assert!(verify_mis(&g, &s, keep).is_valid());
    }

    #[test]
    fn greedy_matches_brute_force((n, pairs) in toggles(10, 40)) {
        let g = graph_of(n, &pairs);
        prop_assert_eq!(greedy_mis(&g, |_| true), brute_force_lex_mis(&g).unwrap());
    }

    #[test]
    fn det_engine_survives_mixed_operations(
        (n, pairs) in toggles(10, 60),
        flips in prop::collection::vec(0usize..10, 0..20),
    ) {
        let mut g = DynamicGraph::new(n).unwrap();
        let mut engine = DetMis::init(&g, |_| true);
        let evs = events(&pairs);
        let mut flips = flips.into_iter();
        for (i, e) in evs.into_iter().enumerate() {
            g.apply(e).unwrap();
            if engine.is_active(e.u) && engine.is_active(e.v) {
                engine.edge_update(e);
            }
            if i % 3 == 0 {
                if let Some(v) = flips.next().map(|v| v % n) {
                    if engine.is_active(v) {
                        engine.deactivate(v);
                    } else {
                        let nbrs: Vec<usize> =
                            g.neighbors(v).iter().copied().filter(|&w| engine.is_active(w)).collect();
                        engine.activate(v, &nbrs);
                    }
                }
            }
            prop_assert!(engine.audit().is_ok(), "{:?}", engine.audit());
            let active = |v: usize| engine.is_active(v);
            prop_assert!(verify_mis(&g, &engine.mis(), active).is_valid());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn every_algorithm_keeps_a_valid_audited_mis((n, pairs) in toggles(24, 160), seed in any::<u64>()) {
        let evs = events(&pairs);
        for algo in Algo::ALL {
            let mut a = algo.build(n, seed).unwrap();
            for &e in &evs {
                a.update(e).unwrap();
                let verdict = verify_mis(a.graph(), &a.mis(), |_| true);
                prop_assert!(verdict.is_valid(), "{} after {}: {:?}", algo, e, verdict);
                prop_assert!(a.audit().is_ok(), "{} after {}: {:?}", algo, e, a.audit());
            }
        }
    }

    #[test]
    fn runs_replay_exactly((n, pairs) in toggles(24, 120), seed in any::<u64>()) {
        let evs = events(&pairs);
        for algo in Algo::ALL {
            let run = || {
                let mut a = algo.build(n, seed).unwrap();
                for &e in &evs {
                    a.update(e).unwrap();
                }
                (a.mis(), a.meter().work_units, a.meter().phases_by_cause)
            };
            prop_assert_eq!(run(), run());
        }
    }

    #[test]
    fn rejected_updates_leave_no_trace((n, pairs) in toggles(16, 60), seed in any::<u64>()) {
        let evs = events(&pairs);
        let g = graph_of(n, &pairs);
        let (u, v) = (0, 1);
        let bad = if g.has_edge(u, v) { UpdateEvent::insert(u, v) } else { UpdateEvent::delete(u, v) };
        for algo in Algo::ALL {
            let mut a = algo.build(n, seed).unwrap();
            for &e in &evs {
                a.update(e).unwrap();
            }
            let before = a.mis();
            prop_assert!(a.update(bad).is_err());
            prop_assert_eq!(a.mis(), before);
            prop_assert!(a.audit().is_ok());
        }
    }
}
