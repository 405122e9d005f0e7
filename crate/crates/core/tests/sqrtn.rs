use dynmis::harness::{run, Algo, RunConfig};
use dynmis::sqrtn::{chain_terms, make_level_params, solve_exponent_chain, sqrtn_run, LevelParams, SqrtN};
use dynmis::workload::{generate, Family, WorkloadSpec};
use dynmis::{DynamicMis, PhaseCause};

#[test]
fn chain_for_one_and_two_levels() {
    let e1 = solve_exponent_chain(1);
    assert!((e1[0] - 2.0 / 3.0).abs() < 1e-12);
    let e2 = solve_exponent_chain(2);
    assert!((e2[0] - 5.0 / 7.0).abs() < 1e-12);
    assert!((e2[1] - 4.0 / 7.0).abs() < 1e-12);
    let terms = chain_terms(&e2);
    assert!(terms.iter().all(|t| (t - 4.0 / 7.0).abs() < 1e-12));
}

#[test]
fn chain_tail_decreases_to_one_half() {
    let tails: Vec<f64> = (1..=30).map(|r| *solve_exponent_chain(r).last().unwrap()).collect();
    assert!(tails.windows(2).all(|w| w[1] < w[0]));
    assert!((tails[29] - 0.5).abs() < 1e-9);
}

#[test]
fn single_level_delta_at_65536() {
    let params = LevelParams::with_levels(65536, 1);
    assert!((params.delta_raw[0] - 1625.5).abs() < 0.05, "{}", params.delta_raw[0]);
    assert_eq!(params.delta[0], 1626);
}

#[test]
fn accepted_parameters_are_spaced() {
    for n in (2..=24).map(|k| 1usize << k) {
        if let Some(params) = make_level_params(n) {
            assert!(params.is_feasible());
            assert!(params.p.windows(2).all(|w| w[1] >= 2.0 * w[0] - 1e-12), "n = {n}");
            assert!(params.delta.windows(2).all(|w| w[0] > w[1]));
            assert!(params.p[0] >= 1.0 / n as f64 && *params.p.last().unwrap() <= 1.0);
            assert!(params.levels() <= LevelParams::target_levels(n));
        }
    }
}

#[test]
fn level_count_is_capped_well_below_target_at_a_million() {
    let n = 1 << 20;
    assert_eq!(LevelParams::target_levels(n), 9);
    let params = make_level_params(n).unwrap();
    assert_eq!(params.levels(), 3);
}

#[test]
fn tiny_universes_use_the_flat_engine() {
    let a = SqrtN::new(64, 1).unwrap();
    assert!(a.params().is_none());
    assert!(SqrtN::new(256, 1).unwrap().params().is_some());
}

#[test]
fn empty_graph_leaves_everyone_in_the_deepest_level() {
    let a = SqrtN::new(1024, 5).unwrap();
    let depth = a.params().unwrap().levels();
    assert_eq!(a.mis().len(), 1024);
    let deepest = a.level_vertices(depth);
    assert!(deepest.len() < 1024, "sampled vertices never reach the star graph");
    for r in 1..depth {
        let outer = a.level_vertices(r);
        assert!(a.level_vertices(r + 1).iter().all(|v| outer.binary_search(v).is_ok()));
    }
    assert!(a.audit().is_ok());
}

#[test]
fn no_updates_keeps_the_full_vertex_set() {
    let (mis, meter) = sqrtn_run(512, &[], 2).unwrap();
    assert_eq!(mis.len(), 512);
    assert_eq!(meter.phases_total, 0);
}

#[test]
fn ten_thousand_updates_at_512_stay_valid() {
    for family in ["uniform", "er", "hub"] {
        let spec = WorkloadSpec::new(Family::with_defaults(family, 512).unwrap(), 512, 10_000, 4);
        let out = run(&RunConfig::new(Algo::SqrtN, spec).verify_every(1).audited()).unwrap();
        assert_eq!(out.row.verify_failures + out.audit_failures, 0, "{family}: {:?}", out.failures);
    }
}

#[test]
fn level_phases_mostly_succeed_and_obey_the_count_bound() {
    let n = 1024;
    let k = 4000;
    let updates = generate(&WorkloadSpec::new(Family::UniformToggle, n, k, 6)).unwrap();
    let (_, meter) = sqrtn_run(n, &updates, 6).unwrap();
    let params = make_level_params(n).unwrap();
    let mut previous = 0.0;
    for r in 1..=params.levels() {
        let done = meter.completed(r).count();
        assert!(done >= 200, "level {r}: {done} phases");
        let fraction = meter.success_fraction(r).unwrap();
        assert!(fraction >= 0.5 - 3.0 * (0.25 / done as f64).sqrt(), "level {r}: {fraction}");
        let k_r = meter.level_phases[r - 1] as f64;
        let bound = 4.0 * k as f64 * 24.0 * params.p[r - 1].powi(2) + 10.0 * previous + 10.0;
        assert!(k_r <= bound, "level {r}: {k_r} > {bound}");
        previous = k_r;
    }
    let by_cause: u64 = meter.phases_by_cause.iter().sum();
    assert_eq!(by_cause, meter.phases_total);
    assert!(meter.count(PhaseCause::Epoch) == 0);
}
