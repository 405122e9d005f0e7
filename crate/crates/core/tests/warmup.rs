use dynmis::harness::{run, Algo, RunConfig};
use dynmis::phase::Label;
use dynmis::rng;
use dynmis::warmup::{preprocess, warmup_run, Warmup};
use dynmis::workload::{Family, WorkloadSpec};
use dynmis::{greedy_mis, verify_mis, DynamicGraph, DynamicMis, PhaseCause, PhaseParams, Step, UpdateEvent};
use rand::Rng;

fn er(n: usize, p: f64, seed: u64) -> DynamicGraph {
    let mut r = rng::stream(seed, 99);
    let mut g = DynamicGraph::new(n).unwrap();
    for u in 0..n {
        for v in u + 1..n {
            if r.gen_bool(p) {
                g.apply(UpdateEvent::insert(u, v)).unwrap();
            }
        }
    }
    g
}

/// Fixed probability with a phase long enough to never expire in a test.
fn long_phase(p: f64) -> PhaseParams {
    PhaseParams {
        phase_len: 1_000_000,
        ..PhaseParams::with_probability(64, p)
    }
}

#[test]
fn preprocess_extremes() {
    let g = er(40, 0.2, 1);
    let mut r = rng::stream(5, rng::ALGORITHM_STREAM);
    let all = preprocess(&g, 1.0, &mut r);
    assert!(all.sampled.iter().all(|&s| s));
    assert_eq!(all.mis, greedy_mis(&g, |_| true));
    assert!(all.residual(&g).iter().all(|&l| !l));

    let none = preprocess(&g, 0.0, &mut r);
    assert!(none.sampled.iter().all(|&s| !s));
    assert!(none.mis.is_empty());
    assert!(none.residual(&g).iter().all(|&l| l));
}

#[test]
fn preprocess_replays_bit_exactly() {
    let g = er(100, 0.05, 2);
    let sample = |seed| preprocess(&g, 0.1, &mut rng::stream(seed, rng::ALGORITHM_STREAM));
    let a = sample(11);
    assert_eq!(a, sample(11));
    assert!(a.sampled.iter().filter(|&&s| s).count() <= 100);
}

#[test]
fn empty_graph_phase_puts_everyone_in_the_mis() {
    let w = Warmup::with_params(30, long_phase(0.3), 4).unwrap();
    for v in 0..30 {
        let label = w.state().label(v);
        assert!(label == Label::H || label == Label::L, "{v}: {label:?}");
        assert_eq!(label == Label::H, w.state().in_mh(v));
    }
    assert_eq!(w.mis().len(), 30);
}

#[test]
fn certain_sampling_tracks_the_greedy_mis() {
    let updates = dynmis::workload::generate(&WorkloadSpec::new(Family::UniformToggle, 20, 300, 3)).unwrap();
    let mut w = Warmup::with_params(20, PhaseParams::with_probability(20, 1.0), 9).unwrap();
    for e in updates {
        w.update(e).unwrap();
        assert!(w.state().label(e.u) == Label::H);
        assert_eq!(w.mis(), greedy_mis(w.graph(), |_| true));
    }
}

#[test]
fn no_sampling_is_the_deterministic_engine() {
    let updates = dynmis::workload::generate(&WorkloadSpec::new(Family::UniformToggle, 20, 300, 3)).unwrap();
    let mut w = Warmup::with_params(20, PhaseParams::with_probability(20, 0.0), 9).unwrap();
    for e in updates {
        assert_eq!(w.step(e).unwrap(), Step::Continued);
        assert!((0..20).all(|v| w.state().label(v) == Label::L));
        assert!(verify_mis(w.graph(), &w.mis(), |_| true).is_valid());
    }
    assert_eq!(w.meter().phases_total, 0);
}

#[test]
fn hub_edges_move_vertices_between_i_and_l() {
    let mut w = Warmup::with_params(40, long_phase(0.5), 21).unwrap();
    let find = |label: Label| (0..40).find(|&v| w.state().label(v) == label).unwrap();
    let (h, l) = (find(Label::H), find(Label::L));
    assert!(w.state().in_mh(h));

    assert_eq!(w.step(UpdateEvent::insert(h, l)).unwrap(), Step::Continued);
    assert_eq!(w.state().label(l), Label::I);
    assert!(!w.state().low_engine().is_active(l));
    assert_eq!(w.state().mh_count(l), 1);

    assert_eq!(w.step(UpdateEvent::delete(h, l)).unwrap(), Step::Continued);
    assert_eq!(w.state().label(l), Label::L);
    assert!(w.state().low_engine().is_active(l));
    assert!(w.state().low_engine().in_mis(l));
    assert_eq!(w.state().i_to_l_moves(), 1);
    assert!(w.audit().is_ok());
}

#[test]
fn edges_between_inner_vertices_change_nothing() {
    let mut w = Warmup::with_params(40, long_phase(0.5), 21).unwrap();
    let hs: Vec<usize> = (0..40).filter(|&v| w.state().label(v) == Label::H).collect();
    let ls: Vec<usize> = (0..40).filter(|&v| w.state().label(v) == Label::L).collect();
    let (h, a, b) = (hs[0], ls[0], ls[1]);
    w.step(UpdateEvent::insert(h, a)).unwrap();
    w.step(UpdateEvent::insert(h, b)).unwrap();
    let before = (w.mis(), w.state().low_engine().mis(), w.state().i_to_l_moves());
    assert_eq!(w.step(UpdateEvent::insert(a, b)).unwrap(), Step::Continued);
    assert_eq!(w.state().label(a), Label::I);
    assert_eq!(w.state().label(b), Label::I);
    assert_eq!(before, (w.mis(), w.state().low_engine().mis(), w.state().i_to_l_moves()));
}

#[test]
fn an_edge_inside_the_sample_ends_the_phase() {
    let mut w = Warmup::with_params(40, long_phase(0.5), 21).unwrap();
    let hs: Vec<usize> = (0..40).filter(|&v| w.state().label(v) == Label::H).collect();
    let step = w.step(UpdateEvent::insert(hs[0], hs[1])).unwrap();
    assert_eq!(step, Step::PhaseEnded(PhaseCause::SampleHit));
    assert!(w.graph().has_edge(hs[0], hs[1]));
    assert!(w.audit().is_ok());
    assert!(verify_mis(w.graph(), &w.mis(), |_| true).is_valid());
}

#[test]
fn phase_start_on_a_random_graph_is_consistent() {
    let g = er(64, 0.1, 8);
    let mut w = Warmup::with_params(64, long_phase(0.2), 2).unwrap();
    for (u, v) in g.edges() {
        w.update(UpdateEvent::insert(u, v)).unwrap();
        assert!(verify_mis(w.graph(), &w.mis(), |_| true).is_valid());
        assert!(w.audit().is_ok(), "{:?}", w.audit());
    }
}

#[test]
fn ten_thousand_toggles_stay_valid() {
    let spec = WorkloadSpec::new(Family::UniformToggle, 256, 10_000, 17);
    let out = run(&RunConfig::new(Algo::WarmupN23, spec).verify_every(1).audited()).unwrap();
    assert_eq!(out.row.verify_failures + out.audit_failures, 0, "{:?}", out.failures);
}

#[test]
fn no_updates_means_one_open_phase_and_a_full_mis() {
    let (mis, meter) = warmup_run(50, &[], 1).unwrap();
    assert_eq!(mis.len(), 50);
    assert_eq!(meter.phases_total, 0);
    assert_eq!(meter.level_phases, vec![1]);
}

#[test]
fn parameters_at_4096() {
    let params = PhaseParams::for_vertices(4096);
    assert!((params.p - 0.00791).abs() < 5e-6, "{}", params.p);
    assert!((2655..=2665).contains(&params.phase_len), "{}", params.phase_len);
}

#[test]
fn most_phases_run_to_expiry() {
    let n = 256;
    let params = PhaseParams::for_vertices(n);
    let k = 250 * params.phase_len as usize;
    let updates = dynmis::workload::generate(&WorkloadSpec::new(Family::UniformToggle, n, k, 5)).unwrap();
    let (_, meter) = warmup_run(n, &updates, 5).unwrap();
    let done = meter.completed(1).count();
    assert!(done >= 200, "only {done} phases");
    let fraction = meter.success_fraction(1).unwrap();
    assert!(fraction >= 0.5 - 3.0 * (0.25 / done as f64).sqrt(), "{fraction}");
}
