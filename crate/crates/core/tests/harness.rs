use dynmis::harness::{
    bench_matrix, fit_slopes, run, write_csv, Algo, CsvRow, HarnessError, RunConfig, Workload,
};
use dynmis::par::Execution;
use dynmis::workload::{Family, WorkloadSpec};
use dynmis::UpdateEvent;

fn spec(n: usize, k: usize, seed: u64) -> WorkloadSpec {
    WorkloadSpec::new(Family::UniformToggle, n, k, seed)
}

#[test]
fn det_sweep_has_no_failures() {
    let out = run(&RunConfig::new(Algo::Det, spec(64, 1000, 1)).verify_every(1)).unwrap();
    assert_eq!(out.row.verify_failures, 0);
    assert_eq!(out.row.k_updates, 1000);
}

#[test]
fn no_updates_returns_every_vertex() {
    for algo in Algo::ALL {
        let out = run(&RunConfig::new(algo, spec(300, 0, 1)).verify_every(1)).unwrap();
        assert_eq!(out.mis.len(), 300, "{algo}");
        assert_eq!(out.row.phases_total, 0, "{algo}");
        assert_eq!(out.row.verify_failures, 0);
        let again = run(&RunConfig::new(algo, spec(300, 0, 1))).unwrap();
        assert_eq!(out.row.work_units, again.row.work_units);
    }
}

#[test]
fn identical_configs_reproduce_everything_but_time() {
    for algo in Algo::ALL {
        let config = RunConfig::new(algo, spec(200, 3000, 7));
        let (a, b) = (run(&config).unwrap(), run(&config).unwrap());
        assert_eq!(a.mis, b.mis);
        let strip = |r: &CsvRow| CsvRow { wall_ns: 0, ..r.clone() };
        assert_eq!(strip(&a.row), strip(&b.row));
    }
}

#[test]
fn recorded_workloads_reject_bad_updates_with_their_index() {
    let config = RunConfig {
        algo: Algo::Det,
        workload: Workload::Recorded {
            label: "file".into(),
            n: 4,
            updates: vec![UpdateEvent::insert(0, 1), UpdateEvent::insert(0, 1)],
        },
        verify_every: 1,
        audit: false,
        seed: 0,
    };
    match run(&config) {
        Err(HarnessError::Graph { index, .. }) => assert_eq!(index, 1),
        other => panic!("{other:?}"),
    }
}

#[test]
fn csv_has_the_fixed_schema() {
    let out = run(&RunConfig::new(Algo::WarmupN23, spec(100, 500, 2))).unwrap();
    let mut buf = Vec::new();
    write_csv([&out.row], &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "algo,family,n,k_updates,seed,work_units,wall_ns,phases_total,ph_th,ph_ti,ph_tl,ph_texp,ph_parent,ph_epoch,max_deltaL,verify_failures"
    );
    let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(fields.len(), 16);
    assert_eq!(&fields[..5], &["warmup", "uniform", "100", "500", "2"]);
    let causes: u64 = fields[8..14].iter().map(|f| f.parse::<u64>().unwrap()).sum();
    assert_eq!(causes, fields[7].parse::<u64>().unwrap());
}

#[test]
fn matrix_is_order_preserving_in_both_modes() {
    let configs: Vec<RunConfig> = [64, 128, 256]
        .into_iter()
        .flat_map(|n| Algo::ALL.map(|a| RunConfig::new(a, spec(n, 4 * n, 3))))
        .collect();
    let strip = |rows: Vec<Result<_, HarnessError>>| -> Vec<CsvRow> {
        rows.into_iter()
            .map(|r: Result<dynmis::harness::RunOutcome, _>| CsvRow { wall_ns: 0, ..r.unwrap().row })
            .collect()
    };
    let par = strip(bench_matrix(&configs, Execution::Parallel));
    let seq = strip(bench_matrix(&configs, Execution::Sequential));
    assert_eq!(par, seq);
    let fits = fit_slopes(&par);
    assert_eq!(fits.len(), 4);
    assert!(fits.iter().all(|f| f.means.len() == 3 && f.slope.is_some()));
}

#[test]
fn bad_rows_do_not_abort_the_matrix() {
    let configs = vec![
        RunConfig::new(Algo::Det, spec(1, 10, 0)),
        RunConfig::new(Algo::Det, spec(10, 10, 0)),
    ];
    let rows = bench_matrix(&configs, Execution::Sequential);
    assert!(rows[0].is_err());
    assert!(rows[1].is_ok());
}
