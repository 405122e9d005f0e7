use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use dynmis::harness::{self, Algo, CsvRow, RunConfig, RunOutcome, Workload};
use dynmis::par::Execution;
use dynmis::workload::{self, Family, WorkloadSpec};

/// Fully dynamic maximal independent set: workloads, runs and scaling sweeps.
#[derive(Parser)]
#[command(name = "dynmis", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an update sequence and write it in the text format.
    Gen {
        #[command(flatten)]
        workload: WorkloadArgs,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one algorithm over one workload and emit a CSV row.
    Run {
        #[arg(long, default_value = "det")]
        algo: Algo,
        #[command(flatten)]
        workload: WorkloadArgs,
        /// Replay this update file instead of generating a workload.
        #[arg(long, conflicts_with = "family")]
        input: Option<PathBuf>,
        /// Verify the MIS after every V-th update; 0 disables.
        #[arg(long, default_value_t = 0)]
        verify_every: usize,
        /// Also run the internal audits at every verification point.
        #[arg(long)]
        audit: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a matrix of algorithms, families, sizes and seeds.
    Bench {
        /// Comma-separated algorithms.
        #[arg(long, value_delimiter = ',', default_value = "det,warmup,m13,sqrtn")]
        algo: Vec<Algo>,
        /// Comma-separated family specs.
        #[arg(long, value_delimiter = ',', default_value = "uniform")]
        family: Vec<String>,
        /// Comma-separated vertex counts.
        #[arg(long, value_delimiter = ',', default_value = "256,512,1024")]
        n: Vec<usize>,
        /// Updates per run; 50·n when omitted.
        #[arg(long)]
        k: Option<usize>,
        /// First seed; seeds run from here upwards.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        verify_every: usize,
        /// Run trials one after another instead of on the thread pool.
        #[arg(long)]
        sequential: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay an update file with verification after every update.
    Verify {
        file: PathBuf,
        /// Comma-separated algorithms.
        #[arg(long, value_delimiter = ',', default_value = "det,warmup,m13,sqrtn")]
        algo: Vec<Algo>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct WorkloadArgs {
    /// uniform, er[:P], window[:W], hub[:SIZE:FRACTION] or clique[:K].
    #[arg(long)]
    family: Option<String>,
    #[arg(long, default_value_t = 256)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl WorkloadArgs {
    fn spec(&self) -> Result<WorkloadSpec> {
        let family = Family::parse(self.family.as_deref().unwrap_or("uniform"), self.n)?;
        let spec = WorkloadSpec::new(family, self.n, self.k, self.seed);
        spec.validate()?;
        Ok(spec)
    }
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn load(path: &Path) -> Result<Workload> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let (n, updates) = workload::read_updates(BufReader::new(file))
        .with_context(|| format!("cannot parse {}", path.display()))?;
    workload::check_well_formed(n, &updates)?;
    let label = path
        .file_name()
        .map_or_else(|| "file".into(), |s| s.to_string_lossy().into_owned());
    Ok(Workload::Recorded { label, n, updates })
}

fn report(outcomes: &[RunOutcome]) -> u64 {
    let mut bad = 0;
    for o in outcomes {
        for f in &o.failures {
            eprintln!("{} {} n={} seed={}: {f}", o.row.algo, o.row.family, o.row.n, o.row.seed);
        }
        bad += o.row.verify_failures + o.audit_failures;
    }
    bad
}

fn write_rows(outcomes: &[RunOutcome], out: Option<&Path>) -> Result<()> {
    let rows: Vec<&CsvRow> = outcomes.iter().map(|o| &o.row).collect();
    harness::write_csv(rows, sink(out)?)?;
    Ok(())
}

/// Runs every config, reporting per-row errors without stopping.
fn run_all(configs: &[RunConfig], exec: Execution) -> (Vec<RunOutcome>, usize) {
    let mut errors = 0;
    let mut done = Vec::new();
    for (config, result) in configs.iter().zip(harness::bench_matrix(configs, exec)) {
        match result {
            Ok(outcome) => done.push(outcome),
            Err(e) => {
                errors += 1;
                eprintln!("{} {}: {e}", config.algo, config.workload.label());
            }
        }
    }
    (done, errors)
}

fn execute(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen { workload, out } => {
            let spec = workload.spec()?;
            let updates = workload::generate(&spec)?;
            workload::write_updates(spec.n, &updates, sink(out.as_deref())?)?;
            Ok(true)
        }
        Command::Run {
            algo,
            workload,
            input,
            verify_every,
            audit,
            out,
        } => {
            let config = RunConfig {
                algo,
                workload: match input {
                    Some(path) => load(&path)?,
                    None => Workload::Generated(workload.spec()?),
                },
                verify_every,
                audit,
                seed: workload.seed,
            };
            let outcome = harness::run(&config)?;
            let outcomes = [outcome];
            write_rows(&outcomes, out.as_deref())?;
            Ok(report(&outcomes) == 0)
        }
        Command::Bench {
            algo,
            family,
            n,
            k,
            seed,
            seeds,
            verify_every,
            sequential,
            out,
        } => {
            if algo.is_empty() || family.is_empty() || n.is_empty() {
                bail!("bench needs at least one algorithm, family and size");
            }
            let mut configs = Vec::new();
            for &size in &n {
                for name in &family {
                    let fam = Family::parse(name, size)?;
                    for &a in &algo {
                        for s in seed..seed + seeds {
                            let spec = WorkloadSpec::new(fam, size, k.unwrap_or(50 * size), s);
                            configs.push(RunConfig::new(a, spec).verify_every(verify_every));
                        }
                    }
                }
            }
            let exec = if sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            };
            let (outcomes, errors) = run_all(&configs, exec);
            write_rows(&outcomes, out.as_deref())?;
            let rows: Vec<CsvRow> = outcomes.iter().map(|o| o.row.clone()).collect();
            for fit in harness::fit_slopes(&rows) {
                let slope = fit.slope.map_or("n/a".to_string(), |s| format!("{s:.3}"));
                eprintln!("slope {} {}: {slope}", fit.algo, fit.family);
            }
            Ok(report(&outcomes) == 0 && errors == 0)
        }
        Command::Verify {
            file,
            algo,
            seed,
            out,
        } => {
            let workload = load(&file)?;
            let configs: Vec<RunConfig> = algo
                .iter()
                .map(|&a| RunConfig {
                    algo: a,
                    workload: workload.clone(),
                    verify_every: 1,
                    audit: true,
                    seed,
                })
                .collect();
            let (outcomes, errors) = run_all(&configs, Execution::Sequential);
            write_rows(&outcomes, out.as_deref())?;
            Ok(report(&outcomes) == 0 && errors == 0)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
