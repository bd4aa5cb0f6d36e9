use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use gplab_bench::output::{canonical_sort, read_rows, CsvRow, CsvSink};
use gplab_bench::runner::{engine_config, run_trial_with_tree};
use gplab_bench::stats::{fit_scaling, summarize, Observation};
use gplab_bench::{demo_config, load_config, observations, run_experiment, Growth};

#[derive(Parser)]
#[command(name = "gplab", version, about = "Run and analyse genetic programming runtime experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute an experiment described by a TOML config.
    Run {
        config: PathBuf,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
        /// Override the config's base seed.
        #[arg(long)]
        seed: Option<u64>,
        /// CSV destination; defaults to the config's `output` or stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write rows in canonical order after all trials finish instead of streaming.
        #[arg(long)]
        sorted: bool,
        /// Scaling bound for the summary printed to stderr.
        #[arg(long, default_value = "n ln n")]
        bound: String,
    },
    /// Fit a scaling bound to a results CSV.
    Analyze {
        csv: PathBuf,
        /// Growth expression or alias (n, nlogn, n2, n2logn, n3).
        #[arg(long)]
        bound: String,
    },
    /// Check a config file without running it.
    Validate { config: PathBuf },
    /// Run one verbose trial of a built-in setup.
    Demo {
        problem: String,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            config,
            parallelism,
            seed,
            out,
            sorted,
            bound,
        } => {
            let mut config = load_config(&config)?;
            if let Some(s) = seed {
                config.seed = s;
            }
            let bound = Growth::parse_bound(&bound)?;
            let dest = out.or_else(|| config.output.clone());
            let writer: Box<dyn Write + Send> = match &dest {
                Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
                None => Box::new(io::stdout()),
            };
            let sink = std::sync::Mutex::new(CsvSink::new(writer));
            let records = run_experiment(&config, parallelism, |rec| {
                if let Some(f) = &rec.failure {
                    eprintln!("trial n={} #{} failed: {f}", rec.n, rec.trial);
                }
                if !sorted {
                    let _ = sink.lock().unwrap().write(rec);
                }
            });
            let mut sink = sink.into_inner().unwrap();
            if sorted {
                for rec in &records {
                    sink.write(rec)?;
                }
            }
            sink.finish()?;
            let obs = observations(&config, &records);
            match fit_scaling(&obs, &bound) {
                Ok(fit) => eprintln!("{fit}"),
                Err(_) => {
                    for s in summarize(&obs, &bound) {
                        eprintln!(
                            "n={} success {}/{} mean {:.1} median {:.1}",
                            s.n, s.successes, s.trials, s.mean, s.median
                        );
                    }
                }
            }
            if records.iter().any(|r| r.failure.is_some()) {
                bail!("some trials could not be run");
            }
            Ok(())
        }
        Command::Analyze { csv, bound } => {
            let bound = Growth::parse_bound(&bound)?;
            let file = File::open(&csv).with_context(|| format!("opening {}", csv.display()))?;
            let mut rows = read_rows(file)?;
            canonical_sort(&mut rows);
            let mut groups: Vec<Vec<CsvRow>> = Vec::new();
            for row in rows {
                match groups.last_mut() {
                    Some(g) if (&g[0].problem, &g[0].params, &g[0].engine) == (&row.problem, &row.params, &row.engine) => g.push(row),
                    _ => groups.push(vec![row]),
                }
            }
            if groups.is_empty() {
                bail!("{} has no rows", csv.display());
            }
            for g in groups {
                let obs: Vec<Observation> = g
                    .iter()
                    .map(|r| Observation {
                        n: r.n,
                        scale: if r.problem == "max" { ((1u128 << (r.n + 1)) - 1) as f64 } else { r.n as f64 },
                        iterations: r.iterations as f64,
                        success: r.success,
                    })
                    .collect();
                println!("{} [{}] {}", g[0].problem, g[0].params, g[0].engine);
                println!("{}\n", fit_scaling(&obs, &bound)?);
            }
            Ok(())
        }
        Command::Validate { config } => {
            let c = load_config(&config)?;
            println!(
                "ok: {} with {} over n = {:?}, {} trials each",
                c.problem.name(),
                c.engine.name(),
                c.n,
                c.trials
            );
            Ok(())
        }
        Command::Demo { problem, n, seed } => {
            let mut config = demo_config(&problem, n, seed)?;
            let budget = config.budget_for(n);
            config.trajectory_every = Some((budget / 20).max(1));
            println!("{}", config.to_toml());
            println!("engine: {:?}\n", engine_config(&config, n).mutation_count);
            let (rec, tree) = run_trial_with_tree(&config, n, 0);
            if let Some(f) = rec.failure {
                bail!(f);
            }
            let r = &rec.record;
            for p in &r.trajectory {
                println!("iteration {:>10}  error {:>14.6}  size {:>6}", p.iteration, p.error, p.size);
            }
            println!(
                "\nsuccess {} after {} iterations ({} evaluations), final size {}, largest size {}, final error {}",
                r.success, r.iterations, r.fitness_evals, r.final_size, r.t_max, r.final_error
            );
            if let Some(g) = r.generalization_error {
                println!("generalization error {g}");
            }
            if let Some(t) = tree {
                if t.leaf_count() <= 200 {
                    println!("final tree: {t}");
                }
            }
            Ok(())
        }
    }
}
