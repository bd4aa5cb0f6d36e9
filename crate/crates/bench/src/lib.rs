//! Experiment harness: configuration files, seeded parallel sweeps, CSV
//! records and scaling-law summaries on top of `gplab-core`.

pub mod config;
pub mod growth;
pub mod output;
pub mod runner;
pub mod stats;

pub use config::{load_config, ConfigError, ExperimentConfig, ProblemKind};
pub use growth::Growth;
pub use runner::{run_experiment, run_trial, TrialRecord};
pub use stats::{fit_scaling, Observation, ScalingFit};

/// Observations for scaling fits from finished trials.
pub fn observations(config: &ExperimentConfig, records: &[TrialRecord]) -> Vec<Observation> {
    records
        .iter()
        .map(|r| Observation {
            n: r.n,
            scale: config.scale(r.n),
            iterations: r.record.iterations as f64,
            success: r.record.success,
        })
        .collect()
}

/// Ready-made single-size configuration used by the `demo` command.
pub fn demo_config(problem: &str, n: usize, seed: u64) -> Result<ExperimentConfig, ConfigError> {
    let body = match problem {
        "order" => "problem = \"order\"\nengine = \"rls-gp-strict\"\nbudget = \"100 n^2\"",
        "majority" => "problem = \"majority\"\nengine = \"rls-gp\"\nt_init = \"2n\"\nbudget = \"100 (2n ln(2n) + n ln^3 n)\"",
        "sorting" => "problem = \"sorting\"\nengine = \"rls-gp-strict\"\nbudget = \"100 n^4\"\n[params]\nmeasure = \"INV\"",
        "max" => "problem = \"max\"\nengine = \"rls-gp\"\nbudget = \"100 n ln n\"\n[params]\nconstant = 1.0",
        "and" => "problem = \"boolean\"\nengine = \"rls-gp-strict\"\nbudget = \"100 n ln n\"\n[params]\ntarget = \"and\"",
        "xor" => "problem = \"boolean\"\nengine = \"rls-gp\"\nbudget = \"1e5\"\n[params]\ntarget = \"xor\"",
        "identification" => {
            "problem = \"identification\"\nengine = \"linear-gp\"\nbudget = \"40 n^2\"\n[params]\nsample_size = \"2 n ln n\"\ndelta = 1.0"
        }
        "gsgp" => {
            "problem = \"gsgp-fit\"\nengine = \"gsgp\"\nbudget = \"100 n^3\"\n[params]\nscheme = \"fbm\"\nblock = \"2.5 lg n\"\nsample_size = \"n\""
        }
        other => {
            return Err(ConfigError::Invalid(format!(
                "unknown demo problem {other:?}; try order, majority, sorting, max, and, xor, identification or gsgp"
            )))
        }
    };
    let (head, params) = body.split_once("[params]").unwrap_or((body, ""));
    let text = format!(
        "{head}\nn = [{n}]\ntrials = 1\nseed = {seed}\n{}",
        if params.is_empty() { String::new() } else { format!("[params]{params}") }
    );
    ExperimentConfig::from_toml(&text)
}
