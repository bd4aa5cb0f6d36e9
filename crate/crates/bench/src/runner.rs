//! Seeded trial sweeps.

use std::sync::Mutex;

use rayon::prelude::*;

use gplab_core::boolean::{BitRow, BooleanTarget, CanonicalSet, LabelledRow, TrainingMode, TrainingSet};
use gplab_core::engine::{
    run_linear_gp, run_one_plus_one, run_smo_gp, EngineConfig, LinearGpConfig, Parsimony, RunRecord, Termination,
};
use gplab_core::gsgp::{generate_dnf_target, run_gsgp_fit, FitTarget, MutationScheme, TrackedRows};
use gplab_core::max::MaxSpec;
use gplab_core::mutation::{
    build_random_tree, DeletionMode, EmptyTreeRule, InsertionMode, MutationConfig, RootDeletion, SubOperation,
    SubstitutionMode,
};
use gplab_core::problem::{
    BooleanProblem, MajorityProblem, MajorityVariant, MaxProblem, OrderProblem, Problem, SortingProblem,
};
use gplab_core::rng::{derive_seed, RandomSource};
use gplab_core::structural::{SortMeasure, WeightVector};
use gplab_core::{Function, SyntaxTree};

use crate::config::*;

/// One finished trial with the identifiers that go into the CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub problem: String,
    pub n: usize,
    pub params: String,
    pub engine: String,
    pub trial: u32,
    pub seed: u64,
    pub record: RunRecord,
    /// Set when the trial could not be run; the record is then empty.
    pub failure: Option<String>,
}

fn empty_record(seed: u64) -> RunRecord {
    RunRecord {
        iterations: 0,
        fitness_evals: 0,
        row_evals: 0,
        t_max: 0,
        final_size: 0,
        final_error: f64::NAN,
        generalization_error: None,
        success: false,
        seed,
        trajectory: Vec::new(),
    }
}

pub fn engine_config(config: &ExperimentConfig, n: usize) -> EngineConfig {
    let budget = config.budget_for(n);
    let base = match config.engine {
        EngineKind::RlsGp => EngineConfig::rls_gp(budget),
        EngineKind::RlsGpStrict => EngineConfig::rls_gp_strict(budget),
        EngineKind::OnePlusOneGpStrict => EngineConfig::one_plus_one_gp_strict(budget),
        _ => EngineConfig::one_plus_one_gp(budget),
    };
    let parsimony = match config.parsimony {
        ParsimonyKind::None => Parsimony::None,
        ParsimonyKind::Lexicographic => Parsimony::Lexicographic,
    };
    let termination = match config.termination {
        TerminationKind::Optimum => Termination::Optimum,
        TerminationKind::MinimalOptimum => Termination::MinimalOptimum,
        TerminationKind::SampledErrorZero => Termination::SampledErrorZero,
        TerminationKind::BudgetOnly => Termination::BudgetOnly,
    };
    let m = &config.mutation;
    let mutation = MutationConfig {
        operations: m
            .operations
            .iter()
            .map(|o| match o {
                OperationName::Insert => SubOperation::Insert,
                OperationName::Delete => SubOperation::Delete,
                OperationName::Substitute => SubOperation::Substitute,
            })
            .collect(),
        substitution: match m.substitution {
            SubstitutionName::SelfExcluded => SubstitutionMode::SelfExcluded,
            SubstitutionName::SelfAllowed => SubstitutionMode::SelfAllowed,
        },
        deletion: match m.deletion {
            DeletionName::Leaf => DeletionMode::Leaf,
            DeletionName::Subtree => DeletionMode::Subtree,
        },
        insertion: match m.insertion {
            InsertionName::UniformNode => InsertionMode::UniformNode,
            InsertionName::DepthWeightedLeaf => InsertionMode::DepthWeightedLeaf,
        },
        size_limit: m.size_limit.as_ref().map(|g| g.eval_ceil(config.scale(n)) as usize),
        empty_tree: match m.empty_tree {
            EmptyTreeName::AnyOperation => EmptyTreeRule::AnyOperation,
            EmptyTreeName::InsertionOnly => EmptyTreeRule::InsertionOnly,
        },
        root_deletion: match m.root_deletion {
            RootDeletionName::Empty => RootDeletion::Empty,
            RootDeletionName::NoOp => RootDeletion::NoOp,
        },
    };
    let mut engine = base.parsimony(parsimony).termination(termination).mutation(mutation);
    if let Some(every) = config.trajectory_every {
        engine = engine.trajectory_every(every);
    }
    engine
}

fn run_tree_problem<P: Problem>(
    problem: &mut P,
    config: &ExperimentConfig,
    n: usize,
    rng: &mut RandomSource,
) -> Result<(RunRecord, Option<SyntaxTree>), String> {
    let engine = engine_config(config, n);
    let t_init = config.t_init.eval_ceil(config.scale(n)) as usize;
    let initial = if t_init == 0 {
        SyntaxTree::new()
    } else {
        build_random_tree(t_init, problem.symbols(), rng)
    };
    if config.engine == EngineKind::SmoGp {
        let out = run_smo_gp(problem, &engine, initial, rng, |_, _| {}).map_err(|e| e.to_string())?;
        return Ok((out.record, None));
    }
    let out = run_one_plus_one(problem, &engine, initial, rng).map_err(|e| e.to_string())?;
    Ok((out.record, Some(out.tree)))
}

fn growth_param(g: &Option<crate::growth::Growth>, scale: f64, what: &str) -> Result<usize, String> {
    g.as_ref()
        .map(|g| g.eval_ceil(scale) as usize)
        .ok_or_else(|| format!("missing params.{what}"))
}

fn boolean_target(config: &ExperimentConfig, n: usize) -> Result<BooleanTarget, String> {
    let p = &config.params;
    Ok(match p.target {
        Some(TargetName::And) | None => BooleanTarget::And,
        Some(TargetName::Xor) => BooleanTarget::Xor,
        Some(TargetName::AndPrefix) => BooleanTarget::and_prefix(growth_param(&p.target_vars, n as f64, "target_vars")?),
    })
}

/// Runs one trial and also returns the final tree for tree-based engines.
pub fn run_trial_with_tree(config: &ExperimentConfig, n: usize, trial: u32) -> (TrialRecord, Option<SyntaxTree>) {
    let seed = derive_seed(config.seed, n as u64, trial as u64);
    let mut rng = RandomSource::new(seed);
    let result = execute(config, n, &mut rng);
    let (record, tree, failure) = match result {
        Ok((r, t)) => (r, t, None),
        Err(e) => (empty_record(seed), None, Some(e)),
    };
    (
        TrialRecord {
            problem: config.problem.name().to_string(),
            n,
            params: config.params_label(),
            engine: config.engine.name().to_string(),
            trial,
            seed,
            record,
            failure,
        },
        tree,
    )
}

pub fn run_trial(config: &ExperimentConfig, n: usize, trial: u32) -> TrialRecord {
    run_trial_with_tree(config, n, trial).0
}

fn execute(config: &ExperimentConfig, n: usize, rng: &mut RandomSource) -> Result<(RunRecord, Option<SyntaxTree>), String> {
    let p = &config.params;
    let scale = config.scale(n);
    let weights = match p.weights {
        Some(WeightsName::Linear) => Some(WeightVector::linear(n)),
        _ => None,
    };
    let err = |e: &dyn std::fmt::Display| e.to_string();
    match config.problem {
        ProblemKind::Order => run_tree_problem(&mut OrderProblem::new(n, weights).map_err(|e| err(&e))?, config, n, rng),
        ProblemKind::Majority => {
            let mut prob = MajorityProblem::new(n, MajorityVariant::Plain(weights)).map_err(|e| err(&e))?;
            run_tree_problem(&mut prob, config, n, rng)
        }
        ProblemKind::PlusCMajority => {
            let c = p.c.ok_or("missing params.c")?;
            let mut prob = MajorityProblem::new(n, MajorityVariant::PlusC(c)).map_err(|e| err(&e))?;
            run_tree_problem(&mut prob, config, n, rng)
        }
        ProblemKind::Supermajority => {
            let mut prob = MajorityProblem::new(n, MajorityVariant::SuperMajority).map_err(|e| err(&e))?;
            run_tree_problem(&mut prob, config, n, rng)
        }
        ProblemKind::Sorting => {
            let measure = match p.measure.ok_or("missing params.measure")? {
                MeasureName::Inv => SortMeasure::Inv,
                MeasureName::Ham => SortMeasure::Ham,
                MeasureName::Run => SortMeasure::Run,
                MeasureName::Las => SortMeasure::Las,
                MeasureName::Exc => SortMeasure::Exc,
            };
            run_tree_problem(&mut SortingProblem::new(n, measure), config, n, rng)
        }
        ProblemKind::Max => {
            let instance = MaxSpec::new(p.constant.unwrap_or(1.0), n, vec![Function::Add, Function::Mul]).map_err(|e| err(&e))?;
            run_tree_problem(&mut MaxProblem::new(instance), config, n, rng)
        }
        ProblemKind::Boolean => {
            let target = boolean_target(config, n)?;
            let functions: Vec<Function> = match &p.functions {
                Some(f) => f
                    .iter()
                    .map(|f| match f {
                        FunctionName::And => Function::And,
                        FunctionName::Or => Function::Or,
                        FunctionName::Xor => Function::Xor,
                    })
                    .collect(),
                None if target == BooleanTarget::Xor => vec![Function::Xor],
                None => vec![Function::And],
            };
            let mut prob = match p.training {
                TrainingName::Minimal | TrainingName::Padded => {
                    let variant = if p.training == TrainingName::Minimal { CanonicalSet::Minimal } else { CanonicalSet::Padded };
                    let set = TrainingSet::canonical(n, variant).relabel(&target).map_err(|e| err(&e))?;
                    BooleanProblem::with_training_set(target, &set, functions, p.negations).map_err(|e| err(&e))?
                }
                training => {
                    let mode = match training {
                        TrainingName::Static => TrainingMode::Static(growth_param(&p.sample_size, scale, "sample_size")?),
                        TrainingName::Dynamic => TrainingMode::Dynamic(growth_param(&p.sample_size, scale, "sample_size")?),
                        _ => TrainingMode::Complete,
                    };
                    BooleanProblem::new(n, target, functions, p.negations, mode, rng).map_err(|e| err(&e))?
                }
            };
            let (mut record, tree) = run_tree_problem(&mut prob, config, n, rng)?;
            if let Some(tree) = &tree {
                record.generalization_error = prob.generalization_error(tree, rng);
            }
            Ok((record, tree))
        }
        ProblemKind::Identification => {
            let lin = LinearGpConfig {
                n,
                sample_size: growth_param(&p.sample_size, scale, "sample_size")?,
                delta: p.delta.unwrap_or(1.0),
                budget: config.budget_for(n),
            };
            Ok((run_linear_gp(&lin, rng).record, None))
        }
        ProblemKind::GsgpFit | ProblemKind::GsgpDnf => {
            let v = || growth_param(&p.block, scale, "block").map(|v| v.clamp(1, n));
            let scheme = match p.scheme.ok_or("missing params.scheme")? {
                SchemeName::Full => MutationScheme::Full,
                SchemeName::Fbm => MutationScheme::Fbm(v()?),
                SchemeName::Fabm => MutationScheme::Fabm(v()?),
                SchemeName::Vbm => MutationScheme::Vbm(v()?),
                SchemeName::Msbm => MutationScheme::Msbm { allow_empty: true },
            };
            let target = if config.problem == ProblemKind::GsgpDnf {
                let terms = growth_param(&p.terms, scale, "terms")?;
                let dnf = generate_dnf_target(n, terms, p.width.ok_or("missing params.width")?, rng).map_err(|e| err(&e))?;
                let rows = TrackedRows::complete(n).map_err(|e| err(&e))?;
                dnf.fit_target(rows.into())
            } else {
                let size = growth_param(&p.sample_size, scale, "sample_size")?;
                let rows: Vec<LabelledRow> = (0..size)
                    .map(|_| {
                        let inputs = BitRow::random(n, rng);
                        let target = match p.target {
                            None => rng.coin(),
                            Some(_) => boolean_target(config, n).map(|t| t.eval(&inputs)).unwrap_or(false),
                        };
                        LabelledRow { inputs, target }
                    })
                    .collect();
                let set = TrainingSet::new(n, rows).map_err(|e| err(&e))?;
                FitTarget::from_training_set(&set).map_err(|e| err(&e))?
            };
            let out = run_gsgp_fit(&target, &scheme, config.budget_for(n), rng).map_err(|e| err(&e))?;
            Ok((out.record, None))
        }
    }
}

/// Runs every (size, trial) pair on a pool of `parallelism` threads. `sink`
/// sees each record as it completes; the returned list is in canonical
/// (size, trial) order regardless of scheduling.
pub fn run_experiment(
    config: &ExperimentConfig,
    parallelism: usize,
    sink: impl Fn(&TrialRecord) + Sync,
) -> Vec<TrialRecord> {
    let jobs: Vec<(usize, u32)> = config
        .n
        .iter()
        .flat_map(|&n| (0..config.trials).map(move |t| (n, t)))
        .collect();
    let guard = Mutex::new(());
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .expect("thread pool");
    let mut records: Vec<TrialRecord> = pool.install(|| {
        jobs.par_iter()
            .map(|&(n, trial)| {
                let rec = run_trial(config, n, trial);
                let _lock = guard.lock().unwrap_or_else(|e| e.into_inner());
                sink(&rec);
                rec
            })
            .collect()
    });
    let order = |n: usize| config.n.iter().position(|&m| m == n).unwrap_or(usize::MAX);
    records.sort_by_key(|r| (order(r.n), r.trial));
    records
}
