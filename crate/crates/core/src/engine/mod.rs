//! Search engines and their shared run bookkeeping.
//!
//! The single-trajectory engines mutate the incumbent in place under a
//! checkpoint and roll back rejected offspring, so an iteration costs time
//! proportional to the edit and the fitness evaluation, not the tree size.

mod linear;
mod smo;

pub use linear::{run_linear_gp, run_linear_gp_from, LinearGpConfig, LinearOutcome};
pub use smo::{run_smo_gp, ArchiveMember, ParetoArchive, SmoOutcome};

use std::cmp::Ordering;

use thiserror::Error;

use crate::mutation::{hvl_prime, MutationConfig, MutationCount, MutationError};
use crate::problem::{ErrorValue, Problem};
use crate::rng::RandomSource;
use crate::tree::SyntaxTree;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Acceptance {
    /// Offspring replaces the parent when it is no worse.
    #[default]
    NonStrict,
    /// Offspring replaces the parent only when strictly better.
    Strict,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Parsimony {
    #[default]
    None,
    /// Compare (error, leaf count) lexicographically.
    Lexicographic,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum Termination {
    /// Stop once the problem reports an optimal error.
    #[default]
    Optimum,
    /// Stop once the tree is optimal and has the smallest optimal size.
    MinimalOptimum,
    /// Stop once the error on the current training data is zero.
    SampledErrorZero,
    /// Stop once the error on the current training data is at most the threshold.
    SampledErrorAtMost(f64),
    /// Always use the whole budget.
    BudgetOnly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EngineConfig {
    pub mutation_count: MutationCount,
    pub acceptance: Acceptance,
    pub parsimony: Parsimony,
    pub mutation: MutationConfig,
    /// Maximum number of offspring evaluations.
    pub budget: u64,
    pub termination: Termination,
    /// Record a trajectory point every this many iterations.
    pub trajectory_every: Option<u64>,
}

impl EngineConfig {
    fn with(mutation_count: MutationCount, acceptance: Acceptance, budget: u64) -> Self {
        Self {
            mutation_count,
            acceptance,
            parsimony: Parsimony::None,
            mutation: MutationConfig::default(),
            budget,
            termination: Termination::Optimum,
            trajectory_every: None,
        }
    }

    /// RLS-GP: one HVL-Prime step, accept if no worse.
    pub fn rls_gp(budget: u64) -> Self {
        Self::with(MutationCount::One, Acceptance::NonStrict, budget)
    }

    /// RLS-GP*: one HVL-Prime step, accept only improvements.
    pub fn rls_gp_strict(budget: u64) -> Self {
        Self::with(MutationCount::One, Acceptance::Strict, budget)
    }

    /// (1+1) GP: `1 + Poisson(1)` HVL-Prime steps, accept if no worse.
    pub fn one_plus_one_gp(budget: u64) -> Self {
        Self::with(MutationCount::OnePlusPoisson, Acceptance::NonStrict, budget)
    }

    /// (1+1) GP*: `1 + Poisson(1)` HVL-Prime steps, accept only improvements.
    pub fn one_plus_one_gp_strict(budget: u64) -> Self {
        Self::with(MutationCount::OnePlusPoisson, Acceptance::Strict, budget)
    }

    pub fn parsimony(mut self, p: Parsimony) -> Self {
        self.parsimony = p;
        self
    }

    pub fn termination(mut self, t: Termination) -> Self {
        self.termination = t;
        self
    }

    pub fn mutation(mut self, m: MutationConfig) -> Self {
        self.mutation = m;
        self
    }

    pub fn trajectory_every(mut self, every: u64) -> Self {
        self.trajectory_every = Some(every.max(1));
        self
    }
}

/// Whether a candidate replaces the incumbent. Each side is `(error, leaf count)`.
pub fn accept<E: Ord>(incumbent: (&E, usize), candidate: (&E, usize), config: &EngineConfig) -> bool {
    if config.mutation.size_limit.is_some_and(|limit| candidate.1 > limit) {
        return false;
    }
    let order = match config.parsimony {
        Parsimony::None => candidate.0.cmp(incumbent.0),
        Parsimony::Lexicographic => candidate.0.cmp(incumbent.0).then(candidate.1.cmp(&incumbent.1)),
    };
    match config.acceptance {
        Acceptance::NonStrict => order != Ordering::Greater,
        Acceptance::Strict => order == Ordering::Less,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryPoint {
    pub iteration: u64,
    pub error: f64,
    pub size: usize,
}

/// Summary of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    /// Offspring generated; 0 when the initial solution already satisfied the termination rule.
    pub iterations: u64,
    pub fitness_evals: u64,
    pub row_evals: u64,
    /// Largest leaf count the current solution ever had.
    pub t_max: usize,
    pub final_size: usize,
    pub final_error: f64,
    pub generalization_error: Option<f64>,
    pub success: bool,
    pub seed: u64,
    pub trajectory: Vec<TrajectoryPoint>,
}

#[derive(Clone, Debug)]
pub struct RunOutcome<E> {
    pub record: RunRecord,
    pub tree: SyntaxTree,
    pub error: E,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Mutation(#[from] MutationError),
    #[error("{0}")]
    Invalid(String),
}

pub(crate) fn termination_reached<P: Problem>(
    problem: &P,
    termination: Termination,
    error: &P::Error,
    tree: &SyntaxTree,
) -> bool {
    match termination {
        Termination::Optimum => problem.is_optimal(error),
        Termination::MinimalOptimum => {
            problem.is_optimal(error) && problem.minimal_optimal_size() == Some(tree.leaf_count())
        }
        Termination::SampledErrorZero => error.is_zero(),
        Termination::SampledErrorAtMost(threshold) => error.to_f64() <= threshold,
        Termination::BudgetOnly => false,
    }
}

/// Shared loop of RLS-GP, RLS-GP*, (1+1) GP and (1+1) GP*.
pub fn run_one_plus_one<P: Problem>(
    problem: &mut P,
    config: &EngineConfig,
    initial: SyntaxTree,
    rng: &mut RandomSource,
) -> Result<RunOutcome<P::Error>, EngineError> {
    config.mutation.validate(problem.symbols())?;
    let mut tree = initial;
    let rows = problem.rows_per_evaluation();
    let mut record = RunRecord {
        iterations: 0,
        fitness_evals: 0,
        row_evals: 0,
        t_max: tree.leaf_count(),
        final_size: 0,
        final_error: 0.0,
        generalization_error: None,
        success: false,
        seed: rng.seed(),
        trajectory: Vec::new(),
    };
    problem.resample(rng);
    let mut error = problem.evaluate(&tree);
    record.fitness_evals += 1;
    record.row_evals = record.row_evals.saturating_add(rows);
    let mut done = termination_reached(problem, config.termination, &error, &tree);
    if config.trajectory_every.is_some() {
        record.trajectory.push(TrajectoryPoint {
            iteration: 0,
            error: error.to_f64(),
            size: tree.leaf_count(),
        });
    }
    let symbols = problem.symbols().clone();
    while !done && record.iterations < config.budget {
        record.iterations += 1;
        if problem.resample(rng) {
            error = problem.evaluate(&tree);
            record.fitness_evals += 1;
            record.row_evals = record.row_evals.saturating_add(rows);
        }
        let k = config.mutation_count.sample(rng);
        let parent_size = tree.leaf_count();
        tree.checkpoint();
        for _ in 0..k {
            hvl_prime(&mut tree, &symbols, &config.mutation, rng);
        }
        let size = tree.leaf_count();
        let over_limit = config.mutation.size_limit.is_some_and(|limit| size > limit);
        let mut accepted = false;
        if !over_limit {
            let candidate = problem.evaluate(&tree);
            record.fitness_evals += 1;
            record.row_evals = record.row_evals.saturating_add(rows);
            if accept((&error, parent_size), (&candidate, size), config) {
                error = candidate;
                accepted = true;
            }
        }
        if accepted {
            tree.commit();
            record.t_max = record.t_max.max(tree.leaf_count());
        } else {
            tree.rollback();
        }
        done = termination_reached(problem, config.termination, &error, &tree);
        if let Some(every) = config.trajectory_every {
            if record.iterations.is_multiple_of(every) || done {
                record.trajectory.push(TrajectoryPoint {
                    iteration: record.iterations,
                    error: error.to_f64(),
                    size: tree.leaf_count(),
                });
            }
        }
    }
    record.success = match config.termination {
        Termination::BudgetOnly => problem.is_optimal(&error),
        _ => done,
    };
    record.final_size = tree.leaf_count();
    record.final_error = error.to_f64();
    record.generalization_error = problem.generalization_error(&tree, rng);
    Ok(RunOutcome { record, tree, error })
}
