//! SMO-GP: a population of mutually non-dominated (error, size) trade-offs.

use crate::mutation::hvl_prime;
use crate::problem::{ErrorValue, Problem};
use crate::rng::RandomSource;
use crate::tree::SyntaxTree;

use super::{EngineConfig, EngineError, RunRecord, TrajectoryPoint};

#[derive(Clone, Debug)]
pub struct ArchiveMember<E> {
    pub tree: SyntaxTree,
    pub error: E,
    pub size: usize,
}

/// Non-dominated set under (error, leaf count), both minimised.
#[derive(Clone, Debug)]
pub struct ParetoArchive<E> {
    members: Vec<ArchiveMember<E>>,
}

impl<E> Default for ParetoArchive<E> {
    fn default() -> Self {
        Self { members: Vec::new() }
    }
}

fn weakly_dominates<E: Ord>(a: (&E, usize), b: (&E, usize)) -> bool {
    a.0 <= b.0 && a.1 <= b.1
}

fn strictly_dominates<E: Ord>(a: (&E, usize), b: (&E, usize)) -> bool {
    weakly_dominates(a, b) && (a.0 < b.0 || a.1 < b.1)
}

impl<E: Ord + Clone> ParetoArchive<E> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn members(&self) -> &[ArchiveMember<E>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Inserts the candidate unless a member strictly dominates it; members
    /// the candidate weakly dominates are dropped. Returns whether it was kept.
    pub fn offer(&mut self, candidate: ArchiveMember<E>) -> bool {
        let c = (&candidate.error, candidate.size);
        if self.members.iter().any(|m| strictly_dominates((&m.error, m.size), c)) {
            return false;
        }
        self.members.retain(|m| !weakly_dominates(c, (&m.error, m.size)));
        self.members.push(candidate);
        true
    }

    /// No member weakly dominates another, so errors (and sizes) are pairwise distinct.
    pub fn check_invariants(&self) -> Result<(), String> {
        for (i, a) in self.members.iter().enumerate() {
            if a.tree.leaf_count() != a.size {
                return Err(format!("member {i} records size {} but has {} leaves", a.size, a.tree.leaf_count()));
            }
            for (j, b) in self.members.iter().enumerate() {
                if i != j && weakly_dominates((&a.error, a.size), (&b.error, b.size)) {
                    return Err(format!("member {i} dominates member {j}"));
                }
            }
        }
        Ok(())
    }

    /// Every point of `front` is present with exactly that (error, size).
    pub fn covers(&self, front: &[(E, usize)]) -> bool {
        front
            .iter()
            .all(|(e, s)| self.members.iter().any(|m| &m.error == e && m.size == *s))
    }
}

#[derive(Clone, Debug)]
pub struct SmoOutcome<E> {
    pub record: RunRecord,
    pub archive: ParetoArchive<E>,
}

/// Runs SMO-GP until the archive equals the problem's known Pareto front or
/// the budget is spent. `observer` sees the archive after every iteration.
pub fn run_smo_gp<P: Problem>(
    problem: &mut P,
    config: &EngineConfig,
    initial: SyntaxTree,
    rng: &mut RandomSource,
    mut observer: impl FnMut(u64, &ParetoArchive<P::Error>),
) -> Result<SmoOutcome<P::Error>, EngineError> {
    config.mutation.validate(problem.symbols())?;
    let front = problem.pareto_front();
    let rows = problem.rows_per_evaluation();
    let symbols = problem.symbols().clone();
    let mut archive = ParetoArchive::new();
    let initial_error = problem.evaluate(&initial);
    let mut record = RunRecord {
        iterations: 0,
        fitness_evals: 1,
        row_evals: rows,
        t_max: initial.leaf_count(),
        final_size: 0,
        final_error: 0.0,
        generalization_error: None,
        success: false,
        seed: rng.seed(),
        trajectory: Vec::new(),
    };
    archive.offer(ArchiveMember {
        size: initial.leaf_count(),
        tree: initial,
        error: initial_error,
    });
    observer(0, &archive);
    let covered = |a: &ParetoArchive<P::Error>| front.as_ref().is_some_and(|f| a.covers(f));
    let mut done = covered(&archive);
    while !done && record.iterations < config.budget {
        record.iterations += 1;
        let parent = &archive.members()[rng.index(archive.len())];
        let mut child = parent.tree.clone();
        let k = config.mutation_count.sample(rng);
        for _ in 0..k {
            hvl_prime(&mut child, &symbols, &config.mutation, rng);
        }
        let size = child.leaf_count();
        if config.mutation.size_limit.is_none_or(|limit| size <= limit) {
            let error = problem.evaluate(&child);
            record.fitness_evals += 1;
            record.row_evals = record.row_evals.saturating_add(rows);
            if archive.offer(ArchiveMember { tree: child, error, size }) {
                record.t_max = record.t_max.max(size);
            }
        }
        observer(record.iterations, &archive);
        done = covered(&archive);
        if let Some(every) = config.trajectory_every {
            if record.iterations.is_multiple_of(every) || done {
                let best = archive.members().iter().min_by(|a, b| a.error.cmp(&b.error)).expect("non-empty");
                record.trajectory.push(TrajectoryPoint {
                    iteration: record.iterations,
                    error: best.error.to_f64(),
                    size: best.size,
                });
            }
        }
    }
    let best = archive.members().iter().min_by(|a, b| a.error.cmp(&b.error)).expect("non-empty");
    record.success = done;
    record.final_error = best.error.to_f64();
    record.final_size = best.size;
    Ok(SmoOutcome { record, archive })
}
