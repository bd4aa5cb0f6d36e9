//! Mutation-only GSGP hill climbing on a fixed set of labelled rows.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::seq::index::sample;

use super::{GsgpError, GsgpIndividual, Minterm, MutationScheme, TrackedRows};
use crate::boolean::{BitRow, TrainingSet};
use crate::engine::RunRecord;
use crate::rng::RandomSource;

/// Tracked rows with the output each must take.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FitTarget {
    rows: Arc<TrackedRows>,
    targets: Vec<u64>,
}

impl FitTarget {
    pub fn new(rows: Arc<TrackedRows>, f: impl FnMut(&BitRow) -> bool) -> Self {
        let targets = rows.mask_of(f);
        Self { rows, targets }
    }

    /// Every assignment of `n` variables labelled by `f`.
    pub fn complete(n: usize, f: impl FnMut(&BitRow) -> bool) -> Result<Self, GsgpError> {
        Ok(Self::new(Arc::new(TrackedRows::complete(n)?), f))
    }

    pub fn from_training_set(set: &TrainingSet) -> Result<Self, GsgpError> {
        let inputs: Vec<BitRow> = set.rows().iter().map(|r| r.inputs.clone()).collect();
        let rows = Arc::new(TrackedRows::listed(set.n(), &inputs)?);
        let mut targets = vec![0u64; rows.words()];
        for (i, r) in set.rows().iter().enumerate() {
            if r.target {
                targets[i / 64] |= 1 << (i % 64);
            }
        }
        Ok(Self { rows, targets })
    }

    pub fn rows(&self) -> &Arc<TrackedRows> {
        &self.rows
    }

    pub fn targets(&self) -> &[u64] {
        &self.targets
    }

    /// Mismatched tracked rows.
    pub fn error(&self, ind: &GsgpIndividual) -> u64 {
        ind.semantics().distance(&self.targets)
    }

    /// True when no two rows that agree on `vars` demand different outputs.
    pub fn separable_by(&self, vars: &[usize]) -> bool {
        let mut seen: HashMap<Vec<bool>, bool> = HashMap::new();
        (0..self.rows.len()).all(|r| {
            let row = self.rows.row(r);
            let key: Vec<bool> = vars.iter().map(|&v| row.get(v)).collect();
            let want = self.targets[r / 64] >> (r % 64) & 1 == 1;
            *seen.entry(key).or_insert(want) == want
        })
    }
}

#[derive(Clone, Debug)]
pub struct GsgpOutcome {
    pub record: RunRecord,
    pub individual: GsgpIndividual,
    /// The scheme cannot separate two rows that need different outputs, so
    /// the run was not attempted.
    pub infeasible: bool,
}

/// Hill-climbs training error from a uniform constant function, accepting
/// offspring that are no worse. Stops at zero error or after `budget`
/// mutations; infeasible targets are reported without searching.
pub fn run_gsgp_fit(
    target: &FitTarget,
    scheme: &MutationScheme,
    budget: u64,
    rng: &mut RandomSource,
) -> Result<GsgpOutcome, GsgpError> {
    fit(target, scheme, budget, rng, true)
}

pub(super) fn fit(
    target: &FitTarget,
    scheme: &MutationScheme,
    budget: u64,
    rng: &mut RandomSource,
    stop_if_infeasible: bool,
) -> Result<GsgpOutcome, GsgpError> {
    let rows = target.rows.clone();
    let n = rows.n();
    let seed = rng.seed();
    let sampler = scheme.sampler(n, rng)?;
    let infeasible = !target.separable_by(&sampler.distinguishing_vars());
    let mut ind = GsgpIndividual::constant(rows.clone(), rng.coin());
    let mut error = target.error(&ind);
    let row_count = rows.len() as u64;
    // On a complete table a change that touches no row changes nothing at all.
    let record_unchanged = rows.len() as u64 != 1u64.checked_shl(n as u32).unwrap_or(0);
    let mut record = RunRecord {
        iterations: 0,
        fitness_evals: 1,
        row_evals: row_count,
        t_max: 0,
        final_size: 0,
        final_error: 0.0,
        generalization_error: None,
        success: false,
        seed,
        trajectory: Vec::new(),
    };
    let targets = &target.targets;
    let mut trace = Vec::new();
    while error > 0 && record.iterations < budget && !(infeasible && stop_if_infeasible) {
        record.iterations += 1;
        let minterm = sampler.sample(rng);
        let value = rng.coin();
        let forced = if value { !0u64 } else { 0 };
        let (mut fixed, mut broken) = (0u64, 0u64);
        let outputs = ind.semantics().outputs();
        rows.for_each_match(&minterm, |w, mask| {
            let flips = mask & (outputs[w] ^ forced);
            let wrong = outputs[w] ^ targets[w];
            fixed += (flips & wrong).count_ones() as u64;
            broken += (flips & !wrong).count_ones() as u64;
        });
        record.fitness_evals += 1;
        record.row_evals += row_count;
        if broken <= fixed {
            ind.apply_override(minterm, value, record_unchanged);
            error -= fixed - broken;
        }
        if cfg!(test) {
            trace.push(error);
        }
    }
    debug_assert_eq!(error, target.error(&ind));
    debug_assert!(trace.windows(2).all(|w| w[1] <= w[0]));
    let size = ind.program().operations();
    record.t_max = size;
    record.final_size = size;
    record.final_error = error as f64;
    record.success = error == 0;
    Ok(GsgpOutcome {
        record,
        individual: ind,
        infeasible,
    })
}

/// Disjunction of conjunctions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dnf {
    n: usize,
    terms: Vec<Minterm>,
}

impl Dnf {
    pub fn new(n: usize, terms: Vec<Minterm>) -> Self {
        Self { n, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[Minterm] {
        &self.terms
    }

    pub fn eval(&self, row: &BitRow) -> bool {
        self.terms.iter().any(|t| t.matches(row))
    }

    pub fn fit_target(&self, rows: Arc<TrackedRows>) -> FitTarget {
        FitTarget::new(rows, |r| self.eval(r))
    }
}

impl fmt::Display for Dnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "({t})")?;
        }
        Ok(())
    }
}

/// `terms` conjunctions, each over `width` distinct uniform variables with uniform signs.
pub fn generate_dnf_target(n: usize, terms: usize, width: usize, rng: &mut RandomSource) -> Result<Dnf, GsgpError> {
    if terms == 0 || width == 0 || width > n {
        return Err(GsgpError::Dnf { n, terms, width });
    }
    let terms = (0..terms)
        .map(|_| {
            let lits: Vec<(usize, bool)> = sample(rng, n, width).into_iter().map(|v| (v, rng.coin())).collect();
            Minterm::new(n, &lits)
        })
        .collect();
    Ok(Dnf::new(n, terms))
}
