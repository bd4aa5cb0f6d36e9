//! Adapters that turn fitness functions into minimisation problems for the engines.
//!
//! Every problem reports a non-negative error that is zero exactly at an
//! optimum (MAX and SuperMajority never quite reach zero, see their docs).

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::boolean::{
    complete_table_error, eval_block, generalization_error, mismatches, BooleanError, BooleanTarget, RowBlock,
    TrainingMode, TrainingSet,
};
use crate::dyadic::Dyadic;
use crate::max::{max_fitness, max_optimal_value, MaxError, MaxSpec};
use crate::mutation::SymbolSet;
use crate::rng::RandomSource;
use crate::structural::{
    derive_permutation_from, majority_from_counts, order_expressed, plus_c_majority_from_counts, sortedness_error,
    supermajority_from_counts, LiteralCounts, SortMeasure, StructuralError, WeightVector,
};
use crate::tree::{Function, SyntaxTree, Terminal};

/// Scores the engines can compare and report.
pub trait ErrorValue: Clone + Ord + Debug {
    fn to_f64(&self) -> f64;
    fn is_zero(&self) -> bool;
}

impl ErrorValue for u64 {
    fn to_f64(&self) -> f64 {
        *self as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
}

impl ErrorValue for Dyadic {
    fn to_f64(&self) -> f64 {
        Dyadic::to_f64(self)
    }
    fn is_zero(&self) -> bool {
        Dyadic::is_zero(self)
    }
}

impl ErrorValue for BigUint {
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::INFINITY)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// A minimisation problem over syntax trees.
pub trait Problem {
    type Error: ErrorValue;

    fn symbols(&self) -> &SymbolSet;

    /// Error of `tree` on the current training data.
    fn evaluate(&mut self, tree: &SyntaxTree) -> Self::Error;

    fn is_optimal(&self, error: &Self::Error) -> bool {
        error.is_zero()
    }

    /// Leaf count of the smallest optimal tree, when known.
    fn minimal_optimal_size(&self) -> Option<usize> {
        None
    }

    /// Draws a fresh training sample; returns false for problems with fixed data.
    fn resample(&mut self, _rng: &mut RandomSource) -> bool {
        false
    }

    /// Input rows scored by one call to [`evaluate`](Self::evaluate).
    fn rows_per_evaluation(&self) -> u64 {
        0
    }

    /// Error under the true input distribution, for problems trained on samples.
    fn generalization_error(&mut self, _tree: &SyntaxTree, _rng: &mut RandomSource) -> Option<f64> {
        None
    }

    /// Complete (error, leaf count) Pareto front, when known.
    fn pareto_front(&self) -> Option<Vec<(Self::Error, usize)>> {
        None
    }
}

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error(transparent)]
    Structural(#[from] StructuralError),
    #[error(transparent)]
    Boolean(#[from] BooleanError),
    #[error(transparent)]
    Max(#[from] MaxError),
    #[error("{0}")]
    Invalid(String),
}

fn join_symbols(n: usize, negations: bool) -> SymbolSet {
    SymbolSet::new(vec![Function::Join], SymbolSet::literals(n, negations))
}

/// Front of problems where expressing `k` variables needs exactly `k` leaves:
/// the best `k` weights, for every `k`.
fn counting_front(n: usize, weights: Option<&WeightVector>, best: &Dyadic) -> Vec<(Dyadic, usize)> {
    let mut w: Vec<Dyadic> = match weights {
        None => vec![Dyadic::from_int(1); n],
        Some(w) => (0..n).map(|i| w.get(i).clone()).collect(),
    };
    w.sort_by(|a, b| b.cmp(a));
    let mut acc = Dyadic::zero();
    let mut front = vec![(best.clone(), 0)];
    for (k, wk) in w.iter().enumerate() {
        acc += wk;
        front.push((best - &acc, k + 1));
    }
    front
}

/// ORDER: reward variables whose positive literal appears before its complement.
#[derive(Clone, Debug)]
pub struct OrderProblem {
    n: usize,
    weights: Option<WeightVector>,
    best: Dyadic,
    symbols: SymbolSet,
}

impl OrderProblem {
    pub fn new(n: usize, weights: Option<WeightVector>) -> Result<Self, ProblemError> {
        if let Some(w) = &weights {
            if w.len() != n {
                return Err(StructuralError::BadWeights { n }.into());
            }
        }
        let best = weights.as_ref().map_or(Dyadic::from_int(n as i64), |w| w.total());
        Ok(Self {
            n,
            weights,
            best,
            symbols: join_symbols(n, true),
        })
    }
}

impl Problem for OrderProblem {
    type Error = Dyadic;

    fn symbols(&self) -> &SymbolSet {
        &self.symbols
    }

    fn evaluate(&mut self, tree: &SyntaxTree) -> Dyadic {
        let mut lits = Vec::with_capacity(tree.leaf_count());
        tree.for_each_leaf_in_order(|t| lits.extend(t.literal()));
        let flags = order_expressed(lits, self.n).expect("literals come from the symbol set");
        let got = match &self.weights {
            None => Dyadic::from_int(flags.iter().filter(|&&b| b).count() as i64),
            Some(w) => flags
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .fold(Dyadic::zero(), |acc, (i, _)| &acc + w.get(i)),
        };
        &self.best - &got
    }

    fn minimal_optimal_size(&self) -> Option<usize> {
        Some(self.n)
    }

    fn pareto_front(&self) -> Option<Vec<(Dyadic, usize)>> {
        Some(counting_front(self.n, self.weights.as_ref(), &self.best))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MajorityVariant {
    /// Optionally weighted MAJORITY.
    Plain(Option<WeightVector>),
    /// Expressed only with a margin of at least `c`.
    PlusC(u32),
    /// Graded reward `2 - 2^(c(!x) - c(x))` once `c(x) > 2 c(!x)`.
    ///
    /// The reward never reaches 2, so the error stays positive forever.
    SuperMajority,
}

/// MAJORITY and its margin variants; fitness depends only on literal counts.
#[derive(Clone, Debug)]
pub struct MajorityProblem {
    n: usize,
    variant: MajorityVariant,
    best: Dyadic,
    symbols: SymbolSet,
}

impl MajorityProblem {
    pub fn new(n: usize, variant: MajorityVariant) -> Result<Self, ProblemError> {
        let best = match &variant {
            MajorityVariant::Plain(None) => Dyadic::from_int(n as i64),
            MajorityVariant::Plain(Some(w)) => {
                if w.len() != n {
                    return Err(StructuralError::BadWeights { n }.into());
                }
                w.total()
            }
            MajorityVariant::PlusC(c) => {
                if *c < 1 {
                    return Err(StructuralError::BadMargin(*c).into());
                }
                Dyadic::from_int(n as i64)
            }
            MajorityVariant::SuperMajority => Dyadic::from_int(2 * n as i64),
        };
        Ok(Self {
            n,
            variant,
            best,
            symbols: join_symbols(n, true),
        })
    }

    /// Fitness value (not error) of a tree.
    pub fn fitness(&self, tree: &SyntaxTree) -> Dyadic {
        let counts = LiteralCounts::from_tree(tree, self.n);
        match &self.variant {
            MajorityVariant::Plain(w) => majority_from_counts(&counts, w.as_ref()),
            MajorityVariant::PlusC(c) => Dyadic::from_int(plus_c_majority_from_counts(&counts, *c) as i64),
            MajorityVariant::SuperMajority => supermajority_from_counts(&counts),
        }
    }
}

impl Problem for MajorityProblem {
    type Error = Dyadic;

    fn symbols(&self) -> &SymbolSet {
        &self.symbols
    }

    fn evaluate(&mut self, tree: &SyntaxTree) -> Dyadic {
        &self.best - &self.fitness(tree)
    }

    fn minimal_optimal_size(&self) -> Option<usize> {
        match &self.variant {
            MajorityVariant::Plain(_) => Some(self.n),
            MajorityVariant::PlusC(c) => Some(self.n * *c as usize),
            MajorityVariant::SuperMajority => None,
        }
    }

    fn pareto_front(&self) -> Option<Vec<(Dyadic, usize)>> {
        match &self.variant {
            MajorityVariant::Plain(w) => Some(counting_front(self.n, w.as_ref(), &self.best)),
            _ => None,
        }
    }
}

/// SORTING: the sequence of first appearances should be `1, 2, ..., n`.
#[derive(Clone, Debug)]
pub struct SortingProblem {
    n: usize,
    measure: SortMeasure,
    symbols: SymbolSet,
}

impl SortingProblem {
    pub fn new(n: usize, measure: SortMeasure) -> Self {
        Self {
            n,
            measure,
            symbols: join_symbols(n, false),
        }
    }

    pub fn permutation(&self, tree: &SyntaxTree) -> Vec<u32> {
        derive_permutation_from(tree.in_order_literals(), self.n).expect("literals come from the symbol set")
    }
}

impl Problem for SortingProblem {
    type Error = Dyadic;

    fn symbols(&self) -> &SymbolSet {
        &self.symbols
    }

    fn evaluate(&mut self, tree: &SyntaxTree) -> Dyadic {
        sortedness_error(&self.permutation(tree), self.n, self.measure).expect("valid permutation")
    }

    fn minimal_optimal_size(&self) -> Option<usize> {
        Some(self.n)
    }
}

enum BooleanData {
    Complete,
    Sample { block: RowBlock, targets: Vec<u64> },
    Dynamic { size: usize, current: Option<(RowBlock, Vec<u64>)> },
}

/// Learning a Boolean target from complete, static or per-comparison samples.
pub struct BooleanProblem {
    n: usize,
    target: BooleanTarget,
    symbols: SymbolSet,
    empty_value: bool,
    data: BooleanData,
    generalization_samples: usize,
}

impl BooleanProblem {
    /// `negations` adds complemented literals to the terminal set. The empty
    /// tree evaluates to `true` when AND is available (the empty conjunction)
    /// and to `false` otherwise.
    pub fn new(
        n: usize,
        target: BooleanTarget,
        functions: Vec<Function>,
        negations: bool,
        mode: TrainingMode,
        rng: &mut RandomSource,
    ) -> Result<Self, ProblemError> {
        target.validate(n)?;
        if functions.is_empty() {
            return Err(ProblemError::Invalid("function set is empty".into()));
        }
        if let Some(f) = functions.iter().find(|f| !matches!(f, Function::And | Function::Or | Function::Xor)) {
            return Err(BooleanError::NonBooleanFunction(*f).into());
        }
        let data = match mode {
            TrainingMode::Complete => BooleanData::Complete,
            TrainingMode::Static(size) => {
                let block = RowBlock::random(n, size, rng);
                let targets = target.column(&block);
                BooleanData::Sample { block, targets }
            }
            TrainingMode::Dynamic(size) => BooleanData::Dynamic { size, current: None },
        };
        Ok(Self {
            n,
            empty_value: functions.contains(&Function::And),
            symbols: SymbolSet::new(functions, SymbolSet::literals(n, negations)),
            target,
            data,
            generalization_samples: 100_000,
        })
    }

    /// Trains on an explicit labelled set; the target is used only for generalization error.
    pub fn with_training_set(
        target: BooleanTarget,
        set: &TrainingSet,
        functions: Vec<Function>,
        negations: bool,
    ) -> Result<Self, ProblemError> {
        let mut p = Self::new(set.n(), target, functions, negations, TrainingMode::Complete, &mut RandomSource::new(0))?;
        let (block, targets) = set.compile();
        p.data = BooleanData::Sample { block, targets };
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn empty_value(&self) -> bool {
        self.empty_value
    }

    pub fn target(&self) -> &BooleanTarget {
        &self.target
    }
}

impl Problem for BooleanProblem {
    type Error = BigUint;

    fn symbols(&self) -> &SymbolSet {
        &self.symbols
    }

    fn evaluate(&mut self, tree: &SyntaxTree) -> BigUint {
        let (block, targets) = match &self.data {
            BooleanData::Complete => {
                return complete_table_error(tree, self.n, &self.target, self.empty_value)
                    .expect("tree uses the problem's symbols and fits the enumeration limit")
            }
            BooleanData::Sample { block, targets } => (block, targets),
            BooleanData::Dynamic { current, .. } => {
                let (block, targets) = current.as_ref().expect("resample before evaluating");
                (block, targets)
            }
        };
        let out = eval_block(tree, block, self.empty_value).expect("tree uses the problem's symbols");
        BigUint::from(mismatches(&out, targets))
    }

    fn resample(&mut self, rng: &mut RandomSource) -> bool {
        match &mut self.data {
            BooleanData::Dynamic { size, current } => {
                let block = RowBlock::random(self.n, *size, rng);
                let targets = self.target.column(&block);
                *current = Some((block, targets));
                true
            }
            _ => false,
        }
    }

    fn rows_per_evaluation(&self) -> u64 {
        match &self.data {
            BooleanData::Complete => 1u64.checked_shl(self.n as u32).unwrap_or(u64::MAX),
            BooleanData::Sample { block, .. } => block.rows() as u64,
            BooleanData::Dynamic { size, .. } => *size as u64,
        }
    }

    fn generalization_error(&mut self, tree: &SyntaxTree, rng: &mut RandomSource) -> Option<f64> {
        generalization_error(tree, self.n, &self.target, self.empty_value, self.generalization_samples, rng)
            .ok()
            .map(|g| g.value)
    }
}

/// MAX as a minimisation problem: error is the optimum minus the tree's value.
#[derive(Clone, Debug)]
pub struct MaxProblem {
    instance: MaxSpec,
    optimum: f64,
    symbols: SymbolSet,
}

impl MaxProblem {
    pub fn new(instance: MaxSpec) -> Self {
        Self {
            optimum: max_optimal_value(&instance),
            symbols: SymbolSet::new(instance.functions.clone(), vec![Terminal::Const]),
            instance,
        }
    }

    pub fn instance(&self) -> &MaxSpec {
        &self.instance
    }

    pub fn optimum(&self) -> f64 {
        self.optimum
    }
}

/// MAX error: distance below the optimum, compared through the tree's value
/// so that tiny values stay distinguishable next to a huge optimum.
#[derive(Clone, Copy, Debug)]
pub struct Shortfall {
    pub value: f64,
    pub optimum: f64,
}

impl PartialEq for Shortfall {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Shortfall {}

impl PartialOrd for Shortfall {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Shortfall {
    fn cmp(&self, other: &Self) -> Ordering {
        other.value.total_cmp(&self.value)
    }
}

impl ErrorValue for Shortfall {
    fn to_f64(&self) -> f64 {
        (self.optimum - self.value).max(0.0)
    }
    fn is_zero(&self) -> bool {
        self.value >= self.optimum
    }
}

impl Problem for MaxProblem {
    type Error = Shortfall;

    fn symbols(&self) -> &SymbolSet {
        &self.symbols
    }

    fn evaluate(&mut self, tree: &SyntaxTree) -> Shortfall {
        Shortfall {
            value: max_fitness(tree, &self.instance),
            optimum: self.optimum,
        }
    }

    /// Optimal up to a relative rounding tolerance for constants that are not dyadic.
    fn is_optimal(&self, error: &Shortfall) -> bool {
        error.value >= self.optimum * (1.0 - 1e-12)
    }
}
