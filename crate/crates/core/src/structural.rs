//! Fitness functions whose value depends only on which literals a tree holds
//! and in what left-to-right order.

use thiserror::Error;

use crate::dyadic::Dyadic;
use crate::tree::{Literal, SyntaxTree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructuralError {
    #[error("literal x{} is outside 1..={n}", var + 1)]
    LiteralOutOfRange { var: u32, n: usize },
    #[error("weights must be {n} positive finite numbers")]
    BadWeights { n: usize },
    #[error("margin must be at least 1, got {0}")]
    BadMargin(u32),
    #[error("element {0} appears twice")]
    DuplicateElement(u32),
    #[error("element {element} is outside 1..={n}")]
    ElementOutOfRange { element: u32, n: usize },
    #[error("sorting instances use positive literals only")]
    NegatedElement,
}

/// Positive per-variable weights, stored exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector(Vec<Dyadic>);

impl WeightVector {
    pub fn new(weights: &[f64]) -> Result<Self, StructuralError> {
        let n = weights.len();
        weights
            .iter()
            .map(|&w| if w > 0.0 { Dyadic::from_f64(w) } else { None })
            .collect::<Option<Vec<_>>>()
            .map(WeightVector)
            .ok_or(StructuralError::BadWeights { n })
    }

    /// `w_i = i` for `i = 1..=n`.
    pub fn linear(n: usize) -> Self {
        WeightVector((1..=n as i64).map(Dyadic::from_int).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, var: usize) -> &Dyadic {
        &self.0[var]
    }

    pub fn total(&self) -> Dyadic {
        self.0.iter().fold(Dyadic::zero(), |acc, w| &acc + w)
    }
}

fn check_weights(weights: Option<&WeightVector>, n: usize) -> Result<(), StructuralError> {
    match weights {
        Some(w) if w.len() != n => Err(StructuralError::BadWeights { n }),
        _ => Ok(()),
    }
}

/// Sum of the weights of the flagged variables (unit weights when `None`).
fn weighted_sum(flags: &[bool], weights: Option<&WeightVector>) -> Dyadic {
    match weights {
        None => Dyadic::from_int(flags.iter().filter(|&&b| b).count() as i64),
        Some(w) => flags
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .fold(Dyadic::zero(), |acc, (i, _)| &acc + w.get(i)),
    }
}

/// Per-variable occurrence counts of both polarities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiteralCounts {
    pub positive: Vec<u32>,
    pub negative: Vec<u32>,
}

impl LiteralCounts {
    pub fn from_literals(parse: &[Literal], n: usize) -> Result<Self, StructuralError> {
        let mut counts = Self {
            positive: vec![0; n],
            negative: vec![0; n],
        };
        for l in parse {
            let v = l.var() as usize;
            if v >= n {
                return Err(StructuralError::LiteralOutOfRange { var: l.var(), n });
            }
            if l.is_negated() {
                counts.negative[v] += 1;
            } else {
                counts.positive[v] += 1;
            }
        }
        Ok(counts)
    }

    /// Reads the tree's histogram; literals beyond `n` are ignored.
    pub fn from_tree(tree: &SyntaxTree, n: usize) -> Self {
        Self {
            positive: (0..n as u32).map(|i| tree.literal_count(i, false)).collect(),
            negative: (0..n as u32).map(|i| tree.literal_count(i, true)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.positive.len()
    }
}

/// Which variables ORDER expresses: `x_i` occurs and its first occurrence
/// precedes any occurrence of its complement.
pub fn order_expressed(
    parse: impl IntoIterator<Item = Literal>,
    n: usize,
) -> Result<Vec<bool>, StructuralError> {
    // 0 = unseen, 1 = expressed, 2 = complement came first
    let mut state = vec![0u8; n];
    for l in parse {
        let v = l.var() as usize;
        if v >= n {
            return Err(StructuralError::LiteralOutOfRange { var: l.var(), n });
        }
        if state[v] == 0 {
            state[v] = if l.is_negated() { 2 } else { 1 };
        }
    }
    Ok(state.into_iter().map(|s| s == 1).collect())
}

pub fn order_fitness(
    parse: &[Literal],
    n: usize,
    weights: Option<&WeightVector>,
) -> Result<Dyadic, StructuralError> {
    check_weights(weights, n)?;
    let flags = order_expressed(parse.iter().copied(), n)?;
    Ok(weighted_sum(&flags, weights))
}

/// MAJORITY expresses `x_i` when it occurs at least once and at least as often as its complement.
pub fn majority_expressed(counts: &LiteralCounts) -> Vec<bool> {
    plus_c_expressed(counts, 0)
}

/// Expressed when `c(x_i) >= 1` and `c(x_i) - c(!x_i) >= margin`.
fn plus_c_expressed(counts: &LiteralCounts, margin: i64) -> Vec<bool> {
    counts
        .positive
        .iter()
        .zip(&counts.negative)
        .map(|(&p, &q)| p >= 1 && p as i64 - q as i64 >= margin)
        .collect()
}

pub fn majority_fitness(
    parse: &[Literal],
    n: usize,
    weights: Option<&WeightVector>,
) -> Result<Dyadic, StructuralError> {
    check_weights(weights, n)?;
    let counts = LiteralCounts::from_literals(parse, n)?;
    Ok(majority_from_counts(&counts, weights))
}

pub fn majority_from_counts(counts: &LiteralCounts, weights: Option<&WeightVector>) -> Dyadic {
    weighted_sum(&majority_expressed(counts), weights)
}

/// Number of variables whose positive literal leads its complement by at least `c`.
pub fn plus_c_majority_fitness(parse: &[Literal], n: usize, c: u32) -> Result<u64, StructuralError> {
    if c < 1 {
        return Err(StructuralError::BadMargin(c));
    }
    let counts = LiteralCounts::from_literals(parse, n)?;
    Ok(plus_c_majority_from_counts(&counts, c))
}

pub fn plus_c_majority_from_counts(counts: &LiteralCounts, c: u32) -> u64 {
    plus_c_expressed(counts, c as i64).into_iter().filter(|&b| b).count() as u64
}

pub fn supermajority_fitness(parse: &[Literal], n: usize) -> Result<Dyadic, StructuralError> {
    let counts = LiteralCounts::from_literals(parse, n)?;
    Ok(supermajority_from_counts(&counts))
}

/// Sum over variables with `c(x_i) > 2 c(!x_i)` of `2 - 2^(c(!x_i) - c(x_i))`.
pub fn supermajority_from_counts(counts: &LiteralCounts) -> Dyadic {
    let mut expressed = 0i64;
    let mut exponents = Vec::new();
    for (&p, &q) in counts.positive.iter().zip(&counts.negative) {
        if p > 2 * q {
            expressed += 1;
            exponents.push(p - q);
        }
    }
    Dyadic::from_int(2 * expressed) - sum_of_inverse_powers(&exponents)
}

/// Exact `sum 2^-d` using a single limb buffer with carry propagation.
fn sum_of_inverse_powers(exponents: &[u32]) -> Dyadic {
    let Some(&top) = exponents.iter().max() else {
        return Dyadic::zero();
    };
    let words = (top as usize + 64 + exponents.len().ilog2() as usize + 1) / 64 + 1;
    let mut limbs = vec![0u64; words];
    for &d in exponents {
        let bit = (top - d) as usize;
        let mut w = bit / 64;
        let (sum, mut carry) = limbs[w].overflowing_add(1u64 << (bit % 64));
        limbs[w] = sum;
        while carry {
            w += 1;
            let (s, c) = limbs[w].overflowing_add(1);
            limbs[w] = s;
            carry = c;
        }
    }
    let bytes: Vec<u8> = limbs.iter().flat_map(|w| w.to_le_bytes()).collect();
    Dyadic::new(num_bigint::BigInt::from_bytes_le(num_bigint::Sign::Plus, &bytes), top)
}

/// Sequence of first appearances of the elements `1..=n` (positive literal `x_i` is element `i`).
pub fn derive_permutation(parse: &[Literal], n: usize) -> Result<Vec<u32>, StructuralError> {
    derive_permutation_from(parse.iter().copied(), n)
}

pub fn derive_permutation_from(
    parse: impl IntoIterator<Item = Literal>,
    n: usize,
) -> Result<Vec<u32>, StructuralError> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for l in parse {
        if l.is_negated() {
            return Err(StructuralError::NegatedElement);
        }
        let v = l.var() as usize;
        if v >= n {
            return Err(StructuralError::ElementOutOfRange { element: l.var() + 1, n });
        }
        if !seen[v] {
            seen[v] = true;
            out.push(l.var() + 1);
        }
    }
    Ok(out)
}

/// Sortedness measures for partial permutations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SortMeasure {
    /// Adjacent pairs in ascending order (maximise).
    Inv,
    /// Elements at their own position (maximise).
    Ham,
    /// Maximal ascending runs plus missing elements (minimise).
    Run,
    /// Longest strictly ascending subsequence (maximise).
    Las,
    /// Exchanges needed to sort plus a missing-element penalty (minimise).
    Exc,
}

impl SortMeasure {
    pub const ALL: [SortMeasure; 5] = [
        SortMeasure::Inv,
        SortMeasure::Ham,
        SortMeasure::Run,
        SortMeasure::Las,
        SortMeasure::Exc,
    ];

    pub fn maximise(self) -> bool {
        matches!(self, SortMeasure::Inv | SortMeasure::Ham | SortMeasure::Las)
    }

    pub fn name(self) -> &'static str {
        match self {
            SortMeasure::Inv => "inv",
            SortMeasure::Ham => "ham",
            SortMeasure::Run => "run",
            SortMeasure::Las => "las",
            SortMeasure::Exc => "exc",
        }
    }
}

fn check_partial_permutation(pi: &[u32], n: usize) -> Result<(), StructuralError> {
    let mut seen = vec![false; n + 1];
    for &e in pi {
        if e == 0 || e as usize > n {
            return Err(StructuralError::ElementOutOfRange { element: e, n });
        }
        if std::mem::replace(&mut seen[e as usize], true) {
            return Err(StructuralError::DuplicateElement(e));
        }
    }
    Ok(())
}

pub fn sortedness(pi: &[u32], n: usize, measure: SortMeasure) -> Result<Dyadic, StructuralError> {
    check_partial_permutation(pi, n)?;
    let m = pi.len();
    let missing = (n - m) as i64;
    let v: Dyadic = match measure {
        SortMeasure::Inv => match m {
            0 => Dyadic::zero(),
            1 => Dyadic::inverse_power_of_two(1),
            _ => Dyadic::from_int(pi.windows(2).filter(|w| w[0] < w[1]).count() as i64),
        },
        SortMeasure::Ham => {
            Dyadic::from_int(pi.iter().enumerate().filter(|(j, &e)| e as usize == j + 1).count() as i64)
        }
        SortMeasure::Run => {
            if m == 0 {
                Dyadic::from_int(n as i64 + 1)
            } else {
                let runs = 1 + pi.windows(2).filter(|w| w[0] > w[1]).count() as i64;
                Dyadic::from_int(runs + missing)
            }
        }
        SortMeasure::Las => Dyadic::from_int(longest_ascending(pi) as i64),
        SortMeasure::Exc => {
            let penalty = if m < n { 1 + missing } else { 0 };
            Dyadic::from_int(exchanges_to_sort(pi) as i64 + penalty)
        }
    };
    Ok(v)
}

/// Value of the measure on the sorted complete permutation.
pub fn best_sortedness(n: usize, measure: SortMeasure) -> Dyadic {
    let id: Vec<u32> = (1..=n as u32).collect();
    sortedness(&id, n, measure).expect("identity is valid")
}

/// Non-negative distance from the optimum; zero exactly on the sorted permutation.
pub fn sortedness_error(pi: &[u32], n: usize, measure: SortMeasure) -> Result<Dyadic, StructuralError> {
    let v = sortedness(pi, n, measure)?;
    Ok(if measure.maximise() {
        best_sortedness(n, measure) - v
    } else {
        v - best_sortedness(n, measure)
    })
}

fn longest_ascending(pi: &[u32]) -> usize {
    let mut tails: Vec<u32> = Vec::new();
    for &e in pi {
        match tails.binary_search(&e) {
            Ok(_) => {}
            Err(pos) if pos == tails.len() => tails.push(e),
            Err(pos) => tails[pos] = e,
        }
    }
    tails.len()
}

/// `|pi|` minus the number of cycles of the map from positions to sorted ranks.
fn exchanges_to_sort(pi: &[u32]) -> usize {
    let mut sorted: Vec<u32> = pi.to_vec();
    sorted.sort_unstable();
    let target: Vec<usize> = pi.iter().map(|e| sorted.binary_search(e).expect("present")).collect();
    let mut visited = vec![false; pi.len()];
    let mut cycles = 0;
    for start in 0..pi.len() {
        if visited[start] {
            continue;
        }
        cycles += 1;
        let mut j = start;
        while !visited[j] {
            visited[j] = true;
            j = target[j];
        }
    }
    pi.len() - cycles
}
