//! Boolean conjunction and parity learning.
//!
//! Training data is stored column-major: bit `r` of column `i` is the value of
//! `x_i` in row `r`, so a tree is evaluated on 64 rows per machine word. Trees
//! built only from AND (or only from XOR) are additionally scored in closed
//! form from their literal histogram, which keeps the complete truth table
//! usable for thousands of variables.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::RngCore;
use thiserror::Error;

use crate::rng::RandomSource;
use crate::tree::{Function, Literal, SyntaxTree, Terminal};

/// Largest variable count for which the complete truth table is enumerated.
pub const MAX_ENUMERATED_VARS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BooleanError {
    #[error("function {0:?} is not Boolean")]
    NonBooleanFunction(Function),
    #[error("constant leaves have no Boolean meaning")]
    ConstantLeaf,
    #[error("literal x{} is outside 1..={n}", var + 1)]
    LiteralOutOfRange { var: u32, n: usize },
    #[error("complete-table evaluation of this tree needs n <= {MAX_ENUMERATED_VARS}, got {0}")]
    TooManyVariables(usize),
    #[error("target subset is invalid for n = {0}")]
    BadTarget(usize),
    #[error("row has {got} bits, expected {expected}")]
    RowLength { got: usize, expected: usize },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// Fixed-width bit vector holding one input assignment.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut r = Self::zeros(len);
        for i in 0..len {
            r.set(i, true);
        }
        r
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut r = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            r.set(i, b);
        }
        r
    }

    pub fn random(len: usize, rng: &mut RandomSource) -> Self {
        let mut r = Self::zeros(len);
        for w in r.words.iter_mut() {
            *w = rng.next_u64();
        }
        if !len.is_multiple_of(64) {
            if let Some(last) = r.words.last_mut() {
                *last &= (1u64 << (len % 64)) - 1;
            }
        }
        r
    }

    /// Bits beyond `len` in the last word are cleared.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(len.div_ceil(64), 0);
        if !len.is_multiple_of(64) {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << (len % 64)) - 1;
            }
        }
        Self { len, words }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        if v {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

impl fmt::Display for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Column-major bit matrix of input rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowBlock {
    n: usize,
    rows: usize,
    words: usize,
    columns: Vec<u64>,
}

impl RowBlock {
    /// All `2^n` assignments; row `r` sets `x_i` to bit `i` of `r`.
    pub fn complete(n: usize) -> Result<Self, BooleanError> {
        if n > MAX_ENUMERATED_VARS {
            return Err(BooleanError::TooManyVariables(n));
        }
        let rows = 1usize << n;
        let words = rows.div_ceil(64);
        const PATTERNS: [u64; 6] = [
            0xAAAA_AAAA_AAAA_AAAA,
            0xCCCC_CCCC_CCCC_CCCC,
            0xF0F0_F0F0_F0F0_F0F0,
            0xFF00_FF00_FF00_FF00,
            0xFFFF_0000_FFFF_0000,
            0xFFFF_FFFF_0000_0000,
        ];
        let mut columns = vec![0u64; n * words];
        for i in 0..n {
            for w in 0..words {
                columns[i * words + w] = if i < 6 {
                    PATTERNS[i]
                } else if (w >> (i - 6)) & 1 == 1 {
                    u64::MAX
                } else {
                    0
                };
            }
        }
        let mut block = Self { n, rows, words, columns };
        block.mask_tail();
        Ok(block)
    }

    pub fn from_rows(n: usize, rows: &[BitRow]) -> Result<Self, BooleanError> {
        let words = rows.len().div_ceil(64);
        let mut columns = vec![0u64; n * words];
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(BooleanError::RowLength {
                    got: row.len(),
                    expected: n,
                });
            }
            for i in 0..n {
                if row.get(i) {
                    columns[i * words + r / 64] |= 1 << (r % 64);
                }
            }
        }
        Ok(Self {
            n,
            rows: rows.len(),
            words,
            columns,
        })
    }

    /// `rows` independent uniform assignments.
    pub fn random(n: usize, rows: usize, rng: &mut RandomSource) -> Self {
        let words = rows.div_ceil(64);
        let mut columns = vec![0u64; n * words];
        for w in columns.iter_mut() {
            *w = rng.next_u64();
        }
        let mut block = Self { n, rows, words, columns };
        block.mask_tail();
        block
    }

    fn mask_tail(&mut self) {
        let mask = self.tail_mask();
        if self.words > 0 {
            for i in 0..self.n {
                self.columns[i * self.words + self.words - 1] &= mask;
            }
        }
    }

    /// Valid-row mask for the final word.
    pub fn tail_mask(&self) -> u64 {
        match self.rows % 64 {
            0 => u64::MAX,
            r => (1u64 << r) - 1,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn words(&self) -> usize {
        self.words
    }

    pub fn column(&self, var: usize) -> &[u64] {
        &self.columns[var * self.words..(var + 1) * self.words]
    }

    pub fn row(&self, r: usize) -> BitRow {
        let mut out = BitRow::zeros(self.n);
        for i in 0..self.n {
            out.set(i, self.column(i)[r / 64] >> (r % 64) & 1 == 1);
        }
        out
    }

    /// All-ones over the valid rows.
    pub fn full(&self) -> Vec<u64> {
        let mut v = vec![u64::MAX; self.words];
        if let Some(last) = v.last_mut() {
            *last &= self.tail_mask();
        }
        v
    }

    /// Column of `l`, complemented for negated literals.
    pub fn literal_column(&self, l: Literal) -> Vec<u64> {
        let mut v = self.column(l.var() as usize).to_vec();
        if l.is_negated() {
            for w in v.iter_mut() {
                *w = !*w;
            }
            if let Some(last) = v.last_mut() {
                *last &= self.tail_mask();
            }
        }
        v
    }
}

/// Number of rows on which two output columns disagree.
pub fn mismatches(a: &[u64], b: &[u64]) -> u64 {
    a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones() as u64).sum()
}

/// Target concepts over `n` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BooleanTarget {
    /// Conjunction of all variables.
    And,
    /// Conjunction of the listed (zero-based, distinct) variables.
    AndSubset(Vec<u32>),
    /// Parity of all variables.
    Xor,
}

impl BooleanTarget {
    /// Conjunction of the first `m` variables.
    pub fn and_prefix(m: usize) -> Self {
        BooleanTarget::AndSubset((0..m as u32).collect())
    }

    pub fn validate(&self, n: usize) -> Result<(), BooleanError> {
        if let BooleanTarget::AndSubset(vars) = self {
            let mut seen = vec![false; n];
            for &v in vars {
                if v as usize >= n || std::mem::replace(&mut seen[v as usize], true) {
                    return Err(BooleanError::BadTarget(n));
                }
            }
        }
        Ok(())
    }

    /// Variables of the conjunction, or `None` for parity.
    fn conjunction_vars(&self, n: usize) -> Option<Vec<u32>> {
        match self {
            BooleanTarget::And => Some((0..n as u32).collect()),
            BooleanTarget::AndSubset(v) => Some(v.clone()),
            BooleanTarget::Xor => None,
        }
    }

    pub fn eval(&self, row: &BitRow) -> bool {
        match self {
            BooleanTarget::And => (0..row.len()).all(|i| row.get(i)),
            BooleanTarget::AndSubset(v) => v.iter().all(|&i| row.get(i as usize)),
            BooleanTarget::Xor => row.count_ones() % 2 == 1,
        }
    }

    pub fn column(&self, block: &RowBlock) -> Vec<u64> {
        let mut out = match self {
            BooleanTarget::Xor => vec![0u64; block.words()],
            _ => block.full(),
        };
        let vars: Vec<u32> = self
            .conjunction_vars(block.n())
            .unwrap_or_else(|| (0..block.n() as u32).collect());
        for v in vars {
            let col = block.column(v as usize);
            for (o, c) in out.iter_mut().zip(col) {
                match self {
                    BooleanTarget::Xor => *o ^= c,
                    _ => *o &= c,
                }
            }
        }
        out
    }
}

/// Which literals a tree contains, read from its histogram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiteralSummary {
    pub positive: Vec<bool>,
    pub negative: Vec<bool>,
    /// Parity of the number of occurrences of each variable (both polarities).
    pub odd: Vec<bool>,
    /// Parity of the total number of negated leaves.
    pub negation_parity: bool,
}

impl LiteralSummary {
    pub fn of(tree: &SyntaxTree, n: usize) -> Self {
        let mut s = Self {
            positive: vec![false; n],
            negative: vec![false; n],
            odd: vec![false; n],
            negation_parity: false,
        };
        for v in 0..n {
            let p = tree.literal_count(v as u32, false);
            let q = tree.literal_count(v as u32, true);
            s.positive[v] = p > 0;
            s.negative[v] = q > 0;
            s.odd[v] = (p + q) % 2 == 1;
            s.negation_parity ^= q % 2 == 1;
        }
        s
    }

    /// Number of distinct variables present in either polarity.
    pub fn distinct_vars(&self) -> usize {
        self.positive.iter().zip(&self.negative).filter(|(p, q)| **p || **q).count()
    }

    /// Some variable appears both plain and negated.
    pub fn has_complementary_pair(&self) -> bool {
        self.positive.iter().zip(&self.negative).any(|(p, q)| *p && *q)
    }

    pub fn has_negation(&self) -> bool {
        self.negative.iter().any(|&q| q)
    }
}

fn check_literals(tree: &SyntaxTree, n: usize) -> Result<(), BooleanError> {
    for f in [Function::Join, Function::Add, Function::Mul] {
        if tree.function_count(f) > 0 {
            return Err(BooleanError::NonBooleanFunction(f));
        }
    }
    if tree.terminal_count(Terminal::Const) > 0 {
        return Err(BooleanError::ConstantLeaf);
    }
    match tree.max_literal_var() {
        Some(var) if var as usize >= n => Err(BooleanError::LiteralOutOfRange { var, n }),
        _ => Ok(()),
    }
}

/// Output of the tree on one assignment. The empty tree yields `empty_value`.
pub fn eval_boolean_tree(tree: &SyntaxTree, row: &BitRow, empty_value: bool) -> Result<bool, BooleanError> {
    check_literals(tree, row.len())?;
    Ok(tree
        .fold(
            |t| {
                let l = t.literal().expect("checked");
                row.get(l.var() as usize) != l.is_negated()
            },
            |f, a, b| match f {
                Function::And => a && b,
                Function::Or => a || b,
                _ => a ^ b,
            },
        )
        .unwrap_or(empty_value))
}

/// Output column of the tree over every row of `block`.
pub fn eval_block(tree: &SyntaxTree, block: &RowBlock, empty_value: bool) -> Result<Vec<u64>, BooleanError> {
    check_literals(tree, block.n())?;
    if tree.is_empty() {
        return Ok(if empty_value { block.full() } else { vec![0; block.words()] });
    }
    if tree.only_function(Function::And) {
        // Idempotence: the conjunction of the distinct literals suffices.
        let mut out = block.full();
        for v in 0..block.n() as u32 {
            for negated in [false, true] {
                if tree.literal_count(v, negated) > 0 {
                    let col = block.literal_column(Literal::new(v, negated));
                    for (o, c) in out.iter_mut().zip(&col) {
                        *o &= c;
                    }
                }
            }
        }
        return Ok(out);
    }
    Ok(tree
        .fold(
            |t| block.literal_column(t.literal().expect("checked")),
            |f, mut a, b| {
                for (x, y) in a.iter_mut().zip(&b) {
                    match f {
                        Function::And => *x &= y,
                        Function::Or => *x |= y,
                        _ => *x ^= y,
                    }
                }
                a
            },
        )
        .expect("non-empty"))
}

fn pow2(k: usize) -> BigUint {
    BigUint::one() << k
}

/// Closed-form complete-table error of a pure-AND tree against a conjunction target.
fn and_tree_vs_conjunction(summary: &LiteralSummary, n: usize, target_vars: &[u32]) -> BigUint {
    let m = target_vars.len();
    if summary.has_complementary_pair() {
        return pow2(n - m);
    }
    let a = summary.distinct_vars();
    let in_target = {
        let mut v = vec![false; n];
        for &i in target_vars {
            v[i as usize] = true;
        }
        v
    };
    let conflicting = (0..n).any(|i| in_target[i] && summary.negative[i]);
    let both = if conflicting {
        BigUint::zero()
    } else {
        let union = (0..n)
            .filter(|&i| in_target[i] || summary.positive[i] || summary.negative[i])
            .count();
        pow2(n - union)
    };
    pow2(n - a) + pow2(n - m) - (both << 1usize)
}

/// Exact number of complete-table rows on which the tree disagrees with the target.
pub fn complete_table_error(
    tree: &SyntaxTree,
    n: usize,
    target: &BooleanTarget,
    empty_value: bool,
) -> Result<BigUint, BooleanError> {
    check_literals(tree, n)?;
    target.validate(n)?;
    let summary = LiteralSummary::of(tree, n);
    if tree.is_empty() {
        return Ok(match target.conjunction_vars(n) {
            Some(vars) if empty_value => pow2(n) - pow2(n - vars.len()),
            Some(vars) => pow2(n - vars.len()),
            None if n == 0 => BigUint::from(empty_value as u8),
            None => pow2(n - 1),
        });
    }
    match target.conjunction_vars(n) {
        Some(vars) if tree.only_function(Function::And) => {
            return Ok(and_tree_vs_conjunction(&summary, n, &vars));
        }
        None if tree.only_function(Function::Xor) => {
            return Ok(if summary.odd.iter().all(|&o| o) {
                if summary.negation_parity {
                    pow2(n)
                } else {
                    BigUint::zero()
                }
            } else {
                pow2(n - 1)
            });
        }
        _ => {}
    }
    let block = RowBlock::complete(n)?;
    let out = eval_block(tree, &block, empty_value)?;
    Ok(BigUint::from(mismatches(&out, &target.column(&block))))
}

/// Probability of disagreement under uniform inputs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneralizationError {
    pub value: f64,
    /// `None` when exact; otherwise the number of sampled inputs.
    pub samples: Option<usize>,
}

impl GeneralizationError {
    fn exact(value: f64) -> Self {
        Self { value, samples: None }
    }
}

/// Generalization error, exact whenever the tree reads at most
/// [`MAX_ENUMERATED_VARS`] variables or has a closed form; otherwise estimated
/// from `fallback_samples` uniform inputs.
pub fn generalization_error(
    tree: &SyntaxTree,
    n: usize,
    target: &BooleanTarget,
    empty_value: bool,
    fallback_samples: usize,
    rng: &mut RandomSource,
) -> Result<GeneralizationError, BooleanError> {
    check_literals(tree, n)?;
    target.validate(n)?;
    let summary = LiteralSummary::of(tree, n);
    let p2 = |k: usize| 2f64.powi(-(k as i32));
    let vars = target.conjunction_vars(n);
    if tree.is_empty() {
        return Ok(GeneralizationError::exact(match &vars {
            Some(v) if empty_value => 1.0 - p2(v.len()),
            Some(v) => p2(v.len()),
            None if n == 0 => empty_value as u8 as f64,
            None => 0.5,
        }));
    }
    match &vars {
        Some(v) if tree.only_function(Function::And) => {
            let m = v.len();
            if summary.has_complementary_pair() {
                return Ok(GeneralizationError::exact(p2(m)));
            }
            let mut in_target = vec![false; n];
            for &i in v {
                in_target[i as usize] = true;
            }
            let conflicting = (0..n).any(|i| in_target[i] && summary.negative[i]);
            let union = (0..n)
                .filter(|&i| in_target[i] || summary.positive[i] || summary.negative[i])
                .count();
            let both = if conflicting { 0.0 } else { p2(union) };
            return Ok(GeneralizationError::exact(p2(summary.distinct_vars()) + p2(m) - 2.0 * both));
        }
        None => {
            if summary.distinct_vars() < n {
                return Ok(GeneralizationError::exact(0.5));
            }
            if tree.only_function(Function::Xor) {
                let all_odd = summary.odd.iter().all(|&o| o);
                let v = match (all_odd, summary.negation_parity) {
                    (true, false) => 0.0,
                    (true, true) => 1.0,
                    _ => 0.5,
                };
                return Ok(GeneralizationError::exact(v));
            }
        }
        _ => {}
    }
    if n <= MAX_ENUMERATED_VARS {
        let err = complete_table_error(tree, n, target, empty_value)?;
        let rows = (1u64 << n) as f64;
        return Ok(GeneralizationError::exact(num_traits::ToPrimitive::to_f64(&err).unwrap_or(f64::NAN) / rows));
    }
    if let Some(target_vars) = vars {
        // Enumerate only the variables the tree reads; the remaining target
        // variables are independent fair coins.
        let support: Vec<usize> = (0..n).filter(|&i| summary.positive[i] || summary.negative[i]).collect();
        if support.len() <= MAX_ENUMERATED_VARS {
            return Ok(GeneralizationError::exact(conjunction_error_on_support(
                tree,
                &support,
                &target_vars,
                empty_value,
            )?));
        }
    }
    let block = RowBlock::random(n, fallback_samples, rng);
    let out = eval_block(tree, &block, empty_value)?;
    let wrong = mismatches(&out, &target.column(&block));
    Ok(GeneralizationError {
        value: wrong as f64 / fallback_samples as f64,
        samples: Some(fallback_samples),
    })
}

fn conjunction_error_on_support(
    tree: &SyntaxTree,
    support: &[usize],
    target_vars: &[u32],
    empty_value: bool,
) -> Result<f64, BooleanError> {
    let k = support.len();
    let block = RowBlock::complete(k)?;
    let mut position = vec![usize::MAX; support.iter().max().map_or(0, |m| m + 1)];
    for (j, &v) in support.iter().enumerate() {
        position[v] = j;
    }
    let out = tree
        .fold(
            |t| {
                let l = t.literal().expect("checked");
                block.literal_column(Literal::new(position[l.var() as usize] as u32, l.is_negated()))
            },
            |f, mut a, b| {
                for (x, y) in a.iter_mut().zip(&b) {
                    match f {
                        Function::And => *x &= y,
                        Function::Or => *x |= y,
                        _ => *x ^= y,
                    }
                }
                a
            },
        )
        .unwrap_or_else(|| if empty_value { block.full() } else { vec![0; block.words()] });
    // Rows where every target variable inside the support is true.
    let mut inside = block.full();
    let mut outside = 0usize;
    for &v in target_vars {
        match position.get(v as usize) {
            Some(&j) if j != usize::MAX => {
                for (o, c) in inside.iter_mut().zip(block.column(j)) {
                    *o &= c;
                }
            }
            _ => outside += 1,
        }
    }
    let p_true = 2f64.powi(-(outside as i32));
    let rows = block.rows() as f64;
    let mut total = 0.0;
    // Tree true: wrong unless the target is true. Tree false: wrong when the target is true.
    let tree_true_inside = out.iter().zip(&inside).map(|(a, b)| (a & b).count_ones() as f64).sum::<f64>();
    let tree_true = out.iter().map(|a| a.count_ones() as f64).sum::<f64>();
    let inside_rows = inside.iter().map(|a| a.count_ones() as f64).sum::<f64>();
    total += tree_true - tree_true_inside * p_true;
    total += (inside_rows - tree_true_inside) * p_true;
    Ok(total / rows)
}

/// How training inputs are presented to the learner.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrainingMode {
    /// Every assignment (closed forms apply, so large `n` is allowed).
    Complete,
    /// One sample of the given size drawn before the run.
    Static(usize),
    /// A fresh sample of the given size for every comparison.
    Dynamic(usize),
}

/// Which canonical small training set to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanonicalSet {
    /// `n` rows; row `i` sets exactly `x_i` false.
    Minimal,
    /// The minimal rows plus `n + 1` all-true rows.
    Padded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelledRow {
    pub inputs: BitRow,
    pub target: bool,
}

/// Explicit list of labelled rows over `n` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrainingSet {
    n: usize,
    rows: Vec<LabelledRow>,
}

impl TrainingSet {
    pub fn new(n: usize, rows: Vec<LabelledRow>) -> Result<Self, BooleanError> {
        for r in &rows {
            if r.inputs.len() != n {
                return Err(BooleanError::RowLength {
                    got: r.inputs.len(),
                    expected: n,
                });
            }
        }
        Ok(Self { n, rows })
    }

    pub fn labelled(n: usize, inputs: Vec<BitRow>, target: &BooleanTarget) -> Result<Self, BooleanError> {
        target.validate(n)?;
        let rows = inputs
            .into_iter()
            .map(|inputs| LabelledRow {
                target: target.eval(&inputs),
                inputs,
            })
            .collect();
        Self::new(n, rows)
    }

    pub fn uniform(n: usize, size: usize, target: &BooleanTarget, rng: &mut RandomSource) -> Result<Self, BooleanError> {
        let inputs = (0..size).map(|_| BitRow::random(n, rng)).collect();
        Self::labelled(n, inputs, target)
    }

    /// Canonical sets labelled by the conjunction of all variables.
    pub fn canonical(n: usize, variant: CanonicalSet) -> Self {
        let mut inputs: Vec<BitRow> = (0..n)
            .map(|i| {
                let mut r = BitRow::ones(n);
                r.set(i, false);
                r
            })
            .collect();
        if variant == CanonicalSet::Padded {
            inputs.extend((0..=n).map(|_| BitRow::ones(n)));
        }
        Self::labelled(n, inputs, &BooleanTarget::And).expect("valid rows")
    }

    /// Same inputs, targets recomputed.
    pub fn relabel(&self, target: &BooleanTarget) -> Result<Self, BooleanError> {
        Self::labelled(self.n, self.rows.iter().map(|r| r.inputs.clone()).collect(), target)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[LabelledRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Column-major inputs and the target column.
    pub fn compile(&self) -> (RowBlock, Vec<u64>) {
        let inputs: Vec<BitRow> = self.rows.iter().map(|r| r.inputs.clone()).collect();
        let block = RowBlock::from_rows(self.n, &inputs).expect("rows validated");
        let mut targets = vec![0u64; block.words()];
        for (i, r) in self.rows.iter().enumerate() {
            if r.target {
                targets[i / 64] |= 1 << (i % 64);
            }
        }
        (block, targets)
    }
}

impl fmt::Display for TrainingSet {
    /// One row per line: input bits (`x1` first), a space, the target bit.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "{} {}", r.inputs, r.target as u8)?;
        }
        Ok(())
    }
}

impl FromStr for TrainingSet {
    type Err = BooleanError;

    /// Inverse of `Display`; blank lines and `#` comments are skipped.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut n = None;
        let mut rows = Vec::new();
        for (idx, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fail = |reason: &str| BooleanError::Parse {
                line: idx + 1,
                reason: reason.to_string(),
            };
            let mut parts = line.split_whitespace();
            let (Some(bits), Some(target), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(fail("expected '<bits> <target>'"));
            };
            let values: Option<Vec<bool>> = bits
                .chars()
                .map(|c| match c {
                    '0' => Some(false),
                    '1' => Some(true),
                    _ => None,
                })
                .collect();
            let values = values.ok_or_else(|| fail("input bits must be 0 or 1"))?;
            if *n.get_or_insert(values.len()) != values.len() {
                return Err(fail("inconsistent row length"));
            }
            let target = match target {
                "0" => false,
                "1" => true,
                _ => return Err(fail("target must be 0 or 1")),
            };
            rows.push(LabelledRow {
                inputs: BitRow::from_bools(&values),
                target,
            });
        }
        Self::new(n.unwrap_or(0), rows)
    }
}
