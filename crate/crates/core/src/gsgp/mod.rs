//! Geometric semantic GP over Boolean functions.
//!
//! An individual is its output vector on a fixed list of tracked rows plus a
//! compact program that reproduces the whole function on any input. Mutation
//! forces the rows of a minterm to one value, so the program grows as a chain
//! of overrides rather than as an ever larger syntax tree.

mod fit;
mod scheme;

pub use fit::{generate_dnf_target, run_gsgp_fit, Dnf, FitTarget, GsgpOutcome};
pub use scheme::{Minterm, MintermSampler, MutationScheme, SchemeError};

use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::RngCore;
use thiserror::Error;

use crate::boolean::{BitRow, BooleanError, RowBlock};
use crate::rng::{mix64, RandomSource};

/// Largest `n` for which every assignment is tracked explicitly.
pub const MAX_COMPLETE_VARS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GsgpError {
    #[error("parents track different rows")]
    MismatchedRows,
    #[error("complete tables are limited to {MAX_COMPLETE_VARS} variables, got {0}")]
    TooManyVariables(usize),
    #[error("minterm has {got} variables, rows have {expected}")]
    Arity { got: usize, expected: usize },
    #[error("a DNF needs at least one term and widths in 1..={n}, got {terms} terms of width {width}")]
    Dnf { n: usize, terms: usize, width: usize },
    #[error(transparent)]
    Rows(#[from] BooleanError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

// Positions within a 64-row word whose row index has bit `i` set.
const LOW_BITS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

#[derive(Clone, Debug, PartialEq, Eq)]
enum RowLayout {
    /// Row `r` assigns `x_i` the value of bit `i` of `r`.
    Complete,
    Listed(RowBlock),
}

/// The ordered inputs an individual's outputs are kept for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrackedRows {
    n: usize,
    rows: usize,
    layout: RowLayout,
}

impl TrackedRows {
    /// All `2^n` assignments, in binary counting order.
    pub fn complete(n: usize) -> Result<Self, GsgpError> {
        if n > MAX_COMPLETE_VARS {
            return Err(GsgpError::TooManyVariables(n));
        }
        Ok(Self {
            n,
            rows: 1 << n,
            layout: RowLayout::Complete,
        })
    }

    pub fn listed(n: usize, rows: &[BitRow]) -> Result<Self, GsgpError> {
        let block = RowBlock::from_rows(n, rows)?;
        Ok(Self {
            n,
            rows: rows.len(),
            layout: RowLayout::Listed(block),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }

    pub fn words(&self) -> usize {
        self.rows.div_ceil(64)
    }

    fn tail_mask(&self) -> u64 {
        match self.rows % 64 {
            0 => !0,
            r => (1u64 << r) - 1,
        }
    }

    pub fn row(&self, r: usize) -> BitRow {
        match &self.layout {
            RowLayout::Complete => BitRow::from_words(self.n, vec![r as u64]),
            RowLayout::Listed(block) => block.row(r),
        }
    }

    /// Calls `f(word, mask)` for every word holding at least one row the minterm matches.
    pub fn for_each_match(&self, m: &Minterm, mut f: impl FnMut(usize, u64)) {
        debug_assert_eq!(m.n(), self.n);
        match &self.layout {
            RowLayout::Complete => {
                let sup = m.support_mask().words().first().copied().unwrap_or(0);
                let pol = m.polarity_mask().words().first().copied().unwrap_or(0);
                let mut low = self.tail_mask();
                for (i, bits) in LOW_BITS.iter().enumerate().take(self.n.min(6)) {
                    if sup >> i & 1 == 1 {
                        low &= if pol >> i & 1 == 1 { *bits } else { !*bits };
                    }
                }
                if low == 0 {
                    return;
                }
                let word_count = self.words() as u64;
                let high_sup = (sup >> 6) & (word_count - 1);
                let base = (pol >> 6) & high_sup;
                let free = !high_sup & (word_count - 1);
                // Walk every subset of the free high bits.
                let mut sub = 0u64;
                loop {
                    f((base | sub) as usize, low);
                    sub = sub.wrapping_sub(free) & free;
                    if sub == 0 {
                        break;
                    }
                }
            }
            RowLayout::Listed(block) => {
                let support = m.support();
                for w in 0..self.words() {
                    let mut mask = if w + 1 == self.words() { self.tail_mask() } else { !0 };
                    for &v in &support {
                        let col = block.column(v)[w];
                        mask &= if m.polarity_mask().get(v) { col } else { !col };
                        if mask == 0 {
                            break;
                        }
                    }
                    if mask != 0 {
                        f(w, mask);
                    }
                }
            }
        }
    }

    /// Tracked-row mask of a Boolean function given per input.
    pub fn mask_of(&self, mut f: impl FnMut(&BitRow) -> bool) -> Vec<u64> {
        let mut out = vec![0u64; self.words()];
        for r in 0..self.rows {
            if f(&self.row(r)) {
                out[r / 64] |= 1 << (r % 64);
            }
        }
        out
    }
}

/// Random Boolean function used to mix two parents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selector {
    /// Independent pseudo-random bit per input derived from the key.
    Hashed(u64),
    Constant(bool),
}

impl Selector {
    pub fn eval(&self, row: &BitRow) -> bool {
        match *self {
            Selector::Constant(b) => b,
            Selector::Hashed(key) => {
                let h = row.words().iter().fold(mix64(key), |acc, &w| mix64(acc ^ w));
                h & 1 == 1
            }
        }
    }
}

#[derive(Debug)]
enum Node {
    Const(bool),
    Override { base: Arc<Node>, minterm: Minterm, value: bool },
    Mix { selector: Selector, when_true: Arc<Node>, when_false: Arc<Node> },
}

fn placeholder() -> Arc<Node> {
    static LEAF: OnceLock<Arc<Node>> = OnceLock::new();
    LEAF.get_or_init(|| Arc::new(Node::Const(false))).clone()
}

impl Drop for Node {
    // Override chains get as long as the run, so unlink them without recursion.
    fn drop(&mut self) {
        let mut stack = Vec::new();
        match self {
            Node::Const(_) => return,
            Node::Override { base, .. } => stack.push(std::mem::replace(base, placeholder())),
            Node::Mix { when_true, when_false, .. } => {
                stack.push(std::mem::replace(when_true, placeholder()));
                stack.push(std::mem::replace(when_false, placeholder()));
            }
        }
        while let Some(arc) = stack.pop() {
            if let Ok(mut node) = Arc::try_unwrap(arc) {
                match &mut node {
                    Node::Const(_) => {}
                    Node::Override { base, .. } => stack.push(std::mem::replace(base, placeholder())),
                    Node::Mix { when_true, when_false, .. } => {
                        stack.push(std::mem::replace(when_true, placeholder()));
                        stack.push(std::mem::replace(when_false, placeholder()));
                    }
                }
            }
        }
    }
}

/// Persistent program computing an individual's function on any input.
#[derive(Clone, Debug)]
pub struct Program(Arc<Node>);

impl Program {
    pub fn constant(value: bool) -> Self {
        Self(Arc::new(Node::Const(value)))
    }

    /// `self OR m` when `value` is true, `self AND NOT m` otherwise.
    pub fn with_override(&self, minterm: Minterm, value: bool) -> Self {
        Self(Arc::new(Node::Override {
            base: self.0.clone(),
            minterm,
            value,
        }))
    }

    pub fn mix(selector: Selector, when_true: &Program, when_false: &Program) -> Self {
        Self(Arc::new(Node::Mix {
            selector,
            when_true: when_true.0.clone(),
            when_false: when_false.0.clone(),
        }))
    }

    pub fn eval(&self, row: &BitRow) -> bool {
        let mut node = &*self.0;
        loop {
            match node {
                Node::Const(b) => return *b,
                Node::Override { base, minterm, value } => {
                    if minterm.matches(row) {
                        return *value;
                    }
                    node = base;
                }
                Node::Mix { selector, when_true, when_false } => {
                    node = if selector.eval(row) { when_true } else { when_false };
                }
            }
        }
    }

    /// Overrides from oldest to newest above the constant start, or `None`
    /// once crossover has mixed two lineages.
    pub fn override_log(&self) -> Option<(bool, Vec<(Minterm, bool)>)> {
        let mut log = Vec::new();
        let mut node = &*self.0;
        loop {
            match node {
                Node::Const(b) => {
                    log.reverse();
                    return Some((*b, log));
                }
                Node::Override { base, minterm, value } => {
                    log.push((minterm.clone(), *value));
                    node = base;
                }
                Node::Mix { .. } => return None,
            }
        }
    }

    /// Count of override and mix nodes reachable without revisiting shared ones.
    pub fn operations(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![&self.0];
        let mut count = 0;
        while let Some(a) = stack.pop() {
            if !seen.insert(Arc::as_ptr(a)) {
                continue;
            }
            match &**a {
                Node::Const(_) => {}
                Node::Override { base, .. } => {
                    count += 1;
                    stack.push(base);
                }
                Node::Mix { when_true, when_false, .. } => {
                    count += 1;
                    stack.push(when_true);
                    stack.push(when_false);
                }
            }
        }
        count
    }
}

impl fmt::Display for Program {
    /// Boolean expression with `|` for forcing true and `&!` for forcing false.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn write_node(node: &Node, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let mut chain = Vec::new();
            let mut cur = node;
            while let Node::Override { base, minterm, value } = cur {
                chain.push((minterm, *value));
                cur = base;
            }
            for _ in 0..chain.len() {
                write!(f, "(")?;
            }
            match cur {
                Node::Const(b) => write!(f, "{}", u8::from(*b))?,
                Node::Mix { selector, when_true, when_false } => {
                    write!(f, "mix[{selector:?}](")?;
                    write_node(when_true, f)?;
                    write!(f, ", ")?;
                    write_node(when_false, f)?;
                    write!(f, ")")?;
                }
                Node::Override { .. } => unreachable!(),
            }
            for (m, value) in chain.into_iter().rev() {
                if value {
                    write!(f, " | {m})")?;
                } else {
                    write!(f, " & !({m}))")?;
                }
            }
            Ok(())
        }
        write_node(&self.0, f)
    }
}

/// Outputs of a function on the tracked rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semantics {
    rows: Arc<TrackedRows>,
    outputs: Vec<u64>,
}

impl Semantics {
    pub fn rows(&self) -> &Arc<TrackedRows> {
        &self.rows
    }

    pub fn outputs(&self) -> &[u64] {
        &self.outputs
    }

    pub fn get(&self, r: usize) -> bool {
        self.outputs[r / 64] >> (r % 64) & 1 == 1
    }

    /// Rows where the two output vectors differ.
    pub fn distance(&self, other: &[u64]) -> u64 {
        self.outputs.iter().zip(other).map(|(a, b)| (a ^ b).count_ones() as u64).sum()
    }
}

/// A GSGP individual: tracked outputs plus the program that produced them.
#[derive(Clone, Debug)]
pub struct GsgpIndividual {
    semantics: Semantics,
    program: Program,
}

impl GsgpIndividual {
    pub fn constant(rows: Arc<TrackedRows>, value: bool) -> Self {
        let fill = if value { !0 } else { 0 };
        let mut outputs = vec![fill; rows.words()];
        if let Some(last) = outputs.last_mut() {
            *last &= rows.tail_mask();
        }
        Self {
            semantics: Semantics { rows, outputs },
            program: Program::constant(value),
        }
    }

    pub fn semantics(&self) -> &Semantics {
        &self.semantics
    }

    pub fn program(&self) -> &Program {
        &self.program
    }

    /// Output on an arbitrary input, tracked or not.
    pub fn eval(&self, row: &BitRow) -> bool {
        self.program.eval(row)
    }

    /// Applies one forced override in place and returns how many tracked rows changed.
    pub(crate) fn apply_override(&mut self, minterm: Minterm, value: bool, record_unchanged: bool) -> u64 {
        let mut changed = 0;
        let outputs = &mut self.semantics.outputs;
        self.semantics.rows.for_each_match(&minterm, |w, mask| {
            let before = outputs[w];
            outputs[w] = if value { before | mask } else { before & !mask };
            changed += (before ^ outputs[w]).count_ones() as u64;
        });
        if changed > 0 || record_unchanged {
            self.program = self.program.with_override(minterm, value);
        }
        changed
    }

    /// Whether replaying the program on every tracked row reproduces the stored outputs.
    pub fn is_consistent(&self) -> bool {
        let rows = &self.semantics.rows;
        rows.mask_of(|r| self.program.eval(r)) == self.semantics.outputs
    }
}

/// Forces the minterm's rows to true or to false, each with probability 1/2.
pub fn sgmb_mutate(ind: &GsgpIndividual, minterm: Minterm, rng: &mut RandomSource) -> Result<GsgpIndividual, GsgpError> {
    sgmb_mutate_with(ind, minterm, rng.coin())
}

/// Deterministic form of [`sgmb_mutate`]: `value` picks OR (true) or AND-NOT (false).
pub fn sgmb_mutate_with(ind: &GsgpIndividual, minterm: Minterm, value: bool) -> Result<GsgpIndividual, GsgpError> {
    let n = ind.semantics.rows.n();
    if minterm.n() != n {
        return Err(GsgpError::Arity { got: minterm.n(), expected: n });
    }
    let mut child = ind.clone();
    child.apply_override(minterm, value, true);
    Ok(child)
}

/// Offspring equal to `first` where a fresh random function is true and to `second` elsewhere.
pub fn sgxb_crossover(first: &GsgpIndividual, second: &GsgpIndividual, rng: &mut RandomSource) -> Result<GsgpIndividual, GsgpError> {
    sgxb_crossover_with(first, second, Selector::Hashed(rng.next_u64()))
}

pub fn sgxb_crossover_with(
    first: &GsgpIndividual,
    second: &GsgpIndividual,
    selector: Selector,
) -> Result<GsgpIndividual, GsgpError> {
    let rows = &first.semantics.rows;
    if !Arc::ptr_eq(rows, &second.semantics.rows) && **rows != *second.semantics.rows {
        return Err(GsgpError::MismatchedRows);
    }
    let pick = rows.mask_of(|r| selector.eval(r));
    let outputs = first
        .semantics
        .outputs
        .iter()
        .zip(&second.semantics.outputs)
        .zip(&pick)
        .map(|((a, b), s)| (a & s) | (b & !s))
        .collect();
    Ok(GsgpIndividual {
        semantics: Semantics {
            rows: rows.clone(),
            outputs,
        },
        program: Program::mix(selector, &first.program, &second.program),
    })
}
