//! HVL-Prime mutation and random tree construction.

use thiserror::Error;

use crate::rng::{poisson_one, RandomSource};
use crate::tree::{Function, Literal, NodeContent, NodeId, SyntaxTree, Terminal};

/// Function set F and terminal set L available to variation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolSet {
    functions: Vec<Function>,
    terminals: Vec<Terminal>,
}

impl SymbolSet {
    pub fn new(functions: Vec<Function>, terminals: Vec<Terminal>) -> Self {
        Self { functions, terminals }
    }

    /// `{x1..xn}`, plus their complements when `negations` is set.
    pub fn literals(n: usize, negations: bool) -> Vec<Terminal> {
        let mut out = Vec::with_capacity(n * (1 + negations as usize));
        for i in 0..n as u32 {
            out.push(Terminal::Lit(Literal::positive(i)));
            if negations {
                out.push(Terminal::Lit(Literal::negative(i)));
            }
        }
        out
    }

    pub fn functions(&self) -> &[Function] {
        &self.functions
    }

    pub fn terminals(&self) -> &[Terminal] {
        &self.terminals
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubOperation {
    Insert,
    Delete,
    Substitute,
}

/// Whether a substitution may redraw the symbol it replaces.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SubstitutionMode {
    /// Only nodes that have an alternative symbol are eligible, and the new
    /// symbol always differs.
    #[default]
    SelfExcluded,
    /// Any node, any symbol of the right arity, possibly the same one.
    SelfAllowed,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DeletionMode {
    /// Remove a uniform leaf; its parent is replaced by the sibling.
    #[default]
    Leaf,
    /// Remove the subtree rooted at a uniform node.
    Subtree,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InsertionMode {
    /// Insert above a node chosen uniformly from all nodes.
    #[default]
    UniformNode,
    /// Insert above the leaf reached by a fair random walk from the root.
    DepthWeightedLeaf,
}

/// What a mutation does to the empty tree.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EmptyTreeRule {
    /// Every sub-operation places a uniform literal as the root.
    #[default]
    AnyOperation,
    /// Only insertion places a root; deletion and substitution do nothing.
    InsertionOnly,
}

/// What deleting the root leaf does in leaf-deletion mode.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RootDeletion {
    #[default]
    Empty,
    NoOp,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationConfig {
    /// Sub-operations drawn uniformly at each application.
    pub operations: Vec<SubOperation>,
    pub substitution: SubstitutionMode,
    pub deletion: DeletionMode,
    pub insertion: InsertionMode,
    /// Maximum leaf count; enforced by the engines, not by the operator.
    pub size_limit: Option<usize>,
    pub empty_tree: EmptyTreeRule,
    pub root_deletion: RootDeletion,
}

impl Default for MutationConfig {
    fn default() -> Self {
        Self {
            operations: vec![SubOperation::Insert, SubOperation::Delete, SubOperation::Substitute],
            substitution: SubstitutionMode::default(),
            deletion: DeletionMode::default(),
            insertion: InsertionMode::default(),
            size_limit: None,
            empty_tree: EmptyTreeRule::default(),
            root_deletion: RootDeletion::default(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MutationError {
    #[error("terminal set is empty")]
    EmptyTerminalSet,
    #[error("function set is empty but insertion is enabled")]
    EmptyFunctionSet,
    #[error("no sub-operation is enabled")]
    NoOperations,
    #[error("size limit must be at least 1")]
    ZeroSizeLimit,
}

impl MutationConfig {
    pub fn validate(&self, symbols: &SymbolSet) -> Result<(), MutationError> {
        if self.operations.is_empty() {
            return Err(MutationError::NoOperations);
        }
        if symbols.terminals.is_empty() {
            return Err(MutationError::EmptyTerminalSet);
        }
        if symbols.functions.is_empty() && self.operations.contains(&SubOperation::Insert) {
            return Err(MutationError::EmptyFunctionSet);
        }
        if self.size_limit == Some(0) {
            return Err(MutationError::ZeroSizeLimit);
        }
        Ok(())
    }
}

/// Effect of one HVL-Prime application.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    SeededRoot,
    Inserted,
    Deleted,
    Substituted,
    Unchanged,
}

/// One application of HVL-Prime, in place.
///
/// Call [`MutationConfig::validate`] once beforehand; this function assumes a
/// valid configuration.
pub fn hvl_prime(
    tree: &mut SyntaxTree,
    symbols: &SymbolSet,
    config: &MutationConfig,
    rng: &mut RandomSource,
) -> Mutation {
    let op = config.operations[rng.index(config.operations.len())];
    if tree.is_empty() {
        if op != SubOperation::Insert && config.empty_tree == EmptyTreeRule::InsertionOnly {
            return Mutation::Unchanged;
        }
        let l = symbols.terminals[rng.index(symbols.terminals.len())];
        tree.set_root_leaf(l);
        return Mutation::SeededRoot;
    }
    match op {
        SubOperation::Insert => {
            insert(tree, symbols, config.insertion, rng);
            Mutation::Inserted
        }
        SubOperation::Delete => delete(tree, config, rng),
        SubOperation::Substitute => substitute(tree, symbols, config.substitution, rng),
    }
}

fn insert(tree: &mut SyntaxTree, symbols: &SymbolSet, mode: InsertionMode, rng: &mut RandomSource) {
    let x = match mode {
        InsertionMode::UniformNode => tree.node_at(rng.index(tree.node_count())),
        InsertionMode::DepthWeightedLeaf => {
            let mut x = tree.root().expect("non-empty");
            while let Some((l, r)) = tree.children(x) {
                x = if rng.coin() { l } else { r };
            }
            x
        }
    };
    let f = symbols.functions[rng.index(symbols.functions.len())];
    let l = symbols.terminals[rng.index(symbols.terminals.len())];
    let leaf_left = rng.coin();
    tree.insert_above(x, f, l, leaf_left);
}

fn delete(tree: &mut SyntaxTree, config: &MutationConfig, rng: &mut RandomSource) -> Mutation {
    let x = match config.deletion {
        DeletionMode::Leaf => tree.leaf_at(rng.index(tree.leaf_count())),
        DeletionMode::Subtree => tree.node_at(rng.index(tree.node_count())),
    };
    if config.deletion == DeletionMode::Leaf
        && config.root_deletion == RootDeletion::NoOp
        && tree.parent(x).is_none()
    {
        return Mutation::Unchanged;
    }
    tree.remove_subtree(x);
    Mutation::Deleted
}

fn substitute(
    tree: &mut SyntaxTree,
    symbols: &SymbolSet,
    mode: SubstitutionMode,
    rng: &mut RandomSource,
) -> Mutation {
    let x: NodeId = match mode {
        SubstitutionMode::SelfAllowed => tree.node_at(rng.index(tree.node_count())),
        SubstitutionMode::SelfExcluded => {
            let leaves_ok = symbols.terminals.len() >= 2;
            let internals_ok = symbols.functions.len() >= 2;
            match (leaves_ok, internals_ok) {
                (true, true) => tree.node_at(rng.index(tree.node_count())),
                (true, false) => tree.leaf_at(rng.index(tree.leaf_count())),
                (false, true) if tree.internal_count() > 0 => {
                    tree.internal_at(rng.index(tree.internal_count()))
                }
                _ => return Mutation::Unchanged,
            }
        }
    };
    let content = match tree.content(x) {
        NodeContent::Terminal(old) => NodeContent::Terminal(draw(&symbols.terminals, old, mode, rng)),
        NodeContent::Function(old) => NodeContent::Function(draw(&symbols.functions, old, mode, rng)),
    };
    tree.substitute(x, content);
    Mutation::Substituted
}

/// Uniform symbol from `set`, excluding `current` in self-excluded mode.
fn draw<T: Copy + PartialEq>(set: &[T], current: T, mode: SubstitutionMode, rng: &mut RandomSource) -> T {
    match (mode, set.iter().position(|&s| s == current)) {
        (SubstitutionMode::SelfExcluded, Some(pos)) => {
            let i = rng.index(set.len() - 1);
            set[if i >= pos { i + 1 } else { i }]
        }
        _ => set[rng.index(set.len())],
    }
}

/// How many HVL-Prime applications make up one offspring.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MutationCount {
    /// Exactly one, as in RLS-GP.
    One,
    /// `1 + Poisson(1)`, as in the (1+1) GP and SMO-GP.
    #[default]
    OnePlusPoisson,
}

impl MutationCount {
    pub fn sample(self, rng: &mut RandomSource) -> u32 {
        match self {
            MutationCount::One => 1,
            MutationCount::OnePlusPoisson => 1 + poisson_one(rng),
        }
    }
}

/// `1 + Poisson(1)`.
pub fn sample_mutation_count(rng: &mut RandomSource) -> u32 {
    MutationCount::OnePlusPoisson.sample(rng)
}

/// Tree grown from the empty tree by `t_init` uniform-node insertions.
pub fn build_random_tree(t_init: usize, symbols: &SymbolSet, rng: &mut RandomSource) -> SyntaxTree {
    let mut tree = SyntaxTree::new();
    for _ in 0..t_init {
        if tree.is_empty() {
            tree.set_root_leaf(symbols.terminals[rng.index(symbols.terminals.len())]);
        } else {
            insert(&mut tree, symbols, InsertionMode::UniformNode, rng);
        }
    }
    tree
}
