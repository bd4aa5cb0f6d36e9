//! The MAX problem: largest value expressible with `+`, `*` and a constant
//! leaf under a depth limit.

use thiserror::Error;

use crate::tree::{Function, SyntaxTree, Terminal};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MaxError {
    #[error("constant must be positive and finite, got {0}")]
    BadConstant(f64),
    #[error("MAX supports only + and *, got {0:?}")]
    BadFunction(Function),
    #[error("function set is empty")]
    NoFunctions,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaxSpec {
    pub constant: f64,
    pub depth_limit: usize,
    pub functions: Vec<Function>,
}

impl MaxSpec {
    pub fn new(constant: f64, depth_limit: usize, functions: Vec<Function>) -> Result<Self, MaxError> {
        if !(constant.is_finite() && constant > 0.0) {
            return Err(MaxError::BadConstant(constant));
        }
        if functions.is_empty() {
            return Err(MaxError::NoFunctions);
        }
        if let Some(&f) = functions.iter().find(|f| !matches!(f, Function::Add | Function::Mul)) {
            return Err(MaxError::BadFunction(f));
        }
        Ok(Self {
            constant,
            depth_limit,
            functions,
        })
    }

    /// Nodes in a complete tree of the depth limit: `2^(D+1) - 1`.
    pub fn problem_size(&self) -> usize {
        (1usize << (self.depth_limit + 1)) - 1
    }

    fn has(&self, f: Function) -> bool {
        self.functions.contains(&f)
    }
}

/// Value of the tree, or 0 when it exceeds the depth limit or is empty.
pub fn max_fitness(tree: &SyntaxTree, instance: &MaxSpec) -> f64 {
    if tree.is_empty() || tree.depth() > instance.depth_limit {
        return 0.0;
    }
    tree.fold(
        |_| instance.constant,
        |f, a, b| if f == Function::Mul { a * b } else { a + b },
    )
    .unwrap_or(0.0)
}

/// Number of lowest internal levels that should add rather than multiply.
///
/// Both operators are monotone, so the best value at height `h` is the better
/// of doubling or squaring the best value at `h - 1`. Adding wins while that
/// value is below 2; at exactly 2 both give 4 and we multiply.
pub fn additive_levels(instance: &MaxSpec) -> usize {
    match (instance.has(Function::Add), instance.has(Function::Mul)) {
        (true, false) => instance.depth_limit,
        (false, _) => 0,
        (true, true) => {
            let mut value = instance.constant;
            let mut levels = 0;
            while levels < instance.depth_limit && value < 2.0 {
                value *= 2.0;
                levels += 1;
            }
            levels
        }
    }
}

/// Complete tree of the depth limit with `+` on the lowest internal levels and `*` above.
pub fn max_reference_tree(instance: &MaxSpec) -> SyntaxTree {
    let adds = additive_levels(instance);
    let mut level = SyntaxTree::leaf(Terminal::Const);
    for height in 1..=instance.depth_limit {
        let f = if height <= adds { Function::Add } else { Function::Mul };
        level = SyntaxTree::branch(f, &level, &level);
    }
    level
}

/// Largest attainable value within the depth limit.
pub fn max_optimal_value(instance: &MaxSpec) -> f64 {
    max_fitness(&max_reference_tree(instance), instance)
}

/// Every tree shape of depth at most `depth` with every labelling, for tests.
#[doc(hidden)]
pub fn all_trees(depth: usize, functions: &[Function]) -> Vec<SyntaxTree> {
    let mut trees = vec![SyntaxTree::leaf(Terminal::Const)];
    for _ in 0..depth {
        let mut next = vec![SyntaxTree::leaf(Terminal::Const)];
        for l in &trees {
            for r in &trees {
                for &f in functions {
                    next.push(SyntaxTree::branch(f, l, r));
                }
            }
        }
        trees = next;
    }
    trees
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_reference_values() {
        let both = vec![Function::Add, Function::Mul];
        let instance = MaxSpec::new(1.0, 2, both.clone()).unwrap();
        assert_eq!(max_optimal_value(&instance), 4.0);
        assert_eq!(max_reference_tree(&instance).to_string(), "*(+(t, t), +(t, t))");
        let instance = MaxSpec::new(1.0, 3, both.clone()).unwrap();
        assert_eq!(max_optimal_value(&instance), 16.0);
        let instance = MaxSpec::new(1.0, 3, vec![Function::Add]).unwrap();
        assert_eq!(max_optimal_value(&instance), 8.0);
        assert_eq!(instance.problem_size(), 15);
    }

    #[test]
    fn level_rule_matches_floor_formula_value_at_common_constants() {
        for t in [0.5, 1.0, 2.0] {
            for depth in 0..=8 {
                let instance = MaxSpec::new(t, depth, vec![Function::Add, Function::Mul]).unwrap();
                let adds = ((0.5 + 1.0 / t).floor() as usize).min(depth);
                let mut value = t;
                for h in 1..=depth {
                    value = if h <= adds { 2.0 * value } else { value * value };
                }
                assert_eq!(max_optimal_value(&instance), value, "t={t} D={depth}");
            }
        }
    }

    #[test]
    fn too_deep_is_worthless() {
        let instance = MaxSpec::new(2.0, 1, vec![Function::Add, Function::Mul]).unwrap();
        let tree: SyntaxTree = "+(t, +(t, t))".parse().unwrap();
        assert_eq!(max_fitness(&tree, &instance), 0.0);
        assert_eq!(max_fitness(&SyntaxTree::new(), &instance), 0.0);
    }

    #[test]
    fn reference_is_optimal_by_exhaustion() {
        let both = [Function::Add, Function::Mul];
        for depth in 0..=3 {
            let trees = all_trees(depth, &both);
            for t in [0.1, 0.25, 0.3, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0] {
                let instance = MaxSpec::new(t, depth, both.to_vec()).unwrap();
                let best = trees.iter().map(|tr| max_fitness(tr, &instance)).fold(0.0, f64::max);
                let opt = max_optimal_value(&instance);
                assert!((best - opt).abs() <= 1e-12 * best, "t={t} D={depth}: {best} vs {opt}");
            }
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(MaxSpec::new(0.0, 2, vec![Function::Add]).is_err());
        assert!(MaxSpec::new(1.0, 2, vec![Function::And]).is_err());
        assert!(MaxSpec::new(1.0, 2, vec![]).is_err());
    }
}
