//! Binary syntax trees stored in an index arena.
//!
//! Every internal node has exactly two children. Leaves and internal nodes are
//! additionally kept in dense lists so that uniform node sampling is O(1), and
//! the tree keeps a histogram of its symbols so count-based fitness functions
//! never need to walk it. Structural edits can be recorded in a journal and
//! rolled back exactly, which lets the search engines mutate the incumbent in
//! place instead of copying it every iteration.

use std::fmt;
use std::num::NonZeroU32;
use std::str::FromStr;

use thiserror::Error;

/// Binary function symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Function {
    /// Structure-only joint used by the structural problems.
    Join,
    And,
    Or,
    Xor,
    Add,
    Mul,
}

impl Function {
    pub const COUNT: usize = 6;
    pub const ALL: [Function; Function::COUNT] = [
        Function::Join,
        Function::And,
        Function::Or,
        Function::Xor,
        Function::Add,
        Function::Mul,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Function::Join => "J",
            Function::And => "AND",
            Function::Or => "OR",
            Function::Xor => "XOR",
            Function::Add => "+",
            Function::Mul => "*",
        }
    }

    fn from_symbol(s: &str) -> Option<Self> {
        Some(match s {
            "J" => Function::Join,
            "AND" => Function::And,
            "OR" => Function::Or,
            "XOR" => Function::Xor,
            "+" | "ADD" => Function::Add,
            "*" | "MUL" => Function::Mul,
            _ => return None,
        })
    }
}

/// A variable or its complement. Variables are zero-based internally and
/// printed one-based (`x1`, `!x1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    var: u32,
    negated: bool,
}

impl Literal {
    pub const fn positive(var: u32) -> Self {
        Self { var, negated: false }
    }

    pub const fn negative(var: u32) -> Self {
        Self { var, negated: true }
    }

    pub const fn new(var: u32, negated: bool) -> Self {
        Self { var, negated }
    }

    pub fn var(self) -> u32 {
        self.var
    }

    pub fn is_negated(self) -> bool {
        self.negated
    }

    pub fn complement(self) -> Self {
        Self {
            var: self.var,
            negated: !self.negated,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "!x{}", self.var + 1)
        } else {
            write!(f, "x{}", self.var + 1)
        }
    }
}

/// Leaf symbols: literals, or the single constant used by MAX.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Terminal {
    Lit(Literal),
    Const,
}

impl Terminal {
    pub fn positive(var: u32) -> Self {
        Terminal::Lit(Literal::positive(var))
    }

    pub fn negative(var: u32) -> Self {
        Terminal::Lit(Literal::negative(var))
    }

    pub fn literal(self) -> Option<Literal> {
        match self {
            Terminal::Lit(l) => Some(l),
            Terminal::Const => None,
        }
    }

    /// Dense histogram index.
    pub fn code(self) -> usize {
        match self {
            Terminal::Const => 0,
            Terminal::Lit(l) => 1 + 2 * l.var as usize + l.negated as usize,
        }
    }
}

impl fmt::Display for Terminal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Terminal::Lit(l) => l.fmt(f),
            Terminal::Const => f.write_str("t"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeContent {
    Function(Function),
    Terminal(Terminal),
}

/// Handle into a tree's arena. Only meaningful for the tree that issued it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(NonZeroU32);

impl NodeId {
    fn from_index(i: usize) -> Self {
        NodeId(NonZeroU32::new(i as u32 + 1).expect("arena index overflow"))
    }

    fn index(self) -> usize {
        self.0.get() as usize - 1
    }
}

#[derive(Clone, Debug)]
struct Node {
    content: NodeContent,
    parent: Option<NodeId>,
    left: Option<NodeId>,
    right: Option<NodeId>,
    /// Position in the leaf or internal list, depending on the content.
    slot: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum List {
    Leaves,
    Internals,
}

#[derive(Clone, Debug)]
enum Undo {
    Node(NodeId, Node),
    ArenaPush,
    FreePush,
    FreePop(NodeId),
    ListPush(List),
    ListPop(List, NodeId),
    ListSet(List, u32, NodeId),
    Root(Option<NodeId>),
    TerminalCount(usize, u32),
    TerminalGrow(usize),
    FunctionCount(usize, u32),
}

/// Rooted binary tree over [`Function`] and [`Terminal`] symbols.
#[derive(Clone, Debug, Default)]
pub struct SyntaxTree {
    nodes: Vec<Node>,
    free: Vec<NodeId>,
    root: Option<NodeId>,
    leaves: Vec<NodeId>,
    internals: Vec<NodeId>,
    terminal_counts: Vec<u32>,
    function_counts: [u32; Function::COUNT],
    journal: Option<Vec<Undo>>,
}

impl SyntaxTree {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn leaf(t: Terminal) -> Self {
        let mut tree = Self::new();
        tree.set_root_leaf(t);
        tree
    }

    /// Joins two trees under a new function node.
    pub fn branch(f: Function, left: &SyntaxTree, right: &SyntaxTree) -> Self {
        let mut tree = Self::new();
        let (Some(l), Some(r)) = (left.root, right.root) else {
            panic!("cannot branch on an empty subtree");
        };
        let g = tree.new_internal(f, None);
        let lc = tree.graft(left, l, g);
        let rc = tree.graft(right, r, g);
        tree.write(g, |n| {
            n.left = Some(lc);
            n.right = Some(rc);
        });
        tree.set_root(Some(g));
        tree
    }

    fn graft(&mut self, other: &SyntaxTree, id: NodeId, parent: NodeId) -> NodeId {
        match other.content(id) {
            NodeContent::Terminal(t) => self.new_leaf(t, Some(parent)),
            NodeContent::Function(f) => {
                let g = self.new_internal(f, Some(parent));
                let (l, r) = other.children(id).expect("internal node");
                let lc = self.graft(other, l, g);
                let rc = self.graft(other, r, g);
                self.write(g, |n| {
                    n.left = Some(lc);
                    n.right = Some(rc);
                });
                g
            }
        }
    }

    // ---------------------------------------------------------------- queries

    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    pub fn root(&self) -> Option<NodeId> {
        self.root
    }

    /// Number of leaves; the size measure used throughout.
    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    pub fn internal_count(&self) -> usize {
        self.internals.len()
    }

    pub fn node_count(&self) -> usize {
        self.leaves.len() + self.internals.len()
    }

    /// Node `i` of `0..node_count()`, leaves first. Order is arbitrary but deterministic.
    pub fn node_at(&self, i: usize) -> NodeId {
        if i < self.leaves.len() {
            self.leaves[i]
        } else {
            self.internals[i - self.leaves.len()]
        }
    }

    pub fn leaf_at(&self, i: usize) -> NodeId {
        self.leaves[i]
    }

    pub fn internal_at(&self, i: usize) -> NodeId {
        self.internals[i]
    }

    pub fn content(&self, id: NodeId) -> NodeContent {
        self.nodes[id.index()].content
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id.index()].parent
    }

    pub fn children(&self, id: NodeId) -> Option<(NodeId, NodeId)> {
        let n = &self.nodes[id.index()];
        Some((n.left?, n.right?))
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        matches!(self.content(id), NodeContent::Terminal(_))
    }

    /// How many leaves carry `t`.
    pub fn terminal_count(&self, t: Terminal) -> u32 {
        self.terminal_counts.get(t.code()).copied().unwrap_or(0)
    }

    pub fn literal_count(&self, var: u32, negated: bool) -> u32 {
        self.terminal_count(Terminal::Lit(Literal::new(var, negated)))
    }

    /// Highest variable index among the leaves, from the histogram.
    pub fn max_literal_var(&self) -> Option<u32> {
        let code = self.terminal_counts.iter().rposition(|&c| c > 0)?;
        (code > 0).then(|| ((code - 1) / 2) as u32)
    }

    pub fn function_count(&self, f: Function) -> u32 {
        self.function_counts[f.index()]
    }

    /// True when every internal node carries `f` (vacuously true for leaves and the empty tree).
    pub fn only_function(&self, f: Function) -> bool {
        self.function_count(f) as usize == self.internals.len()
    }

    /// Length of the longest root-to-leaf path in edges; 0 for a single leaf and the empty tree.
    pub fn depth(&self) -> usize {
        let Some(root) = self.root else { return 0 };
        let mut stack = vec![(root, 0usize)];
        let mut deepest = 0;
        while let Some((id, d)) = stack.pop() {
            match self.children(id) {
                Some((l, r)) => {
                    stack.push((l, d + 1));
                    stack.push((r, d + 1));
                }
                None => deepest = deepest.max(d),
            }
        }
        deepest
    }

    /// Calls `visit` on every leaf symbol from left to right.
    pub fn for_each_leaf_in_order(&self, mut visit: impl FnMut(Terminal)) {
        let Some(root) = self.root else { return };
        let mut stack = Vec::with_capacity(64);
        stack.push(root);
        while let Some(id) = stack.pop() {
            let n = &self.nodes[id.index()];
            match n.content {
                NodeContent::Terminal(t) => visit(t),
                NodeContent::Function(_) => {
                    stack.push(n.right.expect("internal node"));
                    stack.push(n.left.expect("internal node"));
                }
            }
        }
    }

    /// Left-to-right leaf symbols.
    pub fn in_order_terminals(&self) -> Vec<Terminal> {
        let mut out = Vec::with_capacity(self.leaves.len());
        self.for_each_leaf_in_order(|t| out.push(t));
        out
    }

    /// Left-to-right literals; the constant is skipped.
    pub fn in_order_literals(&self) -> Vec<Literal> {
        let mut out = Vec::with_capacity(self.leaves.len());
        self.for_each_leaf_in_order(|t| {
            if let Terminal::Lit(l) = t {
                out.push(l)
            }
        });
        out
    }

    /// Post-order fold: `leaf` maps terminals, `combine` merges two child values.
    pub fn fold<T>(
        &self,
        mut leaf: impl FnMut(Terminal) -> T,
        mut combine: impl FnMut(Function, T, T) -> T,
    ) -> Option<T> {
        let root = self.root?;
        let mut values: Vec<T> = Vec::new();
        let mut stack = vec![(root, false)];
        while let Some((id, expanded)) = stack.pop() {
            let n = &self.nodes[id.index()];
            match n.content {
                NodeContent::Terminal(t) => values.push(leaf(t)),
                NodeContent::Function(f) => {
                    if expanded {
                        let r = values.pop().expect("right value");
                        let l = values.pop().expect("left value");
                        values.push(combine(f, l, r));
                    } else {
                        stack.push((id, true));
                        stack.push((n.right.expect("internal node"), false));
                        stack.push((n.left.expect("internal node"), false));
                    }
                }
            }
        }
        values.pop()
    }

    /// Checks every structural invariant; intended for tests and debugging.
    pub fn validate(&self) -> Result<(), String> {
        let mut seen_leaves = 0usize;
        let mut seen_internals = 0usize;
        let mut terminal_counts = vec![0u32; self.terminal_counts.len()];
        let mut function_counts = [0u32; Function::COUNT];
        if let Some(root) = self.root {
            if self.parent(root).is_some() {
                return Err("root has a parent".into());
            }
            let mut stack = vec![root];
            while let Some(id) = stack.pop() {
                let n = &self.nodes[id.index()];
                match n.content {
                    NodeContent::Terminal(t) => {
                        if n.left.is_some() || n.right.is_some() {
                            return Err(format!("leaf {id:?} has children"));
                        }
                        if self.leaves.get(n.slot as usize) != Some(&id) {
                            return Err(format!("leaf {id:?} has a stale slot"));
                        }
                        if t.code() >= terminal_counts.len() {
                            return Err("terminal histogram too short".into());
                        }
                        terminal_counts[t.code()] += 1;
                        seen_leaves += 1;
                    }
                    NodeContent::Function(f) => {
                        let (Some(l), Some(r)) = (n.left, n.right) else {
                            return Err(format!("function node {id:?} lacks a child"));
                        };
                        for c in [l, r] {
                            if self.parent(c) != Some(id) {
                                return Err(format!("child {c:?} does not point back to {id:?}"));
                            }
                            stack.push(c);
                        }
                        if self.internals.get(n.slot as usize) != Some(&id) {
                            return Err(format!("internal {id:?} has a stale slot"));
                        }
                        function_counts[f.index()] += 1;
                        seen_internals += 1;
                    }
                }
            }
        }
        if seen_leaves != self.leaves.len() || seen_internals != self.internals.len() {
            return Err(format!(
                "reachable {seen_leaves}/{seen_internals} nodes but lists hold {}/{}",
                self.leaves.len(),
                self.internals.len()
            ));
        }
        if seen_leaves > 0 && seen_internals + 1 != seen_leaves {
            return Err("node count is not 2 * leaves - 1".into());
        }
        if terminal_counts != self.terminal_counts || function_counts != self.function_counts {
            return Err("symbol histogram out of sync".into());
        }
        if self.free.len() + seen_leaves + seen_internals != self.nodes.len() {
            return Err("arena leaks nodes".into());
        }
        Ok(())
    }

    // ---------------------------------------------------------------- journal

    /// Starts recording edits so they can be undone with [`rollback`](Self::rollback).
    pub fn checkpoint(&mut self) {
        assert!(self.journal.is_none(), "checkpoint already open");
        self.journal = Some(Vec::new());
    }

    /// Keeps every edit since the last checkpoint.
    pub fn commit(&mut self) {
        self.journal = None;
    }

    /// Restores the exact state at the last checkpoint.
    pub fn rollback(&mut self) {
        let Some(journal) = self.journal.take() else {
            panic!("rollback without checkpoint");
        };
        for undo in journal.into_iter().rev() {
            match undo {
                Undo::Node(id, node) => self.nodes[id.index()] = node,
                Undo::ArenaPush => {
                    self.nodes.pop();
                }
                Undo::FreePush => {
                    self.free.pop();
                }
                Undo::FreePop(id) => self.free.push(id),
                Undo::ListPush(list) => {
                    self.list_mut(list).pop();
                }
                Undo::ListPop(list, id) => self.list_mut(list).push(id),
                Undo::ListSet(list, slot, id) => self.list_mut(list)[slot as usize] = id,
                Undo::Root(r) => self.root = r,
                Undo::TerminalCount(code, c) => self.terminal_counts[code] = c,
                Undo::TerminalGrow(len) => self.terminal_counts.truncate(len),
                Undo::FunctionCount(i, c) => self.function_counts[i] = c,
            }
        }
    }

    fn log(&mut self, undo: Undo) {
        if let Some(j) = self.journal.as_mut() {
            j.push(undo);
        }
    }

    // ------------------------------------------------------------- primitives

    fn list_mut(&mut self, list: List) -> &mut Vec<NodeId> {
        match list {
            List::Leaves => &mut self.leaves,
            List::Internals => &mut self.internals,
        }
    }

    fn write(&mut self, id: NodeId, edit: impl FnOnce(&mut Node)) {
        if self.journal.is_some() {
            let old = self.nodes[id.index()].clone();
            self.log(Undo::Node(id, old));
        }
        edit(&mut self.nodes[id.index()]);
    }

    fn alloc(&mut self, node: Node) -> NodeId {
        if let Some(id) = self.free.pop() {
            self.log(Undo::FreePop(id));
            self.write(id, |n| *n = node);
            id
        } else {
            self.nodes.push(node);
            self.log(Undo::ArenaPush);
            NodeId::from_index(self.nodes.len() - 1)
        }
    }

    fn set_root(&mut self, root: Option<NodeId>) {
        let old = self.root;
        self.log(Undo::Root(old));
        self.root = root;
    }

    fn list_push(&mut self, list: List, id: NodeId) {
        let slot = self.list_mut(list).len() as u32;
        self.list_mut(list).push(id);
        self.log(Undo::ListPush(list));
        self.write(id, |n| n.slot = slot);
    }

    fn list_remove(&mut self, list: List, id: NodeId) {
        let slot = self.nodes[id.index()].slot;
        let last = self.list_mut(list).pop().expect("list holds the node");
        self.log(Undo::ListPop(list, last));
        if last != id {
            self.list_mut(list)[slot as usize] = last;
            self.log(Undo::ListSet(list, slot, id));
            self.write(last, |n| n.slot = slot);
        }
    }

    fn bump_terminal(&mut self, t: Terminal, up: bool) {
        let code = t.code();
        if code >= self.terminal_counts.len() {
            let len = self.terminal_counts.len();
            self.log(Undo::TerminalGrow(len));
            self.terminal_counts.resize(code + 1, 0);
        }
        let old = self.terminal_counts[code];
        self.log(Undo::TerminalCount(code, old));
        self.terminal_counts[code] = if up { old + 1 } else { old - 1 };
    }

    fn bump_function(&mut self, f: Function, up: bool) {
        let i = f.index();
        let old = self.function_counts[i];
        self.log(Undo::FunctionCount(i, old));
        self.function_counts[i] = if up { old + 1 } else { old - 1 };
    }

    fn new_leaf(&mut self, t: Terminal, parent: Option<NodeId>) -> NodeId {
        let id = self.alloc(Node {
            content: NodeContent::Terminal(t),
            parent,
            left: None,
            right: None,
            slot: 0,
        });
        self.list_push(List::Leaves, id);
        self.bump_terminal(t, true);
        id
    }

    fn new_internal(&mut self, f: Function, parent: Option<NodeId>) -> NodeId {
        let id = self.alloc(Node {
            content: NodeContent::Function(f),
            parent,
            left: None,
            right: None,
            slot: 0,
        });
        self.list_push(List::Internals, id);
        self.bump_function(f, true);
        id
    }

    fn release(&mut self, id: NodeId) {
        match self.content(id) {
            NodeContent::Terminal(t) => {
                self.list_remove(List::Leaves, id);
                self.bump_terminal(t, false);
            }
            NodeContent::Function(f) => {
                self.list_remove(List::Internals, id);
                self.bump_function(f, false);
            }
        }
        self.free.push(id);
        self.log(Undo::FreePush);
    }

    fn release_subtree(&mut self, id: NodeId) {
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            if let Some((l, r)) = self.children(x) {
                stack.push(l);
                stack.push(r);
            }
            self.release(x);
        }
    }

    /// Points `parent`'s link (or the root) that referenced `old` at `new`.
    fn relink(&mut self, parent: Option<NodeId>, old: NodeId, new: NodeId) {
        match parent {
            None => self.set_root(Some(new)),
            Some(p) => self.write(p, |n| {
                if n.left == Some(old) {
                    n.left = Some(new);
                } else {
                    n.right = Some(new);
                }
            }),
        }
        self.write(new, |n| n.parent = parent);
    }

    // ------------------------------------------------------------- edit API

    /// Makes `t` the root of an empty tree.
    pub fn set_root_leaf(&mut self, t: Terminal) {
        assert!(self.is_empty(), "tree is not empty");
        let id = self.new_leaf(t, None);
        self.set_root(Some(id));
    }

    /// Replaces `x` by `f(x, leaf)` or `f(leaf, x)`; returns the new function node.
    pub fn insert_above(&mut self, x: NodeId, f: Function, leaf: Terminal, leaf_left: bool) -> NodeId {
        let parent = self.parent(x);
        let g = self.new_internal(f, parent);
        let l = self.new_leaf(leaf, Some(g));
        let (left, right) = if leaf_left { (l, x) } else { (x, l) };
        self.write(g, |n| {
            n.left = Some(left);
            n.right = Some(right);
        });
        self.relink(parent, x, g);
        self.write(x, |n| n.parent = Some(g));
        g
    }

    /// Removes the subtree at `x`; its parent is replaced by `x`'s sibling.
    /// Removing the root empties the tree.
    pub fn remove_subtree(&mut self, x: NodeId) {
        match self.parent(x) {
            None => {
                self.release_subtree(x);
                self.set_root(None);
            }
            Some(p) => {
                let (l, r) = self.children(p).expect("parent is internal");
                let sibling = if l == x { r } else { l };
                let grand = self.parent(p);
                self.relink(grand, p, sibling);
                self.release_subtree(x);
                self.release(p);
            }
        }
    }

    /// Replaces the symbol at `x` with one of the same arity.
    pub fn substitute(&mut self, x: NodeId, content: NodeContent) {
        match (self.content(x), content) {
            (NodeContent::Terminal(old), NodeContent::Terminal(new)) => {
                self.bump_terminal(old, false);
                self.bump_terminal(new, true);
            }
            (NodeContent::Function(old), NodeContent::Function(new)) => {
                self.bump_function(old, false);
                self.bump_function(new, true);
            }
            _ => panic!("substitution must preserve arity"),
        }
        self.write(x, |n| n.content = content);
    }

    /// Empties the tree.
    pub fn clear(&mut self) {
        if let Some(root) = self.root {
            self.remove_subtree(root);
        }
    }
}

impl PartialEq for SyntaxTree {
    /// Structural equality of the rooted trees, ignoring arena layout.
    fn eq(&self, other: &Self) -> bool {
        fn same(a: &SyntaxTree, x: NodeId, b: &SyntaxTree, y: NodeId) -> bool {
            if a.content(x) != b.content(y) {
                return false;
            }
            match (a.children(x), b.children(y)) {
                (Some((al, ar)), Some((bl, br))) => same(a, al, b, bl) && same(a, ar, b, br),
                (None, None) => true,
                _ => false,
            }
        }
        match (self.root, other.root) {
            (None, None) => true,
            (Some(x), Some(y)) => self.node_count() == other.node_count() && same(self, x, other, y),
            _ => false,
        }
    }
}

impl fmt::Display for SyntaxTree {
    /// Prefix notation, e.g. `AND(x1, OR(!x2, x3))`; the empty tree prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &SyntaxTree, id: NodeId, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t.content(id) {
                NodeContent::Terminal(term) => term.fmt(f),
                NodeContent::Function(func) => {
                    let (l, r) = t.children(id).expect("internal node");
                    write!(f, "{}(", func.symbol())?;
                    go(t, l, f)?;
                    f.write_str(", ")?;
                    go(t, r, f)?;
                    f.write_str(")")
                }
            }
        }
        match self.root {
            None => f.write_str("()"),
            Some(r) => go(self, r, f),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot parse tree at byte {at}: {reason}")]
pub struct ParseTreeError {
    pub at: usize,
    pub reason: String,
}

impl FromStr for SyntaxTree {
    type Err = ParseTreeError;

    /// Parses the prefix notation produced by `Display`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        struct Parser<'a> {
            src: &'a [u8],
            pos: usize,
        }
        impl Parser<'_> {
            fn fail<T>(&self, reason: &str) -> Result<T, ParseTreeError> {
                Err(ParseTreeError {
                    at: self.pos,
                    reason: reason.to_string(),
                })
            }
            fn skip_ws(&mut self) {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
                    self.pos += 1;
                }
            }
            fn eat(&mut self, c: u8) -> Result<(), ParseTreeError> {
                self.skip_ws();
                if self.src.get(self.pos) == Some(&c) {
                    self.pos += 1;
                    Ok(())
                } else {
                    self.fail(&format!("expected '{}'", c as char))
                }
            }
            fn word(&mut self) -> &str {
                self.skip_ws();
                let start = self.pos;
                while self.pos < self.src.len()
                    && !matches!(self.src[self.pos], b'(' | b')' | b',')
                    && !self.src[self.pos].is_ascii_whitespace()
                {
                    self.pos += 1;
                }
                std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
            }
            fn expr(&mut self) -> Result<SyntaxTree, ParseTreeError> {
                let w = self.word().to_string();
                if w.is_empty() {
                    return self.fail("expected a symbol");
                }
                if let Some(f) = Function::from_symbol(&w) {
                    self.eat(b'(')?;
                    let l = self.expr()?;
                    self.eat(b',')?;
                    let r = self.expr()?;
                    self.eat(b')')?;
                    return Ok(SyntaxTree::branch(f, &l, &r));
                }
                if w == "t" {
                    return Ok(SyntaxTree::leaf(Terminal::Const));
                }
                let (negated, rest) = match w.strip_prefix(['!', '~']) {
                    Some(rest) => (true, rest),
                    None => (false, w.as_str()),
                };
                match rest.strip_prefix('x').and_then(|d| d.parse::<u32>().ok()) {
                    Some(i) if i >= 1 => Ok(SyntaxTree::leaf(Terminal::Lit(Literal::new(i - 1, negated)))),
                    _ => self.fail(&format!("unknown symbol '{w}'")),
                }
            }
        }
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        p.skip_ws();
        if p.src[p.pos..].starts_with(b"()") {
            p.pos += 2;
            p.skip_ws();
            return if p.pos == p.src.len() {
                Ok(SyntaxTree::new())
            } else {
                p.fail("trailing input")
            };
        }
        let tree = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return p.fail("trailing input");
        }
        Ok(tree)
    }
}
