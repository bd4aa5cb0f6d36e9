//! Experiment configuration files (TOML).
//!
//! A minimal file needs `problem`, `n`, `engine`, `trials` and `seed`;
//! everything else has a default. See the README for the full schema.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::growth::Growth;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    Order,
    Majority,
    PlusCMajority,
    Supermajority,
    Sorting,
    /// Sweep values are depth limits.
    Max,
    Boolean,
    Identification,
    GsgpFit,
    GsgpDnf,
}

impl ProblemKind {
    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Order => "order",
            ProblemKind::Majority => "majority",
            ProblemKind::PlusCMajority => "plus-c-majority",
            ProblemKind::Supermajority => "supermajority",
            ProblemKind::Sorting => "sorting",
            ProblemKind::Max => "max",
            ProblemKind::Boolean => "boolean",
            ProblemKind::Identification => "identification",
            ProblemKind::GsgpFit => "gsgp-fit",
            ProblemKind::GsgpDnf => "gsgp-dnf",
        }
    }

    fn tree_based(self) -> bool {
        !matches!(self, ProblemKind::Identification | ProblemKind::GsgpFit | ProblemKind::GsgpDnf)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EngineKind {
    RlsGp,
    RlsGpStrict,
    OnePlusOneGp,
    OnePlusOneGpStrict,
    SmoGp,
    LinearGp,
    Gsgp,
}

impl EngineKind {
    pub fn name(self) -> &'static str {
        match self {
            EngineKind::RlsGp => "rls-gp",
            EngineKind::RlsGpStrict => "rls-gp-strict",
            EngineKind::OnePlusOneGp => "one-plus-one-gp",
            EngineKind::OnePlusOneGpStrict => "one-plus-one-gp-strict",
            EngineKind::SmoGp => "smo-gp",
            EngineKind::LinearGp => "linear-gp",
            EngineKind::Gsgp => "gsgp",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParsimonyKind {
    #[default]
    None,
    Lexicographic,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TerminationKind {
    #[default]
    Optimum,
    MinimalOptimum,
    SampledErrorZero,
    BudgetOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperationName {
    Insert,
    Delete,
    Substitute,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubstitutionName {
    #[default]
    SelfExcluded,
    SelfAllowed,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeletionName {
    #[default]
    Leaf,
    Subtree,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InsertionName {
    #[default]
    UniformNode,
    DepthWeightedLeaf,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmptyTreeName {
    #[default]
    AnyOperation,
    InsertionOnly,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootDeletionName {
    #[default]
    Empty,
    NoOp,
}

fn all_operations() -> Vec<OperationName> {
    vec![OperationName::Insert, OperationName::Delete, OperationName::Substitute]
}

/// HVL-Prime settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MutationSection {
    pub operations: Vec<OperationName>,
    pub substitution: SubstitutionName,
    pub deletion: DeletionName,
    pub insertion: InsertionName,
    /// Maximum leaf count as a function of `n`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size_limit: Option<Growth>,
    pub empty_tree: EmptyTreeName,
    pub root_deletion: RootDeletionName,
}

impl Default for MutationSection {
    fn default() -> Self {
        Self {
            operations: all_operations(),
            substitution: SubstitutionName::default(),
            deletion: DeletionName::default(),
            insertion: InsertionName::default(),
            size_limit: None,
            empty_tree: EmptyTreeName::default(),
            root_deletion: RootDeletionName::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightsName {
    Unit,
    /// Weight `i` for variable `i`.
    Linear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum MeasureName {
    Inv,
    Ham,
    Run,
    Las,
    Exc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FunctionName {
    And,
    Or,
    Xor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetName {
    And,
    /// Conjunction of the first `target_vars` variables.
    AndPrefix,
    Xor,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrainingName {
    #[default]
    Complete,
    Static,
    Dynamic,
    /// Row `i` sets only `x_i` false.
    Minimal,
    /// The minimal rows plus `n + 1` all-true rows.
    Padded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeName {
    Full,
    Fbm,
    Fabm,
    Vbm,
    Msbm,
}

/// Problem parameters; which ones apply depends on the problem.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProblemParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightsName>,
    /// Margin for +c-MAJORITY.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureName>,
    /// MAX leaf constant.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<f64>,
    /// Function set for MAX (`add`, `mul`) is always both; Boolean problems use this list.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub functions: Option<Vec<FunctionName>>,
    pub negations: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<TargetName>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_vars: Option<Growth>,
    pub training: TrainingName,
    /// Rows per sample for static or dynamic training, or tracked rows for GSGP.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_size: Option<Growth>,
    /// Identification stopping threshold on expected error.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheme: Option<SchemeName>,
    /// Block size `v` for FBM, FABM and VBM.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block: Option<Growth>,
    /// DNF term count.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<Growth>,
    /// DNF term width.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width: Option<usize>,
}

fn default_budget() -> Growth {
    "100 n^2 ln n".parse().expect("valid default")
}

fn zero() -> Growth {
    Growth::constant(0)
}

fn is_zero(g: &Growth) -> bool {
    g.text() == "0"
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemKind,
    /// Sweep values. For MAX these are depth limits; growth expressions then
    /// see the node count of the complete tree.
    pub n: Vec<usize>,
    pub engine: EngineKind,
    pub trials: u32,
    pub seed: u64,
    /// Iteration budget.
    #[serde(default = "default_budget")]
    pub budget: Growth,
    /// Leaves in the uniformly random initial tree.
    #[serde(default = "zero", skip_serializing_if = "is_zero")]
    pub t_init: Growth,
    #[serde(default)]
    pub parsimony: ParsimonyKind,
    #[serde(default)]
    pub termination: TerminationKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory_every: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub mutation: MutationSection,
    #[serde(default)]
    pub params: ProblemParams,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Parse(String),
    #[error("invalid config: {0}")]
    Invalid(String),
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let config: Self = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Value growth expressions are evaluated at for a sweep value.
    pub fn scale(&self, n: usize) -> f64 {
        match self.problem {
            ProblemKind::Max => ((1u128 << (n + 1).min(127)) - 1) as f64,
            _ => n as f64,
        }
    }

    pub fn budget_for(&self, n: usize) -> u64 {
        self.budget.eval_ceil(self.scale(n))
    }

    /// Canonical `key=value` summary of the parameters that shape an instance.
    pub fn params_label(&self) -> String {
        let mut parts = Vec::new();
        let p = &self.params;
        if let Some(w) = p.weights {
            parts.push(format!("weights={w:?}").to_lowercase());
        }
        if let Some(c) = p.c {
            parts.push(format!("c={c}"));
        }
        if let Some(m) = p.measure {
            parts.push(format!("measure={}", format!("{m:?}").to_uppercase()));
        }
        if let Some(t) = p.constant {
            parts.push(format!("t={t}"));
        }
        if let Some(f) = &p.functions {
            let names: Vec<String> = f.iter().map(|f| format!("{f:?}").to_lowercase()).collect();
            parts.push(format!("functions={}", names.join("+")));
        }
        if p.negations {
            parts.push("negations".into());
        }
        if let Some(t) = p.target {
            parts.push(format!("target={t:?}").to_lowercase());
        }
        if let Some(m) = &p.target_vars {
            parts.push(format!("m={m}"));
        }
        if self.problem == ProblemKind::Boolean {
            parts.push(format!("training={:?}", p.training).to_lowercase());
        }
        if let Some(s) = &p.sample_size {
            parts.push(format!("s={s}"));
        }
        if let Some(d) = p.delta {
            parts.push(format!("delta={d}"));
        }
        if let Some(s) = p.scheme {
            parts.push(format!("scheme={s:?}").to_lowercase());
        }
        if let Some(v) = &p.block {
            parts.push(format!("v={v}"));
        }
        if let Some(a) = &p.terms {
            parts.push(format!("terms={a}"));
        }
        if let Some(b) = p.width {
            parts.push(format!("width={b}"));
        }
        if self.t_init.text() != "0" {
            parts.push(format!("t_init={}", self.t_init));
        }
        if self.parsimony == ParsimonyKind::Lexicographic {
            parts.push("parsimony=lexicographic".into());
        }
        if let Some(l) = &self.mutation.size_limit {
            parts.push(format!("size_limit={l}"));
        }
        if self.mutation.deletion == DeletionName::Subtree {
            parts.push("deletion=subtree".into());
        }
        parts.join(";")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        if self.n.is_empty() {
            return bad("n must list at least one size");
        }
        if self.n.contains(&0) {
            return bad("n values must be positive");
        }
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.mutation.operations.is_empty() {
            return bad("mutation.operations must not be empty");
        }
        let p = &self.params;
        let tree_engine = !matches!(self.engine, EngineKind::LinearGp | EngineKind::Gsgp);
        match self.problem {
            ProblemKind::Identification if self.engine != EngineKind::LinearGp => {
                return bad("identification runs only with engine linear-gp")
            }
            ProblemKind::GsgpFit | ProblemKind::GsgpDnf if self.engine != EngineKind::Gsgp => {
                return bad("gsgp problems run only with engine gsgp")
            }
            kind if kind.tree_based() && !tree_engine => {
                return bad(&format!("engine {} cannot run {}", self.engine.name(), kind.name()))
            }
            _ => {}
        }
        if self.engine == EngineKind::SmoGp && !matches!(self.problem, ProblemKind::Order | ProblemKind::Majority) {
            return bad("smo-gp needs a known Pareto front: use order or majority");
        }
        match self.problem {
            ProblemKind::PlusCMajority => match p.c {
                None => return bad("plus-c-majority needs params.c"),
                Some(0) => return bad("params.c must be at least 1"),
                _ => {}
            },
            ProblemKind::Sorting if p.measure.is_none() => return bad("sorting needs params.measure"),
            ProblemKind::Max => {
                let t = p.constant.unwrap_or(1.0);
                if !(t.is_finite() && t > 0.0) {
                    return bad("params.constant must be positive");
                }
                if self.n.iter().any(|&d| d > 9) {
                    return bad("MAX depth limits above 9 overflow floating point");
                }
            }
            ProblemKind::Boolean => {
                if p.target.is_none() {
                    return bad("boolean needs params.target");
                }
                if p.target == Some(TargetName::AndPrefix) && p.target_vars.is_none() {
                    return bad("target and-prefix needs params.target_vars");
                }
                if matches!(p.training, TrainingName::Static | TrainingName::Dynamic) && p.sample_size.is_none() {
                    return bad("static and dynamic training need params.sample_size");
                }
                if p.functions.as_ref().is_some_and(Vec::is_empty) {
                    return bad("params.functions must not be empty");
                }
            }
            ProblemKind::Identification => {
                if p.sample_size.is_none() {
                    return bad("identification needs params.sample_size");
                }
                if p.delta.is_some_and(|d| d.is_nan() || d < 0.0) {
                    return bad("params.delta must be non-negative");
                }
            }
            ProblemKind::GsgpFit | ProblemKind::GsgpDnf => {
                match p.scheme {
                    None => return bad("gsgp needs params.scheme"),
                    Some(SchemeName::Fbm | SchemeName::Fabm | SchemeName::Vbm) if p.block.is_none() => {
                        return bad("fbm, fabm and vbm need params.block")
                    }
                    _ => {}
                }
                if self.problem == ProblemKind::GsgpDnf {
                    if p.terms.is_none() || p.width.is_none() {
                        return bad("gsgp-dnf needs params.terms and params.width");
                    }
                    if self.n.iter().any(|&n| n > gplab_core::gsgp::MAX_COMPLETE_VARS) {
                        return bad("gsgp-dnf fits complete tables and needs n <= 16");
                    }
                } else if p.sample_size.is_none() {
                    return bad("gsgp-fit needs params.sample_size");
                }
            }
            _ => {}
        }
        if let Some(m) = p.weights {
            if m == WeightsName::Linear && !matches!(self.problem, ProblemKind::Order | ProblemKind::Majority) {
                return bad("params.weights applies to order and majority only");
            }
        }
        Ok(())
    }
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    ExperimentConfig::from_toml(&text)
}
