//! Minterms and the per-run samplers that draw them.

use std::fmt;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use thiserror::Error;

use crate::boolean::BitRow;
use crate::rng::RandomSource;

/// Conjunction of literals; each support variable is required to equal its polarity bit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Minterm {
    support: BitRow,
    polarity: BitRow,
}

impl Minterm {
    /// Builds from `(variable, required value)` pairs. Repeated variables keep the last value.
    pub fn new(n: usize, literals: &[(usize, bool)]) -> Self {
        let mut support = BitRow::zeros(n);
        let mut polarity = BitRow::zeros(n);
        for &(var, value) in literals {
            support.set(var, true);
            polarity.set(var, value);
        }
        Self { support, polarity }
    }

    /// The empty conjunction, true everywhere.
    pub fn always(n: usize) -> Self {
        Self::new(n, &[])
    }

    pub fn n(&self) -> usize {
        self.support.len()
    }

    pub fn len(&self) -> usize {
        self.support.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn support_mask(&self) -> &BitRow {
        &self.support
    }

    /// Required values, zero outside the support.
    pub fn polarity_mask(&self) -> &BitRow {
        &self.polarity
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.support.get(i)).collect()
    }

    pub fn literals(&self) -> Vec<(usize, bool)> {
        self.support().into_iter().map(|i| (i, self.polarity.get(i))).collect()
    }

    pub fn matches(&self, row: &BitRow) -> bool {
        row.words()
            .iter()
            .zip(self.support.words())
            .zip(self.polarity.words())
            .all(|((x, s), p)| (x ^ p) & s == 0)
    }
}

impl fmt::Display for Minterm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for (k, (i, v)) in self.literals().into_iter().enumerate() {
            if k > 0 {
                write!(f, "&")?;
            }
            write!(f, "{}x{}", if v { "" } else { "!" }, i + 1)?;
        }
        Ok(())
    }
}

/// How mutation minterms are chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MutationScheme {
    /// Every variable in every minterm.
    Full,
    /// The same `v` variables for the whole run.
    Fbm(usize),
    /// One variable from each of `v` classes fixed for the run.
    Fabm(usize),
    /// A fresh uniform `v`-subset every time.
    Vbm(usize),
    /// Uniform size then a uniform subset of that size. With `allow_empty`
    /// the size range starts at 0 and the empty minterm may occur.
    Msbm { allow_empty: bool },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error("block size {v} must lie in 1..={n}")]
    BlockSize { v: usize, n: usize },
    #[error("need at least one variable")]
    NoVariables,
    #[error("support or partition does not fit {n} variables")]
    BadLayout { n: usize },
}

impl MutationScheme {
    pub fn validate(&self, n: usize) -> Result<(), SchemeError> {
        if n == 0 {
            return Err(SchemeError::NoVariables);
        }
        match *self {
            MutationScheme::Fbm(v) | MutationScheme::Fabm(v) | MutationScheme::Vbm(v) if v == 0 || v > n => {
                Err(SchemeError::BlockSize { v, n })
            }
            _ => Ok(()),
        }
    }

    /// Fixes whatever the scheme holds constant for one run.
    pub fn sampler(&self, n: usize, rng: &mut RandomSource) -> Result<MintermSampler, SchemeError> {
        self.validate(n)?;
        let kind = match *self {
            MutationScheme::Full => SamplerKind::Full,
            MutationScheme::Fbm(v) => {
                let mut s = sample(rng, n, v).into_vec();
                s.sort_unstable();
                SamplerKind::Fixed(s)
            }
            MutationScheme::Fabm(v) => {
                let mut vars: Vec<usize> = (0..n).collect();
                vars.shuffle(rng);
                let mut classes = vec![Vec::new(); v];
                for (k, var) in vars.into_iter().enumerate() {
                    classes[k % v].push(var);
                }
                SamplerKind::Partition(classes)
            }
            MutationScheme::Vbm(v) => SamplerKind::Subset(v),
            MutationScheme::Msbm { allow_empty } => SamplerKind::Sized { allow_empty },
        };
        Ok(MintermSampler { n, kind })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum SamplerKind {
    Full,
    Fixed(Vec<usize>),
    Partition(Vec<Vec<usize>>),
    Subset(usize),
    Sized { allow_empty: bool },
}

/// A scheme instantiated for one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MintermSampler {
    n: usize,
    kind: SamplerKind,
}

impl MintermSampler {
    /// Fixed-support sampler over the given variables.
    pub fn with_support(n: usize, support: Vec<usize>) -> Result<Self, SchemeError> {
        if support.is_empty() || support.iter().any(|&v| v >= n) {
            return Err(SchemeError::BadLayout { n });
        }
        let mut support = support;
        support.sort_unstable();
        support.dedup();
        Ok(Self { n, kind: SamplerKind::Fixed(support) })
    }

    /// Partition sampler over explicit classes, which must cover `0..n` exactly once.
    pub fn with_partition(n: usize, classes: Vec<Vec<usize>>) -> Result<Self, SchemeError> {
        let mut seen = vec![false; n];
        for &v in classes.iter().flatten() {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(SchemeError::BadLayout { n });
            }
        }
        if classes.iter().any(Vec::is_empty) || seen.contains(&false) {
            return Err(SchemeError::BadLayout { n });
        }
        Ok(Self { n, kind: SamplerKind::Partition(classes) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The run-fixed support, for fixed-support samplers.
    pub fn fixed_support(&self) -> Option<&[usize]> {
        match &self.kind {
            SamplerKind::Fixed(s) => Some(s),
            _ => None,
        }
    }

    pub fn partition(&self) -> Option<&[Vec<usize>]> {
        match &self.kind {
            SamplerKind::Partition(c) => Some(c),
            _ => None,
        }
    }

    /// Variables whose values can ever separate two rows under this sampler.
    pub fn distinguishing_vars(&self) -> Vec<usize> {
        match &self.kind {
            SamplerKind::Fixed(s) => s.clone(),
            _ => (0..self.n).collect(),
        }
    }

    pub fn sample(&self, rng: &mut RandomSource) -> Minterm {
        let n = self.n;
        let vars: Vec<usize> = match &self.kind {
            SamplerKind::Full => (0..n).collect(),
            SamplerKind::Fixed(s) => s.clone(),
            SamplerKind::Partition(classes) => classes.iter().map(|c| c[rng.index(c.len())]).collect(),
            SamplerKind::Subset(v) => sample(rng, n, *v).into_vec(),
            SamplerKind::Sized { allow_empty } => {
                let low = usize::from(!allow_empty);
                let v = low + rng.index(n + 1 - low);
                sample(rng, n, v).into_vec()
            }
        };
        let mut support = BitRow::zeros(n);
        for &v in &vars {
            support.set(v, true);
        }
        let random = BitRow::random(n, rng);
        let polarity = random.words().iter().zip(support.words()).map(|(r, s)| r & s).collect();
        Minterm {
            polarity: BitRow::from_words(n, polarity),
            support,
        }
    }

    /// Every support set the sampler can produce, each sorted. Exponential
    /// in `n` for the subset-based samplers; meant for small checks.
    pub fn reachable_supports(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let subsets_of = |size: Option<usize>| -> Vec<Vec<usize>> {
            (0u64..1 << n)
                .filter(|m| size.is_none_or(|s| m.count_ones() as usize == s))
                .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
                .collect()
        };
        match &self.kind {
            SamplerKind::Full => vec![(0..n).collect()],
            SamplerKind::Fixed(s) => vec![s.clone()],
            SamplerKind::Partition(classes) => {
                let mut out: Vec<Vec<usize>> = vec![Vec::new()];
                for c in classes {
                    out = out
                        .into_iter()
                        .flat_map(|prefix| {
                            c.iter().map(move |&v| {
                                let mut p = prefix.clone();
                                p.push(v);
                                p
                            })
                        })
                        .collect();
                }
                for s in &mut out {
                    s.sort_unstable();
                }
                out
            }
            SamplerKind::Subset(v) => subsets_of(Some(*v)),
            SamplerKind::Sized { allow_empty } => {
                subsets_of(None).into_iter().filter(|s| *allow_empty || !s.is_empty()).collect()
            }
        }
    }
}
