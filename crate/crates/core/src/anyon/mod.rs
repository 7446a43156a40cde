//! Fibonacci anyons: fusion-path bases, model data, and the braid-group
//! representation on the fusion space.

mod model;
mod rep;
mod unitary;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use model::{validate_model, CheckResidual, Chirality, ModelConstants, ValidationReport};
pub use rep::{
    braid_relation_residual, full_rep_unitary, generator_unitary, word_unitary, Representation,
    SectorBlocks,
};
pub use unitary::{projective_distance, Unitary};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("matrix dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("generator index {index} out of range for {anyons} anyons")]
    GeneratorOutOfRange { index: usize, anyons: usize },
    #[error("word on {word} strands evaluated on a basis of {basis} anyons")]
    StrandMismatch { word: usize, basis: usize },
    #[error("need at least 2 anyons, got {0}")]
    TooFewAnyons(usize),
}

/// Topological charge of the Fibonacci model. Orders as `Vacuum < Tau`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Charge {
    Vacuum,
    Tau,
}

impl Charge {
    pub const ALL: [Charge; 2] = [Charge::Vacuum, Charge::Tau];

    /// Outcomes of `self × τ`.
    pub fn fuse_with_tau(self) -> &'static [Charge] {
        match self {
            Charge::Vacuum => &[Charge::Tau],
            Charge::Tau => &[Charge::Vacuum, Charge::Tau],
        }
    }

    /// Fusion multiplicity `N_{ab}^c` (0 or 1).
    pub fn fuses_to(a: Charge, b: Charge, c: Charge) -> bool {
        match (a, b) {
            (Charge::Vacuum, x) | (x, Charge::Vacuum) => x == c,
            (Charge::Tau, Charge::Tau) => true,
        }
    }

    pub(crate) fn slot(self) -> usize {
        match self {
            Charge::Vacuum => 0,
            Charge::Tau => 1,
        }
    }
}

impl fmt::Display for Charge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Charge::Vacuum => f.write_str("1"),
            Charge::Tau => f.write_str("tau"),
        }
    }
}

impl std::str::FromStr for Charge {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1" | "vacuum" | "one" => Ok(Charge::Vacuum),
            "tau" | "t" | "τ" => Ok(Charge::Tau),
            other => Err(format!("unknown charge {other:?} (expected 1 or tau)")),
        }
    }
}

/// Labels `x_1..x_n`, `x_i` being the total charge of the first `i` anyons.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FusionPath(Vec<Charge>);

impl FusionPath {
    pub fn labels(&self) -> &[Charge] {
        &self.0
    }

    /// 1-based label access.
    pub fn label(&self, i: usize) -> Charge {
        self.0[i - 1]
    }
}

impl fmt::Display for FusionPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Fusion paths of `n` τ anyons with a fixed total charge, in lexicographic order.
#[derive(Clone, Debug)]
pub struct FusionBasis {
    n: usize,
    total_charge: Charge,
    paths: Vec<FusionPath>,
    index: HashMap<FusionPath, usize>,
}

impl PartialEq for FusionBasis {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.total_charge == other.total_charge && self.paths == other.paths
    }
}

impl FusionBasis {
    pub fn enumerate(n: usize, total_charge: Charge) -> Result<Self, RepError> {
        if n < 2 {
            return Err(RepError::TooFewAnyons(n));
        }
        let mut paths = Vec::new();
        let mut labels = vec![Charge::Tau];
        extend_paths(n, total_charge, &mut labels, &mut paths);
        let index = paths
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        Ok(FusionBasis {
            n,
            total_charge,
            paths,
            index,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn total_charge(&self) -> Charge {
        self.total_charge
    }

    pub fn paths(&self) -> &[FusionPath] {
        &self.paths
    }

    pub fn dim(&self) -> usize {
        self.paths.len()
    }

    pub fn position(&self, path: &FusionPath) -> Option<usize> {
        self.index.get(path).copied()
    }
}

fn extend_paths(n: usize, total: Charge, labels: &mut Vec<Charge>, out: &mut Vec<FusionPath>) {
    if labels.len() == n {
        if *labels.last().expect("non-empty") == total {
            out.push(FusionPath(labels.clone()));
        }
        return;
    }
    let last = *labels.last().expect("non-empty");
    for &next in last.fuse_with_tau() {
        labels.push(next);
        extend_paths(n, total, labels, out);
        labels.pop();
    }
}

/// Same as [`FusionBasis::enumerate`].
pub fn enumerate_basis(n: usize, total_charge: Charge) -> Result<FusionBasis, RepError> {
    FusionBasis::enumerate(n, total_charge)
}

/// Sector dimension from the Fibonacci recursion.
pub fn sector_dim(n: usize, total_charge: Charge) -> usize {
    // (vacuum, tau) dimensions for n anyons
    let (mut vac, mut tau) = (1usize, 1usize);
    for _ in 2..n {
        let next_tau = vac + tau;
        vac = tau;
        tau = next_tau;
    }
    match total_charge {
        Charge::Vacuum => vac,
        Charge::Tau => tau,
    }
}
