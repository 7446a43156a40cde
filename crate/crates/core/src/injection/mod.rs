//! Injection weaves: 3-strand weaves that carry the warp from position 1 to
//! position 3 while acting approximately as the identity.

mod library;
mod search;
mod sk;
pub mod three;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::anyon::{full_rep_unitary, projective_distance, ModelConstants, Unitary};
use crate::braid::{BraidError, BraidWord};

pub use library::{InjectionLibrary, LibraryError};
pub use search::{brute_force_injection, exhaustive_injection, SearchConfig, SearchOutcome};
pub use sk::{refine_injection, LevelReport, Refinement, RefineOptions, SkNet, BASIN_THRESHOLD};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InjectionError {
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error("word is not a weave from position {start} to {end} on 3 strands")]
    NotAnInjection { start: usize, end: usize },
    #[error("invalid search config: {0}")]
    InvalidConfig(String),
    #[error("left table would hold {needed} entries, limit is {limit}")]
    TableTooLarge { needed: usize, limit: usize },
    #[error("base injection distance {distance:.3e} is outside the refinement basin ({basin})")]
    OutsideBasin { distance: f64, basin: f64 },
    #[error("refinement target must be positive, got {0}")]
    InvalidTarget(f64),
}

/// Which operator an injection is scored on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// Both total-charge sectors against one common phase.
    #[default]
    TwoSectorFull,
    /// The 2-dimensional total-charge-τ block only.
    SectorTauOnly,
}

impl Metric {
    pub fn id(self) -> &'static str {
        match self {
            Metric::TwoSectorFull => "two_sector_full",
            Metric::SectorTauOnly => "sector_tau_only",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl std::str::FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace('-', "_").as_str() {
            "two_sector_full" | "full" => Ok(Metric::TwoSectorFull),
            "sector_tau_only" | "sector_tau" | "tau" => Ok(Metric::SectorTauOnly),
            _ => Err(format!("unknown metric {s:?} (expected two-sector-full or sector-tau)")),
        }
    }
}

/// How a record was produced.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    #[default]
    BruteForce,
    Sk,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InjectionWeave {
    pub word: BraidWord,
    pub warp_start: usize,
    pub warp_end: usize,
    pub distance_2d: f64,
    pub distance_full: f64,
    pub metric: Metric,
    pub source: Provenance,
}

impl InjectionWeave {
    /// Scores `word` through the dense representation. The word must be a
    /// 3-strand weave running 1 → 3 or 3 → 1.
    pub fn from_word(
        model: &ModelConstants<f64>,
        word: BraidWord,
        metric: Metric,
        source: Provenance,
    ) -> Result<Self, InjectionError> {
        let (warp_start, warp_end) = injection_endpoints(&word)?;
        let (distance_2d, distance_full) = sector_distances(model, &word)?;
        Ok(InjectionWeave {
            word,
            warp_start,
            warp_end,
            distance_2d,
            distance_full,
            metric,
            source,
        })
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// The distance the record was searched under.
    pub fn distance(&self) -> f64 {
        match self.metric {
            Metric::TwoSectorFull => self.distance_full,
            Metric::SectorTauOnly => self.distance_2d,
        }
    }

    /// Upper bound on the projective distance to the identity of this word
    /// embedded at any offset of any larger word, on any basis.
    pub fn embedding_bound(&self, model: &ModelConstants<f64>) -> f64 {
        let blocks = full_rep_unitary(model, 3, &self.word).expect("3-strand word");
        embedding_bound_from_parts(blocks.tau.trace(), blocks.vacuum.get(0, 0))
    }
}

fn injection_endpoints(word: &BraidWord) -> Result<(usize, usize), InjectionError> {
    if word.strands() != 3 {
        return Err(BraidError::StrandMismatch {
            left: word.strands(),
            right: 3,
        }
        .into());
    }
    for (start, end) in [(1, 3), (3, 1)] {
        if word.is_weave(start) && word.warp_trace(start)?.end() == end {
            return Ok((start, end));
        }
    }
    Err(InjectionError::NotAnInjection { start: 1, end: 3 })
}

/// `(distance_2d, distance_full)` of a 3-strand word, via the dense route.
pub fn sector_distances(model: &ModelConstants<f64>, word: &BraidWord) -> Result<(f64, f64), InjectionError> {
    if word.strands() != 3 {
        return Err(BraidError::StrandMismatch {
            left: word.strands(),
            right: 3,
        }
        .into());
    }
    let blocks = full_rep_unitary(model, 3, word).expect("3-strand word");
    let d2 = projective_distance(&blocks.tau, &Unitary::identity(2)).expect("same dim");
    let full = projective_distance(&blocks.block_diagonal(), &Unitary::identity(3)).expect("same dim");
    Ok((d2, full))
}

/// Projective distance of `U_τ ⊕ u_1` to `I₃`.
pub fn full_sector_distance(model: &ModelConstants<f64>, word: &BraidWord) -> Result<f64, InjectionError> {
    Ok(sector_distances(model, word)?.1)
}

/// An embedded 3-strand operator acts as copies of `U_τ` and `u_1` in some
/// proportion `x : 1 - x` of the larger space, so its squared distance to
/// the identity is at most `2 - 2 Re(e^{-iψ}(x tr U_τ / 2 + (1-x) u_1))` for
/// every ψ. Taking the worse endpoint in `x` and the best ψ gives
/// `min_ψ max(2 - Re(e^{-iψ} tr U_τ), 2 - 2 Re(e^{-iψ} u_1))`.
pub(crate) fn embedding_bound_from_parts(trace_tau: num_complex::Complex64, vacuum: num_complex::Complex64) -> f64 {
    let (t, alpha) = (trace_tau.norm(), trace_tau.arg());
    let beta = vacuum.arg();
    let f_tau = |psi: f64| 2.0 - t * (psi - alpha).cos();
    let f_vac = |psi: f64| 2.0 - 2.0 * (psi - beta).cos();
    // crossings: A cos ψ + B sin ψ = 0
    let a = t * alpha.cos() - 2.0 * beta.cos();
    let b = t * alpha.sin() - 2.0 * beta.sin();
    let cross = (-a).atan2(b);
    [alpha, beta, cross, cross + std::f64::consts::PI]
        .into_iter()
        .map(|psi| f_tau(psi).max(f_vac(psi)))
        .fold(f64::INFINITY, f64::min)
        .max(0.0)
        .sqrt()
}

/// Reverses an injection: the warp then runs from the top back to the bottom.
pub fn invert_injection(inj: &InjectionWeave) -> InjectionWeave {
    InjectionWeave {
        word: inj.word.inverse(),
        warp_start: inj.warp_end,
        warp_end: inj.warp_start,
        ..inj.clone()
    }
}

pub(crate) fn signed_i8(word: &BraidWord) -> Vec<i8> {
    word.to_signed().into_iter().map(|g| g as i8).collect()
}

pub(crate) fn word_from_i8(signed: &[i8]) -> BraidWord {
    let values: Vec<i32> = signed.iter().map(|&g| i32::from(g)).collect();
    BraidWord::from_signed(3, &values).expect("3-strand generators")
}
