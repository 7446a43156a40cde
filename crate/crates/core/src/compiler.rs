//! Rewrites a braid word on `n ≥ 3` strands into a weave whose warp starts
//! at position 1. Before each original crossing `τ_s^r` the warp is carried
//! to `s` or `s + 1` by a chain of injections, alternating parity so the
//! crossing itself moves the warp onto the other member of the pair.

use serde::Serialize;
use thiserror::Error;

use crate::anyon::{projective_distance, FusionBasis, ModelConstants, RepError, Representation};
use crate::braid::{BraidError, BraidWord, Generator, Sign};
use crate::injection::{
    refine_injection, InjectionError, InjectionLibrary, InjectionWeave, RefineOptions, BASIN_THRESHOLD,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CompileError {
    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(f64),
    #[error("positions {from} and {to} differ in parity")]
    Parity { from: usize, to: usize },
    #[error("position {position} out of range for {strands} strands")]
    OutOfRange { position: usize, strands: usize },
    #[error("no injection with embedding bound <= {delta:.3e} available{}", best.map(|b| format!(" (best reached {b:.3e})")).unwrap_or_default())]
    NoInjection { delta: f64, best: Option<f64> },
    #[error("warp ends at even position {0}; an injection chain cannot return it to 1")]
    ReturnHomeParity(usize),
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error(transparent)]
    Injection(#[from] InjectionError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

fn parity(x: usize) -> usize {
    x % 2
}

/// Warp position before step `i` and the position it must reach so that
/// `τ_{s_i}` involves it. Odd steps target the odd member of `{s_i, s_i + 1}`,
/// even steps the even one; `s_prev = 0` for the first step.
pub fn parity_target(i: usize, s_prev: usize, s_i: usize) -> (usize, usize) {
    assert!(i >= 1, "steps are numbered from 1");
    if i % 2 == 1 {
        (s_prev - parity(s_prev) + 1, s_i - parity(s_i) + 1)
    } else {
        (s_prev + parity(s_prev), s_i + parity(s_i))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Segment {
    /// `M_{from;to}`: `|q|` injections moving the warp by `2q`.
    MultipleInjection { from: usize, to: usize, q: i64 },
    /// The source crossing `τ_s^r`.
    OriginalGenerator { s: usize, r: i32 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompilePlan {
    pub segments: Vec<Segment>,
    /// Accuracy asked of each injection, `ε / (n p)`.
    pub delta: f64,
}

impl CompilePlan {
    /// Pure bookkeeping: the segment sequence for `braid`, with a homing
    /// chain appended when `return_home` is set.
    pub fn new(braid: &BraidWord, delta: f64, return_home: bool) -> Result<Self, CompileError> {
        let mut segments = Vec::with_capacity(2 * braid.len() + 1);
        let mut s_prev = 0;
        let mut warp = 1;
        for (k, g) in braid.gens().iter().enumerate() {
            let (from, to) = parity_target(k + 1, s_prev, g.index());
            debug_assert_eq!(from, warp);
            segments.push(Segment::MultipleInjection {
                from,
                to,
                q: (to as i64 - from as i64) / 2,
            });
            segments.push(Segment::OriginalGenerator {
                s: g.index(),
                r: g.sign().as_i32(),
            });
            warp = g.move_position(to);
            s_prev = g.index();
        }
        if return_home && warp != 1 {
            if warp % 2 == 0 {
                return Err(CompileError::ReturnHomeParity(warp));
            }
            segments.push(Segment::MultipleInjection {
                from: warp,
                to: 1,
                q: -((warp as i64 - 1) / 2),
            });
        }
        Ok(CompilePlan { segments, delta })
    }

    /// Total number of single injections.
    pub fn injection_count(&self) -> usize {
        self.segments
            .iter()
            .map(|s| match s {
                Segment::MultipleInjection { q, .. } => q.unsigned_abs() as usize,
                Segment::OriginalGenerator { .. } => 0,
            })
            .sum()
    }

    /// Emits the word, with `injection` (a 3-strand word taking the warp
    /// from 1 to 3) standing for every single injection.
    pub fn flatten(&self, injection: &BraidWord, n: usize) -> Result<BraidWord, CompileError> {
        let mut gens: Vec<Generator> = Vec::new();
        for seg in &self.segments {
            match *seg {
                Segment::MultipleInjection { from, to, .. } => {
                    gens.extend_from_slice(chain(from, to, injection, n)?.gens());
                }
                Segment::OriginalGenerator { s, r } => {
                    gens.push(Generator::new(s, if r > 0 { Sign::Pos } else { Sign::Neg }));
                }
            }
        }
        Ok(BraidWord::new(n, gens)?)
    }
}

fn chain(from: usize, to: usize, injection: &BraidWord, n: usize) -> Result<BraidWord, CompileError> {
    for position in [from, to] {
        if position == 0 || position > n {
            return Err(CompileError::OutOfRange { position, strands: n });
        }
    }
    if parity(from) != parity(to) {
        return Err(CompileError::Parity { from, to });
    }
    let mut gens = Vec::new();
    if to > from {
        for a in (from..to).step_by(2) {
            gens.extend_from_slice(injection.shifted(a - 1, n)?.gens());
        }
    } else if to < from {
        let back = injection.inverse();
        for a in (to..from).step_by(2).rev() {
            gens.extend_from_slice(back.shifted(a - 1, n)?.gens());
        }
    }
    Ok(BraidWord::new(n, gens)?)
}

/// `M_{from;to}`: copies of the injection stacked upward, or of its inverse
/// stacked downward, so the warp travels from `from` to `to`.
pub fn multiple_injection(
    from: usize,
    to: usize,
    inj: &InjectionWeave,
    n: usize,
) -> Result<BraidWord, CompileError> {
    let forward = if (inj.warp_start, inj.warp_end) == (3, 1) {
        inj.word.inverse()
    } else {
        inj.word.clone()
    };
    chain(from, to, &forward, n)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BudgetLedger {
    pub p: usize,
    pub n: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub injection_count: usize,
    pub injection_length: usize,
    pub injection_distance_full: f64,
    /// Distance bound of one embedded injection.
    pub injection_bound: f64,
    /// `injection_count × injection_bound`.
    pub guaranteed_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LengthStats {
    pub input_length: usize,
    pub output_length: usize,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompiledWeave {
    pub word: BraidWord,
    pub warp_start: usize,
    pub plan: CompilePlan,
    pub budget: BudgetLedger,
    pub length_stats: LengthStats,
    pub injection: Option<InjectionWeave>,
}

#[derive(Clone, Debug)]
pub struct CompileRequest<'a> {
    pub braid: BraidWord,
    pub epsilon: f64,
    pub library: &'a InjectionLibrary,
    pub return_home: bool,
}

/// The shortest record whose embedding bound meets `delta`; failing that,
/// the best record refined until it does.
pub fn select_injection(library: &InjectionLibrary, delta: f64) -> Result<InjectionWeave, CompileError> {
    let model = library.model();
    let upward = library
        .records()
        .iter()
        .filter(|r| (r.warp_start, r.warp_end) == (1, 3));
    let mut meeting: Vec<(usize, f64, &InjectionWeave)> = upward
        .clone()
        .map(|r| (r.len(), r.embedding_bound(&model), r))
        .filter(|&(_, e, _)| e <= delta)
        .collect();
    meeting.sort_by(|a, b| {
        (a.0, a.1, a.2.word.to_signed())
            .partial_cmp(&(b.0, b.1, b.2.word.to_signed()))
            .expect("finite bounds")
    });
    if let Some(&(_, _, r)) = meeting.first() {
        return Ok(r.clone());
    }
    if let Some(hit) = library.cached_refinement(delta) {
        return Ok(hit);
    }
    let Some(base) = upward.filter(|r| r.distance_full <= BASIN_THRESHOLD).next() else {
        return Err(CompileError::NoInjection { delta, best: None });
    };
    let refined = refine_to_bound(&model, base, delta, library)?;
    library.cache_refinement(delta, &refined);
    Ok(refined)
}

fn refine_to_bound(
    model: &ModelConstants<f64>,
    base: &InjectionWeave,
    delta: f64,
    library: &InjectionLibrary,
) -> Result<InjectionWeave, CompileError> {
    // the embedding bound sits near sqrt(3/2) × distance_full
    let mut target = delta / 1.3;
    let mut best = None;
    for _ in 0..4 {
        let r = refine_injection(model, base, target, library.net(), RefineOptions::default())?;
        let bound = r.injection.embedding_bound(model);
        if bound <= delta {
            return Ok(r.injection);
        }
        best = Some(bound);
        if !r.converged {
            break;
        }
        target /= 2.0;
    }
    Err(CompileError::NoInjection { delta, best })
}

pub fn compile(req: &CompileRequest) -> Result<CompiledWeave, CompileError> {
    if !(req.epsilon > 0.0) {
        return Err(CompileError::InvalidEpsilon(req.epsilon));
    }
    let n = req.braid.strands();
    let p = req.braid.len();
    let delta = req.epsilon / (n * p.max(1)) as f64;
    let (plan, injection) = if n == 2 {
        (
            CompilePlan {
                segments: Vec::new(),
                delta,
            },
            None,
        )
    } else {
        let plan = CompilePlan::new(&req.braid, delta, req.return_home)?;
        let injection = if plan.injection_count() > 0 {
            Some(select_injection(req.library, delta)?)
        } else {
            None
        };
        (plan, injection)
    };
    let word = match (&injection, n) {
        (_, 2) => req.braid.clone(),
        (Some(inj), _) => plan.flatten(&inj.word, n)?,
        (None, _) => plan.flatten(&BraidWord::identity(3)?, n)?,
    };
    let model = req.library.model();
    let count = plan.injection_count();
    let (inj_len, inj_full, inj_bound) = injection
        .as_ref()
        .map(|i| (i.len(), i.distance_full, i.embedding_bound(&model)))
        .unwrap_or((0, 0.0, 0.0));
    let budget = BudgetLedger {
        p,
        n,
        epsilon: req.epsilon,
        delta,
        injection_count: count,
        injection_length: inj_len,
        injection_distance_full: inj_full,
        injection_bound: inj_bound,
        guaranteed_bound: count as f64 * inj_bound,
    };
    let length_stats = LengthStats {
        input_length: p,
        output_length: word.len(),
        ratio: if p == 0 { 1.0 } else { word.len() as f64 / p as f64 },
    };
    Ok(CompiledWeave {
        word,
        warp_start: 1,
        plan,
        budget,
        length_stats,
        injection,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub distance: f64,
    pub epsilon: f64,
    pub guaranteed_bound: Option<f64>,
    /// `distance ≤ epsilon`.
    pub passed: bool,
    /// `distance ≤ guaranteed_bound`, when a bound is known.
    pub within_bound: Option<bool>,
}

/// Projective distance between the two words' unitaries on `basis`.
pub fn verify_compilation(
    model: &ModelConstants<f64>,
    braid: &BraidWord,
    weave: &BraidWord,
    basis: &FusionBasis,
    epsilon: f64,
    guaranteed_bound: Option<f64>,
) -> Result<VerificationReport, CompileError> {
    if braid.strands() != weave.strands() {
        return Err(BraidError::StrandMismatch {
            left: braid.strands(),
            right: weave.strands(),
        }
        .into());
    }
    let rep = Representation::new(model, basis.clone());
    let distance = projective_distance(&rep.word(braid)?, &rep.word(weave)?)?;
    // rounding in long products; bounds are compared with this slack
    let slack = 1e-9;
    Ok(VerificationReport {
        distance,
        epsilon,
        guaranteed_bound,
        passed: distance <= epsilon,
        within_bound: guaranteed_bound.map(|b| distance <= b + slack),
    })
}
