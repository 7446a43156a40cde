//! Solovay-Kitaev refinement of an injection.
//!
//! Corrections are 3-strand pureweaves based at position 1 whose writhe
//! makes `P = U_τ / u_1` land in SU(2); such a correction leaves the
//! vacuum-sector phase aligned. Prepending a correction `C` to an injection
//! `I` gives `P(C·I) = P(I) P(C)`, so the recursion approximates `P(I)†`.

use std::collections::HashSet;

use super::search::{walk, Node};
use super::three::{Mat2, Table3};
use super::{signed_i8, word_from_i8, InjectionError, InjectionWeave, Metric, Provenance};
use crate::anyon::ModelConstants;

/// Largest base distance accepted for refinement.
pub const BASIN_THRESHOLD: f64 = 0.1;

#[derive(Clone, Debug)]
struct NetEntry {
    word: Vec<i8>,
    m: Mat2,
    q: [f64; 4],
}

/// Basic approximations: every pruned pureweave at position 1 of length at
/// most `max_length` with `P` in SU(2), one per distinct operator, shortest
/// word kept.
#[derive(Clone, Debug)]
pub struct SkNet {
    max_length: usize,
    entries: Vec<NetEntry>,
}

impl SkNet {
    pub fn build(model: &ModelConstants<f64>, max_length: usize) -> Self {
        let table = Table3::new(model);
        let mut entries = Vec::new();
        walk(&table, &mut Node::root(1), max_length, &mut |n: &Node| {
            if n.position != 1 {
                return;
            }
            let p = n.acc.relative();
            if (p.det() - num_complex::Complex64::new(1.0, 0.0)).norm() > 1e-9 {
                return;
            }
            entries.push(NetEntry {
                word: n.word.clone(),
                m: p,
                q: p.quaternion(),
            });
        });
        entries.sort_by(|a, b| (a.word.len(), &a.word).cmp(&(b.word.len(), &b.word)));
        let mut seen = HashSet::new();
        entries.retain(|e| seen.insert(e.q.map(|x| (x * 1e9).round() as i64)));
        SkNet { max_length, entries }
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn nearest(&self, q: [f64; 4]) -> &NetEntry {
        let dist = |e: &NetEntry| e.q.iter().zip(&q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
        let mut best = &self.entries[0];
        let mut best_d = dist(best);
        for e in &self.entries[1..] {
            let d = dist(e);
            if d < best_d {
                best = e;
                best_d = d;
            }
        }
        best
    }

    /// Word and operator approximating `target ∈ SU(2)` after `depth`
    /// commutator levels.
    pub fn approximate(&self, target: &Mat2, depth: usize) -> (Vec<i8>, Mat2) {
        if depth == 0 {
            let e = self.nearest(target.quaternion());
            return (e.word.clone(), e.m);
        }
        let (base_word, base) = self.approximate(target, depth - 1);
        let delta = target.mul(&base.adjoint());
        let (v, w) = balanced_commutator(&delta);
        let (v_word, v_approx) = self.approximate(&v, depth - 1);
        let (w_word, w_approx) = self.approximate(&w, depth - 1);
        // temporal order base, W†, V†, W, V gives V W V† W† · base
        let mut word = base_word;
        word.extend(inverse_word(&w_word));
        word.extend(inverse_word(&v_word));
        word.extend_from_slice(&w_word);
        word.extend_from_slice(&v_word);
        let m = v_approx
            .mul(&w_approx)
            .mul(&v_approx.adjoint())
            .mul(&w_approx.adjoint())
            .mul(&base);
        (word, m)
    }
}

fn inverse_word(word: &[i8]) -> Vec<i8> {
    word.iter().rev().map(|&g| -g).collect()
}

fn rotation(axis: [f64; 3], angle: f64) -> Mat2 {
    let (s, c) = (angle / 2.0).sin_cos();
    Mat2::from_quaternion([c, s * axis[0], s * axis[1], s * axis[2]])
}

/// Unit axis and angle of `U = cos(θ/2) I - i sin(θ/2) n·σ`.
fn axis_angle(u: &Mat2) -> ([f64; 3], f64) {
    let q = u.quaternion();
    let v = [q[1], q[2], q[3]];
    let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let angle = 2.0 * s.atan2(q[0]);
    if s < 1e-15 {
        ([0.0, 0.0, 1.0], angle)
    } else {
        (v.map(|x| x / s), angle)
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn normalized(v: [f64; 3]) -> [f64; 3] {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.map(|x| x / n)
}

/// `(V, W)` with `V W V† W† = delta`, both rotations by the same small
/// angle about perpendicular axes.
pub(crate) fn balanced_commutator(delta: &Mat2) -> (Mat2, Mat2) {
    let (axis, theta) = axis_angle(delta);
    let st = (theta / 2.0).sin().abs().min(1.0);
    // sin(θ/2) = 2 x sqrt(1 - x²) with x = sin²(φ/2)
    let x = ((1.0 - (1.0 - st * st).sqrt()) / 2.0).sqrt();
    let phi = 2.0 * x.sqrt().asin();
    let v = rotation([1.0, 0.0, 0.0], phi);
    let w = rotation([0.0, 1.0, 0.0], phi);
    let comm = v.mul(&w).mul(&v.adjoint()).mul(&w.adjoint());
    let (m, _) = axis_angle(&comm);
    let dot = (m[0] * axis[0] + m[1] * axis[1] + m[2] * axis[2]).clamp(-1.0, 1.0);
    let c = cross(m, axis);
    let s = if c.iter().map(|x| x * x).sum::<f64>() > 1e-24 {
        rotation(normalized(c), dot.acos())
    } else if dot > 0.0 {
        Mat2::IDENTITY
    } else {
        // antiparallel: any axis perpendicular to m
        let helper = if m[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        rotation(normalized(cross(m, helper)), std::f64::consts::PI)
    };
    let conj = |u: &Mat2| s.mul(u).mul(&s.adjoint());
    (conj(&v), conj(&w))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RefineOptions {
    pub max_depth: usize,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions { max_depth: 5 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelReport {
    pub depth: usize,
    pub length: usize,
    pub distance_full: f64,
    /// Whether this level improved on the best so far.
    pub accepted: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Refinement {
    pub injection: InjectionWeave,
    pub converged: bool,
    pub levels: Vec<LevelReport>,
}

/// Refines `base` toward `distance_full ≤ target` by prepending a
/// Solovay-Kitaev correction. Levels run from depth 0 upward; a level is
/// kept only if it improves on the best so far.
pub fn refine_injection(
    model: &ModelConstants<f64>,
    base: &InjectionWeave,
    target: f64,
    net: &SkNet,
    options: RefineOptions,
) -> Result<Refinement, InjectionError> {
    if !(target > 0.0) {
        return Err(InjectionError::InvalidTarget(target));
    }
    if base.distance_full <= target {
        return Ok(Refinement {
            injection: base.clone(),
            converged: true,
            levels: Vec::new(),
        });
    }
    if base.distance_full > BASIN_THRESHOLD {
        return Err(InjectionError::OutsideBasin {
            distance: base.distance_full,
            basin: BASIN_THRESHOLD,
        });
    }
    let table = Table3::new(model);
    let base_signed = signed_i8(&base.word);
    let aim = table.word(&base_signed).relative().adjoint();
    let mut best = base.clone();
    let mut levels = Vec::new();
    for depth in 0..=options.max_depth {
        let (mut signed, _) = net.approximate(&aim, depth);
        signed.extend_from_slice(&base_signed);
        let word = word_from_i8(&signed).free_reduce();
        let cand = InjectionWeave::from_word(model, word, Metric::TwoSectorFull, Provenance::Sk)?;
        let accepted = cand.distance_full < best.distance_full;
        levels.push(LevelReport {
            depth,
            length: cand.len(),
            distance_full: cand.distance_full,
            accepted,
        });
        if accepted {
            best = cand;
        }
        if best.distance_full <= target {
            break;
        }
    }
    let converged = best.distance_full <= target;
    Ok(Refinement {
        injection: best,
        converged,
        levels,
    })
}
