use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::three::{moves, step, Mat2, Sectors3, Table3};
use super::{word_from_i8, InjectionError, InjectionWeave, Metric, Provenance};
use crate::anyon::{Chirality, ModelConstants};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub max_length: usize,
    pub target_distance: f64,
    pub metric: Metric,
    pub chirality: Chirality,
    /// Upper limit on stored left halves.
    pub max_table_entries: usize,
    /// Worker threads; 0 uses the global rayon pool.
    pub workers: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_length: 28,
            target_distance: 5e-2,
            metric: Metric::TwoSectorFull,
            chirality: Chirality::Plus,
            max_table_entries: 20_000_000,
            workers: 0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), InjectionError> {
        if self.max_length < 1 {
            return Err(InjectionError::InvalidConfig("max_length must be at least 1".into()));
        }
        if !(self.target_distance > 0.0) {
            return Err(InjectionError::InvalidConfig(format!(
                "target_distance must be positive, got {}",
                self.target_distance
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    /// `None` only when no word of the allowed lengths reaches position 3.
    pub best: Option<InjectionWeave>,
    pub converged: bool,
    /// Number of complete words scored.
    pub scored: u64,
}

#[derive(Clone, Debug)]
struct Candidate {
    quantized: i64,
    word: Vec<i8>,
}

impl Candidate {
    fn new(distance: f64, word: Vec<i8>) -> Self {
        Candidate {
            quantized: (distance * 1e12).round() as i64,
            word,
        }
    }

    fn distance(&self) -> f64 {
        self.quantized as f64 * 1e-12
    }

    /// Lower distance, then shorter, then lexicographically smaller.
    fn beats(&self, other: &Candidate) -> bool {
        (self.quantized, self.word.len(), &self.word) < (other.quantized, other.word.len(), &other.word)
    }
}

#[derive(Clone, Debug, Default)]
struct Best {
    candidate: Option<Candidate>,
    scored: u64,
}

impl Best {
    /// Scores only if the candidate could win, to avoid allocating.
    #[inline]
    fn offer(&mut self, distance: f64, word: impl FnOnce() -> Vec<i8>) {
        self.scored += 1;
        let q = (distance * 1e12).round() as i64;
        if let Some(c) = &self.candidate {
            if q > c.quantized {
                return;
            }
        }
        let cand = Candidate::new(distance, word());
        if self.candidate.as_ref().map_or(true, |c| cand.beats(c)) {
            self.candidate = Some(cand);
        }
    }

    fn merge(mut self, other: Best) -> Best {
        self.scored += other.scored;
        if let Some(c) = other.candidate {
            if self.candidate.as_ref().map_or(true, |s| c.beats(s)) {
                self.candidate = Some(c);
            }
        }
        self
    }
}

#[inline]
fn score(metric: Metric, s: &Sectors3) -> f64 {
    match metric {
        Metric::TwoSectorFull => s.distance_full(),
        Metric::SectorTauOnly => s.distance_2d(),
    }
}

#[derive(Clone, Debug)]
pub(super) struct Node {
    pub word: Vec<i8>,
    pub position: u8,
    pub acc: Sectors3,
    pub writhe: i64,
}

impl Node {
    pub fn root(position: u8) -> Self {
        Node {
            word: Vec::new(),
            position,
            acc: Sectors3::IDENTITY,
            writhe: 0,
        }
    }
}

/// Depth-first walk over pruned 3-strand weaves below `node`, visiting every
/// node (including `node`) up to `max_len` generators.
pub(super) fn walk(table: &Table3, node: &mut Node, max_len: usize, visit: &mut impl FnMut(&Node)) {
    visit(node);
    if node.word.len() >= max_len {
        return;
    }
    let last = node.word.last().copied().unwrap_or(0);
    let (position, acc, writhe) = (node.position, node.acc, node.writhe);
    for &g in moves(position) {
        if g == -last {
            continue;
        }
        node.word.push(g);
        node.position = step(position, g);
        node.acc = acc.then(table.get(g));
        node.writhe = writhe + i64::from(g.signum());
        walk(table, node, max_len, visit);
        node.word.pop();
    }
    node.position = position;
    node.acc = acc;
    node.writhe = writhe;
}

/// Nodes at exactly `depth` below a root at `position`; shallower nodes are
/// passed to `shallow`.
fn seeds(table: &Table3, position: u8, depth: usize, shallow: &mut impl FnMut(&Node)) -> Vec<Node> {
    let mut out = Vec::new();
    walk(table, &mut Node::root(position), depth, &mut |n: &Node| {
        if n.word.len() == depth {
            out.push(n.clone());
        } else {
            shallow(n);
        }
    });
    out
}

fn with_pool<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> R {
    if workers == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

fn finish(
    cfg: &SearchConfig,
    model: &ModelConstants<f64>,
    best: Best,
) -> Result<SearchOutcome, InjectionError> {
    let Some(c) = best.candidate else {
        return Ok(SearchOutcome {
            best: None,
            converged: false,
            scored: best.scored,
        });
    };
    let inj = InjectionWeave::from_word(model, word_from_i8(&c.word), cfg.metric, Provenance::BruteForce)?;
    let converged = inj.distance() <= cfg.target_distance;
    Ok(SearchOutcome {
        best: Some(inj),
        converged,
        scored: best.scored,
    })
}

/// Plain depth-first enumeration of every pruned weave from 1 to 3 of length
/// at most `max_length`. Used as the reference for the meet-in-the-middle
/// search and for short lengths.
pub fn exhaustive_injection(cfg: &SearchConfig) -> Result<SearchOutcome, InjectionError> {
    cfg.validate()?;
    let model = ModelConstants::fibonacci(cfg.chirality);
    let table = Table3::new(&model);
    let metric = cfg.metric;
    let visit = |best: &mut Best, n: &Node| {
        if n.position == 3 {
            best.offer(score(metric, &n.acc), || n.word.clone());
        }
    };
    let mut shallow = Best::default();
    let seed_depth = cfg.max_length.min(8);
    let seed_nodes = seeds(&table, 1, seed_depth, &mut |n| visit(&mut shallow, n));
    let best = with_pool(cfg.workers, || {
        seed_nodes
            .into_par_iter()
            .map(|mut node| {
                let mut best = Best::default();
                walk(&table, &mut node, cfg.max_length, &mut |n| visit(&mut best, n));
                best
            })
            .reduce(Best::default, Best::merge)
    });
    finish(cfg, &model, shallow.merge(best))
}

struct Left {
    word: Vec<i8>,
    acc: Sectors3,
    /// Quaternion of `(P / ζ^w)†` with `P = U_τ / u_1`.
    q: [f64; 4],
    class: u8,
}

struct Grid {
    cell: f64,
    buckets: HashMap<(u8, [i32; 4]), Vec<u32>>,
}

impl Grid {
    fn build(lefts: &[Left], ids: &[u32], cell: f64) -> Self {
        let mut buckets: HashMap<(u8, [i32; 4]), Vec<u32>> = HashMap::new();
        for &id in ids {
            let l = &lefts[id as usize];
            let key = l.q.map(|x| (x / cell).floor() as i32);
            buckets.entry((l.class, key)).or_default().push(id);
        }
        Grid { cell, buckets }
    }

    /// Every stored id of `class` within sup-distance `radius` of `y`.
    fn probe(&self, class: u8, y: [f64; 4], radius: f64, mut f: impl FnMut(u32)) {
        let slack = 1e-12;
        let lo = y.map(|x| ((x - radius - slack) / self.cell).floor() as i32);
        let hi = y.map(|x| ((x + radius + slack) / self.cell).floor() as i32);
        for a in lo[0]..=hi[0] {
            for b in lo[1]..=hi[1] {
                for c in lo[2]..=hi[2] {
                    for d in lo[3]..=hi[3] {
                        if let Some(ids) = self.buckets.get(&(class, [a, b, c, d])) {
                            ids.iter().for_each(|&id| f(id));
                        }
                    }
                }
            }
        }
    }
}

/// Largest quaternion distance `|σ q_b - q_a|` at which a pair in phase class
/// `cos β` can still score within `d` under `metric`; `None` if it never can.
fn class_radius(metric: Metric, cos_beta: f64, sigma: f64, d: f64) -> Option<f64> {
    // the pair scores through c = <q_a, q_b>, with |σ q_b - q_a|² = 2 - 2σc
    let threshold = match metric {
        // 2 - 2|c| ≤ d²
        Metric::SectorTauOnly => 1.0 - d * d / 2.0,
        // |2c e^{iβ} + 1| ≥ t with t = 3(2 - d²)/2
        Metric::TwoSectorFull => {
            let t = 3.0 - 1.5 * d * d;
            if t <= 0.0 {
                -1.0
            } else {
                let disc = cos_beta * cos_beta - 1.0 + t * t;
                if disc < 0.0 {
                    -1.0
                } else {
                    (-sigma * cos_beta + disc.sqrt()) / 2.0
                }
            }
        }
    };
    if threshold > 1.0 {
        None
    } else {
        Some((2.0 - 2.0 * threshold.max(-1.0)).max(0.0).sqrt().min(2.0))
    }
}

/// Quaternion of `Q = P / ζ^w`, the SU(2) part of `P = U_τ / u_1`.
fn su2_quaternion(table: &Table3, acc: &Sectors3, writhe: i64) -> [f64; 4] {
    let q: Mat2 = acc.relative().scale(table.phase_of_writhe(writhe).conj());
    q.quaternion()
}

fn conjugate(q: [f64; 4]) -> [f64; 4] {
    [q[0], -q[1], -q[2], -q[3]]
}

/// Meet-in-the-middle search. Every pruned weave `w` from 1 to 3 splits
/// uniquely as `w = a·b` with `a` running 1 → 2 over `t = min(A, |w| - 1)`
/// steps. Left halves `a` of length `A` are bucketed by the quaternion of
/// their SU(2) part; right halves probe the buckets that can contain a pair
/// within the current radius. The radius doubles until the best pair lies
/// inside it, so the result is the exact optimum over all lengths.
pub fn brute_force_injection(cfg: &SearchConfig) -> Result<SearchOutcome, InjectionError> {
    cfg.validate()?;
    let model = ModelConstants::fibonacci(cfg.chirality);
    let table = Table3::new(&model);
    let metric = cfg.metric;
    let total = cfg.max_length - cfg.max_length % 2;
    if total < 2 {
        return finish(cfg, &model, Best::default());
    }
    let half = total / 2;
    let a_len = if half % 2 == 1 { half } else { half - 1 };
    let b_len = total - a_len;

    let period = table.phase_period();
    let class_of = |writhe: i64| -> u8 {
        match metric {
            Metric::SectorTauOnly => 0,
            Metric::TwoSectorFull => writhe.rem_euclid(period) as u8,
        }
    };

    let mut lefts = Vec::new();
    let mut overflow = false;
    walk(&table, &mut Node::root(1), a_len, &mut |n: &Node| {
        if n.word.len() % 2 == 1 && !overflow {
            if lefts.len() >= cfg.max_table_entries {
                overflow = true;
                return;
            }
            lefts.push(Left {
                word: n.word.clone(),
                acc: n.acc,
                q: conjugate(su2_quaternion(&table, &n.acc, n.writhe)),
                class: class_of(n.writhe),
            });
        }
    });
    if overflow {
        return Err(InjectionError::TableTooLarge {
            needed: lefts.len() + 1,
            limit: cfg.max_table_entries,
        });
    }
    let full_ids: Vec<u32> = (0..lefts.len() as u32)
        .filter(|&i| lefts[i as usize].word.len() == a_len)
        .collect();

    // one-step right halves against every left half
    let mut short = Best::default();
    for l in &lefts {
        for g in [-2i8, 2] {
            if l.word.last() == Some(&-g) {
                continue;
            }
            let s = l.acc.then(table.get(g));
            short.offer(score(metric, &s), || {
                let mut w = l.word.clone();
                w.push(g);
                w
            });
        }
    }

    let right_seed_depth = b_len.min(5);
    let mut radius = cfg.target_distance.min(2.0);
    loop {
        let phases: Vec<(u8, f64, [Option<f64>; 2])> = (0..period)
            .filter(|&c| metric == Metric::TwoSectorFull || c == 0)
            .map(|c| {
                let cos_beta = table.phase_of_writhe(c).re;
                let r = [1.0, -1.0].map(|sigma| class_radius(metric, cos_beta, sigma, radius));
                (c as u8, cos_beta, r)
            })
            .collect();
        let r_max = phases
            .iter()
            .flat_map(|(_, _, r)| r.iter().flatten().copied())
            .fold(0.0f64, f64::max);
        let grid = Grid::build(&lefts, &full_ids, (2.0 * r_max).max(1e-9));
        let probe = |best: &mut Best, n: &Node| {
            if n.word.len() < 3 || n.position != 3 {
                return;
            }
            // tr(Q_b Q_a) = 2 <q(Q_a†), q(Q_b)>
            let qb = su2_quaternion(&table, &n.acc, n.writhe);
            let first = n.word[0];
            for &(k, _, r) in &phases {
                // class k of the pair = class(a) + class(b)
                let a_class = match metric {
                    Metric::SectorTauOnly => 0,
                    Metric::TwoSectorFull => (i64::from(k) - n.writhe).rem_euclid(period) as u8,
                };
                for (slot, sigma) in [1.0, -1.0].into_iter().enumerate() {
                    let Some(rad) = r[slot] else { continue };
                    let y = qb.map(|x| sigma * x);
                    grid.probe(a_class, y, rad, |id| {
                        let l = &lefts[id as usize];
                        if l.word.last() == Some(&-first) {
                            return;
                        }
                        let s = l.acc.then(&n.acc);
                        best.offer(score(metric, &s), || {
                            let mut w = l.word.clone();
                            w.extend_from_slice(&n.word);
                            w
                        });
                    });
                }
            }
        };
        let mut shallow = Best::default();
        let seed_nodes = seeds(&table, 2, right_seed_depth, &mut |n| probe(&mut shallow, n));
        let found = with_pool(cfg.workers, || {
            seed_nodes
                .into_par_iter()
                .map(|mut node| {
                    let mut best = Best::default();
                    walk(&table, &mut node, b_len, &mut |n| probe(&mut best, n));
                    best
                })
                .reduce(Best::default, Best::merge)
        });
        let best = short.clone().merge(shallow).merge(found);
        let inside = best.candidate.as_ref().is_some_and(|c| c.distance() <= radius);
        if inside || radius >= 2.0 {
            return finish(cfg, &model, best);
        }
        radius = (radius * 2.0).min(2.0);
    }
}
