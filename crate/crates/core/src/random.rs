//! Seeded random braid words for property tests and benchmarks.

use rand::Rng;

use crate::braid::{BraidWord, Generator, Sign};

fn random_sign<R: Rng + ?Sized>(rng: &mut R) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Pos
    } else {
        Sign::Neg
    }
}

/// Uniform word of exactly `len` generators.
pub fn random_word<R: Rng + ?Sized>(strands: usize, len: usize, rng: &mut R) -> BraidWord {
    let gens = (0..len)
        .map(|_| Generator::new(rng.gen_range(1..strands), random_sign(rng)))
        .collect();
    BraidWord::new(strands, gens).expect("indices drawn in range")
}

/// A purebraid of at most `max_len` generators: a random word followed by a
/// bubble sort that puts every strand back. `max_len` must allow the sort.
pub fn random_purebraid<R: Rng + ?Sized>(strands: usize, max_len: usize, rng: &mut R) -> BraidWord {
    loop {
        let head_len = rng.gen_range(0..=max_len / 2);
        let head = random_word(strands, head_len, rng);
        // occupant[p] = initial position of the strand at position p + 1
        let mut occupant: Vec<usize> = (1..=strands).collect();
        for g in head.gens() {
            occupant.swap(g.index() - 1, g.index());
        }
        let mut gens = head.gens().to_vec();
        let mut sorted = false;
        while !sorted {
            sorted = true;
            for i in 0..strands - 1 {
                if occupant[i] > occupant[i + 1] {
                    occupant.swap(i, i + 1);
                    gens.push(Generator::new(i + 1, random_sign(rng)));
                    sorted = false;
                }
            }
        }
        if gens.len() <= max_len {
            return BraidWord::new(strands, gens).expect("indices in range");
        }
    }
}

/// A weave with the warp starting at `start`, of exactly `len` crossings.
pub fn random_weave<R: Rng + ?Sized>(
    strands: usize,
    start: usize,
    len: usize,
    rng: &mut R,
) -> BraidWord {
    let mut p = start;
    let mut gens = Vec::with_capacity(len);
    for _ in 0..len {
        let index = if p == 1 {
            1
        } else if p == strands || rng.gen_bool(0.5) {
            p - 1
        } else {
            p
        };
        let g = Generator::new(index, random_sign(rng));
        p = g.move_position(p);
        gens.push(g);
    }
    BraidWord::new(strands, gens).expect("indices in range")
}

/// A pureweave based at position 1 of at most `max_len` crossings: a random
/// warp walk that is then walked back down to the bottom.
pub fn random_pureweave<R: Rng + ?Sized>(strands: usize, max_len: usize, rng: &mut R) -> BraidWord {
    let head_len = rng.gen_range(0..=max_len / 2);
    let head = random_weave(strands, 1, head_len, rng);
    let mut p = head.warp_trace(1).expect("start in range").end();
    let mut gens = head.gens().to_vec();
    while p > 1 {
        let g = Generator::new(p - 1, random_sign(rng));
        p = g.move_position(p);
        gens.push(g);
    }
    BraidWord::new(strands, gens).expect("indices in range")
}
