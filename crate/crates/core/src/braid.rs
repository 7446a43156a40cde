//! Braid words on `n` strands.
//!
//! A word is read in temporal order: the leftmost generator is applied
//! first. Strand positions are counted from the bottom, position 1 being
//! the lowest. `τ_s` exchanges the strands at positions `s` and `s + 1`
//! clockwise, `τ_s⁻¹` counterclockwise.
//!
//! Equality of words is literal sequence equality. Only free reduction is
//! implemented; the full word problem is out of scope.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error("strand count mismatch: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },
    #[error("generator index {index} out of range for {strands} strands")]
    IndexOutOfRange { index: i64, strands: usize },
    #[error("position {position} out of range for {strands} strands")]
    PositionOutOfRange { position: usize, strands: usize },
    #[error("need at least {min} strands, got {strands}")]
    TooFewStrands { strands: usize, min: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Neg,
    Pos,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Pos => Sign::Neg,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Neg => -1,
            Sign::Pos => 1,
        }
    }
}

/// One crossing `τ_index^sign`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    index: u32,
    sign: Sign,
}

impl Generator {
    /// Panics if `index == 0`; strand-range validity is checked by [`BraidWord`].
    pub fn new(index: usize, sign: Sign) -> Self {
        assert!(index >= 1, "generator index starts at 1");
        Generator {
            index: index as u32,
            sign,
        }
    }

    /// `+s` is `τ_s`, `-s` is `τ_s⁻¹`.
    pub fn from_signed(value: i32) -> Option<Self> {
        match value {
            0 => None,
            v if v > 0 => Some(Generator::new(v as usize, Sign::Pos)),
            v => Some(Generator::new(v.unsigned_abs() as usize, Sign::Neg)),
        }
    }

    pub fn to_signed(self) -> i32 {
        self.index as i32 * self.sign.as_i32()
    }

    pub fn index(self) -> usize {
        self.index as usize
    }

    pub fn sign(self) -> Sign {
        self.sign
    }

    pub fn inverse(self) -> Self {
        Generator {
            index: self.index,
            sign: self.sign.flip(),
        }
    }

    /// True when `self` followed by `other` is a cancelling pair.
    pub fn cancels(self, other: Generator) -> bool {
        self.index == other.index && self.sign != other.sign
    }

    /// Whether the crossing involves the strand currently at `position`.
    pub fn touches(self, position: usize) -> bool {
        position == self.index() || position == self.index() + 1
    }

    /// Where a strand at `position` sits after this crossing.
    pub fn move_position(self, position: usize) -> usize {
        let s = self.index();
        if position == s {
            s + 1
        } else if position == s + 1 {
            s
        } else {
            position
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_signed())
    }
}

/// A permutation of strand positions, `image[i - 1]` being the final
/// position of the strand that started at position `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (1..=n).collect(),
        }
    }

    /// Builds a permutation from 1-based images; `None` unless it is a bijection on `1..=n`.
    pub fn from_image(image: Vec<usize>) -> Option<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &p in &image {
            if p == 0 || p > n || seen[p - 1] {
                return None;
            }
            seen[p - 1] = true;
        }
        Some(Permutation { image })
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn apply(&self, position: usize) -> usize {
        self.image[position - 1]
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation {
            image: self.image.iter().map(|&p| other.apply(p)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &p)| p == i + 1)
    }
}

/// Positions of one tracked strand before each crossing and after the last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WarpTrace {
    pub start: usize,
    pub positions: Vec<usize>,
}

impl WarpTrace {
    pub fn end(&self) -> usize {
        *self.positions.last().expect("trace always holds the start")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    gens: Vec<Generator>,
}

impl BraidWord {
    /// The empty word on `strands` strands.
    pub fn identity(strands: usize) -> Result<Self, BraidError> {
        Self::new(strands, Vec::new())
    }

    pub fn new(strands: usize, gens: Vec<Generator>) -> Result<Self, BraidError> {
        if strands < 2 {
            return Err(BraidError::TooFewStrands { strands, min: 2 });
        }
        if let Some(g) = gens.iter().find(|g| g.index() > strands - 1) {
            return Err(BraidError::IndexOutOfRange {
                index: g.to_signed() as i64,
                strands,
            });
        }
        Ok(BraidWord { strands, gens })
    }

    pub fn from_signed(strands: usize, values: &[i32]) -> Result<Self, BraidError> {
        let gens = values
            .iter()
            .map(|&v| {
                Generator::from_signed(v).ok_or(BraidError::IndexOutOfRange {
                    index: 0,
                    strands,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(strands, gens)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn to_signed(&self) -> Vec<i32> {
        self.gens.iter().map(|g| g.to_signed()).collect()
    }

    /// Exponent sum.
    pub fn writhe(&self) -> i64 {
        self.gens.iter().map(|g| g.sign().as_i32() as i64).sum()
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &BraidWord) -> Result<BraidWord, BraidError> {
        if self.strands != other.strands {
            return Err(BraidError::StrandMismatch {
                left: self.strands,
                right: other.strands,
            });
        }
        let mut gens = Vec::with_capacity(self.len() + other.len());
        gens.extend_from_slice(&self.gens);
        gens.extend_from_slice(&other.gens);
        Ok(BraidWord {
            strands: self.strands,
            gens,
        })
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            gens: self.gens.iter().rev().map(|g| g.inverse()).collect(),
        }
    }

    /// Deletes adjacent `τ_s τ_s⁻¹` / `τ_s⁻¹ τ_s` pairs until none remain.
    pub fn free_reduce(&self) -> BraidWord {
        let mut out: Vec<Generator> = Vec::with_capacity(self.len());
        for &g in &self.gens {
            match out.last() {
                Some(&last) if last.cancels(g) => {
                    out.pop();
                }
                _ => out.push(g),
            }
        }
        BraidWord {
            strands: self.strands,
            gens: out,
        }
    }

    /// Induced permutation of strand positions.
    pub fn permutation(&self) -> Permutation {
        // occupant[p] = initial position of the strand now at position p + 1
        let mut occupant: Vec<usize> = (1..=self.strands).collect();
        for g in &self.gens {
            occupant.swap(g.index() - 1, g.index());
        }
        let mut image = vec![0; self.strands];
        for (p, &initial) in occupant.iter().enumerate() {
            image[initial - 1] = p + 1;
        }
        Permutation { image }
    }

    pub fn is_purebraid(&self) -> bool {
        self.permutation().is_identity()
    }

    fn check_position(&self, position: usize) -> Result<(), BraidError> {
        if position == 0 || position > self.strands {
            Err(BraidError::PositionOutOfRange {
                position,
                strands: self.strands,
            })
        } else {
            Ok(())
        }
    }

    pub fn warp_trace(&self, start: usize) -> Result<WarpTrace, BraidError> {
        self.check_position(start)?;
        let mut positions = Vec::with_capacity(self.len() + 1);
        let mut p = start;
        positions.push(p);
        for g in &self.gens {
            p = g.move_position(p);
            positions.push(p);
        }
        Ok(WarpTrace { start, positions })
    }

    /// Every crossing involves the strand that started at `warp_start`.
    /// Out-of-range starts are never weaves.
    pub fn is_weave(&self, warp_start: usize) -> bool {
        if self.check_position(warp_start).is_err() {
            return false;
        }
        let mut p = warp_start;
        for g in &self.gens {
            if !g.touches(p) {
                return false;
            }
            p = g.move_position(p);
        }
        true
    }

    /// A weave whose warp returns to `warp_start` with every strand back in place.
    pub fn is_pureweave(&self, warp_start: usize) -> bool {
        self.is_weave(warp_start)
            && self.is_purebraid()
            && self
                .warp_trace(warp_start)
                .map(|t| t.end() == warp_start)
                .unwrap_or(false)
    }

    /// Removes the strand that starts at `initial_position`, returning a word on
    /// `n - 1` strands. Crossings involving it vanish; the others are relabelled
    /// by where the erased strand sits at that instant.
    pub fn erase_strand(&self, initial_position: usize) -> Result<BraidWord, BraidError> {
        if self.strands < 3 {
            return Err(BraidError::TooFewStrands {
                strands: self.strands,
                min: 3,
            });
        }
        self.check_position(initial_position)?;
        let mut p = initial_position;
        let mut gens = Vec::new();
        for g in &self.gens {
            if g.touches(p) {
                p = g.move_position(p);
            } else if p < g.index() {
                gens.push(Generator::new(g.index() - 1, g.sign()));
            } else {
                gens.push(*g);
            }
        }
        Ok(BraidWord {
            strands: self.strands - 1,
            gens,
        })
    }

    /// Embeds the word into `strands` strands with every index raised by `offset`.
    pub fn shifted(&self, offset: usize, strands: usize) -> Result<BraidWord, BraidError> {
        if self.strands + offset > strands {
            return Err(BraidError::PositionOutOfRange {
                position: self.strands + offset,
                strands,
            });
        }
        let gens = self
            .gens
            .iter()
            .map(|g| Generator::new(g.index() + offset, g.sign()))
            .collect();
        BraidWord::new(strands, gens)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for g in &self.gens {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{g}")?;
        }
        Ok(())
    }
}
