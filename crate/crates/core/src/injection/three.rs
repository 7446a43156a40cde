//! Fast evaluation of 3-strand words: the τ-sector 2×2 block and the
//! vacuum-sector phase, without going through dense matrices.

use num_complex::Complex64;

use crate::anyon::{Charge, FusionBasis, ModelConstants, Representation};
use crate::braid::Sign;

/// Row-major 2×2 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [Complex64; 4]);

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([ONE, ZERO, ZERO, ONE]);

    #[inline]
    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = rhs.0;
        Mat2([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }

    pub fn adjoint(&self) -> Mat2 {
        let [a, b, c, d] = self.0;
        Mat2([a.conj(), c.conj(), b.conj(), d.conj()])
    }

    #[inline]
    pub fn trace(&self) -> Complex64 {
        self.0[0] + self.0[3]
    }

    pub fn det(&self) -> Complex64 {
        self.0[0] * self.0[3] - self.0[1] * self.0[2]
    }

    pub fn scale(&self, z: Complex64) -> Mat2 {
        Mat2(self.0.map(|x| x * z))
    }

    /// Coordinates `(a, b, c, d)` of `a I - i(b X + c Y + d Z)`. Exact for
    /// SU(2); for other matrices it is the orthogonal projection onto that
    /// real span.
    pub fn quaternion(&self) -> [f64; 4] {
        let [m00, m01, m10, m11] = self.0;
        [
            (m00.re + m11.re) / 2.0,
            -(m01.im + m10.im) / 2.0,
            (m10.re - m01.re) / 2.0,
            (m11.im - m00.im) / 2.0,
        ]
    }

    pub fn from_quaternion(q: [f64; 4]) -> Mat2 {
        let [a, b, c, d] = q;
        Mat2([
            Complex64::new(a, -d),
            Complex64::new(-c, -b),
            Complex64::new(c, -b),
            Complex64::new(a, d),
        ])
    }
}

/// A 3-anyon operator as `U_τ ⊕ u_1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sectors3 {
    pub tau: Mat2,
    pub vacuum: Complex64,
}

impl Sectors3 {
    pub const IDENTITY: Sectors3 = Sectors3 {
        tau: Mat2::IDENTITY,
        vacuum: ONE,
    };

    /// `self` followed by `next` (column convention: `next · self`).
    #[inline]
    pub fn then(&self, next: &Sectors3) -> Sectors3 {
        Sectors3 {
            tau: next.tau.mul(&self.tau),
            vacuum: next.vacuum * self.vacuum,
        }
    }

    pub fn inverse(&self) -> Sectors3 {
        Sectors3 {
            tau: self.tau.adjoint(),
            vacuum: self.vacuum.conj(),
        }
    }

    #[inline]
    pub fn distance_2d(&self) -> f64 {
        (2.0 - self.tau.trace().norm()).max(0.0).sqrt()
    }

    #[inline]
    pub fn distance_full(&self) -> f64 {
        (2.0 - 2.0 * (self.tau.trace() + self.vacuum).norm() / 3.0)
            .max(0.0)
            .sqrt()
    }

    /// `U_τ / u_1`: the operator relative to the vacuum-sector phase.
    pub fn relative(&self) -> Mat2 {
        self.tau.scale(self.vacuum.conj())
    }
}

/// Generator table for 3 strands, read off the dense representation so both
/// routes agree by construction.
#[derive(Clone, Debug)]
pub struct Table3 {
    gens: [[Sectors3; 2]; 2],
    /// Principal square root of `det(U_τ / u_1)` for a positive generator.
    pub root_phase: Complex64,
}

impl Table3 {
    pub fn new(model: &ModelConstants<f64>) -> Self {
        let tau = Representation::new(model, FusionBasis::enumerate(3, Charge::Tau).expect("n = 3"));
        let vac = Representation::new(model, FusionBasis::enumerate(3, Charge::Vacuum).expect("n = 3"));
        let block = |index: usize, sign: Sign| {
            let t = tau.generator(index, sign);
            Sectors3 {
                tau: Mat2([t.get(0, 0), t.get(0, 1), t.get(1, 0), t.get(1, 1)]),
                vacuum: vac.generator(index, sign).get(0, 0),
            }
        };
        let gens = [
            [block(1, Sign::Neg), block(1, Sign::Pos)],
            [block(2, Sign::Neg), block(2, Sign::Pos)],
        ];
        let root_phase = gens[0][1].relative().det().sqrt();
        Table3 { gens, root_phase }
    }

    /// Generator from its signed form `±1`, `±2`.
    #[inline]
    pub fn get(&self, signed: i8) -> &Sectors3 {
        let sign = usize::from(signed > 0);
        &self.gens[(signed.unsigned_abs() - 1) as usize][sign]
    }

    pub fn word(&self, signed: &[i8]) -> Sectors3 {
        signed
            .iter()
            .fold(Sectors3::IDENTITY, |acc, &g| acc.then(self.get(g)))
    }

    /// `root_phase^writhe`, the determinant phase removed to land in SU(2).
    pub fn phase_of_writhe(&self, writhe: i64) -> Complex64 {
        Complex64::from_polar(1.0, self.root_phase.arg() * writhe as f64)
    }

    /// Period of `phase_of_writhe`.
    pub fn phase_period(&self) -> i64 {
        (1..=64)
            .find(|&m| (self.phase_of_writhe(m) - ONE).norm() < 1e-9)
            .expect("generator phase is a root of unity")
    }
}

/// Moves available to a warp at `position` on 3 strands, as signed generators.
pub(crate) fn moves(position: u8) -> &'static [i8] {
    match position {
        1 => &[-1, 1],
        2 => &[-2, -1, 1, 2],
        3 => &[-2, 2],
        _ => &[],
    }
}

/// Warp position after applying `g` at `position` (assumes `g` touches it).
#[inline]
pub(crate) fn step(position: u8, g: i8) -> u8 {
    let s = g.unsigned_abs();
    if position == s {
        s + 1
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anyon::{full_rep_unitary, Chirality};
    use crate::braid::BraidWord;

    #[test]
    fn table_matches_dense_route() {
        let model = ModelConstants::fibonacci(Chirality::Plus);
        let table = Table3::new(&model);
        let word: Vec<i8> = vec![1, 2, -1, 2, 2, -1, -2, 1];
        let fast = table.word(&word);
        let signed: Vec<i32> = word.iter().map(|&g| g as i32).collect();
        let blocks = full_rep_unitary(&model, 3, &BraidWord::from_signed(3, &signed).unwrap()).unwrap();
        for r in 0..2 {
            for c in 0..2 {
                assert!((fast.tau.0[2 * r + c] - blocks.tau.get(r, c)).norm() < 1e-13);
            }
        }
        assert!((fast.vacuum - blocks.vacuum.get(0, 0)).norm() < 1e-13);
    }

    #[test]
    fn relative_determinant_tracks_writhe() {
        let table = Table3::new(&ModelConstants::fibonacci(Chirality::Plus));
        assert_eq!(table.phase_period(), 20);
        let word = [1i8, 2, 2, -1, 2, 1, 1];
        let p = table.word(&word).relative();
        let expect = table.phase_of_writhe(5);
        assert!((p.det() - expect * expect).norm() < 1e-12);
    }

    #[test]
    fn quaternion_round_trip() {
        let q = [0.5, -0.5, 0.5, 0.5];
        let m = Mat2::from_quaternion(q);
        assert!((m.det() - ONE).norm() < 1e-15);
        assert_eq!(m.quaternion(), q);
        let n = Mat2::from_quaternion([0.0, 1.0, 0.0, 0.0]);
        // tr(A†B) = 2 <qA, qB>
        let t = m.adjoint().mul(&n).trace();
        assert!((t.re - 2.0 * -0.5).abs() < 1e-15 && t.im.abs() < 1e-15);
    }
}
