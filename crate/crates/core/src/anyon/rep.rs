use num_complex::Complex;

use super::{Charge, FusionBasis, FusionPath, ModelConstants, RepError, Unitary};
use crate::braid::{BraidWord, Sign};
use crate::scalar::Real;

/// Matrix of `τ_index` on the fusion space. Columns are input paths, so a
/// word's matrix is the product with the first generator rightmost.
///
/// `τ_1` is diagonal with phase `R_{x_2}`. For `index ≥ 2` only `x_index`
/// changes; with neighbours `a = x_{index-1}` and `d = x_{index+1}` the
/// amplitude `e → e'` is `Σ_f F^{aττ}_{d;e'f} R_f F^{aττ}_{d;ef}`.
pub fn generator_unitary<T: Real>(
    model: &ModelConstants<T>,
    basis: &FusionBasis,
    index: usize,
) -> Result<Unitary<T>, RepError> {
    let n = basis.n();
    if index == 0 || index >= n {
        return Err(RepError::GeneratorOutOfRange { index, anyons: n });
    }
    let mut out = Unitary::zeros(basis.dim());
    for (col, path) in basis.paths().iter().enumerate() {
        if index == 1 {
            let channel = path.label(2);
            out.set(col, col, model.r_symbol(Charge::Tau, Charge::Tau, channel));
            continue;
        }
        let a = path.label(index - 1);
        let e = path.label(index);
        let d = path.label(index + 1);
        for e_out in Charge::ALL {
            let mut labels = path.labels().to_vec();
            labels[index - 1] = e_out;
            let Some(row) = basis.position(&FusionPath(labels)) else {
                continue;
            };
            let amp: Complex<T> = Charge::ALL
                .iter()
                .map(|&f| {
                    let left = model.f_symbol(a, Charge::Tau, Charge::Tau, d, e_out, f);
                    let right = model.f_symbol(a, Charge::Tau, Charge::Tau, d, e, f);
                    model.r_symbol(Charge::Tau, Charge::Tau, f) * (left * right)
                })
                .sum();
            out.set(row, col, amp);
        }
    }
    Ok(out)
}

/// Generator matrices of one basis, cached with their inverses.
#[derive(Clone, Debug)]
pub struct Representation<T> {
    basis: FusionBasis,
    forward: Vec<Unitary<T>>,
    backward: Vec<Unitary<T>>,
}

impl<T: Real> Representation<T> {
    pub fn new(model: &ModelConstants<T>, basis: FusionBasis) -> Self {
        let forward: Vec<_> = (1..basis.n())
            .map(|i| generator_unitary(model, &basis, i).expect("index in range"))
            .collect();
        let backward = forward.iter().map(Unitary::adjoint).collect();
        Representation {
            basis,
            forward,
            backward,
        }
    }

    pub fn basis(&self) -> &FusionBasis {
        &self.basis
    }

    pub fn generator(&self, index: usize, sign: Sign) -> &Unitary<T> {
        match sign {
            Sign::Pos => &self.forward[index - 1],
            Sign::Neg => &self.backward[index - 1],
        }
    }

    /// Ordered product, first generator applied first. The empty word maps to `I`.
    pub fn word(&self, word: &BraidWord) -> Result<Unitary<T>, RepError> {
        if word.strands() != self.basis.n() {
            return Err(RepError::StrandMismatch {
                word: word.strands(),
                basis: self.basis.n(),
            });
        }
        let mut acc = Unitary::identity(self.basis.dim());
        for g in word.gens() {
            acc = self.generator(g.index(), g.sign()) * &acc;
        }
        Ok(acc)
    }
}

pub fn word_unitary<T: Real>(
    model: &ModelConstants<T>,
    basis: &FusionBasis,
    word: &BraidWord,
) -> Result<Unitary<T>, RepError> {
    Representation::new(model, basis.clone()).word(word)
}

/// The word's action on both total-charge sectors, evaluated independently.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorBlocks<T> {
    pub vacuum: Unitary<T>,
    pub tau: Unitary<T>,
}

impl<T: Real> SectorBlocks<T> {
    /// `U_τ ⊕ U_1`.
    pub fn block_diagonal(&self) -> Unitary<T> {
        self.tau.direct_sum(&self.vacuum)
    }
}

pub fn full_rep_unitary<T: Real>(
    model: &ModelConstants<T>,
    n: usize,
    word: &BraidWord,
) -> Result<SectorBlocks<T>, RepError> {
    if word.strands() != n {
        return Err(RepError::StrandMismatch {
            word: word.strands(),
            basis: n,
        });
    }
    Ok(SectorBlocks {
        vacuum: word_unitary(model, &FusionBasis::enumerate(n, Charge::Vacuum)?, word)?,
        tau: word_unitary(model, &FusionBasis::enumerate(n, Charge::Tau)?, word)?,
    })
}

/// Largest violation of `τ_i τ_{i+1} τ_i = τ_{i+1} τ_i τ_{i+1}` and of
/// `τ_i τ_j = τ_j τ_i` (`|i - j| ≥ 2`) on one basis, max-entry norm.
pub fn braid_relation_residual<T: Real>(rep: &Representation<T>) -> T {
    let n = rep.basis().n();
    let g = |i: usize| rep.generator(i, Sign::Pos);
    let mut worst = T::zero();
    for i in 1..n {
        for j in i + 1..n {
            let residual = if j == i + 1 {
                let lhs = &(g(i) * g(j)) * g(i);
                let rhs = &(g(j) * g(i)) * g(j);
                lhs.max_abs_diff(&rhs)
            } else {
                (g(i) * g(j)).max_abs_diff(&(g(j) * g(i)))
            };
            worst = worst.max(residual);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anyon::{projective_distance, Chirality};

    fn model() -> ModelConstants<f64> {
        ModelConstants::fibonacci(Chirality::Plus)
    }

    fn basis(n: usize, c: Charge) -> FusionBasis {
        FusionBasis::enumerate(n, c).unwrap()
    }

    #[test]
    fn three_anyon_generators_by_rule() {
        let m = model();
        let b = basis(3, Charge::Tau);
        let s1 = generator_unitary(&m, &b, 1).unwrap();
        let expect = Unitary::diagonal(&[m.r_vacuum, m.r_tau]);
        assert!(s1.max_abs_diff(&expect) < 1e-15);

        let s2 = generator_unitary(&m, &b, 2).unwrap();
        let f = |i: usize, j: usize| Complex::new(m.f[i][j], 0.0);
        let f_mat = Unitary::from_rows(2, vec![f(0, 0), f(0, 1), f(1, 0), f(1, 1)]).unwrap();
        let expect = &(&f_mat * &expect) * &f_mat;
        assert!(s2.max_abs_diff(&expect) < 1e-15);

        let v = generator_unitary(&m, &basis(3, Charge::Vacuum), 1).unwrap();
        assert_eq!(v.dim(), 1);
        assert!((v.get(0, 0) - m.r_tau).norm() < 1e-15);
        assert!(generator_unitary(&m, &b, 3).is_err());
        assert!(generator_unitary(&m, &b, 0).is_err());
    }

    #[test]
    fn braid_relations_hold_up_to_eight_anyons() {
        for chirality in [Chirality::Plus, Chirality::Minus] {
            let m = ModelConstants::<f64>::fibonacci(chirality);
            for n in 3..=8 {
                for c in Charge::ALL {
                    let rep = Representation::new(&m, basis(n, c));
                    let r = braid_relation_residual(&rep);
                    assert!(r < 1e-10, "n={n} {c}: {r:e}");
                    for i in 1..n {
                        assert!(rep.generator(i, Sign::Pos).unitarity_residual() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn word_unitary_basics() {
        let m = model();
        let b = basis(4, Charge::Tau);
        let empty = BraidWord::identity(4).unwrap();
        assert_eq!(word_unitary(&m, &b, &empty).unwrap(), Unitary::identity(3));
        let w = BraidWord::from_signed(4, &[1, -2, 3, 3]).unwrap();
        let u = word_unitary(&m, &b, &w).unwrap();
        let ui = word_unitary(&m, &b, &w.inverse()).unwrap();
        assert!(ui.max_abs_diff(&u.adjoint()) < 1e-12);
        let wrong = BraidWord::from_signed(3, &[1]).unwrap();
        assert!(word_unitary(&m, &b, &wrong).is_err());
    }

    #[test]
    fn full_rep_of_tau1_on_three_anyons() {
        let m = model();
        let w = BraidWord::from_signed(3, &[1]).unwrap();
        let blocks = full_rep_unitary(&m, 3, &w).unwrap();
        assert!((blocks.vacuum.get(0, 0) - m.r_tau).norm() < 1e-15);
        assert!(blocks
            .tau
            .max_abs_diff(&Unitary::diagonal(&[m.r_vacuum, m.r_tau]))
            < 1e-15);
        let empty = full_rep_unitary(&m, 3, &BraidWord::identity(3).unwrap()).unwrap();
        assert_eq!(empty.vacuum, Unitary::identity(1));
        assert_eq!(empty.tau, Unitary::identity(2));
    }

    #[test]
    fn chiralities_are_complex_conjugate() {
        let w = BraidWord::from_signed(5, &[1, 2, -3, 4, 2, -1]).unwrap();
        let b = basis(5, Charge::Tau);
        let plus = word_unitary(&model(), &b, &w).unwrap();
        let minus = word_unitary(&ModelConstants::fibonacci(Chirality::Minus), &b, &w).unwrap();
        let conj = Unitary::from_rows(plus.dim(), plus.entries().iter().map(|z| z.conj()).collect()).unwrap();
        assert!(minus.max_abs_diff(&conj) < 1e-12);
        assert!(projective_distance(&plus, &plus).unwrap() == 0.0);
    }
}
