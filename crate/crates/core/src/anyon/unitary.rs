use std::ops::Mul;

use num_complex::Complex;

use super::RepError;
use crate::scalar::Real;

/// Dense square complex matrix, row-major. Everything produced by the
/// representation is unitary; comparisons between unitaries are projective.
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary<T> {
    dim: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Real> Unitary<T> {
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub(crate) fn zeros(dim: usize) -> Self {
        Unitary {
            dim,
            entries: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    /// Wraps row-major entries without checking unitarity.
    pub fn from_rows(dim: usize, entries: Vec<Complex<T>>) -> Result<Self, RepError> {
        if entries.len() != dim * dim {
            return Err(RepError::DimensionMismatch {
                left: dim * dim,
                right: entries.len(),
            });
        }
        Ok(Unitary { dim, entries })
    }

    pub fn diagonal(values: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.entries[row * self.dim + col]
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, value: Complex<T>) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.entries[c * n + r] = self.entries[r * n + c].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn try_mul(&self, rhs: &Unitary<T>) -> Result<Unitary<T>, RepError> {
        if self.dim != rhs.dim {
            return Err(RepError::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.entries[r * n + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for c in 0..n {
                    out.entries[r * n + c] = out.entries[r * n + c] + a * rhs.entries[k * n + c];
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Unitary {
            dim: self.dim,
            entries: self.entries.iter().map(|&z| z * factor).collect(),
        }
    }

    /// Block-diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &Unitary<T>) -> Self {
        let n = self.dim + other.dim;
        let mut out = Self::zeros(n);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.set(r, c, self.get(r, c));
            }
        }
        for r in 0..other.dim {
            for c in 0..other.dim {
                out.set(self.dim + r, self.dim + c, other.get(r, c));
            }
        }
        out
    }

    /// Largest entrywise modulus of `self - other`; infinite on dimension mismatch.
    pub fn max_abs_diff(&self, other: &Unitary<T>) -> T {
        if self.dim != other.dim {
            return T::infinity();
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    /// Max-entry norm of `U†U - I`.
    pub fn unitarity_residual(&self) -> T {
        let product = &self.adjoint() * self;
        product.max_abs_diff(&Self::identity(self.dim))
    }

    pub fn cast<U: Real>(&self) -> Unitary<U> {
        Unitary {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|z| Complex::new(U::lit(z.re.to_f64_lossy()), U::lit(z.im.to_f64_lossy())))
                .collect(),
        }
    }
}

impl<T: Real> Mul for &Unitary<T> {
    type Output = Unitary<T>;

    /// Panics on dimension mismatch; use [`Unitary::try_mul`] for checked products.
    fn mul(self, rhs: &Unitary<T>) -> Unitary<T> {
        self.try_mul(rhs).expect("matrix dimensions agree")
    }
}

/// Normalised Frobenius distance minimised over a global phase,
/// `min_θ ‖U − e^{iθ}V‖_F / √M`. For unitaries this is
/// `sqrt(max(0, 2 - 2 |Tr(U†V)| / M))`; it is zero iff `U = e^{iθ} V`.
pub fn projective_distance<T: Real>(u: &Unitary<T>, v: &Unitary<T>) -> Result<T, RepError> {
    if u.dim != v.dim {
        return Err(RepError::DimensionMismatch {
            left: u.dim,
            right: v.dim,
        });
    }
    // Tr(U†V) = Σ conj(u_rc) v_rc
    let overlap: Complex<T> = u
        .entries
        .iter()
        .zip(&v.entries)
        .map(|(a, b)| a.conj() * *b)
        .sum();
    let norm_u: T = u.entries.iter().map(|z| z.norm_sqr()).sum();
    let norm_v: T = v.entries.iter().map(|z| z.norm_sqr()).sum();
    let m = T::from_usize(u.dim).expect("dimension fits");
    let two = T::lit(2.0);
    Ok(((norm_u + norm_v - two * overlap.norm()) / m).max(T::zero()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn distance_examples() {
        let i2 = Unitary::<f64>::identity(2);
        let z = Unitary::diagonal(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        assert!((projective_distance(&i2, &z).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(projective_distance(&z, &z).unwrap(), 0.0);
        let phased = z.scale(Complex::from_polar(1.0, 0.77));
        assert!(projective_distance(&z, &phased).unwrap() < 1e-7);
        assert!(projective_distance(&z, &Unitary::identity(3)).is_err());
    }

    #[test]
    fn f32_instantiation() {
        let z = Unitary::<f32>::diagonal(&[Complex::new(0.0, 1.0), Complex::new(1.0, 0.0)]);
        assert!(z.unitarity_residual() < f32::EXACT_TOL);
        assert_eq!(z.cast::<f64>().dim(), 2);
    }

    #[test]
    fn direct_sum_and_products() {
        let a = Unitary::diagonal(&[c(0.0, 1.0)]);
        let b = Unitary::diagonal(&[c(1.0, 0.0), c(0.0, -1.0)]);
        let s = a.direct_sum(&b);
        assert_eq!(s.dim(), 3);
        assert_eq!(s.get(2, 2), c(0.0, -1.0));
        assert!((&s * &s.adjoint()).max_abs_diff(&Unitary::identity(3)) < 1e-15);
        assert!(a.try_mul(&b).is_err());
    }
}
