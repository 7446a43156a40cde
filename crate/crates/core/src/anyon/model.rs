use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::Charge;
use crate::scalar::Real;

/// Which of the two conjugate hexagon solutions is in use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chirality {
    /// `R_1 = e^{+4πi/5}`, `R_τ = e^{-3πi/5}`.
    #[default]
    Plus,
    /// Complex conjugates of `Plus`.
    Minus,
}

impl std::str::FromStr for Chirality {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plus" | "+" => Ok(Chirality::Plus),
            "minus" | "-" => Ok(Chirality::Minus),
            other => Err(format!("unknown chirality {other:?} (expected plus or minus)")),
        }
    }
}

/// Fibonacci model data. A plain value so alternative constants can be
/// validated (and rejected) without touching the representation code.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelConstants<T> {
    pub phi: T,
    /// `F^{τττ}_τ`, indexed by (left channel, right channel) in `[1, τ]` order.
    pub f: [[T; 2]; 2],
    /// Exchange phase of a pair fusing to the vacuum.
    pub r_vacuum: Complex<T>,
    /// Exchange phase of a pair fusing to τ.
    pub r_tau: Complex<T>,
    pub chirality: Chirality,
}

impl<T: Real> ModelConstants<T> {
    pub fn fibonacci(chirality: Chirality) -> Self {
        let one = T::one();
        let five = T::lit(5.0);
        let phi = (one + five.sqrt()) / T::lit(2.0);
        let inv = one / phi;
        let inv_sqrt = inv.sqrt();
        let sign = match chirality {
            Chirality::Plus => one,
            Chirality::Minus => -one,
        };
        let pi = T::PI();
        ModelConstants {
            phi,
            f: [[inv, inv_sqrt], [inv_sqrt, -inv]],
            r_vacuum: Complex::from_polar(one, sign * T::lit(4.0) * pi / five),
            r_tau: Complex::from_polar(one, -sign * T::lit(3.0) * pi / five),
            chirality,
        }
    }

    /// `R^{ab}_c`; zero when `c` is not a fusion outcome of `a × b`.
    pub fn r_symbol(&self, a: Charge, b: Charge, c: Charge) -> Complex<T> {
        if !Charge::fuses_to(a, b, c) {
            return Complex::new(T::zero(), T::zero());
        }
        match (a, b, c) {
            (Charge::Tau, Charge::Tau, Charge::Vacuum) => self.r_vacuum,
            (Charge::Tau, Charge::Tau, Charge::Tau) => self.r_tau,
            _ => Complex::new(T::one(), T::zero()),
        }
    }

    /// `[F^{abc}_d]_{e f}` with `e` the channel of `a × b` and `f` of `b × c`;
    /// zero on inadmissible labels, one on admissible labels other than the
    /// all-τ block.
    pub fn f_symbol(&self, a: Charge, b: Charge, c: Charge, d: Charge, e: Charge, f: Charge) -> T {
        let admissible = Charge::fuses_to(a, b, e)
            && Charge::fuses_to(e, c, d)
            && Charge::fuses_to(b, c, f)
            && Charge::fuses_to(a, f, d);
        if !admissible {
            return T::zero();
        }
        if [a, b, c, d].iter().all(|&x| x == Charge::Tau) {
            self.f[e.slot()][f.slot()]
        } else {
            T::one()
        }
    }

    fn conjugated(&self) -> Self {
        ModelConstants {
            r_vacuum: self.r_vacuum.conj(),
            r_tau: self.r_tau.conj(),
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResidual<T> {
    pub name: &'static str,
    pub residual: T,
    pub tolerance: T,
}

impl<T: Real> CheckResidual<T> {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport<T> {
    pub checks: Vec<CheckResidual<T>>,
}

impl<T: Real> ValidationReport<T> {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResidual::passed)
    }

    pub fn residual(&self, name: &str) -> Option<T> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.residual)
    }
}

/// Checks the consistency conditions on the model data: `F` unitary and an
/// involution, the pentagon equation over all labels, and both hexagon
/// equations for total charge 1 and τ.
pub fn validate_model<T: Real>(model: &ModelConstants<T>) -> ValidationReport<T> {
    let tol = T::EXACT_TOL;
    let f = &model.f;
    let mut unitarity = T::zero();
    let mut involution = T::zero();
    for i in 0..2 {
        for j in 0..2 {
            let delta = if i == j { T::one() } else { T::zero() };
            // F is real: F F^T and F F
            let fft = f[i][0] * f[j][0] + f[i][1] * f[j][1];
            let ff = f[i][0] * f[0][j] + f[i][1] * f[1][j];
            unitarity = unitarity.max((fft - delta).abs());
            involution = involution.max((ff - delta).abs());
        }
    }
    ValidationReport {
        checks: vec![
            CheckResidual {
                name: "f_unitarity",
                residual: unitarity,
                tolerance: tol,
            },
            CheckResidual {
                name: "f_involution",
                residual: involution,
                tolerance: tol,
            },
            CheckResidual {
                name: "pentagon",
                residual: pentagon_residual(model),
                tolerance: tol,
            },
            CheckResidual {
                name: "hexagon_total_vacuum",
                residual: hexagon_residual(model, Charge::Vacuum),
                tolerance: tol,
            },
            CheckResidual {
                name: "hexagon_total_tau",
                residual: hexagon_residual(model, Charge::Tau),
                tolerance: tol,
            },
        ],
    }
}

fn pentagon_residual<T: Real>(m: &ModelConstants<T>) -> T {
    use Charge::*;
    let labels = [Vacuum, Tau];
    let mut worst = T::zero();
    // F^{fcd}_{e;gl} F^{abl}_{e;fk} = Σ_h F^{abc}_{g;fh} F^{ahd}_{e;gk} F^{bcd}_{k;hl}
    for bits in 0u32..(1 << 9) {
        let l = |i: u32| labels[((bits >> i) & 1) as usize];
        let (a, b, c, d, e, f, g, k, lab) = (l(0), l(1), l(2), l(3), l(4), l(5), l(6), l(7), l(8));
        let lhs = m.f_symbol(f, c, d, e, g, lab) * m.f_symbol(a, b, lab, e, f, k);
        let rhs: T = labels
            .iter()
            .map(|&h| m.f_symbol(a, b, c, g, f, h) * m.f_symbol(a, h, d, e, g, k) * m.f_symbol(b, c, d, k, h, lab))
            .sum();
        worst = worst.max((lhs - rhs).abs());
    }
    worst
}

/// Both orientations of
/// `R^{ca}_e F^{acb}_{d;eg} R^{cb}_g = Σ_f F^{cab}_{d;ef} R^{cf}_d F^{abc}_{d;fg}`
/// over all labels with the given total charge `d`.
fn hexagon_residual<T: Real>(model: &ModelConstants<T>, d: Charge) -> T {
    use Charge::*;
    let labels = [Vacuum, Tau];
    let mut worst = T::zero();
    for m in [model.clone(), model.conjugated()] {
        for bits in 0u32..(1 << 5) {
            let l = |i: u32| labels[((bits >> i) & 1) as usize];
            let (a, b, c, e, g) = (l(0), l(1), l(2), l(3), l(4));
            let lhs = m.r_symbol(c, a, e) * m.f_symbol(a, c, b, d, e, g) * m.r_symbol(c, b, g);
            let rhs: Complex<T> = labels
                .iter()
                .map(|&f| m.r_symbol(c, f, d) * m.f_symbol(c, a, b, d, e, f) * m.f_symbol(a, b, c, d, f, g))
                .sum();
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}
