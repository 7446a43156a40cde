//! Least-squares fit of `L ≈ C · n p · |ln(ε / (n p))|^α` to observed
//! compiled lengths.

use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalingSample {
    pub n: usize,
    pub p: usize,
    pub epsilon: f64,
    pub length: usize,
}

impl ScalingSample {
    fn work(&self) -> f64 {
        (self.n * self.p) as f64
    }

    fn log_term(&self) -> f64 {
        (self.epsilon / self.work()).ln().abs()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("need at least 5 samples, got {0}")]
    TooFewSamples(usize),
    #[error("epsilon range spans a factor of {0:.3}, need at least 10")]
    NarrowRange(f64),
    #[error("degenerate sample: {0}")]
    Degenerate(String),
    #[error("fitted exponent {0:.3} is not positive")]
    NonPositiveAlpha(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingFit {
    pub alpha: f64,
    /// Prefactor from the regression intercept.
    pub c_least_squares: f64,
    /// Smallest prefactor with every sample on or under the curve at `alpha`.
    pub c_envelope: f64,
    /// Root mean square of the log residuals.
    pub rms_residual: f64,
    pub samples: Vec<ScalingSample>,
}

impl ScalingFit {
    /// `c_envelope · n p · |ln(ε / (n p))|^α`.
    pub fn bound(&self, n: usize, p: usize, epsilon: f64) -> f64 {
        let work = (n * p) as f64;
        self.c_envelope * work * (epsilon / work).ln().abs().powf(self.alpha)
    }

    /// Whether every sample lies under `bound`, up to rounding.
    pub fn all_within(&self) -> bool {
        self.samples
            .iter()
            .all(|s| s.length as f64 <= self.bound(s.n, s.p, s.epsilon) * (1.0 + 1e-9))
    }
}

/// Regresses `ln(L / (n p))` on `ln |ln(ε / (n p))|`.
pub fn length_bound_report(samples: &[ScalingSample]) -> Result<ScalingFit, FitError> {
    if samples.len() < 5 {
        return Err(FitError::TooFewSamples(samples.len()));
    }
    for s in samples {
        let ok = s.n > 0 && s.p > 0 && s.length > 0 && s.epsilon > 0.0 && s.epsilon.is_finite();
        if !ok || s.log_term() <= 0.0 || !s.log_term().is_finite() {
            return Err(FitError::Degenerate(format!("{s:?}")));
        }
    }
    let (lo, hi) = samples
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), s| (lo.min(s.epsilon), hi.max(s.epsilon)));
    if hi / lo < 10.0 {
        return Err(FitError::NarrowRange(hi / lo));
    }
    let xs: Vec<f64> = samples.iter().map(|s| s.log_term().ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|s| (s.length as f64 / s.work()).ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 1e-24 {
        return Err(FitError::Degenerate("all samples share one log term".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let alpha = sxy / sxx;
    if !(alpha > 0.0) {
        return Err(FitError::NonPositiveAlpha(alpha));
    }
    let intercept = my - alpha * mx;
    let residuals: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| y - intercept - alpha * x).collect();
    let rms_residual = (residuals.iter().map(|r| r * r).sum::<f64>() / m).sqrt();
    let worst = residuals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(ScalingFit {
        alpha,
        c_least_squares: intercept.exp(),
        c_envelope: (intercept + worst).exp(),
        rms_residual,
        samples: samples.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(alpha: f64, c: f64) -> Vec<ScalingSample> {
        [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6]
            .iter()
            .map(|&epsilon| {
                let (n, p) = (5, 10);
                let work = (n * p) as f64;
                let length = (c * work * (epsilon / work).ln().abs().powf(alpha)).round() as usize;
                ScalingSample { n, p, epsilon, length }
            })
            .collect()
    }

    #[test]
    fn recovers_known_exponent() {
        let fit = length_bound_report(&synthetic(3.97, 2.5)).unwrap();
        assert!((fit.alpha - 3.97).abs() < 1e-3, "{}", fit.alpha);
        assert!((fit.c_least_squares - 2.5).abs() < 1e-2);
        assert!(fit.c_envelope >= fit.c_least_squares);
        assert!(fit.all_within());
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = synthetic(2.0, 1.0);
        assert_eq!(length_bound_report(&s[..4]), Err(FitError::TooFewSamples(4)));
        let narrow: Vec<_> = s
            .iter()
            .map(|x| ScalingSample { epsilon: 0.01, ..*x })
            .collect();
        assert!(matches!(length_bound_report(&narrow), Err(FitError::NarrowRange(_))));
        let falling: Vec<_> = s
            .iter()
            .enumerate()
            .map(|(i, x)| ScalingSample { length: 1000 - 100 * i, ..*x })
            .collect();
        assert!(matches!(length_bound_report(&falling), Err(FitError::NonPositiveAlpha(_))));
    }
}
