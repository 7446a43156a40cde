use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar the numerical layer is generic over: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Residual allowed for identities that hold exactly in exact arithmetic.
    const EXACT_TOL: Self;
    /// Residual allowed for identities evaluated through long matrix products.
    const PRODUCT_TOL: Self;

    /// Converts an `f64` literal.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("literal representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const EXACT_TOL: f64 = 1e-12;
    const PRODUCT_TOL: f64 = 1e-10;
}

impl Real for f32 {
    const EXACT_TOL: f32 = 2e-6;
    const PRODUCT_TOL: f32 = 1e-4;
}
