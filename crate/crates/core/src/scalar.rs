use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point type the numerical core runs on.
///
/// The tolerances are the defaults used by iteration and consistency checks;
/// they are expressed per type since `f32` cannot resolve `1e-12` steps.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Step size below which an iteration counts as converged.
    const ITER_TOL: f64;
    /// Largest imaginary residue tolerated on a quantity that must be real.
    const REAL_TOL: f64;
    /// Success probability treated as zero.
    const ZERO_PROB: f64;

    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("finite literal")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const ITER_TOL: f64 = 1e-12;
    const REAL_TOL: f64 = 1e-10;
    const ZERO_PROB: f64 = 1e-14;
}

impl Scalar for f32 {
    const ITER_TOL: f64 = 1e-6;
    const REAL_TOL: f64 = 1e-4;
    const ZERO_PROB: f64 = 1e-7;
}
