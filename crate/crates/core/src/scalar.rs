//! Scalar abstraction: the real floating-point type underlying all complex
//! arithmetic in the crate.

use num_traits::{Float, FloatConst, FromPrimitive, NumAssignOps};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Real scalar type for all numerics (`f32` or `f64`).
///
/// Everything downstream works with `Complex<R>` where `R: Real`; the
/// concrete aliases at the crate root fix `R = f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssignOps + Sum + Debug + Display + Send + Sync + 'static
{
    /// Convert an `f64` constant, panicking only on genuinely
    /// unrepresentable values (never for the literals used here).
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("constant not representable in scalar type")
    }

    /// A validation tolerance: the spec value for `f64`, floored at
    /// 32 machine epsilons so the same checks stay meaningful in `f32`.
    fn tol(spec: f64) -> Self {
        Self::of(spec).max(Self::epsilon() * Self::of(32.0))
    }
}

impl Real for f32 {}
impl Real for f64 {}
