//! Exact arithmetic over the rationals.
//!
//! [`Poly2`] and [`RationalFunction2`] are sparse objects in two variables,
//! conventionally `x` and `λ` (the cm module reuses the second slot for the
//! symmetric-form parameter `m`). [`UniPoly`] is a dense univariate
//! polynomial used for fiber data and operator coefficients.
//!
//! Rational functions are never reduced to lowest terms; equality and zero
//! tests go through cross-multiplication.

mod poly2;
mod ratfunc;
mod unipoly;

pub use poly2::{Poly2, Var};
pub use ratfunc::{RationalFunction2, ZeroDivisor};
pub use unipoly::UniPoly;

use num_bigint::BigInt;

/// Arbitrary-precision rational in canonical form (positive denominator, coprime parts).
pub type Rational = num_rational::BigRational;

/// Builds `num/den` as a canonical rational. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Lossy conversion used at the exact/numeric boundary.
pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}
