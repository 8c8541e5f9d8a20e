use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

use super::{Poly2, Rational, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("division by the zero rational function")]
pub struct ZeroDivisor;

/// Quotient of two [`Poly2`] values.
///
/// The stored representation is not canonical. Two values are equal when
/// `n1·d2 − n2·d1` expands to zero.
#[derive(Clone, Debug)]
pub struct RationalFunction2 {
    num: Poly2,
    den: Poly2,
}

impl RationalFunction2 {
    pub fn new(num: Poly2, den: Poly2) -> Result<Self, ZeroDivisor> {
        if den.is_zero() {
            return Err(ZeroDivisor);
        }
        Ok(Self::normalized(num, den))
    }

    // den must be nonzero. Scales so the leading stored denominator
    // coefficient is one; no polynomial cancellation happens here.
    fn normalized(num: Poly2, den: Poly2) -> Self {
        if num.is_zero() {
            return Self { num, den: Poly2::one() };
        }
        let lead = den
            .terms()
            .last()
            .map(|(_, c)| c.clone())
            .expect("denominator is nonzero");
        if lead.is_one() {
            return Self { num, den };
        }
        let inv = lead.recip();
        Self {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly2::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly2::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Poly2::constant(c))
    }

    pub fn from_poly(p: Poly2) -> Self {
        Self { num: p, den: Poly2::one() }
    }

    pub fn x() -> Self {
        Self::from_poly(Poly2::x())
    }

    pub fn lambda() -> Self {
        Self::from_poly(Poly2::lambda())
    }

    pub fn numerator(&self) -> &Poly2 {
        &self.num
    }

    pub fn denominator(&self) -> &Poly2 {
        &self.den
    }

    /// True iff the numerator expands to the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Returns the constant value if the function is a constant.
    ///
    /// Detects `num = k·den` by comparing against the ratio of one pair of
    /// matching terms.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.num.is_zero() {
            return Some(Rational::zero());
        }
        let (key, dc) = self.den.terms().next()?;
        let k = self.num.coeff(key.0, key.1) / dc;
        if self.den.scale(&k) == self.num {
            Some(k)
        } else {
            None
        }
    }

    pub fn recip(&self) -> Result<Self, ZeroDivisor> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ZeroDivisor> {
        if rhs.is_zero() {
            return Err(ZeroDivisor);
        }
        Ok(Self::normalized(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn pow(&self, e: u32) -> Self {
        Self::normalized(self.num.pow(e), self.den.pow(e))
    }

    /// `f^e` for a possibly negative exponent.
    pub fn powi(&self, e: i32) -> Result<Self, ZeroDivisor> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            self.recip().map(|r| r.pow(e.unsigned_abs()))
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    /// Quotient rule: `(n'·d − n·d') / d²`.
    pub fn partial_derivative(&self, var: Var) -> Self {
        let dn = self.num.derivative(var);
        let dd = self.den.derivative(var);
        if dd.is_zero() {
            return Self::normalized(dn, self.den.clone());
        }
        Self::normalized(&dn * &self.den - &self.num * &dd, self.den.pow(2))
    }

    /// Evaluates at a rational point; `None` when the stored denominator vanishes there.
    pub fn eval(&self, x: &Rational, lambda: &Rational) -> Option<Rational> {
        let d = self.den.eval(x, lambda);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x, lambda) / d)
        }
    }
}

impl PartialEq for RationalFunction2 {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl From<Poly2> for RationalFunction2 {
    fn from(p: Poly2) -> Self {
        Self::from_poly(p)
    }
}

impl From<Rational> for RationalFunction2 {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl<'a> Add<&'a RationalFunction2> for &'a RationalFunction2 {
    type Output = RationalFunction2;
    fn add(self, rhs: &'a RationalFunction2) -> RationalFunction2 {
        if self.den == rhs.den {
            return RationalFunction2::normalized(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction2::normalized(
            &self.num * &rhs.den + &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl<'a> Sub<&'a RationalFunction2> for &'a RationalFunction2 {
    type Output = RationalFunction2;
    fn sub(self, rhs: &'a RationalFunction2) -> RationalFunction2 {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalFunction2> for &'a RationalFunction2 {
    type Output = RationalFunction2;
    fn mul(self, rhs: &'a RationalFunction2) -> RationalFunction2 {
        RationalFunction2::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RationalFunction2 {
    type Output = RationalFunction2;
    fn neg(self) -> RationalFunction2 {
        RationalFunction2 {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalFunction2 {
    type Output = RationalFunction2;
    fn neg(self) -> RationalFunction2 {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RationalFunction2> for RationalFunction2 {
            type Output = RationalFunction2;
            fn $m(self, rhs: RationalFunction2) -> RationalFunction2 {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a RationalFunction2> for RationalFunction2 {
            type Output = RationalFunction2;
            fn $m(self, rhs: &'a RationalFunction2) -> RationalFunction2 {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};
    use proptest::prelude::*;

    type RF = RationalFunction2;

    fn x() -> RF {
        RF::x()
    }
    fn l() -> RF {
        RF::lambda()
    }
    fn c(n: i64) -> RF {
        RF::constant(int(n))
    }

    #[test]
    fn inverse_then_multiply() {
        let d = x() - l();
        let inv = RF::one().checked_div(&d).unwrap();
        let back = &inv * &d;
        assert_eq!(back, RF::one());
        assert_eq!(back.as_constant(), Some(int(1)));
    }

    #[test]
    fn common_denominator() {
        let sum = x().recip().unwrap() + (x() - c(1)).recip().unwrap();
        let expected = RF::new(
            (Poly2::x().scale(&int(2))) - Poly2::one(),
            Poly2::x() * (Poly2::x() - Poly2::one()),
        )
        .unwrap();
        assert_eq!(sum, expected);
    }

    #[test]
    fn zero_tests() {
        let diff_sq = (x().pow(2) - l().pow(2)).checked_div(&(x() - l())).unwrap();
        assert!((diff_sq - (x() + l())).is_zero());

        let q = (x() - l()).recip().unwrap();
        assert!((&q - &q).is_zero());

        let r = x().recip().unwrap() - (x() - c(1)).recip().unwrap();
        assert!(!r.is_zero());
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(x().checked_div(&RF::zero()), Err(ZeroDivisor));
        assert!(RF::new(Poly2::one(), Poly2::zero()).is_err());
        assert!(RF::zero().recip().is_err());
    }

    #[test]
    fn derivative_examples() {
        let inv = (x() - l()).recip().unwrap();
        let d = inv.partial_derivative(Var::Lambda);
        assert_eq!(d, (x() - l()).powi(-2).unwrap());
        assert_eq!(x().pow(2).partial_derivative(Var::X), &c(2) * &x());
    }

    #[test]
    fn eval_skips_poles() {
        let f = (x() - l()).recip().unwrap();
        assert_eq!(f.eval(&int(1), &int(1)), None);
        assert_eq!(f.eval(&int(3), &int(1)), Some(rat(1, 2)));
    }

    // Small random rational functions with denominators that are products of
    // shifted linear forms, so they are never identically zero.
    fn arb_rf() -> impl Strategy<Value = RF> {
        let poly = prop::collection::vec((0u32..3, 0u32..3, -6i64..7, 1i64..5), 0..4)
            .prop_map(|ts| Poly2::from_terms(ts.into_iter().map(|(a, b, n, d)| (a, b, rat(n, d)))));
        let den = prop::collection::vec((-3i64..4, -3i64..4, 1i64..3), 0..3).prop_map(|fs| {
            fs.into_iter().fold(Poly2::one(), |acc, (sx, sl, k)| {
                let lin = Poly2::x() + Poly2::lambda().scale(&int(sl)) - Poly2::constant(rat(sx, k));
                acc * lin
            })
        });
        (poly, den).prop_map(|(n, d)| RF::new(n, d).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn self_difference_is_zero(f in arb_rf()) {
            prop_assert!((&f - &f).is_zero());
        }

        #[test]
        fn zero_test_matches_cross_multiplication(f in arb_rf(), g in arb_rf()) {
            let cross = f.numerator() * g.denominator() == g.numerator() * f.denominator();
            prop_assert_eq!((&f - &g).is_zero(), cross);
        }

        #[test]
        fn product_rule(f in arb_rf(), g in arb_rf()) {
            for var in [Var::X, Var::Lambda] {
                let lhs = (&f * &g).partial_derivative(var);
                let rhs = &f.partial_derivative(var) * &g + &f * &g.partial_derivative(var);
                prop_assert!((lhs - rhs).is_zero());
            }
        }

        #[test]
        fn derivative_is_linear(f in arb_rf(), g in arb_rf(), k in -5i64..6) {
            let kk = int(k);
            let lhs = (&f.scale(&kk) + &g).partial_derivative(Var::X);
            let rhs = &f.partial_derivative(Var::X).scale(&kk) + &g.partial_derivative(Var::X);
            prop_assert!((lhs - rhs).is_zero());
        }

        #[test]
        fn mixed_partials_commute(f in arb_rf()) {
            let xl = f.partial_derivative(Var::X).partial_derivative(Var::Lambda);
            let lx = f.partial_derivative(Var::Lambda).partial_derivative(Var::X);
            prop_assert!((xl - lx).is_zero());
        }
    }
}
