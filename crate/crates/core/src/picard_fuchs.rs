//! Differential forms on the cyclic covers `y^n = x^eX (x−1)^e1 (x−λ)^eL` and
//! their second-order Picard-Fuchs operators in `λ`.
//!
//! A form `ω(α,β,γ;l) = x^α (x−1)^β (x−λ)^γ / y^l dx` is written as
//! `x^{−a} (x−1)^{−b} (x−λ)^{−c} dx`. The operator
//!
//! ```text
//! L = λ(1−λ) ∂²_λ + (a + c − (a + b + 2c) λ) ∂_λ − c (a + b + c − 1)
//! ```
//!
//! sends `ω` to `c · dh` with `h = x^{1−a} (x−1)^{1−b} (x−λ)^{−1−c}`.
//! [`verify_certificate`] checks that identity exactly after dividing both
//! sides by `F = x^{−a}(x−1)^{−b}(x−λ)^{−c}`.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{int, Rational, RationalFunction2, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("cover degree must be at least 2, got {0}")]
    Degree(i64),
    #[error("cover exponent {name} = {value} must lie in 1..{n}")]
    Exponent { name: &'static str, value: i64, n: i64 },
    #[error("form index l = {l} must lie in 1..{n}")]
    FormIndex { l: i64, n: i64 },
}

/// The curve `y^n = x^eX (x−1)^e1 (x−λ)^eL`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CoverSignature {
    n: i64,
    e_x: i64,
    e_1: i64,
    e_lambda: i64,
}

impl CoverSignature {
    pub fn new(n: i64, e_x: i64, e_1: i64, e_lambda: i64) -> Result<Self, CoverError> {
        if n < 2 {
            return Err(CoverError::Degree(n));
        }
        for (name, value) in [("eX", e_x), ("e1", e_1), ("eL", e_lambda)] {
            if !(1..n).contains(&value) {
                return Err(CoverError::Exponent { name, value, n });
            }
        }
        Ok(Self { n, e_x, e_1, e_lambda })
    }

    /// The genus-two curve `y^3 = x (x−1) (x−λ)^2`.
    pub fn genus_two() -> Self {
        Self { n: 3, e_x: 1, e_1: 1, e_lambda: 2 }
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn exponents(&self) -> (i64, i64, i64) {
        (self.e_x, self.e_1, self.e_lambda)
    }
}

/// Exponents `(α, β, γ; l)` of `ω(α,β,γ;l)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormExponents {
    pub alpha: i64,
    pub beta: i64,
    pub gamma: i64,
    pub l: i64,
}

impl FormExponents {
    pub fn new(alpha: i64, beta: i64, gamma: i64, l: i64) -> Self {
        Self { alpha, beta, gamma, l }
    }

    /// Checks `1 ≤ l < n` against a cover.
    pub fn validate(&self, cover: &CoverSignature) -> Result<(), CoverError> {
        if !(1..cover.n).contains(&self.l) {
            return Err(CoverError::FormIndex { l: self.l, n: cover.n });
        }
        Ok(())
    }
}

/// `(a, b, c)` with `ω = x^{−a}(x−1)^{−b}(x−λ)^{−c} dx`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PFParameters {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl PFParameters {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Self {
        Self { a, b, c }
    }

    /// Local exponents exceed −1 at `0, 1, λ` and at `∞`.
    pub fn is_holomorphic(&self) -> bool {
        let zero = Rational::zero();
        let one = Rational::one();
        let open_unit = |q: &Rational| *q > zero && *q < one;
        open_unit(&self.a)
            && open_unit(&self.b)
            && open_unit(&self.c)
            && &self.a + &self.b + &self.c > one
    }
}

/// `c2 ∂²_λ + c1 ∂_λ + c0`, coefficients as polynomials in `λ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PFOperator {
    pub c2: UniPoly,
    pub c1: UniPoly,
    pub c0: UniPoly,
}

impl PFOperator {
    /// `λ − λ²`.
    pub fn gauss_leading() -> UniPoly {
        UniPoly::from_ints(&[0, 1, -1])
    }

    /// The same operator with `k` added to the constant coefficient.
    pub fn shifted(&self, k: &Rational) -> Self {
        Self {
            c2: self.c2.clone(),
            c1: self.c1.clone(),
            c0: &self.c0 + &UniPoly::constant(k.clone()),
        }
    }
}

/// `a = −α + l·eX/n`, `b = −β + l·e1/n`, `c = −γ + l·eL/n`.
pub fn pf_parameters(cover: &CoverSignature, form: &FormExponents) -> PFParameters {
    let n = cover.n;
    let part = |shift: i64, e: i64| int(-shift) + Rational::new((form.l * e).into(), n.into());
    PFParameters {
        a: part(form.alpha, cover.e_x),
        b: part(form.beta, cover.e_1),
        c: part(form.gamma, cover.e_lambda),
    }
}

/// Holomorphic eigenforms, sorted by `(l, α, β, γ)`.
///
/// Scans `0 ≤ α, β ≤ n`, `|γ| ≤ n`, `1 ≤ l < n` and keeps the forms whose
/// parameters satisfy [`PFParameters::is_holomorphic`].
pub fn holomorphic_forms(cover: &CoverSignature) -> Vec<FormExponents> {
    let n = cover.n;
    let mut out = Vec::new();
    for l in 1..n {
        for alpha in 0..=n {
            for beta in 0..=n {
                for gamma in -n..=n {
                    let form = FormExponents::new(alpha, beta, gamma, l);
                    if pf_parameters(cover, &form).is_holomorphic() {
                        out.push(form);
                    }
                }
            }
        }
    }
    out
}

pub fn pf_operator(p: &PFParameters) -> PFOperator {
    let PFParameters { a, b, c } = p;
    let one = Rational::one();
    let c1 = UniPoly::new(vec![a + c, -(a + b + c + c)]);
    let c0 = UniPoly::constant(-(c * (a + b + c - one)));
    PFOperator {
        c2: PFOperator::gauss_leading(),
        c1,
        c0,
    }
}

/// Outcome of the exact `L(ω) = c·dh` check.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub holds: bool,
    pub residual: RationalFunction2,
}

/// Verifies `L(ω) = c·dh` for the operator built from `p`.
pub fn verify_certificate(p: &PFParameters) -> Certificate {
    verify_operator_certificate(&pf_operator(p), p)
}

/// Verifies `op(ω) = c·dh` for an arbitrary operator, with `ω` and `h` built from `p`.
///
/// Both sides are divided by `F`:
///
/// ```text
/// L(F)/F   = c2(λ)·c(c+1)/(x−λ)² + c1(λ)·c/(x−λ) + c0
/// c·h'/F   = c · x(x−1)/(x−λ) · [(1−a)/x + (1−b)/(x−1) − (1+c)/(x−λ)]
/// ```
pub fn verify_operator_certificate(op: &PFOperator, p: &PFParameters) -> Certificate {
    let (lhs, rhs) = certificate_sides(op, p);
    let residual = &lhs - &rhs;
    Certificate {
        holds: residual.is_zero(),
        residual,
    }
}

/// The two sides `(L(F)/F, c·h'/F)` of the certificate identity.
pub fn certificate_sides(op: &PFOperator, p: &PFParameters) -> (RationalFunction2, RationalFunction2) {
    type RF = RationalFunction2;
    let PFParameters { a, b, c } = p;
    let one = Rational::one();
    let x = RF::x();
    let xm1 = &x - &RF::one();
    let xml = &x - &RF::lambda();
    let inv = |f: &RF| f.recip().expect("linear forms are nonzero");

    let lhs = {
        let d2 = inv(&xml.pow(2)).scale(&(c * (c + &one)));
        let d1 = inv(&xml).scale(c);
        &(&lambda_poly(&op.c2) * &d2) + &(&(&lambda_poly(&op.c1) * &d1) + &lambda_poly(&op.c0))
    };

    let rhs = {
        let log_derivative = &(&inv(&x).scale(&(&one - a)) + &inv(&xm1).scale(&(&one - b)))
            - &inv(&xml).scale(&(&one + c));
        let prefactor = &(&x * &xm1) * &inv(&xml);
        (&prefactor * &log_derivative).scale(c)
    };

    (lhs, rhs)
}

fn lambda_poly(p: &UniPoly) -> RationalFunction2 {
    let mut acc = RationalFunction2::zero();
    for (i, c) in p.coeffs().iter().enumerate() {
        let term = crate::algebra::Poly2::monomial(c.clone(), 0, i as u32);
        acc = &acc + &RationalFunction2::from_poly(term);
    }
    acc
}
