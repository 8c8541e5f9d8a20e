use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::Rational;

/// Variable selector for [`Poly2`] and [`super::RationalFunction2`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Lambda,
}

/// Sparse polynomial in `x` and `λ` with rational coefficients.
///
/// Keys are `(deg_x, deg_λ)`. Zero coefficients are never stored, so the
/// derived equality is mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    pub fn lambda() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    /// `c · x^dx · λ^dl`.
    pub fn monomial(c: Rational, dx: u32, dl: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((dx, dl), c);
        }
        Self { terms }
    }

    /// Builds from `(deg_x, deg_λ, coeff)` triples, merging duplicates.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, Rational)>,
    {
        let mut p = Self::zero();
        for (dx, dl, c) in terms {
            p.add_term((dx, dl), c);
        }
        p
    }

    fn add_term(&mut self, key: (u32, u32), c: Rational) {
        if c.is_zero() {
            return;
        }
        let remove = match self.terms.get_mut(&key) {
            Some(existing) => {
                *existing += c;
                existing.is_zero()
            }
            None => {
                self.terms.insert(key, c);
                false
            }
        };
        if remove {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterates `((deg_x, deg_λ), coeff)` in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, dx: u32, dl: u32) -> Rational {
        self.terms.get(&(dx, dl)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| a + b).max()
    }

    pub fn degree_in(&self, var: Var) -> Option<u32> {
        self.terms
            .keys()
            .map(|&(a, b)| match var {
                Var::X => a,
                Var::Lambda => b,
            })
            .max()
    }

    /// Returns the constant value if the polynomial has no variable terms.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, var: Var) -> Self {
        let mut out = Self::zero();
        for (&(dx, dl), c) in &self.terms {
            match var {
                Var::X if dx > 0 => out.add_term((dx - 1, dl), c * Rational::from_integer(dx.into())),
                Var::Lambda if dl > 0 => {
                    out.add_term((dx, dl - 1), c * Rational::from_integer(dl.into()))
                }
                _ => {}
            }
        }
        out
    }

    pub fn eval(&self, x: &Rational, lambda: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&(dx, dl), c) in &self.terms {
            acc += c * pow_rat(x, dx) * pow_rat(lambda, dl);
        }
        acc
    }
}

fn pow_rat(base: &Rational, e: u32) -> Rational {
    num_traits::pow(base.clone(), e as usize)
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(dx, dl), c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            if dx > 0 {
                write!(f, "*x^{dx}")?;
            }
            if dl > 0 {
                write!(f, "*l^{dl}")?;
            }
        }
        Ok(())
    }
}

impl From<Rational> for Poly2 {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl<'a> Add<&'a Poly2> for &'a Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &'a Poly2) -> Poly2 {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(*k, v.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly2> for &'a Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &'a Poly2) -> Poly2 {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(*k, -v.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Poly2> for &'a Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &'a Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(ax, al), ac) in &self.terms {
            for (&(bx, bl), bc) in &rhs.terms {
                out.add_term((ax + bx, al + bl), ac * bc);
            }
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(k, v)| (*k, -v.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly2> for Poly2 {
            type Output = Poly2;
            fn $m(self, rhs: Poly2) -> Poly2 {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Poly2> for Poly2 {
            type Output = Poly2;
            fn $m(self, rhs: &'a Poly2) -> Poly2 {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        -&self
    }
}
