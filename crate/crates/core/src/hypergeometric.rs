//! Gauss hypergeometric reduction of Picard-Fuchs operators and the
//! monodromy of the resulting rank-two local systems.
//!
//! Monodromy matrices come from Levelt's companion construction: with
//! `A` the companion matrix of `(X − e^{2πi·gA})(X − e^{2πi·gB})` and `B` the
//! companion matrix of `(X − 1)(X − e^{2πi·gC})`,
//!
//! ```text
//! M∞ = A,   M0 = B⁻¹,   M1 = A⁻¹·B,   M∞·M1·M0 = I.
//! ```
//!
//! `A − B` has rank one, so `M1` is a pseudo-reflection whose special
//! eigenvalue is `det B / det A = e^{2πi(gC − gA − gB)}`.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, Matrix2, Matrix4};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{int, to_f64, Rational};
use crate::picard_fuchs::{PFOperator, PFParameters};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaussError {
    #[error("operator is not of Gauss form: {0}")]
    NotGaussForm(&'static str),
    #[error("operator has c0 = 0, so A·B = 0 and the equation is reducible")]
    Reducible,
    #[error("exponents at infinity are irrational: roots of X² − ({sum})X + ({product}), C = {c}")]
    IrrationalExponents {
        sum: Rational,
        product: Rational,
        c: Rational,
    },
}

/// The integer difference that makes a parameter triple reducible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resonance {
    AInteger,
    BInteger,
    CMinusAInteger,
    CMinusBInteger,
}

impl fmt::Display for Resonance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Resonance::AInteger => "A is an integer",
            Resonance::BInteger => "B is an integer",
            Resonance::CMinusAInteger => "C - A is an integer",
            Resonance::CMinusBInteger => "C - B is an integer",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("reducible hypergeometric parameters: {0}")]
pub struct ReducibleParameters(pub Resonance);

/// Parameters of `z(1−z)y'' + (C − (A+B+1)z)y' − ABy = 0`, with `A ≤ B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussParameters {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl GaussParameters {
    /// Orders `a` and `b` ascending.
    pub fn new(a: Rational, b: Rational, c: Rational) -> Self {
        if a <= b {
            Self { a, b, c }
        } else {
            Self { a: b, b: a, c }
        }
    }

    /// Gauss parameters of the operator attached to `ω`: `A = c`, `B = a+b+c−1`, `C = a+c`.
    pub fn from_pf(p: &PFParameters) -> Self {
        Self::new(
            p.c.clone(),
            &p.a + &p.b + &p.c - Rational::one(),
            &p.a + &p.c,
        )
    }

    pub fn as_f64(&self) -> (f64, f64, f64) {
        (to_f64(&self.a), to_f64(&self.b), to_f64(&self.c))
    }

    /// First failing irreducibility condition, if any.
    pub fn resonance(&self) -> Option<Resonance> {
        let checks = [
            (self.a.clone(), Resonance::AInteger),
            (self.b.clone(), Resonance::BInteger),
            (&self.c - &self.a, Resonance::CMinusAInteger),
            (&self.c - &self.b, Resonance::CMinusBInteger),
        ];
        checks
            .into_iter()
            .find(|(q, _)| q.is_integer())
            .map(|(_, r)| r)
    }
}

/// Reads Gauss parameters off an operator `λ(1−λ)∂² + (C − (A+B+1)λ)∂ − AB`.
pub fn gauss_from_pf(op: &PFOperator) -> Result<GaussParameters, GaussError> {
    if op.c2 != PFOperator::gauss_leading() {
        return Err(GaussError::NotGaussForm("leading coefficient is not λ(1−λ)"));
    }
    if op.c1.degree().unwrap_or(0) > 1 {
        return Err(GaussError::NotGaussForm("first-order coefficient has degree > 1"));
    }
    if !op.c0.is_constant() {
        return Err(GaussError::NotGaussForm("constant coefficient depends on λ"));
    }
    let c = op.c1.coeff(0);
    let sum = -op.c1.coeff(1) - Rational::one();
    let product = -op.c0.coeff(0);
    if product.is_zero() {
        return Err(GaussError::Reducible);
    }
    let disc = &sum * &sum - &product * int(4);
    match rational_sqrt(&disc) {
        Some(root) => {
            let two = int(2);
            Ok(GaussParameters::new(
                (&sum - &root) / &two,
                (&sum + &root) / &two,
                c,
            ))
        }
        None => Err(GaussError::IrrationalExponents { sum, product, c }),
    }
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let exact = |n: &BigInt| {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    Some(Rational::new(exact(q.numer())?, exact(q.denom())?))
}

/// Local exponents at `0`, `1`, `∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiemannScheme {
    pub at_zero: [Rational; 2],
    pub at_one: [Rational; 2],
    pub at_infinity: [Rational; 2],
}

impl RiemannScheme {
    /// Sum of all six exponents; equals one for a Fuchsian equation with three singular points.
    pub fn fuchs_sum(&self) -> Rational {
        self.at_zero
            .iter()
            .chain(&self.at_one)
            .chain(&self.at_infinity)
            .fold(Rational::zero(), |acc, e| acc + e)
    }
}

pub fn riemann_scheme(g: &GaussParameters) -> RiemannScheme {
    RiemannScheme {
        at_zero: [Rational::zero(), Rational::one() - &g.c],
        at_one: [Rational::zero(), &g.c - &g.a - &g.b],
        at_infinity: [g.a.clone(), g.b.clone()],
    }
}

/// `e^{2πi q}`.
pub fn root_of_unity(q: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * q)
}

/// Companion matrix of `(X − r1)(X − r2)` in the layout `[[0, −p0], [1, −p1]]`.
pub fn companion2(r1: Complex64, r2: Complex64) -> Matrix2<Complex64> {
    let p1 = -(r1 + r2);
    let p0 = r1 * r2;
    Matrix2::new(Complex64::zero(), -p0, Complex64::one(), -p1)
}

/// Local monodromy around `0`, `1`, `∞`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonodromyRep {
    pub m0: Matrix2<Complex64>,
    pub m1: Matrix2<Complex64>,
    pub m_inf: Matrix2<Complex64>,
    /// `‖M∞·M1·M0 − I‖` (Frobenius).
    pub relation_residual: f64,
}

impl MonodromyRep {
    pub fn matrices(&self) -> [(SingularPoint, &Matrix2<Complex64>); 3] {
        [
            (SingularPoint::Zero, &self.m0),
            (SingularPoint::One, &self.m1),
            (SingularPoint::Infinity, &self.m_inf),
        ]
    }
}

pub fn levelt_monodromy(g: &GaussParameters) -> Result<MonodromyRep, ReducibleParameters> {
    if let Some(r) = g.resonance() {
        return Err(ReducibleParameters(r));
    }
    let (ga, gb, gc) = g.as_f64();
    let a = companion2(root_of_unity(ga), root_of_unity(gb));
    let b = companion2(Complex64::one(), root_of_unity(gc));
    let a_inv = a.try_inverse().expect("roots of unity give an invertible companion");
    let b_inv = b.try_inverse().expect("roots of unity give an invertible companion");
    let m1 = a_inv * b;
    let relation_residual = (a * m1 * b_inv - Matrix2::identity()).norm();
    Ok(MonodromyRep {
        m0: b_inv,
        m1,
        m_inf: a,
        relation_residual,
    })
}

/// Distance between the characteristic polynomial of `m` and `(X − e1)(X − e2)`,
/// as `max(|tr m − e1 − e2|, |det m − e1·e2|)`.
///
/// Conditioned well even when `m` is a nontrivial Jordan block, unlike a
/// direct comparison of computed eigenvalues.
pub fn spectrum_residual2(m: &Matrix2<Complex64>, e1: Complex64, e2: Complex64) -> f64 {
    let tr = (m.trace() - e1 - e2).norm();
    let det = (m.determinant() - e1 * e2).norm();
    tr.max(det)
}

/// Checks the Levelt postcondition: `M1` has eigenvalues `{1, e^{2πi(gC−gA−gB)}}`.
pub fn m1_spectrum_residual(rep: &MonodromyRep, g: &GaussParameters) -> f64 {
    let (ga, gb, gc) = g.as_f64();
    spectrum_residual2(&rep.m1, Complex64::one(), root_of_unity(gc - ga - gb))
}

/// Eigenvalues of a 2×2 matrix from its characteristic polynomial.
pub fn eigenvalues2(m: &Matrix2<Complex64>) -> [Complex64; 2] {
    let tr = m.trace();
    let det = m.determinant();
    let disc = (tr * tr - 4.0 * det).sqrt();
    [(tr - disc) / 2.0, (tr + disc) / 2.0]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SingularPoint {
    Zero,
    One,
    Infinity,
}

impl SingularPoint {
    pub fn label(&self) -> &'static str {
        match self {
            SingularPoint::Zero => "0",
            SingularPoint::One => "1",
            SingularPoint::Infinity => "infinity",
        }
    }
}

/// Conjugation-invariant type of a local monodromy matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnipotencyClass {
    Identity,
    /// `(T−I) ≠ 0`, `(T−I)² = 0`.
    UnipotentBlock2,
    /// Unipotent with `(T−I)^index = 0` for some `index ≥ 3`.
    Unipotent { index: usize },
    /// `T^k = I` for the given minimal `k ≤ 24`, `T ≠ I`.
    FiniteOrder(u32),
    SemisimpleNonUnipotent,
    Other,
}

pub const MAX_FINITE_ORDER: u32 = 24;

/// Default tolerance for [`unipotency_class`].
pub const CLASS_TOL: f64 = 1e-8;

pub fn to_dmatrix<const N: usize>(m: &nalgebra::SMatrix<Complex64, N, N>) -> DMatrix<Complex64> {
    DMatrix::from_fn(N, N, |i, j| m[(i, j)])
}

/// Smallest `k ≤ n` with `‖N^k‖ ≤ tol·‖N‖^k`, where `N = T − I`.
///
/// Returns `Some(1)` when `N` itself is negligible relative to `T`.
pub fn nilpotency_index(t: &DMatrix<Complex64>, tol: f64) -> Option<usize> {
    let n = t.nrows();
    let id = DMatrix::<Complex64>::identity(n, n);
    let nil = t - &id;
    let norm = nil.norm();
    if norm <= tol * t.norm().max(1.0) {
        return Some(1);
    }
    let mut power = nil.clone();
    for k in 2..=n {
        power = &power * &nil;
        if power.norm() <= tol * norm.powi(k as i32) {
            return Some(k);
        }
    }
    None
}

/// Minimal `k ≤ 24` with `T^k ≈ I`.
pub fn finite_order(t: &DMatrix<Complex64>, tol: f64) -> Option<u32> {
    let n = t.nrows();
    let id = DMatrix::<Complex64>::identity(n, n);
    let mut power = t.clone();
    for k in 1..=MAX_FINITE_ORDER {
        if (&power - &id).norm() <= tol * power.norm().max(1.0) {
            return Some(k);
        }
        power = &power * t;
    }
    None
}

/// Eigenvalues from the complex Schur form.
pub fn eigenvalues(t: &DMatrix<Complex64>) -> Vec<Complex64> {
    let (_, tri) = nalgebra::Schur::new(t.clone()).unpack();
    tri.diagonal().iter().copied().collect()
}

// The minimal polynomial test: Π (T − μ I) over clustered eigenvalues μ
// vanishes iff T is diagonalizable. Clusters merge eigenvalues closer than
// √tol because a defective block splits its eigenvalue by about √ε.
fn is_semisimple(t: &DMatrix<Complex64>, tol: f64) -> bool {
    let n = t.nrows();
    let merge = tol.sqrt() * t.norm().max(1.0);
    let mut clusters: Vec<Complex64> = Vec::new();
    for ev in eigenvalues(t) {
        if !clusters.iter().any(|c| (c - ev).norm() <= merge) {
            clusters.push(ev);
        }
    }
    let id = DMatrix::<Complex64>::identity(n, n);
    let mut prod = id.clone();
    let mut scale = 1.0;
    for mu in clusters {
        let factor = t - &id * mu;
        scale *= factor.norm().max(1.0);
        prod = &prod * factor;
    }
    prod.norm() <= tol * scale
}

/// Classifies `T` by unipotency, finite order and semisimplicity, in that order.
///
/// Unipotency is decided by nilpotency of `T − I` under scaled norms, which
/// is the same as every eigenvalue being one.
pub fn unipotency_class(t: &DMatrix<Complex64>, tol: f64) -> UnipotencyClass {
    match nilpotency_index(t, tol) {
        Some(1) => return UnipotencyClass::Identity,
        Some(2) => return UnipotencyClass::UnipotentBlock2,
        Some(index) => return UnipotencyClass::Unipotent { index },
        None => {}
    }
    if let Some(k) = finite_order(t, tol) {
        return UnipotencyClass::FiniteOrder(k);
    }
    if is_semisimple(t, tol) {
        UnipotencyClass::SemisimpleNonUnipotent
    } else {
        UnipotencyClass::Other
    }
}

/// Block-diagonal direct sum of two rank-two representations.
#[derive(Clone, Debug, PartialEq)]
pub struct Rep4 {
    pub t0: Matrix4<Complex64>,
    pub t1: Matrix4<Complex64>,
    pub t_inf: Matrix4<Complex64>,
}

impl Rep4 {
    pub fn matrices(&self) -> [(SingularPoint, &Matrix4<Complex64>); 3] {
        [
            (SingularPoint::Zero, &self.t0),
            (SingularPoint::One, &self.t1),
            (SingularPoint::Infinity, &self.t_inf),
        ]
    }

    /// Maximum of `‖Tᵗ Ω T − Ω‖` over the three generators, `Ω = diag(J, J)`.
    pub fn symplectic_residual(&self) -> f64 {
        let omega = split_symplectic_form();
        self.matrices()
            .iter()
            .map(|(_, t)| (t.transpose() * omega * *t - omega).norm())
            .fold(0.0, f64::max)
    }
}

pub fn block_diag(
    a: &Matrix2<Complex64>,
    b: &Matrix2<Complex64>,
) -> Matrix4<Complex64> {
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(b);
    m
}

/// `diag(J, J)` with `J = [[0, 1], [−1, 0]]`.
pub fn split_symplectic_form() -> Matrix4<Complex64> {
    let j = Matrix2::new(
        Complex64::zero(),
        Complex64::one(),
        -Complex64::one(),
        Complex64::zero(),
    );
    block_diag(&j, &j)
}

pub fn h3_representation(rep1: &MonodromyRep, rep2: &MonodromyRep) -> Rep4 {
    Rep4 {
        t0: block_diag(&rep1.m0, &rep2.m0),
        t1: block_diag(&rep1.m1, &rep2.m1),
        t_inf: block_diag(&rep1.m_inf, &rep2.m_inf),
    }
}

/// Maximal-unipotent-monodromy verdict at one point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MumVerdict {
    pub point: SingularPoint,
    pub unipotent: bool,
    /// Smallest `k` with `(T−I)^k = 0`; zero when `T` is not unipotent.
    pub nilpotency_order: usize,
    /// Unipotent with a single Jordan block of full size.
    pub maximal: bool,
}

pub fn mum_verdict(point: SingularPoint, t: &DMatrix<Complex64>, tol: f64) -> MumVerdict {
    let n = t.nrows();
    match nilpotency_index(t, tol) {
        Some(k) => MumVerdict {
            point,
            unipotent: true,
            nilpotency_order: k,
            maximal: k == n && n > 1,
        },
        None => MumVerdict {
            point,
            unipotent: false,
            nilpotency_order: 0,
            maximal: false,
        },
    }
}

pub fn maximal_unipotent_test(rep: &Rep4) -> [MumVerdict; 3] {
    rep.matrices()
        .map(|(p, t)| mum_verdict(p, &to_dmatrix(t), CLASS_TOL))
}
