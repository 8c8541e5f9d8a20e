//! Numerical periods: double-exponential quadrature on `[0, 1]`, the Gauss
//! series, and residual checks against the Picard-Fuchs operators.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{to_f64, Rational};
use crate::hypergeometric::GaussParameters;
use crate::picard_fuchs::{PFOperator, PFParameters};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PeriodError {
    #[error("λ = {0} lies on the cut [0, 1]")]
    BranchCollision(Complex64),
    #[error("integrand is not integrable at the endpoints: {0}")]
    NotIntegrable(String),
    #[error("quadrature did not reach tolerance: best estimate {best} with error {error_estimate:e}")]
    Accuracy { best: Complex64, error_estimate: f64 },
    #[error("z = {0} is outside both series regions |z| < 0.95 and |z/(z−1)| < 0.95")]
    OutOfDomain(Complex64),
    #[error("C = {0} is a non-positive integer")]
    Pole(Rational),
    #[error("series did not converge within {0} terms")]
    SeriesDivergence(usize),
    #[error("invalid quadrature spec: max_level must be at least 3")]
    InvalidSpec,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub max_level: u32,
    pub tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            max_level: 10,
            tol: 1e-12,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    /// `|I_k − I_{k−1}|` at the final level.
    pub error_estimate: f64,
    pub level: u32,
}

// Abscissae |t| ≤ T_MAX keep x ≥ 1e-275, well inside the normal range.
const T_MAX: f64 = 6.0;
/// First level at which convergence may be declared.
const MIN_LEVEL: u32 = 3;
pub const SERIES_DOMAIN: f64 = 0.95;

/// Node `(x, 1 − x, dx/dt)` of `x = (1 + tanh(π/2·sinh t)) / 2`, with both
/// endpoint distances computed without cancellation.
fn node(t: f64) -> (f64, f64, f64) {
    let u = 0.5 * PI * t.sinh();
    let e = (-2.0 * u.abs()).exp();
    let (near, far) = (e / (1.0 + e), 1.0 / (1.0 + e));
    let (x, y) = if u >= 0.0 { (far, near) } else { (near, far) };
    let w = PI * t.cosh() * x * y;
    (x, y, w)
}

/// Running tanh-sinh sums; each call to `refine` halves the step.
struct TanhSinh<F> {
    f: F,
    sum: Complex64,
    h: f64,
    level: u32,
}

impl<F: Fn(f64, f64) -> Complex64> TanhSinh<F> {
    fn new(f: F) -> Self {
        let mut s = Self {
            f,
            sum: Complex64::zero(),
            h: 1.0,
            level: 0,
        };
        let k_max = T_MAX as i64;
        for k in -k_max..=k_max {
            s.sum += s.eval(k as f64);
        }
        s
    }

    fn eval(&self, t: f64) -> Complex64 {
        let (x, y, w) = node(t);
        let v = (self.f)(x, y) * w;
        if v.re.is_finite() && v.im.is_finite() {
            v
        } else {
            Complex64::zero()
        }
    }

    fn estimate(&self) -> Complex64 {
        self.sum * self.h
    }

    fn refine(&mut self) {
        self.h *= 0.5;
        self.level += 1;
        let h = self.h;
        let k_max = (T_MAX / h) as i64;
        let mut k = -k_max + if k_max % 2 == 0 { 1 } else { 0 };
        let mut add = Complex64::zero();
        while k <= k_max {
            add += self.eval(k as f64 * h);
            k += 2;
        }
        self.sum += add;
    }
}

/// Integrates `f` over `[0, 1]`; `f` receives `(x, 1 − x)`.
///
/// Stops at the first level `k ≥ 3` where `|I_k − I_{k−1}| ≤ tol·|I_k|`.
pub fn tanh_sinh<F>(f: F, spec: &QuadratureSpec) -> Result<Quadrature, PeriodError>
where
    F: Fn(f64, f64) -> Complex64,
{
    if spec.max_level < MIN_LEVEL {
        return Err(PeriodError::InvalidSpec);
    }
    let mut ts = TanhSinh::new(f);
    let mut prev = ts.estimate();
    let mut err = f64::INFINITY;
    while ts.level < spec.max_level {
        ts.refine();
        let cur = ts.estimate();
        err = (cur - prev).norm();
        prev = cur;
        if ts.level >= MIN_LEVEL && err <= spec.tol * cur.norm().max(f64::MIN_POSITIVE) {
            return Ok(Quadrature {
                value: cur,
                error_estimate: err,
                level: ts.level,
            });
        }
    }
    Err(PeriodError::Accuracy {
        best: prev,
        error_estimate: err,
    })
}

/// Estimates `I_0, …, I_max_level` without a stopping rule.
pub fn tanh_sinh_levels<F>(f: F, max_level: u32) -> Vec<Complex64>
where
    F: Fn(f64, f64) -> Complex64,
{
    let mut ts = TanhSinh::new(f);
    let mut out = vec![ts.estimate()];
    while ts.level < max_level {
        ts.refine();
        out.push(ts.estimate());
    }
    out
}

/// A period `∫₀¹ x^{−a}(1−x)^{−b}(λ−x)^{−c} dx` at one value of `λ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodValue {
    pub lambda: Complex64,
    pub value: Complex64,
    pub error_estimate: f64,
}

/// True for real `λ ∈ [0, 1]`.
pub fn on_cut(lambda: Complex64) -> bool {
    lambda.im == 0.0 && (0.0..=1.0).contains(&lambda.re)
}

/// Segment period of `x^{−a}(x−1)^{−b}(x−λ)^{−c} dx` over `[0, 1]`, using the
/// principal branch of `(λ−x)^{−c}` and `(1−x)^{−b}`.
///
/// `Im λ` is constant along the segment, so the principal branch is
/// continuous in `x` for every `λ` off `[0, 1]`. A negative zero imaginary
/// part is normalized to `+0` so negative real `λ` sits on the upper edge.
pub fn period_integral(
    p: &PFParameters,
    lambda: Complex64,
    spec: &QuadratureSpec,
) -> Result<PeriodValue, PeriodError> {
    let zero = Rational::zero();
    let one = Rational::one();
    for (name, q) in [("a", &p.a), ("b", &p.b)] {
        if *q >= one {
            return Err(PeriodError::NotIntegrable(format!("{name} = {q} must be < 1")));
        }
    }
    if on_cut(lambda) {
        return Err(PeriodError::BranchCollision(lambda));
    }
    let lambda = Complex64::new(lambda.re, if lambda.im == 0.0 { 0.0 } else { lambda.im });
    let (a, b, c) = (to_f64(&p.a), to_f64(&p.b), to_f64(&p.c));
    let exact_c_zero = p.c == zero;
    let q = tanh_sinh(
        |x, y| {
            let base = x.powf(-a) * y.powf(-b);
            if exact_c_zero {
                Complex64::new(base, 0.0)
            } else {
                (lambda - x).powf(-c) * base
            }
        },
        spec,
    )?;
    Ok(PeriodValue {
        lambda,
        value: q.value,
        error_estimate: q.error_estimate,
    })
}

/// Which Gauss series to sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesRoute {
    /// The smaller of `|z|` and `|z/(z−1)|`.
    Auto,
    Direct,
    /// `(1−z)^{−A} · 2F1(A, C−B; C; z/(z−1))`.
    Pfaff,
}

const MAX_TERMS: usize = 100_000;

/// `2F1(A, B; C; z)`, summed until a rigorous tail bound drops below `tol·max(1, |sum|)`.
pub fn series_2f1(g: &GaussParameters, z: Complex64, tol: f64) -> Result<Complex64, PeriodError> {
    series_2f1_with(g, z, tol, SeriesRoute::Auto)
}

pub fn series_2f1_with(
    g: &GaussParameters,
    z: Complex64,
    tol: f64,
    route: SeriesRoute,
) -> Result<Complex64, PeriodError> {
    if g.c.is_integer() && !g.c.is_positive() {
        return Err(PeriodError::Pole(g.c.clone()));
    }
    let (a, b, c) = g.as_f64();
    let w = z / (z - 1.0);
    let direct_ok = z.norm() < SERIES_DOMAIN;
    let pfaff_ok = w.norm() < SERIES_DOMAIN;
    let use_pfaff = match route {
        SeriesRoute::Direct if direct_ok => false,
        SeriesRoute::Pfaff if pfaff_ok => true,
        SeriesRoute::Auto if direct_ok || pfaff_ok => !direct_ok || w.norm() < z.norm(),
        _ => return Err(PeriodError::OutOfDomain(z)),
    };
    if use_pfaff {
        let inner = gauss_sum(a, c - b, c, w, tol)?;
        Ok((Complex64::one() - z).powf(-a) * inner)
    } else {
        gauss_sum(a, b, c, z, tol)
    }
}

// Tail bound: for k ≥ m > |C|, the term ratio is at most
// ρ_m = |z|(m + A')(m + B') / ((m − |C|)(m + 1)) with A' = max(|A|, 1),
// B' = max(|B|, 1), and ρ_m is non-increasing in m.
fn gauss_sum(a: f64, b: f64, c: f64, z: Complex64, tol: f64) -> Result<Complex64, PeriodError> {
    let zn = z.norm();
    let (ap, bp, cabs) = (a.abs().max(1.0), b.abs().max(1.0), c.abs());
    let mut sum = Complex64::one();
    let mut term = Complex64::one();
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= z * ((a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)));
        sum += term;
        if term.is_zero() {
            return Ok(sum);
        }
        let m = nf + 1.0;
        if m > cabs {
            let rho = zn * (m + ap) * (m + bp) / ((m - cabs) * (m + 1.0));
            if rho < 1.0 {
                let tail = term.norm() * rho / (1.0 - rho);
                if tail <= tol * sum.norm().max(1.0) {
                    return Ok(sum);
                }
            }
        }
    }
    Err(PeriodError::SeriesDivergence(MAX_TERMS))
}

/// `Γ`-normalized Euler integral versus the series:
/// `|∫₀¹ t^{B−1}(1−t)^{C−B−1}(1−λt)^{−A} dt − Β(B, C−B)·2F1(A,B;C;λ)| / |Β·2F1|`.
pub fn euler_integral_check(
    g: &GaussParameters,
    lambda: Complex64,
    spec: &QuadratureSpec,
) -> Result<f64, PeriodError> {
    if !(g.c > g.b && g.b.is_positive()) {
        return Err(PeriodError::NotIntegrable(format!(
            "need C > B > 0, got B = {}, C = {}",
            g.b, g.c
        )));
    }
    let (a, b, c) = g.as_f64();
    let series = series_2f1(g, lambda, 1e-15)?;
    let q = tanh_sinh(
        |t, s| (Complex64::one() - lambda * t).powf(-a) * (t.powf(b - 1.0) * s.powf(c - b - 1.0)),
        spec,
    )?;
    let reference = series * statrs::function::beta::beta(b, c - b);
    Ok((q.value - reference).norm() / reference.norm())
}

/// Step edges must stay inside `P`'s domain: `λ0 ± h/2, ±h, ±2h` are sampled.
///
/// Returns `|c2(λ0)P'' + c1(λ0)P' + c0 P| / max(|P|, 1e-300)` with the
/// derivatives from fourth-order central differences at steps `h` and `h/2`
/// combined by one Richardson step.
pub fn ode_residual<F, E>(op: &PFOperator, p: F, lambda0: Complex64, h: f64) -> Result<f64, E>
where
    F: Fn(Complex64) -> Result<Complex64, E>,
{
    let at = |k: f64| p(lambda0 + Complex64::new(k * h, 0.0));
    let p0 = at(0.0)?;
    let (ph, mh) = (at(0.5)?, at(-0.5)?);
    let (p1, m1) = (at(1.0)?, at(-1.0)?);
    let (p2, m2) = (at(2.0)?, at(-2.0)?);

    let d1 = |f2: Complex64, f1: Complex64, g1: Complex64, g2: Complex64, step: f64| {
        (-f2 + f1 * 8.0 - g1 * 8.0 + g2) / (12.0 * step)
    };
    let d2 = |f2: Complex64, f1: Complex64, g1: Complex64, g2: Complex64, step: f64| {
        (-f2 + f1 * 16.0 - p0 * 30.0 + g1 * 16.0 - g2) / (12.0 * step * step)
    };
    let richardson = |coarse: Complex64, fine: Complex64| (fine * 16.0 - coarse) / 15.0;

    let first = richardson(d1(p2, p1, m1, m2, h), d1(p1, ph, mh, m1, 0.5 * h));
    let second = richardson(d2(p2, p1, m1, m2, h), d2(p1, ph, mh, m1, 0.5 * h));

    let eval = |poly: &crate::algebra::UniPoly| {
        poly.coeffs()
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, q| acc * lambda0 + to_f64(q))
    };
    let value = eval(&op.c2) * second + eval(&op.c1) * first + eval(&op.c0) * p0;
    Ok(value.norm() / p0.norm().max(1e-300))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};
    use crate::picard_fuchs::pf_operator;
    use std::convert::Infallible;

    fn family_gauss() -> GaussParameters {
        GaussParameters::new(rat(1, 3), rat(2, 3), int(1))
    }

    fn family_pf() -> PFParameters {
        PFParameters::new(rat(1, 3), rat(1, 3), rat(2, 3))
    }

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn beta_half_half_is_pi() {
        let p = PFParameters::new(rat(1, 2), rat(1, 2), int(0));
        let v = period_integral(&p, re(2.0), &QuadratureSpec::default()).unwrap();
        assert!((v.value - re(PI)).norm() < 1e-10);
    }

    #[test]
    fn smooth_integral() {
        let q = tanh_sinh(|x, _| re(x * x), &QuadratureSpec::default()).unwrap();
        assert!((q.value.re - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn positive_on_the_real_axis_right_of_one() {
        let v = period_integral(&family_pf(), re(3.0), &QuadratureSpec::default()).unwrap();
        assert!(v.value.re > 0.0);
        assert!(v.value.im.abs() < 1e-14);
    }

    #[test]
    fn errors() {
        let spec = QuadratureSpec::default();
        assert!(matches!(
            period_integral(&family_pf(), re(0.5), &spec),
            Err(PeriodError::BranchCollision(_))
        ));
        assert!(matches!(
            period_integral(&PFParameters::new(int(1), rat(1, 3), rat(1, 3)), re(2.0), &spec),
            Err(PeriodError::NotIntegrable(_))
        ));
        let bad = QuadratureSpec { max_level: 2, tol: 1e-12 };
        assert_eq!(period_integral(&family_pf(), re(2.0), &bad), Err(PeriodError::InvalidSpec));
        assert!(matches!(
            series_2f1(&family_gauss(), re(0.97), 1e-14),
            Err(PeriodError::OutOfDomain(_))
        ));
        let pole = GaussParameters::new(rat(1, 3), rat(1, 2), int(-2));
        assert!(matches!(series_2f1(&pole, re(0.1), 1e-14), Err(PeriodError::Pole(_))));
    }

    #[test]
    fn accuracy_error_reports_best_estimate() {
        let spec = QuadratureSpec { max_level: 3, tol: 1e-30 };
        match tanh_sinh(|x, _| re(x.sqrt()), &spec) {
            Err(PeriodError::Accuracy { best, .. }) => assert!((best.re - 2.0 / 3.0).abs() < 1e-6),
            other => panic!("expected accuracy failure, got {other:?}"),
        }
    }

    #[test]
    fn series_examples() {
        let g = family_gauss();
        assert_eq!(series_2f1(&g, re(0.0), 1e-15).unwrap(), re(1.0));
        let z = re(1e-4);
        let v = series_2f1(&g, z, 1e-15).unwrap();
        // 1 + (2/9) z + O(z²), the z² coefficient being (1/3·4/3)(2/3·5/3)/4 = 10/81
        assert!((v.re - (1.0 + 2.0 / 9.0 * 1e-4)).abs() < 2e-9);
        assert!((v.re - (1.0 + 2.0 / 9.0 * 1e-4 + 10.0 / 81.0 * 1e-8)).abs() < 1e-12);
    }

    #[test]
    fn pfaff_matches_direct() {
        let g = family_gauss();
        for x in [-0.31, -0.35, -0.4, -0.45, -0.49] {
            let d = series_2f1_with(&g, re(x), 1e-15, SeriesRoute::Direct).unwrap();
            let p = series_2f1_with(&g, re(x), 1e-15, SeriesRoute::Pfaff).unwrap();
            assert!((d - p).norm() < 1e-10, "{x}: {d} vs {p}");
        }
        let g2 = GaussParameters::new(rat(1, 5), rat(3, 4), rat(7, 6));
        let z = Complex64::new(-0.2, 0.3);
        let d = series_2f1_with(&g2, z, 1e-15, SeriesRoute::Direct).unwrap();
        let p = series_2f1_with(&g2, z, 1e-15, SeriesRoute::Pfaff).unwrap();
        assert!((d - p).norm() < 1e-12);
    }

    #[test]
    fn euler_integral_agrees_with_series() {
        let spec = QuadratureSpec::default();
        for x in [0.0, 0.1, 0.25, 0.5, -0.3] {
            let d = euler_integral_check(&family_gauss(), re(x), &spec).unwrap();
            assert!(d <= 1e-9, "λ = {x}: {d:e}");
        }
        let d = euler_integral_check(&family_gauss(), Complex64::new(0.2, 0.4), &spec).unwrap();
        assert!(d <= 1e-9);
    }

    #[test]
    fn constant_is_not_a_solution() {
        let op = pf_operator(&family_pf());
        let r = ode_residual(&op, |_| Ok::<_, Infallible>(re(1.0)), re(0.4), 1e-3).unwrap();
        assert!((r - 2.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn series_solves_its_operator() {
        let op = pf_operator(&family_pf());
        let g = family_gauss();
        let r = ode_residual(&op, |z| series_2f1(&g, z, 1e-16), re(0.4), 1e-3).unwrap();
        assert!(r <= 1e-6, "{r:e}");
    }

    #[test]
    fn periods_solve_the_shared_operator() {
        let spec = QuadratureSpec::default();
        let cover_params = [family_pf(), PFParameters::new(rat(2, 3), rat(2, 3), rat(1, 3))];
        let op = pf_operator(&cover_params[0]);
        for p in &cover_params {
            assert_eq!(pf_operator(p), op);
            for l in [re(2.0), re(3.0), Complex64::new(1.5, 0.5), re(-0.7)] {
                let r = ode_residual(&op, |z| period_integral(p, z, &spec).map(|v| v.value), l, 1e-3)
                    .unwrap();
                assert!(r <= 1e-6, "{p:?} at {l}: {r:e}");
            }
        }
    }

    #[test]
    fn schwarz_reflection() {
        let spec = QuadratureSpec::default();
        for l in [Complex64::new(1.5, 0.5), Complex64::new(-0.7, 0.2), Complex64::new(0.5, 1.0)] {
            let up = period_integral(&family_pf(), l, &spec).unwrap().value;
            let down = period_integral(&family_pf(), l.conj(), &spec).unwrap().value;
            assert!((up.conj() - down).norm() < 1e-10);
        }
    }

    #[test]
    fn error_estimates_decay_geometrically() {
        let (a, c) = (1.0 / 3.0, 2.0 / 3.0);
        let levels = tanh_sinh_levels(
            |x, y| Complex64::new(2.0 - x, 0.0).powf(-c) * (x.powf(-a) * y.powf(-a)),
            6,
        );
        let diffs: Vec<f64> = levels.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
        // once above roundoff, each refinement gains at least a factor of two
        for w in diffs.windows(2) {
            if w[0] > 1e-13 {
                assert!(w[1] <= 0.5 * w[0], "{diffs:?}");
            }
        }
    }
}
