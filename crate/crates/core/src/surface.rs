//! Singular fibers of the elliptic surfaces `Y² = X³ + f(t)²` and the
//! invariants of the attached Calabi-Yau threefolds.
//!
//! All smooth fibers have `j = 0`. A zero of `f` of order `m` is a zero of
//! the discriminant of order `4m`; after minimal-model reduction only
//! `m mod 3` matters: `1 → IV`, `2 → IV*`, `0 → smooth`. The fiber at
//! `t = ∞` sees `f` homogenized to degree six.
//!
//! On a K3 surface we count the fixed locus of `(X, Y, t) ↦ (ξ̄X, Y, t)`:
//! three pointwise-fixed sections plus the central component of every IV*
//! give `k = 3 + #IV*` curves, and each IV (IV*) fiber contributes one (three)
//! isolated points. The threefold then has `h²¹ = 6 − k`, `h¹¹ = 18 + 11k`.

use thiserror::Error;

use crate::algebra::UniPoly;

pub const MAX_DEGREE: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("f must be nonzero")]
    ZeroPolynomial,
    #[error("f must have degree at least 1")]
    ConstantPolynomial,
    #[error("deg f = {0} is not supported (maximum {MAX_DEGREE})")]
    UnsupportedDegree(usize),
}

/// `Y² = X³ + f(t)²`, optionally remembering a factorization `f = g·h²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassModel {
    f: UniPoly,
    factored: Option<(UniPoly, UniPoly)>,
}

impl WeierstrassModel {
    pub fn new(f: UniPoly) -> Result<Self, SurfaceError> {
        match f.degree() {
            None => Err(SurfaceError::ZeroPolynomial),
            Some(0) => Err(SurfaceError::ConstantPolynomial),
            Some(d) if d > MAX_DEGREE => Err(SurfaceError::UnsupportedDegree(d)),
            Some(_) => Ok(Self { f, factored: None }),
        }
    }

    /// `f = g·h²`.
    pub fn from_factored(g: UniPoly, h: UniPoly) -> Result<Self, SurfaceError> {
        let f = &g * &(&h * &h);
        let mut model = Self::new(f)?;
        model.factored = Some((g, h));
        Ok(model)
    }

    pub fn f(&self) -> &UniPoly {
        &self.f
    }

    pub fn factored(&self) -> Option<&(UniPoly, UniPoly)> {
        self.factored.as_ref()
    }

    pub fn degree(&self) -> usize {
        self.f.degree().expect("validated nonzero")
    }
}

/// Yun's square-free decomposition: monic, pairwise coprime, square-free
/// factors with their multiplicities, ascending by multiplicity.
pub fn squarefree_multiplicities(f: &UniPoly) -> Vec<(UniPoly, u32)> {
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.exact_div(&a0).expect("gcd divides");
    let mut c = df.exact_div(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while !b.is_constant() {
        let a = b.gcd(&d);
        b = b.exact_div(&a).expect("gcd divides");
        c = d.exact_div(&a).expect("gcd divides");
        d = &c - &b.derivative();
        if !a.is_constant() {
            out.push((a.monic(), i));
        }
        i += 1;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KodairaType {
    IV,
    IVStar,
    Smooth,
}

impl KodairaType {
    /// From the order of vanishing of `f`.
    pub fn from_multiplicity(m: u32) -> Self {
        match m % 3 {
            1 => KodairaType::IV,
            2 => KodairaType::IVStar,
            _ => KodairaType::Smooth,
        }
    }

    pub fn euler_number(&self) -> u32 {
        match self {
            KodairaType::IV => 4,
            KodairaType::IVStar => 8,
            KodairaType::Smooth => 0,
        }
    }

    pub fn components(&self) -> u32 {
        match self {
            KodairaType::IV => 3,
            KodairaType::IVStar => 7,
            KodairaType::Smooth => 1,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            KodairaType::IV => "IV",
            KodairaType::IVStar => "IV*",
            KodairaType::Smooth => "smooth",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberLocation {
    /// The fibers over the roots of a monic linear factor, or of what is left
    /// of a square-free factor once its rational roots are split off.
    Factor(UniPoly),
    Infinity,
}

/// One or more fibers sharing a location factor and type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberRecord {
    pub location: FiberLocation,
    /// Order of vanishing of `f` (of the homogenized `f` at `∞`).
    pub multiplicity: u32,
    pub kodaira_type: KodairaType,
    /// Euler number of a single fiber.
    pub euler_number: u32,
    /// Components of a single fiber.
    pub components: u32,
    /// Number of fibers this record stands for (the degree of its factor).
    pub fiber_count: u32,
    /// `multiplicity ≡ 0 mod 3` but nonzero: the model was not minimal there.
    pub non_minimal: bool,
}

impl FiberRecord {
    fn new(location: FiberLocation, multiplicity: u32, fiber_count: u32) -> Self {
        let kodaira_type = KodairaType::from_multiplicity(multiplicity);
        Self {
            location,
            multiplicity,
            kodaira_type,
            euler_number: kodaira_type.euler_number(),
            components: kodaira_type.components(),
            fiber_count,
            non_minimal: multiplicity > 0 && multiplicity.is_multiple_of(3),
        }
    }
}

/// Fiber records for the finite zeros of `f`, then one for `t = ∞`.
///
/// Rational roots become linear location factors; what remains of each
/// square-free factor is kept whole.
pub fn classify_fibers(w: &WeierstrassModel) -> Vec<FiberRecord> {
    let mut out = Vec::new();
    for (factor, m) in squarefree_multiplicities(w.f()) {
        let mut rest = factor.clone();
        for r in factor.rational_roots() {
            let lin = UniPoly::linear_root(r);
            rest = rest.exact_div(&lin).expect("root divides");
            out.push(FiberRecord::new(FiberLocation::Factor(lin), m, 1));
        }
        if let Some(d) = rest.degree().filter(|&d| d > 0) {
            out.push(FiberRecord::new(FiberLocation::Factor(rest), m, d as u32));
        }
    }
    let m_inf = (MAX_DEGREE - w.degree()) as u32;
    out.push(FiberRecord::new(FiberLocation::Infinity, m_inf, 1));
    out
}

/// Fixed-locus counts and Calabi-Yau Hodge numbers of a K3 configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HodgeData {
    /// `k`: pointwise-fixed smooth rational curves.
    pub fixed_curves: u32,
    pub fixed_points: u32,
    /// `h²¹ = r = 6 − k`, the number of moduli.
    pub h21: i32,
    pub h11: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceReport {
    pub fibers: Vec<FiberRecord>,
    pub count_iv: u32,
    pub count_iv_star: u32,
    pub euler_total: u32,
    pub is_k3: bool,
    /// Rank of the lattice spanned by a fiber, the zero section, and all but
    /// one component of each reducible fiber.
    pub ns_lower_bound: u32,
    /// Present only for K3 configurations.
    pub hodge: Option<HodgeData>,
}

pub fn surface_report(w: &WeierstrassModel) -> SurfaceReport {
    let fibers = classify_fibers(w);
    let count = |t: KodairaType| -> u32 {
        fibers
            .iter()
            .filter(|f| f.kodaira_type == t)
            .map(|f| f.fiber_count)
            .sum()
    };
    let count_iv = count(KodairaType::IV);
    let count_iv_star = count(KodairaType::IVStar);
    let euler_total = fibers.iter().map(|f| f.euler_number * f.fiber_count).sum::<u32>();
    let is_k3 = euler_total == 24;
    let ns_lower_bound = 2 + 2 * count_iv + 6 * count_iv_star;
    let hodge = is_k3.then(|| {
        let k = 3 + count_iv_star;
        HodgeData {
            fixed_curves: k,
            fixed_points: count_iv + 3 * count_iv_star,
            h21: 6 - k as i32,
            h11: 18 + 11 * k,
        }
    });
    SurfaceReport {
        fibers,
        count_iv,
        count_iv_star,
        euler_total,
        is_k3,
        ns_lower_bound,
        hodge,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;
    use proptest::prelude::*;

    fn p(cs: &[i64]) -> UniPoly {
        UniPoly::from_ints(cs)
    }

    fn lin(r: i64) -> UniPoly {
        UniPoly::linear_root(int(r))
    }

    #[test]
    fn squarefree_examples() {
        let a = p(&[-1, 0, 1]);
        assert_eq!(squarefree_multiplicities(&a), vec![(a.clone(), 1)]);

        let b = p(&[-2, 0, 1]);
        let f = &a * &(&b * &b);
        assert_eq!(squarefree_multiplicities(&f), vec![(a, 1), (b, 2)]);

        assert_eq!(squarefree_multiplicities(&p(&[0, 0, 0, 1])), vec![(p(&[0, 1]), 3)]);

        // leading coefficient is dropped, factors are monic
        let g = p(&[0, 0, 3]);
        assert_eq!(squarefree_multiplicities(&g), vec![(p(&[0, 1]), 2)]);
    }

    #[test]
    fn genus_two_configuration() {
        let w = WeierstrassModel::from_factored(p(&[-1, 0, 1]), p(&[-2, 0, 1])).unwrap();
        let fibers = classify_fibers(&w);
        assert_eq!(fibers.len(), 4);
        assert_eq!(fibers[0].location, FiberLocation::Factor(lin(-1)));
        assert_eq!(fibers[1].location, FiberLocation::Factor(lin(1)));
        assert!(fibers[..2].iter().all(|f| f.kodaira_type == KodairaType::IV));
        assert_eq!(fibers[2].location, FiberLocation::Factor(p(&[-2, 0, 1])));
        assert_eq!(fibers[2].kodaira_type, KodairaType::IVStar);
        assert_eq!(fibers[2].fiber_count, 2);
        assert_eq!(fibers[3].location, FiberLocation::Infinity);
        assert_eq!(fibers[3].kodaira_type, KodairaType::Smooth);
        assert!(!fibers[3].non_minimal);

        let r = surface_report(&w);
        assert_eq!((r.count_iv, r.count_iv_star), (2, 2));
        assert!(r.is_k3);
        assert_eq!(r.ns_lower_bound, 18);
        assert_eq!(r.ns_lower_bound + 4, 22);
        assert_eq!(
            r.hodge,
            Some(HodgeData { fixed_curves: 5, fixed_points: 8, h21: 1, h11: 73 })
        );
    }

    #[test]
    fn remark_configurations() {
        let quartic = &(&lin(0) * &lin(1)) * &(&lin(2) * &lin(3));
        let r = surface_report(&WeierstrassModel::new(quartic).unwrap());
        assert_eq!((r.count_iv, r.count_iv_star), (4, 1));
        assert_eq!(r.fibers.last().unwrap().kodaira_type, KodairaType::IVStar);
        assert_eq!(
            r.hodge,
            Some(HodgeData { fixed_curves: 4, fixed_points: 7, h21: 2, h11: 62 })
        );

        let sextic = (1..=6).fold(UniPoly::one(), |acc, k| &acc * &lin(k));
        let r = surface_report(&WeierstrassModel::new(sextic).unwrap());
        assert_eq!((r.count_iv, r.count_iv_star), (6, 0));
        assert_eq!(
            r.hodge,
            Some(HodgeData { fixed_curves: 3, fixed_points: 6, h21: 3, h11: 51 })
        );

        let cubic = &(&lin(1) * &lin(2)) * &lin(3);
        let r = surface_report(&WeierstrassModel::new(&cubic * &cubic).unwrap());
        assert_eq!((r.count_iv, r.count_iv_star), (0, 3));
        assert_eq!(
            r.hodge,
            Some(HodgeData { fixed_curves: 6, fixed_points: 9, h21: 0, h11: 84 })
        );
    }

    #[test]
    fn rational_elliptic_surface_is_not_k3() {
        let r = surface_report(&WeierstrassModel::new(p(&[0, 1])).unwrap());
        assert_eq!(r.fibers[1].multiplicity, 5);
        assert_eq!(r.fibers[1].kodaira_type, KodairaType::IVStar);
        assert_eq!(r.euler_total, 12);
        assert!(!r.is_k3);
        assert!(r.hodge.is_none());
    }

    #[test]
    fn non_minimal_points_are_flagged() {
        let f = &p(&[0, 0, 0, 1]) * &lin(1);
        let fibers = classify_fibers(&WeierstrassModel::new(f).unwrap());
        let at_zero = &fibers[1];
        assert_eq!(at_zero.multiplicity, 3);
        assert_eq!(at_zero.kodaira_type, KodairaType::Smooth);
        assert!(at_zero.non_minimal);
    }

    #[test]
    fn model_validation() {
        assert_eq!(WeierstrassModel::new(UniPoly::zero()), Err(SurfaceError::ZeroPolynomial));
        assert_eq!(WeierstrassModel::new(p(&[3])), Err(SurfaceError::ConstantPolynomial));
        assert_eq!(
            WeierstrassModel::new(p(&[0, 0, 0, 0, 0, 0, 0, 1])),
            Err(SurfaceError::UnsupportedDegree(7))
        );
    }

    fn arb_model() -> impl Strategy<Value = WeierstrassModel> {
        // products of linear and irreducible quadratic factors, degree 1..=6
        prop::collection::vec((-4i64..5, 0u8..3), 1..=6).prop_filter_map("degree", |fs| {
            let f = fs.iter().fold(UniPoly::one(), |acc, &(r, kind)| match kind {
                0 | 1 => &acc * &lin(r),
                _ => &acc * &p(&[r * r + 1, 0, 1]),
            });
            WeierstrassModel::new(f).ok()
        })
    }

    proptest! {
        #[test]
        fn report_invariants(w in arb_model()) {
            let fibers = classify_fibers(&w);
            let finite: u32 = fibers
                .iter()
                .filter(|f| f.location != FiberLocation::Infinity)
                .map(|f| f.multiplicity * f.fiber_count)
                .sum();
            prop_assert_eq!(finite as usize, w.degree());

            let r = surface_report(&w);
            prop_assert_eq!(r.euler_total % 4, 0);
            prop_assert_eq!(r.is_k3, r.count_iv + 2 * r.count_iv_star == 6);
            if let Some(h) = r.hodge {
                prop_assert_eq!(h.fixed_points, h.fixed_curves + 3);
                prop_assert_eq!(h.h21, 6 - h.fixed_curves as i32);
                prop_assert_eq!(h.h11, 18 + 11 * h.fixed_curves);
            }
        }
    }
}
