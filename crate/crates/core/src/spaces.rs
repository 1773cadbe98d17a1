//! Geometry of finite-dimensional l_p spaces over the reals or complexes.
//!
//! Vectors are always stored as `Vec<C64>`; for real spaces every imaginary
//! part is zero and all routines here preserve that.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default tolerance used when validating support functionals.
pub const TOL_DUAL: f64 = 1e-9;
/// Relative tolerance for coordinate ties (l_inf maxima, l_1 zeros).
pub const TOL_TIE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    pub fn is_real(self) -> bool {
        matches!(self, Field::Real)
    }
}

/// The exponent `p` of an l_p norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_infinite() && p > 0.0 {
            Ok(Exponent::Infinity)
        } else if p.is_finite() && p >= 1.0 {
            Ok(Exponent::Finite(p))
        } else {
            Err(Error::InvalidSpace(format!("exponent {p} is not in [1, inf]")))
        }
    }

    /// Conjugate exponent q with 1/p + 1/q = 1.
    pub fn dual(self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::Finite(1.0),
            Exponent::Finite(1.0) => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }

    pub fn is_two(self) -> bool {
        self == Exponent::Finite(2.0)
    }

    pub fn is_one(self) -> bool {
        self == Exponent::Finite(1.0)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => s.serialize_f64(*p),
            Exponent::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct ExponentVisitor;

        impl Visitor<'_> for ExponentVisitor {
            type Value = Exponent;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number >= 1 or the string \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Exponent, E> {
                Exponent::new(v).map_err(E::custom)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Exponent, E> {
                self.visit_f64(v as f64)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Exponent, E> {
                self.visit_f64(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Exponent, E> {
                if v == "inf" {
                    Ok(Exponent::Infinity)
                } else {
                    Err(E::custom(format!("unknown exponent string {v:?}, expected \"inf\"")))
                }
            }
        }

        d.deserialize_any(ExponentVisitor)
    }
}

/// A finite-dimensional l_p space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub dim: usize,
    pub p: Exponent,
    pub field: Field,
}

impl SpaceSpec {
    pub fn new(dim: usize, p: Exponent, field: Field) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSpace("dimension must be positive".into()));
        }
        if let Exponent::Finite(p) = p {
            if !(p.is_finite() && p >= 1.0) {
                return Err(Error::InvalidSpace(format!("exponent {p} is not in [1, inf]")));
            }
        }
        Ok(Self { dim, p, field })
    }

    pub fn euclidean(dim: usize, field: Field) -> Self {
        Self { dim, p: Exponent::Finite(2.0), field }
    }

    pub fn lp(dim: usize, p: f64, field: Field) -> Self {
        Self { dim, p: Exponent::Finite(p), field }
    }

    pub fn linf(dim: usize, field: Field) -> Self {
        Self { dim, p: Exponent::Infinity, field }
    }

    pub fn is_hilbert(&self) -> bool {
        self.p.is_two()
    }

    fn check(&self, x: &[C64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: x.len() });
        }
        Ok(())
    }
}

/// Complex sign: z/|z|, and 0 at 0.
pub fn sgn(z: C64) -> C64 {
    let r = z.norm();
    if r == 0.0 {
        C64::new(0.0, 0.0)
    } else {
        z / r
    }
}

pub(crate) fn pnorm(x: &[C64], p: Exponent) -> f64 {
    match p {
        Exponent::Infinity => x.iter().map(|z| z.norm()).fold(0.0, f64::max),
        Exponent::Finite(1.0) => x.iter().map(|z| z.norm()).sum(),
        Exponent::Finite(2.0) => x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
        Exponent::Finite(p) => {
            // scale by the max modulus to avoid overflow for large p
            let m = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if m == 0.0 {
                return 0.0;
            }
            m * x.iter().map(|z| (z.norm() / m).powf(p)).sum::<f64>().powf(1.0 / p)
        }
    }
}

pub fn lp_norm(x: &[C64], spec: &SpaceSpec) -> Result<f64> {
    spec.check(x)?;
    Ok(pnorm(x, spec.p))
}

/// Normalizes `x` to the unit sphere of l_p. Returns `None` for the zero vector.
pub(crate) fn normalize(x: &[C64], p: Exponent) -> Option<Vec<C64>> {
    let n = pnorm(x, p);
    if n == 0.0 || !n.is_finite() {
        return None;
    }
    Some(x.iter().map(|z| z / n).collect())
}

/// A linear functional acting by `y -> sum_j coeffs_j * y_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportFunctional {
    pub coeffs: Vec<C64>,
}

impl SupportFunctional {
    pub fn action(&self, y: &[C64]) -> C64 {
        self.coeffs.iter().zip(y).map(|(c, y)| c * y).sum()
    }

    pub fn dual_norm(&self, p: Exponent) -> f64 {
        pnorm(&self.coeffs, p.dual())
    }
}

/// Extreme description of the support set J(x).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportSet {
    pub anchor: Vec<C64>,
    pub extreme: Vec<SupportFunctional>,
    /// Zero coordinates of an l_1 anchor; their coefficients range freely
    /// over [-1, 1] (real) or the closed unit disc (complex).
    pub free_slots: Vec<usize>,
    /// Set when the free slots range over the unit circle rather than {-1, 1};
    /// `extreme` then only lists the real sections.
    pub circle: bool,
}

impl SupportSet {
    pub fn is_singleton(&self) -> bool {
        self.extreme.len() == 1 && !self.circle
    }

    /// Functionals in J(anchor) whose values on `target` have the same convex
    /// hull as `{f(target) : f in J(anchor)}`. The map `f -> f(target)` is
    /// affine, so extremes suffice; for free l_1 slots the choices are adapted
    /// to `target`, and circle slots are sampled at `circle_samples` angles
    /// plus the two angles aligned with the origin.
    pub fn hull_generators(&self, target: &[C64], circle_samples: usize) -> Vec<SupportFunctional> {
        if self.free_slots.is_empty() {
            return self.extreme.clone();
        }
        let fixed = &self.extreme[0].coeffs;
        let base: C64 = fixed
            .iter()
            .zip(target)
            .enumerate()
            .filter(|(j, _)| !self.free_slots.contains(j))
            .map(|(_, (c, v))| c * v)
            .sum();
        let build = |rot: C64| {
            let mut coeffs = fixed.clone();
            for &s in &self.free_slots {
                let v = target[s];
                coeffs[s] = if v.norm() == 0.0 { rot } else { rot * sgn(v).conj() };
            }
            SupportFunctional { coeffs }
        };
        let one = C64::new(1.0, 0.0);
        if !self.circle {
            return vec![build(one), build(-one)];
        }
        let toward = if base.norm() == 0.0 { one } else { sgn(base) };
        let mut out = vec![build(-toward), build(toward)];
        for i in 0..circle_samples {
            let phi = 2.0 * PI * i as f64 / circle_samples as f64;
            out.push(build(C64::from_polar(1.0, phi)));
        }
        out
    }
}

/// Coordinates of `x` treated as zero (l_1) or as attaining the max (l_inf).
fn tie_sets(x: &[C64], rel_tol: f64) -> (Vec<usize>, Vec<usize>) {
    let max = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let zeros = (0..x.len()).filter(|&j| x[j].norm() <= rel_tol * max).collect();
    let maxima = (0..x.len()).filter(|&j| x[j].norm() >= max * (1.0 - rel_tol)).collect();
    (zeros, maxima)
}

pub fn support_functionals(x: &[C64], spec: &SpaceSpec) -> Result<SupportSet> {
    support_functionals_with_tol(x, spec, TOL_TIE)
}

/// J(x) with ties decided at relative tolerance `rel_tol`.
pub fn support_functionals_with_tol(x: &[C64], spec: &SpaceSpec, rel_tol: f64) -> Result<SupportSet> {
    spec.check(x)?;
    let norm = pnorm(x, spec.p);
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let anchor = x.to_vec();
    let zero = C64::new(0.0, 0.0);
    match spec.p {
        Exponent::Finite(p) if p > 1.0 => {
            let coeffs = x
                .iter()
                .map(|&z| sgn(z).conj() * (z.norm() / norm).powf(p - 1.0))
                .collect();
            Ok(SupportSet {
                anchor,
                extreme: vec![SupportFunctional { coeffs }],
                free_slots: vec![],
                circle: false,
            })
        }
        Exponent::Finite(_) => {
            let (zeros, _) = tie_sets(x, rel_tol);
            let fixed: Vec<C64> = x
                .iter()
                .enumerate()
                .map(|(j, &z)| if zeros.contains(&j) { zero } else { sgn(z).conj() })
                .collect();
            let m = zeros.len();
            let mut extreme = Vec::with_capacity(1 << m);
            for pattern in 0..(1usize << m) {
                let mut coeffs = fixed.clone();
                for (bit, &s) in zeros.iter().enumerate() {
                    let sign = if pattern >> (m - 1 - bit) & 1 == 1 { 1.0 } else { -1.0 };
                    coeffs[s] = C64::new(sign, 0.0);
                }
                extreme.push(SupportFunctional { coeffs });
            }
            let circle = m > 0 && spec.field == Field::Complex;
            Ok(SupportSet { anchor, extreme, free_slots: zeros, circle })
        }
        Exponent::Infinity => {
            let (_, maxima) = tie_sets(x, rel_tol);
            let extreme = maxima
                .iter()
                .map(|&j| {
                    let mut coeffs = vec![zero; x.len()];
                    coeffs[j] = sgn(x[j]).conj();
                    SupportFunctional { coeffs }
                })
                .collect();
            Ok(SupportSet { anchor, extreme, free_slots: vec![], circle: false })
        }
    }
}

pub fn is_smooth_point(x: &[C64], spec: &SpaceSpec) -> Result<bool> {
    Ok(support_functionals(x, spec)?.is_singleton())
}

/// Canonical l_p semi-inner-product `[y, x]`.
pub fn sip(y: &[C64], x: &[C64], spec: &SpaceSpec) -> Result<C64> {
    sip_variant(y, x, spec, SipVariant::Canonical)
}

/// Members of the finite family of semi-inner-products used by the probes.
///
/// Every semi-inner-product on a normed space has the form
/// `[y, x] = |x| f_x(y)` for a homogeneous selection `x -> f_x in J(x)`.
/// The canonical selection puts zero weight on the zero coordinates of an l_1
/// anchor; `TieSelect(mask)` instead puts `+-conj(sgn x_r)` there, where `r`
/// is the first nonzero coordinate and the sign is read from `mask`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SipVariant {
    Canonical,
    TieSelect(u32),
}

pub fn sip_variant(y: &[C64], x: &[C64], spec: &SpaceSpec, variant: SipVariant) -> Result<C64> {
    spec.check(x)?;
    spec.check(y)?;
    let p = match spec.p {
        Exponent::Infinity => return Err(Error::InfiniteExponent),
        Exponent::Finite(p) => p,
    };
    let norm = pnorm(x, spec.p);
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    // [y, x] = |x| * f(y) with f the normalized support functional
    let mut acc: C64 = x
        .iter()
        .zip(y)
        .map(|(&xj, &yj)| yj * sgn(xj).conj() * (xj.norm() / norm).powf(p - 1.0))
        .sum();
    if let (SipVariant::TieSelect(mask), true) = (variant, p == 1.0) {
        if let Some(r) = x.iter().position(|z| z.norm() != 0.0) {
            let phase = sgn(x[r]).conj();
            for (bit, j) in (0..x.len()).filter(|&j| x[j].norm() == 0.0).enumerate() {
                let sign = if mask >> (bit % 32) & 1 == 1 { 1.0 } else { -1.0 };
                acc += y[j] * phase * sign;
            }
        }
    }
    Ok(acc * norm)
}

pub fn dual_certificate_check(f: &SupportFunctional, x: &[C64], spec: &SpaceSpec, tol: f64) -> bool {
    if f.coeffs.len() != spec.dim || x.len() != spec.dim {
        return false;
    }
    let action = f.action(x);
    let norm = pnorm(x, spec.p);
    (action - C64::new(norm, 0.0)).norm() <= tol && (f.dual_norm(spec.p) - 1.0).abs() <= tol
}

/// A maximizer of `Re sum_i g_i x_i` over the unit ball of l_p, i.e. a
/// norming vector for `g` seen as an element of the dual space.
pub(crate) fn norming_vector(g: &[C64], p: Exponent) -> Option<Vec<C64>> {
    let q = p.dual();
    let gnorm = pnorm(g, q);
    if gnorm == 0.0 {
        return None;
    }
    let zero = C64::new(0.0, 0.0);
    let v = match q {
        Exponent::Infinity => {
            let j = (0..g.len())
                .max_by(|&a, &b| g[a].norm().total_cmp(&g[b].norm()).then(b.cmp(&a)))
                .unwrap_or(0);
            let mut v = vec![zero; g.len()];
            v[j] = sgn(g[j]).conj();
            v
        }
        Exponent::Finite(1.0) => g.iter().map(|&z| sgn(z).conj()).collect(),
        Exponent::Finite(q) => g
            .iter()
            .map(|&z| sgn(z).conj() * (z.norm() / gnorm).powf(q - 1.0))
            .collect(),
    };
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn r(v: &[f64]) -> Vec<C64> {
        v.iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    #[test]
    fn norms_match_hand_values() {
        let s2 = SpaceSpec::euclidean(2, Field::Real);
        assert_abs_diff_eq!(lp_norm(&r(&[3.0, 4.0]), &s2).unwrap(), 5.0);
        let x = r(&[1.0, -2.0, 2.0]);
        assert_abs_diff_eq!(lp_norm(&x, &SpaceSpec::lp(3, 1.0, Field::Real)).unwrap(), 5.0);
        assert_abs_diff_eq!(lp_norm(&x, &SpaceSpec::linf(3, Field::Real)).unwrap(), 2.0);
        assert!(matches!(
            lp_norm(&x, &s2),
            Err(Error::DimensionMismatch { expected: 2, actual: 3 })
        ));
    }

    #[test]
    fn support_functional_examples() {
        let set = support_functionals(&r(&[3.0, 4.0]), &SpaceSpec::euclidean(2, Field::Real)).unwrap();
        assert_eq!(set.extreme.len(), 1);
        assert_abs_diff_eq!(set.extreme[0].coeffs[0].re, 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(set.extreme[0].coeffs[1].re, 0.8, epsilon = 1e-15);

        let set = support_functionals(&r(&[0.0, 5.0]), &SpaceSpec::lp(2, 1.0, Field::Real)).unwrap();
        assert_eq!(set.extreme.iter().map(|f| f.coeffs.clone()).collect::<Vec<_>>(), vec![
            r(&[-1.0, 1.0]),
            r(&[1.0, 1.0])
        ]);

        let set = support_functionals(&r(&[2.0, 2.0]), &SpaceSpec::linf(2, Field::Real)).unwrap();
        assert_eq!(set.extreme.iter().map(|f| f.coeffs.clone()).collect::<Vec<_>>(), vec![
            r(&[1.0, 0.0]),
            r(&[0.0, 1.0])
        ]);

        assert_eq!(
            support_functionals(&r(&[0.0, 0.0]), &SpaceSpec::euclidean(2, Field::Real)),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn complex_l1_zero_slot_is_flagged_circle() {
        let x = vec![C64::new(0.0, 1.0), C64::new(0.0, 0.0)];
        let set = support_functionals(&x, &SpaceSpec::lp(2, 1.0, Field::Complex)).unwrap();
        assert!(set.circle);
        assert_eq!(set.free_slots, vec![1]);
        assert!(!set.is_singleton());
        // values on (0, 1) sweep the unit circle around the fixed part
        let gens = set.hull_generators(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0)], 64);
        for f in &gens {
            assert_abs_diff_eq!(f.action(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0)]).norm(), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn smooth_point_examples() {
        assert!(is_smooth_point(&r(&[3.0, 4.0]), &SpaceSpec::euclidean(2, Field::Real)).unwrap());
        assert!(!is_smooth_point(&r(&[1.0, 0.0]), &SpaceSpec::lp(2, 1.0, Field::Real)).unwrap());
        assert!(is_smooth_point(&r(&[2.0, 1.0]), &SpaceSpec::linf(2, Field::Real)).unwrap());
        assert!(!is_smooth_point(&r(&[2.0, 2.0]), &SpaceSpec::linf(2, Field::Real)).unwrap());
    }

    #[test]
    fn sip_examples() {
        let e = SpaceSpec::euclidean(2, Field::Real);
        assert_abs_diff_eq!(sip(&r(&[1.0, 2.0]), &r(&[3.0, 4.0]), &e).unwrap().re, 11.0, epsilon = 1e-12);
        let s4 = SpaceSpec::lp(2, 4.0, Field::Real);
        assert_abs_diff_eq!(sip(&r(&[0.3, -7.0]), &r(&[1.0, 0.0]), &s4).unwrap().re, 0.3, epsilon = 1e-15);
        let s3 = SpaceSpec::lp(2, 3.0, Field::Real);
        let x = r(&[1.0, 1.0]);
        assert_abs_diff_eq!(sip(&x, &x, &s3).unwrap().re, 2f64.powf(2.0 / 3.0), epsilon = 1e-14);
        assert_eq!(sip(&x, &x, &SpaceSpec::linf(2, Field::Real)), Err(Error::InfiniteExponent));
        assert_eq!(sip(&x, &r(&[0.0, 0.0]), &s3), Err(Error::ZeroVector));
    }

    #[test]
    fn tie_select_variant_is_a_valid_sip_at_zero_slots() {
        let s1 = SpaceSpec::lp(3, 1.0, Field::Complex);
        let x = vec![C64::new(0.0, 2.0), C64::new(0.0, 0.0), C64::new(-1.0, 0.0)];
        let y = vec![C64::new(0.5, 1.0), C64::new(2.0, -1.0), C64::new(0.0, 3.0)];
        for mask in 0..2 {
            let v = SipVariant::TieSelect(mask);
            let xx = sip_variant(&x, &x, &s1, v).unwrap();
            assert_abs_diff_eq!(xx.re, 9.0, epsilon = 1e-12);
            let lam = C64::new(0.3, -1.2);
            let scaled: Vec<C64> = x.iter().map(|z| z * lam).collect();
            let lhs = sip_variant(&y, &scaled, &s1, v).unwrap();
            let rhs = lam.conj() * sip_variant(&y, &x, &s1, v).unwrap();
            assert_abs_diff_eq!((lhs - rhs).norm(), 0.0, epsilon = 1e-12);
            assert!(sip_variant(&y, &x, &s1, v).unwrap().norm() <= pnorm(&y, s1.p) * 3.0 + 1e-12);
        }
        assert_ne!(
            sip_variant(&y, &x, &s1, SipVariant::TieSelect(0)).unwrap(),
            sip_variant(&y, &x, &s1, SipVariant::TieSelect(1)).unwrap()
        );
    }

    #[test]
    fn dual_certificate_examples() {
        let e = SpaceSpec::euclidean(2, Field::Real);
        let f = |c: &[f64]| SupportFunctional { coeffs: r(c) };
        assert!(dual_certificate_check(&f(&[0.6, 0.8]), &r(&[3.0, 4.0]), &e, 1e-12));
        assert!(!dual_certificate_check(&f(&[1.0, 0.0]), &r(&[3.0, 4.0]), &e, 1e-12));
        // l_1 dual norm of (0.5, 0.5) is 1 and the action on (2, 2) is 2
        assert!(dual_certificate_check(&f(&[0.5, 0.5]), &r(&[2.0, 2.0]), &SpaceSpec::linf(2, Field::Real), 1e-12));
    }

    #[test]
    fn dual_exponents() {
        assert_eq!(Exponent::Finite(2.0).dual(), Exponent::Finite(2.0));
        assert_eq!(Exponent::Finite(1.0).dual(), Exponent::Infinity);
        assert_eq!(Exponent::Infinity.dual(), Exponent::Finite(1.0));
        assert_abs_diff_eq!(
            match Exponent::Finite(3.0).dual() {
                Exponent::Finite(q) => q,
                _ => f64::NAN,
            },
            1.5
        );
        assert!(Exponent::new(0.5).is_err());
    }

    fn cvec(n: usize) -> impl Strategy<Value = Vec<C64>> {
        proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), n)
            .prop_map(|v| v.into_iter().map(|(a, b)| C64::new(a, b)).collect())
    }

    proptest! {
        #[test]
        fn unique_support_functional_certifies(x in cvec(4), p in 1.1f64..6.0) {
            prop_assume!(pnorm(&x, Exponent::Finite(p)) > 1e-3);
            let spec = SpaceSpec::lp(4, p, Field::Complex);
            let set = support_functionals(&x, &spec).unwrap();
            prop_assert_eq!(set.extreme.len(), 1);
            prop_assert!(dual_certificate_check(&set.extreme[0], &x, &spec, 1e-10 * (1.0 + pnorm(&x, spec.p))));
        }

        #[test]
        fn smoothness_matches_support_set_size(
            x in proptest::collection::vec(-2i32..3, 3),
            which in 0usize..4,
        ) {
            let x: Vec<C64> = x.into_iter().map(|v| C64::new(v as f64, 0.0)).collect();
            prop_assume!(x.iter().any(|z| z.norm() > 0.0));
            let p = [Exponent::Finite(1.0), Exponent::Finite(1.5), Exponent::Finite(2.0), Exponent::Infinity][which];
            let spec = SpaceSpec::new(3, p, Field::Real).unwrap();
            let set = support_functionals(&x, &spec).unwrap();
            prop_assert_eq!(is_smooth_point(&x, &spec).unwrap(), set.extreme.len() == 1);
            for f in &set.extreme {
                prop_assert!(dual_certificate_check(f, &x, &spec, 1e-12));
            }
        }

        #[test]
        fn norming_vector_attains_dual_norm(g in cvec(3), which in 0usize..4) {
            prop_assume!(pnorm(&g, Exponent::Finite(1.0)) > 1e-3);
            let p = [Exponent::Finite(1.0), Exponent::Finite(1.5), Exponent::Finite(2.0), Exponent::Infinity][which];
            let v = norming_vector(&g, p).unwrap();
            let val: C64 = g.iter().zip(&v).map(|(a, b)| a * b).sum();
            prop_assert!((pnorm(&v, p) - 1.0).abs() < 1e-12);
            prop_assert!((val.re - pnorm(&g, p.dual())).abs() < 1e-10);
            prop_assert!(val.im.abs() < 1e-10);
        }
    }
}
