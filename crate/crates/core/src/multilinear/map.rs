use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaces::{normalize, pnorm, Field, SpaceSpec, C64};

/// A bounded k-linear map between l_p spaces, stored as a dense coefficient
/// tensor of shape `(codomain.dim, n_1, ..., n_k)` in row-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultilinearMap {
    field: Field,
    factors: Vec<SpaceSpec>,
    codomain: SpaceSpec,
    coeffs: Vec<C64>,
}

/// A point `(x_1, ..., x_k)` of the product of the factor spaces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuplePoint {
    pub parts: Vec<Vec<C64>>,
}

impl TuplePoint {
    pub fn new(parts: Vec<Vec<C64>>) -> Self {
        Self { parts }
    }

    pub fn single(x: Vec<C64>) -> Self {
        Self { parts: vec![x] }
    }

    pub fn from_real(parts: &[&[f64]]) -> Self {
        Self {
            parts: parts
                .iter()
                .map(|p| p.iter().map(|&v| C64::new(v, 0.0)).collect())
                .collect(),
        }
    }

    pub fn is_unit(&self, factors: &[SpaceSpec], tol: f64) -> bool {
        self.parts.len() == factors.len()
            && self
                .parts
                .iter()
                .zip(factors)
                .all(|(x, s)| x.len() == s.dim && (pnorm(x, s.p) - 1.0).abs() <= tol)
    }

    /// Each factor scaled so that its first non-negligible coordinate is real
    /// and positive. Two points in the same unimodular orbit normalize to the
    /// same tuple.
    pub fn phase_normalized(&self) -> TuplePoint {
        let parts = self
            .parts
            .iter()
            .map(|x| {
                let max = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
                match x.iter().find(|z| z.norm() > 1e-6 * max) {
                    Some(&lead) => {
                        let phase = lead.conj() / lead.norm();
                        x.iter().map(|z| z * phase).collect()
                    }
                    None => x.clone(),
                }
            })
            .collect();
        TuplePoint { parts }
    }

    /// Max coordinate distance between the phase-normalized forms.
    pub fn orbit_distance(&self, other: &TuplePoint) -> f64 {
        let a = self.phase_normalized();
        let b = other.phase_normalized();
        a.parts
            .iter()
            .zip(&b.parts)
            .flat_map(|(x, y)| x.iter().zip(y).map(|(u, v)| (u - v).norm()))
            .fold(0.0, f64::max)
    }

    /// Multiplies factor `t` by `mu[t]`.
    pub fn rotated(&self, mu: &[C64]) -> TuplePoint {
        TuplePoint {
            parts: self
                .parts
                .iter()
                .zip(mu)
                .map(|(x, &m)| x.iter().map(|z| z * m).collect())
                .collect(),
        }
    }
}

impl MultilinearMap {
    pub fn new(codomain: SpaceSpec, factors: Vec<SpaceSpec>, coeffs: Vec<C64>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidSpace("a multilinear map needs at least one factor".into()));
        }
        for s in factors.iter().chain(std::iter::once(&codomain)) {
            SpaceSpec::new(s.dim, s.p, s.field)?;
            if s.field != codomain.field {
                return Err(Error::InvalidSpace("all spaces must share the scalar field".into()));
            }
        }
        let expected = codomain.dim * factors.iter().map(|s| s.dim).product::<usize>();
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch { expected, actual: coeffs.len() });
        }
        if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidSpace("coefficients must be finite".into()));
        }
        if codomain.field == Field::Real && coeffs.iter().any(|z| z.im != 0.0) {
            return Err(Error::InvalidSpace("real map with non-real coefficient".into()));
        }
        Ok(Self { field: codomain.field, factors, codomain, coeffs })
    }

    /// Convenience constructor from real coefficients.
    pub fn from_real(codomain: SpaceSpec, factors: Vec<SpaceSpec>, coeffs: &[f64]) -> Result<Self> {
        Self::new(codomain, factors, coeffs.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    /// A linear map given by a row-major `rows x cols` matrix, Euclidean on both sides.
    pub fn matrix(rows: usize, cols: usize, field: Field, entries: Vec<C64>) -> Result<Self> {
        Self::new(SpaceSpec::euclidean(rows, field), vec![SpaceSpec::euclidean(cols, field)], entries)
    }

    pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::matrix(rows, cols, Field::Real, entries.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn k(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[SpaceSpec] {
        &self.factors
    }

    pub fn codomain(&self) -> &SpaceSpec {
        &self.codomain
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// `(codomain.dim, n_1, ..., n_k)`.
    pub fn shape(&self) -> Vec<usize> {
        std::iter::once(self.codomain.dim).chain(self.factors.iter().map(|s| s.dim)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|z| z.norm() == 0.0)
    }

    /// True for `k = 1` with Euclidean domain and codomain.
    pub fn is_hilbert_operator(&self) -> bool {
        self.k() == 1 && self.factors[0].is_hilbert() && self.codomain.is_hilbert()
    }

    pub fn check_compatible(&self, other: &MultilinearMap) -> Result<()> {
        if self.field != other.field || self.codomain != other.codomain || self.factors != other.factors {
            return Err(Error::ShapeMismatch(format!(
                "{:?} over {:?} vs {:?} over {:?}",
                self.shape(),
                self.field,
                other.shape(),
                other.field
            )));
        }
        Ok(())
    }

    /// `self + lambda * other`.
    pub fn add_scaled(&self, lambda: C64, other: &MultilinearMap) -> Result<MultilinearMap> {
        self.check_compatible(other)?;
        let lambda = if self.field == Field::Real { C64::new(lambda.re, 0.0) } else { lambda };
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + lambda * b).collect();
        Ok(MultilinearMap { coeffs, ..self.clone() })
    }

    pub fn scaled(&self, c: C64) -> MultilinearMap {
        let c = if self.field == Field::Real { C64::new(c.re, 0.0) } else { c };
        MultilinearMap { coeffs: self.coeffs.iter().map(|z| z * c).collect(), ..self.clone() }
    }

    /// Same coefficients, different exponents on the factors and codomain.
    pub fn with_spaces(&self, codomain: SpaceSpec, factors: Vec<SpaceSpec>) -> Result<MultilinearMap> {
        MultilinearMap::new(codomain, factors, self.coeffs.clone())
    }

    /// The `m x n` matrix of a linear map (`k = 1`).
    pub fn as_matrix(&self) -> Result<DMatrix<C64>> {
        if self.k() != 1 {
            return Err(Error::NotLinear(self.k()));
        }
        Ok(DMatrix::from_row_slice(self.codomain.dim, self.factors[0].dim, &self.coeffs))
    }

    fn check_point(&self, x: &TuplePoint) -> Result<()> {
        if x.parts.len() != self.k() {
            return Err(Error::DimensionMismatch { expected: self.k(), actual: x.parts.len() });
        }
        for (part, spec) in x.parts.iter().zip(&self.factors) {
            if part.len() != spec.dim {
                return Err(Error::DimensionMismatch { expected: spec.dim, actual: part.len() });
            }
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &TuplePoint) -> Result<Vec<C64>> {
        self.check_point(x)?;
        Ok(self.contract(x, None).0)
    }

    /// The `m x n_slot` matrix `M` with `T(x) = M x_slot`, stored row-major.
    pub fn partial(&self, x: &TuplePoint, slot: usize) -> Result<Vec<C64>> {
        self.check_point(x)?;
        if slot >= self.k() {
            return Err(Error::DimensionMismatch { expected: self.k(), actual: slot });
        }
        Ok(self.contract(x, Some(slot)).1)
    }

    /// Contracts every slot (and, if `free` is set, also builds the partial
    /// matrix that leaves that slot uncontracted).
    fn contract(&self, x: &TuplePoint, free: Option<usize>) -> (Vec<C64>, Vec<C64>) {
        let m = self.codomain.dim;
        let dims: Vec<usize> = self.factors.iter().map(|s| s.dim).collect();
        let inner: usize = dims.iter().product();
        let zero = C64::new(0.0, 0.0);
        let mut out = vec![zero; m];
        let mut part = match free {
            Some(s) => vec![zero; m * dims[s]],
            None => Vec::new(),
        };
        let mut idx = vec![0usize; dims.len()];
        for flat in 0..inner {
            // product over contracted slots
            let mut w = C64::new(1.0, 0.0);
            for (t, &i) in idx.iter().enumerate() {
                if Some(t) != free {
                    w *= x.parts[t][i];
                }
            }
            if w.norm() != 0.0 {
                for j in 0..m {
                    let c = self.coeffs[j * inner + flat];
                    if let Some(s) = free {
                        part[j * dims[s] + idx[s]] += c * w;
                        out[j] += c * w * x.parts[s][idx[s]];
                    } else {
                        out[j] += c * w;
                    }
                }
            }
            for t in (0..dims.len()).rev() {
                idx[t] += 1;
                if idx[t] < dims[t] {
                    break;
                }
                idx[t] = 0;
            }
        }
        (out, part)
    }

    /// `|T(e_{i_1}, ..., e_{i_k})|` maximized over basis tuples: a lower bound
    /// on the norm for every choice of l_p factors.
    pub fn basis_lower_bound(&self) -> f64 {
        let m = self.codomain.dim;
        let inner = self.coeffs.len() / m;
        (0..inner)
            .map(|flat| {
                let col: Vec<C64> = (0..m).map(|j| self.coeffs[j * inner + flat]).collect();
                pnorm(&col, self.codomain.p)
            })
            .fold(0.0, f64::max)
    }
}

fn gaussian(rng: &mut ChaCha8Rng, field: Field) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    match field {
        Field::Real => C64::new(re, 0.0),
        Field::Complex => C64::new(re, StandardNormal.sample(rng)),
    }
}

/// A map with i.i.d. standard Gaussian coefficients between Euclidean spaces.
pub fn random_map(codomain_dim: usize, factor_dims: &[usize], field: Field, seed: u64) -> Result<MultilinearMap> {
    let codomain = SpaceSpec::euclidean(codomain_dim, field);
    let factors = factor_dims.iter().map(|&n| SpaceSpec::euclidean(n, field)).collect();
    random_map_on(codomain, factors, seed)
}

/// Gaussian coefficients on the given spaces.
pub fn random_map_on(codomain: SpaceSpec, factors: Vec<SpaceSpec>, seed: u64) -> Result<MultilinearMap> {
    let count = codomain.dim * factors.iter().map(|s: &SpaceSpec| s.dim).product::<usize>();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = (0..count).map(|_| gaussian(&mut rng, codomain.field)).collect();
    MultilinearMap::new(codomain, factors, coeffs)
}

/// A random map with the same spaces as `template`.
pub fn random_like(template: &MultilinearMap, seed: u64) -> MultilinearMap {
    random_map_on(*template.codomain(), template.factors().to_vec(), seed)
        .expect("template spaces are valid")
}

/// A random unit tuple for the factors of `map`.
pub(crate) fn random_unit_point(map: &MultilinearMap, rng: &mut ChaCha8Rng) -> TuplePoint {
    let parts = map
        .factors()
        .iter()
        .map(|s| loop {
            let v: Vec<C64> = (0..s.dim).map(|_| gaussian(rng, s.field)).collect();
            if let Some(u) = normalize(&v, s.p) {
                break u;
            }
        })
        .collect();
    TuplePoint { parts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bilinear_x1y1() -> MultilinearMap {
        let e = SpaceSpec::euclidean(2, Field::Real);
        MultilinearMap::from_real(SpaceSpec::euclidean(1, Field::Real), vec![e, e], &[1.0, 0.0, 0.0, 0.0])
            .unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let t = bilinear_x1y1();
        let y = t.evaluate(&TuplePoint::from_real(&[&[2.0, 0.0], &[3.0, 0.0]])).unwrap();
        assert_abs_diff_eq!(y[0].re, 6.0);

        let id = MultilinearMap::real_matrix(2, 2, &[1.0, 0.0, 0.0, 1.0]).unwrap();
        let y = id.evaluate(&TuplePoint::from_real(&[&[1.0, 2.0]])).unwrap();
        assert_eq!(y, vec![C64::new(1.0, 0.0), C64::new(2.0, 0.0)]);

        let t = random_map(2, &[3, 2], Field::Complex, 3).unwrap();
        let x = TuplePoint::new(vec![
            vec![C64::new(0.2, 1.0), C64::new(-1.0, 0.5), C64::new(0.0, 0.3)],
            vec![C64::new(1.5, 0.0), C64::new(0.1, -0.4)],
        ]);
        let y = t.evaluate(&x).unwrap();
        let y2 = t.evaluate(&x.rotated(&[C64::new(2.0, 0.0), C64::new(1.0, 0.0)])).unwrap();
        for (a, b) in y.iter().zip(&y2) {
            assert_abs_diff_eq!((a * 2.0 - b).norm(), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn evaluate_rejects_bad_dims() {
        let t = bilinear_x1y1();
        assert!(matches!(
            t.evaluate(&TuplePoint::from_real(&[&[1.0, 0.0]])),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(t.evaluate(&TuplePoint::from_real(&[&[1.0, 0.0], &[1.0]])).is_err());
    }

    #[test]
    fn partial_matches_evaluate() {
        let t = random_map(3, &[2, 3, 2], Field::Complex, 11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = random_unit_point(&t, &mut rng);
        let y = t.evaluate(&x).unwrap();
        for slot in 0..3 {
            let m = t.partial(&x, slot).unwrap();
            let n = t.factors()[slot].dim;
            for j in 0..3 {
                let v: C64 = (0..n).map(|i| m[j * n + i] * x.parts[slot][i]).sum();
                assert_abs_diff_eq!((v - y[j]).norm(), 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn random_map_is_seeded() {
        let a = random_map(2, &[3, 4], Field::Real, 7).unwrap();
        let b = random_map(2, &[3, 4], Field::Real, 7).unwrap();
        assert_eq!(a.shape(), vec![2, 3, 4]);
        assert_eq!(a.coeffs().len(), 24);
        let bits = |m: &MultilinearMap| m.coeffs().iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
        let c = random_map(2, &[3, 4], Field::Real, 8).unwrap();
        assert_ne!(bits(&a), bits(&c));
        assert!(a.coeffs().iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn new_validates() {
        let e = SpaceSpec::euclidean(2, Field::Real);
        assert!(matches!(
            MultilinearMap::from_real(e, vec![e], &[1.0, 2.0, 3.0]),
            Err(Error::DimensionMismatch { expected: 4, actual: 3 })
        ));
        let c = SpaceSpec::euclidean(2, Field::Complex);
        assert!(MultilinearMap::from_real(e, vec![c], &[1.0; 4]).is_err());
        assert!(MultilinearMap::matrix(1, 1, Field::Real, vec![C64::new(0.0, 1.0)]).is_err());
    }

    #[test]
    fn phase_normalization_identifies_orbits() {
        let x = TuplePoint::new(vec![
            vec![C64::new(0.0, 0.0), C64::new(0.6, 0.8)],
            vec![C64::new(-1.0, 0.0)],
        ]);
        let y = x.rotated(&[C64::from_polar(1.0, 1.3), C64::new(-1.0, 0.0)]);
        assert!(x.orbit_distance(&y) < 1e-15);
        let z = TuplePoint::new(vec![vec![C64::new(0.6, 0.0), C64::new(0.8, 0.0)], vec![C64::new(1.0, 0.0)]]);
        assert!(x.orbit_distance(&z) > 0.5);
    }
}
