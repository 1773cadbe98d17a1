//! Birkhoff-James orthogonality `T _|_ A`, decided through the criterion
//! `0 in conv Omega'(T, A)`.

use serde::{Deserialize, Serialize};

use super::hull::{hull_contains_zero, HullTest, HullWeights, SeparatingDirection};
use super::omega::{compressed_pair, omega_at, omega_samples_for, OmegaSample};
use super::oracle::{oracle_min_norm, OracleOutcome};
use super::range::{range_test, range_witness, RangeTest};
use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::linalg::lift;
use crate::multilinear::{attainment_set, AttainmentCluster, AttainmentRoute, MultilinearMap, TuplePoint};
use crate::spaces::{C64, TOL_TIE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    OrthogonalCertified,
    NotOrthogonalCertified,
    Undetermined,
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Decision::OrthogonalCertified => "orthogonal (certified)",
            Decision::NotOrthogonalCertified => "not orthogonal (certified)",
            Decision::Undetermined => "undetermined",
        })
    }
}

/// At most three `Omega'` samples whose convex combination is (nearly) zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaratheodoryCertificate {
    pub weights: Vec<f64>,
    pub points: Vec<OmegaSample>,
}

impl CaratheodoryCertificate {
    fn from_weights(w: &HullWeights, samples: &[OmegaSample]) -> Self {
        CaratheodoryCertificate {
            weights: w.weights.clone(),
            points: w.indices.iter().map(|&i| samples[i].clone()).collect(),
        }
    }

    pub fn combination(&self) -> C64 {
        self.points.iter().zip(&self.weights).map(|(p, &w)| p.lambda * w).sum()
    }
}

/// Where a separating direction comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeparationSource {
    /// Hull of samples that provably generate `conv Omega'`.
    CompleteSamples,
    /// Support function of the compressed numerical range at `theta`.
    NumericalRange,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    Caratheodory(CaratheodoryCertificate),
    /// `Re(conj(direction) * lambda) <= -margin` on all of `Omega'`.
    Separation { direction: C64, margin: f64, theta: Option<f64>, source: SeparationSource },
    Oracle(OracleOutcome),
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthVerdict {
    pub decision: Decision,
    pub evidence: Evidence,
    pub notes: Vec<String>,
    /// `|T|` as used by the decision.
    pub norm_t: f64,
    /// Absolute tolerance of the hull test.
    pub hull_tol: f64,
}

impl OrthVerdict {
    pub fn is_orthogonal(&self) -> bool {
        self.decision == Decision::OrthogonalCertified
    }
}

pub(crate) fn hull_tol(a: &MultilinearMap, cfg: &SolverConfig) -> f64 {
    cfg.tol_decision * a.basis_lower_bound()
}

fn tie_tol(cfg: &SolverConfig) -> f64 {
    TOL_TIE.max(cfg.tol_attain)
}

/// Samples are complete when the witnesses generate all of `conv Omega'`:
/// a single certified orbit, every vertex tuple of a polytope route, or a
/// one-dimensional top singular subspace.
fn samples_complete(cluster: &AttainmentCluster) -> bool {
    cluster.certified && !matches!(&cluster.route, AttainmentRoute::Spectral { basis } if basis.len() > 1)
}

fn verdict(decision: Decision, evidence: Evidence, notes: Vec<String>, cluster: &AttainmentCluster, tol: f64) -> OrthVerdict {
    OrthVerdict { decision, evidence, notes, norm_t: cluster.value, hull_tol: tol }
}

fn separation(sep: &SeparatingDirection, source: SeparationSource) -> Evidence {
    Evidence::Separation { direction: sep.direction, margin: sep.margin, theta: None, source }
}

/// The spectral route: decide `0 in W(B)` for the compressed pair and, when
/// it holds, extract a witness and certify through the sample hull.
fn hilbert_route(
    t: &MultilinearMap,
    a: &MultilinearMap,
    cluster: &AttainmentCluster,
    basis: &[Vec<C64>],
    mut samples: Vec<OmegaSample>,
    cfg: &SolverConfig,
    notes: &mut Vec<String>,
) -> Result<(OrthVerdict, RangeTest, Option<TuplePoint>)> {
    let tol = hull_tol(a, cfg);
    let b = compressed_pair(t, a, basis, cluster.value)?;
    let test = range_test(&b, t.field(), tol, cfg.angle_count)?;
    if !test.contains_zero {
        let u = if t.field().is_real() {
            C64::new(test.theta_star.cos().signum(), 0.0)
        } else {
            C64::from_polar(1.0, test.theta_star)
        };
        let ev = Evidence::Separation {
            direction: u,
            margin: -test.min_support,
            theta: Some(test.theta_star),
            source: SeparationSource::NumericalRange,
        };
        notes.push(format!("numerical range support minimum {:e} at theta {:.12}", test.min_support, test.theta_star));
        return Ok((verdict(Decision::NotOrthogonalCertified, ev, notes.clone(), cluster, tol), test, None));
    }
    let (z, _) = range_witness(&b, t.field())?;
    let x0 = TuplePoint::single(lift(basis, &z));
    let next_id = samples.iter().map(|s| s.witness_id + 1).max().unwrap_or(0);
    for mut s in omega_at(t, a, std::slice::from_ref(&x0), cluster.value, tie_tol(cfg))? {
        s.witness_id = next_id;
        samples.push(s);
    }
    let hull = hull_contains_zero(&samples.iter().map(|s| s.lambda).collect::<Vec<_>>(), t.field(), tol)?;
    let v = match hull {
        HullTest::Contains(w) => verdict(
            Decision::OrthogonalCertified,
            Evidence::Caratheodory(CaratheodoryCertificate::from_weights(&w, &samples)),
            notes.clone(),
            cluster,
            tol,
        ),
        HullTest::Separated(sep) => {
            notes.push(format!(
                "numerical range reaches zero (support minimum {:e}) but the extracted witness misses it by {:e}",
                test.min_support, sep.margin
            ));
            verdict(Decision::Undetermined, Evidence::None, notes.clone(), cluster, tol)
        }
    };
    Ok((v, test, Some(x0)))
}

/// Decision with a precomputed attainment cluster of `T`; also returns the
/// samples behind it.
pub fn decide_with_cluster(
    t: &MultilinearMap,
    a: &MultilinearMap,
    cluster: &AttainmentCluster,
    cfg: &SolverConfig,
) -> Result<(OrthVerdict, Vec<OmegaSample>)> {
    t.check_compatible(a)?;
    let tol = hull_tol(a, cfg);
    let samples = omega_samples_for(t, a, cluster, cfg)?;
    let lambdas: Vec<C64> = samples.iter().map(|s| s.lambda).collect();
    let mut notes = vec![cluster.note.clone()];
    let sep = match hull_contains_zero(&lambdas, t.field(), tol)? {
        HullTest::Contains(w) => {
            let ev = Evidence::Caratheodory(CaratheodoryCertificate::from_weights(&w, &samples));
            return Ok((verdict(Decision::OrthogonalCertified, ev, notes, cluster, tol), samples));
        }
        HullTest::Separated(sep) => sep,
    };
    if let AttainmentRoute::Spectral { basis } = &cluster.route {
        if basis.len() > 1 {
            let (v, _, _) = hilbert_route(t, a, cluster, basis, samples.clone(), cfg, &mut notes)?;
            return Ok((v, samples));
        }
    }
    if samples_complete(cluster) {
        notes.push(format!("sampled Omega' is complete; hull misses zero by {:e}", sep.margin));
        let ev = separation(&sep, SeparationSource::CompleteSamples);
        return Ok((verdict(Decision::NotOrthogonalCertified, ev, notes, cluster, tol), samples));
    }
    // sampled attainment set: only a norm drop below |T| is conclusive
    let oracle = oracle_min_norm(t, a, cfg)?;
    notes.push(format!(
        "sample hull misses zero by {:e}; oracle minimum {:.12e} at lambda {} vs |T| {:.12e}",
        sep.margin, oracle.min_value, oracle.lambda_star, oracle.norm_t
    ));
    let decision = if oracle.is_below(cfg.tol_decision) {
        if oracle.heuristic {
            notes.push("norm drop measured with heuristic inner norms".into());
        }
        Decision::NotOrthogonalCertified
    } else {
        Decision::Undetermined
    };
    Ok((verdict(decision, Evidence::Oracle(oracle), notes, cluster, tol), samples))
}

/// Decides whether `T _|_ A` in the Birkhoff-James sense.
pub fn decide_orthogonality(t: &MultilinearMap, a: &MultilinearMap, cfg: &SolverConfig) -> Result<OrthVerdict> {
    cfg.validate()?;
    t.check_compatible(a)?;
    let cluster = attainment_set(t, cfg)?;
    Ok(decide_with_cluster(t, a, &cluster, cfg)?.0)
}

/// Result of the Hilbert-space decision together with its witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HilbertVerdict {
    pub verdict: OrthVerdict,
    /// Unit `x0` in the top singular subspace with `<A x0, T x0> ~ 0`.
    pub witness: Option<Vec<C64>>,
    /// `|<A x0, T x0>|`.
    pub witness_residual: Option<f64>,
    pub range: RangeTest,
    pub top_dimension: usize,
}

/// Hilbert-space decision for linear maps: `T _|_ A` iff zero lies in
/// `W(V* T* A V)` with `V` spanning the top right singular subspace of `T`.
pub fn bs_decide_hilbert(t: &MultilinearMap, a: &MultilinearMap, cfg: &SolverConfig) -> Result<HilbertVerdict> {
    cfg.validate()?;
    t.check_compatible(a)?;
    if t.k() != 1 {
        return Err(Error::NotLinear(t.k()));
    }
    if !t.is_hilbert_operator() {
        return Err(Error::NonHilbert);
    }
    let cluster = attainment_set(t, cfg)?;
    let basis = cluster.top_subspace().expect("spectral route for Hilbert operators").to_vec();
    let samples = omega_samples_for(t, a, &cluster, cfg)?;
    let mut notes = vec![cluster.note.clone()];
    let (v, range, x0) = hilbert_route(t, a, &cluster, &basis, samples, cfg, &mut notes)?;
    let (witness, witness_residual) = match x0 {
        Some(x0) => {
            let tx = t.evaluate(&x0)?;
            let ax = a.evaluate(&x0)?;
            let ip: C64 = ax.iter().zip(&tx).map(|(p, q)| p * q.conj()).sum();
            (Some(x0.parts[0].clone()), Some(ip.norm()))
        }
        None => (None, None),
    };
    Ok(HilbertVerdict { verdict: v, witness, witness_residual, range, top_dimension: basis.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{Field, SpaceSpec};
    use approx::assert_abs_diff_eq;

    fn real(e: &[f64]) -> MultilinearMap {
        MultilinearMap::real_matrix(2, 2, e).unwrap()
    }

    fn complex(e: &[C64]) -> MultilinearMap {
        MultilinearMap::matrix(2, 2, Field::Complex, e.to_vec()).unwrap()
    }

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn diag_and_identity_not_orthogonal() {
        let v = decide_orthogonality(&real(&[2.0, 0.0, 0.0, 1.0]), &real(&[1.0, 0.0, 0.0, 1.0]), &cfg()).unwrap();
        assert_eq!(v.decision, Decision::NotOrthogonalCertified);
        match v.evidence {
            Evidence::Separation { direction, margin, .. } => {
                assert_abs_diff_eq!(margin, 1.0, epsilon = 1e-12);
                assert!((direction + 1.0).norm() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn disjoint_coordinates_are_orthogonal() {
        let v = decide_orthogonality(&real(&[1.0, 0.0, 0.0, 0.0]), &real(&[0.0, 0.0, 0.0, 1.0]), &cfg()).unwrap();
        assert!(v.is_orthogonal());
        match &v.evidence {
            Evidence::Caratheodory(c) => {
                assert!(c.combination().norm() <= v.hull_tol);
                assert_abs_diff_eq!(c.weights.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn identity_against_signature_is_orthogonal() {
        let v = decide_orthogonality(&real(&[1.0, 0.0, 0.0, 1.0]), &real(&[1.0, 0.0, 0.0, -1.0]), &cfg()).unwrap();
        assert!(v.is_orthogonal());
    }

    #[test]
    fn identity_against_imaginary_diagonal_has_witness() {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let t = complex(&[one, zero, zero, one]);
        let a = complex(&[i, zero, zero, -i]);
        let h = bs_decide_hilbert(&t, &a, &cfg()).unwrap();
        assert!(h.verdict.is_orthogonal());
        assert!(h.witness_residual.unwrap() <= 1e-8);
        assert_eq!(h.top_dimension, 2);
        assert!(decide_orthogonality(&t, &a, &cfg()).unwrap().is_orthogonal());
    }

    #[test]
    fn identity_against_identity_not_orthogonal_via_range() {
        let t = real(&[1.0, 0.0, 0.0, 1.0]);
        let v = decide_orthogonality(&t, &t, &cfg()).unwrap();
        assert_eq!(v.decision, Decision::NotOrthogonalCertified);
        match v.evidence {
            Evidence::Separation { theta: Some(th), margin, source, .. } => {
                assert_eq!(source, SeparationSource::NumericalRange);
                assert_abs_diff_eq!(margin, 1.0, epsilon = 1e-12);
                assert!(th.cos() < -0.99);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sampled_route_uses_the_oracle() {
        let e = SpaceSpec::euclidean(2, Field::Real);
        let c = SpaceSpec::euclidean(1, Field::Real);
        let t = MultilinearMap::from_real(c, vec![e, e], &[1.0, 0.0, 0.0, 0.5]).unwrap();
        let a = MultilinearMap::from_real(c, vec![e, e], &[1.0, 0.0, 0.0, 0.0]).unwrap();
        let v = decide_orthogonality(&t, &a, &cfg()).unwrap();
        assert_eq!(v.decision, Decision::NotOrthogonalCertified);
        assert!(matches!(v.evidence, Evidence::Oracle(_)));
        let b = MultilinearMap::from_real(c, vec![e, e], &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(decide_orthogonality(&t, &b, &cfg()).unwrap().is_orthogonal());
    }

    #[test]
    fn incompatible_maps_rejected() {
        let t = real(&[1.0, 0.0, 0.0, 1.0]);
        let a = MultilinearMap::real_matrix(2, 3, &[0.0; 6]).unwrap();
        assert!(matches!(decide_orthogonality(&t, &a, &cfg()), Err(Error::ShapeMismatch(_))));
        let z = real(&[0.0; 4]);
        assert_eq!(decide_orthogonality(&z, &t, &cfg()), Err(Error::ZeroMap));
    }
}
