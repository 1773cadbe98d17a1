//! Right additivity of orthogonality and the property that characterizes
//! smooth maps: `T _|_ A` implies `A x0 _|_ T x0` for some `x0 in M_T`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{probe_seed, smooth_with_cluster, SmoothDecision};
use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::linalg::basis_matrix;
use crate::multilinear::{attainment_set, random_like, AttainmentCluster, MultilinearMap, TuplePoint};
use crate::orthogonality::{decide_with_cluster, Decision};
use crate::spaces::{pnorm, support_functionals, SupportFunctional, C64};

/// Seed offset separating additivity probes from smoothness probes.
const ADDITIVITY_SALT: u64 = 0xA11D;

/// `A - (y0(A x0) / |T|) T`, which satisfies `y0(A' x0) = 0` when
/// `y0 in J(T x0)` and `|T x0| = |T|`.
pub fn project_out(t: &MultilinearMap, a: &MultilinearMap, x0: &TuplePoint, y0: &SupportFunctional, norm: f64) -> Result<MultilinearMap> {
    let c = y0.action(&a.evaluate(x0)?) / norm;
    a.add_scaled(-c, t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitCounterexample {
    pub a1: MultilinearMap,
    pub a2: MultilinearMap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitCheck {
    pub a1: MultilinearMap,
    pub a2: MultilinearMap,
    pub a1_decision: Decision,
    pub a2_decision: Decision,
    pub sum_decision: Decision,
}

impl SplitCheck {
    pub fn is_counterexample(&self) -> bool {
        self.a1_decision == Decision::OrthogonalCertified
            && self.a2_decision == Decision::OrthogonalCertified
            && self.sum_decision == Decision::NotOrthogonalCertified
    }
}

impl SplitCounterexample {
    pub fn check(&self, t: &MultilinearMap, cluster: &AttainmentCluster, cfg: &SolverConfig) -> Result<SplitCheck> {
        let sum = self.a1.add_scaled(C64::new(1.0, 0.0), &self.a2)?;
        Ok(SplitCheck {
            a1: self.a1.clone(),
            a2: self.a2.clone(),
            a1_decision: decide_with_cluster(t, &self.a1, cluster, cfg)?.0.decision,
            a2_decision: decide_with_cluster(t, &self.a2, cluster, cfg)?.0.decision,
            sum_decision: decide_with_cluster(t, &sum, cluster, cfg)?.0.decision,
        })
    }
}

/// For a Euclidean linear `T` whose top singular subspace has dimension at
/// least two, with orthonormal `v1, v2` in it and `V = [v1 v2]`, the maps
/// `A_i = T V C_i V* / |T|^2` have compressed pairs `V* T* A_i V = C_i`.
/// With `C_{1,2} = [[1/2, +-2], [0, 1/2]]` both ranges are discs around 1/2
/// of radius 1, while `C_1 + C_2 = I` has range `{1}`.
pub fn nilpotent_split_counterexample(t: &MultilinearMap, cfg: &SolverConfig) -> Result<Option<SplitCounterexample>> {
    if t.k() != 1 {
        return Err(Error::NotLinear(t.k()));
    }
    if !t.is_hilbert_operator() {
        return Err(Error::NonHilbert);
    }
    let cluster = attainment_set(t, cfg)?;
    let basis = match cluster.top_subspace() {
        Some(b) if b.len() >= 2 => b[..2].to_vec(),
        _ => return Ok(None),
    };
    let v = basis_matrix(&basis);
    let tm = t.as_matrix()?;
    let sq = C64::new(cluster.value * cluster.value, 0.0);
    let make = |off: f64| -> Result<MultilinearMap> {
        let c = DMatrix::from_row_slice(2, 2, &[C64::new(0.5, 0.0), C64::new(off, 0.0), C64::new(0.0, 0.0), C64::new(0.5, 0.0)]);
        let m = &tm * &v * c * v.adjoint() / sq;
        let entries: Vec<C64> = (0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| (i, j))).map(|(i, j)| m[(i, j)]).collect();
        let entries = if t.field().is_real() { entries.iter().map(|z| C64::new(z.re, 0.0)).collect() } else { entries };
        MultilinearMap::new(*t.codomain(), t.factors().to_vec(), entries)
    };
    Ok(Some(SplitCounterexample { a1: make(2.0)?, a2: make(-2.0)? }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdditivityReport {
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    /// First random pair `A1', A2'` whose sum was not certified orthogonal.
    pub first_failure: Option<(MultilinearMap, MultilinearMap)>,
    /// The nilpotent split, when `T` admits it.
    pub split: Option<SplitCheck>,
}

/// Random test of right additivity: each trial draws `A1, A2`, projects
/// both onto maps orthogonal to `T` at the representative `x0`, and checks
/// that `T _|_ A1' + A2'`.
pub fn right_additivity_probe(t: &MultilinearMap, trials: usize, cfg: &SolverConfig) -> Result<AdditivityReport> {
    cfg.validate()?;
    let cluster = attainment_set(t, cfg)?;
    let x0 = cluster.representative.clone();
    let y = t.evaluate(&x0)?;
    let y0 = support_functionals(&y, t.codomain())?.extreme[0].clone();
    let norm = pnorm(&y, t.codomain().p);
    let mut passed = 0;
    let mut first_failure = None;
    for r in 0..trials {
        let a1 = project_out(t, &random_like(t, probe_seed(cfg.seed ^ ADDITIVITY_SALT, 2 * r)), &x0, &y0, norm)?;
        let a2 = project_out(t, &random_like(t, probe_seed(cfg.seed ^ ADDITIVITY_SALT, 2 * r + 1)), &x0, &y0, norm)?;
        let sum = a1.add_scaled(C64::new(1.0, 0.0), &a2)?;
        if decide_with_cluster(t, &sum, &cluster, cfg)?.0.is_orthogonal() {
            passed += 1;
        } else if first_failure.is_none() {
            first_failure = Some((a1, a2));
        }
    }
    let split = if t.is_hilbert_operator() {
        match nilpotent_split_counterexample(t, cfg)? {
            Some(s) => Some(s.check(t, &cluster, cfg)?),
            None => None,
        }
    } else {
        None
    };
    Ok(AdditivityReport { trials, passed, failed: trials - passed, first_failure, split })
}

/// Witness of `A x0 _|_ T x0` in the codomain: `x0 in M_T` and the support
/// functional of `T x0` annihilating `A x0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BsCertificate {
    pub x0: TuplePoint,
    pub functional: SupportFunctional,
    /// `| |T x0| - |T| |`.
    pub attain_residual: f64,
    /// `|y0(A x0)|`.
    pub orth_residual: f64,
}

/// For smooth `T` with `T _|_ A`, produces `x0 in M_T` with `A x0 _|_ T x0`.
pub fn bs_property_certificate(t: &MultilinearMap, a: &MultilinearMap, cfg: &SolverConfig) -> Result<BsCertificate> {
    cfg.validate()?;
    t.check_compatible(a)?;
    let cluster = attainment_set(t, cfg)?;
    let smooth = smooth_with_cluster(t, &cluster, cfg)?;
    if smooth.decision != SmoothDecision::Smooth {
        return Err(Error::Precondition(format!("T is not certified smooth (decision: {})", smooth.decision)));
    }
    let (v, _) = decide_with_cluster(t, a, &cluster, cfg)?;
    if !v.is_orthogonal() {
        return Err(Error::Precondition(format!("T is not certified orthogonal to A (decision: {})", v.decision)));
    }
    let x0 = cluster.representative.clone();
    let y = t.evaluate(&x0)?;
    let functional = support_functionals(&y, t.codomain())?.extreme[0].clone();
    let orth_residual = functional.action(&a.evaluate(&x0)?).norm();
    Ok(BsCertificate {
        attain_residual: (pnorm(&y, t.codomain().p) - cluster.value).abs(),
        x0,
        functional,
        orth_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::Field;

    #[test]
    fn projection_is_identity_on_annihilated_maps() {
        let t = MultilinearMap::real_matrix(2, 2, &[2.0, 0.0, 0.0, 1.0]).unwrap();
        let a = MultilinearMap::real_matrix(2, 2, &[0.0, 1.0, 3.0, 5.0]).unwrap();
        let x0 = TuplePoint::from_real(&[&[1.0, 0.0]]);
        let y0 = SupportFunctional { coeffs: vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)] };
        assert_eq!(project_out(&t, &a, &x0, &y0, 2.0).unwrap(), a);
    }

    #[test]
    fn identity_split_is_a_counterexample() {
        let cfg = SolverConfig::default();
        let t = MultilinearMap::matrix(
            2,
            2,
            Field::Complex,
            vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        )
        .unwrap();
        let report = right_additivity_probe(&t, 5, &cfg).unwrap();
        assert_eq!(report.passed, 5);
        assert!(report.split.unwrap().is_counterexample());
    }

    #[test]
    fn smooth_certificate() {
        let cfg = SolverConfig::default();
        let t = MultilinearMap::real_matrix(2, 2, &[2.0, 0.0, 0.0, 1.0]).unwrap();
        let a = MultilinearMap::real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let c = bs_property_certificate(&t, &a, &cfg).unwrap();
        assert!(c.orth_residual < 1e-12 && c.attain_residual < 1e-12);
        let i2 = MultilinearMap::real_matrix(2, 2, &[1.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(bs_property_certificate(&i2, &a, &cfg), Err(Error::Precondition(_))));
    }
}
