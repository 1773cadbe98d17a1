//! Samples of `Omega'(T, A) = {y*(A x) : x in M_T, y* in J(T x)}`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::range::boundary_generators;
use crate::config::SolverConfig;
use crate::error::Result;
use crate::linalg::{compress, lift};
use crate::multilinear::{attainment_set, AttainmentCluster, AttainmentRoute, MultilinearMap, TuplePoint};
use crate::spaces::{pnorm, support_functionals_with_tol, SupportFunctional, C64, TOL_TIE};

/// Angles used for complex circle slots of l_1 support sets.
pub(crate) const CIRCLE_SAMPLES: usize = 64;
/// Angles used for boundary generators of a compressed numerical range.
pub(crate) const BOUNDARY_SAMPLES: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaSample {
    pub lambda: C64,
    pub witness: TuplePoint,
    pub functional: SupportFunctional,
    /// `| |T x| - |T| |` at the witness.
    pub attain_residual: f64,
    /// Index of the witness among the distinct witnesses used.
    pub witness_id: usize,
}

/// `V* T* A V / |T|` for a Euclidean linear pair and a basis `V` of the top
/// singular subspace of `T`; its numerical range is `Omega'(T, A)`.
pub(crate) fn compressed_pair(t: &MultilinearMap, a: &MultilinearMap, basis: &[Vec<C64>], norm: f64) -> Result<DMatrix<C64>> {
    let ta = t.as_matrix()?.adjoint() * a.as_matrix()?;
    Ok(compress(&ta, basis) / C64::new(norm, 0.0))
}

/// Witnesses covering `M_T` as far as the hull of `Omega'` is concerned.
///
/// For a top singular subspace of dimension at least two, the basis vectors
/// alone would miss most of the range, so the boundary generators of the
/// compressed range are added.
fn witnesses(t: &MultilinearMap, a: &MultilinearMap, cluster: &AttainmentCluster) -> Result<Vec<TuplePoint>> {
    let mut out = cluster.maximizers.clone();
    if let AttainmentRoute::Spectral { basis } = &cluster.route {
        if basis.len() >= 2 {
            let b = compressed_pair(t, a, basis, cluster.value)?;
            for z in boundary_generators(&b, t.field(), BOUNDARY_SAMPLES) {
                out.push(TuplePoint::single(lift(basis, &z)));
            }
        }
    }
    Ok(out)
}

/// Evaluates `Omega'` samples at the given witnesses: every generator of
/// `J(T x)` relevant for the hull contributes one sample.
pub fn omega_at(t: &MultilinearMap, a: &MultilinearMap, points: &[TuplePoint], norm: f64, tie_tol: f64) -> Result<Vec<OmegaSample>> {
    t.check_compatible(a)?;
    let mut out = Vec::new();
    for (id, x) in points.iter().enumerate() {
        let y = t.evaluate(x)?;
        let v = a.evaluate(x)?;
        let attain_residual = (pnorm(&y, t.codomain().p) - norm).abs();
        let set = support_functionals_with_tol(&y, t.codomain(), tie_tol)?;
        for f in set.hull_generators(&v, CIRCLE_SAMPLES) {
            out.push(OmegaSample {
                lambda: f.action(&v),
                witness: x.clone(),
                functional: f,
                attain_residual,
                witness_id: id,
            });
        }
    }
    Ok(out)
}

/// Samples of `Omega'(T, A)` using a precomputed attainment cluster of `T`.
pub fn omega_samples_for(t: &MultilinearMap, a: &MultilinearMap, cluster: &AttainmentCluster, cfg: &SolverConfig) -> Result<Vec<OmegaSample>> {
    let pts = witnesses(t, a, cluster)?;
    omega_at(t, a, &pts, cluster.value, TOL_TIE.max(cfg.tol_attain))
}

pub fn omega_samples(t: &MultilinearMap, a: &MultilinearMap, cfg: &SolverConfig) -> Result<Vec<OmegaSample>> {
    cfg.validate()?;
    t.check_compatible(a)?;
    let cluster = attainment_set(t, cfg)?;
    omega_samples_for(t, a, &cluster, cfg)
}

/// Largest pairwise distance between sampled values.
pub fn spread(samples: &[OmegaSample]) -> f64 {
    let mut best: f64 = 0.0;
    for (i, s) in samples.iter().enumerate() {
        for r in &samples[i + 1..] {
            best = best.max((s.lambda - r.lambda).norm());
        }
    }
    best
}
