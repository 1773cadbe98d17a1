//! Norm computation and the norm attainment set `M_T`.

use serde::{Deserialize, Serialize};

use super::ascent::{multi_start, value_at, AscentRun};
use super::map::{MultilinearMap, TuplePoint};
use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::linalg::{realify, top_singular};
use crate::spaces::{Exponent, Field, C64};

/// Orbit equality tolerance, per coordinate after phase normalization.
pub const ORBIT_TOL: f64 = 1e-7;
/// Largest vertex enumeration attempted by the exact polytope route.
pub const VERTEX_CAP: usize = 1 << 16;

/// How the attainment set was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AttainmentRoute {
    /// Euclidean linear map: `M_T` is the unit sphere of the top right
    /// singular subspace.
    Spectral { basis: Vec<Vec<C64>> },
    /// All factors l_1 or real l_inf: the norm is a maximum over vertex
    /// tuples of the unit balls and `M_T` is generated by the attaining ones.
    Vertex { vertices_checked: usize },
    /// Multi-start ascent; `M_T` is only sampled.
    Ascent { restarts: usize, converged: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttainmentCluster {
    pub value: f64,
    /// One phase-normalized unit tuple per distinct orbit found.
    pub maximizers: Vec<TuplePoint>,
    pub representative: TuplePoint,
    pub is_single_orbit: bool,
    /// True when `value` is exact and `maximizers` describe all of `M_T`.
    pub certified: bool,
    pub note: String,
    pub route: AttainmentRoute,
}

impl AttainmentCluster {
    pub fn top_subspace(&self) -> Option<&[Vec<C64>]> {
        match &self.route {
            AttainmentRoute::Spectral { basis } => Some(basis),
            _ => None,
        }
    }
}

/// Top singular value of a Euclidean linear map and an orthonormal basis of
/// the right singular subspace attaining it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopSubspace {
    pub sigma_max: f64,
    pub basis: Vec<Vec<C64>>,
}

pub fn top_right_singular_subspace(map: &MultilinearMap, tol_gap: f64) -> Result<TopSubspace> {
    if map.k() != 1 {
        return Err(Error::NotLinear(map.k()));
    }
    if !map.is_hilbert_operator() {
        return Err(Error::NonHilbert);
    }
    let top = top_singular(&map.as_matrix()?, tol_gap);
    let mut basis = top.basis;
    if map.field() == Field::Real {
        for v in basis.iter_mut() {
            realify(v);
        }
    }
    Ok(TopSubspace { sigma_max: top.sigma_max, basis })
}

fn dedup_orbits(points: impl IntoIterator<Item = TuplePoint>) -> Vec<TuplePoint> {
    let mut out: Vec<TuplePoint> = Vec::new();
    for p in points {
        let p = p.phase_normalized();
        if out.iter().all(|q| q.orbit_distance(&p) > ORBIT_TOL) {
            out.push(p);
        }
    }
    out
}

fn from_runs(runs: &[AscentRun], cfg: &SolverConfig) -> AttainmentCluster {
    let best = runs.iter().map(|r| r.value).fold(0.0, f64::max);
    let cutoff = best * (1.0 - cfg.tol_attain);
    let mut attaining: Vec<&AscentRun> = runs.iter().filter(|r| r.value >= cutoff).collect();
    // best first; ties keep start order
    attaining.sort_by(|a, b| b.value.total_cmp(&a.value));
    let maximizers = dedup_orbits(attaining.iter().map(|r| r.point.clone()));
    let converged = runs.iter().filter(|r| r.converged).count();
    let single = maximizers.len() == 1;
    let note = format!(
        "sampled: {} of {} restarts converged; {} distinct orbit(s) within relative {:e} of the best value",
        converged,
        runs.len(),
        maximizers.len(),
        cfg.tol_attain
    );
    AttainmentCluster {
        value: best,
        representative: maximizers[0].clone(),
        maximizers,
        is_single_orbit: single,
        certified: false,
        note,
        route: AttainmentRoute::Ascent { restarts: runs.len(), converged },
    }
}

/// Multi-start alternating ascent estimate of `|T|` and its maximizers.
pub fn norm_estimate(map: &MultilinearMap, cfg: &SolverConfig) -> Result<AttainmentCluster> {
    norm_estimate_from(map, cfg, &[])
}

/// As [`norm_estimate`], with additional warm starts.
pub fn norm_estimate_from(map: &MultilinearMap, cfg: &SolverConfig, warm: &[TuplePoint]) -> Result<AttainmentCluster> {
    if map.is_zero() {
        return Err(Error::ZeroMap);
    }
    let runs = multi_start(map, cfg, warm);
    Ok(from_runs(&runs, cfg))
}

fn vertex_route_applies(map: &MultilinearMap) -> Option<usize> {
    let mut count: usize = 1;
    for s in map.factors() {
        let per = match s.p {
            p if p.is_one() => s.dim,
            Exponent::Infinity if s.field == Field::Real => 1usize.checked_shl(s.dim as u32 - 1)?,
            _ => return None,
        };
        count = count.checked_mul(per)?;
    }
    (count <= VERTEX_CAP).then_some(count)
}

/// Vertices of the unit ball of one factor, one per orbit.
fn ball_vertices(dim: usize, p: Exponent) -> Vec<Vec<C64>> {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    if p.is_one() {
        (0..dim)
            .map(|i| {
                let mut v = vec![zero; dim];
                v[i] = one;
                v
            })
            .collect()
    } else {
        // sign vectors with a positive first coordinate
        (0..1usize << (dim - 1))
            .map(|mask| {
                (0..dim)
                    .map(|i| if i > 0 && mask >> (i - 1) & 1 == 1 { -one } else { one })
                    .collect()
            })
            .collect()
    }
}

fn vertex_attainment(map: &MultilinearMap, count: usize, tol_gap: f64) -> AttainmentCluster {
    let per: Vec<Vec<Vec<C64>>> = map.factors().iter().map(|s| ball_vertices(s.dim, s.p)).collect();
    let mut idx = vec![0usize; per.len()];
    let mut values = Vec::with_capacity(count);
    for _ in 0..count {
        let x = TuplePoint::new(idx.iter().zip(&per).map(|(&i, vs)| vs[i].clone()).collect());
        values.push((value_at(map, &x), x));
        for t in (0..idx.len()).rev() {
            idx[t] += 1;
            if idx[t] < per[t].len() {
                break;
            }
            idx[t] = 0;
        }
    }
    let best = values.iter().map(|(v, _)| *v).fold(0.0, f64::max);
    let maximizers: Vec<TuplePoint> = values
        .into_iter()
        .filter(|(v, _)| *v >= best * (1.0 - tol_gap))
        .map(|(_, x)| x.phase_normalized())
        .collect();
    let single = maximizers.len() == 1;
    AttainmentCluster {
        value: best,
        representative: maximizers[0].clone(),
        note: format!(
            "certified by vertex enumeration: {} of {} vertex tuples attain the norm",
            maximizers.len(),
            count
        ),
        maximizers,
        is_single_orbit: single,
        certified: true,
        route: AttainmentRoute::Vertex { vertices_checked: count },
    }
}

/// The norm attainment set, certified where an exact route exists.
pub fn attainment_set(map: &MultilinearMap, cfg: &SolverConfig) -> Result<AttainmentCluster> {
    if map.is_zero() {
        return Err(Error::ZeroMap);
    }
    if map.is_hilbert_operator() {
        let top = top_right_singular_subspace(map, cfg.tol_gap)?;
        let maximizers: Vec<TuplePoint> =
            top.basis.iter().map(|v| TuplePoint::single(v.clone()).phase_normalized()).collect();
        let dim = top.basis.len();
        let note = if dim == map.factors()[0].dim {
            "certified: attainment set is the full unit sphere".to_string()
        } else if dim == 1 {
            "certified: attainment set is a single unimodular orbit".to_string()
        } else {
            format!("certified: attainment set is the unit sphere of a {dim}-dimensional subspace")
        };
        return Ok(AttainmentCluster {
            value: top.sigma_max,
            representative: maximizers[0].clone(),
            maximizers,
            is_single_orbit: dim == 1,
            certified: true,
            note,
            route: AttainmentRoute::Spectral { basis: top.basis },
        });
    }
    if let Some(count) = vertex_route_applies(map) {
        return Ok(vertex_attainment(map, count, cfg.tol_gap));
    }
    norm_estimate(map, cfg)
}

/// `|T|` when an exact route is available.
pub fn exact_norm(map: &MultilinearMap) -> Option<f64> {
    if map.is_hilbert_operator() {
        return Some(crate::linalg::spectral_norm(&map.as_matrix().ok()?));
    }
    let count = vertex_route_applies(map)?;
    Some(vertex_attainment(map, count, 0.0).value)
}
