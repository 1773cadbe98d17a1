//! Multi-start alternating ascent for `max |T(x_1, ..., x_k)|` over the
//! product of unit spheres.
//!
//! Each sweep fixes all slots but one, so that `T(x) = M x_t` for a matrix
//! `M`. With `c` a support functional at `y = M x_t` and `g = c M`, the slot
//! is replaced by a norming vector of `g`. Then
//! `|M x_new| >= Re c(M x_new) = |g|_* >= Re g x_t = |M x_t|`, so the value
//! never decreases. For Euclidean factors this is the higher-order power
//! iteration `x_t <- M* y / |M* y|`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::map::{random_unit_point, MultilinearMap, TuplePoint};
use crate::config::SolverConfig;
use crate::spaces::{norming_vector, pnorm, C64};

/// Termination threshold on the per-sweep step length.
pub const STEP_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct AscentRun {
    pub point: TuplePoint,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Iterates after each sweep, only when recording was requested.
    pub trajectory: Vec<TuplePoint>,
}

fn sweep(map: &MultilinearMap, x: &mut TuplePoint) -> f64 {
    let m = map.codomain().dim;
    let mut step = 0.0;
    for slot in 0..map.k() {
        let n = map.factors()[slot].dim;
        let mat = map.partial(x, slot).expect("point shape matches map");
        let y: Vec<C64> = (0..m)
            .map(|j| (0..n).map(|i| mat[j * n + i] * x.parts[slot][i]).sum())
            .collect();
        let c = match norming_vector(&y, map.codomain().p.dual()) {
            Some(c) => c,
            None => continue,
        };
        let g: Vec<C64> = (0..n).map(|i| (0..m).map(|j| c[j] * mat[j * n + i]).sum()).collect();
        if let Some(next) = norming_vector(&g, map.factors()[slot].p) {
            // keep the incumbent on exact ties so the iteration cannot cycle
            let old_val: C64 = g.iter().zip(&x.parts[slot]).map(|(a, b)| a * b).sum();
            let new_val: C64 = g.iter().zip(&next).map(|(a, b)| a * b).sum();
            if new_val.re > old_val.re {
                step += next
                    .iter()
                    .zip(&x.parts[slot])
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                x.parts[slot] = next;
            }
        }
    }
    step
}

pub fn value_at(map: &MultilinearMap, x: &TuplePoint) -> f64 {
    pnorm(&map.evaluate(x).expect("point shape matches map"), map.codomain().p)
}

/// Runs the ascent from `start` (assumed unit).
pub fn ascend(map: &MultilinearMap, start: TuplePoint, max_iter: usize, record: bool) -> AscentRun {
    let mut x = start;
    let mut trajectory = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let step = sweep(map, &mut x);
        if record {
            trajectory.push(x.clone());
        }
        if step < STEP_TOL {
            converged = true;
            break;
        }
    }
    let value = value_at(map, &x);
    AscentRun { point: x, value, iterations, converged, trajectory }
}

/// Seed for restart `r`; distinct restarts draw from disjoint streams.
pub(crate) fn restart_rng(seed: u64, r: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(r as u64 + 1);
    rng
}

/// Runs `cfg.restarts` random starts plus `extra` warm starts, in parallel.
/// Output order is the start order, independent of scheduling.
pub fn multi_start(map: &MultilinearMap, cfg: &SolverConfig, extra: &[TuplePoint]) -> Vec<AscentRun> {
    let mut starts: Vec<TuplePoint> = extra.to_vec();
    starts.extend((0..cfg.restarts).map(|r| random_unit_point(map, &mut restart_rng(cfg.seed, r))));
    starts
        .into_par_iter()
        .map(|s| ascend(map, s, cfg.max_iter, false))
        .collect()
}
