//! Exhaustive grid search over the product of unit spheres.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::ascent::value_at;
use super::map::{MultilinearMap, TuplePoint};
use crate::error::{Error, Result};
use crate::spaces::{normalize, Exponent, Field, SpaceSpec, C64};

pub const DEFAULT_GRID_CAP: u128 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BruteForceNorm {
    /// Max of `|T x|` over the grid; a lower bound on `|T|`.
    pub value: f64,
    pub argmax: TuplePoint,
    /// `|T| <= value + error_bound` whenever the bound is finite.
    pub error_bound: f64,
}

/// Grid on one unit sphere together with the covering radius it achieves.
struct SphereGrid {
    points: Vec<Vec<C64>>,
    radius: f64,
}

fn grid_len(spec: &SpaceSpec, density: usize) -> u128 {
    let n = spec.dim as u32;
    let d = density as u128;
    if n == 1 {
        return 1;
    }
    match (spec.p.is_two(), spec.field) {
        (true, Field::Real) => d.pow(n - 1),
        (true, Field::Complex) => d.pow(2 * (n - 1)),
        // cube surface lattice, loosely bounded
        (false, Field::Real) => (2 * d + 1).pow(n),
        (false, Field::Complex) => (d + 1).pow(n) * d.pow(n - 1),
    }
}

fn linspace(lo: f64, hi: f64, count: usize, inclusive: bool) -> Vec<f64> {
    let steps = if inclusive { (count - 1).max(1) } else { count };
    (0..count).map(|i| lo + (hi - lo) * i as f64 / steps as f64).collect()
}

/// Unit vector from hyperspherical angles `phi_1..phi_{n-1}`.
fn from_angles(angles: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(angles.len() + 1);
    let mut s = 1.0;
    for &a in angles {
        out.push(s * a.cos());
        s *= a.sin();
    }
    out.push(s);
    out
}

fn product<T: Clone>(axes: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut acc: Vec<Vec<T>> = vec![vec![]];
    for axis in axes {
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect();
    }
    acc
}

fn sphere_grid(spec: &SpaceSpec, density: usize) -> SphereGrid {
    let n = spec.dim;
    let one = C64::new(1.0, 0.0);
    if n == 1 {
        return SphereGrid { points: vec![vec![one]], radius: 0.0 };
    }
    let d = density.max(2);
    match (spec.p.is_two(), spec.field) {
        (true, Field::Real) => {
            // the norm is even in each factor, so the last angle covers [0, pi)
            let mut axes = vec![linspace(0.0, PI, d, true); n - 2];
            axes.push(linspace(0.0, PI, d, false));
            let points = product(&axes)
                .into_iter()
                .map(|a| from_angles(&a).into_iter().map(|v| C64::new(v, 0.0)).collect())
                .collect();
            let radius = (n - 2) as f64 * PI / (d - 1) as f64 / 2.0 + PI / d as f64 / 2.0;
            SphereGrid { points, radius }
        }
        (true, Field::Complex) => {
            // moduli on the positive orthant, phases relative to the first coordinate
            let mut axes = vec![linspace(0.0, PI / 2.0, d, true); n - 1];
            axes.extend(vec![linspace(0.0, 2.0 * PI, d, false); n - 1]);
            let points = product(&axes)
                .into_iter()
                .map(|a| {
                    let moduli = from_angles(&a[..n - 1]);
                    moduli
                        .iter()
                        .enumerate()
                        .map(|(i, &r)| if i == 0 { C64::new(r, 0.0) } else { C64::from_polar(r, a[n - 2 + i]) })
                        .collect()
                })
                .collect();
            let radius = (n - 1) as f64 * (PI / 2.0 / (d - 1) as f64 / 2.0 + PI / d as f64);
            SphereGrid { points, radius }
        }
        (false, field) => {
            let d = d as i64;
            let lo = if field == Field::Real { -d } else { 0 };
            let axes: Vec<Vec<i64>> = vec![(lo..=d).collect(); n];
            let lattice: Vec<Vec<i64>> = product(&axes)
                .into_iter()
                .filter(|z| z.iter().map(|v| v.abs()).max() == Some(d))
                .filter(|z| field == Field::Complex || z.iter().find(|&&v| v != 0).is_some_and(|&v| v > 0))
                .collect();
            let phases = if field == Field::Complex {
                product(&vec![linspace(0.0, 2.0 * PI, d as usize, false); n - 1])
            } else {
                vec![vec![0.0; n - 1]]
            };
            let mut points = Vec::new();
            for z in &lattice {
                for ph in &phases {
                    let v: Vec<C64> = z
                        .iter()
                        .enumerate()
                        .map(|(i, &m)| if i == 0 { C64::new(m as f64, 0.0) } else { C64::from_polar(m as f64, ph[i - 1]) })
                        .collect();
                    if let Some(u) = normalize(&v, spec.p) {
                        points.push(u);
                    }
                }
            }
            let np = match spec.p {
                Exponent::Finite(p) => (n as f64).powf(1.0 / p),
                Exponent::Infinity => 1.0,
            };
            let mut radius = np / d as f64;
            if field == Field::Complex {
                radius += (n - 1) as f64 * 2.0 * PI / d as f64;
            }
            SphereGrid { points, radius }
        }
    }
}

/// Max of `|T x|` over a product of grids on the unit spheres.
///
/// `T` is Lipschitz on the product of unit spheres with constant `|T|` per
/// factor, so with covering radii `r_t` and `L = sum r_t` the true norm is at
/// most `value / (1 - L)`.
pub fn norm_bruteforce(map: &MultilinearMap, density: usize, cap: u128) -> Result<BruteForceNorm> {
    let size: u128 = map
        .factors()
        .iter()
        .map(|s| grid_len(s, density.max(2)))
        .try_fold(1u128, |acc, n| acc.checked_mul(n))
        .unwrap_or(u128::MAX);
    if size > cap {
        return Err(Error::GridTooLarge { size, cap });
    }
    let grids: Vec<SphereGrid> = map.factors().iter().map(|s| sphere_grid(s, density)).collect();
    let mut idx = vec![0usize; grids.len()];
    let total: usize = grids.iter().map(|g| g.points.len()).product();
    let mut best = (-1.0, TuplePoint::new(vec![]));
    for _ in 0..total {
        let x = TuplePoint::new(idx.iter().zip(&grids).map(|(&i, g)| g.points[i].clone()).collect());
        let v = value_at(map, &x);
        if v > best.0 {
            best = (v, x);
        }
        for t in (0..idx.len()).rev() {
            idx[t] += 1;
            if idx[t] < grids[t].points.len() {
                break;
            }
            idx[t] = 0;
        }
    }
    let lip: f64 = grids.iter().map(|g| g.radius).sum();
    let error_bound = if lip < 1.0 { best.0 * lip / (1.0 - lip) } else { f64::INFINITY };
    Ok(BruteForceNorm { value: best.0, argmax: best.1, error_bound })
}
