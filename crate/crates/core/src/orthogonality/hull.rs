//! Zero-membership of the convex hull of finitely many scalars, with
//! Caratheodory weights on success and a separating direction on failure.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaces::{Field, C64};

/// Collinearity guard for orientation tests, relative to the squared scale.
const COLLINEAR_EPS: f64 = 1e-12;

/// At most three indices with convex weights combining to (nearly) zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullWeights {
    pub indices: Vec<usize>,
    pub weights: Vec<f64>,
}

impl HullWeights {
    pub fn combination(&self, points: &[C64]) -> C64 {
        self.indices.iter().zip(&self.weights).map(|(&i, &w)| points[i] * w).sum()
    }
}

/// A unit scalar `u` with `Re(conj(u) * lambda) <= -margin` for every point,
/// i.e. `u` points from the hull toward the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparatingDirection {
    pub direction: C64,
    pub margin: f64,
}

impl SeparatingDirection {
    /// Smallest slack `-Re(conj(u) lambda)` over the points.
    pub fn recompute_margin(&self, points: &[C64]) -> f64 {
        points
            .iter()
            .map(|l| -(self.direction.conj() * l).re)
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum HullTest {
    Contains(HullWeights),
    Separated(SeparatingDirection),
}

impl HullTest {
    pub fn contains(&self) -> bool {
        matches!(self, HullTest::Contains(_))
    }
}

fn cross(o: C64, a: C64, b: C64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Counter-clockwise hull vertices (as indices into `pts`), collinear points dropped.
fn convex_hull(pts: &[C64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| {
        pts[a].re.total_cmp(&pts[b].re).then(pts[a].im.total_cmp(&pts[b].im)).then(a.cmp(&b))
    });
    order.dedup_by(|a, b| pts[*a] == pts[*b]);
    if order.len() < 3 {
        return order;
    }
    let scale = pts.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let eps = COLLINEAR_EPS * scale * scale;
    let mut hull: Vec<usize> = Vec::with_capacity(2 * order.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &usize>> =
            if pass == 0 { Box::new(order.iter()) } else { Box::new(order.iter().rev()) };
        for &i in iter {
            while hull.len() >= start + 2
                && cross(pts[hull[hull.len() - 2]], pts[hull[hull.len() - 1]], pts[i]) <= eps
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    if hull.len() == 2 && hull[0] == hull[1] {
        hull.pop();
    }
    hull
}

/// Nearest point to the origin on segment `[a, b]`, as the weight on `b`.
fn segment_param(a: C64, b: C64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return 0.0;
    }
    (-(a.re * d.re + a.im * d.im) / len2).clamp(0.0, 1.0)
}

fn two_point(i: usize, j: usize, t: f64) -> HullWeights {
    if t == 0.0 {
        HullWeights { indices: vec![i], weights: vec![1.0] }
    } else if t == 1.0 {
        HullWeights { indices: vec![j], weights: vec![1.0] }
    } else {
        HullWeights { indices: vec![i, j], weights: vec![1.0 - t, t] }
    }
}

/// Barycentric weights of `p` in triangle `(a, b, c)`.
fn barycentric_of(a: C64, b: C64, c: C64, p: C64, det: f64) -> [f64; 3] {
    let wa = cross(p, b, c) / det;
    let wb = cross(a, p, c) / det;
    [wa, wb, 1.0 - wa - wb]
}

/// Barycentric weights of the origin in triangle `(a, b, c)`, with two
/// steps of iterative refinement for thin triangles.
fn barycentric(a: C64, b: C64, c: C64) -> Option<[f64; 3]> {
    let det = cross(a, b, c);
    if det.abs() <= f64::EPSILON * (a.norm() + b.norm() + c.norm()).powi(2) {
        return None;
    }
    let zero = C64::new(0.0, 0.0);
    let base = barycentric_of(a, b, c, zero, det);
    let mut w = base;
    for _ in 0..2 {
        let r = a * w[0] + b * w[1] + c * w[2];
        let d = barycentric_of(a, b, c, r, det);
        for i in 0..3 {
            w[i] -= d[i] - base[i];
        }
    }
    Some(w)
}

/// Decides `0 in conv(points)` up to `tol`.
///
/// Real field: an interval test with a certificate of at most two points.
/// Complex field: planar hull, fan triangulation for interior points and the
/// nearest boundary point otherwise. On failure the returned direction has
/// maximal margin, which equals the distance from the origin to the hull.
pub fn hull_contains_zero(points: &[C64], field: Field, tol: f64) -> Result<HullTest> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (near, near_abs) = points
        .iter()
        .enumerate()
        .map(|(i, z)| (i, z.norm()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty");
    if near_abs <= tol {
        return Ok(HullTest::Contains(HullWeights { indices: vec![near], weights: vec![1.0] }));
    }
    if field == Field::Real {
        return Ok(real_interval(points, tol));
    }
    let hull = convex_hull(points);
    if hull.len() >= 3 {
        let n = hull.len();
        let scale = points.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let inside = (0..n).all(|e| {
            cross(points[hull[e]], points[hull[(e + 1) % n]], C64::new(0.0, 0.0)) >= -COLLINEAR_EPS * scale * scale
        });
        if inside {
            let best = (1..n - 1)
                .filter_map(|i| {
                    let tri = [hull[0], hull[i], hull[i + 1]];
                    barycentric(points[tri[0]], points[tri[1]], points[tri[2]]).map(|w| (tri, w))
                })
                .max_by(|a, b| {
                    let ma = a.1.iter().cloned().fold(f64::INFINITY, f64::min);
                    let mb = b.1.iter().cloned().fold(f64::INFINITY, f64::min);
                    ma.total_cmp(&mb)
                });
            if let Some((tri, w)) = best {
                let clamped: Vec<f64> = w.iter().map(|v| v.max(0.0)).collect();
                let s: f64 = clamped.iter().sum();
                let cert = HullWeights {
                    indices: tri.to_vec(),
                    weights: clamped.iter().map(|v| v / s).collect(),
                };
                // the clamped weights only carry rounding error
                if cert.combination(points).norm() <= tol.max(COLLINEAR_EPS * scale) {
                    return Ok(HullTest::Contains(cert));
                }
            }
        }
    }
    // nearest point on the hull boundary (or the segment / point it degenerates to)
    let edges: Vec<(usize, usize)> = match hull.len() {
        1 => vec![(hull[0], hull[0])],
        2 => vec![(hull[0], hull[1])],
        n => (0..n).map(|e| (hull[e], hull[(e + 1) % n])).collect(),
    };
    let (i, j, t, dist) = edges
        .iter()
        .map(|&(i, j)| {
            let t = segment_param(points[i], points[j]);
            let p = points[i] * (1.0 - t) + points[j] * t;
            (i, j, t, p.norm())
        })
        .min_by(|a, b| a.3.total_cmp(&b.3))
        .expect("hull has an edge");
    if dist <= tol {
        return Ok(HullTest::Contains(two_point(i, j, t)));
    }
    let nearest = points[i] * (1.0 - t) + points[j] * t;
    Ok(HullTest::Separated(SeparatingDirection { direction: -nearest / nearest.norm(), margin: dist }))
}

fn real_interval(points: &[C64], tol: f64) -> HullTest {
    let (lo, lo_v) = points
        .iter()
        .enumerate()
        .map(|(i, z)| (i, z.re))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty");
    let (hi, hi_v) = points
        .iter()
        .enumerate()
        .map(|(i, z)| (i, z.re))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty");
    if lo_v > tol {
        return HullTest::Separated(SeparatingDirection { direction: C64::new(-1.0, 0.0), margin: lo_v });
    }
    if hi_v < -tol {
        return HullTest::Separated(SeparatingDirection { direction: C64::new(1.0, 0.0), margin: -hi_v });
    }
    if lo_v >= 0.0 {
        return HullTest::Contains(HullWeights { indices: vec![lo], weights: vec![1.0] });
    }
    if hi_v <= 0.0 {
        return HullTest::Contains(HullWeights { indices: vec![hi], weights: vec![1.0] });
    }
    let t = -lo_v / (hi_v - lo_v);
    HullTest::Contains(two_point(lo, hi, t))
}

/// Distance from `q` to `conv(points)`.
pub fn hull_distance(points: &[C64], q: C64) -> f64 {
    let shifted: Vec<C64> = points.iter().map(|p| p - q).collect();
    match hull_contains_zero(&shifted, Field::Complex, 0.0) {
        Ok(HullTest::Separated(s)) => s.margin,
        _ => 0.0,
    }
}
