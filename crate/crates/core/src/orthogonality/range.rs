//! Numerical ranges `W(B) = {x* B x : |x| = 1}` through their support
//! functions `h(theta) = lambda_max((e^{-i theta} B + e^{i theta} B*) / 2)`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::hull::{hull_contains_zero, HullTest};
use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::linalg::{compress, hermitian_eigen, lambda_max, quadratic_form, realify, rotated_hermitian_part, spectral_norm};
use crate::multilinear::{top_right_singular_subspace, MultilinearMap};
use crate::spaces::{Field, C64};

const GOLDEN: f64 = 0.618_033_988_749_894_9;
/// Angular resolution of the refined minimum of the support function.
const ANGLE_TOL: f64 = 1e-10;

/// Golden-section search for the minimum of a unimodal `f` on `[a, b]`.
pub(crate) fn golden_min(f: &mut impl FnMut(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

fn check_square(b: &DMatrix<C64>) -> Result<()> {
    if b.nrows() != b.ncols() || b.nrows() == 0 {
        return Err(Error::NotSquare { rows: b.nrows(), cols: b.ncols() });
    }
    Ok(())
}

pub fn support_value(b: &DMatrix<C64>, theta: f64) -> f64 {
    lambda_max(&rotated_hermitian_part(b, theta)).0
}

/// Outcome of the zero-membership test for a numerical range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeTest {
    pub contains_zero: bool,
    /// Refined `min_theta h(theta)`; zero is in the range iff this is `>= 0`.
    pub min_support: f64,
    pub theta_star: f64,
    /// `|B| * h / 2` for grid spacing `h`: how far the unrefined grid
    /// minimum may sit above the true one.
    pub lipschitz_slack: f64,
    /// Grid minimum minus the slack, a rigorous lower bound on `min h`.
    pub grid_lower_bound: f64,
}

/// Decides `0 in W(B)` for a complex square `B`.
///
/// The support function is sampled at `angle_count` angles; every grid local
/// minimum within `|B| h` of the smallest is refined by golden section.
/// Zero is reported inside iff the refined minimum is `>= -tol`.
pub fn numerical_range_contains_zero(b: &DMatrix<C64>, tol: f64, angle_count: usize) -> Result<RangeTest> {
    check_square(b)?;
    if angle_count < 3 {
        return Err(Error::Precondition("angle_count must be at least 3".into()));
    }
    let h = 2.0 * PI / angle_count as f64;
    let grid: Vec<f64> = (0..angle_count).map(|j| support_value(b, j as f64 * h)).collect();
    let gmin = grid.iter().cloned().fold(f64::INFINITY, f64::min);
    let norm = spectral_norm(b);
    let slack = norm * h / 2.0;
    let mut best = (0.0, f64::INFINITY);
    let mut eval = |t: f64| support_value(b, t);
    for j in 0..angle_count {
        let prev = grid[(j + angle_count - 1) % angle_count];
        let next = grid[(j + 1) % angle_count];
        if grid[j] <= prev && grid[j] <= next && grid[j] <= gmin + norm * h {
            let centre = j as f64 * h;
            let (t, v) = golden_min(&mut eval, centre - h, centre + h, ANGLE_TOL);
            let (t, v) = if grid[j] < v { (centre, grid[j]) } else { (t, v) };
            if v < best.1 {
                best = (t.rem_euclid(2.0 * PI), v);
            }
        }
    }
    Ok(RangeTest {
        contains_zero: best.1 >= -tol,
        min_support: best.1,
        theta_star: best.0,
        lipschitz_slack: slack,
        grid_lower_bound: gmin - slack,
    })
}

/// Real symmetric part `(B + B^T) / 2` of a real matrix stored as complex.
fn real_symmetric_part(b: &DMatrix<C64>) -> DMatrix<C64> {
    DMatrix::from_fn(b.nrows(), b.ncols(), |i, j| C64::new((b[(i, j)].re + b[(j, i)].re) / 2.0, 0.0))
}

/// Extreme eigenpairs of the real symmetric part, with real eigenvectors.
fn real_extremes(b: &DMatrix<C64>) -> ((f64, Vec<C64>), (f64, Vec<C64>)) {
    let (vals, mut vecs) = hermitian_eigen(&real_symmetric_part(b));
    for v in vecs.iter_mut() {
        realify(v);
    }
    let n = vals.len();
    ((vals[0], vecs[0].clone()), (vals[n - 1], vecs[n - 1].clone()))
}

/// For real `B` and real unit `x`, `x^T B x` ranges over the interval
/// `[lambda_min, lambda_max]` of the symmetric part.
pub fn real_range_test(b: &DMatrix<C64>, tol: f64) -> Result<RangeTest> {
    check_square(b)?;
    let ((lo, _), (hi, _)) = real_extremes(b);
    // h(0) = lambda_max and h(pi) = -lambda_min
    let (theta_star, min_support) = if hi <= -lo { (0.0, hi) } else { (PI, -lo) };
    Ok(RangeTest {
        contains_zero: lo <= tol && hi >= -tol,
        min_support,
        theta_star,
        lipschitz_slack: 0.0,
        grid_lower_bound: min_support,
    })
}

pub fn range_test(b: &DMatrix<C64>, field: Field, tol: f64, angle_count: usize) -> Result<RangeTest> {
    match field {
        Field::Real => real_range_test(b, tol),
        Field::Complex => numerical_range_contains_zero(b, tol, angle_count),
    }
}

/// Unit vectors whose quadratic forms are boundary points of the range:
/// the extreme eigenvectors of the symmetric part (real field) or the top
/// eigenvectors at `count` equispaced angles (complex field).
pub fn boundary_generators(b: &DMatrix<C64>, field: Field, count: usize) -> Vec<Vec<C64>> {
    match field {
        Field::Real => {
            let ((_, lo), (_, hi)) = real_extremes(b);
            vec![lo, hi]
        }
        Field::Complex => (0..count)
            .map(|j| lambda_max(&rotated_hermitian_part(b, 2.0 * PI * j as f64 / count as f64)).1)
            .collect(),
    }
}

fn unit(z: Vec<C64>) -> Vec<C64> {
    let n = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    z.into_iter().map(|c| c / n).collect()
}

/// Given unit `x1, x2` whose forms lie on opposite sides of the origin on a
/// common line, finds a unit vector in their span with `z* B z = 0`.
///
/// With `z(t) = cos t x1 + e^{i phi} sin t x2` the cross term is a real
/// multiple of the line direction for a suitable `phi`, so the form stays on
/// the line and bisection on `t` applies.
fn zero_on_segment(b: &DMatrix<C64>, x1: &[C64], x2: &[C64]) -> Vec<C64> {
    let w1 = quadratic_form(b, x1);
    let w2 = quadratic_form(b, x2);
    let eps = 1e-14 * (w1.norm() + w2.norm());
    if w1.norm() <= eps || w1 == w2 {
        return x1.to_vec();
    }
    if w2.norm() <= eps {
        return x2.to_vec();
    }
    let d = (w2 - w1) / (w2 - w1).norm();
    let bx2 = b * nalgebra::DVector::from_column_slice(x2);
    let bx1 = b * nalgebra::DVector::from_column_slice(x1);
    let alpha: C64 = x1.iter().zip(bx2.iter()).map(|(a, v)| a.conj() * v).sum();
    let beta: C64 = x2.iter().zip(bx1.iter()).map(|(a, v)| a.conj() * v).sum();
    let phi = -(d.conj() * alpha - d * beta.conj()).arg();
    let rot = C64::from_polar(1.0, phi);
    let at = |t: f64| -> Vec<C64> { x1.iter().zip(x2).map(|(a, c)| a * t.cos() + rot * c * t.sin()).collect() };
    let g = |t: f64| (d.conj() * quadratic_form(b, &at(t))).re;
    let (g0, g1) = (g(0.0), g(PI / 2.0));
    if g0.signum() == g1.signum() {
        // no sign change left after rounding: one endpoint is already at zero
        return if w1.norm() <= w2.norm() { x1.to_vec() } else { x2.to_vec() };
    }
    let (mut lo, mut hi) = if g0 < 0.0 { (0.0, PI / 2.0) } else { (PI / 2.0, 0.0) };
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if g(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    unit(at(0.5 * (lo + hi)))
}

fn shifted(b: &DMatrix<C64>, q: C64) -> DMatrix<C64> {
    let mut s = b.clone();
    for i in 0..s.nrows() {
        s[(i, i)] -= q;
    }
    s
}

/// A unit vector `z` with `z* B z` as close to zero as the construction
/// allows, together with `|z* B z|`. Meant for ranges containing zero.
pub fn range_witness(b: &DMatrix<C64>, field: Field) -> Result<(Vec<C64>, f64)> {
    check_square(b)?;
    let residual = |z: &[C64]| quadratic_form(b, z).norm();
    if field == Field::Real {
        let ((lo, vlo), (hi, vhi)) = real_extremes(b);
        let z = if lo >= 0.0 {
            vlo
        } else if hi <= 0.0 {
            vhi
        } else {
            let t = (-lo / hi).sqrt().atan();
            unit(vlo.iter().zip(&vhi).map(|(a, c)| a * t.cos() + c * t.sin()).collect())
        };
        let r = residual(&z);
        return Ok((z, r));
    }
    let mut count = 64;
    loop {
        let gens = boundary_generators(b, field, count);
        let pts: Vec<C64> = gens.iter().map(|z| quadratic_form(b, z)).collect();
        match hull_contains_zero(&pts, Field::Complex, 0.0)? {
            HullTest::Contains(w) => {
                let (indices, weights): (Vec<usize>, Vec<f64>) =
                    w.indices.iter().zip(&w.weights).filter(|(_, &v)| v > 0.0).map(|(&i, &v)| (i, v)).unzip();
                let w = super::hull::HullWeights { indices, weights };
                let z = match w.indices.len() {
                    1 => gens[w.indices[0]].clone(),
                    2 => zero_on_segment(b, &gens[w.indices[0]], &gens[w.indices[1]]),
                    _ => {
                        let (ia, ib, ic) = (w.indices[0], w.indices[1], w.indices[2]);
                        let (wb, wc) = (w.weights[1], w.weights[2]);
                        if wb + wc == 0.0 {
                            gens[ia].clone()
                        } else {
                            let q = (pts[ib] * wb + pts[ic] * wc) / (wb + wc);
                            let zq = zero_on_segment(&shifted(b, q), &gens[ib], &gens[ic]);
                            zero_on_segment(b, &gens[ia], &zq)
                        }
                    }
                };
                let r = residual(&z);
                return Ok((z, r));
            }
            HullTest::Separated(sep) => {
                if count < 4096 {
                    count *= 4;
                    continue;
                }
                // zero sits in the thin band between the polygon and the range:
                // return the polygon point nearest to it
                let q = -sep.direction * sep.margin;
                let (i, j) = nearest_edge(&pts, q);
                let z = zero_on_segment(&shifted(b, q), &gens[i], &gens[j]);
                let r = residual(&z);
                return Ok((z, r));
            }
        }
    }
}

fn nearest_edge(pts: &[C64], q: C64) -> (usize, usize) {
    let n = pts.len();
    (0..n)
        .map(|i| {
            let (a, c) = (pts[i], pts[(i + 1) % n]);
            let d = c - a;
            let t = if d.norm_sqr() == 0.0 {
                0.0
            } else {
                (((q - a).conj() * d).re / d.norm_sqr()).clamp(0.0, 1.0)
            };
            (i, (a + d * t - q).norm())
        })
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .map(|(i, _)| (i, (i + 1) % n))
        .expect("nonempty")
}

/// Outer polygonal description of a numerical range: the half-planes
/// `Re(e^{-i theta_j} w) <= support_values[j]` together with the inner
/// polygon through the boundary points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeRegion {
    pub angles: Vec<f64>,
    pub support_values: Vec<f64>,
    pub boundary_points: Vec<C64>,
    /// Spectral norm of the compressed matrix; the support function is
    /// Lipschitz with this constant.
    pub norm_bound: f64,
}

impl RangeRegion {
    pub fn of_matrix(b: &DMatrix<C64>, field: Field, angle_count: usize) -> Result<RangeRegion> {
        check_square(b)?;
        if angle_count == 0 {
            return Err(Error::EmptyInput);
        }
        let angles: Vec<f64> = (0..angle_count).map(|j| 2.0 * PI * j as f64 / angle_count as f64).collect();
        let norm_bound = spectral_norm(b);
        match field {
            Field::Real => {
                let ((lo, _), (hi, _)) = real_extremes(b);
                let support_values = angles.iter().map(|t| (t.cos() * lo).max(t.cos() * hi)).collect();
                let mut boundary_points = vec![C64::new(lo, 0.0)];
                if hi > lo {
                    boundary_points.push(C64::new(hi, 0.0));
                }
                Ok(RangeRegion { angles, support_values, boundary_points, norm_bound })
            }
            Field::Complex => {
                let (support_values, boundary_points) = angles
                    .iter()
                    .map(|&t| {
                        let (v, x) = lambda_max(&rotated_hermitian_part(b, t));
                        (v, quadratic_form(b, &x))
                    })
                    .unzip();
                Ok(RangeRegion { angles, support_values, boundary_points, norm_bound })
            }
        }
    }

    /// Membership in the outer polygon enlarged by `inflate`.
    pub fn contains(&self, w: C64, inflate: f64) -> bool {
        self.angles
            .iter()
            .zip(&self.support_values)
            .all(|(&t, &s)| (C64::from_polar(1.0, -t) * w).re <= s + inflate)
    }

    /// The region of `B*`, which is the complex conjugate of that of `B`.
    pub fn conjugate(&self) -> RangeRegion {
        let mut pairs: Vec<(f64, f64)> = self
            .angles
            .iter()
            .zip(&self.support_values)
            .map(|(&t, &s)| ((2.0 * PI - t).rem_euclid(2.0 * PI), s))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        RangeRegion {
            angles: pairs.iter().map(|p| p.0).collect(),
            support_values: pairs.iter().map(|p| p.1).collect(),
            boundary_points: self.boundary_points.iter().map(|z| z.conj()).collect(),
            norm_bound: self.norm_bound,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }
}

/// `W_0(A, T) = W(V* A* T V)` with `V` spanning the top right singular
/// subspace of `T`: the set of limits of `<A x_n, T x_n>` along unit
/// sequences with `|T x_n| -> |T|`.
pub fn maximal_numerical_range(t: &MultilinearMap, a: &MultilinearMap, cfg: &SolverConfig) -> Result<RangeRegion> {
    t.check_compatible(a)?;
    if t.k() != 1 {
        return Err(Error::NotLinear(t.k()));
    }
    if t.is_zero() {
        return Err(Error::ZeroMap);
    }
    let top = top_right_singular_subspace(t, cfg.tol_gap)?;
    let at = a.as_matrix()?.adjoint() * t.as_matrix()?;
    RangeRegion::of_matrix(&compress(&at, &top.basis), t.field(), cfg.angle_count)
}
