//! Direct minimization of `f(lambda) = |T + lambda A|`.
//!
//! `f` is convex, so on the real line golden-section search after a coarse
//! bracket is exact up to the inner norm accuracy. Over `C` the partial
//! minimum `h(x) = min_y f(x + iy)` is again convex, and the search is nested.

use std::cell::RefCell;

use serde::{Deserialize, Serialize};

use super::range::golden_min;
use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::multilinear::{exact_norm, norm_estimate, norm_estimate_from, MultilinearMap, TuplePoint};
use crate::spaces::{Field, C64};

/// Relative width at which the golden-section searches stop.
const SEARCH_TOL: f64 = 1e-10;
/// Restart cap for inner norm estimates without an exact route.
const INNER_RESTARTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleOutcome {
    pub lambda_star: C64,
    pub min_value: f64,
    pub norm_t: f64,
    /// Set when norms came from the ascent estimate rather than an exact route.
    pub heuristic: bool,
    pub evaluations: usize,
}

impl OracleOutcome {
    /// `min_lambda |T + lambda A| < |T| (1 - tol)`.
    pub fn is_below(&self, tol: f64) -> bool {
        self.min_value < self.norm_t * (1.0 - tol)
    }
}

struct NormEval<'a> {
    t: &'a MultilinearMap,
    a: &'a MultilinearMap,
    inner: SolverConfig,
    exact: bool,
    warm: RefCell<Vec<TuplePoint>>,
    count: RefCell<usize>,
}

impl NormEval<'_> {
    fn at(&self, lambda: C64) -> f64 {
        *self.count.borrow_mut() += 1;
        let m = self.t.add_scaled(lambda, self.a).expect("compatible maps");
        if self.exact {
            return exact_norm(&m).unwrap_or(0.0);
        }
        if m.is_zero() {
            return 0.0;
        }
        let warm = self.warm.borrow().clone();
        let cl = norm_estimate_from(&m, &self.inner, &warm).expect("nonzero map");
        let mut w = self.warm.borrow_mut();
        w.clear();
        w.extend(cl.maximizers.into_iter().take(2));
        cl.value
    }
}

/// Bracket from a uniform grid over `[-r, r]` (always including 0), then
/// golden-section inside the bracket.
fn line_min(f: &mut impl FnMut(f64) -> f64, r: f64, grid: usize) -> (f64, f64) {
    let n = grid.max(2);
    let mut xs: Vec<f64> = (0..=n).map(|i| -r + 2.0 * r * i as f64 / n as f64).collect();
    if !xs.contains(&0.0) {
        xs.push(0.0);
        xs.sort_by(f64::total_cmp);
    }
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let i = (0..vals.len()).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).expect("nonempty grid");
    let lo = xs[i.saturating_sub(1)];
    let hi = xs[(i + 1).min(xs.len() - 1)];
    let (x, v) = golden_min(f, lo, hi, SEARCH_TOL * r.max(1.0));
    if vals[i] <= v {
        (xs[i], vals[i])
    } else {
        (x, v)
    }
}

/// Minimizes `|T + lambda A|` over the scalar field.
pub fn oracle_min_norm(t: &MultilinearMap, a: &MultilinearMap, cfg: &SolverConfig) -> Result<OracleOutcome> {
    cfg.validate()?;
    t.check_compatible(a)?;
    if t.is_zero() {
        return Err(Error::ZeroMap);
    }
    let exact = exact_norm(t).is_some();
    let norm_t = match exact_norm(t) {
        Some(n) => n,
        None => norm_estimate(t, cfg)?.value,
    };
    if a.is_zero() {
        return Ok(OracleOutcome {
            lambda_star: C64::new(0.0, 0.0),
            min_value: norm_t,
            norm_t,
            heuristic: !exact,
            evaluations: 0,
        });
    }
    let inner = SolverConfig { restarts: cfg.restarts.min(INNER_RESTARTS), ..cfg.clone() };
    let eval = NormEval { t, a, inner, exact, warm: RefCell::new(Vec::new()), count: RefCell::new(0) };
    // |T + lambda A| >= |lambda| lb(A) - |T|, so minimizers satisfy |lambda| <= 2|T| / lb(A)
    let r = 2.1 * norm_t / a.basis_lower_bound();
    let (lambda_star, min_value) = match t.field() {
        Field::Real => {
            let (x, v) = line_min(&mut |x| eval.at(C64::new(x, 0.0)), r, cfg.oracle_grid);
            (C64::new(x, 0.0), v)
        }
        Field::Complex => {
            let mut outer = |x: f64| line_min(&mut |y| eval.at(C64::new(x, y)), r, cfg.oracle_grid).1;
            let (x, _) = line_min(&mut outer, r, cfg.oracle_grid);
            let (y, v) = line_min(&mut |y| eval.at(C64::new(x, y)), r, cfg.oracle_grid);
            (C64::new(x, y), v)
        }
    };
    let (lambda_star, min_value) = if min_value <= norm_t { (lambda_star, min_value) } else { (C64::new(0.0, 0.0), norm_t) };
    let evaluations = *eval.count.borrow();
    Ok(OracleOutcome { lambda_star, min_value, norm_t, heuristic: !exact, evaluations })
}
