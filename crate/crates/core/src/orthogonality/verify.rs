//! Independent re-checking of an orthogonality verdict from its evidence.

use serde::{Deserialize, Serialize};

use super::decide::{Evidence, OrthVerdict, SeparationSource};
use super::omega::{compressed_pair, omega_samples};
use super::range::support_value;
use crate::config::SolverConfig;
use crate::error::Result;
use crate::multilinear::{exact_norm, norm_estimate, top_right_singular_subspace, MultilinearMap};
use crate::spaces::{dual_certificate_check, pnorm, C64, TOL_TIE};

/// Absolute slack for recomputed floating-point quantities, relative to scale.
const RECOMPUTE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyCheck {
    pub name: String,
    pub ok: bool,
    pub value: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub checks: Vec<VerifyCheck>,
}

struct Checks(Vec<VerifyCheck>);

impl Checks {
    fn at_most(&mut self, name: impl Into<String>, value: f64, bound: f64) {
        self.0.push(VerifyCheck { name: name.into(), ok: value <= bound, value, bound });
    }

    fn finish(self) -> VerifyReport {
        VerifyReport { ok: self.0.iter().all(|c| c.ok), checks: self.0 }
    }
}

/// Recomputes every quantity the evidence relies on from `T` and `A`.
pub fn verify_verdict(t: &MultilinearMap, a: &MultilinearMap, v: &OrthVerdict, cfg: &SolverConfig) -> Result<VerifyReport> {
    t.check_compatible(a)?;
    let norm_ref = match exact_norm(t) {
        Some(n) => n,
        None => norm_estimate(t, cfg)?.value.max(v.norm_t),
    };
    let scale = a.basis_lower_bound().max(f64::MIN_POSITIVE);
    let mut c = Checks(Vec::new());
    match &v.evidence {
        Evidence::Caratheodory(cert) => {
            let sum: f64 = cert.weights.iter().sum();
            c.at_most("weights sum to one", (sum - 1.0).abs(), 1e-12);
            let neg = cert.weights.iter().cloned().fold(0.0, f64::min);
            c.at_most("weights nonnegative", -neg, 0.0);
            c.at_most("at most three points", cert.points.len() as f64, 3.0);
            let mut combo = C64::new(0.0, 0.0);
            for (i, (p, &w)) in cert.points.iter().zip(&cert.weights).enumerate() {
                let unit_err = p
                    .witness
                    .parts
                    .iter()
                    .zip(t.factors())
                    .map(|(x, s)| (pnorm(x, s.p) - 1.0).abs())
                    .fold(0.0, f64::max);
                c.at_most(format!("point {i}: witness is unit"), unit_err, RECOMPUTE_TOL);
                let y = t.evaluate(&p.witness)?;
                let ax = a.evaluate(&p.witness)?;
                let ny = pnorm(&y, t.codomain().p);
                c.at_most(
                    format!("point {i}: witness attains the norm"),
                    (ny - norm_ref).abs(),
                    cfg.tol_attain * norm_ref + RECOMPUTE_TOL * norm_ref,
                );
                let ok = dual_certificate_check(&p.functional, &y, t.codomain(), 2.0 * TOL_TIE.max(cfg.tol_attain) * ny.max(1.0));
                c.0.push(VerifyCheck {
                    name: format!("point {i}: functional supports T x"),
                    ok,
                    value: (p.functional.action(&y) - ny).norm(),
                    bound: 2.0 * TOL_TIE.max(cfg.tol_attain) * ny.max(1.0),
                });
                let lambda = p.functional.action(&ax);
                c.at_most(format!("point {i}: value recomputes"), (lambda - p.lambda).norm(), RECOMPUTE_TOL * scale);
                combo += lambda * w;
            }
            c.at_most("combination vanishes", combo.norm(), v.hull_tol + RECOMPUTE_TOL * scale);
        }
        Evidence::Separation { direction, margin, theta, source } => {
            c.at_most("direction is unimodular", (direction.norm() - 1.0).abs(), 1e-12);
            c.at_most("margin positive", -margin, 0.0);
            match (source, theta) {
                (SeparationSource::NumericalRange, Some(th)) => {
                    let top = top_right_singular_subspace(t, cfg.tol_gap)?;
                    let b = compressed_pair(t, a, &top.basis, top.sigma_max)?;
                    let h = support_value(&b, *th);
                    c.at_most("support value at theta is -margin", (h + margin).abs(), RECOMPUTE_TOL * scale);
                }
                _ => {
                    let samples = omega_samples(t, a, cfg)?;
                    let worst = samples
                        .iter()
                        .map(|s| (direction.conj() * s.lambda).re + margin)
                        .fold(f64::NEG_INFINITY, f64::max);
                    c.at_most("all samples on the far side", worst, RECOMPUTE_TOL * scale);
                }
            }
        }
        Evidence::Oracle(o) => {
            let m = t.add_scaled(o.lambda_star, a)?;
            let val = match exact_norm(&m) {
                Some(n) => n,
                None if m.is_zero() => 0.0,
                None => norm_estimate(&m, cfg)?.value,
            };
            c.at_most("recomputed norm at lambda*", (val - o.min_value).abs(), cfg.tol_attain * norm_ref + RECOMPUTE_TOL);
            if v.decision == super::Decision::NotOrthogonalCertified {
                c.at_most("norm drops below |T|", val, norm_ref * (1.0 - cfg.tol_decision));
            }
        }
        Evidence::None => {}
    }
    Ok(c.finish())
}
