//! Semi-inner-product characterization: `T _|_ A` for smooth `T` iff
//! `[A x_n, T x_n] -> 0` along every norming sequence `x_n`, for every
//! semi-inner-product. Each limit divided by `|T|` lies in `Omega'(T, A)`.

use serde::{Deserialize, Serialize};

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::multilinear::ascent::{ascend, restart_rng};
use crate::multilinear::{attainment_set, random_unit_point, AttainmentRoute, MultilinearMap, TuplePoint};
use crate::orthogonality::{compressed_pair, decide_with_cluster, hull_distance, hull_tol, RangeRegion};
use crate::spaces::{normalize, pnorm, sip_variant, Exponent, SipVariant, C64};

const SEQUENCE_SALT: u64 = 0x51B;
/// Number of ascent trajectories used as norming sequences.
const ASCENT_SEQUENCES: usize = 8;
/// Length of the perturbed sequences `x + 2^-n r`.
const PERTURBED_LEN: i32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceOrigin {
    Ascent,
    Perturbed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SipLimit {
    pub sequence: usize,
    pub origin: SequenceOrigin,
    pub variant: SipVariant,
    /// `[A x_N, T x_N]` at the last element.
    pub value: C64,
    /// Change over the last step.
    pub tail_change: f64,
    /// Distance of `value / |T|` from the sampled `Omega'(T, A)`.
    pub omega_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SipProbeReport {
    pub limits: Vec<SipLimit>,
    pub sup_modulus: f64,
    /// `sup_modulus <= tol`.
    pub converges_to_zero: bool,
    /// Every limit lies within `omega_tol` of the sampled `Omega'`.
    pub omega_consistent: bool,
    pub tol: f64,
    pub omega_tol: f64,
    pub notes: Vec<String>,
}

fn perturbed(map: &MultilinearMap, x: &TuplePoint, r: &TuplePoint) -> Vec<TuplePoint> {
    (1..=PERTURBED_LEN)
        .map(|n| {
            let eps = 2f64.powi(-n);
            TuplePoint::new(
                x.parts
                    .iter()
                    .zip(&r.parts)
                    .zip(map.factors())
                    .map(|((a, b), s)| {
                        let v: Vec<C64> = a.iter().zip(b).map(|(p, q)| p + q * eps).collect();
                        normalize(&v, s.p).unwrap_or_else(|| a.clone())
                    })
                    .collect(),
            )
        })
        .collect()
}

/// Evaluates semi-inner-product limits along norming sequences of `T`.
///
/// Requires `T _|_ A` to be certified and a finite codomain exponent.
/// Sequences are ascent trajectories that reach `|T|` and perturbations
/// `x + 2^-n r` around the sampled `Omega'` witnesses; for an l_1 codomain
/// both extreme tie selections are tried next to the canonical one.
pub fn sip_orthogonality_probe(t: &MultilinearMap, a: &MultilinearMap, cfg: &SolverConfig) -> Result<SipProbeReport> {
    cfg.validate()?;
    t.check_compatible(a)?;
    if t.codomain().p == Exponent::Infinity {
        return Err(Error::InfiniteExponent);
    }
    let cluster = attainment_set(t, cfg)?;
    let (verdict, samples) = decide_with_cluster(t, a, &cluster, cfg)?;
    if !verdict.is_orthogonal() {
        return Err(Error::Precondition(format!("T is not certified orthogonal to A (decision: {})", verdict.decision)));
    }
    let norm = cluster.value;
    let mut sequences: Vec<(SequenceOrigin, Vec<TuplePoint>)> = Vec::new();
    for r in 0..ASCENT_SEQUENCES {
        let start = random_unit_point(t, &mut restart_rng(cfg.seed ^ SEQUENCE_SALT, r));
        let run = ascend(t, start.clone(), cfg.max_iter, true);
        if run.value >= norm * (1.0 - cfg.tol_attain) {
            let mut seq = vec![start];
            seq.extend(run.trajectory);
            sequences.push((SequenceOrigin::Ascent, seq));
        }
    }
    let mut rng = restart_rng(cfg.seed ^ SEQUENCE_SALT, ASCENT_SEQUENCES);
    let mut seen = Vec::new();
    for s in &samples {
        if seen.contains(&s.witness_id) {
            continue;
        }
        seen.push(s.witness_id);
        let dir = random_unit_point(t, &mut rng);
        sequences.push((SequenceOrigin::Perturbed, perturbed(t, &s.witness, &dir)));
    }
    let mut variants = vec![SipVariant::Canonical];
    if t.codomain().p.is_one() {
        variants.extend([SipVariant::TieSelect(0), SipVariant::TieSelect(u32::MAX)]);
    }
    // Omega' as a region: the numerical range in the spectral route, the
    // sample hull otherwise
    let region = match &cluster.route {
        AttainmentRoute::Spectral { basis } if basis.len() > 1 => {
            Some(RangeRegion::of_matrix(&compressed_pair(t, a, basis, norm)?, t.field(), cfg.angle_count)?)
        }
        _ => None,
    };
    let lambdas: Vec<C64> = samples.iter().map(|s| s.lambda).collect();
    let distance = |w: C64| match &region {
        Some(r) => r
            .angles
            .iter()
            .zip(&r.support_values)
            .map(|(&th, &s)| ((C64::from_polar(1.0, -th) * w).re - s).max(0.0))
            .fold(0.0, f64::max),
        None => hull_distance(&lambdas, w),
    };
    let mut limits = Vec::new();
    for (i, (origin, seq)) in sequences.iter().enumerate() {
        for &variant in &variants {
            let vals: Vec<C64> = seq
                .iter()
                .map(|x| {
                    let tx = t.evaluate(x)?;
                    let ax = a.evaluate(x)?;
                    sip_variant(&ax, &tx, t.codomain(), variant)
                })
                .collect::<Result<_>>()?;
            let value = *vals.last().expect("sequences are nonempty");
            let tail_change = if vals.len() > 1 { (value - vals[vals.len() - 2]).norm() } else { 0.0 };
            let last_norm = pnorm(&t.evaluate(seq.last().expect("nonempty"))?, t.codomain().p);
            limits.push(SipLimit {
                sequence: i,
                origin: *origin,
                variant,
                value,
                tail_change,
                omega_distance: distance(value / last_norm),
            });
        }
    }
    let tol = hull_tol(a, cfg) * norm;
    let omega_tol = (cfg.tol_decision + cfg.tol_attain) * a.basis_lower_bound();
    let sup_modulus = limits.iter().map(|l| l.value.norm()).fold(0.0, f64::max);
    let omega_consistent = limits.iter().all(|l| l.omega_distance <= omega_tol);
    let notes = vec![
        cluster.note.clone(),
        format!(
            "{} sequences ({} ascent, {} perturbed), {} semi-inner-product(s)",
            sequences.len(),
            sequences.iter().filter(|s| s.0 == SequenceOrigin::Ascent).count(),
            sequences.iter().filter(|s| s.0 == SequenceOrigin::Perturbed).count(),
            variants.len()
        ),
    ];
    Ok(SipProbeReport {
        limits,
        sup_modulus,
        converges_to_zero: sup_modulus <= tol,
        omega_consistent,
        tol,
        omega_tol,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{Field, SpaceSpec};

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn smooth_orthogonal_pair_converges_to_zero() {
        let t = MultilinearMap::real_matrix(2, 2, &[2.0, 0.0, 0.0, 1.0]).unwrap();
        let a = MultilinearMap::real_matrix(2, 2, &[0.0, 1.0, 1.0, 3.0]).unwrap();
        let r = sip_orthogonality_probe(&t, &a, &cfg()).unwrap();
        assert!(r.converges_to_zero, "sup {}", r.sup_modulus);
        assert!(r.omega_consistent);
    }

    #[test]
    fn non_smooth_identity_has_nonzero_limits() {
        let t = MultilinearMap::real_matrix(2, 2, &[1.0, 0.0, 0.0, 1.0]).unwrap();
        let a = MultilinearMap::real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap();
        let r = sip_orthogonality_probe(&t, &a, &cfg()).unwrap();
        assert!(!r.converges_to_zero);
        assert!((r.sup_modulus - 1.0).abs() < 1e-9, "{}", r.sup_modulus);
        assert!(r.omega_consistent);
    }

    #[test]
    fn l_inf_codomain_rejected() {
        let s = SpaceSpec::linf(2, Field::Real);
        let t = MultilinearMap::from_real(s, vec![s], &[1.0, 0.0, 0.0, 0.5]).unwrap();
        assert_eq!(sip_orthogonality_probe(&t, &t, &cfg()), Err(Error::InfiniteExponent));
    }

    #[test]
    fn not_orthogonal_rejected() {
        let t = MultilinearMap::real_matrix(2, 2, &[2.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(sip_orthogonality_probe(&t, &t, &cfg()), Err(Error::Precondition(_))));
    }
}
