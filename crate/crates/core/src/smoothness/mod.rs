//! Smoothness of a multilinear map: `T` is smooth iff `M_T` is a single
//! unimodular orbit whose image is a smooth point of the codomain.

mod additivity;
mod sip_probe;

use serde::{Deserialize, Serialize};

use crate::config::SolverConfig;
use crate::error::Result;
use crate::multilinear::{attainment_set, random_like, AttainmentCluster, AttainmentRoute, MultilinearMap, TuplePoint};
use crate::orthogonality::{omega_samples_for, spread};
use crate::spaces::{support_functionals, C64};

pub use additivity::{
    bs_property_certificate, nilpotent_split_counterexample, project_out, right_additivity_probe, AdditivityReport,
    BsCertificate, SplitCheck, SplitCounterexample,
};
pub use sip_probe::{sip_orthogonality_probe, SequenceOrigin, SipLimit, SipProbeReport};

/// Random perturbations used to corroborate a smoothness decision.
pub const DEFAULT_PROBES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SmoothDecision {
    Smooth,
    NotSmooth,
    Undetermined,
}

impl std::fmt::Display for SmoothDecision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SmoothDecision::Smooth => "smooth",
            SmoothDecision::NotSmooth => "not smooth",
            SmoothDecision::Undetermined => "undetermined",
        })
    }
}

/// Diameter of the sampled `Omega'(T, A)` for one probe `A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaSpread {
    pub probe_seed: u64,
    pub spread: f64,
    pub samples: usize,
    /// Spread allowed for a singleton, `tol_decision` times a norm lower
    /// bound of the probe.
    pub tol: f64,
}

impl OmegaSpread {
    pub fn is_singleton(&self) -> bool {
        self.spread <= self.tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SmoothnessWitness {
    /// Two norm-attaining unit tuples in different orbits.
    SecondOrbit { first: TuplePoint, second: TuplePoint, value_gap: f64 },
    /// The image of the representative has more than one support functional.
    ImageTie { image: Vec<C64>, extreme_functionals: usize, free_slots: Vec<usize> },
    /// `A1, A2` each orthogonal to `T` with `A1 + A2` not orthogonal.
    Split(SplitCheck),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessReport {
    pub decision: SmoothDecision,
    pub orbit_ok: bool,
    pub image_smooth: bool,
    /// Whether the attainment set was computed exactly.
    pub certified: bool,
    pub norm: f64,
    pub representative: TuplePoint,
    pub omega_spreads: Vec<OmegaSpread>,
    pub witnesses: Vec<SmoothnessWitness>,
    pub notes: Vec<String>,
}

pub(crate) fn probe_seed(seed: u64, r: usize) -> u64 {
    seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(r as u64 + 1))
}

/// Spread of the sampled `Omega'(T, A)` for an explicit probe `A`.
pub fn omega_spread(t: &MultilinearMap, a: &MultilinearMap, cfg: &SolverConfig) -> Result<f64> {
    let cluster = attainment_set(t, cfg)?;
    Ok(spread(&omega_samples_for(t, a, &cluster, cfg)?))
}

fn spreads_for(t: &MultilinearMap, cluster: &AttainmentCluster, probes: usize, cfg: &SolverConfig) -> Result<Vec<OmegaSpread>> {
    (0..probes)
        .map(|r| {
            let seed = probe_seed(cfg.seed, r);
            let a = random_like(t, seed);
            let samples = omega_samples_for(t, &a, cluster, cfg)?;
            Ok(OmegaSpread {
                probe_seed: seed,
                spread: spread(&samples),
                samples: samples.len(),
                tol: cfg.tol_decision * a.basis_lower_bound(),
            })
        })
        .collect()
}

/// `Omega'(T, A)` is a singleton for every `A` iff `T` is smooth; this
/// samples it for `probes` random perturbations.
pub fn omega_singleton_test(t: &MultilinearMap, probes: usize, cfg: &SolverConfig) -> Result<Vec<OmegaSpread>> {
    cfg.validate()?;
    let cluster = attainment_set(t, cfg)?;
    spreads_for(t, &cluster, probes, cfg)
}

fn second_orbit(t: &MultilinearMap, cluster: &AttainmentCluster) -> Option<SmoothnessWitness> {
    let (first, second) = match &cluster.route {
        AttainmentRoute::Spectral { basis } if basis.len() > 1 => {
            (TuplePoint::single(basis[0].clone()), TuplePoint::single(basis[1].clone()))
        }
        _ if cluster.maximizers.len() > 1 => (cluster.maximizers[0].clone(), cluster.maximizers[1].clone()),
        _ => return None,
    };
    let value = |x: &TuplePoint| crate::multilinear::ascent::value_at(t, x);
    let value_gap = (value(&first) - value(&second)).abs();
    Some(SmoothnessWitness::SecondOrbit { first, second, value_gap })
}

pub(crate) fn smooth_with_cluster(t: &MultilinearMap, cluster: &AttainmentCluster, cfg: &SolverConfig) -> Result<SmoothnessReport> {
    let orbit_ok = cluster.is_single_orbit;
    let image = t.evaluate(&cluster.representative)?;
    let set = support_functionals(&image, t.codomain())?;
    let image_smooth = set.is_singleton();
    let omega_spreads = spreads_for(t, cluster, DEFAULT_PROBES, cfg)?;
    let mut notes = vec![cluster.note.clone()];
    let mut witnesses = Vec::new();
    let decision = if !orbit_ok {
        witnesses.extend(second_orbit(t, cluster));
        if t.is_hilbert_operator() {
            if let Some(split) = nilpotent_split_counterexample(t, cfg)? {
                witnesses.push(SmoothnessWitness::Split(split.check(t, cluster, cfg)?));
            }
        }
        SmoothDecision::NotSmooth
    } else if !image_smooth {
        witnesses.push(SmoothnessWitness::ImageTie {
            image,
            extreme_functionals: set.extreme.len(),
            free_slots: set.free_slots.clone(),
        });
        SmoothDecision::NotSmooth
    } else if omega_spreads.iter().any(|s| !s.is_singleton()) {
        notes.push("a probe produced a non-singleton Omega' despite a single smooth orbit".into());
        SmoothDecision::Undetermined
    } else if !cluster.certified {
        notes.push("single orbit with smooth image, but the attainment set is only sampled".into());
        SmoothDecision::Undetermined
    } else {
        SmoothDecision::Smooth
    };
    Ok(SmoothnessReport {
        decision,
        orbit_ok,
        image_smooth,
        certified: cluster.certified,
        norm: cluster.value,
        representative: cluster.representative.clone(),
        omega_spreads,
        witnesses,
        notes,
    })
}

/// Decides smoothness of `T`.
///
/// Negative answers always carry a witness. Positive answers require an
/// exactly computed attainment set and are otherwise reported undetermined.
pub fn decide_smooth(t: &MultilinearMap, cfg: &SolverConfig) -> Result<SmoothnessReport> {
    cfg.validate()?;
    let cluster = attainment_set(t, cfg)?;
    smooth_with_cluster(t, &cluster, cfg)
}
