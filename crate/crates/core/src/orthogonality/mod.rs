//! Birkhoff-James orthogonality of multilinear maps.

mod decide;
mod hull;
mod omega;
mod oracle;
mod range;
mod verify;

pub use decide::{
    bs_decide_hilbert, decide_orthogonality, decide_with_cluster, CaratheodoryCertificate, Decision, Evidence,
    HilbertVerdict, OrthVerdict, SeparationSource,
};
pub use hull::{hull_contains_zero, hull_distance, HullTest, HullWeights, SeparatingDirection};
pub use omega::{omega_at, omega_samples, omega_samples_for, spread, OmegaSample};
pub use oracle::{oracle_min_norm, OracleOutcome};
pub use range::{
    boundary_generators, maximal_numerical_range, numerical_range_contains_zero, range_test, range_witness,
    real_range_test, support_value, RangeRegion, RangeTest,
};
pub use verify::{verify_verdict, VerifyCheck, VerifyReport};

pub(crate) use decide::hull_tol;
pub(crate) use omega::compressed_pair;
