//! Dense k-linear maps, their norms and norm attainment sets.

pub mod ascent;
mod attainment;
mod bruteforce;
mod map;

pub use attainment::{
    attainment_set, exact_norm, norm_estimate, norm_estimate_from, top_right_singular_subspace,
    AttainmentCluster, AttainmentRoute, TopSubspace, ORBIT_TOL, VERTEX_CAP,
};
pub use bruteforce::{norm_bruteforce, BruteForceNorm, DEFAULT_GRID_CAP};
pub use map::{random_like, random_map, random_map_on, MultilinearMap, TuplePoint};

pub(crate) use map::random_unit_point;
