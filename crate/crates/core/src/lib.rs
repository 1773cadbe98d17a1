//! Birkhoff-James orthogonality and smoothness of bounded multilinear maps
//! between finite-dimensional real or complex l_p spaces.
//!
//! `T` is orthogonal to `A` when `|T + lambda A| >= |T|` for every scalar
//! `lambda`. In finite dimensions this holds iff the origin lies in the convex
//! hull of `{y*(A x) : x in M_T, y* in J(T x)}`, where `M_T` is the set of unit
//! tuples on which `T` attains its norm and `J(y)` the support functionals at
//! `y`. The crate computes that set, decides hull membership with explicit
//! certificates, and cross-checks against direct minimization of
//! `|T + lambda A|`.

pub mod config;
pub mod error;
pub mod linalg;
pub mod mapfile;
pub mod multilinear;
pub mod orthogonality;
pub mod smoothness;
pub mod spaces;

pub use config::SolverConfig;
pub use error::{Error, Result};
pub use multilinear::{AttainmentCluster, MultilinearMap, TuplePoint};
pub use orthogonality::{Decision, OmegaSample, OrthVerdict, RangeRegion};
pub use smoothness::{SmoothDecision, SmoothnessReport};
pub use spaces::{Exponent, Field, SpaceSpec, SupportFunctional, SupportSet, C64};
