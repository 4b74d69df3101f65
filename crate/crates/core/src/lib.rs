//! Fixed-parameter approximation algorithms for center-based clustering:
//! k-median, k-means, matroid median and facility location, together with the
//! coreset, submodular-maximization and hardness-gadget machinery they rest
//! on.
//!
//! The solver enumerates, for every choice of cluster leaders and rounded
//! radii, a partitioned candidate set of facilities, and reduces each guess to
//! monotone submodular maximization under a partition constraint. Coresets
//! shrink the client set beforehand; baselines provide exact and combinatorial
//! reference solutions; gadgets generate the coverage-style instances used to
//! probe the approximation barriers.

pub mod baseline;
pub mod coreset;
pub mod error;
pub mod gadgets;
pub mod instance_gen;
pub mod metric;
pub mod rng;
pub mod solver;
pub mod submodular;
pub mod verify;

pub use error::{Error, Result};
pub use metric::{
    instance_to_json, normalize_aspect_ratio, parse_instance, rounded_radius, total_weight,
    validate_metric, Assignment, Client, InstanceFile, MetricInstance, MetricViolation, Objective,
    PointId, Solution, ValidationReport, WeightedClientSet,
};
