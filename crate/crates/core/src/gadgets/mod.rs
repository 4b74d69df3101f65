//! Adversarial instance generators: 3-SAT seeds, bipartite projection
//! games, hypergrid coverage systems, and the embedding of coverage into
//! hard k-median instances.

pub mod coverage;
pub mod label_cover;
pub mod sat;

pub use coverage::{
    coverage_fraction, coverage_to_kmedian, greedy_max_coverage, hypergrid_coverage,
    max_coverage_opt, HypergridSystem, SetElement, SetSystem,
};
pub use label_cover::{
    clause_variable_game, label_cover_opt, merge_supervertices, parallel_repetition,
    LabelCoverEdge, LabelCoverInstance, LabelCoverOpt, ENUMERATION_LIMIT,
};
pub use sat::{planted_three_sat, random_three_sat, ThreeSatFormula};
