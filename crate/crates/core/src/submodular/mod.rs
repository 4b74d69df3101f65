//! Set functions, matroid oracles and the maximization engines used for the
//! per-guess subproblems: lazy greedy, continuous greedy with rounding,
//! two-matroid local search, bicriteria extension and exact enumeration.

mod boost;
mod brute;
mod checker;
mod continuous;
mod functions;
mod greedy;
mod local_search;
mod matroid;

pub use boost::boost_best_of;
pub use brute::{brute_force_max, BRUTE_FORCE_GUARD};
pub use checker::{check_set_function, SetFunctionReport};
pub use continuous::{bicriteria_max, continuous_greedy_max, ContinuousGreedyConfig};
pub use functions::{CoverageFunction, ModularFunction};
pub use greedy::greedy_matroid_max;
pub use local_search::two_matroid_local_search;
pub use matroid::{IndependenceOracle, MatroidOracle, PartitionConstraint};

/// A real-valued function on subsets of `{0, .., ground_size-1}`.
///
/// Callers pass sets as sorted slices of unique element indices. Evaluation
/// must be pure: the engines assume repeated calls on the same set agree.
pub trait SetFunction: Sync {
    fn ground_size(&self) -> usize;
    fn eval(&self, set: &[usize]) -> f64;
}

/// `f(set + extra) - f(set)`, for a sorted `set` not containing `extra`.
pub fn marginal_gain(f: &dyn SetFunction, set: &[usize], extra: usize) -> f64 {
    let mut with: Vec<usize> = Vec::with_capacity(set.len() + 1);
    let pos = set.partition_point(|&e| e < extra);
    with.extend_from_slice(&set[..pos]);
    with.push(extra);
    with.extend_from_slice(&set[pos..]);
    f.eval(&with) - f.eval(set)
}
