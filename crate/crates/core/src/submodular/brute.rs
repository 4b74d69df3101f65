//! Exact maximization by depth-first enumeration of the independent sets.

use super::{IndependenceOracle, SetFunction};
use crate::error::{Error, Result};

/// Upper bound on the number of independent sets the exact maximizer visits.
pub const BRUTE_FORCE_GUARD: u128 = 10_000_000;

/// Enumerate every independent set (optionally capped in size) and return the
/// maximizer of `f` with its value. Enumeration is depth-first in ascending
/// element order, which visits sets in lexicographic order, so ties resolve
/// to the lexicographically smallest set. Errors out after
/// [`BRUTE_FORCE_GUARD`] sets.
pub fn brute_force_max(
    f: &dyn SetFunction,
    oracle: &dyn IndependenceOracle,
    max_size: Option<usize>,
) -> Result<(Vec<usize>, f64)> {
    let n = f.ground_size();
    if oracle.ground_size() != n {
        return Err(Error::InvalidParameter(format!(
            "objective ground size {n} does not match oracle ground size {}",
            oracle.ground_size()
        )));
    }
    let cap = max_size.unwrap_or(n);
    let mut visited: u128 = 0;
    let mut best_set: Vec<usize> = Vec::new();
    let mut best_value = f.eval(&best_set);
    let mut stack: Vec<usize> = Vec::new();
    dfs(f, oracle, cap, 0, &mut stack, &mut visited, &mut best_set, &mut best_value)?;
    Ok((best_set, best_value))
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    f: &dyn SetFunction,
    oracle: &dyn IndependenceOracle,
    cap: usize,
    from: usize,
    stack: &mut Vec<usize>,
    visited: &mut u128,
    best_set: &mut Vec<usize>,
    best_value: &mut f64,
) -> Result<()> {
    *visited += 1;
    if *visited > BRUTE_FORCE_GUARD {
        return Err(Error::OracleBudgetExceeded(format!(
            "exact maximization visited more than {BRUTE_FORCE_GUARD} independent sets"
        )));
    }
    if stack.len() >= cap {
        return Ok(());
    }
    for e in from..f.ground_size() {
        stack.push(e);
        if oracle.is_independent(stack) {
            let value = f.eval(stack);
            if value > *best_value {
                *best_value = value;
                *best_set = stack.clone();
            }
            dfs(f, oracle, cap, e + 1, stack, visited, best_set, best_value)?;
        }
        stack.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::{MatroidOracle, ModularFunction, PartitionConstraint, SetFunction};
    use super::*;

    #[test]
    fn capped_indicator_reports_value_one_with_lex_smallest_witness() {
        // f(S) = min(|S|, 1) under uniform rank 2: optimum value is 1, and the
        // lexicographically smallest maximizer is the singleton {0}.
        struct F;
        impl SetFunction for F {
            fn ground_size(&self) -> usize {
                3
            }
            fn eval(&self, set: &[usize]) -> f64 {
                set.len().min(1) as f64
            }
        }
        let m = MatroidOracle::uniform(3, 2);
        let (set, value) = brute_force_max(&F, &m, None).unwrap();
        assert_eq!(value, 1.0);
        assert_eq!(set, vec![0]);
    }

    #[test]
    fn single_element_part_returns_that_element() {
        let f = ModularFunction::new(vec![3.0]);
        let pc = PartitionConstraint::new(vec![0], 1).unwrap();
        let (set, value) = brute_force_max(&f, &pc, None).unwrap();
        assert_eq!(set, vec![0]);
        assert_eq!(value, 3.0);
    }

    #[test]
    fn finds_the_true_optimum_under_a_partition_constraint() {
        let f = ModularFunction::new(vec![1.0, 5.0, 4.0, 2.0]);
        let pc = PartitionConstraint::new(vec![0, 0, 1, 1], 2).unwrap();
        let (set, value) = brute_force_max(&f, &pc, None).unwrap();
        assert_eq!(set, vec![1, 2]);
        assert_eq!(value, 9.0);
    }

    #[test]
    fn size_cap_restricts_the_search() {
        let f = ModularFunction::new(vec![1.0, 1.0, 1.0]);
        let m = MatroidOracle::uniform(3, 3);
        let (set, value) = brute_force_max(&f, &m, Some(2)).unwrap();
        assert_eq!(value, 2.0);
        assert_eq!(set, vec![0, 1]);
    }

    #[test]
    fn identically_zero_function_keeps_the_empty_set() {
        let f = ModularFunction::new(vec![0.0, 0.0]);
        let m = MatroidOracle::uniform(2, 2);
        let (set, value) = brute_force_max(&f, &m, None).unwrap();
        assert_eq!(value, 0.0);
        assert!(set.is_empty());
    }
}
