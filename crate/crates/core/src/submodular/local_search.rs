//! Local search for maximizing a monotone submodular function over the
//! intersection of two matroids: greedy start, then swaps that remove up to
//! two elements and add one, accepted while the relative gain is noticeable.

use super::{IndependenceOracle, SetFunction};
use crate::error::{Error, Result};

/// Hard cap on accepted moves, independent of the gain threshold.
const MAX_MOVES: usize = 10_000;

/// Maximize `f` subject to independence in both `m1` and `m2`.
///
/// Starts from a greedy common-independent set, then repeatedly applies the
/// best move among "add one", "swap one for one" and "swap two for one",
/// while the winner improves the value by a relative `epsilon / n^2`. The
/// search is deterministic; `_seed` is accepted for signature uniformity with
/// the randomized engines.
pub fn two_matroid_local_search(
    f: &dyn SetFunction,
    m1: &dyn IndependenceOracle,
    m2: &dyn IndependenceOracle,
    epsilon: f64,
    _seed: u64,
) -> Result<Vec<usize>> {
    let n = f.ground_size();
    if m1.ground_size() != n || m2.ground_size() != n {
        return Err(Error::InvalidParameter(format!(
            "ground sizes disagree: objective {n}, matroids {} and {}",
            m1.ground_size(),
            m2.ground_size()
        )));
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be positive and finite, got {epsilon}"
        )));
    }
    let feasible = |set: &[usize]| m1.is_independent(set) && m2.is_independent(set);

    // Greedy start: grow a common independent set by best nonnegative gain.
    let mut solution: Vec<usize> = Vec::new();
    let mut value = f.eval(&solution);
    loop {
        let mut best: Option<(f64, usize)> = None;
        for e in 0..n {
            if solution.binary_search(&e).is_ok() {
                continue;
            }
            let grown = with_element(&solution, e);
            if !feasible(&grown) {
                continue;
            }
            let gain = f.eval(&grown) - value;
            if gain >= 0.0 && best.is_none_or(|(bv, _)| gain > bv) {
                best = Some((gain, e));
            }
        }
        match best {
            Some((gain, e)) => {
                solution = with_element(&solution, e);
                value += gain;
            }
            None => break,
        }
    }

    let threshold = epsilon / ((n.max(1) * n.max(1)) as f64);
    for _ in 0..MAX_MOVES {
        let mut best: Option<(f64, Vec<usize>)> = None;
        let consider = |candidate: Vec<usize>, best: &mut Option<(f64, Vec<usize>)>| {
            if !feasible(&candidate) {
                return;
            }
            let v = f.eval(&candidate);
            if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
                *best = Some((v, candidate));
            }
        };
        for x in 0..n {
            if solution.binary_search(&x).is_err() {
                consider(with_element(&solution, x), &mut best);
            }
        }
        for ai in 0..solution.len() {
            for x in 0..n {
                if solution.binary_search(&x).is_ok() {
                    continue;
                }
                let mut cand = solution.clone();
                cand.remove(ai);
                consider(with_element(&cand, x), &mut best);
            }
        }
        for ai in 0..solution.len() {
            for bi in (ai + 1)..solution.len() {
                for x in 0..n {
                    if solution.binary_search(&x).is_ok() {
                        continue;
                    }
                    let mut cand = solution.clone();
                    cand.remove(bi);
                    cand.remove(ai);
                    consider(with_element(&cand, x), &mut best);
                }
            }
        }
        match best {
            Some((v, cand))
                if (value <= 0.0 && v > 0.0)
                    || (value > 0.0 && v > value * (1.0 + threshold)) =>
            {
                solution = cand;
                value = v;
            }
            _ => break,
        }
    }
    Ok(solution)
}

fn with_element(set: &[usize], e: usize) -> Vec<usize> {
    let mut grown = set.to_vec();
    grown.insert(grown.partition_point(|&x| x < e), e);
    grown
}
