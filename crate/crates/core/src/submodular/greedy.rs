//! Lazy greedy maximization over a matroid: repeatedly add the feasible
//! element of largest marginal gain, re-evaluating stale heap entries only
//! when they surface.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{IndependenceOracle, SetFunction};
use crate::error::{Error, Result};

struct HeapEntry {
    gain: f64,
    element: usize,
    /// Size of the solution when `gain` was computed; entries computed
    /// against an older solution are re-evaluated before being trusted.
    round: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Larger gain first; on equal gain, smaller element id first.
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| other.element.cmp(&self.element))
    }
}

/// Greedily build an independent set maximizing `f`, stopping when no
/// feasible element has nonnegative gain. For monotone `f` the result is a
/// base. Ties go to the smallest element id.
pub fn greedy_matroid_max(
    f: &dyn SetFunction,
    matroid: &dyn IndependenceOracle,
) -> Result<Vec<usize>> {
    let n = f.ground_size();
    if matroid.ground_size() != n {
        return Err(Error::InvalidParameter(format!(
            "objective ground size {n} does not match matroid ground size {}",
            matroid.ground_size()
        )));
    }
    let mut solution: Vec<usize> = Vec::new();
    let base = f.eval(&solution);
    let mut current = base;
    let mut heap: BinaryHeap<HeapEntry> = (0..n)
        .filter(|&e| matroid.is_independent(&[e]))
        .map(|e| HeapEntry { gain: eval_with(f, &solution, e) - current, element: e, round: 0 })
        .collect();

    while let Some(entry) = heap.pop() {
        let mut grown = solution.clone();
        let pos = grown.partition_point(|&x| x < entry.element);
        grown.insert(pos, entry.element);
        if !matroid.is_independent(&grown) {
            // Independence is downward closed, so this element can never
            // become feasible again; drop it.
            continue;
        }
        if entry.round == solution.len() {
            if entry.gain < 0.0 {
                break;
            }
            current += entry.gain;
            solution = grown;
        } else {
            let gain = f.eval(&grown) - current;
            heap.push(HeapEntry { gain, element: entry.element, round: solution.len() });
        }
    }
    Ok(solution)
}

fn eval_with(f: &dyn SetFunction, set: &[usize], extra: usize) -> f64 {
    let mut grown = set.to_vec();
    let pos = grown.partition_point(|&x| x < extra);
    grown.insert(pos, extra);
    f.eval(&grown)
}
