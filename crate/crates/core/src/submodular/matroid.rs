//! Independence oracles: partition, uniform and explicitly listed matroids,
//! plus the one-per-part constraint the clustering solver maximizes under.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Anything that can answer "is this set independent?".
///
/// Sets are passed as sorted slices of unique element indices below
/// `ground_size`. Implementations must be downward closed: subsets of
/// independent sets are independent.
pub trait IndependenceOracle: Sync {
    fn ground_size(&self) -> usize;
    fn is_independent(&self, set: &[usize]) -> bool;

    /// Size of a largest independent set.
    fn rank(&self) -> usize;
}

/// A matroid in one of three concrete encodings.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MatroidOracle {
    /// At most `capacities[p]` elements from each part; `part_of[e]` names the
    /// part of element `e`.
    Partition { part_of: Vec<usize>, capacities: Vec<usize> },
    /// Any set of at most `rank` elements.
    Uniform { n: usize, rank: usize },
    /// Independence given by an explicit list of independent sets.
    Explicit { n: usize, independent_sets: Vec<Vec<usize>> },
}

impl MatroidOracle {
    pub fn partition(part_of: Vec<usize>, capacities: Vec<usize>) -> Result<Self> {
        for (e, &p) in part_of.iter().enumerate() {
            if p >= capacities.len() {
                return Err(Error::InvalidInstance(format!(
                    "element {e} is in part {p}, but there are only {} parts",
                    capacities.len()
                )));
            }
        }
        Ok(MatroidOracle::Partition { part_of, capacities })
    }

    pub fn uniform(n: usize, rank: usize) -> Self {
        MatroidOracle::Uniform { n, rank }
    }

    /// Build an explicit matroid, verifying non-emptiness, downward closure
    /// and the exchange axiom over the listed sets. The empty set is added if
    /// missing; listed sets are sorted and deduplicated.
    pub fn explicit(n: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut family: HashSet<Vec<usize>> = HashSet::new();
        family.insert(Vec::new());
        for mut s in sets {
            s.sort_unstable();
            s.dedup();
            if let Some(&e) = s.iter().find(|&&e| e >= n) {
                return Err(Error::InvalidInstance(format!(
                    "independent set mentions element {e}, but the ground set has {n} elements"
                )));
            }
            family.insert(s);
        }
        for s in &family {
            for drop in 0..s.len() {
                let mut sub = s.clone();
                sub.remove(drop);
                if !family.contains(&sub) {
                    return Err(Error::InvalidInstance(format!(
                        "family is not downward closed: {s:?} is listed but {sub:?} is not"
                    )));
                }
            }
        }
        for a in &family {
            for b in &family {
                if a.len() >= b.len() {
                    continue;
                }
                let extendable = b.iter().any(|&x| {
                    if a.binary_search(&x).is_ok() {
                        return false;
                    }
                    let mut grown = a.clone();
                    grown.insert(grown.partition_point(|&e| e < x), x);
                    family.contains(&grown)
                });
                if !extendable {
                    return Err(Error::InvalidInstance(format!(
                        "exchange axiom fails for {a:?} against larger set {b:?}"
                    )));
                }
            }
        }
        let mut independent_sets: Vec<Vec<usize>> = family.into_iter().collect();
        independent_sets.sort();
        Ok(MatroidOracle::Explicit { n, independent_sets })
    }
}

impl IndependenceOracle for MatroidOracle {
    fn ground_size(&self) -> usize {
        match self {
            MatroidOracle::Partition { part_of, .. } => part_of.len(),
            MatroidOracle::Uniform { n, .. } => *n,
            MatroidOracle::Explicit { n, .. } => *n,
        }
    }

    fn is_independent(&self, set: &[usize]) -> bool {
        match self {
            MatroidOracle::Partition { part_of, capacities } => {
                let mut used = vec![0usize; capacities.len()];
                for &e in set {
                    if e >= part_of.len() {
                        return false;
                    }
                    let p = part_of[e];
                    used[p] += 1;
                    if used[p] > capacities[p] {
                        return false;
                    }
                }
                true
            }
            MatroidOracle::Uniform { n, rank } => {
                set.len() <= *rank && set.iter().all(|&e| e < *n)
            }
            MatroidOracle::Explicit { independent_sets, .. } => {
                independent_sets.binary_search_by(|s| s.as_slice().cmp(set)).is_ok()
            }
        }
    }

    fn rank(&self) -> usize {
        match self {
            MatroidOracle::Partition { part_of, capacities } => {
                let mut sizes = vec![0usize; capacities.len()];
                for &p in part_of {
                    sizes[p] += 1;
                }
                sizes.iter().zip(capacities).map(|(&s, &c)| s.min(c)).sum()
            }
            MatroidOracle::Uniform { n, rank } => (*rank).min(*n),
            MatroidOracle::Explicit { independent_sets, .. } => {
                independent_sets.iter().map(|s| s.len()).max().unwrap_or(0)
            }
        }
    }
}

/// "At most one element from each part", the constraint of the per-guess
/// subproblem. Parts must be non-empty and cover the ground set.
#[derive(Debug, Clone)]
pub struct PartitionConstraint {
    part_of: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl PartitionConstraint {
    pub fn new(part_of: Vec<usize>, num_parts: usize) -> Result<Self> {
        let mut members = vec![Vec::new(); num_parts];
        for (e, &p) in part_of.iter().enumerate() {
            if p >= num_parts {
                return Err(Error::InvalidInstance(format!(
                    "element {e} is in part {p}, but there are only {num_parts} parts"
                )));
            }
            members[p].push(e);
        }
        if let Some(p) = members.iter().position(|m| m.is_empty()) {
            return Err(Error::InvalidInstance(format!("part {p} has no elements")));
        }
        Ok(PartitionConstraint { part_of, members })
    }

    /// Group elements by a part label attached to each, with parts numbered
    /// in first-appearance order.
    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        let mut order: Vec<usize> = Vec::new();
        let mut part_of = Vec::with_capacity(labels.len());
        for &l in labels {
            let p = match order.iter().position(|&o| o == l) {
                Some(p) => p,
                None => {
                    order.push(l);
                    order.len() - 1
                }
            };
            part_of.push(p);
        }
        Self::new(part_of, order.len())
    }

    pub fn ground_size(&self) -> usize {
        self.part_of.len()
    }

    pub fn num_parts(&self) -> usize {
        self.members.len()
    }

    pub fn part_of(&self, e: usize) -> usize {
        self.part_of[e]
    }

    /// Elements of part `p`, ascending.
    pub fn members(&self, p: usize) -> &[usize] {
        &self.members[p]
    }

    /// Exactly one element per part?
    pub fn is_transversal(&self, set: &[usize]) -> bool {
        if set.len() != self.num_parts() {
            return false;
        }
        let mut seen = vec![false; self.num_parts()];
        for &e in set {
            let p = self.part_of[e];
            if seen[p] {
                return false;
            }
            seen[p] = true;
        }
        true
    }

    /// The same constraint viewed as a unit-capacity partition matroid.
    pub fn as_matroid(&self) -> MatroidOracle {
        MatroidOracle::Partition {
            part_of: self.part_of.clone(),
            capacities: vec![1; self.num_parts()],
        }
    }
}

impl IndependenceOracle for PartitionConstraint {
    fn ground_size(&self) -> usize {
        self.part_of.len()
    }

    fn is_independent(&self, set: &[usize]) -> bool {
        let mut seen = vec![false; self.num_parts()];
        for &e in set {
            if e >= self.part_of.len() {
                return false;
            }
            let p = self.part_of[e];
            if seen[p] {
                return false;
            }
            seen[p] = true;
        }
        true
    }

    fn rank(&self) -> usize {
        self.num_parts()
    }
}
