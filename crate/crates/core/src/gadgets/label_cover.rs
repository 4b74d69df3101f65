//! Bipartite projection games: the clause-variable game, super-vertex
//! merging, parallel repetition, and an exact satisfied-fraction oracle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gadgets::sat::ThreeSatFormula;

/// Work budget shared by the exact enumerations in the gadget pipelines.
pub const ENUMERATION_LIMIT: u128 = 10_000_000;

/// One edge of a projection game; the table lists the image of every left
/// label, so it is total by construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelCoverEdge {
    pub left: usize,
    pub right: usize,
    pub projection: Vec<usize>,
}

/// A bipartite projection game. Parallel edges are allowed and each carries
/// its own projection table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelCoverInstance {
    pub num_left: usize,
    pub num_right: usize,
    pub sigma_left: usize,
    pub sigma_right: usize,
    pub edges: Vec<LabelCoverEdge>,
}

impl LabelCoverInstance {
    pub fn new(
        num_left: usize,
        num_right: usize,
        sigma_left: usize,
        sigma_right: usize,
        edges: Vec<LabelCoverEdge>,
    ) -> Result<Self> {
        let inst = LabelCoverInstance { num_left, num_right, sigma_left, sigma_right, edges };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_left == 0 || self.num_right == 0 {
            return Err(Error::InvalidInstance("a projection game needs vertices on both sides".into()));
        }
        if self.sigma_left == 0 || self.sigma_right == 0 {
            return Err(Error::InvalidInstance("label alphabets must be non-empty".into()));
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.left >= self.num_left || e.right >= self.num_right {
                return Err(Error::InvalidInstance(format!(
                    "edge {i} endpoint out of range ({}, {})",
                    e.left, e.right
                )));
            }
            if e.projection.len() != self.sigma_left {
                return Err(Error::InvalidInstance(format!(
                    "edge {i} projection has {} entries, expected {}",
                    e.projection.len(),
                    self.sigma_left
                )));
            }
            if e.projection.iter().any(|&img| img >= self.sigma_right) {
                return Err(Error::InvalidInstance(format!(
                    "edge {i} projection maps outside the right alphabet"
                )));
            }
        }
        Ok(())
    }

    pub fn left_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.num_left];
        for e in &self.edges {
            deg[e.left] += 1;
        }
        deg
    }

    pub fn right_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.num_right];
        for e in &self.edges {
            deg[e.right] += 1;
        }
        deg
    }

    /// The common left degree when every left vertex has the same one.
    pub fn left_degree(&self) -> Option<usize> {
        let deg = self.left_degrees();
        let d = deg[0];
        deg.iter().all(|&x| x == d).then_some(d)
    }

    pub fn is_u_regular(&self) -> bool {
        self.left_degree().is_some()
    }

    /// The largest right degree.
    pub fn max_right_degree(&self) -> usize {
        self.right_degrees().into_iter().max().unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("game serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let inst: LabelCoverInstance = serde_json::from_str(text)?;
        inst.validate()?;
        Ok(inst)
    }
}

/// The clause-variable game of a formula: left vertices are clauses with the
/// seven slot assignments satisfying the clause as labels, right vertices
/// are variables with labels 0/1, and each literal slot becomes an edge
/// projecting the clause assignment to that slot's variable bit.
pub fn clause_variable_game(phi: &ThreeSatFormula) -> Result<LabelCoverInstance> {
    phi.validate()?;
    if phi.clauses.is_empty() {
        return Err(Error::InvalidInstance("formula has no clauses".into()));
    }
    let mut edges = Vec::with_capacity(phi.clauses.len() * 3);
    for (ci, clause) in phi.clauses.iter().enumerate() {
        let slots: Vec<(usize, bool)> =
            clause.iter().map(|&lit| ThreeSatFormula::literal(lit)).collect();
        // Bit triples (slot 0 most significant) that satisfy some slot's
        // literal; exactly one of the eight fails every slot.
        let satisfying: Vec<[usize; 3]> = (0..8u32)
            .map(|m| [(m >> 2) & 1, (m >> 1) & 1, m & 1].map(|b| b as usize))
            .filter(|bits| {
                bits.iter()
                    .zip(&slots)
                    .any(|(&b, &(_, positive))| (b == 1) == positive)
            })
            .collect();
        debug_assert_eq!(satisfying.len(), 7);
        for (slot, &(var, _)) in slots.iter().enumerate() {
            edges.push(LabelCoverEdge {
                left: ci,
                right: var,
                projection: satisfying.iter().map(|bits| bits[slot]).collect(),
            });
        }
    }
    LabelCoverInstance::new(phi.clauses.len(), phi.num_vars, 7, 2, edges)
}

/// Group the left side into `ell` super-vertices of equal size (padding with
/// copies of the lowest-id vertex first), with tuple labels read
/// coordinatewise by the reattached edges. The satisfiable optimum is
/// preserved.
pub fn merge_supervertices(l: &LabelCoverInstance, ell: usize) -> Result<LabelCoverInstance> {
    if ell == 0 {
        return Err(Error::InvalidParameter("group count must be at least 1".into()));
    }
    if ell > l.num_left {
        return Err(Error::InvalidParameter(format!(
            "cannot form {ell} groups out of {} left vertices",
            l.num_left
        )));
    }
    let mut edges = l.edges.clone();
    let mut padded = l.num_left;
    while padded % ell != 0 {
        for e in &l.edges {
            if e.left == 0 {
                edges.push(LabelCoverEdge { left: padded, ..e.clone() });
            }
        }
        padded += 1;
    }
    let group_size = padded / ell;
    let new_sigma = upow(l.sigma_left, group_size);
    if new_sigma.saturating_mul(edges.len() as u128) > ENUMERATION_LIMIT {
        return Err(Error::OracleBudgetExceeded(format!(
            "merged alphabet of {new_sigma} labels across {} edges exceeds the enumeration limit",
            edges.len()
        )));
    }
    let new_sigma = new_sigma as usize;
    // Composite labels are group-size digits in base sigma_left, the
    // group's first vertex most significant.
    let merged = edges
        .into_iter()
        .map(|e| {
            let group = e.left / group_size;
            let pos = e.left % group_size;
            let stride = l.sigma_left.pow((group_size - 1 - pos) as u32);
            let projection = (0..new_sigma)
                .map(|label| e.projection[(label / stride) % l.sigma_left])
                .collect();
            LabelCoverEdge { left: group, right: e.right, projection }
        })
        .collect();
    LabelCoverInstance::new(ell, l.num_right, new_sigma, l.sigma_right, merged)
}

/// The `r`-fold product game: vertices, labels, and edges are tuples and
/// projections act coordinatewise. A fully satisfying labeling lifts, so an
/// optimum of 1 is preserved.
pub fn parallel_repetition(l: &LabelCoverInstance, r: usize) -> Result<LabelCoverInstance> {
    if r == 0 {
        return Err(Error::InvalidParameter("repetition count must be at least 1".into()));
    }
    let num_edges = upow(l.edges.len(), r);
    let num_left = upow(l.num_left, r);
    let num_right = upow(l.num_right, r);
    let sigma_left = upow(l.sigma_left, r);
    let sigma_right = upow(l.sigma_right, r);
    let table_entries = num_edges.saturating_mul(sigma_left);
    for (what, size) in [
        ("edge", num_edges),
        ("left-vertex", num_left),
        ("right-vertex", num_right),
        ("right-alphabet", sigma_right),
        ("projection-table", table_entries),
    ] {
        if size > ENUMERATION_LIMIT {
            return Err(Error::OracleBudgetExceeded(format!(
                "{r}-fold product {what} count {size} exceeds the enumeration limit"
            )));
        }
    }
    let sigma_left = sigma_left as usize;
    let sigma_right = sigma_right as usize;
    if l.edges.is_empty() {
        return LabelCoverInstance::new(
            num_left as usize,
            num_right as usize,
            sigma_left,
            sigma_right,
            Vec::new(),
        );
    }
    let mut edges = Vec::with_capacity(num_edges as usize);
    let mut tuple = vec![0usize; r];
    loop {
        let parts: Vec<&LabelCoverEdge> = tuple.iter().map(|&t| &l.edges[t]).collect();
        let left = parts.iter().fold(0, |acc, e| acc * l.num_left + e.left);
        let right = parts.iter().fold(0, |acc, e| acc * l.num_right + e.right);
        let projection = (0..sigma_left)
            .map(|label| {
                // Decode the composite label coordinatewise, first factor
                // most significant, and recombine the images.
                let mut rest = label;
                let mut images = vec![0usize; r];
                for t in (0..r).rev() {
                    images[t] = parts[t].projection[rest % l.sigma_left];
                    rest /= l.sigma_left;
                }
                images.iter().fold(0, |acc, &img| acc * l.sigma_right + img)
            })
            .collect();
        edges.push(LabelCoverEdge { left, right, projection });
        if !advance(&mut tuple, l.edges.len()) {
            break;
        }
    }
    LabelCoverInstance::new(num_left as usize, num_right as usize, sigma_left, sigma_right, edges)
}

/// An exact optimum labeling and the fraction of edges it satisfies.
#[derive(Debug, Clone)]
pub struct LabelCoverOpt {
    pub fraction: f64,
    pub left_labels: Vec<usize>,
    pub right_labels: Vec<usize>,
}

/// Exhaustive optimum: enumerate right labelings and let each left vertex
/// pick its best label independently. An empty edge set is vacuously fully
/// satisfied.
pub fn label_cover_opt(l: &LabelCoverInstance) -> Result<LabelCoverOpt> {
    l.validate()?;
    if l.edges.is_empty() {
        return Ok(LabelCoverOpt {
            fraction: 1.0,
            left_labels: vec![0; l.num_left],
            right_labels: vec![0; l.num_right],
        });
    }
    let space = upow(l.sigma_left, l.num_left).saturating_mul(upow(l.sigma_right, l.num_right));
    if space > ENUMERATION_LIMIT {
        return Err(Error::OracleBudgetExceeded(format!(
            "labeling space of {space} exceeds the enumeration limit"
        )));
    }
    let mut edges_of: Vec<Vec<usize>> = vec![Vec::new(); l.num_left];
    for (i, e) in l.edges.iter().enumerate() {
        edges_of[e.left].push(i);
    }
    let mut best: Option<(usize, Vec<usize>, Vec<usize>)> = None;
    let mut right = vec![0usize; l.num_right];
    loop {
        let mut total = 0;
        let mut left_labels = vec![0usize; l.num_left];
        for (u, edge_ids) in edges_of.iter().enumerate() {
            let mut best_label = 0;
            let mut best_sat = usize::MAX;
            for label in 0..l.sigma_left {
                let sat = edge_ids
                    .iter()
                    .filter(|&&i| {
                        let e = &l.edges[i];
                        e.projection[label] == right[e.right]
                    })
                    .count();
                if best_sat == usize::MAX || sat > best_sat {
                    best_sat = sat;
                    best_label = label;
                }
            }
            left_labels[u] = best_label;
            total += if best_sat == usize::MAX { 0 } else { best_sat };
        }
        if best.as_ref().is_none_or(|(b, _, _)| total > *b) {
            best = Some((total, left_labels, right.clone()));
        }
        if !advance(&mut right, l.sigma_right) {
            break;
        }
    }
    let (sat, left_labels, right_labels) = best.expect("at least one labeling");
    Ok(LabelCoverOpt {
        fraction: sat as f64 / l.edges.len() as f64,
        left_labels,
        right_labels,
    })
}

pub(crate) fn upow(base: usize, exp: usize) -> u128 {
    let mut out: u128 = 1;
    for _ in 0..exp {
        out = match out.checked_mul(base as u128) {
            Some(v) => v,
            None => return u128::MAX,
        };
    }
    out
}

/// Odometer step over `len(digits)` digits in base `base`, least significant
/// last; `false` once wrapped.
pub(crate) fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}
