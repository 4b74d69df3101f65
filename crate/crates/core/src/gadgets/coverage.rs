//! Weighted coverage systems: the hypergrid family of a projection game,
//! exact and greedy coverage evaluation, and the 1-vs-3 embedding of
//! coverage into k-median.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gadgets::label_cover::{advance, upow, LabelCoverInstance, ENUMERATION_LIMIT};
use crate::metric::{Client, MetricInstance, Objective};

/// A universe element with its weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetElement {
    pub id: usize,
    pub weight: f64,
}

/// A weighted coverage instance: pick `k` of the sets to cover as much
/// element weight as possible. Sets list element ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetSystem {
    pub elements: Vec<SetElement>,
    pub sets: Vec<Vec<usize>>,
    pub k: usize,
}

impl SetSystem {
    pub fn new(elements: Vec<SetElement>, sets: Vec<Vec<usize>>, k: usize) -> Result<Self> {
        let mut s = SetSystem { elements, sets, k };
        for set in &mut s.sets {
            set.sort_unstable();
            set.dedup();
        }
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.elements.is_empty() {
            return Err(Error::InvalidInstance("set system has no elements".into()));
        }
        let mut ids = BTreeSet::new();
        for e in &self.elements {
            if !(e.weight > 0.0) || !e.weight.is_finite() {
                return Err(Error::InvalidInstance(format!(
                    "element {} has non-positive weight {}",
                    e.id, e.weight
                )));
            }
            if !ids.insert(e.id) {
                return Err(Error::InvalidInstance(format!("duplicate element id {}", e.id)));
            }
        }
        for (si, set) in self.sets.iter().enumerate() {
            for &id in set {
                if !ids.contains(&id) {
                    return Err(Error::InvalidInstance(format!(
                        "set {si} references unknown element {id}"
                    )));
                }
            }
        }
        if self.k == 0 || self.k > self.sets.len() {
            return Err(Error::InvalidInstance(format!(
                "k = {} must satisfy 1 <= k <= {} (number of sets)",
                self.k,
                self.sets.len()
            )));
        }
        Ok(())
    }

    pub fn total_weight(&self) -> f64 {
        self.elements.iter().map(|e| e.weight).sum()
    }

    fn weight_by_id(&self) -> BTreeMap<usize, f64> {
        self.elements.iter().map(|e| (e.id, e.weight)).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("set system serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: SetSystem = serde_json::from_str(text)?;
        SetSystem::new(s.elements, s.sets, s.k)
    }
}

/// Covered weight of `chosen` (set indices) as a fraction of the universe
/// weight, by direct union.
pub fn coverage_fraction(s: &SetSystem, chosen: &[usize]) -> Result<f64> {
    let weights = s.weight_by_id();
    let mut union = BTreeSet::new();
    for &si in chosen {
        if si >= s.sets.len() {
            return Err(Error::InvalidParameter(format!(
                "chosen set {si} out of range ({} sets)",
                s.sets.len()
            )));
        }
        union.extend(s.sets[si].iter().copied());
    }
    let covered: f64 = union.iter().map(|id| weights[id]).sum();
    Ok(covered / s.total_weight())
}

/// Standard greedy: `k` rounds, each taking the set of maximum marginal
/// covered weight (lowest id on ties). Returns the picks in order and the
/// weight they cover.
pub fn greedy_max_coverage(s: &SetSystem) -> (Vec<usize>, f64) {
    let weights = s.weight_by_id();
    let mut covered: BTreeSet<usize> = BTreeSet::new();
    let mut chosen = Vec::with_capacity(s.k);
    let mut taken = vec![false; s.sets.len()];
    for _ in 0..s.k {
        let mut best: Option<(f64, usize)> = None;
        for (si, set) in s.sets.iter().enumerate() {
            if taken[si] {
                continue;
            }
            let gain: f64 = set
                .iter()
                .filter(|id| !covered.contains(id))
                .map(|id| weights[id])
                .sum();
            if best.is_none_or(|(bg, _)| gain > bg) {
                best = Some((gain, si));
            }
        }
        let (_, si) = best.expect("k <= number of sets");
        taken[si] = true;
        covered.extend(s.sets[si].iter().copied());
        chosen.push(si);
    }
    let value = covered.iter().map(|id| weights[id]).sum();
    (chosen, value)
}

/// Exact maximum coverage over every k-subset of the family, lexicographically
/// first on ties.
pub fn max_coverage_opt(s: &SetSystem) -> Result<(Vec<usize>, f64)> {
    let combos = crate::baseline::binomial(s.sets.len(), s.k);
    if combos > ENUMERATION_LIMIT {
        return Err(Error::OracleBudgetExceeded(format!(
            "exact coverage needs {combos} subsets"
        )));
    }
    let weights = s.weight_by_id();
    let mut idx: Vec<usize> = (0..s.k).collect();
    let mut best: Option<(f64, Vec<usize>)> = None;
    loop {
        let mut union = BTreeSet::new();
        for &si in &idx {
            union.extend(s.sets[si].iter().copied());
        }
        let value: f64 = union.iter().map(|id| weights[id]).sum();
        if best.as_ref().is_none_or(|(bv, _)| value > *bv) {
            best = Some((value, idx.clone()));
        }
        if !crate::baseline::next_combination(&mut idx, s.sets.len()) {
            break;
        }
    }
    let (value, chosen) = best.expect("at least one subset");
    Ok((chosen, value))
}

/// The hypergrid coverage family of a U-regular projection game, kept
/// analytic: one hypergrid `[a]^{sigma_right}` per (right vertex, a-tuple of
/// its incident edges). The set for (slice j, left vertex u, label l) cuts
/// slice j in coordinate `projection_e(l)` out of every hypergrid whose j-th
/// tuple entry is an edge e pointing at u. Every element of the hypergrids
/// of right vertex v weighs `1 / (d_v^(a-1) * |E|)`, which makes the
/// per-grid weights sum to exactly 1.
#[derive(Debug, Clone)]
pub struct HypergridSystem {
    game: LabelCoverInstance,
    a: usize,
    incident: Vec<Vec<usize>>,
}

impl HypergridSystem {
    pub fn new(game: LabelCoverInstance, a: usize) -> Result<Self> {
        game.validate()?;
        if a == 0 {
            return Err(Error::InvalidParameter("side length a must be at least 1".into()));
        }
        if game.edges.is_empty() {
            return Err(Error::InvalidInstance("hypergrid construction needs edges".into()));
        }
        if game.left_degree().is_none() {
            return Err(Error::InvalidInstance(
                "hypergrid construction needs a left-regular game".into(),
            ));
        }
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); game.num_right];
        for (i, e) in game.edges.iter().enumerate() {
            incident[e.right].push(i);
        }
        let cube = upow(a, game.sigma_right);
        let mut total_grids: u128 = 0;
        for inc in &incident {
            let grids = upow(inc.len(), a);
            if grids.saturating_mul(cube) > ENUMERATION_LIMIT {
                return Err(Error::OracleBudgetExceeded(format!(
                    "a right vertex of degree {} yields {} hypergrid elements",
                    inc.len(),
                    grids.saturating_mul(cube)
                )));
            }
            total_grids = total_grids.saturating_add(grids);
        }
        let num_sets = (a as u128) * (game.num_left as u128) * (game.sigma_left as u128);
        if total_grids > ENUMERATION_LIMIT || num_sets > ENUMERATION_LIMIT {
            return Err(Error::OracleBudgetExceeded(format!(
                "{total_grids} hypergrids / {num_sets} sets exceed the enumeration limit"
            )));
        }
        Ok(HypergridSystem { game, a, incident })
    }

    pub fn game(&self) -> &LabelCoverInstance {
        &self.game
    }

    pub fn a(&self) -> usize {
        self.a
    }

    /// The coverage budget `a * |U|`.
    pub fn k(&self) -> usize {
        self.a * self.game.num_left
    }

    pub fn num_sets(&self) -> usize {
        self.a * self.game.num_left * self.game.sigma_left
    }

    /// Sets are ordered (slice, left vertex, label) lexicographically.
    pub fn set_index(&self, j: usize, u: usize, label: usize) -> usize {
        (j * self.game.num_left + u) * self.game.sigma_left + label
    }

    pub fn set_parts(&self, index: usize) -> (usize, usize, usize) {
        let label = index % self.game.sigma_left;
        let rest = index / self.game.sigma_left;
        (rest / self.game.num_left, rest % self.game.num_left, label)
    }

    /// Number of hypergrids hanging off right vertex `v`.
    pub fn grid_count(&self, v: usize) -> usize {
        upow(self.incident[v].len(), self.a) as usize
    }

    pub fn num_grids(&self) -> usize {
        (0..self.game.num_right).map(|v| self.grid_count(v)).sum()
    }

    /// Per-element (equivalently per-grid) weight of right vertex `v`.
    pub fn grid_weight(&self, v: usize) -> f64 {
        let d = self.incident[v].len();
        debug_assert!(d > 0);
        1.0 / (upow(d, self.a - 1) as f64 * self.game.edges.len() as f64)
    }

    /// Sum of the grid weights over all hypergrids; equals 1 analytically.
    pub fn total_grid_weight(&self) -> f64 {
        (0..self.game.num_right)
            .filter(|&v| !self.incident[v].is_empty())
            .map(|v| self.grid_count(v) as f64 * self.grid_weight(v))
            .sum()
    }

    /// Total weight of the universe, `a^sigma_right` times the grid total.
    pub fn universe_weight(&self) -> f64 {
        upow(self.a, self.game.sigma_right) as f64 * self.total_grid_weight()
    }

    pub fn num_elements(&self) -> usize {
        self.num_grids() * upow(self.a, self.game.sigma_right) as usize
    }

    /// Covered weight of `chosen` (set indices) as a fraction of the
    /// universe weight, without materializing elements: per hypergrid, the
    /// uncovered volume is the product over coordinates of
    /// `(a - distinct slice values chosen there) / a`.
    pub fn coverage_fraction(&self, chosen: &[usize]) -> Result<f64> {
        let mut by_slot: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for &s in chosen {
            if s >= self.num_sets() {
                return Err(Error::InvalidParameter(format!(
                    "chosen set {s} out of range ({} sets)",
                    self.num_sets()
                )));
            }
            if seen.insert(s) {
                let (j, u, label) = self.set_parts(s);
                by_slot.entry((j, u)).or_default().push(label);
            }
        }
        let a = self.a as f64;
        let mut covered = 0.0;
        for v in 0..self.game.num_right {
            let inc = &self.incident[v];
            if inc.is_empty() {
                continue;
            }
            let w = self.grid_weight(v);
            let mut tuple = vec![0usize; self.a];
            loop {
                let mut values: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
                for (j, &pick) in tuple.iter().enumerate() {
                    let e = &self.game.edges[inc[pick]];
                    if let Some(labels) = by_slot.get(&(j, e.left)) {
                        for &label in labels {
                            values.entry(e.projection[label]).or_default().insert(j);
                        }
                    }
                }
                let uncovered: f64 = values
                    .values()
                    .map(|js| (a - js.len() as f64) / a)
                    .product();
                covered += w * (1.0 - uncovered);
                if !advance(&mut tuple, inc.len()) {
                    break;
                }
            }
        }
        Ok(covered / self.total_grid_weight())
    }

    /// The `k = a * |U|` sets induced by a left labeling: every slice index
    /// paired with every left vertex under its label. When the labeling is
    /// part of a fully satisfying one, these cover the whole universe.
    pub fn completeness_cover(&self, left_labels: &[usize]) -> Result<Vec<usize>> {
        if left_labels.len() != self.game.num_left {
            return Err(Error::InvalidParameter(format!(
                "expected {} left labels, got {}",
                self.game.num_left,
                left_labels.len()
            )));
        }
        if left_labels.iter().any(|&l| l >= self.game.sigma_left) {
            return Err(Error::InvalidParameter("left label out of range".into()));
        }
        let mut cover = Vec::with_capacity(self.k());
        for j in 0..self.a {
            for (u, &label) in left_labels.iter().enumerate() {
                cover.push(self.set_index(j, u, label));
            }
        }
        Ok(cover)
    }

    /// Materialize elements and memberships for oracle cross-checks. Element
    /// ids run right vertex by right vertex, grid tuple by grid tuple
    /// (odometer order), cube point by cube point (coordinate 0 most
    /// significant).
    pub fn materialize(&self) -> Result<SetSystem> {
        let cube = upow(self.a, self.game.sigma_right) as usize;
        let work = (self.num_elements() as u128).saturating_mul(self.num_sets() as u128);
        if work > ENUMERATION_LIMIT {
            return Err(Error::OracleBudgetExceeded(format!(
                "materializing needs {work} membership checks"
            )));
        }
        let mut elements = Vec::with_capacity(self.num_elements());
        let mut sets: Vec<Vec<usize>> = vec![Vec::new(); self.num_sets()];
        let mut base = 0usize;
        for v in 0..self.game.num_right {
            let inc = &self.incident[v];
            if inc.is_empty() {
                continue;
            }
            let w = self.grid_weight(v);
            let grids = self.grid_count(v);
            for rank in 0..grids * cube {
                elements.push(SetElement { id: base + rank, weight: w });
            }
            let mut tuple = vec![0usize; self.a];
            let mut grid_rank = 0usize;
            loop {
                let grid_base = base + grid_rank * cube;
                for (j, &pick) in tuple.iter().enumerate() {
                    let e = &self.game.edges[inc[pick]];
                    for label in 0..self.game.sigma_left {
                        let coord = e.projection[label];
                        let stride =
                            upow(self.a, self.game.sigma_right - 1 - coord) as usize;
                        let set = self.set_index(j, e.left, label);
                        for x in 0..cube {
                            if (x / stride) % self.a == j {
                                sets[set].push(grid_base + x);
                            }
                        }
                    }
                }
                grid_rank += 1;
                if !advance(&mut tuple, inc.len()) {
                    break;
                }
            }
            base += grids * cube;
        }
        SetSystem::new(elements, sets, self.k())
    }
}

/// Build and materialize the hypergrid family in one step.
pub fn hypergrid_coverage(game: LabelCoverInstance, a: usize) -> Result<SetSystem> {
    HypergridSystem::new(game, a)?.materialize()
}

/// Embed a coverage system into k-median: sets become facilities, elements
/// become weighted clients, membership pairs sit at distance 1 and
/// everything else at its shortest-path distance in the membership graph
/// (so a missed element is at least 3 from a set). Disconnected pairs get a
/// sentinel beyond twice the point count.
pub fn coverage_to_kmedian(s: &SetSystem) -> Result<MetricInstance> {
    s.validate()?;
    let m = s.elements.len();
    let t = s.sets.len();
    let n = m + t;
    let pos_of: BTreeMap<usize, usize> = s
        .elements
        .iter()
        .enumerate()
        .map(|(p, e)| (e.id, p))
        .collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (si, set) in s.sets.iter().enumerate() {
        for id in set {
            let p = pos_of[id];
            adj[p].push(m + si);
            adj[m + si].push(p);
        }
    }
    let sentinel = (2 * n + 1) as f64;
    let mut dist = vec![vec![sentinel; n]; n];
    for (src, row) in dist.iter_mut().enumerate() {
        row[src] = 0.0;
        let mut hops = vec![usize::MAX; n];
        hops[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if hops[y] == usize::MAX {
                    hops[y] = hops[x] + 1;
                    row[y] = hops[y] as f64;
                    queue.push_back(y);
                }
            }
        }
    }
    let clients: Vec<Client> = s
        .elements
        .iter()
        .enumerate()
        .map(|(p, e)| Client { id: p, weight: e.weight })
        .collect();
    MetricInstance::new(dist, clients, (m..n).collect(), s.k, Objective::Median)
}
