//! Finite metric instances: distance tables, weighted clients, cost
//! evaluation, aspect-ratio control and the geometric radius rounding used by
//! the solver.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a point in the metric space (`0..n`).
pub type PointId = usize;

/// Cost regime: sum of distances or sum of squared distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Median,
    Means,
}

impl Objective {
    /// Transform applied to a client-facility distance inside the cost sum.
    #[inline]
    pub fn apply(self, d: f64) -> f64 {
        match self {
            Objective::Median => d,
            Objective::Means => d * d,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Objective::Median => "median",
            Objective::Means => "means",
        }
    }
}

/// A client located at metric point `id` with a positive demand weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Client {
    pub id: PointId,
    pub weight: f64,
}

/// A weighted client list with unique ids, as produced by coreset
/// construction and accepted anywhere an instance's client set goes.
pub type WeightedClientSet = Vec<Client>;

/// Sum of the weights in a client set.
pub fn total_weight(clients: &[Client]) -> f64 {
    clients.iter().map(|c| c.weight).sum()
}

/// A clustering instance over a finite distance table.
///
/// The table is stored dense and is only required to be square with finite
/// entries at construction time; metric axioms are checked separately by
/// [`validate_metric`] so that deliberately broken tables can be loaded and
/// diagnosed.
#[derive(Debug, Clone)]
pub struct MetricInstance {
    n: usize,
    dist: Vec<f64>,
    clients: Vec<Client>,
    facilities: Vec<PointId>,
    k: usize,
    objective: Objective,
}

impl MetricInstance {
    pub fn new(
        distances: Vec<Vec<f64>>,
        clients: Vec<Client>,
        facilities: Vec<PointId>,
        k: usize,
        objective: Objective,
    ) -> Result<Self> {
        let n = distances.len();
        if n == 0 {
            return Err(Error::InvalidInstance("distance table is empty".into()));
        }
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in distances.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInstance(format!(
                    "distance table is not square: row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &d) in row.iter().enumerate() {
                if !d.is_finite() {
                    return Err(Error::InvalidInstance(format!(
                        "distance ({i},{j}) is not finite"
                    )));
                }
                dist.push(d);
            }
        }
        Self::from_flat(n, dist, clients, facilities, k, objective)
    }

    /// Build an instance from Euclidean coordinates; the distance table is
    /// materialized eagerly.
    pub fn from_euclidean(
        coords: &[Vec<f64>],
        clients: Vec<Client>,
        facilities: Vec<PointId>,
        k: usize,
        objective: Objective,
    ) -> Result<Self> {
        let n = coords.len();
        if n == 0 {
            return Err(Error::InvalidInstance("coordinate list is empty".into()));
        }
        let dim = coords[0].len();
        for (i, p) in coords.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::InvalidInstance(format!(
                    "coordinate {i} has dimension {}, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInstance(format!(
                    "coordinate {i} has a non-finite component"
                )));
            }
        }
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = coords[i]
                    .iter()
                    .zip(&coords[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        Self::from_flat(n, dist, clients, facilities, k, objective)
    }

    fn from_flat(
        n: usize,
        dist: Vec<f64>,
        clients: Vec<Client>,
        mut facilities: Vec<PointId>,
        k: usize,
        objective: Objective,
    ) -> Result<Self> {
        for c in &clients {
            if c.id >= n {
                return Err(Error::InvalidInstance(format!(
                    "client id {} out of range (n = {n})",
                    c.id
                )));
            }
            if !(c.weight > 0.0) || !c.weight.is_finite() {
                return Err(Error::InvalidInstance(format!(
                    "client {} has non-positive weight {}",
                    c.id, c.weight
                )));
            }
        }
        let mut seen = vec![false; n];
        for c in &clients {
            if seen[c.id] {
                return Err(Error::InvalidInstance(format!("duplicate client id {}", c.id)));
            }
            seen[c.id] = true;
        }
        facilities.sort_unstable();
        facilities.dedup();
        if facilities.is_empty() {
            return Err(Error::InvalidInstance("facility set is empty".into()));
        }
        if *facilities.last().unwrap() >= n {
            return Err(Error::InvalidInstance(format!(
                "facility id {} out of range (n = {n})",
                facilities.last().unwrap()
            )));
        }
        if k == 0 || k > facilities.len() {
            return Err(Error::InvalidInstance(format!(
                "k = {k} must satisfy 1 <= k <= {} (number of facilities)",
                facilities.len()
            )));
        }
        Ok(MetricInstance { n, dist, clients, facilities, k, objective })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn objective(&self) -> Objective {
        self.objective
    }

    pub fn clients(&self) -> &[Client] {
        &self.clients
    }

    /// Facility ids, sorted ascending and unique.
    pub fn facilities(&self) -> &[PointId] {
        &self.facilities
    }

    pub fn is_facility(&self, p: PointId) -> bool {
        self.facilities.binary_search(&p).is_ok()
    }

    #[inline]
    pub fn distance(&self, i: PointId, j: PointId) -> f64 {
        self.dist[i * self.n + j]
    }

    /// Same instance with a different client set (used by coresets).
    pub fn with_clients(&self, clients: WeightedClientSet) -> Result<Self> {
        Self::from_flat(
            self.n,
            self.dist.clone(),
            clients,
            self.facilities.clone(),
            self.k,
            self.objective,
        )
    }

    /// Same instance with a different `k` (used by the facility-location
    /// sweep). Fails if `k` leaves the valid range.
    pub fn with_k(&self, k: usize) -> Result<Self> {
        Self::from_flat(
            self.n,
            self.dist.clone(),
            self.clients.clone(),
            self.facilities.clone(),
            k,
            self.objective,
        )
    }

    /// Same instance with the other objective.
    pub fn with_objective(&self, objective: Objective) -> Self {
        let mut out = self.clone();
        out.objective = objective;
        out
    }

    /// Nearest open facility for a point, ties broken toward the lowest
    /// facility id. `open` must be non-empty; duplicates are harmless.
    pub fn nearest_in(&self, p: PointId, open: &[PointId]) -> (PointId, f64) {
        debug_assert!(!open.is_empty());
        let mut best = (open[0], self.distance(p, open[0]));
        for &f in &open[1..] {
            let d = self.distance(p, f);
            if d < best.1 || (d == best.1 && f < best.0) {
                best = (f, d);
            }
        }
        best
    }

    /// Objective value of opening `open` for this instance's clients.
    pub fn cost(&self, open: &[PointId]) -> Result<f64> {
        self.cost_of(&self.clients, open)
    }

    /// Objective value of opening `open` for an arbitrary client list over the
    /// same point set.
    pub fn cost_of(&self, clients: &[Client], open: &[PointId]) -> Result<f64> {
        if open.is_empty() {
            return Err(Error::EmptyFacilitySet);
        }
        let mut total = 0.0;
        for c in clients {
            let mut d = f64::INFINITY;
            for &f in open {
                let df = self.distance(c.id, f);
                if df < d {
                    d = df;
                }
            }
            total += c.weight * self.objective.apply(d);
        }
        Ok(total)
    }

    /// Largest pairwise distance.
    pub fn max_distance(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                m = m.max(self.distance(i, j));
            }
        }
        m
    }

    /// Smallest strictly positive pairwise distance, if any.
    pub fn min_positive_distance(&self) -> Option<f64> {
        let mut m = f64::INFINITY;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let d = self.distance(i, j);
                if d > 0.0 && d < m {
                    m = d;
                }
            }
        }
        if m.is_finite() {
            Some(m)
        } else {
            None
        }
    }

    /// Ratio of the largest to the smallest nonzero pairwise distance.
    pub fn aspect_ratio(&self) -> Result<f64> {
        if self.n < 2 {
            return Err(Error::DegenerateMetric(
                "aspect ratio needs at least two points".into(),
            ));
        }
        let min = self.min_positive_distance().ok_or_else(|| {
            Error::DegenerateMetric("all pairwise distances are zero".into())
        })?;
        Ok(self.max_distance() / min)
    }

    /// Copy of the instance with every distance divided by the smallest
    /// positive distance, so that the smallest positive distance becomes 1.
    /// Returns the scale factor alongside. Fails on all-zero metrics.
    pub fn rescaled(&self) -> Result<(Self, f64)> {
        let scale = self.min_positive_distance().ok_or_else(|| {
            Error::DegenerateMetric("all pairwise distances are zero".into())
        })?;
        let mut out = self.clone();
        for d in &mut out.dist {
            *d /= scale;
        }
        Ok((out, scale))
    }

    /// Number of distinct locations, where two points are the same location
    /// iff their distance is zero.
    pub fn distinct_locations(&self) -> usize {
        let mut repr: Vec<Option<usize>> = vec![None; self.n];
        let mut count = 0;
        for i in 0..self.n {
            if repr[i].is_none() {
                count += 1;
                for j in i..self.n {
                    if repr[j].is_none() && self.distance(i, j) == 0.0 {
                        repr[j] = Some(i);
                    }
                }
            }
        }
        count
    }
}

/// One client-to-facility arc of a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub client: PointId,
    pub facility: PointId,
}

/// A set of open facilities together with the induced assignment and cost.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Solution {
    /// Open facilities, sorted ascending and unique.
    pub facilities: Vec<PointId>,
    /// One entry per client, in the instance's client order; each client is
    /// assigned to its nearest open facility (lowest id on ties).
    pub assignment: Vec<Assignment>,
    /// Objective value implied by the assignment.
    pub cost: f64,
}

impl Solution {
    /// Assign every client of `instance` to its nearest facility in `open`
    /// and total up the cost.
    pub fn build(instance: &MetricInstance, open: &[PointId]) -> Result<Self> {
        let mut facilities: Vec<PointId> = open.to_vec();
        facilities.sort_unstable();
        facilities.dedup();
        if facilities.is_empty() {
            return Err(Error::EmptyFacilitySet);
        }
        if *facilities.last().unwrap() >= instance.n() {
            return Err(Error::InvalidInstance(format!(
                "facility id {} out of range",
                facilities.last().unwrap()
            )));
        }
        let mut assignment = Vec::with_capacity(instance.clients().len());
        let mut cost = 0.0;
        for c in instance.clients() {
            let (f, d) = instance.nearest_in(c.id, &facilities);
            assignment.push(Assignment { client: c.id, facility: f });
            cost += c.weight * instance.objective().apply(d);
        }
        Ok(Solution { facilities, assignment, cost })
    }
}

/// The first metric axiom a distance table violates.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricViolation {
    Negative { i: PointId, j: PointId, value: f64 },
    NonzeroDiagonal { i: PointId, value: f64 },
    Asymmetric { i: PointId, j: PointId, forward: f64, backward: f64 },
    /// `d(i, j) > d(i, via) + d(via, j)`.
    Triangle { i: PointId, j: PointId, via: PointId, direct: f64, detour: f64 },
}

impl std::fmt::Display for MetricViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MetricViolation::Negative { i, j, value } => {
                write!(f, "negative distance d({i},{j}) = {value}")
            }
            MetricViolation::NonzeroDiagonal { i, value } => {
                write!(f, "nonzero diagonal d({i},{i}) = {value}")
            }
            MetricViolation::Asymmetric { i, j, forward, backward } => {
                write!(f, "asymmetric pair d({i},{j}) = {forward} vs d({j},{i}) = {backward}")
            }
            MetricViolation::Triangle { i, j, via, direct, detour } => write!(
                f,
                "triangle violation d({i},{j}) = {direct} > {detour} = d({i},{via}) + d({via},{j})"
            ),
        }
    }
}

/// Outcome of [`validate_metric`].
#[derive(Debug, Clone)]
pub struct ValidationReport {
    /// First violation in scan order, if any.
    pub violation: Option<MetricViolation>,
    /// Whether the cubic triangle-inequality scan actually ran.
    pub triangle_checked: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

/// Largest `n` for which the cubic triangle scan runs without being forced.
pub const TRIANGLE_CHECK_LIMIT: usize = 512;

/// Check nonnegativity, zero diagonal, symmetry and (for `n` up to
/// [`TRIANGLE_CHECK_LIMIT`], or always when `force_triangle` is set) the
/// triangle inequality. Scans row-major and reports the first violation.
pub fn validate_metric(instance: &MetricInstance, force_triangle: bool) -> ValidationReport {
    let n = instance.n();
    for i in 0..n {
        let d = instance.distance(i, i);
        if d != 0.0 {
            return ValidationReport {
                violation: Some(MetricViolation::NonzeroDiagonal { i, value: d }),
                triangle_checked: false,
            };
        }
        for j in 0..n {
            let dij = instance.distance(i, j);
            if dij < 0.0 {
                return ValidationReport {
                    violation: Some(MetricViolation::Negative { i, j, value: dij }),
                    triangle_checked: false,
                };
            }
            let dji = instance.distance(j, i);
            if dij != dji {
                return ValidationReport {
                    violation: Some(MetricViolation::Asymmetric {
                        i,
                        j,
                        forward: dij,
                        backward: dji,
                    }),
                    triangle_checked: false,
                };
            }
        }
    }
    let triangle_checked = n <= TRIANGLE_CHECK_LIMIT || force_triangle;
    if triangle_checked {
        for i in 0..n {
            for j in 0..n {
                let direct = instance.distance(i, j);
                // Relative slack absorbs last-ulp rounding from sqrt and
                // summed detours without masking genuine violations.
                let slack = 1e-9 * direct.max(1.0);
                for via in 0..n {
                    let detour = instance.distance(i, via) + instance.distance(via, j);
                    if direct > detour + slack {
                        return ValidationReport {
                            violation: Some(MetricViolation::Triangle {
                                i,
                                j,
                                via,
                                direct,
                                detour,
                            }),
                            triangle_checked,
                        };
                    }
                }
            }
        }
    }
    ValidationReport { violation: None, triangle_checked }
}

/// Exponent `m` of the smallest power `(1+eps)^m >= a`, with snapping so that
/// values within `1e-9` of an exact power round to that power instead of the
/// next one.
pub(crate) fn ceil_log_exponent(a: f64, epsilon: f64) -> i64 {
    let t = a.ln() / (1.0 + epsilon).ln();
    let r = t.round();
    if (t - r).abs() < 1e-9 {
        r as i64
    } else {
        t.ceil() as i64
    }
}

/// Smallest integral power of `(1+epsilon)` that is at least `a`.
///
/// Requires `a > 0` and `epsilon > 0`. Exact powers map to themselves, so the
/// function is idempotent.
pub fn rounded_radius(a: f64, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be positive and finite, got {epsilon}"
        )));
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "rounded radius needs a positive finite value, got {a}"
        )));
    }
    let m = ceil_log_exponent(a, epsilon);
    Ok((1.0 + epsilon).powi(m as i32))
}

/// Reduce the aspect ratio of an instance to at most `4 * alpha * n^4` while
/// moving any k-clustering optimum only marginally.
///
/// `alpha` is the approximation factor of the downstream solver (at least 1).
/// Long edges are clamped, vanishing edges are raised, and the table is closed
/// back into a metric by all-pairs shortest paths.
pub fn normalize_aspect_ratio(instance: &MetricInstance, alpha: f64) -> Result<MetricInstance> {
    if !(alpha >= 1.0) || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "alpha must be at least 1, got {alpha}"
        )));
    }
    let n = instance.n();
    if n < 2 {
        return Err(Error::DegenerateMetric(
            "normalization needs at least two points".into(),
        ));
    }
    if instance.min_positive_distance().is_none() {
        return Err(Error::DegenerateMetric("all pairwise distances are zero".into()));
    }
    if instance.k() > instance.distinct_locations() {
        return Err(Error::InvalidInstance(format!(
            "k = {} exceeds the {} distinct locations",
            instance.k(),
            instance.distinct_locations()
        )));
    }

    // Farthest-point traversal over facilities gives a k-center radius r*;
    // every k-clustering optimum lives below n * r* and above r* / (2 alpha n),
    // which bounds how far the clamp and the floor may reach.
    let mut centers = vec![instance.facilities()[0]];
    while centers.len() < instance.k() {
        let mut far: Option<(f64, PointId)> = None;
        for &f in instance.facilities() {
            let (_, d) = instance.nearest_in(f, &centers);
            let better = match far {
                None => true,
                Some((bd, bf)) => d > bd || (d == bd && f < bf),
            };
            if better {
                far = Some((d, f));
            }
        }
        centers.push(far.expect("facility set is non-empty").1);
    }
    let r_star = instance
        .clients()
        .iter()
        .map(|c| instance.nearest_in(c.id, &centers).1)
        .fold(0.0, f64::max);
    if r_star == 0.0 {
        // Every client sits on a center: the optimum is 0 and rescaling has
        // nothing to protect, so leave the metric untouched.
        return Ok(instance.clone());
    }

    let nf = n as f64;
    let m = nf * r_star;
    let ceiling = 2.0 * alpha * m;
    let floor = m / (nf * nf * nf);
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            d[i * n + j] = instance.distance(i, j).clamp(floor, ceiling);
        }
    }
    // Floyd-Warshall restores the triangle inequality after clamping.
    for via in 0..n {
        for i in 0..n {
            let div = d[i * n + via];
            for j in 0..n {
                let detour = div + d[via * n + j];
                if detour < d[i * n + j] {
                    d[i * n + j] = detour;
                }
            }
        }
    }
    MetricInstance::from_flat(
        n,
        d,
        instance.clients().to_vec(),
        instance.facilities().to_vec(),
        instance.k(),
        instance.objective(),
    )
}

#[derive(Debug, Serialize, Deserialize)]
struct InstanceJson {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    distances: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coords: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metric: Option<String>,
    clients: Vec<Client>,
    facilities: Vec<PointId>,
    k: usize,
    objective: Objective,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    open_cost: Option<f64>,
}

/// An instance as read from disk: the metric part plus the optional uniform
/// facility opening cost used by the facility-location variant.
#[derive(Debug, Clone)]
pub struct InstanceFile {
    pub instance: MetricInstance,
    pub open_cost: Option<f64>,
}

/// Parse the JSON instance format. Exactly one of `"distances"` and
/// `"coords"` must be present; coordinates require `"metric": "euclidean"`
/// and are expanded into a distance table on load.
pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let raw: InstanceJson = serde_json::from_str(text)?;
    let instance = match (raw.distances, raw.coords) {
        (Some(d), None) => {
            if d.len() != raw.n {
                return Err(Error::Malformed(format!(
                    "\"n\" is {} but the distance table has {} rows",
                    raw.n,
                    d.len()
                )));
            }
            MetricInstance::new(d, raw.clients, raw.facilities, raw.k, raw.objective)?
        }
        (None, Some(coords)) => {
            match raw.metric.as_deref() {
                Some("euclidean") => {}
                other => {
                    return Err(Error::Malformed(format!(
                        "coordinates require \"metric\": \"euclidean\", got {other:?}"
                    )))
                }
            }
            if coords.len() != raw.n {
                return Err(Error::Malformed(format!(
                    "\"n\" is {} but there are {} coordinates",
                    raw.n,
                    coords.len()
                )));
            }
            MetricInstance::from_euclidean(&coords, raw.clients, raw.facilities, raw.k, raw.objective)?
        }
        (Some(_), Some(_)) => {
            return Err(Error::Malformed(
                "give either \"distances\" or \"coords\", not both".into(),
            ))
        }
        (None, None) => {
            return Err(Error::Malformed(
                "one of \"distances\" or \"coords\" is required".into(),
            ))
        }
    };
    if let Some(oc) = raw.open_cost {
        if !(oc > 0.0) || !oc.is_finite() {
            return Err(Error::Malformed(format!(
                "\"open_cost\" must be positive and finite, got {oc}"
            )));
        }
    }
    Ok(InstanceFile { instance, open_cost: raw.open_cost })
}

/// Serialize an instance back to the JSON format, always in distance-table
/// form.
pub fn instance_to_json(instance: &MetricInstance, open_cost: Option<f64>) -> serde_json::Value {
    let n = instance.n();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        rows.push((0..n).map(|j| instance.distance(i, j)).collect::<Vec<_>>());
    }
    let json = InstanceJson {
        n,
        distances: Some(rows),
        coords: None,
        metric: None,
        clients: instance.clients().to_vec(),
        facilities: instance.facilities().to_vec(),
        k: instance.k(),
        objective: instance.objective(),
        open_cost,
    };
    serde_json::to_value(&json).expect("instance serialization cannot fail")
}
