//! Strong coresets by sensitivity sampling: a small weighted client subset
//! whose cost agrees with the full client set up to `1 +- epsilon` for every
//! candidate facility k-set.

use rand::Rng;

use crate::error::{Error, Result};
use crate::metric::{Client, MetricInstance, PointId, WeightedClientSet};
use crate::rng::rng_from_seed;

/// Parameters of the coreset construction.
#[derive(Debug, Clone, Copy)]
pub struct CoresetParams {
    /// Target relative accuracy.
    pub epsilon: f64,
    /// Failure-probability knob; the construction must hold with probability
    /// `1 - delta`.
    pub delta: f64,
    pub seed: u64,
    /// Leading constant `c` of the sample-size formula
    /// `s = c * epsilon^-2 * k * ln n` (exponent `-4` for means).
    pub size_multiplier: f64,
}

impl CoresetParams {
    pub fn new(epsilon: f64, delta: f64, seed: u64) -> Self {
        CoresetParams { epsilon, delta, seed, size_multiplier: 20.0 }
    }

    fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "coreset epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        if !(self.delta > 0.0 && self.delta <= 0.5) {
            return Err(Error::InvalidParameter(format!(
                "coreset delta must lie in (0, 1/2], got {}",
                self.delta
            )));
        }
        if !(self.size_multiplier > 0.0) || !self.size_multiplier.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "coreset size multiplier must be positive, got {}",
                self.size_multiplier
            )));
        }
        Ok(())
    }
}

/// Sample size targeted by [`build_coreset`] for this instance and parameter
/// choice.
pub fn target_sample_size(instance: &MetricInstance, params: &CoresetParams) -> usize {
    let exponent = match instance.objective() {
        crate::metric::Objective::Median => 2,
        crate::metric::Objective::Means => 4,
    };
    let eps_term = params.epsilon.powi(-exponent);
    let log_term = (instance.n() as f64).ln().max(1.0);
    let s = params.size_multiplier * eps_term * instance.k() as f64 * log_term;
    (s.ceil() as usize).max(1)
}

/// Build a weighted client subset standing in for the full client set.
///
/// A bicriteria reference of up to `k` client locations is seeded by
/// distance-proportional sampling (squared distances under the means
/// objective). Each client's sensitivity combines its share of the reference
/// cost and its share of its reference cluster's weight; clients are then
/// drawn with replacement proportionally to sensitivity and reweighted
/// inversely, with duplicate draws merged. If the client set is already no
/// larger than the target sample size, it is returned unchanged.
pub fn build_coreset(
    instance: &MetricInstance,
    params: &CoresetParams,
) -> Result<WeightedClientSet> {
    params.validate()?;
    let clients = instance.clients();
    if clients.is_empty() {
        return Ok(Vec::new());
    }
    let s = target_sample_size(instance, params);
    if clients.len() <= s {
        return Ok(clients.to_vec());
    }
    let p = instance.objective();
    let mut rng = rng_from_seed(params.seed);

    // Reference centers: first pick by weight, later picks by weighted
    // transformed distance to the current centers.
    let mut centers: Vec<PointId> = Vec::with_capacity(instance.k());
    let first = weighted_pick(&mut rng, clients.iter().map(|c| c.weight))
        .expect("clients are non-empty with positive weights");
    centers.push(clients[first].id);
    while centers.len() < instance.k() {
        let masses: Vec<f64> = clients
            .iter()
            .map(|c| c.weight * p.apply(instance.nearest_in(c.id, &centers).1))
            .collect();
        match weighted_pick(&mut rng, masses.iter().copied()) {
            Some(j) => centers.push(clients[j].id),
            // Every client already sits on a center; more picks change nothing.
            None => break,
        }
    }

    // Cluster each client to its nearest reference center (earliest pick on
    // ties) and total up cluster weights and the reference cost.
    let mut cluster = vec![0usize; clients.len()];
    let mut ref_cost = 0.0;
    let mut ref_dist = vec![0.0; clients.len()];
    for (j, c) in clients.iter().enumerate() {
        let mut best = (0usize, instance.distance(c.id, centers[0]));
        for (ci, &ctr) in centers.iter().enumerate().skip(1) {
            let d = instance.distance(c.id, ctr);
            if d < best.1 {
                best = (ci, d);
            }
        }
        cluster[j] = best.0;
        ref_dist[j] = best.1;
        ref_cost += c.weight * p.apply(best.1);
    }
    let mut cluster_weight = vec![0.0f64; centers.len()];
    for (j, c) in clients.iter().enumerate() {
        cluster_weight[cluster[j]] += c.weight;
    }

    let sensitivities: Vec<f64> = clients
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let cost_share = if ref_cost > 0.0 {
                c.weight * p.apply(ref_dist[j]) / ref_cost
            } else {
                0.0
            };
            cost_share + c.weight / cluster_weight[cluster[j]]
        })
        .collect();
    let total: f64 = sensitivities.iter().sum();

    let mut draws = vec![0usize; clients.len()];
    for _ in 0..s {
        let j = weighted_pick(&mut rng, sensitivities.iter().copied())
            .expect("sensitivities are strictly positive");
        draws[j] += 1;
    }
    let mut out: WeightedClientSet = Vec::new();
    for (j, &count) in draws.iter().enumerate() {
        if count > 0 {
            let w = clients[j].weight * total / (s as f64 * sensitivities[j]);
            out.push(Client { id: clients[j].id, weight: w * count as f64 });
        }
    }
    Ok(out)
}

/// Relative cost disagreement between the full client set and a coreset for
/// one facility set: `|cost_coreset - cost_full| / cost_full`. Returns 0 when
/// both costs vanish and infinity when only the full cost does.
pub fn coreset_error(
    instance: &MetricInstance,
    coreset: &[Client],
    open: &[PointId],
) -> Result<f64> {
    let full = instance.cost(open)?;
    let small = instance.cost_of(coreset, open)?;
    if full == 0.0 {
        return Ok(if small == 0.0 { 0.0 } else { f64::INFINITY });
    }
    Ok((small - full).abs() / full)
}

fn weighted_pick<R: Rng>(rng: &mut R, masses: impl Iterator<Item = f64> + Clone) -> Option<usize> {
    let total: f64 = masses.clone().sum();
    if !(total > 0.0) {
        return None;
    }
    let mut u = rng.random::<f64>() * total;
    let mut last = None;
    for (j, m) in masses.enumerate() {
        if m <= 0.0 {
            continue;
        }
        last = Some(j);
        if u < m {
            return Some(j);
        }
        u -= m;
    }
    last
}
