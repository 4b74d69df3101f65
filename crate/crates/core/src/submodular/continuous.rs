//! Continuous greedy over the partition-matroid polytope with randomized
//! rounding, and the bicriteria variant that keeps extending past one element
//! per part.

use rand::Rng;

use super::{greedy_matroid_max, marginal_gain, PartitionConstraint, SetFunction};
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Discretization and sampling effort of the continuous greedy ascent.
#[derive(Debug, Clone, Copy)]
pub struct ContinuousGreedyConfig {
    /// Number of ascent steps (the step size is `1 / steps`).
    pub steps: usize,
    /// Random set draws per coordinate per step when estimating marginals of
    /// the multilinear extension.
    pub samples: usize,
}

impl Default for ContinuousGreedyConfig {
    fn default() -> Self {
        ContinuousGreedyConfig { steps: 100, samples: 64 }
    }
}

/// Maximize a monotone submodular `f` over "one element per part" by running
/// continuous greedy on the multilinear extension and rounding part by part,
/// then return the better of the rounded base and a plain lazy-greedy base.
pub fn continuous_greedy_max(
    f: &dyn SetFunction,
    pc: &PartitionConstraint,
    cfg: ContinuousGreedyConfig,
    seed: u64,
) -> Result<Vec<usize>> {
    let n = f.ground_size();
    if pc.ground_size() != n {
        return Err(Error::InvalidParameter(format!(
            "objective ground size {n} does not match partition ground size {}",
            pc.ground_size()
        )));
    }
    if cfg.steps == 0 || cfg.samples == 0 {
        return Err(Error::InvalidParameter(
            "continuous greedy needs at least one step and one sample".into(),
        ));
    }

    let mut rng = rng_from_seed(seed);
    let mut y = vec![0.0f64; n];
    let step = 1.0 / cfg.steps as f64;
    let mut draw = Vec::with_capacity(n);
    for _ in 0..cfg.steps {
        // The best direction in the polytope is one element per part; pick it
        // by estimated marginal value of the multilinear extension at y.
        let mut chosen = Vec::with_capacity(pc.num_parts());
        for p in 0..pc.num_parts() {
            let mut best: Option<(f64, usize)> = None;
            for &e in pc.members(p) {
                let mut total = 0.0;
                for _ in 0..cfg.samples {
                    draw.clear();
                    for g in 0..n {
                        if g != e && rng.random::<f64>() < y[g] {
                            draw.push(g);
                        }
                    }
                    total += marginal_gain(f, &draw, e);
                }
                let est = total / cfg.samples as f64;
                if best.is_none_or(|(bv, _)| est > bv) {
                    best = Some((est, e));
                }
            }
            chosen.push(best.expect("parts are non-empty").1);
        }
        for e in chosen {
            y[e] += step;
        }
    }

    // Round: within each part the mass sums to ~1; pick proportionally.
    let mut rounded = Vec::with_capacity(pc.num_parts());
    for p in 0..pc.num_parts() {
        let members = pc.members(p);
        let total: f64 = members.iter().map(|&e| y[e]).sum();
        let pick = if total > 0.0 {
            let mut u = rng.random::<f64>() * total;
            let mut pick = members[members.len() - 1];
            for &e in members {
                if u < y[e] {
                    pick = e;
                    break;
                }
                u -= y[e];
            }
            pick
        } else {
            members[0]
        };
        rounded.push(pick);
    }
    rounded.sort_unstable();

    let greedy = greedy_matroid_max(f, &pc.as_matroid())?;
    if f.eval(&rounded) > f.eval(&greedy) {
        Ok(rounded)
    } else {
        Ok(greedy)
    }
}

/// Bicriteria maximization: a continuous-greedy base (one per part, `k`
/// elements) extended by up to `gamma * k - k` unconstrained greedy picks.
/// `gamma >= 1` and `gamma * k` must be an integer. The result has at most
/// `gamma * k` elements and contains a full base.
pub fn bicriteria_max(
    f: &dyn SetFunction,
    pc: &PartitionConstraint,
    gamma: f64,
    cfg: ContinuousGreedyConfig,
    seed: u64,
) -> Result<Vec<usize>> {
    let k = pc.num_parts();
    if !(gamma >= 1.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "gamma must be at least 1, got {gamma}"
        )));
    }
    let target = gamma * k as f64;
    if (target - target.round()).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "gamma * k must be an integer, got {target}"
        )));
    }
    let target = target.round() as usize;

    let mut solution = continuous_greedy_max(f, pc, cfg, seed)?;
    while solution.len() < target {
        let mut best: Option<(f64, usize)> = None;
        for e in 0..f.ground_size() {
            if solution.binary_search(&e).is_ok() {
                continue;
            }
            let gain = marginal_gain(f, &solution, e);
            if best.is_none_or(|(bv, _)| gain > bv) {
                best = Some((gain, e));
            }
        }
        match best {
            Some((gain, e)) if gain > 0.0 => {
                solution.insert(solution.partition_point(|&x| x < e), e);
            }
            _ => break,
        }
    }
    Ok(solution)
}
