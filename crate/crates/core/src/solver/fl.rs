//! Facility location by sweeping the enumeration solver over every opening
//! count `k` and extending each per-guess base with unconstrained greedy
//! picks, trading extra openings for connection cost.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::coreset::CoresetParams;
use crate::error::{Error, Result};
use crate::metric::{MetricInstance, Objective, PointId, Solution};
use crate::rng::derive_seed;
use crate::solver::extension::{FictitiousExtension, ImprovObjective};
use crate::solver::grid::{guess_count, GuessContext, GuessStream, RadiusGrid};
use crate::solver::{SolverConfig, Maximizer};
use crate::submodular::{
    boost_best_of, continuous_greedy_max, greedy_matroid_max, marginal_gain, SetFunction,
    BRUTE_FORCE_GUARD,
};

/// A metric instance with a uniform facility opening cost. The instance's
/// `k` field caps the opening-count sweep; the objective must be median
/// (connection costs are plain distances).
#[derive(Debug, Clone)]
pub struct FlInstance {
    pub base: MetricInstance,
    pub open_cost: f64,
}

impl FlInstance {
    pub fn new(base: MetricInstance, open_cost: f64) -> Result<Self> {
        if base.objective() != Objective::Median {
            return Err(Error::InvalidParameter(
                "facility location uses plain connection distances; objective must be median"
                    .into(),
            ));
        }
        if !(open_cost > 0.0) || !open_cost.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "opening cost must be positive and finite, got {open_cost}"
            )));
        }
        Ok(FlInstance { base, open_cost })
    }
}

#[derive(Debug, Clone)]
pub struct FlConfig {
    pub solver: SolverConfig,
    /// Largest `gamma` in the bicriteria sweep: per-guess candidate sets grow
    /// up to `floor(gamma_max * k)` facilities.
    pub gamma_max: f64,
    /// Override for the sweep's largest opening count (defaults to the
    /// instance's `k`).
    pub k_max: Option<usize>,
}

impl FlConfig {
    pub fn new(epsilon: f64) -> Self {
        FlConfig { solver: SolverConfig::new(epsilon), gamma_max: 2.0, k_max: None }
    }
}

/// A facility-location solve: the chosen facilities with the cost split into
/// connection and opening parts.
#[derive(Debug, Clone)]
pub struct FlOutcome {
    pub solution: Solution,
    pub connection_cost: f64,
    pub opening_cost: f64,
    pub total_cost: f64,
    pub guesses: u128,
}

pub fn solve_facility_location(
    fl: &FlInstance,
    config: &FlConfig,
    coreset: Option<&CoresetParams>,
) -> Result<FlOutcome> {
    config.solver.validate()?;
    if !(config.gamma_max >= 1.0) || !config.gamma_max.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "gamma_max must be at least 1, got {}",
            config.gamma_max
        )));
    }
    let reduced;
    let target: &MetricInstance = match coreset {
        Some(params) => {
            let clients = crate::coreset::build_coreset(&fl.base, params)?;
            reduced = fl.base.with_clients(clients)?;
            &reduced
        }
        None => &fl.base,
    };

    if target.clients().is_empty() || target.min_positive_distance().is_none() {
        // All connection costs are zero; open the single cheapest option.
        let facs = vec![fl.base.facilities()[0]];
        return finish(fl, &facs, 0);
    }

    let (work, scale) = target.rescaled()?;
    let open_work = fl.open_cost / scale;
    let delta = work.max_distance();
    let has_zero = work
        .clients()
        .iter()
        .any(|c| work.facilities().iter().any(|&f| work.distance(c.id, f) == 0.0));
    let grid = RadiusGrid::new(config.solver.epsilon, delta, has_zero)?;

    let k_cap = config
        .k_max
        .unwrap_or(target.k())
        .clamp(1, target.facilities().len());
    let c = work.clients().len();
    let l = grid.num_levels();

    let mut total_guesses: u128 = 0;
    for k in 1..=k_cap {
        total_guesses = total_guesses.saturating_add(guess_count(c, k, l));
    }
    if total_guesses > config.solver.guess_budget {
        return Err(Error::GuessBudgetExceeded {
            needed: total_guesses,
            budget: config.solver.guess_budget,
        });
    }

    // Which (leader, level) slots have a non-empty shell (shared across k).
    let mut occupied = vec![vec![false; l]; c];
    for (li, client) in work.clients().iter().enumerate() {
        for &f in work.facilities() {
            if let Some(level) = grid.level_of(work.distance(f, client.id)) {
                occupied[li][level] = true;
            }
        }
    }

    let mut best: Option<(f64, usize, u64, Vec<PointId>)> = None;
    for k in 1..=k_cap {
        let mut first_of: HashMap<Vec<(u32, u32)>, u64> = HashMap::new();
        let mut sig = Vec::new();
        for (idx, guess) in GuessStream::new(c, k, l).enumerate() {
            sig.clear();
            for (&li, &level) in guess.leaders.iter().zip(&guess.levels) {
                if occupied[li][level] {
                    sig.push((li as u32, level as u32));
                }
            }
            if sig.is_empty() {
                continue;
            }
            sig.sort_unstable();
            if !first_of.contains_key(&sig) {
                first_of.insert(sig.clone(), idx as u64);
            }
        }
        let mut signatures: Vec<(Vec<(u32, u32)>, u64)> = first_of.into_iter().collect();
        signatures.sort_by_key(|&(_, first)| first);

        let t_max = ((config.gamma_max * k as f64).floor() as usize).max(k);
        let per_sig: Vec<Result<Vec<(f64, u64, Vec<PointId>)>>> = signatures
            .par_iter()
            .map(|(sig, first)| {
                candidates_for_signature(
                    &work,
                    &grid,
                    sig,
                    *first,
                    config,
                    open_work,
                    k,
                    t_max,
                )
            })
            .collect();
        for result in per_sig {
            for (total, first, facs) in result? {
                let better = match &best {
                    None => true,
                    Some((bt, bk, bf, _)) => {
                        total < *bt
                            || (total == *bt && (k, first) < (*bk, *bf))
                    }
                };
                if better {
                    best = Some((total, k, first, facs));
                }
            }
        }
    }
    let (_, _, _, facs) = best.ok_or_else(|| {
        Error::InvalidInstance("no guess produced a feasible facility set".into())
    })?;
    finish(fl, &facs, total_guesses)
}

#[allow(clippy::too_many_arguments)]
fn candidates_for_signature(
    work: &MetricInstance,
    grid: &RadiusGrid,
    sig: &[(u32, u32)],
    first: u64,
    config: &FlConfig,
    open_work: f64,
    k: usize,
    t_max: usize,
) -> Result<Vec<(f64, u64, Vec<PointId>)>> {
    let guess = GuessContext {
        leaders: sig.iter().map(|&(li, _)| li as usize).collect(),
        levels: sig.iter().map(|&(_, lv)| lv as usize).collect(),
    };
    let ext = FictitiousExtension::build(work, &guess, grid)
        .expect("signatures only contain occupied slots");
    let f = ImprovObjective::new(&ext);
    let mut out = Vec::new();

    // Base transversal: one copy per part.
    let base: Vec<usize> = match config.solver.maximizer {
        Maximizer::Exact => {
            let sizes: Vec<usize> = ext.parts().iter().map(|p| p.members.len()).collect();
            let mut product: u128 = 1;
            for &s in &sizes {
                product = product.saturating_mul(s as u128);
            }
            if product > BRUTE_FORCE_GUARD {
                return Err(Error::OracleBudgetExceeded(format!(
                    "exact inner search would visit {product} transversals"
                )));
            }
            let mut offsets = Vec::with_capacity(sizes.len());
            let mut acc = 0;
            for &s in &sizes {
                offsets.push(acc);
                acc += s;
            }
            let mut counters = vec![0usize; sizes.len()];
            let mut best: Option<(f64, Vec<usize>)> = None;
            'outer: loop {
                let copies: Vec<usize> = counters
                    .iter()
                    .zip(&offsets)
                    .map(|(&cc, &o)| o + cc)
                    .collect();
                let facs = ext.reconstruct(&copies);
                let total = open_work * facs.len() as f64 + work.cost(&facs)?;
                if best.as_ref().is_none_or(|(bt, _)| total < *bt) {
                    best = Some((total, copies));
                }
                let mut i = sizes.len();
                loop {
                    if i == 0 {
                        break 'outer;
                    }
                    i -= 1;
                    counters[i] += 1;
                    if counters[i] < sizes[i] {
                        break;
                    }
                    counters[i] = 0;
                }
            }
            best.expect("parts are non-empty").1
        }
        Maximizer::Greedy => greedy_matroid_max(&f, &ext.partition_constraint().as_matroid())?,
        Maximizer::ContinuousGreedy => {
            let pc = ext.partition_constraint();
            boost_best_of(
                config.solver.boost_rounds,
                derive_seed(config.solver.seed, first),
                |s| {
                    let set = continuous_greedy_max(&f, &pc, config.solver.cg, s)?;
                    let value = f.eval(&set);
                    Ok((set, value))
                },
            )?
            .0
        }
    };

    // Extension chain: each prefix is one bicriteria candidate, so a single
    // greedy pass covers every gamma = t / k at once.
    let mut current = base;
    loop {
        let facs = ext.reconstruct(&current);
        let total = open_work * facs.len() as f64 + work.cost(&facs)?;
        out.push((total, first, facs));
        if current.len() >= t_max {
            break;
        }
        let mut best_add: Option<(f64, usize)> = None;
        for e in 0..f.ground_size() {
            if current.binary_search(&e).is_ok() {
                continue;
            }
            let gain = marginal_gain(&f, &current, e);
            if best_add.is_none_or(|(bv, _)| gain > bv) {
                best_add = Some((gain, e));
            }
        }
        match best_add {
            Some((gain, e)) if gain > 0.0 => {
                current.insert(current.partition_point(|&x| x < e), e);
            }
            _ => break,
        }
    }
    let _ = k;
    Ok(out)
}

fn finish(fl: &FlInstance, facs: &[PointId], guesses: u128) -> Result<FlOutcome> {
    let solution = Solution::build(&fl.base, facs)?;
    let connection_cost = solution.cost;
    let opening_cost = fl.open_cost * solution.facilities.len() as f64;
    Ok(FlOutcome {
        connection_cost,
        opening_cost,
        total_cost: connection_cost + opening_cost,
        solution,
        guesses,
    })
}
