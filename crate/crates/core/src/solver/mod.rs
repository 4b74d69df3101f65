//! The leader-radius enumeration solver.
//!
//! For every multiset of `k` client leaders and every assignment of rounded
//! radii to them, the facilities split into shells; copies of the shells form
//! a partitioned ground set, and the best "one facility per shell" choice is
//! found by maximizing the cost improvement over fictitious anchor
//! facilities. The cheapest choice across all guesses is returned.
//!
//! Guesses that induce the same non-empty shells are solved once: the inner
//! subproblem only depends on which (leader, radius) slots are occupied, so
//! duplicate-slot and empty-slot variants share a signature. All guesses are
//! still counted against the budget and reported.

pub mod extension;
pub mod fl;
pub mod grid;
mod reference;

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metric::{MetricInstance, PointId, Solution};
use crate::submodular::{
    boost_best_of, continuous_greedy_max, greedy_matroid_max, ContinuousGreedyConfig,
    IndependenceOracle, MatroidOracle, SetFunction, two_matroid_local_search,
    BRUTE_FORCE_GUARD,
};
use crate::rng::derive_seed;

use extension::{FictitiousExtension, ImprovObjective};
use grid::{guess_count, GuessContext, GuessStream, RadiusGrid};

pub use fl::{solve_facility_location, FlConfig, FlInstance, FlOutcome};
pub use reference::{optimal_reference, OptimalReference};

/// Which engine solves the per-guess subproblem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Maximizer {
    /// Exhaustive search over one-facility-per-shell choices.
    Exact,
    /// Continuous greedy plus rounding, boosted over several seeds. On the
    /// matroid variant this engine is the two-matroid local search.
    ContinuousGreedy,
    /// Lazy greedy. On the matroid variant this engine is the two-matroid
    /// local search as well.
    Greedy,
}

/// Default ceiling on the number of enumerated guesses.
pub const DEFAULT_GUESS_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub epsilon: f64,
    pub maximizer: Maximizer,
    pub seed: u64,
    /// Enumerating more than this many guesses aborts the solve.
    pub guess_budget: u128,
    /// Restart rounds for the randomized inner engine.
    pub boost_rounds: usize,
    pub cg: ContinuousGreedyConfig,
}

impl SolverConfig {
    pub fn new(epsilon: f64) -> Self {
        SolverConfig {
            epsilon,
            maximizer: Maximizer::ContinuousGreedy,
            seed: 0,
            guess_budget: DEFAULT_GUESS_BUDGET,
            boost_rounds: 10,
            cg: ContinuousGreedyConfig::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be positive and finite, got {}",
                self.epsilon
            )));
        }
        if self.boost_rounds == 0 {
            return Err(Error::InvalidParameter(
                "boost rounds must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// A finished solve: the solution (against the instance handed in) and how
/// many guesses the enumeration spanned.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub solution: Solution,
    pub guesses: u128,
}

/// A guess signature: the occupied (leader client index, radius level) slots,
/// sorted. Guesses sharing a signature induce identical subproblems.
type Signature = Vec<(u32, u32)>;

struct Enumeration {
    /// Distinct signatures with the index of the first guess producing each,
    /// ordered by that index.
    signatures: Vec<(Signature, u64)>,
    total_guesses: u128,
}

fn enumerate_signatures(
    work: &MetricInstance,
    grid: &RadiusGrid,
    budget: u128,
) -> Result<Enumeration> {
    let c = work.clients().len();
    let k = work.k();
    let l = grid.num_levels();
    let total = guess_count(c, k, l);
    if total > budget {
        return Err(Error::GuessBudgetExceeded { needed: total, budget });
    }
    // Which (leader, level) slots have a non-empty shell.
    let mut occupied = vec![vec![false; l]; c];
    for (li, client) in work.clients().iter().enumerate() {
        for &f in work.facilities() {
            if let Some(level) = grid.level_of(work.distance(f, client.id)) {
                occupied[li][level] = true;
            }
        }
    }
    let mut first_of: HashMap<Signature, u64> = HashMap::new();
    let mut sig = Signature::new();
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
    let mut signatures: Vec<(Signature, u64)> = first_of.into_iter().collect();
    signatures.sort_by_key(|&(_, first)| first);
    Ok(Enumeration { signatures, total_guesses: total })
}

fn guess_of_signature(sig: &Signature) -> GuessContext {
    GuessContext {
        leaders: sig.iter().map(|&(li, _)| li as usize).collect(),
        levels: sig.iter().map(|&(_, lv)| lv as usize).collect(),
    }
}

/// Exhaustive inner engine: walk every one-copy-per-part choice, keep the one
/// whose reconstructed facilities cost least. `accept` filters choices (the
/// matroid variant rejects dependent reconstructions).
fn exact_transversal(
    ext: &FictitiousExtension<'_>,
    accept: impl Fn(&[PointId]) -> bool,
) -> Result<Option<(Vec<PointId>, f64)>> {
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
    let work = ext.instance();
    let mut offsets = Vec::with_capacity(sizes.len());
    let mut acc = 0;
    for &s in &sizes {
        offsets.push(acc);
        acc += s;
    }
    let mut counters = vec![0usize; sizes.len()];
    let mut best: Option<(Vec<PointId>, f64)> = None;
    loop {
        let copies: Vec<usize> = counters
            .iter()
            .zip(&offsets)
            .map(|(&c, &o)| o + c)
            .collect();
        let facs = ext.reconstruct(&copies);
        if accept(&facs) {
            let cost = work.cost(&facs)?;
            if best.as_ref().is_none_or(|(_, bc)| cost < *bc) {
                best = Some((facs, cost));
            }
        }
        // Odometer over the parts, last slot fastest.
        let mut i = sizes.len();
        loop {
            if i == 0 {
                return Ok(best);
            }
            i -= 1;
            counters[i] += 1;
            if counters[i] < sizes[i] {
                break;
            }
            counters[i] = 0;
        }
    }
}

/// Copies of the same facility collapse: a copy set is independent when its
/// originals are distinct and form an independent set of the base matroid
/// over facility indices.
struct LiftedMatroid<'a, 'b> {
    ext: &'b FictitiousExtension<'a>,
    base: &'b MatroidOracle,
}

impl LiftedMatroid<'_, '_> {
    fn original_indices(&self, copies: &[usize]) -> Option<Vec<usize>> {
        let facs = self.ext.instance().facilities();
        let mut out: Vec<usize> = copies
            .iter()
            .map(|&g| {
                facs.binary_search(&self.ext.original_of(g))
                    .expect("copies refer to facilities")
            })
            .collect();
        out.sort_unstable();
        let before = out.len();
        out.dedup();
        if out.len() != before {
            return None;
        }
        Some(out)
    }
}

impl IndependenceOracle for LiftedMatroid<'_, '_> {
    fn ground_size(&self) -> usize {
        self.ext.ground_size()
    }

    fn is_independent(&self, set: &[usize]) -> bool {
        match self.original_indices(set) {
            Some(originals) => self.base.is_independent(&originals),
            None => false,
        }
    }

    fn rank(&self) -> usize {
        self.base.rank()
    }
}

enum Inner<'m> {
    Plain,
    Matroid(&'m MatroidOracle),
}

fn solve_signature(
    work: &MetricInstance,
    grid: &RadiusGrid,
    sig: &Signature,
    first: u64,
    config: &SolverConfig,
    inner: &Inner<'_>,
) -> Result<Option<(Vec<PointId>, f64, u64)>> {
    let guess = guess_of_signature(sig);
    let ext = FictitiousExtension::build(work, &guess, grid)
        .expect("signatures only contain occupied slots");
    let f = ImprovObjective::new(&ext);
    let chosen: Option<Vec<usize>> = match (inner, config.maximizer) {
        (Inner::Plain, Maximizer::Exact) => {
            return Ok(exact_transversal(&ext, |_| true)?
                .map(|(facs, cost)| (facs, cost, first)));
        }
        (Inner::Matroid(m), Maximizer::Exact) => {
            let facs_ids = work.facilities();
            return Ok(exact_transversal(&ext, |facs| {
                let idx: Vec<usize> = facs
                    .iter()
                    .map(|f| facs_ids.binary_search(f).expect("facility id"))
                    .collect();
                m.is_independent(&idx)
            })?
            .map(|(facs, cost)| (facs, cost, first)));
        }
        (Inner::Plain, Maximizer::Greedy) => {
            Some(greedy_matroid_max(&f, &ext.partition_constraint().as_matroid())?)
        }
        (Inner::Plain, Maximizer::ContinuousGreedy) => {
            let pc = ext.partition_constraint();
            let (set, _) =
                boost_best_of(config.boost_rounds, derive_seed(config.seed, first), |s| {
                    let set = continuous_greedy_max(&f, &pc, config.cg, s)?;
                    let value = f.eval(&set);
                    Ok((set, value))
                })?;
            Some(set)
        }
        (Inner::Matroid(m), _) => {
            let pc = ext.partition_constraint();
            let lifted = LiftedMatroid { ext: &ext, base: m };
            let set = two_matroid_local_search(
                &f,
                &pc,
                &lifted,
                config.epsilon,
                derive_seed(config.seed, first),
            )?;
            if set.is_empty() {
                None
            } else {
                Some(set)
            }
        }
    };
    match chosen {
        Some(set) if !set.is_empty() => {
            let facs = ext.reconstruct(&set);
            let cost = work.cost(&facs)?;
            Ok(Some((facs, cost, first)))
        }
        _ => Ok(None),
    }
}

fn run_enumeration(
    instance: &MetricInstance,
    config: &SolverConfig,
    inner: Inner<'_>,
) -> Result<SolveOutcome> {
    config.validate()?;
    if let Some(trivial) = trivial_outcome(instance, &inner)? {
        return Ok(trivial);
    }
    let (work, _scale) = instance.rescaled()?;
    let delta = work.max_distance();
    let has_zero = work
        .clients()
        .iter()
        .any(|c| work.facilities().iter().any(|&f| work.distance(c.id, f) == 0.0));
    let grid = RadiusGrid::new(config.epsilon, delta, has_zero)?;
    let enumeration = enumerate_signatures(&work, &grid, config.guess_budget)?;

    let candidates: Vec<Result<Option<(Vec<PointId>, f64, u64)>>> = enumeration
        .signatures
        .par_iter()
        .map(|(sig, first)| solve_signature(&work, &grid, sig, *first, config, &inner))
        .collect();
    let mut best: Option<(Vec<PointId>, f64, u64)> = None;
    for cand in candidates {
        if let Some((facs, cost, first)) = cand? {
            let better = match &best {
                None => true,
                Some((_, bc, bf)) => cost < *bc || (cost == *bc && first < *bf),
            };
            if better {
                best = Some((facs, cost, first));
            }
        }
    }
    let (facs, _, _) = best.ok_or_else(|| {
        Error::InvalidInstance("no guess produced a feasible facility set".into())
    })?;
    Ok(SolveOutcome {
        solution: Solution::build(instance, &facs)?,
        guesses: enumeration.total_guesses,
    })
}

/// Degenerate inputs that bypass enumeration: no clients, or a metric where
/// every distance is zero. Any feasible facility set then costs 0.
fn trivial_outcome(instance: &MetricInstance, inner: &Inner<'_>) -> Result<Option<SolveOutcome>> {
    let degenerate =
        instance.clients().is_empty() || instance.min_positive_distance().is_none();
    if !degenerate {
        return Ok(None);
    }
    let facs: Vec<PointId> = match inner {
        Inner::Plain => vec![instance.facilities()[0]],
        Inner::Matroid(m) => {
            // Lexicographically first non-empty independent set.
            let ids = instance.facilities();
            let single = (0..ids.len()).find(|&i| m.is_independent(&[i]));
            match single {
                Some(i) => vec![ids[i]],
                None => {
                    return Err(Error::InfeasibleMatroid(
                        "no facility is independent on its own".into(),
                    ))
                }
            }
        }
    };
    Ok(Some(SolveOutcome { solution: Solution::build(instance, &facs)?, guesses: 0 }))
}

/// Core enumeration solver for the instance's own objective.
pub fn find_centers(instance: &MetricInstance, config: &SolverConfig) -> Result<SolveOutcome> {
    run_enumeration(instance, config, Inner::Plain)
}

/// k-median pipeline: optional coreset reduction, then the enumeration
/// solver; the result is re-evaluated against the full client set.
pub fn solve_kmedian(
    instance: &MetricInstance,
    config: &SolverConfig,
    coreset: Option<&crate::coreset::CoresetParams>,
) -> Result<SolveOutcome> {
    if instance.objective() != crate::metric::Objective::Median {
        return Err(Error::InvalidParameter(
            "k-median solve needs a median-objective instance".into(),
        ));
    }
    solve_with_coreset(instance, config, coreset, Inner::Plain)
}

/// k-means pipeline (squared distances); otherwise identical to k-median.
pub fn solve_kmeans(
    instance: &MetricInstance,
    config: &SolverConfig,
    coreset: Option<&crate::coreset::CoresetParams>,
) -> Result<SolveOutcome> {
    if instance.objective() != crate::metric::Objective::Means {
        return Err(Error::InvalidParameter(
            "k-means solve needs a means-objective instance".into(),
        ));
    }
    solve_with_coreset(instance, config, coreset, Inner::Plain)
}

/// Matroid-median pipeline: the open set must be independent in `matroid`,
/// whose ground elements are positions into `instance.facilities()` and whose
/// rank must equal `k`.
pub fn solve_matroid_median(
    instance: &MetricInstance,
    matroid: &MatroidOracle,
    config: &SolverConfig,
    coreset: Option<&crate::coreset::CoresetParams>,
) -> Result<SolveOutcome> {
    if matroid.ground_size() != instance.facilities().len() {
        return Err(Error::InvalidParameter(format!(
            "matroid ground size {} does not match the {} facilities",
            matroid.ground_size(),
            instance.facilities().len()
        )));
    }
    let rank = matroid.rank();
    if rank == 0 {
        return Err(Error::InfeasibleMatroid("matroid rank is zero".into()));
    }
    if rank != instance.k() {
        return Err(Error::InvalidParameter(format!(
            "instance k = {} must equal the matroid rank {rank}",
            instance.k()
        )));
    }
    solve_with_coreset(instance, config, coreset, Inner::Matroid(matroid))
}

fn solve_with_coreset(
    instance: &MetricInstance,
    config: &SolverConfig,
    coreset: Option<&crate::coreset::CoresetParams>,
    inner: Inner<'_>,
) -> Result<SolveOutcome> {
    let reduced;
    let target: &MetricInstance = match coreset {
        Some(params) => {
            let clients = crate::coreset::build_coreset(instance, params)?;
            reduced = instance.with_clients(clients)?;
            &reduced
        }
        None => instance,
    };
    let outcome = run_enumeration(target, config, inner)?;
    if std::ptr::eq(target, instance) {
        return Ok(outcome);
    }
    Ok(SolveOutcome {
        solution: Solution::build(instance, &outcome.solution.facilities)?,
        guesses: outcome.guesses,
    })
}
