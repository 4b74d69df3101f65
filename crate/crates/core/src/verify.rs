//! Named structural checks behind the `verify` command. Each check replays
//! a fact the enumeration solver relies on — on the instance itself, on the
//! fictitious extensions of sampled guesses, and against the brute-force
//! optimum — and reports pass/fail with a witness.

use rand::Rng;

use crate::baseline::brute_force_opt;
use crate::error::{Error, Result};
use crate::metric::{validate_metric, MetricInstance, Objective};
use crate::rng::{derive_seed, rng_from_seed};
use crate::solver::extension::{FictitiousExtension, ImprovObjective};
use crate::solver::grid::{GuessContext, RadiusGrid};
use crate::solver::optimal_reference;
use crate::submodular::check_set_function;

/// Largest instance (total points) the exhaustive suite accepts.
pub const VERIFY_POINT_LIMIT: usize = 64;
/// Guesses sampled for the extension-based checks.
const GUESS_SAMPLE: usize = 30;
/// Valid one-per-part selections sampled per extension.
const TRANSVERSAL_SAMPLE: usize = 100;
/// Largest copy ground set checked exhaustively for submodularity.
pub const SUBMOD_GROUND_LIMIT: usize = 12;

/// One named check with its verdict.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Run the whole suite on `instance`:
///
/// * `metric-axioms` — the input table satisfies all metric axioms,
///   including an exhaustive triangle scan.
/// * `extended-metricity` — with fictitious facilities added, sampled
///   guesses still induce a metric.
/// * `improvement-submodularity` — the improvement objective is normalized,
///   monotone, and submodular (exhaustive over small copy grounds).
/// * `valid-solution-cost-equality` — opening one real facility per shell
///   makes the fictitious facilities irrelevant: extended cost equals the
///   real cost of the reconstructed set.
/// * `fictitious-cost-bound` — under the witness guess of the brute-force
///   optimum, serving every client by fictitious facilities alone costs at
///   most `(3 + 2 eps)` times the optimum.
///
/// Errors with [`Error::VerifyTooLarge`] when the instance defeats the
/// exhaustive parts.
pub fn verify_instance(
    instance: &MetricInstance,
    epsilon: f64,
    seed: u64,
) -> Result<VerifyReport> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    if instance.n() > VERIFY_POINT_LIMIT {
        return Err(Error::VerifyTooLarge(format!(
            "verification supports up to {VERIFY_POINT_LIMIT} points, got {}",
            instance.n()
        )));
    }
    let mut checks = Vec::new();

    let report = validate_metric(instance, true);
    checks.push(CheckOutcome {
        name: "metric-axioms",
        passed: report.is_valid(),
        detail: match &report.violation {
            None => "all axioms hold on every triple".into(),
            Some(v) => format!("{v:?}"),
        },
    });

    let (work, _scale) = instance.rescaled()?;
    let delta = work.max_distance().max(1.0);
    let has_zero = work
        .clients()
        .iter()
        .any(|c| work.facilities().iter().any(|&f| work.distance(c.id, f) == 0.0));
    let grid = RadiusGrid::new(epsilon, delta, has_zero)?;
    let extensions = sample_extensions(&work, &grid, seed);

    checks.push(extended_metricity(&extensions));
    checks.push(improvement_submodularity(&extensions)?);
    checks.push(cost_equality(&work, &extensions, seed));
    checks.push(fictitious_cost_bound(&work, &grid, epsilon)?);

    Ok(VerifyReport { checks })
}

fn sample_extensions<'a>(
    work: &'a MetricInstance,
    grid: &RadiusGrid,
    seed: u64,
) -> Vec<(GuessContext, FictitiousExtension<'a>)> {
    let mut out = Vec::new();
    let num_clients = work.clients().len();
    if num_clients == 0 {
        return out;
    }
    for g in 0..GUESS_SAMPLE {
        let mut rng = rng_from_seed(derive_seed(seed, g as u64));
        let mut leaders: Vec<usize> =
            (0..work.k()).map(|_| rng.random_range(0..num_clients)).collect();
        leaders.sort_unstable();
        let levels: Vec<usize> =
            (0..work.k()).map(|_| rng.random_range(0..grid.num_levels())).collect();
        let guess = GuessContext { leaders, levels };
        if let Some(ext) = FictitiousExtension::build(work, &guess, grid) {
            out.push((guess, ext));
        }
    }
    out
}

fn extended_metricity(extensions: &[(GuessContext, FictitiousExtension<'_>)]) -> CheckOutcome {
    let mut worst: Option<String> = None;
    let mut triples: u64 = 0;
    'outer: for (g, (_, ext)) in extensions.iter().enumerate() {
        let m = ext.extended_point_count();
        for a in 0..m {
            for b in 0..m {
                let direct = ext.extended_distance(a, b);
                if a == b && direct != 0.0 {
                    worst = Some(format!("guess {g}: d({a},{a}) = {direct}"));
                    break 'outer;
                }
                if direct < 0.0 {
                    worst = Some(format!("guess {g}: d({a},{b}) = {direct}"));
                    break 'outer;
                }
                let back = ext.extended_distance(b, a);
                if (direct - back).abs() > 1e-9 * direct.max(1.0) {
                    worst = Some(format!("guess {g}: d({a},{b}) = {direct} but d({b},{a}) = {back}"));
                    break 'outer;
                }
                for via in 0..m {
                    triples += 1;
                    let detour = ext.extended_distance(a, via) + ext.extended_distance(via, b);
                    if direct > detour + 1e-9 * direct.max(1.0) {
                        worst = Some(format!(
                            "guess {g}: d({a},{b}) = {direct} exceeds {detour} via {via}"
                        ));
                        break 'outer;
                    }
                }
            }
        }
    }
    CheckOutcome {
        name: "extended-metricity",
        passed: worst.is_none(),
        detail: worst.unwrap_or_else(|| {
            format!("{triples} extended triples over {} guesses", extensions.len())
        }),
    }
}

fn improvement_submodularity(
    extensions: &[(GuessContext, FictitiousExtension<'_>)],
) -> Result<CheckOutcome> {
    let mut checked = 0usize;
    let mut failure: Option<String> = None;
    for (g, (_, ext)) in extensions.iter().enumerate() {
        if ext.ground_size() > SUBMOD_GROUND_LIMIT {
            continue;
        }
        checked += 1;
        let improv = ImprovObjective::new(ext);
        let report = check_set_function(&improv, 1e-9)?;
        if !report.all_hold() {
            failure = Some(format!(
                "guess {g}: {}",
                report.counterexample.unwrap_or_else(|| "property failed".into())
            ));
            break;
        }
    }
    if checked == 0 && !extensions.is_empty() {
        return Err(Error::VerifyTooLarge(format!(
            "no sampled guess had a copy ground of at most {SUBMOD_GROUND_LIMIT}"
        )));
    }
    Ok(CheckOutcome {
        name: "improvement-submodularity",
        passed: failure.is_none(),
        detail: failure
            .unwrap_or_else(|| format!("exhaustive lattice check on {checked} guesses")),
    })
}

fn cost_equality(
    work: &MetricInstance,
    extensions: &[(GuessContext, FictitiousExtension<'_>)],
    seed: u64,
) -> CheckOutcome {
    let mut samples = 0usize;
    let mut failure: Option<String> = None;
    'outer: for (g, (_, ext)) in extensions.iter().enumerate() {
        let pc = ext.partition_constraint();
        let mut rng = rng_from_seed(derive_seed(seed, 0x5eed + g as u64));
        for _ in 0..TRANSVERSAL_SAMPLE {
            let valid: Vec<usize> = (0..pc.num_parts())
                .map(|p| {
                    let members = pc.members(p);
                    members[rng.random_range(0..members.len())]
                })
                .collect();
            let extended = ext.cost_with(&valid);
            let real = match work.cost(&ext.reconstruct(&valid)) {
                Ok(c) => c,
                Err(e) => {
                    failure = Some(format!("guess {g}: {e}"));
                    break 'outer;
                }
            };
            samples += 1;
            if (extended - real).abs() > 1e-9 * real.abs().max(1.0) {
                failure = Some(format!(
                    "guess {g}: extended cost {extended} vs real cost {real}"
                ));
                break 'outer;
            }
        }
    }
    CheckOutcome {
        name: "valid-solution-cost-equality",
        passed: failure.is_none(),
        detail: failure.unwrap_or_else(|| format!("{samples} one-per-shell selections")),
    }
}

fn fictitious_cost_bound(
    work: &MetricInstance,
    grid: &RadiusGrid,
    epsilon: f64,
) -> Result<CheckOutcome> {
    let opt = match brute_force_opt(work) {
        Ok(opt) => opt,
        Err(Error::OracleBudgetExceeded(msg)) => return Err(Error::VerifyTooLarge(msg)),
        Err(e) => return Err(e),
    };
    if opt.cost == 0.0 {
        return Ok(CheckOutcome {
            name: "fictitious-cost-bound",
            passed: true,
            detail: "optimum cost is zero; bound is vacuous".into(),
        });
    }
    let reference = optimal_reference(work, grid, &opt.facilities)?;
    let extize = FictitiousExtension::build(work, &reference.guess, grid);
    let Some(ext) = extize else {
        return Ok(CheckOutcome {
            name: "fictitious-cost-bound",
            passed: false,
            detail: "witness guess produced no shells".into(),
        });
    };
    let factor = match work.objective() {
        Objective::Median => 3.0 + 2.0 * epsilon,
        Objective::Means => (3.0 + 2.0 * epsilon) * (3.0 + 2.0 * epsilon),
    };
    let bound = factor * opt.cost;
    let fictitious = ext.base_cost();
    let passed = fictitious <= bound + 1e-9 * bound;
    Ok(CheckOutcome {
        name: "fictitious-cost-bound",
        passed,
        detail: format!("fictitious-only cost {fictitious:.6} vs {factor:.3} * opt = {bound:.6}"),
    })
}
