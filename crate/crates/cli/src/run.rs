//! Subcommand implementations. Each returns the process exit code on
//! success; errors are mapped to exit codes in `main`.

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use serde::Deserialize;
use serde_json::{json, Value};

use fptclust_core::baseline::{
    approximation_ratio, brute_force_opt, brute_force_opt_fl, brute_force_opt_matroid,
    nonbipartite_solve,
};
use fptclust_core::coreset::{build_coreset, CoresetParams};
use fptclust_core::gadgets::{
    clause_variable_game, hypergrid_coverage, merge_supervertices, parallel_repetition,
    planted_three_sat, random_three_sat, LabelCoverInstance, ThreeSatFormula,
};
use fptclust_core::instance_gen::{random_euclidean_instance, random_nonbipartite_instance};
use fptclust_core::metric::{
    instance_to_json, parse_instance, total_weight, MetricInstance, Objective, Solution,
};
use fptclust_core::solver::{
    solve_facility_location, solve_kmeans, solve_kmedian, solve_matroid_median, FlConfig,
    FlInstance, SolverConfig,
};
use fptclust_core::submodular::MatroidOracle;
use fptclust_core::verify::verify_instance;
use fptclust_core::{Error, Result};

use crate::output::{fmt_float, read_input, write_csv, write_json};
use crate::{
    BenchArgs, BenchVariantArg, CoresetArgs, GenCommand, GenCommonArgs, GenGameArgs, OracleArgs,
    SolveArgs, VariantArg, VerifyArgs,
};

/// The `"matroid"` field of an instance file. Element indices are positions
/// into the instance's facility list.
#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum MatroidJson {
    Partition { part_of: Vec<usize>, capacities: Vec<usize> },
    Uniform { rank: usize },
    Explicit { independent: Vec<Vec<usize>> },
}

#[derive(Deserialize)]
struct MatroidField {
    #[serde(default)]
    matroid: Option<MatroidJson>,
}

struct Loaded {
    instance: MetricInstance,
    open_cost: Option<f64>,
    matroid: Option<MatroidOracle>,
}

fn load_instance(
    path: &Path,
    k_override: Option<usize>,
    objective_override: Option<Objective>,
) -> Result<Loaded> {
    let text = read_input(path)?;
    let parsed = parse_instance(&text)?;
    let mut instance = parsed.instance;
    if let Some(k) = k_override {
        instance = instance.with_k(k)?;
    }
    if let Some(objective) = objective_override {
        instance = instance.with_objective(objective);
    }
    let field: MatroidField = serde_json::from_str(&text)?;
    let num_facilities = instance.facilities().len();
    let matroid = match field.matroid {
        None => None,
        Some(MatroidJson::Partition { part_of, capacities }) => {
            if part_of.len() != num_facilities {
                return Err(Error::Malformed(format!(
                    "matroid covers {} elements but the instance has {num_facilities} facilities",
                    part_of.len()
                )));
            }
            Some(MatroidOracle::partition(part_of, capacities)?)
        }
        Some(MatroidJson::Uniform { rank }) => Some(MatroidOracle::uniform(num_facilities, rank)),
        Some(MatroidJson::Explicit { independent }) => {
            Some(MatroidOracle::explicit(num_facilities, independent)?)
        }
    };
    Ok(Loaded { instance, open_cost: parsed.open_cost, matroid })
}

enum Resolved {
    Median,
    Means,
    Matroid,
    Fl,
}

fn resolve_variant(requested: VariantArg, loaded: &Loaded) -> Resolved {
    match requested {
        VariantArg::Median => Resolved::Median,
        VariantArg::Means => Resolved::Means,
        VariantArg::Matroid => Resolved::Matroid,
        VariantArg::Fl => Resolved::Fl,
        VariantArg::Auto => {
            if loaded.matroid.is_some() {
                Resolved::Matroid
            } else if loaded.open_cost.is_some() {
                Resolved::Fl
            } else {
                match loaded.instance.objective() {
                    Objective::Median => Resolved::Median,
                    Objective::Means => Resolved::Means,
                }
            }
        }
    }
}

fn require_matroid(loaded: &Loaded) -> Result<&MatroidOracle> {
    loaded.matroid.as_ref().ok_or_else(|| {
        Error::InvalidParameter(
            "the matroid variant needs a \"matroid\" field in the instance file".into(),
        )
    })
}

fn require_open_cost(flag: Option<f64>, loaded: &Loaded) -> Result<f64> {
    flag.or(loaded.open_cost).ok_or_else(|| {
        Error::InvalidParameter(
            "the fl variant needs an opening cost: \"open_cost\" in the file or --open-cost"
                .into(),
        )
    })
}

fn configure_threads(threads: Option<usize>) -> Result<()> {
    let Some(t) = threads else { return Ok(()) };
    if t == 0 {
        return Err(Error::InvalidParameter("thread count must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(t)
        .build_global()
        .map_err(|e| Error::InvalidParameter(format!("cannot configure {t} threads: {e}")))
}

fn solution_json(
    solution: &Solution,
    objective: Objective,
    cost: f64,
    guesses: u128,
    ratio: Option<f64>,
) -> Value {
    json!({
        "facilities": solution.facilities,
        "cost": cost,
        "objective": objective.as_str(),
        "assignment": solution.assignment,
        "guesses_evaluated": u64::try_from(guesses).unwrap_or(u64::MAX),
        "ratio_vs_oracle": ratio,
    })
}

pub fn cmd_solve(args: &SolveArgs) -> Result<ExitCode> {
    configure_threads(args.threads)?;
    let loaded = load_instance(&args.input, args.k, args.objective.map(Into::into))?;
    let variant = resolve_variant(args.variant, &loaded);
    let mut config = SolverConfig::new(args.epsilon);
    config.maximizer = args.maximizer.into();
    config.seed = args.seed;
    config.guess_budget = args.budget as u128;
    config.boost_rounds = args.boost;
    let coreset_params =
        if args.coreset { Some(CoresetParams::new(args.epsilon, 0.1, args.seed)) } else { None };
    let cp = coreset_params.as_ref();
    let instance = &loaded.instance;

    let (solution, cost, guesses, opt_cost) = match variant {
        Resolved::Median => {
            let out = solve_kmedian(instance, &config, cp)?;
            let opt = maybe_oracle(args.with_oracle, || Ok(brute_force_opt(instance)?.cost))?;
            (out.solution, f64::NAN, out.guesses, opt)
        }
        Resolved::Means => {
            let out = solve_kmeans(instance, &config, cp)?;
            let opt = maybe_oracle(args.with_oracle, || Ok(brute_force_opt(instance)?.cost))?;
            (out.solution, f64::NAN, out.guesses, opt)
        }
        Resolved::Matroid => {
            let matroid = require_matroid(&loaded)?;
            let out = solve_matroid_median(instance, matroid, &config, cp)?;
            let opt = maybe_oracle(args.with_oracle, || {
                Ok(brute_force_opt_matroid(instance, matroid)?.cost)
            })?;
            (out.solution, f64::NAN, out.guesses, opt)
        }
        Resolved::Fl => {
            let open_cost = require_open_cost(args.open_cost, &loaded)?;
            let fl = FlInstance::new(instance.clone(), open_cost)?;
            let fl_config =
                FlConfig { solver: config.clone(), gamma_max: args.gamma_max, k_max: None };
            let out = solve_facility_location(&fl, &fl_config, cp)?;
            eprintln!(
                "connection {} opening {}",
                fmt_float(out.connection_cost),
                fmt_float(out.opening_cost)
            );
            let opt = maybe_oracle(args.with_oracle, || {
                Ok(brute_force_opt_fl(&fl, None)?.total_cost)
            })?;
            (out.solution, out.total_cost, out.guesses, opt)
        }
    };
    let cost = if cost.is_nan() { solution.cost } else { cost };
    let ratio = opt_cost.map(|o| approximation_ratio(cost, o));
    eprintln!("cost {} guesses {guesses}", fmt_float(cost));
    write_json(
        solution_json(&solution, instance.objective(), cost, guesses, ratio),
        args.out.as_deref(),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn maybe_oracle(
    enabled: bool,
    compute: impl FnOnce() -> Result<f64>,
) -> Result<Option<f64>> {
    if enabled { compute().map(Some) } else { Ok(None) }
}

pub fn cmd_oracle(args: &OracleArgs) -> Result<ExitCode> {
    let loaded = load_instance(&args.input, None, None)?;
    let variant = resolve_variant(args.variant, &loaded);
    let instance = &loaded.instance;
    let (solution, cost) = match variant {
        Resolved::Median | Resolved::Means => {
            let sol = brute_force_opt(instance)?;
            let cost = sol.cost;
            (sol, cost)
        }
        Resolved::Matroid => {
            let sol = brute_force_opt_matroid(instance, require_matroid(&loaded)?)?;
            let cost = sol.cost;
            (sol, cost)
        }
        Resolved::Fl => {
            let open_cost = require_open_cost(args.open_cost, &loaded)?;
            let fl = FlInstance::new(instance.clone(), open_cost)?;
            let opt = brute_force_opt_fl(&fl, args.max_open)?;
            (Solution::build(instance, &opt.facilities)?, opt.total_cost)
        }
    };
    eprintln!("optimal cost {}", fmt_float(cost));
    write_json(
        solution_json(&solution, instance.objective(), cost, 0, Some(1.0)),
        args.out.as_deref(),
    )?;
    Ok(ExitCode::SUCCESS)
}

pub fn cmd_coreset(args: &CoresetArgs) -> Result<ExitCode> {
    let loaded = load_instance(&args.input, None, None)?;
    let params = CoresetParams {
        epsilon: args.epsilon,
        delta: args.delta,
        seed: args.seed,
        size_multiplier: args.multiplier,
    };
    let core = build_coreset(&loaded.instance, &params)?;
    eprintln!(
        "coreset: {} of {} clients, weight {} of {}",
        core.len(),
        loaded.instance.clients().len(),
        fmt_float(total_weight(&core)),
        fmt_float(total_weight(loaded.instance.clients()))
    );
    write_json(json!({ "clients": core }), args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode> {
    let loaded = load_instance(&args.input, None, None)?;
    let report = verify_instance(&loaded.instance, args.epsilon, args.seed)?;
    for check in &report.checks {
        let verdict = if check.passed { "pass" } else { "FAIL" };
        println!("{verdict} {} — {}", check.name, check.detail);
    }
    if args.out.is_some() {
        let checks: Vec<Value> = report
            .checks
            .iter()
            .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
            .collect();
        write_json(
            json!({ "checks": checks, "all_passed": report.all_passed() }),
            args.out.as_deref(),
        )?;
    }
    Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

pub fn cmd_bench(args: &BenchArgs) -> Result<ExitCode> {
    configure_threads(args.threads)?;
    if args.count == 0 {
        return Err(Error::InvalidParameter("batch count must be at least 1".into()));
    }
    if args.n < 2 || args.k == 0 || args.k > args.n {
        return Err(Error::InvalidParameter(format!(
            "need 2 <= n and 1 <= k <= n, got n = {} and k = {}",
            args.n, args.k
        )));
    }
    let mut config = SolverConfig::new(args.epsilon);
    config.maximizer = args.maximizer.into();
    config.guess_budget = args.budget as u128;
    config.boost_rounds = args.boost;

    let mut csv =
        String::from("instance_id,n,k,epsilon,variant,maximizer,cost,opt,ratio,guesses,wall_ms\n");
    for i in 0..args.count {
        let seed = args.seed + i as u64;
        config.seed = seed;
        let (instance, cost, guesses, wall_ms) = match args.variant {
            BenchVariantArg::Median | BenchVariantArg::Means => {
                let objective = match args.variant {
                    BenchVariantArg::Median => Objective::Median,
                    _ => Objective::Means,
                };
                let instance = random_euclidean_instance(args.n, args.k, objective, seed);
                let start = Instant::now();
                let out = match objective {
                    Objective::Median => solve_kmedian(&instance, &config, None)?,
                    Objective::Means => solve_kmeans(&instance, &config, None)?,
                };
                let wall = start.elapsed().as_millis();
                (instance, out.solution.cost, out.guesses, wall)
            }
            BenchVariantArg::Nonbipartite => {
                let instance =
                    random_nonbipartite_instance(args.n, args.k, Objective::Median, seed);
                let start = Instant::now();
                let out = nonbipartite_solve(&instance, None)?;
                let wall = start.elapsed().as_millis();
                (instance, out.solution.cost, out.guesses, wall)
            }
        };
        let opt = brute_force_opt(&instance)?;
        let ratio = approximation_ratio(cost, opt.cost);
        csv.push_str(&format!(
            "{seed},{},{},{},{},{},{},{},{},{guesses},{wall_ms}\n",
            args.n,
            args.k,
            fmt_float(args.epsilon),
            args.variant.as_str(),
            args.maximizer.as_str(),
            fmt_float(cost),
            fmt_float(opt.cost),
            fmt_float(ratio),
        ));
    }
    write_csv(&csv, args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn formula_of(common: &GenCommonArgs) -> Result<ThreeSatFormula> {
    if common.planted {
        planted_three_sat(common.vars, common.clauses, common.seed).map(|(phi, _)| phi)
    } else {
        random_three_sat(common.vars, common.clauses, common.seed)
    }
}

fn game_of(args: &GenGameArgs) -> Result<LabelCoverInstance> {
    let phi = formula_of(&args.common)?;
    let mut game = clause_variable_game(&phi)?;
    if let Some(group) = args.merge {
        game = merge_supervertices(&game, group)?;
    }
    if let Some(rounds) = args.repeat {
        game = parallel_repetition(&game, rounds)?;
    }
    Ok(game)
}

fn reparse(text: String) -> Result<Value> {
    Ok(serde_json::from_str(&text)?)
}

pub fn cmd_gen(command: &GenCommand) -> Result<ExitCode> {
    match command {
        GenCommand::Sat3(common) => {
            let phi = formula_of(common)?;
            write_json(reparse(phi.to_json())?, common.out.as_deref())?;
        }
        GenCommand::Labelcover(game_args) => {
            let game = game_of(game_args)?;
            write_json(reparse(game.to_json())?, game_args.common.out.as_deref())?;
        }
        GenCommand::Hypergrid(grid) => {
            let system = hypergrid_coverage(game_of(&grid.game)?, grid.a)?;
            write_json(reparse(system.to_json())?, grid.game.common.out.as_deref())?;
        }
        GenCommand::KmedianGadget(grid) => {
            let system = hypergrid_coverage(game_of(&grid.game)?, grid.a)?;
            let instance = coverage_to_kmedian_value(&system)?;
            write_json(instance, grid.game.common.out.as_deref())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn coverage_to_kmedian_value(system: &fptclust_core::gadgets::SetSystem) -> Result<Value> {
    let instance = fptclust_core::gadgets::coverage_to_kmedian(system)?;
    Ok(instance_to_json(&instance, None))
}
