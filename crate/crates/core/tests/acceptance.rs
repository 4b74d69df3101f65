//! End-to-end acceptance suite: every headline guarantee of the toolkit,
//! checked against brute-force oracles on seeded batches. Each test prints
//! one `pass`/`FAIL` line naming the property it covers.

use std::f64::consts::E;
use std::time::Instant;

use fptclust_core::baseline::{
    approximation_ratio, brute_force_opt, brute_force_opt_fl, brute_force_opt_matroid,
    nonbipartite_solve,
};
use fptclust_core::coreset::{build_coreset, coreset_error, CoresetParams};
use fptclust_core::gadgets::{
    clause_variable_game, coverage_fraction, coverage_to_kmedian, label_cover_opt,
    merge_supervertices, parallel_repetition, planted_three_sat, HypergridSystem,
    LabelCoverEdge, LabelCoverInstance,
};
use fptclust_core::instance_gen::{random_euclidean_instance, random_nonbipartite_instance};
use fptclust_core::metric::Objective;
use fptclust_core::rng::rng_from_seed;
use fptclust_core::solver::grid::{guess_count, RadiusGrid};
use fptclust_core::solver::{
    solve_facility_location, solve_kmeans, solve_kmedian, solve_matroid_median, FlConfig,
    FlInstance, Maximizer, SolverConfig,
};
use fptclust_core::submodular::{
    bicriteria_max, brute_force_max, ContinuousGreedyConfig, CoverageFunction,
    IndependenceOracle, MatroidOracle, PartitionConstraint, SetFunction,
};
use fptclust_core::verify::verify_instance;
use rand::seq::SliceRandom;
use rand::Rng;

fn report(name: &str, ok: bool, detail: &str) {
    println!("{name}: {} ({detail})", if ok { "pass" } else { "FAIL" });
    assert!(ok, "{name}: {detail}");
}

/// The shared batch protocol for the ratio criteria: 200 seeded instances,
/// n at most 30, k at most 3, epsilon 0.1.
fn ratio_batch_schedule() -> Vec<(usize, usize, u64)> {
    (0..200u64)
        .map(|i| {
            if i % 10 == 9 {
                (6, 3, 1000 + i)
            } else {
                (6 + (i as usize % 5), 1 + (i as usize % 2), 1000 + i)
            }
        })
        .collect()
}

fn tuned_config(epsilon: f64, maximizer: Maximizer, seed: u64) -> SolverConfig {
    let mut config = SolverConfig::new(epsilon);
    config.maximizer = maximizer;
    config.seed = seed;
    config.boost_rounds = 2;
    config.cg = ContinuousGreedyConfig { steps: 15, samples: 5 };
    config
}

fn worst_ratio_over_batch(objective: Objective, maximizer: Maximizer) -> (f64, usize) {
    let schedule = ratio_batch_schedule();
    let count = schedule.len();
    let mut worst: f64 = 0.0;
    for (n, k, seed) in schedule {
        let instance = random_euclidean_instance(n, k, objective, seed);
        let config = tuned_config(0.1, maximizer, seed);
        let outcome = match objective {
            Objective::Median => solve_kmedian(&instance, &config, None).unwrap(),
            Objective::Means => solve_kmeans(&instance, &config, None).unwrap(),
        };
        let opt = brute_force_opt(&instance).unwrap();
        worst = worst.max(approximation_ratio(outcome.solution.cost, opt.cost));
    }
    (worst, count)
}

#[test]
fn kmedian_continuous_greedy_stays_within_the_ratio_bound() {
    let start = Instant::now();
    let (worst, count) = worst_ratio_over_batch(Objective::Median, Maximizer::ContinuousGreedy);
    let elapsed = start.elapsed().as_secs_f64();
    let bound = 1.0 + 2.0 / E + 0.1;
    report(
        "k-median continuous-greedy ratio bound",
        count >= 200 && worst <= bound && elapsed < 600.0,
        &format!("{count} instances, worst ratio {worst:.4} vs {bound:.4}, {elapsed:.1}s"),
    );
}

#[test]
fn kmedian_exact_inner_engine_is_near_optimal() {
    let (worst, count) = worst_ratio_over_batch(Objective::Median, Maximizer::Exact);
    let bound = 1.0 + 3.0 * 0.1;
    report(
        "k-median exact-inner near-optimality",
        count >= 200 && worst <= bound,
        &format!("{count} instances, worst ratio {worst:.4} vs {bound:.4}"),
    );
}

#[test]
fn kmeans_continuous_greedy_stays_within_the_ratio_bound() {
    let (worst, count) = worst_ratio_over_batch(Objective::Means, Maximizer::ContinuousGreedy);
    let bound = 1.0 + 8.0 / E + 0.15;
    report(
        "k-means continuous-greedy ratio bound",
        count >= 200 && worst <= bound,
        &format!("{count} instances, worst ratio {worst:.4} vs {bound:.4}"),
    );
}

/// All independent sets of `base`, re-encoded as an explicit matroid.
fn explicit_encoding(base: &MatroidOracle) -> MatroidOracle {
    let n = base.ground_size();
    let mut family = Vec::new();
    for mask in 0u32..(1 << n) {
        let set: Vec<usize> = (0..n).filter(|&e| mask & (1 << e) != 0).collect();
        if base.is_independent(&set) {
            family.push(set);
        }
    }
    MatroidOracle::explicit(n, family).unwrap()
}

#[test]
fn matroid_median_meets_both_engine_bounds() {
    let epsilon = 0.2;
    let exact_bound = 1.0 + 3.0 * epsilon;
    let local_bound = 2.2;
    let count = 40u64;
    let mut worst_exact: f64 = 0.0;
    let mut local_misses = 0usize;
    let mut worst_local: f64 = 0.0;
    for seed in 0..count {
        let n = 6 + (seed as usize % 3);
        let instance = random_euclidean_instance(n, 2, Objective::Median, 3000 + seed);
        let m = instance.facilities().len();
        let base = match seed % 3 {
            0 => MatroidOracle::uniform(m, 2),
            1 => {
                let labels: Vec<usize> = (0..m).map(|e| e % 2).collect();
                MatroidOracle::partition(labels, vec![1, 1]).unwrap()
            }
            _ => {
                let labels: Vec<usize> = (0..m).map(|e| usize::from(e >= m / 2)).collect();
                MatroidOracle::partition(labels, vec![1, 1]).unwrap()
            }
        };
        let matroid = explicit_encoding(&base);
        assert!(matroid.ground_size() <= 8);
        let opt = brute_force_opt_matroid(&instance, &matroid).unwrap();

        let exact = solve_matroid_median(
            &instance,
            &matroid,
            &tuned_config(epsilon, Maximizer::Exact, seed),
            None,
        )
        .unwrap();
        worst_exact = worst_exact.max(approximation_ratio(exact.solution.cost, opt.cost));

        let local = solve_matroid_median(
            &instance,
            &matroid,
            &tuned_config(epsilon, Maximizer::ContinuousGreedy, seed),
            None,
        )
        .unwrap();
        let ratio = approximation_ratio(local.solution.cost, opt.cost);
        worst_local = worst_local.max(ratio);
        if ratio > local_bound {
            local_misses += 1;
        }
    }
    let allowed = count as usize / 20;
    report(
        "matroid-median engine bounds",
        worst_exact <= exact_bound && local_misses <= allowed,
        &format!(
            "{count} explicit matroids, worst exact ratio {worst_exact:.4} vs {exact_bound:.4}, \
             local-search worst {worst_local:.4} with {local_misses} over {local_bound}"
        ),
    );
}

#[test]
fn facility_location_sweep_meets_the_threshold_bound() {
    let epsilon = 0.25;
    let full_bound = 1.463 + 0.1;
    let ablation_bound = 1.424 + 0.1;
    let open_schedule = [1.0, 2.0, 4.0, 100.0, 150.0];
    let mut worst_full: f64 = 0.0;
    let mut worst_ablation: f64 = 0.0;
    let mut total = 0usize;
    let mut heavy_opening = 0usize;
    let mut seed = 0u64;
    while total < 30 {
        let n = 8 + (seed as usize % 3);
        let instance = random_euclidean_instance(n, 2, Objective::Median, 5000 + seed);
        let open_cost = open_schedule[seed as usize % open_schedule.len()];
        seed += 1;
        let fl = FlInstance::new(instance, open_cost).unwrap();
        let opt = brute_force_opt_fl(&fl, None).unwrap();
        if opt.facilities.len() > 3 {
            continue;
        }
        total += 1;
        let mut config = FlConfig::new(epsilon);
        config.solver = tuned_config(epsilon, Maximizer::Exact, seed);
        config.k_max = Some(3);
        let full = solve_facility_location(&fl, &config, None).unwrap();
        worst_full = worst_full.max(approximation_ratio(full.total_cost, opt.total_cost));

        if opt.opening_cost >= (2.0 / E) * opt.total_cost {
            heavy_opening += 1;
            let mut ablated = config.clone();
            ablated.gamma_max = 1.0;
            let one = solve_facility_location(&fl, &ablated, None).unwrap();
            worst_ablation =
                worst_ablation.max(approximation_ratio(one.total_cost, opt.total_cost));
        }
    }
    report(
        "facility-location sweep bound",
        worst_full <= full_bound && worst_ablation <= ablation_bound && heavy_opening > 0,
        &format!(
            "{total} instances, worst ratio {worst_full:.4} vs {full_bound:.4}; gamma-1 worst \
             {worst_ablation:.4} vs {ablation_bound:.4} on {heavy_opening} opening-heavy instances"
        ),
    );
}

#[test]
fn structural_check_suite_passes_on_every_instance() {
    let mut checked = 0usize;
    let mut failures = Vec::new();
    for seed in 0..12u64 {
        let objective = if seed % 3 == 2 { Objective::Means } else { Objective::Median };
        let n = 8 + (seed as usize % 3);
        let instance = random_euclidean_instance(n, 2, objective, 6000 + seed);
        let epsilon = if seed % 2 == 0 { 0.25 } else { 0.3 };
        let result = verify_instance(&instance, epsilon, seed).unwrap();
        checked += 1;
        for check in &result.checks {
            if !check.passed {
                failures.push(format!("seed {seed} {}: {}", check.name, check.detail));
            }
        }
    }
    report(
        "structural check suite",
        failures.is_empty(),
        &format!("{checked} instances, failures: {failures:?}"),
    );
}

#[test]
fn coreset_error_stays_within_epsilon_across_seeds() {
    let epsilon = 0.2;
    let n = 60;
    let k = 2;
    let mut good_seeds = 0usize;
    let mut size_ok = true;
    let seeds = 50u64;
    for seed in 0..seeds {
        let instance = random_euclidean_instance(n, k, Objective::Median, 7000 + seed);
        let params = CoresetParams {
            epsilon,
            delta: 0.1,
            seed,
            size_multiplier: 0.25,
        };
        let core = build_coreset(&instance, &params).unwrap();
        let size_bound =
            (params.size_multiplier * epsilon.powi(-2) * k as f64 * (n as f64).ln()).ceil();
        if (core.len() as f64) > size_bound {
            size_ok = false;
        }
        assert!(core.len() < instance.clients().len(), "sampling must engage");
        let mut rng = rng_from_seed(seed ^ 0xc0ffee);
        let facilities = instance.facilities().to_vec();
        let mut within = 0usize;
        for _ in 0..100 {
            let mut pool = facilities.clone();
            pool.shuffle(&mut rng);
            pool.truncate(k);
            pool.sort_unstable();
            let err = coreset_error(&instance, &core, &pool).unwrap();
            if err <= epsilon {
                within += 1;
            }
        }
        if within >= 95 {
            good_seeds += 1;
        }
    }
    report(
        "coreset error bound",
        good_seeds * 10 >= seeds as usize * 9 && size_ok,
        &format!("{good_seeds}/{seeds} seeds with at least 95/100 subsets within {epsilon}"),
    );
}

#[test]
fn nonbipartite_baseline_stays_within_its_squared_factor() {
    let epsilon = 0.2;
    let bound = 2.0 * (1.0 + epsilon) * (1.0 + epsilon) + 0.01;
    let mut worst: f64 = 0.0;
    let count = 100u64;
    for seed in 0..count {
        let (n, multiplier) = if seed < 50 { (10, 20.0) } else { (60, 0.25) };
        let instance = random_nonbipartite_instance(n, 2, Objective::Median, 8000 + seed);
        let params = CoresetParams {
            epsilon,
            delta: 0.1,
            seed,
            size_multiplier: multiplier,
        };
        let outcome = nonbipartite_solve(&instance, Some(&params)).unwrap();
        let opt = brute_force_opt(&instance).unwrap();
        worst = worst.max(approximation_ratio(outcome.solution.cost, opt.cost));
    }
    report(
        "non-bipartite baseline factor",
        worst <= bound,
        &format!("{count} instances, worst ratio {worst:.4} vs {bound:.4}"),
    );
}

#[test]
fn hypergrid_geometry_and_embedding_are_exact() {
    // Satisfiable chain: planted formula, clause-variable game, merge,
    // two-fold repetition, dimension-2 hypergrids.
    let (phi, _) = planted_three_sat(2, 1, 5).unwrap();
    let game = clause_variable_game(&phi).unwrap();
    let merged = merge_supervertices(&game, 1).unwrap();
    let product = parallel_repetition(&merged, 2).unwrap();
    let opt_labeling = label_cover_opt(&product).unwrap();
    let satisfiable = opt_labeling.fraction == 1.0;
    let h = HypergridSystem::new(product, 2).unwrap();
    let weight_normalized = (h.total_grid_weight() - 1.0).abs() <= 1e-9;

    let cover = h.completeness_cover(&opt_labeling.left_labels).unwrap();
    let mat = h.materialize().unwrap();
    let covered_weight = coverage_fraction(&mat, &cover).unwrap() * mat.total_weight();
    let full_cover = (covered_weight - h.universe_weight()).abs() <= 1e-9;

    // One grid, a = 2: same-index slices of the two coordinates cover 3/4.
    let slice_game = LabelCoverInstance::new(
        1,
        1,
        2,
        2,
        vec![LabelCoverEdge { left: 0, right: 0, projection: vec![0, 1] }],
    )
    .unwrap();
    let slice = HypergridSystem::new(slice_game, 2).unwrap();
    let uncoordinated = [slice.set_index(0, 0, 0), slice.set_index(0, 0, 1)];
    let three_quarters = slice.coverage_fraction(&uncoordinated).unwrap() == 0.75;

    // Distinct-coordinate picks follow 1 - (1 - 1/a)^picks exactly.
    let a = 3;
    let star = LabelCoverInstance::new(
        1,
        1,
        a,
        a,
        vec![LabelCoverEdge { left: 0, right: 0, projection: (0..a).collect() }],
    )
    .unwrap();
    let closed = HypergridSystem::new(star, a).unwrap();
    let closed_form_exact = (1..=a).all(|picks| {
        let chosen: Vec<usize> = (0..picks).map(|l| closed.set_index(0, 0, l)).collect();
        let expected = 1.0 - ((a as f64 - 1.0) / a as f64).powi(picks as i32);
        closed.coverage_fraction(&chosen).unwrap() == expected
    });

    let embedded = coverage_to_kmedian(&mat).unwrap();
    let opt = brute_force_opt(&embedded).unwrap();
    let total: f64 = embedded.clients().iter().map(|c| c.weight).sum();
    let embedding_tight = (opt.cost - total).abs() <= 1e-9 * total;

    let subchecks = [
        ("satisfiable", satisfiable),
        ("grid-weight-normalized", weight_normalized),
        ("completeness-cover-is-full", full_cover),
        ("same-index-slices-cover-3/4", three_quarters),
        ("distinct-pick-closed-form", closed_form_exact),
        ("embedded-optimum-tight", embedding_tight),
    ];
    let failed: Vec<&str> =
        subchecks.iter().filter(|(_, ok)| !ok).map(|(name, _)| *name).collect();
    report(
        "hypergrid geometry and embedding",
        failed.is_empty(),
        &format!(
            "covered {covered_weight:.6} of {:.6}, embedded opt {:.6} vs total weight \
             {total:.6}, failed: {failed:?}",
            h.universe_weight(),
            opt.cost
        ),
    );
}

#[test]
fn bicriteria_engine_reaches_its_gamma_guarantee() {
    let seeds = 30u64;
    let mut all_feasible = true;
    let mut worst_misses = 0usize;
    for &gamma in &[1.0, 1.5, 2.0] {
        let mut hits = 0usize;
        for seed in 0..seeds {
            let mut rng = rng_from_seed(9000 + seed);
            let ground = 6 + (seed as usize % 5);
            // Even ranks keep gamma * k integral for gamma = 1.5.
            let k = 2 + 2 * (seed as usize % 2);
            let universe = 12;
            let weights: Vec<f64> =
                (0..universe).map(|_| 0.5 + 1.5 * rng.random::<f64>()).collect();
            let sets: Vec<Vec<usize>> = (0..ground)
                .map(|_| (0..universe).filter(|_| rng.random::<f64>() < 0.35).collect())
                .collect();
            let f = CoverageFunction::new(weights, sets).unwrap();
            let labels: Vec<usize> = (0..ground).map(|e| e % k).collect();
            let pc = PartitionConstraint::from_labels(&labels).unwrap();

            let s = bicriteria_max(&f, &pc, gamma, ContinuousGreedyConfig::default(), seed)
                .unwrap();
            let cap = (gamma * k as f64).floor() as usize;
            let full_rank =
                (0..pc.num_parts()).all(|p| s.iter().any(|e| pc.members(p).contains(e)));
            if s.len() > cap || !full_rank {
                all_feasible = false;
            }
            let (_, best) =
                brute_force_max(&f, &MatroidOracle::uniform(ground, k), Some(k)).unwrap();
            if f.eval(&s) >= (1.0 - (-gamma).exp() - 0.05) * best {
                hits += 1;
            }
        }
        if hits * 10 < seeds as usize * 9 {
            worst_misses += 1;
        }
    }
    report(
        "bicriteria gamma guarantee",
        all_feasible && worst_misses == 0,
        &format!("3 gamma values x {seeds} seeds, feasible always: {all_feasible}"),
    );
}

fn reference_binomial(n: u128, k: u128) -> u128 {
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

#[test]
fn guess_enumeration_matches_the_closed_form() {
    let mut combos = 0usize;
    let mut all_match = true;
    for &c in &[1usize, 2, 5, 9, 14, 30] {
        for k in 1usize..=4 {
            for &l in &[1usize, 3, 11, 26] {
                combos += 1;
                let expected = reference_binomial((c + k - 1) as u128, k as u128)
                    * (l as u128).pow(k as u32);
                if guess_count(c, k, l) != expected {
                    all_match = false;
                }
            }
        }
    }

    let mut solves_match = true;
    for seed in 0..3u64 {
        let instance = random_euclidean_instance(8, 2, Objective::Median, 9500 + seed);
        let config = tuned_config(0.3, Maximizer::Greedy, seed);
        let outcome = solve_kmedian(&instance, &config, None).unwrap();
        let (work, _) = instance.rescaled().unwrap();
        let has_zero = work.clients().iter().any(|cl| {
            work.facilities().iter().any(|&f| work.distance(cl.id, f) == 0.0)
        });
        let grid = RadiusGrid::new(config.epsilon, work.max_distance(), has_zero).unwrap();
        let expected =
            guess_count(work.clients().len(), work.k(), grid.num_levels());
        if outcome.guesses != expected {
            solves_match = false;
        }
    }
    report(
        "guess-count closed form",
        combos >= 20 && all_match && solves_match,
        &format!("{combos} parameter combinations plus 3 end-to-end solves"),
    );
}
