//! Seeded random instances for tests and benchmarks.

use rand::Rng;

use crate::metric::{Client, MetricInstance, Objective, PointId};
use crate::rng::rng_from_seed;

/// A random instance on `n` points with small integer coordinates: every
/// point is a client (weights cycle 1, 2, 3) and roughly half the points,
/// but at least `k`, are facilities. Regenerates until the points are not
/// all identical.
pub fn random_euclidean_instance(
    n: usize,
    k: usize,
    objective: Objective,
    seed: u64,
) -> MetricInstance {
    assert!(n >= 2 && k >= 1);
    let mut rng = rng_from_seed(seed);
    loop {
        let coords: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                vec![
                    rng.random_range(0..8) as f64,
                    rng.random_range(0..8) as f64,
                ]
            })
            .collect();
        if coords.iter().all(|p| p == &coords[0]) {
            continue;
        }
        let clients: Vec<Client> = (0..n)
            .map(|id| Client { id, weight: 1.0 + (id % 3) as f64 })
            .collect();
        let m = (n / 2).max(k).min(n);
        let facilities: Vec<PointId> = pick_distinct(&mut rng, n, m);
        return MetricInstance::from_euclidean(&coords, clients, facilities, k, objective)
            .expect("generated instance is well-formed");
    }
}

/// Like [`random_euclidean_instance`] but every point is both a client and a
/// facility, as the combinatorial baseline requires.
pub fn random_nonbipartite_instance(
    n: usize,
    k: usize,
    objective: Objective,
    seed: u64,
) -> MetricInstance {
    assert!(n >= 2 && k >= 1);
    let mut rng = rng_from_seed(seed);
    loop {
        let coords: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                vec![
                    rng.random_range(0..8) as f64,
                    rng.random_range(0..8) as f64,
                ]
            })
            .collect();
        if coords.iter().all(|p| p == &coords[0]) {
            continue;
        }
        let clients: Vec<Client> = (0..n)
            .map(|id| Client { id, weight: 1.0 + (id % 3) as f64 })
            .collect();
        let facilities: Vec<PointId> = (0..n).collect();
        return MetricInstance::from_euclidean(&coords, clients, facilities, k, objective)
            .expect("generated instance is well-formed");
    }
}

fn pick_distinct(rng: &mut impl Rng, n: usize, m: usize) -> Vec<PointId> {
    let mut ids: Vec<PointId> = (0..n).collect();
    for i in 0..m {
        let j = rng.random_range(i..n);
        ids.swap(i, j);
    }
    ids.truncate(m);
    ids.sort_unstable();
    ids
}
