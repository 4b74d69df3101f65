//! Replay a known-good facility set as a guess: cluster the clients around
//! it, name each cluster's closest client the leader, and round the
//! leader-to-center distances onto the radius grid. Used to certify that the
//! enumeration contains a guess whose fictitious cost is within the proven
//! factor of the reference cost.

use crate::error::{Error, Result};
use crate::metric::{MetricInstance, PointId};
use crate::solver::grid::{GuessContext, RadiusGrid};

/// A reference facility set decomposed into the guess that witnesses it.
#[derive(Debug, Clone)]
pub struct OptimalReference {
    /// The reference facility set, sorted.
    pub facilities: Vec<PointId>,
    /// Its cost on the instance it was built against.
    pub cost: f64,
    /// One slot per facility that serves at least one client, in facility
    /// order: the leader's client index and the rounded radius level.
    pub guess: GuessContext,
    /// Leader point ids, parallel to the guess slots.
    pub leaders: Vec<PointId>,
    /// Rounded leader-to-center radii, parallel to the guess slots.
    pub radii: Vec<f64>,
}

/// Build the witness guess for `facilities` on `instance` (typically the
/// rescaled working instance). Clients cluster to their nearest reference
/// facility (lowest id on ties); each non-empty cluster's leader is its
/// client closest to the facility (lowest id on ties).
pub fn optimal_reference(
    instance: &MetricInstance,
    grid: &RadiusGrid,
    facilities: &[PointId],
) -> Result<OptimalReference> {
    let mut facs = facilities.to_vec();
    facs.sort_unstable();
    facs.dedup();
    if facs.is_empty() {
        return Err(Error::EmptyFacilitySet);
    }
    let cost = instance.cost(&facs)?;

    // leader_of[ci] = (distance to the cluster's facility, client index).
    let mut leader_of: Vec<Option<(f64, usize)>> = vec![None; facs.len()];
    for (ci, client) in instance.clients().iter().enumerate() {
        let (f, d) = instance.nearest_in(client.id, &facs);
        let slot = facs.binary_search(&f).expect("nearest returns a member");
        let better = match leader_of[slot] {
            None => true,
            Some((bd, _)) => d < bd,
        };
        if better {
            leader_of[slot] = Some((d, ci));
        }
    }

    let mut guess = GuessContext { leaders: Vec::new(), levels: Vec::new() };
    let mut leaders = Vec::new();
    let mut radii = Vec::new();
    for (slot, entry) in leader_of.iter().enumerate() {
        if let Some((d, ci)) = entry {
            let level = grid.level_of(*d).ok_or_else(|| {
                Error::InvalidInstance(
                    "zero leader distance on a grid without a zero level".into(),
                )
            })?;
            guess.leaders.push(*ci);
            guess.levels.push(level);
            leaders.push(instance.clients()[*ci].id);
            radii.push(grid.value(level));
            let _ = slot;
        }
    }
    if guess.leaders.is_empty() {
        return Err(Error::InvalidInstance(
            "reference facilities serve no client".into(),
        ));
    }
    Ok(OptimalReference { facilities: facs, cost, guess, leaders, radii })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{Client, Objective};
    use crate::solver::extension::FictitiousExtension;

    fn work_instance() -> MetricInstance {
        MetricInstance::from_euclidean(
            &[vec![0.0], vec![1.0], vec![2.0], vec![7.0], vec![8.0]],
            (0..5).map(|id| Client { id, weight: 1.0 }).collect(),
            vec![1, 4],
            2,
            Objective::Median,
        )
        .unwrap()
    }

    #[test]
    fn leaders_are_the_closest_clients_of_each_cluster() {
        let inst = work_instance();
        let grid = RadiusGrid::new(1.0, inst.max_distance(), true).unwrap();
        let r = optimal_reference(&inst, &grid, &[1, 4]).unwrap();
        // Facility 1 serves clients 0,1,2 (leader: client 1 at distance 0);
        // facility 4 serves 3,4 (leader: client 4 at distance 0).
        assert_eq!(r.facilities, vec![1, 4]);
        assert_eq!(r.leaders, vec![1, 4]);
        assert_eq!(r.radii, vec![0.0, 0.0]);
        assert_eq!(r.cost, inst.cost(&[1, 4]).unwrap());
    }

    #[test]
    fn witness_guess_contains_the_reference_facilities_in_its_shells() {
        // Clients at 0, 2, 4, 14, 16; facilities off the clients at 1 and 15,
        // so the witness radii are genuinely non-zero.
        let inst = MetricInstance::from_euclidean(
            &[
                vec![0.0],
                vec![2.0],
                vec![4.0],
                vec![14.0],
                vec![16.0],
                vec![1.0],
                vec![15.0],
            ],
            (0..5).map(|id| Client { id, weight: 1.0 }).collect(),
            vec![5, 6],
            2,
            Objective::Median,
        )
        .unwrap();
        let grid = RadiusGrid::new(1.0, inst.max_distance(), true).unwrap();
        let r = optimal_reference(&inst, &grid, &[5, 6]).unwrap();
        assert_eq!(r.leaders, vec![0, 3]);
        assert_eq!(r.radii, vec![1.0, 1.0]);
        let ext = FictitiousExtension::build(&inst, &r.guess, &grid).unwrap();
        for (slot, &f) in r.facilities.iter().enumerate() {
            assert!(
                ext.parts()[slot].members.contains(&f),
                "facility {f} missing from slot {slot}"
            );
        }
    }

    #[test]
    fn unused_reference_facilities_get_no_slot() {
        let inst = MetricInstance::from_euclidean(
            &[vec![0.0], vec![0.5], vec![100.0]],
            vec![Client { id: 0, weight: 1.0 }, Client { id: 1, weight: 1.0 }],
            vec![0, 2],
            2,
            Objective::Median,
        )
        .unwrap();
        let grid = RadiusGrid::new(1.0, inst.max_distance(), true).unwrap();
        // Facility 2 serves nobody; only facility 0 produces a slot.
        let r = optimal_reference(&inst, &grid, &[0, 2]).unwrap();
        assert_eq!(r.guess.leaders.len(), 1);
        assert_eq!(r.leaders, vec![0]);
    }
}
