//! The fictitious extension of a guess: one shell of candidate facilities per
//! leader-radius slot, copies keeping the shells disjoint, and a fictitious
//! facility per non-empty shell that anchors the improvement objective.

use crate::metric::{MetricInstance, PointId};
use crate::solver::grid::{GuessContext, RadiusGrid};
use crate::submodular::{PartitionConstraint, SetFunction};

/// One non-empty slot of a guess.
#[derive(Debug, Clone)]
pub struct ExtensionPart {
    /// The leader's point id.
    pub leader: PointId,
    /// The guessed (rounded) radius of the slot.
    pub radius: f64,
    /// Facilities whose rounded distance to the leader equals `radius`,
    /// ascending.
    pub members: Vec<PointId>,
}

/// A guess instantiated against an instance: disjoint facility copies grouped
/// into parts, plus the distance of every client to the nearest fictitious
/// facility.
///
/// Ground element `g` of the induced submodular subproblem is the copy
/// `(part_of[g], original[g])`; parts are the non-empty slots of the guess in
/// slot order.
pub struct FictitiousExtension<'a> {
    instance: &'a MetricInstance,
    parts: Vec<ExtensionPart>,
    /// Copy `g` refers to `original[g]`; copies are grouped part-major.
    original: Vec<PointId>,
    part_of: Vec<usize>,
    /// Per ground element, the distance from each client to its original
    /// facility (client order of the instance).
    columns: Vec<Vec<f64>>,
    /// Per client, the distance to the nearest fictitious facility.
    fictitious_dist: Vec<f64>,
    /// Cost of serving every client by the fictitious facilities alone.
    base_cost: f64,
}

impl<'a> FictitiousExtension<'a> {
    /// Instantiate a guess. Slots whose shell is empty are dropped; `None`
    /// when every slot is empty (the guess proposes no facility at all).
    pub fn build(
        instance: &'a MetricInstance,
        guess: &GuessContext,
        grid: &RadiusGrid,
    ) -> Option<Self> {
        let mut parts = Vec::new();
        for (slot, (&li, &level)) in guess.leaders.iter().zip(&guess.levels).enumerate() {
            let _ = slot;
            let leader = instance.clients()[li].id;
            let members: Vec<PointId> = instance
                .facilities()
                .iter()
                .copied()
                .filter(|&f| grid.level_of(instance.distance(f, leader)) == Some(level))
                .collect();
            if !members.is_empty() {
                parts.push(ExtensionPart { leader, radius: grid.value(level), members });
            }
        }
        Self::from_parts(instance, parts)
    }

    /// Instantiate from explicit non-empty parts (used by the verification
    /// paths that replay a reference clustering).
    pub fn from_parts(instance: &'a MetricInstance, parts: Vec<ExtensionPart>) -> Option<Self> {
        if parts.is_empty() {
            return None;
        }
        let mut original = Vec::new();
        let mut part_of = Vec::new();
        for (p, part) in parts.iter().enumerate() {
            debug_assert!(!part.members.is_empty());
            for &f in &part.members {
                original.push(f);
                part_of.push(p);
            }
        }
        let columns: Vec<Vec<f64>> = original
            .iter()
            .map(|&f| instance.clients().iter().map(|c| instance.distance(c.id, f)).collect())
            .collect();
        let fictitious_dist: Vec<f64> = instance
            .clients()
            .iter()
            .map(|c| {
                parts
                    .iter()
                    .map(|part| {
                        2.0 * part.radius
                            + part
                                .members
                                .iter()
                                .map(|&f| instance.distance(f, c.id))
                                .fold(f64::INFINITY, f64::min)
                    })
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        let base_cost = instance
            .clients()
            .iter()
            .zip(&fictitious_dist)
            .map(|(c, &d)| c.weight * instance.objective().apply(d))
            .sum();
        Some(FictitiousExtension {
            instance,
            parts,
            original,
            part_of,
            columns,
            fictitious_dist,
            base_cost,
        })
    }

    pub fn instance(&self) -> &MetricInstance {
        self.instance
    }

    pub fn parts(&self) -> &[ExtensionPart] {
        &self.parts
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn ground_size(&self) -> usize {
        self.original.len()
    }

    /// Original facility behind a copy.
    pub fn original_of(&self, g: usize) -> PointId {
        self.original[g]
    }

    pub fn part_of(&self, g: usize) -> usize {
        self.part_of[g]
    }

    /// Cost of serving every client with the fictitious facilities only.
    pub fn base_cost(&self) -> f64 {
        self.base_cost
    }

    /// Cost when `set` (copies) is opened next to the fictitious facilities.
    pub fn cost_with(&self, set: &[usize]) -> f64 {
        let mut total = 0.0;
        for (j, c) in self.instance.clients().iter().enumerate() {
            let mut d = self.fictitious_dist[j];
            for &g in set {
                let dg = self.columns[g][j];
                if dg < d {
                    d = dg;
                }
            }
            total += c.weight * self.instance.objective().apply(d);
        }
        total
    }

    /// The one-element-per-part constraint over the copies.
    pub fn partition_constraint(&self) -> PartitionConstraint {
        PartitionConstraint::new(self.part_of.clone(), self.parts.len())
            .expect("parts are non-empty by construction")
    }

    /// Map a copy set back to the original facility ids, sorted and unique.
    pub fn reconstruct(&self, set: &[usize]) -> Vec<PointId> {
        let mut out: Vec<PointId> = set.iter().map(|&g| self.original[g]).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Number of points of the extended space: the original points followed
    /// by one fictitious facility per part.
    pub fn extended_point_count(&self) -> usize {
        self.instance.n() + self.parts.len()
    }

    /// Distance in the extended space; indices at or above `n` address the
    /// fictitious facilities in part order.
    pub fn extended_distance(&self, a: usize, b: usize) -> f64 {
        let n = self.instance.n();
        match (a < n, b < n) {
            (true, true) => self.instance.distance(a, b),
            (true, false) => self.fictitious_to_point(b - n, a),
            (false, true) => self.fictitious_to_point(a - n, b),
            (false, false) => {
                if a == b {
                    0.0
                } else {
                    let p = &self.parts[a - n];
                    let q = &self.parts[b - n];
                    let mut best = f64::INFINITY;
                    for &f in &p.members {
                        for &g in &q.members {
                            let d = 2.0 * p.radius + self.instance.distance(f, g) + 2.0 * q.radius;
                            if d < best {
                                best = d;
                            }
                        }
                    }
                    best
                }
            }
        }
    }

    fn fictitious_to_point(&self, part: usize, v: PointId) -> f64 {
        let p = &self.parts[part];
        p.members
            .iter()
            .map(|&f| 2.0 * p.radius + self.instance.distance(f, v))
            .fold(f64::INFINITY, f64::min)
    }
}

/// The per-guess objective: how much cost the copies save on top of the
/// fictitious facilities. Normalized (empty set saves nothing), monotone and
/// submodular.
pub struct ImprovObjective<'a, 'b> {
    ext: &'b FictitiousExtension<'a>,
}

impl<'a, 'b> ImprovObjective<'a, 'b> {
    pub fn new(ext: &'b FictitiousExtension<'a>) -> Self {
        ImprovObjective { ext }
    }
}

impl SetFunction for ImprovObjective<'_, '_> {
    fn ground_size(&self) -> usize {
        self.ext.ground_size()
    }

    fn eval(&self, set: &[usize]) -> f64 {
        self.ext.base_cost() - self.ext.cost_with(set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{Client, Objective};
    use crate::submodular::check_set_function;

    /// Line at positions 0, 1, 2, 5; clients everywhere, facilities at
    /// 0 (pos 0) and 3 (pos 5).
    fn line() -> MetricInstance {
        MetricInstance::from_euclidean(
            &[vec![0.0], vec![1.0], vec![2.0], vec![5.0]],
            (0..4).map(|id| Client { id, weight: 1.0 }).collect(),
            vec![0, 3],
            2,
            Objective::Median,
        )
        .unwrap()
    }

    fn grid_for(inst: &MetricInstance) -> RadiusGrid {
        RadiusGrid::new(1.0, inst.max_distance(), true).unwrap()
    }

    #[test]
    fn shells_pick_up_facilities_at_the_rounded_distance() {
        let inst = line();
        let grid = grid_for(&inst);
        // Leader client 1 (position 1): facility 0 at distance 1 (level of 1),
        // facility 3 at distance 4 (level of 4).
        let guess = GuessContext {
            leaders: vec![1, 1],
            levels: vec![grid.level_of(1.0).unwrap(), grid.level_of(4.0).unwrap()],
        };
        let ext = FictitiousExtension::build(&inst, &guess, &grid).unwrap();
        assert_eq!(ext.num_parts(), 2);
        assert_eq!(ext.parts()[0].members, vec![0]);
        assert_eq!(ext.parts()[1].members, vec![3]);
        assert_eq!(ext.ground_size(), 2);
    }

    #[test]
    fn empty_slots_are_dropped_and_all_empty_guesses_vanish() {
        let inst = line();
        let grid = grid_for(&inst);
        // Leader client 0: no facility at rounded distance 2 (facility 0 is
        // at 0, facility 3 at 5 which rounds to 8).
        let level_two = (0..grid.num_levels()).find(|&l| grid.value(l) == 2.0).unwrap();
        let guess = GuessContext { leaders: vec![0, 0], levels: vec![level_two, level_two] };
        assert!(FictitiousExtension::build(&inst, &guess, &grid).is_none());

        let zero = grid.level_of(0.0).unwrap();
        let mixed = GuessContext { leaders: vec![0, 0], levels: vec![zero, level_two] };
        let ext = FictitiousExtension::build(&inst, &mixed, &grid).unwrap();
        assert_eq!(ext.num_parts(), 1);
        assert_eq!(ext.parts()[0].members, vec![0]);
    }

    #[test]
    fn fictitious_distances_follow_the_two_radius_rule() {
        let inst = line();
        let grid = grid_for(&inst);
        let guess = GuessContext {
            leaders: vec![1],
            levels: vec![grid.level_of(1.0).unwrap()],
        };
        let ext = FictitiousExtension::build(&inst, &guess, &grid).unwrap();
        // Part: facility 0 with radius 1; fictitious facility sits at 2*1
        // from it. Client 2 (position 2) is at 2 from facility 0, so at 4.
        let n = inst.n();
        assert_eq!(ext.extended_distance(n, 0), 2.0);
        assert_eq!(ext.extended_distance(2, n), 4.0);
        assert_eq!(ext.extended_distance(n, n), 0.0);
        // Base cost: clients at 0,1,2,5 pay 2, 3, 4, 7.
        assert_eq!(ext.base_cost(), 16.0);
    }

    #[test]
    fn improvement_is_normalized_monotone_and_submodular() {
        let inst = line();
        let grid = grid_for(&inst);
        let guess = GuessContext {
            leaders: vec![1, 2],
            levels: vec![grid.level_of(1.0).unwrap(), grid.level_of(4.0).unwrap()],
        };
        let ext = FictitiousExtension::build(&inst, &guess, &grid).unwrap();
        let f = ImprovObjective::new(&ext);
        assert_eq!(f.eval(&[]), 0.0);
        let report = check_set_function(&f, 1e-9).unwrap();
        assert!(report.all_hold(), "{:?}", report.counterexample);
    }

    #[test]
    fn opening_real_facilities_recovers_the_real_cost() {
        let inst = line();
        let grid = grid_for(&inst);
        let guess = GuessContext {
            leaders: vec![0, 3],
            levels: vec![grid.level_of(0.0).unwrap(), grid.level_of(0.0).unwrap()],
        };
        let ext = FictitiousExtension::build(&inst, &guess, &grid).unwrap();
        // Both facilities sit exactly on their leaders; opening one copy per
        // part gives the true cost of opening {0, 3}.
        let all: Vec<usize> = (0..ext.ground_size()).collect();
        let open = ext.reconstruct(&all);
        assert_eq!(open, vec![0, 3]);
        assert_eq!(ext.cost_with(&all), inst.cost(&open).unwrap());
    }

    #[test]
    fn reconstruct_deduplicates_copies_of_the_same_facility() {
        let inst = line();
        let grid = grid_for(&inst);
        // Both slots name the same shell; the two copies map to facility 0.
        let zero = grid.level_of(0.0).unwrap();
        let guess = GuessContext { leaders: vec![0, 0], levels: vec![zero, zero] };
        let ext = FictitiousExtension::build(&inst, &guess, &grid).unwrap();
        assert_eq!(ext.ground_size(), 2);
        let both: Vec<usize> = (0..2).collect();
        assert_eq!(ext.reconstruct(&both), vec![0]);
    }

    #[test]
    fn extended_space_is_a_metric_on_a_sample_guess() {
        let inst = line();
        let grid = grid_for(&inst);
        let guess = GuessContext {
            leaders: vec![1, 2],
            levels: vec![grid.level_of(1.0).unwrap(), grid.level_of(3.0).unwrap()],
        };
        let ext = FictitiousExtension::build(&inst, &guess, &grid).unwrap();
        let m = ext.extended_point_count();
        for a in 0..m {
            assert_eq!(ext.extended_distance(a, a), 0.0);
            for b in 0..m {
                let ab = ext.extended_distance(a, b);
                assert_eq!(ab, ext.extended_distance(b, a));
                assert!(ab >= 0.0);
                for via in 0..m {
                    let detour = ext.extended_distance(a, via) + ext.extended_distance(via, b);
                    assert!(
                        ab <= detour + 1e-12,
                        "triangle violated: d({a},{b}) = {ab} > {detour} via {via}"
                    );
                }
            }
        }
    }
}
