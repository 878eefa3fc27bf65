//! Seeded random instances for verification sweeps.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::epistemic::EpistemicModel;
use crate::partition::Partition;
use crate::relation::Relation;
use crate::rng::Rng;
use crate::space::{GroundSpace, PointId};

/// Random partition of `carrier`: each point joins an existing block or
/// opens a new one, uniformly. Every partition has positive probability.
pub fn random_partition(
    space: &Arc<GroundSpace>,
    carrier: &BTreeSet<PointId>,
    rng: &mut Rng,
) -> Partition {
    let mut blocks: Vec<BTreeSet<PointId>> = Vec::new();
    for &p in carrier {
        let k = rng.below(blocks.len() + 1);
        if k == blocks.len() {
            blocks.push(BTreeSet::from([p]));
        } else {
            blocks[k].insert(p);
        }
    }
    Partition::new(space.clone(), carrier.clone(), blocks).expect("blocks partition the carrier")
}

/// Random equivalence relation on the `X` part of `space`.
pub fn random_equivalence_on_x(space: &Arc<GroundSpace>, rng: &mut Rng) -> Relation {
    let carrier: BTreeSet<PointId> = space.x_points().collect();
    random_partition(space, &carrier, rng).to_relation()
}

/// Random relation over the whole space with roughly `num/den` pair density.
pub fn random_relation(space: &Arc<GroundSpace>, rng: &mut Rng, num: u64, den: u64) -> Relation {
    let mut pairs = Vec::new();
    for a in space.points() {
        for b in space.points() {
            if rng.chance(num, den) {
                pairs.push((a, b));
            }
        }
    }
    Relation::new(space.clone(), pairs).expect("points from the space")
}

/// Random epistemic model with `1..=max_states` states and
/// `1..=max_agents` agents.
pub fn random_model(rng: &mut Rng, max_states: usize, max_agents: usize) -> EpistemicModel {
    let n = 1 + rng.below(max_states);
    let a = 1 + rng.below(max_agents);
    let states: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let agents: Vec<String> = (1..=a).map(|i| format!("agent{i}")).collect();
    let space = GroundSpace::x_only(states.clone()).expect("fresh ids");
    let carrier: BTreeSet<PointId> = space.points().collect();
    let partitions: Vec<Partition> = (0..a)
        .map(|_| random_partition(&space, &carrier, rng))
        .collect();
    EpistemicModel::from_parts(space, agents, partitions).expect("partitions cover the states")
}

/// Random non-empty subset of `set`.
pub fn random_nonempty_subset(set: &BTreeSet<PointId>, rng: &mut Rng) -> BTreeSet<PointId> {
    assert!(!set.is_empty(), "cannot sample a non-empty subset of the empty set");
    loop {
        let sub: BTreeSet<PointId> = set
            .iter()
            .copied()
            .filter(|_| rng.chance(1, 2))
            .collect();
        if !sub.is_empty() {
            return sub;
        }
    }
}

/// Any subset of `set`, possibly empty.
pub fn random_subset(set: &BTreeSet<PointId>, rng: &mut Rng) -> BTreeSet<PointId> {
    set.iter().copied().filter(|_| rng.chance(1, 2)).collect()
}
