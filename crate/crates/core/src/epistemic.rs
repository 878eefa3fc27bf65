//! Knowledge and common knowledge over finite partition models.
//!
//! An event `A` is known under a partition when the agent's block around
//! the true state stays inside `A`: `knows(A) = A \ [Ω∖A]`. Common
//! knowledge is knowledge under the meet of the agents' partitions, the
//! partition induced by the transitive closure of the union of their
//! equivalence relations; the recursive everyone-knows iteration computes
//! the same event and serves as the independent oracle.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construction::{ConstructionBundle, ConstructionError};
use crate::partition::{Partition, PartitionError};
use crate::relation::{Relation, RelationError};
use crate::rng::Rng;
use crate::space::{GroundSpace, PointId, SpaceError};

pub type Event = BTreeSet<PointId>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EpistemicError {
    #[error("a model needs at least one agent")]
    NoAgents,
    #[error("expected one partition per agent")]
    AgentCountMismatch,
    #[error("duplicate agent {0:?}")]
    DuplicateAgent(String),
    #[error("partition for agent {0:?} does not cover the state set")]
    PartitionCarrierMismatch(String),
    #[error("no partition given for agent {0:?}")]
    MissingPartition(String),
    #[error("unknown agent {0:?}")]
    UnknownAgent(String),
    #[error("degenerate instance: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

/// The event that an agent with information partition `p` knows `a`:
/// `A \ [Ω∖A]`, equivalently the union of the `p`-blocks inside `a`.
pub fn knows(a: &Event, p: &Partition) -> Event {
    let complement: Event = p.carrier().difference(a).copied().collect();
    let reachable = p.saturate(&complement);
    a.difference(&reachable).copied().collect()
}

/// A finite state set with one information partition per agent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpistemicModel {
    space: Arc<GroundSpace>,
    agents: Vec<String>,
    partitions: Vec<Partition>,
}

impl EpistemicModel {
    pub fn from_parts(
        space: Arc<GroundSpace>,
        agents: Vec<String>,
        partitions: Vec<Partition>,
    ) -> Result<Self, EpistemicError> {
        if agents.is_empty() {
            return Err(EpistemicError::NoAgents);
        }
        if agents.len() != partitions.len() {
            return Err(EpistemicError::AgentCountMismatch);
        }
        let mut seen = BTreeSet::new();
        for a in &agents {
            if !seen.insert(a.clone()) {
                return Err(EpistemicError::DuplicateAgent(a.clone()));
            }
        }
        let states: BTreeSet<PointId> = space.points().collect();
        for (agent, p) in agents.iter().zip(&partitions) {
            if *p.carrier() != states || *p.space() != space {
                return Err(EpistemicError::PartitionCarrierMismatch(agent.clone()));
            }
        }
        Ok(EpistemicModel { space, agents, partitions })
    }

    pub fn space(&self) -> &Arc<GroundSpace> {
        &self.space
    }

    pub fn states(&self) -> Event {
        self.space.points().collect()
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn partition_of(&self, agent: &str) -> Result<&Partition, EpistemicError> {
        self.agents
            .iter()
            .position(|a| a == agent)
            .map(|i| &self.partitions[i])
            .ok_or_else(|| EpistemicError::UnknownAgent(agent.to_string()))
    }

    /// Decode an event given as state identifiers.
    pub fn event_from_ids<'a>(
        &self,
        ids: impl IntoIterator<Item = &'a str>,
    ) -> Result<Event, EpistemicError> {
        let mut out = BTreeSet::new();
        for id in ids {
            out.insert(self.space.require(id)?);
        }
        Ok(out)
    }

    pub fn event_ids(&self, event: &Event) -> Vec<String> {
        event.iter().map(|&p| self.space.id_of(p)).collect()
    }

    /// `⋂ᵢ knowsᵢ(a)`: every agent knows `a`.
    pub fn everyone_knows(&self, a: &Event) -> Event {
        let mut acc = knows(a, &self.partitions[0]);
        for p in &self.partitions[1..] {
            let k = knows(a, p);
            acc = acc.intersection(&k).copied().collect();
        }
        acc
    }

    /// The meet of the agents' partitions: coarsest partition refined by all
    /// of them, induced by the transitive closure of the union of their
    /// equivalence relations.
    pub fn meet(&self) -> Partition {
        let mut union = self.partitions[0].to_relation();
        for p in &self.partitions[1..] {
            union = union.union(&p.to_relation()).expect("one space");
        }
        let closed = union.transitive_closure().relation;
        let states = self.states();
        Partition::from_relation(&closed, &states)
            .expect("closure of a union of equivalences is an equivalence")
    }

    /// Common knowledge via the meet partition: `A \ [Ω∖A]` under the meet.
    pub fn common_knowledge_meet(&self, a: &Event) -> Event {
        knows(a, &self.meet())
    }

    /// Common knowledge via the recursive definition: iterate
    /// everyone-knows to stabilization. The sequence is decreasing, so it
    /// stabilizes within `|states|` steps; it must agree with
    /// [`EpistemicModel::common_knowledge_meet`] on every model.
    pub fn common_knowledge_iterated(&self, a: &Event) -> Event {
        let mut current = self.everyone_knows(a);
        loop {
            let next = self.everyone_knows(&current);
            if next == current {
                return current;
            }
            current = next;
        }
    }

    pub fn to_doc(&self) -> ModelDoc {
        ModelDoc {
            states: self.space.points().map(|p| self.space.id_of(p)).collect(),
            agents: self.agents.clone(),
            partitions: self
                .agents
                .iter()
                .zip(&self.partitions)
                .map(|(a, p)| (a.clone(), p.to_doc().blocks))
                .collect(),
        }
    }

    pub fn from_doc(doc: &ModelDoc) -> Result<Self, EpistemicError> {
        let space = GroundSpace::x_only(doc.states.clone())?;
        let states: BTreeSet<PointId> = space.points().collect();
        let mut partitions = Vec::with_capacity(doc.agents.len());
        for agent in &doc.agents {
            let blocks = doc
                .partitions
                .get(agent)
                .ok_or_else(|| EpistemicError::MissingPartition(agent.clone()))?;
            let blocks = blocks
                .iter()
                .map(|b| b.iter().map(|id| space.require(id)).collect::<Result<BTreeSet<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            partitions.push(Partition::new(space.clone(), states.clone(), blocks)?);
        }
        Self::from_parts(space, doc.agents.clone(), partitions)
    }
}

/// Wire form of a model:
/// `{"states": [...], "agents": [...], "partitions": {agent: [[...]...]}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelDoc {
    pub states: Vec<String>,
    pub agents: Vec<String>,
    pub partitions: std::collections::BTreeMap<String, Vec<Vec<String>>>,
}

/// Finite stand-in for the half-interval pairing example: `n` bottom states
/// `b0..`, `n` top states `t0..`; agent 1 pairs `bi ↔ ti` exactly for the
/// chosen indices, agent 2 sees singletons below and one coarse block on
/// top. The meet then glues the whole top block to the paired bottom
/// states.
pub fn pairing_fixture(n: usize, paired: &[usize]) -> Result<EpistemicModel, EpistemicError> {
    if n == 0 {
        return Err(EpistemicError::Degenerate("n = 0".into()));
    }
    let bottom: Vec<String> = (0..n).map(|i| format!("b{i}")).collect();
    let top: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
    let space = GroundSpace::x_only(bottom.iter().chain(top.iter()).cloned())?;
    let states: BTreeSet<PointId> = space.points().collect();

    let mut blocks1: Vec<BTreeSet<PointId>> = Vec::new();
    for i in 0..n {
        let b = space.require(&bottom[i])?;
        let t = space.require(&top[i])?;
        if paired.contains(&i) {
            blocks1.push(BTreeSet::from([b, t]));
        } else {
            blocks1.push(BTreeSet::from([b]));
            blocks1.push(BTreeSet::from([t]));
        }
    }
    let p1 = Partition::new(space.clone(), states.clone(), blocks1)?;

    let mut blocks2: Vec<BTreeSet<PointId>> = bottom
        .iter()
        .map(|id| Ok(BTreeSet::from([space.require(id)?])))
        .collect::<Result<_, SpaceError>>()?;
    blocks2.push(top.iter().map(|id| space.require(id)).collect::<Result<_, _>>()?);
    let p2 = Partition::new(space.clone(), states, blocks2)?;

    EpistemicModel::from_parts(space, vec!["agent1".into(), "agent2".into()], vec![p1, p2])
}

/// One sampled check of the saturation property.
#[derive(Debug, Clone, Serialize)]
pub struct SaturationCase {
    pub a: Vec<String>,
    pub observed: Vec<String>,
    pub pass: bool,
}

/// Report of the saturation demonstration built on a carrier `Ω₀ ∪ B`.
#[derive(Debug, Clone, Serialize)]
pub struct SaturationReport {
    pub carrier: Vec<String>,
    pub omega0: Vec<String>,
    pub s: Vec<String>,
    pub closure_stages: usize,
    pub cases: Vec<SaturationCase>,
    pub pass: bool,
}

/// Saturation demonstration: relate all of `S ⊆ Ω₀` in one block, leave the
/// rest diagonal, run the two-relation construction over the whole carrier,
/// and check that `[A] ∩ Ω₀ = S` under the closed union for every singleton
/// `A ⊆ S` plus ten seeded random non-empty subsets.
pub fn saturation_demo(
    carrier: &[String],
    omega0: &BTreeSet<String>,
    s: &BTreeSet<String>,
    seed: u64,
) -> Result<SaturationReport, EpistemicError> {
    if carrier.is_empty() {
        return Err(EpistemicError::Degenerate("empty carrier".into()));
    }
    let carrier_set: BTreeSet<&String> = carrier.iter().collect();
    if !omega0.iter().all(|id| carrier_set.contains(id)) {
        return Err(EpistemicError::Degenerate("Ω₀ leaves the carrier".into()));
    }
    if omega0.len() == carrier.len() {
        return Err(EpistemicError::Degenerate("Ω₀ must be a proper subset of the carrier".into()));
    }
    if s.is_empty() {
        return Err(EpistemicError::Degenerate("S is empty".into()));
    }
    if !s.iter().all(|id| omega0.contains(id)) {
        return Err(EpistemicError::Degenerate("S leaves Ω₀".into()));
    }

    let space = GroundSpace::with_auto_y(carrier.to_vec())?;
    let s_points: BTreeSet<PointId> = s
        .iter()
        .map(|id| space.require(id))
        .collect::<Result<_, _>>()?;
    let omega0_points: BTreeSet<PointId> = omega0
        .iter()
        .map(|id| space.require(id))
        .collect::<Result<_, _>>()?;

    // (ψ, ω) ∈ E  iff  {ψ, ω} ⊆ S or ψ = ω
    let mut pairs: Vec<(PointId, PointId)> = space.x_points().map(|p| (p, p)).collect();
    for &a in &s_points {
        for &b in &s_points {
            pairs.push((a, b));
        }
    }
    let e = Relation::new(space.clone(), pairs)?;
    let bundle = ConstructionBundle::for_equivalence(&e)?;
    let closure = bundle.i_union_j().transitive_closure();

    let mut sample: Vec<BTreeSet<PointId>> =
        s_points.iter().map(|&p| BTreeSet::from([p])).collect();
    let mut rng = Rng::new(seed);
    for _ in 0..10 {
        sample.push(crate::gen::random_nonempty_subset(&s_points, &mut rng));
    }

    let mut cases = Vec::with_capacity(sample.len());
    let mut pass = true;
    for a in sample {
        let saturated = closure.relation.saturate(&a)?;
        let observed: BTreeSet<PointId> =
            saturated.intersection(&omega0_points).copied().collect();
        let ok = observed == s_points;
        pass &= ok;
        cases.push(SaturationCase {
            a: a.iter().map(|&p| space.id_of(p)).collect(),
            observed: observed.iter().map(|&p| space.id_of(p)).collect(),
            pass: ok,
        });
    }
    Ok(SaturationReport {
        carrier: carrier.to_vec(),
        omega0: omega0.iter().cloned().collect(),
        s: s.iter().cloned().collect(),
        closure_stages: closure.stages,
        cases,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 𝒫₁ = {{1,2},{3,4}}, 𝒫₂ = {{1},{2,3},{4}} — the alternating-blocks
    /// model whose meet is a single block.
    fn attack_model() -> EpistemicModel {
        let doc: ModelDoc = serde_json::from_value(serde_json::json!({
            "states": ["1", "2", "3", "4"],
            "agents": ["a1", "a2"],
            "partitions": {
                "a1": [["1", "2"], ["3", "4"]],
                "a2": [["1"], ["2", "3"], ["4"]]
            }
        }))
        .unwrap();
        EpistemicModel::from_doc(&doc).unwrap()
    }

    #[test]
    fn knowing_the_sure_event_and_under_singletons() {
        let m = attack_model();
        let omega = m.states();
        for p in m.partitions() {
            assert_eq!(knows(&omega, p), omega);
        }
        let discrete = Partition::discrete(m.space().clone(), omega.clone());
        let a = m.event_from_ids(["2", "4"]).unwrap();
        assert_eq!(knows(&a, &discrete), a);
    }

    #[test]
    fn knows_drops_states_whose_block_escapes() {
        // p = {{1,2},{3}}, A = {1,3} → only 3's block stays inside A
        let space = GroundSpace::x_only(["1", "2", "3"]).unwrap();
        let states: BTreeSet<PointId> = space.points().collect();
        let p = Partition::new(
            space.clone(),
            states,
            vec![
                ["1", "2"].map(|i| space.require(i).unwrap()).into_iter().collect(),
                BTreeSet::from([space.require("3").unwrap()]),
            ],
        )
        .unwrap();
        let a: Event = [space.require("1").unwrap(), space.require("3").unwrap()]
            .into_iter()
            .collect();
        let known = knows(&a, &p);
        assert_eq!(known, BTreeSet::from([space.require("3").unwrap()]));
    }

    #[test]
    fn everyone_knows_intersects_the_agents() {
        let m = attack_model();
        let omega = m.states();
        assert_eq!(m.everyone_knows(&omega), omega);
        let a = m.event_from_ids(["1", "2", "3"]).unwrap();
        assert_eq!(m.event_ids(&m.everyone_knows(&a)), vec!["1", "2"]);
    }

    #[test]
    fn single_agent_everyone_knows_is_plain_knowledge() {
        let m = attack_model();
        let single = EpistemicModel::from_parts(
            m.space().clone(),
            vec!["solo".into()],
            vec![m.partitions()[0].clone()],
        )
        .unwrap();
        let a = m.event_from_ids(["1", "2", "4"]).unwrap();
        assert_eq!(single.everyone_knows(&a), knows(&a, &m.partitions()[0]));
        assert_eq!(single.common_knowledge_meet(&a), knows(&a, &m.partitions()[0]));
    }

    #[test]
    fn meet_of_alternating_blocks_is_one_block() {
        let m = attack_model();
        let meet = m.meet();
        assert_eq!(meet.block_count(), 1);
    }

    #[test]
    fn meet_of_identical_partitions_is_that_partition() {
        let space = GroundSpace::x_only(["1", "2", "3"]).unwrap();
        let states: BTreeSet<PointId> = space.points().collect();
        let p = Partition::new(
            space.clone(),
            states,
            vec![
                ["1", "2"].map(|i| space.require(i).unwrap()).into_iter().collect(),
                BTreeSet::from([space.require("3").unwrap()]),
            ],
        )
        .unwrap();
        let m = EpistemicModel::from_parts(
            space.clone(),
            vec!["a".into(), "b".into()],
            vec![p.clone(), p.clone()],
        )
        .unwrap();
        assert_eq!(m.meet(), p);

        let discrete = Partition::discrete(space.clone(), space.points().collect());
        let m = EpistemicModel::from_parts(
            space,
            vec!["a".into(), "b".into()],
            vec![discrete.clone(), discrete.clone()],
        )
        .unwrap();
        assert_eq!(m.meet(), discrete);
    }

    #[test]
    fn common_knowledge_fails_in_the_attack_model() {
        let m = attack_model();
        let a = m.event_from_ids(["1", "2", "3"]).unwrap();
        // the meet block {1,2,3,4} is not inside A
        assert!(m.common_knowledge_meet(&a).is_empty());
        // the iteration shrinks {1,2} → {1} → ∅
        assert!(m.common_knowledge_iterated(&a).is_empty());
        assert_eq!(m.common_knowledge_meet(&m.states()), m.states());
        assert_eq!(m.common_knowledge_iterated(&m.states()), m.states());
    }

    #[test]
    fn meet_is_the_lattice_meet() {
        let m = attack_model();
        let meet = m.meet();
        for p in m.partitions() {
            assert!(p.refines(&meet));
        }
    }

    #[test]
    fn pairing_fixture_blows_up_the_meet_block() {
        let m = pairing_fixture(3, &[0, 2]).unwrap();
        let meet = m.meet();
        // paired bottoms join the coarse top block
        let big = m.event_from_ids(["b0", "b2", "t0", "t1", "t2"]).unwrap();
        let t0 = m.space().require("t0").unwrap();
        assert_eq!(meet.block_of(t0).unwrap(), &big);
        // agent 1 knows the bottom event exactly off the paired states
        let bottom = m.event_from_ids(["b0", "b1", "b2"]).unwrap();
        let known = knows(&bottom, &m.partitions()[0]);
        assert_eq!(m.event_ids(&known), vec!["b1"]);
    }

    #[test]
    fn model_doc_round_trip() {
        let m = attack_model();
        let doc = m.to_doc();
        let json = serde_json::to_string(&doc).unwrap();
        let parsed: ModelDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(EpistemicModel::from_doc(&parsed).unwrap(), m);
    }

    #[test]
    fn model_doc_missing_partition_is_reported() {
        let mut doc = attack_model().to_doc();
        doc.partitions.remove("a2");
        assert_eq!(
            EpistemicModel::from_doc(&doc).unwrap_err(),
            EpistemicError::MissingPartition("a2".into())
        );
    }

    #[test]
    fn model_validation_errors() {
        let space = GroundSpace::x_only(["1", "2"]).unwrap();
        let states: BTreeSet<PointId> = space.points().collect();
        let p = Partition::discrete(space.clone(), states);
        assert_eq!(
            EpistemicModel::from_parts(space.clone(), vec![], vec![]).unwrap_err(),
            EpistemicError::NoAgents
        );
        assert_eq!(
            EpistemicModel::from_parts(space.clone(), vec!["a".into()], vec![p.clone(), p.clone()])
                .unwrap_err(),
            EpistemicError::AgentCountMismatch
        );
        assert_eq!(
            EpistemicModel::from_parts(
                space,
                vec!["a".into(), "a".into()],
                vec![p.clone(), p]
            )
            .unwrap_err(),
            EpistemicError::DuplicateAgent("a".into())
        );
    }

    #[test]
    fn saturation_demo_examples() {
        // S = Ω₀: everything inside Ω₀ is one block
        let carrier: Vec<String> = ["1", "2", "3"].map(String::from).to_vec();
        let omega0: BTreeSet<String> = ["1", "2"].map(String::from).into_iter().collect();
        let report = saturation_demo(&carrier, &omega0, &omega0.clone(), 1).unwrap();
        assert!(report.pass);

        // |S| = 1: E is the diagonal and the saturation stays put
        let s: BTreeSet<String> = ["1"].map(String::from).into_iter().collect();
        let report = saturation_demo(&carrier, &omega0, &s, 2).unwrap();
        assert!(report.pass);

        // 5-state carrier, |Ω₀| = 3, |S| = 2
        let carrier: Vec<String> = ["1", "2", "3", "4", "5"].map(String::from).to_vec();
        let omega0: BTreeSet<String> = ["1", "2", "3"].map(String::from).into_iter().collect();
        let s: BTreeSet<String> = ["1", "3"].map(String::from).into_iter().collect();
        let report = saturation_demo(&carrier, &omega0, &s, 3).unwrap();
        assert!(report.pass, "{report:?}");
        assert!(report.closure_stages <= 5);
    }

    #[test]
    fn saturation_demo_rejects_degenerate_instances() {
        let carrier: Vec<String> = ["1", "2"].map(String::from).to_vec();
        let all: BTreeSet<String> = carrier.iter().cloned().collect();
        let s: BTreeSet<String> = ["1"].map(String::from).into_iter().collect();
        assert!(matches!(
            saturation_demo(&carrier, &all, &s, 0),
            Err(EpistemicError::Degenerate(_))
        ));
        assert!(matches!(
            saturation_demo(&[], &BTreeSet::new(), &s, 0),
            Err(EpistemicError::Degenerate(_))
        ));
        let omega0: BTreeSet<String> = ["1"].map(String::from).into_iter().collect();
        assert!(matches!(
            saturation_demo(&carrier, &omega0, &BTreeSet::new(), 0),
            Err(EpistemicError::Degenerate(_))
        ));
    }
}
