//! Partitions of a point set and the partition/equivalence-relation
//! correspondence.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::relation::{Relation, RelationError};
use crate::space::{GroundSpace, PointId, SpaceError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("block contains point outside the carrier")]
    BlockOutsideCarrier,
    #[error("blocks are not disjoint: point {0:?} appears twice")]
    Overlap(String),
    #[error("blocks do not cover the carrier: {0:?} missing")]
    NotCovering(String),
    #[error("empty block")]
    EmptyBlock,
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// Non-empty, pairwise-disjoint blocks covering a declared carrier.
///
/// Blocks are stored sorted by their least element, so equality is
/// structural.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    space: Arc<GroundSpace>,
    carrier: BTreeSet<PointId>,
    blocks: Vec<BTreeSet<PointId>>,
}

impl Partition {
    pub fn new(
        space: Arc<GroundSpace>,
        carrier: BTreeSet<PointId>,
        blocks: impl IntoIterator<Item = BTreeSet<PointId>>,
    ) -> Result<Self, PartitionError> {
        let mut seen = BTreeSet::new();
        let mut blocks: Vec<BTreeSet<PointId>> = blocks.into_iter().collect();
        for block in &blocks {
            if block.is_empty() {
                return Err(PartitionError::EmptyBlock);
            }
            for &p in block {
                if !carrier.contains(&p) {
                    return Err(PartitionError::BlockOutsideCarrier);
                }
                if !seen.insert(p) {
                    return Err(PartitionError::Overlap(space.id_of(p)));
                }
            }
        }
        if let Some(&missing) = carrier.difference(&seen).next() {
            return Err(PartitionError::NotCovering(space.id_of(missing)));
        }
        blocks.sort_by_key(|b| *b.first().expect("non-empty"));
        Ok(Partition { space, carrier, blocks })
    }

    /// All-singletons partition.
    pub fn discrete(space: Arc<GroundSpace>, carrier: BTreeSet<PointId>) -> Self {
        let blocks = carrier.iter().map(|&p| BTreeSet::from([p])).collect();
        Partition { space, carrier, blocks }
    }

    pub fn space(&self) -> &Arc<GroundSpace> {
        &self.space
    }

    pub fn carrier(&self) -> &BTreeSet<PointId> {
        &self.carrier
    }

    pub fn blocks(&self) -> &[BTreeSet<PointId>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, p: PointId) -> Option<&BTreeSet<PointId>> {
        self.blocks.iter().find(|b| b.contains(&p))
    }

    /// Saturation `[a]`: the union of all blocks meeting `a`.
    pub fn saturate(&self, a: &BTreeSet<PointId>) -> BTreeSet<PointId> {
        let mut out = BTreeSet::new();
        for block in &self.blocks {
            if !block.is_disjoint(a) {
                out.extend(block.iter().copied());
            }
        }
        out
    }

    /// The induced equivalence relation: the union of `block × block`.
    pub fn to_relation(&self) -> Relation {
        let mut pairs = Vec::new();
        for block in &self.blocks {
            for &a in block {
                for &b in block {
                    pairs.push((a, b));
                }
            }
        }
        Relation::new(self.space.clone(), pairs).expect("carrier points belong to the space")
    }

    /// Inverse of [`Partition::to_relation`]; `r` must be an equivalence
    /// relation on `carrier`.
    pub fn from_relation(r: &Relation, carrier: &BTreeSet<PointId>) -> Result<Self, PartitionError> {
        r.check_equivalence(carrier)
            .map_err(RelationError::NotEquivalence)?;
        let mut block_of: BTreeMap<PointId, PointId> = BTreeMap::new();
        for &p in carrier {
            // smallest equivalent point is the block representative
            let rep = carrier
                .iter()
                .copied()
                .find(|&q| r.contains(p, q))
                .expect("reflexive");
            block_of.insert(p, rep);
        }
        let mut blocks: BTreeMap<PointId, BTreeSet<PointId>> = BTreeMap::new();
        for (&p, &rep) in &block_of {
            blocks.entry(rep).or_default().insert(p);
        }
        Partition::new(r.space().clone(), carrier.clone(), blocks.into_values())
    }

    /// `self` refines `coarser`: every block of `self` lies inside a single
    /// block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.blocks.iter().all(|b| {
            let Some(&first) = b.first() else { return true };
            match coarser.block_of(first) {
                Some(big) => b.is_subset(big),
                None => false,
            }
        })
    }

    pub fn to_doc(&self) -> PartitionDoc {
        PartitionDoc {
            carrier: self.carrier.iter().map(|&p| self.space.id_of(p)).collect(),
            blocks: self
                .blocks
                .iter()
                .map(|b| b.iter().map(|&p| self.space.id_of(p)).collect())
                .collect(),
        }
    }

    pub fn from_doc(space: &Arc<GroundSpace>, doc: &PartitionDoc) -> Result<Self, PartitionError> {
        let carrier = doc
            .carrier
            .iter()
            .map(|id| space.require(id))
            .collect::<Result<BTreeSet<_>, _>>()?;
        let blocks = doc
            .blocks
            .iter()
            .map(|b| b.iter().map(|id| space.require(id)).collect::<Result<BTreeSet<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Partition::new(space.clone(), carrier, blocks)
    }
}

/// Wire form of a partition: `{"carrier": [ids...], "blocks": [[ids...]...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionDoc {
    pub carrier: Vec<String>,
    pub blocks: Vec<Vec<String>>,
}

/// Every partition of `carrier`, generated from restricted-growth strings.
/// Deterministic order; meant for small carriers (Bell numbers grow fast).
pub fn enumerate_partitions(space: &Arc<GroundSpace>, carrier: &BTreeSet<PointId>) -> Vec<Partition> {
    let points: Vec<PointId> = carrier.iter().copied().collect();
    let n = points.len();
    let mut out = Vec::new();
    if n == 0 {
        out.push(Partition::new(space.clone(), BTreeSet::new(), Vec::new()).expect("empty"));
        return out;
    }
    // assignment[i] = block index of points[i]; restricted growth keeps it canonical
    let mut assignment = vec![0usize; n];
    loop {
        let block_count = assignment.iter().copied().max().unwrap() + 1;
        let mut blocks: Vec<BTreeSet<PointId>> = vec![BTreeSet::new(); block_count];
        for (i, &b) in assignment.iter().enumerate() {
            blocks[b].insert(points[i]);
        }
        out.push(
            Partition::new(space.clone(), carrier.clone(), blocks).expect("assignment covers"),
        );

        // next restricted-growth string
        let mut i = n;
        loop {
            if i == 1 {
                return out;
            }
            i -= 1;
            let max_prefix = assignment[..i].iter().copied().max().unwrap();
            if assignment[i] <= max_prefix {
                assignment[i] += 1;
                for a in assignment.iter_mut().skip(i + 1) {
                    *a = 0;
                }
                break;
            }
        }
    }
}
