//! The star relation: the diagonal plus every pair through one hub point.
//! Reflexive and symmetric, yet no union of fewer than `n − 1` equivalence
//! relations covers it — each off-diagonal spoke needs its own member.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::partition::enumerate_partitions;
use crate::relation::Relation;
use crate::space::{GroundSpace, PointId, SpaceError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StarError {
    #[error("a star instance needs at least 2 points, got {0}")]
    TooSmall(usize),
    #[error("exhaustive checks are limited to n ≤ {limit}, got {n}")]
    TooLargeForEnumeration { n: usize, limit: usize },
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// `R = D ∪ ({hub} × carrier) ∪ (carrier × {hub})` on an `n`-point carrier.
#[derive(Clone, Debug)]
pub struct StarInstance {
    space: Arc<GroundSpace>,
    hub: PointId,
    relation: Relation,
}

impl StarInstance {
    pub fn new(n: usize) -> Result<Self, StarError> {
        if n < 2 {
            return Err(StarError::TooSmall(n));
        }
        let names: Vec<String> = (1..=n).map(|i| format!("s{i}")).collect();
        let space = GroundSpace::x_only(names)?;
        let hub = PointId(0);
        let mut pairs: Vec<(PointId, PointId)> = space.points().map(|p| (p, p)).collect();
        for p in space.points() {
            pairs.push((hub, p));
            pairs.push((p, hub));
        }
        let relation = Relation::new(space.clone(), pairs).expect("points from the space");
        Ok(StarInstance { space, hub, relation })
    }

    pub fn n(&self) -> usize {
        self.space.point_count()
    }

    pub fn space(&self) -> &Arc<GroundSpace> {
        &self.space
    }

    pub fn hub(&self) -> PointId {
        self.hub
    }

    pub fn relation(&self) -> &Relation {
        &self.relation
    }

    fn carrier(&self) -> BTreeSet<PointId> {
        self.space.points().collect()
    }

    fn spoke_member(&self, spoke: PointId) -> Relation {
        let mut pairs: Vec<(PointId, PointId)> = self.space.points().map(|p| (p, p)).collect();
        pairs.push((self.hub, spoke));
        pairs.push((spoke, self.hub));
        Relation::new(self.space.clone(), pairs).expect("points from the space")
    }

    /// The covering family: one member `D ∪ {(hub,β),(β,hub)}` per spoke
    /// `β ≠ hub`. Every member is an equivalence relation and their union
    /// is the star.
    pub fn canonical_family(&self) -> Vec<Relation> {
        self.space
            .points()
            .filter(|&p| p != self.hub)
            .map(|p| self.spoke_member(p))
            .collect()
    }

    /// Every equivalence relation on the carrier contained in the star:
    /// exactly the diagonal and the spoke members. Two distinct off-diagonal
    /// spokes in one transitive relation would force a pair between two
    /// non-hub points, which the star lacks. For `n ≤ 5` the structural
    /// answer is cross-checked against full partition enumeration.
    pub fn equiv_subrelations(&self) -> Vec<Relation> {
        let mut out = vec![Relation::diagonal(self.space.clone())];
        out.extend(self.canonical_family());
        if self.n() <= 5 {
            let enumerated = self.enumerate_equiv_subrelations();
            assert_eq!(enumerated.len(), out.len(), "structural count vs enumeration");
            for r in &out {
                assert!(enumerated.contains(r), "structural member missing from enumeration");
            }
        }
        out
    }

    /// Brute-force oracle: filter all partitions of the carrier down to
    /// those whose induced relation sits inside the star.
    pub fn enumerate_equiv_subrelations(&self) -> Vec<Relation> {
        enumerate_partitions(&self.space, &self.carrier())
            .into_iter()
            .map(|p| p.to_relation())
            .filter(|r| r.is_subset_of(&self.relation))
            .collect()
    }

    /// Least number of equivalence relations whose union is the star:
    /// `n − 1`. Lower bound: a cover's members sit inside the star, each
    /// carries at most one off-diagonal spoke, and there are `n − 1`
    /// spokes. Upper bound: the canonical family.
    pub fn min_cover_size(&self) -> usize {
        self.n() - 1
    }

    /// Exhaustive confirmation for small `n`: no subset of the equivalence
    /// subrelations smaller than `n − 1` unions to the star.
    pub fn exhaustive_min_cover(&self) -> Result<usize, StarError> {
        let n = self.n();
        if n > 5 {
            return Err(StarError::TooLargeForEnumeration { n, limit: 5 });
        }
        let members = self.enumerate_equiv_subrelations();
        let m = members.len();
        let mut best = usize::MAX;
        for mask in 1u32..(1 << m) {
            let size = mask.count_ones() as usize;
            if size >= best {
                continue;
            }
            let mut union = Relation::empty(self.space.clone());
            for (i, member) in members.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    union = union.union(member).expect("one space");
                }
            }
            if union == self.relation {
                best = size;
            }
        }
        Ok(best)
    }

    /// Every member of every exact cover has at most one off-diagonal
    /// spoke pair; checked by enumeration for `n ≤ 5`.
    pub fn members_have_single_spokes(&self) -> Result<bool, StarError> {
        let n = self.n();
        if n > 5 {
            return Err(StarError::TooLargeForEnumeration { n, limit: 5 });
        }
        Ok(self.enumerate_equiv_subrelations().iter().all(|r| {
            let off_diag = r.pairs().filter(|&(a, b)| a != b).count();
            off_diag <= 2 // one spoke pair and its converse
        }))
    }

    /// Covers drawn from the equivalence subrelations must contain the
    /// whole canonical family; only the diagonal member is optional.
    pub fn covers_are_unique_up_to_diagonal(&self) -> Result<bool, StarError> {
        let n = self.n();
        if n > 5 {
            return Err(StarError::TooLargeForEnumeration { n, limit: 5 });
        }
        let family = self.canonical_family();
        let members = self.enumerate_equiv_subrelations();
        let m = members.len();
        for mask in 1u32..(1 << m) {
            let chosen: Vec<&Relation> = members
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, r)| r)
                .collect();
            let mut union = Relation::empty(self.space.clone());
            for r in &chosen {
                union = union.union(r).expect("one space");
            }
            if union == self.relation && !family.iter().all(|f| chosen.contains(&f)) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Machine-readable star analysis.
#[derive(Debug, Clone, Serialize)]
pub struct StarReport {
    pub n: usize,
    #[serde(rename = "minCover")]
    pub min_cover: usize,
    #[serde(rename = "familySize")]
    pub family_size: usize,
    #[serde(rename = "uniquenessNote")]
    pub uniqueness_note: String,
    /// Present when `n ≤ 5`; equals `min_cover` when the search agrees.
    #[serde(rename = "exhaustiveMinCover", skip_serializing_if = "Option::is_none")]
    pub exhaustive_min_cover: Option<usize>,
    pub pass: bool,
}

pub fn star_report(n: usize) -> Result<StarReport, StarError> {
    let star = StarInstance::new(n)?;
    let family = star.canonical_family();
    let mut union = Relation::empty(star.space().clone());
    for r in &family {
        union = union.union(r).expect("one space");
    }
    let carrier = star.carrier();
    let mut pass = union == *star.relation();
    pass &= family.iter().all(|r| r.is_equivalence(&carrier));

    let exhaustive = if n <= 5 {
        let found = star.exhaustive_min_cover()?;
        pass &= found == star.min_cover_size();
        pass &= star.covers_are_unique_up_to_diagonal()?;
        pass &= star.members_have_single_spokes()?;
        Some(found)
    } else {
        None
    };

    Ok(StarReport {
        n,
        min_cover: star.min_cover_size(),
        family_size: family.len(),
        uniqueness_note: "every exact cover by equivalence subrelations contains the full \
                          spoke family; the diagonal member is optional"
            .to_string(),
        exhaustive_min_cover: exhaustive,
        pass,
    })
}
