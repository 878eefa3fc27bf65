//! Exact finite binary relations over a [`GroundSpace`].
//!
//! Pair sets are kept canonically ordered, so equality of relations is
//! structural. All operations are pure; composition is diagrammatic:
//! `(a, c) ∈ compose(K, L)` iff there is a `b` with `(a, b) ∈ K` and
//! `(b, c) ∈ L` — the left relation is applied first.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::space::{GroundSpace, PointId, SortReq, SpaceDoc, SpaceError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RelationError {
    #[error("relations live on different ground spaces")]
    SpaceMismatch,
    #[error("point {0:?} does not belong to the ground space")]
    UnknownPoint(String),
    #[error("power exponent must be at least 1")]
    ZeroPower,
    #[error("pair ({0}, {1}) violates declared signature ({2}, {3})")]
    SignatureViolation(String, String, SortReq, SortReq),
    #[error("not an equivalence relation: {0}")]
    NotEquivalence(EquivalenceViolation),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// Why a relation failed the equivalence check; carries a concrete witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivalenceViolation {
    /// A pair leaves the declared carrier.
    StrayPair(String, String),
    /// `(p, p)` missing for a carrier point `p`.
    NotReflexive(String),
    /// `(a, b)` present without `(b, a)`.
    NotSymmetric(String, String),
    /// `(a, b)` and `(b, c)` present without `(a, c)`.
    NotTransitive(String, String, String),
}

impl fmt::Display for EquivalenceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivalenceViolation::StrayPair(a, b) => {
                write!(f, "pair ({a}, {b}) leaves the carrier")
            }
            EquivalenceViolation::NotReflexive(p) => write!(f, "missing reflexive pair ({p}, {p})"),
            EquivalenceViolation::NotSymmetric(a, b) => {
                write!(f, "({a}, {b}) present but ({b}, {a}) missing")
            }
            EquivalenceViolation::NotTransitive(a, b, c) => {
                write!(f, "({a}, {b}) and ({b}, {c}) present but ({a}, {c}) missing")
            }
        }
    }
}

/// A finite set of ordered point pairs over a shared ground space.
#[derive(Clone, Debug)]
pub struct Relation {
    space: Arc<GroundSpace>,
    pairs: BTreeSet<(PointId, PointId)>,
    signature: Option<(SortReq, SortReq)>,
}

impl PartialEq for Relation {
    /// Structural equality: same space, same pair set. The optional
    /// signature is bookkeeping and does not take part.
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.pairs == other.pairs
    }
}

impl Eq for Relation {}

fn same_space(a: &Arc<GroundSpace>, b: &Arc<GroundSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Result of [`Relation::transitive_closure`]: the closure together with the
/// first stage at which the accumulated union of powers became stable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    pub relation: Relation,
    pub stages: usize,
}

impl Relation {
    pub fn new(
        space: Arc<GroundSpace>,
        pairs: impl IntoIterator<Item = (PointId, PointId)>,
    ) -> Result<Self, RelationError> {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        for &(a, b) in &pairs {
            if !space.contains(a) {
                return Err(RelationError::UnknownPoint(format!("#{}", a.0)));
            }
            if !space.contains(b) {
                return Err(RelationError::UnknownPoint(format!("#{}", b.0)));
            }
        }
        Ok(Relation { space, pairs, signature: None })
    }

    /// Attach a sort signature; every pair must respect it.
    pub fn with_signature(mut self, dom: SortReq, cod: SortReq) -> Result<Self, RelationError> {
        for &(a, b) in &self.pairs {
            if !dom.admits(self.space.sort_of(a)) || !cod.admits(self.space.sort_of(b)) {
                return Err(RelationError::SignatureViolation(
                    self.space.id_of(a),
                    self.space.id_of(b),
                    dom,
                    cod,
                ));
            }
        }
        self.signature = Some((dom, cod));
        Ok(self)
    }

    fn raw(space: Arc<GroundSpace>, pairs: BTreeSet<(PointId, PointId)>, signature: Option<(SortReq, SortReq)>) -> Self {
        Relation { space, pairs, signature }
    }

    pub fn empty(space: Arc<GroundSpace>) -> Self {
        Relation { space, pairs: BTreeSet::new(), signature: None }
    }

    /// The diagonal `D` on the whole space.
    pub fn diagonal(space: Arc<GroundSpace>) -> Self {
        let pairs = space.points().map(|p| (p, p)).collect();
        Relation { space, pairs, signature: Some((SortReq::Any, SortReq::Any)) }
    }

    /// The diagonal restricted to a point set, e.g. `P = D ↾ X`.
    pub fn diagonal_on(space: Arc<GroundSpace>, points: impl IntoIterator<Item = PointId>) -> Self {
        let pairs = points.into_iter().map(|p| (p, p)).collect();
        Relation { space, pairs, signature: None }
    }

    /// Build from pairs of string identifiers.
    pub fn from_id_pairs<'a>(
        space: Arc<GroundSpace>,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, RelationError> {
        let mut set = BTreeSet::new();
        for (a, b) in pairs {
            set.insert((space.require(a)?, space.require(b)?));
        }
        Ok(Relation { space, pairs: set, signature: None })
    }

    pub fn space(&self) -> &Arc<GroundSpace> {
        &self.space
    }

    pub fn pairs(&self) -> impl Iterator<Item = (PointId, PointId)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, a: PointId, b: PointId) -> bool {
        self.pairs.contains(&(a, b))
    }

    pub fn signature(&self) -> Option<(SortReq, SortReq)> {
        self.signature
    }

    /// Points occurring in at least one pair.
    pub fn support(&self) -> BTreeSet<PointId> {
        self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect()
    }

    pub fn is_subset_of(&self, other: &Relation) -> bool {
        same_space(&self.space, &other.space) && self.pairs.is_subset(&other.pairs)
    }

    pub fn is_reflexive_on(&self, carrier: impl IntoIterator<Item = PointId>) -> bool {
        carrier.into_iter().all(|p| self.contains(p, p))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs.iter().all(|&(a, b)| self.contains(b, a))
    }

    pub fn union(&self, other: &Relation) -> Result<Relation, RelationError> {
        if !same_space(&self.space, &other.space) {
            return Err(RelationError::SpaceMismatch);
        }
        let pairs = self.pairs.union(&other.pairs).copied().collect();
        let signature = match (self.signature, other.signature) {
            (Some((d1, c1)), Some((d2, c2))) => Some((d1.join(d2), c1.join(c2))),
            _ => None,
        };
        Ok(Relation::raw(self.space.clone(), pairs, signature))
    }

    /// Diagrammatic composition: `self` applied first, `then` second.
    pub fn compose(&self, then: &Relation) -> Result<Relation, RelationError> {
        if !same_space(&self.space, &then.space) {
            return Err(RelationError::SpaceMismatch);
        }
        let n = self.space.point_count();
        let mut adj: Vec<Vec<PointId>> = vec![Vec::new(); n];
        for &(b, c) in &then.pairs {
            adj[b.0 as usize].push(c);
        }
        let mut out: Vec<(PointId, PointId)> = Vec::new();
        for &(a, b) in &self.pairs {
            for &c in &adj[b.0 as usize] {
                out.push((a, c));
            }
        }
        out.sort_unstable();
        out.dedup();
        let signature = match (self.signature, then.signature) {
            (Some((d, _)), Some((_, c))) => Some((d, c)),
            _ => None,
        };
        Ok(Relation::raw(self.space.clone(), out.into_iter().collect(), signature))
    }

    pub fn converse(&self) -> Relation {
        let pairs = self.pairs.iter().map(|&(a, b)| (b, a)).collect();
        let signature = self.signature.map(|(d, c)| (c, d));
        Relation::raw(self.space.clone(), pairs, signature)
    }

    /// `self ∩ (z × z)`.
    pub fn restrict(&self, z: &BTreeSet<PointId>) -> Result<Relation, RelationError> {
        for &p in z {
            if !self.space.contains(p) {
                return Err(RelationError::UnknownPoint(format!("#{}", p.0)));
            }
        }
        let pairs = self
            .pairs
            .iter()
            .copied()
            .filter(|(a, b)| z.contains(a) && z.contains(b))
            .collect();
        Ok(Relation::raw(self.space.clone(), pairs, self.signature))
    }

    /// `n`-fold composition with the generator composed on the left:
    /// `r^(1) = r`, `r^(n+1) = r ∘ r^(n)`.
    pub fn power(&self, n: usize) -> Result<Relation, RelationError> {
        if n == 0 {
            return Err(RelationError::ZeroPower);
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Least transitive superset, as the union of all powers.
    ///
    /// Successive powers are accumulated and the union tested for stability;
    /// `stages` is the first `n` with `⋃_{k≤n} r^(k) = ⋃_{k≤n+1} r^(k)`. For
    /// reflexive input the powers form an increasing chain, so this is the
    /// least `n` with `r^(n) = r^(n+1)`.
    pub fn transitive_closure(&self) -> Closure {
        let mut power = self.clone();
        let mut acc = self.clone();
        let mut stages = 1usize;
        loop {
            let next = self.compose(&power).expect("same space");
            let next_acc = acc.union(&next).expect("same space");
            if next_acc == acc {
                return Closure { relation: acc, stages };
            }
            acc = next_acc;
            power = next;
            stages += 1;
        }
    }

    /// Check reflexivity on `carrier`, symmetry, and transitivity; pairs must
    /// stay inside `carrier × carrier`.
    pub fn check_equivalence(
        &self,
        carrier: &BTreeSet<PointId>,
    ) -> Result<(), EquivalenceViolation> {
        let id = |p: PointId| self.space.id_of(p);
        for &(a, b) in &self.pairs {
            if !carrier.contains(&a) || !carrier.contains(&b) {
                return Err(EquivalenceViolation::StrayPair(id(a), id(b)));
            }
        }
        for &p in carrier {
            if !self.contains(p, p) {
                return Err(EquivalenceViolation::NotReflexive(id(p)));
            }
        }
        for &(a, b) in &self.pairs {
            if !self.contains(b, a) {
                return Err(EquivalenceViolation::NotSymmetric(id(a), id(b)));
            }
        }
        let n = self.space.point_count();
        let mut adj: Vec<Vec<PointId>> = vec![Vec::new(); n];
        for &(a, b) in &self.pairs {
            adj[a.0 as usize].push(b);
        }
        for &(a, b) in &self.pairs {
            for &c in &adj[b.0 as usize] {
                if !self.contains(a, c) {
                    return Err(EquivalenceViolation::NotTransitive(id(a), id(b), id(c)));
                }
            }
        }
        Ok(())
    }

    pub fn is_equivalence(&self, carrier: &BTreeSet<PointId>) -> bool {
        self.check_equivalence(carrier).is_ok()
    }

    /// Saturation `[a]` of a point set under an equivalence relation:
    /// the union of all blocks meeting `a`. The relation must be an
    /// equivalence on its support; points of `a` outside the support are
    /// singleton blocks and are kept.
    pub fn saturate(&self, a: &BTreeSet<PointId>) -> Result<BTreeSet<PointId>, RelationError> {
        let support = self.support();
        self.check_equivalence(&support)
            .map_err(RelationError::NotEquivalence)?;
        let mut out = a.clone();
        for &(p, q) in &self.pairs {
            if a.contains(&p) {
                out.insert(q);
            }
        }
        Ok(out)
    }

    pub fn to_doc(&self) -> RelationDoc {
        RelationDoc {
            space: self.space.to_doc(),
            pairs: self
                .pairs
                .iter()
                .map(|&(a, b)| [self.space.id_of(a), self.space.id_of(b)])
                .collect(),
        }
    }

    pub fn from_doc(doc: &RelationDoc) -> Result<Self, RelationError> {
        let space = GroundSpace::from_doc(&doc.space)?;
        Self::pairs_from_doc(&space, &doc.pairs)
    }

    /// Decode a pair list against an existing space.
    pub fn pairs_from_doc(
        space: &Arc<GroundSpace>,
        pairs: &[[String; 2]],
    ) -> Result<Self, RelationError> {
        let mut set = BTreeSet::new();
        for [a, b] in pairs {
            set.insert((space.require(a)?, space.require(b)?));
        }
        Ok(Relation { space: space.clone(), pairs: set, signature: None })
    }

    pub fn pair_ids(&self) -> Vec<[String; 2]> {
        self.pairs
            .iter()
            .map(|&(a, b)| [self.space.id_of(a), self.space.id_of(b)])
            .collect()
    }
}

/// Wire form of a relation:
/// `{"space": {...}, "pairs": [[id, id], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationDoc {
    pub space: SpaceDoc,
    pub pairs: Vec<[String; 2]>,
}
