//! The closed-equivalence construction: from an equivalence relation `E` on
//! `X`, build a transposition-invariant witness set `F` of triples, the
//! relations `G ⊆ X×Y`, `Ḡ = converse(G)`, `H ⊆ Y×Y`, and the equivalence
//! relations `I = D ∪ G ∪ Ḡ ∪ Ḡ∘G` and `J = D ∪ H`, whose union closes to a
//! relation restricting back to `E` on `X`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::relation::{Relation, RelationError};
use crate::space::{GroundSpace, PointId, Sort, SortReq, SpaceDoc, SpaceError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("inputs live on different ground spaces")]
    SpaceMismatch,
    #[error("point {0:?} is not of sort X")]
    NotAnXPoint(String),
    #[error("relation leaves X × X: pair ({0}, {1})")]
    OutsideX(String, String),
    #[error("not an equivalence relation on X: {0}")]
    NotEquivalence(String),
    #[error("E is not reflexive on X: missing ({0}, {0})")]
    NotReflexive(String),
    #[error("E is not symmetric: ({0}, {1}) without ({1}, {0})")]
    NotSymmetric(String, String),
    #[error("witness set is not transposition-invariant: ({0}, {1}, {2}) lacks its swap")]
    WitnessNotInvariant(String, String, String),
    #[error("space does not generate the Y point for triple ({0}, {1}, {2})")]
    MissingTriple(String, String, String),
    #[error("transposition indices out of range: i={i}, j={j}, arity={k}")]
    BadTransposition { i: usize, j: usize, k: usize },
    #[error("bundle invariant violated: {name}: {detail}")]
    Invariant { name: &'static str, detail: String },
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// Swap entries `i` and `j` (1-based) of a tuple, fixing all others.
pub fn transpose_entries<T: Clone>(tuple: &[T], i: usize, j: usize) -> Result<Vec<T>, ConstructionError> {
    let k = tuple.len();
    if i == 0 || j <= i || j > k {
        return Err(ConstructionError::BadTransposition { i, j, k });
    }
    let mut out = tuple.to_vec();
    out.swap(i - 1, j - 1);
    Ok(out)
}

/// A finite set of ordered triples over the `X` points, standing in for the
/// closed witness set whose projection recovers the target relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessSet {
    space: Arc<GroundSpace>,
    triples: BTreeSet<[PointId; 3]>,
}

impl WitnessSet {
    pub fn from_triples(
        space: Arc<GroundSpace>,
        triples: impl IntoIterator<Item = [PointId; 3]>,
    ) -> Result<Self, ConstructionError> {
        let triples: BTreeSet<[PointId; 3]> = triples.into_iter().collect();
        for t in &triples {
            for &p in t {
                if !space.contains(p) || space.sort_of(p) != Sort::X {
                    return Err(ConstructionError::NotAnXPoint(if space.contains(p) {
                        space.id_of(p)
                    } else {
                        format!("#{}", p.0)
                    }));
                }
            }
        }
        Ok(WitnessSet { space, triples })
    }

    /// Default witness for an equivalence relation `e` on `X`:
    /// `F = { (α, β, γ) : (α, β) ∈ e, γ ∈ X }`. Transposition-invariance
    /// follows from the symmetry of `e`.
    pub fn for_equivalence(e: &Relation) -> Result<Self, ConstructionError> {
        let space = e.space().clone();
        let x: BTreeSet<PointId> = space.x_points().collect();
        e.check_equivalence(&x)
            .map_err(|v| ConstructionError::NotEquivalence(v.to_string()))?;
        let mut triples = BTreeSet::new();
        for (a, b) in e.pairs() {
            for c in space.x_points() {
                triples.insert([a, b, c]);
            }
        }
        Ok(WitnessSet { space, triples })
    }

    /// Close a raw triple set under the (1,2)-transposition: `F ∪ τ₁₂(F)`.
    pub fn symmetrized(
        space: Arc<GroundSpace>,
        raw: impl IntoIterator<Item = [PointId; 3]>,
    ) -> Result<Self, ConstructionError> {
        let mut triples: BTreeSet<[PointId; 3]> = BTreeSet::new();
        for [a, b, c] in raw {
            triples.insert([a, b, c]);
            triples.insert([b, a, c]);
        }
        Self::from_triples(space, triples)
    }

    pub fn space(&self) -> &Arc<GroundSpace> {
        &self.space
    }

    pub fn triples(&self) -> impl Iterator<Item = [PointId; 3]> + '_ {
        self.triples.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn is_transposition_invariant(&self) -> bool {
        self.triples.iter().all(|&[a, b, c]| self.triples.contains(&[b, a, c]))
    }

    /// The projection `{ (α, β) : ∃γ (α, β, γ) ∈ F }` as a relation on `X`.
    pub fn project(&self) -> Relation {
        let pairs: BTreeSet<(PointId, PointId)> =
            self.triples.iter().map(|&[a, b, _]| (a, b)).collect();
        Relation::new(self.space.clone(), pairs)
            .expect("triples are over the space")
            .with_signature(SortReq::X, SortReq::X)
            .expect("triples are over X")
    }
}

/// The `Y` point representing the formal triple `j(α, β, γ)`; all three
/// arguments must be `X` points of a space generating that triple.
pub fn j_point(
    space: &Arc<GroundSpace>,
    a: PointId,
    b: PointId,
    c: PointId,
) -> Result<PointId, ConstructionError> {
    for p in [a, b, c] {
        if !space.contains(p) || space.sort_of(p) != Sort::X {
            return Err(ConstructionError::NotAnXPoint(if space.contains(p) {
                space.id_of(p)
            } else {
                format!("#{}", p.0)
            }));
        }
    }
    space.y_point(a, b, c).ok_or_else(|| {
        ConstructionError::MissingTriple(space.id_of(a), space.id_of(b), space.id_of(c))
    })
}

/// `G = { (α, j(α, β, γ)) : (α, β, γ) ∈ F } ⊆ X × Y`.
pub fn build_g(f: &WitnessSet) -> Result<Relation, ConstructionError> {
    let space = f.space().clone();
    let mut pairs = BTreeSet::new();
    for [a, b, c] in f.triples() {
        pairs.insert((a, j_point(&space, a, b, c)?));
    }
    Ok(Relation::new(space, pairs)?
        .with_signature(SortReq::X, SortReq::Y)
        .expect("pairs are X to Y"))
}

/// `H = { (j(α, β, γ), j(β, α, γ)) : (α, β, γ) ∈ X³ } ⊆ Y × Y`,
/// the graph of the involution swapping the first two triple slots.
pub fn build_h(space: &Arc<GroundSpace>) -> Result<Relation, ConstructionError> {
    let mut pairs = BTreeSet::new();
    for a in space.x_points() {
        for b in space.x_points() {
            for c in space.x_points() {
                pairs.insert((j_point(space, a, b, c)?, j_point(space, b, a, c)?));
            }
        }
    }
    Ok(Relation::new(space.clone(), pairs)?
        .with_signature(SortReq::Y, SortReq::Y)
        .expect("pairs are Y to Y"))
}

/// All relations of the construction over one ground space, ready for both
/// concrete verification and replay by the symbolic evaluator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionBundle {
    space: Arc<GroundSpace>,
    e: Relation,
    f: WitnessSet,
    d: Relation,
    p: Relation,
    q: Relation,
    g: Relation,
    g_conv: Relation,
    h: Relation,
    i: Relation,
    j: Relation,
}

impl ConstructionBundle {
    /// Build from a reflexive, symmetric `E ⊆ X×X` and a
    /// transposition-invariant witness set.
    pub fn build(e: &Relation, f: &WitnessSet) -> Result<Self, ConstructionError> {
        if let Some(&[a, b, c]) = f
            .triples
            .iter()
            .find(|&&[a, b, c]| !f.triples.contains(&[b, a, c]))
        {
            return Err(ConstructionError::WitnessNotInvariant(
                f.space.id_of(a),
                f.space.id_of(b),
                f.space.id_of(c),
            ));
        }
        Self::build_unchecked(e, f)
    }

    /// Like [`ConstructionBundle::build`] but without the invariance check,
    /// so deliberately broken witnesses can be driven through the identity
    /// suite.
    pub fn build_unchecked(e: &Relation, f: &WitnessSet) -> Result<Self, ConstructionError> {
        let space = e.space().clone();
        if *f.space() != space {
            return Err(ConstructionError::SpaceMismatch);
        }
        for (a, b) in e.pairs() {
            if space.sort_of(a) != Sort::X || space.sort_of(b) != Sort::X {
                return Err(ConstructionError::OutsideX(space.id_of(a), space.id_of(b)));
            }
        }
        for xp in space.x_points() {
            if !e.contains(xp, xp) {
                return Err(ConstructionError::NotReflexive(space.id_of(xp)));
            }
        }
        for (a, b) in e.pairs() {
            if !e.contains(b, a) {
                return Err(ConstructionError::NotSymmetric(space.id_of(a), space.id_of(b)));
            }
        }

        let d = Relation::diagonal(space.clone());
        let p = Relation::diagonal_on(space.clone(), space.x_points())
            .with_signature(SortReq::X, SortReq::X)
            .expect("diagonal on X");
        let q = Relation::diagonal_on(space.clone(), space.y_points())
            .with_signature(SortReq::Y, SortReq::Y)
            .expect("diagonal on Y");
        let g = build_g(f)?;
        let g_conv = g.converse();
        let h = build_h(&space)?;
        let i = d
            .union(&g)?
            .union(&g_conv)?
            .union(&g_conv.compose(&g)?)?;
        let j = d.union(&h)?;
        Ok(ConstructionBundle {
            space,
            e: e.clone(),
            f: f.clone(),
            d,
            p,
            q,
            g,
            g_conv,
            h,
            i,
            j,
        })
    }

    /// The common path: default witness from an equivalence relation on `X`.
    pub fn for_equivalence(e: &Relation) -> Result<Self, ConstructionError> {
        let f = WitnessSet::for_equivalence(e)?;
        Self::build(e, &f)
    }

    pub fn space(&self) -> &Arc<GroundSpace> {
        &self.space
    }

    pub fn e(&self) -> &Relation {
        &self.e
    }

    pub fn f(&self) -> &WitnessSet {
        &self.f
    }

    pub fn d(&self) -> &Relation {
        &self.d
    }

    pub fn p(&self) -> &Relation {
        &self.p
    }

    pub fn q(&self) -> &Relation {
        &self.q
    }

    pub fn g(&self) -> &Relation {
        &self.g
    }

    pub fn g_conv(&self) -> &Relation {
        &self.g_conv
    }

    pub fn h(&self) -> &Relation {
        &self.h
    }

    pub fn i(&self) -> &Relation {
        &self.i
    }

    pub fn j(&self) -> &Relation {
        &self.j
    }

    /// `I ∪ J`, the relation whose transitive closure restricts to `E`.
    pub fn i_union_j(&self) -> Relation {
        self.i.union(&self.j).expect("same space")
    }

    pub fn to_doc(&self) -> BundleDoc {
        BundleDoc {
            space: self.space.to_doc(),
            e: self.e.pair_ids(),
            f: self
                .f
                .triples()
                .map(|[a, b, c]| [self.space.id_of(a), self.space.id_of(b), self.space.id_of(c)])
                .collect(),
            g: self.g.pair_ids(),
            g_conv: self.g_conv.pair_ids(),
            h: self.h.pair_ids(),
            i: self.i.pair_ids(),
            j: self.j.pair_ids(),
        }
    }

    /// Decode and re-validate a bundle document. Every bundle invariant is
    /// checked; the first violation is reported by name.
    pub fn from_doc(doc: &BundleDoc) -> Result<Self, ConstructionError> {
        let space = GroundSpace::from_doc(&doc.space)?;
        let e = Relation::pairs_from_doc(&space, &doc.e)?;
        let mut triples = BTreeSet::new();
        for [a, b, c] in &doc.f {
            triples.insert([space.require(a)?, space.require(b)?, space.require(c)?]);
        }
        let f = WitnessSet::from_triples(space.clone(), triples)?;
        let g = Relation::pairs_from_doc(&space, &doc.g)?;
        let g_conv = Relation::pairs_from_doc(&space, &doc.g_conv)?;
        let h = Relation::pairs_from_doc(&space, &doc.h)?;
        let i = Relation::pairs_from_doc(&space, &doc.i)?;
        let j = Relation::pairs_from_doc(&space, &doc.j)?;

        let invariant = |name: &'static str, detail: String| ConstructionError::Invariant { name, detail };

        let x: BTreeSet<PointId> = space.x_points().collect();
        for (a, b) in e.pairs() {
            if !x.contains(&a) || !x.contains(&b) {
                return Err(invariant(
                    "E ⊆ X×X",
                    format!("pair ({}, {})", space.id_of(a), space.id_of(b)),
                ));
            }
        }
        if let Some(xp) = space.x_points().find(|&xp| !e.contains(xp, xp)) {
            return Err(invariant("E reflexive on X", space.id_of(xp)));
        }
        if let Some((a, b)) = e.pairs().find(|&(a, b)| !e.contains(b, a)) {
            return Err(invariant(
                "E symmetric",
                format!("({}, {})", space.id_of(a), space.id_of(b)),
            ));
        }
        if let Some(&[a, b, c]) = f
            .triples
            .iter()
            .find(|&&[a, b, c]| !f.triples.contains(&[b, a, c]))
        {
            return Err(invariant(
                "F transposition-invariant",
                format!("({}, {}, {})", space.id_of(a), space.id_of(b), space.id_of(c)),
            ));
        }
        if f.project() != e {
            return Err(invariant(
                "projectWitness(F) = E",
                "projection of F differs from E".to_string(),
            ));
        }
        for (a, b) in g.pairs() {
            if space.sort_of(a) != Sort::X || space.sort_of(b) != Sort::Y {
                return Err(invariant(
                    "G ⊆ X×Y",
                    format!("pair ({}, {})", space.id_of(a), space.id_of(b)),
                ));
            }
        }
        if g_conv != g.converse() {
            return Err(invariant("G' = converse(G)", "pair sets differ".to_string()));
        }
        for (a, b) in h.pairs() {
            if space.sort_of(a) != Sort::Y || space.sort_of(b) != Sort::Y {
                return Err(invariant(
                    "H ⊆ Y×Y",
                    format!("pair ({}, {})", space.id_of(a), space.id_of(b)),
                ));
            }
        }
        let d = Relation::diagonal(space.clone());
        let expected_i = d.union(&g)?.union(&g_conv)?.union(&g_conv.compose(&g)?)?;
        if i != expected_i {
            return Err(invariant(
                "I = D ∪ G ∪ G' ∪ G'∘G",
                "stored I differs from the construction".to_string(),
            ));
        }
        let expected_j = d.union(&h)?;
        if j != expected_j {
            return Err(invariant(
                "J = D ∪ H",
                "stored J differs from the construction".to_string(),
            ));
        }
        let omega: BTreeSet<PointId> = space.points().collect();
        if let Err(v) = i.check_equivalence(&omega) {
            return Err(invariant("isEquivalence(I)", v.to_string()));
        }
        if let Err(v) = j.check_equivalence(&omega) {
            return Err(invariant("isEquivalence(J)", v.to_string()));
        }

        let p = Relation::diagonal_on(space.clone(), space.x_points());
        let q = Relation::diagonal_on(space.clone(), space.y_points());
        Ok(ConstructionBundle { space, e, f, d, p, q, g, g_conv, h, i, j })
    }
}

/// Wire form of a bundle: the ground space and all seven relations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BundleDoc {
    pub space: SpaceDoc,
    #[serde(rename = "E")]
    pub e: Vec<[String; 2]>,
    #[serde(rename = "F")]
    pub f: Vec<[String; 3]>,
    #[serde(rename = "G")]
    pub g: Vec<[String; 2]>,
    #[serde(rename = "G'")]
    pub g_conv: Vec<[String; 2]>,
    #[serde(rename = "H")]
    pub h: Vec<[String; 2]>,
    #[serde(rename = "I")]
    pub i: Vec<[String; 2]>,
    #[serde(rename = "J")]
    pub j: Vec<[String; 2]>,
}

/// One identity of the composition suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub holds: bool,
    /// First witness pair of the symmetric difference, on failure.
    pub counterexample: Option<String>,
}

/// Results for the six composition identities of the construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentitySuite {
    pub checks: Vec<IdentityCheck>,
}

impl IdentitySuite {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn first_failure(&self) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| !c.holds)
    }
}

fn check_identity(name: &'static str, lhs: &Relation, rhs: &Relation) -> IdentityCheck {
    if lhs == rhs {
        return IdentityCheck { name, holds: true, counterexample: None };
    }
    let space = lhs.space();
    let lhs_pairs: BTreeSet<_> = lhs.pairs().collect();
    let rhs_pairs: BTreeSet<_> = rhs.pairs().collect();
    let counterexample = lhs_pairs
        .difference(&rhs_pairs)
        .next()
        .map(|&(a, b)| format!("({}, {}) on the left only", space.id_of(a), space.id_of(b)))
        .or_else(|| {
            rhs_pairs
                .difference(&lhs_pairs)
                .next()
                .map(|&(a, b)| format!("({}, {}) on the right only", space.id_of(a), space.id_of(b)))
        });
    IdentityCheck { name, holds: false, counterexample }
}

/// Verify the six composition identities of the construction as exact
/// pair-set equalities:
///
/// 1. `G ∘ G' = D↾X`
/// 2. `G' ∘ G = { (j(α,β,γ), j(α,δ,ε)) : both triples in F }`
/// 3. `H = converse(H)`
/// 4. `H ∘ H = D↾Y`
/// 5. `G ∘ H = { (α, j(β,α,γ)) : (α,β,γ) ∈ F }`
/// 6. `G ∘ H ∘ G' = E`
pub fn verify_identity_suite(bundle: &ConstructionBundle) -> Result<IdentitySuite, ConstructionError> {
    let space = bundle.space();
    let g = bundle.g();
    let gc = bundle.g_conv();
    let h = bundle.h();

    let mut checks = Vec::with_capacity(6);
    checks.push(check_identity("G∘G' = D↾X", &g.compose(gc)?, bundle.p()));

    // pairs of witness triples sharing their first coordinate
    let mut by_first: BTreeMap<PointId, Vec<PointId>> = BTreeMap::new();
    for [a, b, c] in bundle.f().triples() {
        by_first.entry(a).or_default().push(j_point(space, a, b, c)?);
    }
    let mut join_pairs = BTreeSet::new();
    for ys in by_first.values() {
        for &y1 in ys {
            for &y2 in ys {
                join_pairs.insert((y1, y2));
            }
        }
    }
    let witness_join = Relation::new(space.clone(), join_pairs)?;
    checks.push(check_identity("G'∘G = witness-join", &gc.compose(g)?, &witness_join));

    checks.push(check_identity("H = converse(H)", h, &h.converse()));
    checks.push(check_identity("H∘H = D↾Y", &h.compose(h)?, bundle.q()));

    let mut swapped = BTreeSet::new();
    for [a, b, c] in bundle.f().triples() {
        swapped.insert((a, j_point(space, b, a, c)?));
    }
    let swapped_witness = Relation::new(space.clone(), swapped)?;
    checks.push(check_identity("G∘H = swapped-witness", &g.compose(h)?, &swapped_witness));

    checks.push(check_identity("G∘H∘G' = E", &g.compose(h)?.compose(gc)?, bundle.e()));
    Ok(IdentitySuite { checks })
}
