//! Sorted finite ground spaces.
//!
//! A [`GroundSpace`] is a finite universe split into two sorts: the named
//! atoms of sort `X` and the formal triples of sort `Y`. Every point has a
//! stable string identifier; `Y` points print as `j(a,b,c)`. Relations,
//! partitions and the whole construction layer live over a shared space.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a point inside its [`GroundSpace`].
///
/// `X` points come first (in declaration order), followed by the `Y` points.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PointId(pub u32);

/// The sort of a concrete point.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sort {
    X,
    Y,
}

/// A sort requirement, as carried by relation signatures and word atoms.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SortReq {
    X,
    Y,
    Any,
}

impl SortReq {
    /// True when a point of sort `s` satisfies the requirement.
    pub fn admits(self, s: Sort) -> bool {
        match self {
            SortReq::X => s == Sort::X,
            SortReq::Y => s == Sort::Y,
            SortReq::Any => true,
        }
    }

    /// True when the two requirements name disjoint point sets.
    ///
    /// Only `X` against `Y` clashes; `Any` overlaps everything.
    pub fn clashes(self, other: SortReq) -> bool {
        matches!(
            (self, other),
            (SortReq::X, SortReq::Y) | (SortReq::Y, SortReq::X)
        )
    }

    /// Least upper bound in the order `X, Y < Any`.
    pub fn join(self, other: SortReq) -> SortReq {
        if self == other {
            self
        } else {
            SortReq::Any
        }
    }
}

impl fmt::Display for SortReq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SortReq::X => write!(f, "X"),
            SortReq::Y => write!(f, "Y"),
            SortReq::Any => write!(f, "Any"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpaceError {
    #[error("duplicate point identifier {0:?}")]
    DuplicateId(String),
    #[error("empty point identifier")]
    EmptyId,
    #[error("triple component {0} out of range")]
    TripleOutOfRange(u32),
    #[error("duplicate Y triple j({0},{1},{2})")]
    DuplicateTriple(String, String, String),
    #[error("unknown point identifier {0:?}")]
    UnknownId(String),
}

/// A finite two-sorted universe: named `X` atoms plus formal `Y` triples.
#[derive(Debug, PartialEq, Eq)]
pub struct GroundSpace {
    x_names: Vec<String>,
    /// Each entry indexes three `X` points; empty when the space has no `Y` part.
    y_triples: Vec<[u32; 3]>,
    /// Whether `y_triples` is the full cube over `X` in generation order.
    full_y: bool,
    by_id: BTreeMap<String, PointId>,
}

impl GroundSpace {
    fn build(x_names: Vec<String>, y_triples: Vec<[u32; 3]>, full_y: bool) -> Result<Arc<Self>, SpaceError> {
        let n = x_names.len() as u32;
        let mut by_id = BTreeMap::new();
        for (i, name) in x_names.iter().enumerate() {
            if name.is_empty() {
                return Err(SpaceError::EmptyId);
            }
            if by_id.insert(name.clone(), PointId(i as u32)).is_some() {
                return Err(SpaceError::DuplicateId(name.clone()));
            }
        }
        for (k, t) in y_triples.iter().enumerate() {
            for &c in t {
                if c >= n {
                    return Err(SpaceError::TripleOutOfRange(c));
                }
            }
            let id = format!(
                "j({},{},{})",
                x_names[t[0] as usize], x_names[t[1] as usize], x_names[t[2] as usize]
            );
            let pid = PointId(n + k as u32);
            if let Some(prev) = by_id.insert(id.clone(), pid) {
                // Either a repeated triple or an X name spelled like a Y id.
                if prev.0 < n {
                    return Err(SpaceError::DuplicateId(id));
                }
                return Err(SpaceError::DuplicateTriple(
                    x_names[t[0] as usize].clone(),
                    x_names[t[1] as usize].clone(),
                    x_names[t[2] as usize].clone(),
                ));
            }
        }
        Ok(Arc::new(GroundSpace { x_names, y_triples, full_y, by_id }))
    }

    /// Space with the given `X` atoms and the full triple cube as `Y`,
    /// so `|Y| = |X|^3`.
    pub fn with_auto_y<S: Into<String>>(x_names: impl IntoIterator<Item = S>) -> Result<Arc<Self>, SpaceError> {
        let x_names: Vec<String> = x_names.into_iter().map(Into::into).collect();
        let n = x_names.len() as u32;
        let mut triples = Vec::with_capacity((n as usize).pow(3));
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    triples.push([a, b, c]);
                }
            }
        }
        Self::build(x_names, triples, true)
    }

    /// Space with only `X` points (carriers for epistemic models, star
    /// instances, and other single-sorted uses).
    pub fn x_only<S: Into<String>>(x_names: impl IntoIterator<Item = S>) -> Result<Arc<Self>, SpaceError> {
        let x_names: Vec<String> = x_names.into_iter().map(Into::into).collect();
        let n = x_names.len();
        Self::build(x_names, Vec::new(), n == 0)
    }

    /// Space with an explicit list of `Y` triples (each a triple of `X` ids).
    pub fn with_y_triples<S: Into<String>>(
        x_names: impl IntoIterator<Item = S>,
        triples: &[[String; 3]],
    ) -> Result<Arc<Self>, SpaceError> {
        let x_names: Vec<String> = x_names.into_iter().map(Into::into).collect();
        let lookup: BTreeMap<&str, u32> = x_names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i as u32))
            .collect();
        let mut idx_triples = Vec::with_capacity(triples.len());
        for t in triples {
            let mut idx = [0u32; 3];
            for (slot, name) in idx.iter_mut().zip(t.iter()) {
                *slot = *lookup
                    .get(name.as_str())
                    .ok_or_else(|| SpaceError::UnknownId(name.clone()))?;
            }
            idx_triples.push(idx);
        }
        let full = idx_triples.len() == x_names.len().pow(3) && {
            let mut sorted = idx_triples.clone();
            sorted.sort_unstable();
            sorted.windows(2).all(|w| w[0] != w[1])
        };
        Self::build(x_names, idx_triples, full)
    }

    pub fn x_count(&self) -> usize {
        self.x_names.len()
    }

    pub fn y_count(&self) -> usize {
        self.y_triples.len()
    }

    pub fn point_count(&self) -> usize {
        self.x_names.len() + self.y_triples.len()
    }

    /// True when the `Y` part is exactly the full triple cube over `X`.
    pub fn has_full_y(&self) -> bool {
        self.full_y
    }

    pub fn points(&self) -> impl Iterator<Item = PointId> + '_ {
        (0..self.point_count() as u32).map(PointId)
    }

    pub fn x_points(&self) -> impl Iterator<Item = PointId> + '_ {
        (0..self.x_count() as u32).map(PointId)
    }

    pub fn y_points(&self) -> impl Iterator<Item = PointId> + '_ {
        (self.x_count() as u32..self.point_count() as u32).map(PointId)
    }

    pub fn contains(&self, p: PointId) -> bool {
        (p.0 as usize) < self.point_count()
    }

    pub fn sort_of(&self, p: PointId) -> Sort {
        if (p.0 as usize) < self.x_count() {
            Sort::X
        } else {
            Sort::Y
        }
    }

    /// Stable identifier: the atom name for `X` points, `j(a,b,c)` for `Y` points.
    pub fn id_of(&self, p: PointId) -> String {
        let i = p.0 as usize;
        if i < self.x_count() {
            self.x_names[i].clone()
        } else {
            let t = self.y_triples[i - self.x_count()];
            format!(
                "j({},{},{})",
                self.x_names[t[0] as usize], self.x_names[t[1] as usize], self.x_names[t[2] as usize]
            )
        }
    }

    pub fn lookup(&self, id: &str) -> Option<PointId> {
        self.by_id.get(id).copied()
    }

    pub fn require(&self, id: &str) -> Result<PointId, SpaceError> {
        self.lookup(id).ok_or_else(|| SpaceError::UnknownId(id.to_string()))
    }

    /// The `Y` point standing for the formal triple `(a, b, c)`, if generated.
    pub fn y_point(&self, a: PointId, b: PointId, c: PointId) -> Option<PointId> {
        if self.sort_of(a) != Sort::X || self.sort_of(b) != Sort::X || self.sort_of(c) != Sort::X {
            return None;
        }
        if self.full_y {
            let n = self.x_count() as u32;
            let k = (a.0 * n + b.0) * n + c.0;
            return Some(PointId(n + k));
        }
        let want = [a.0, b.0, c.0];
        self.y_triples
            .iter()
            .position(|t| *t == want)
            .map(|k| PointId((self.x_count() + k) as u32))
    }

    /// The triple of `X` points a `Y` point stands for.
    pub fn triple_of(&self, y: PointId) -> Option<[PointId; 3]> {
        let i = y.0 as usize;
        if i < self.x_count() || i >= self.point_count() {
            return None;
        }
        let t = self.y_triples[i - self.x_count()];
        Some([PointId(t[0]), PointId(t[1]), PointId(t[2])])
    }

    pub fn to_doc(&self) -> SpaceDoc {
        let y = if self.full_y && self.y_count() > 0 {
            YDoc::Auto("auto".to_string())
        } else if self.y_count() == 0 {
            YDoc::Triples(Vec::new())
        } else {
            YDoc::Triples(
                self.y_triples
                    .iter()
                    .map(|t| {
                        [
                            self.x_names[t[0] as usize].clone(),
                            self.x_names[t[1] as usize].clone(),
                            self.x_names[t[2] as usize].clone(),
                        ]
                    })
                    .collect(),
            )
        };
        SpaceDoc { x: self.x_names.clone(), y }
    }

    pub fn from_doc(doc: &SpaceDoc) -> Result<Arc<Self>, SpaceError> {
        match &doc.y {
            YDoc::Auto(tag) if tag == "auto" => Self::with_auto_y(doc.x.clone()),
            YDoc::Auto(tag) => Err(SpaceError::UnknownId(format!("Y: {tag:?}"))),
            YDoc::Triples(ts) => Self::with_y_triples(doc.x.clone(), ts),
        }
    }
}

/// Wire form of a ground space: `{"X": [ids...], "Y": "auto" | [[a,b,c]...]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SpaceDoc {
    #[serde(rename = "X")]
    pub x: Vec<String>,
    #[serde(rename = "Y")]
    pub y: YDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum YDoc {
    Auto(String),
    Triples(Vec<[String; 3]>),
}
