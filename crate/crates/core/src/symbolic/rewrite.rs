//! The ordered rewrite system and union normalization.
//!
//! Normalization runs in four stages over a union of words:
//!
//! 1. every word is rewritten with the 27 ordered identities — one
//!    left-to-right pass per identity, the whole cycle repeated until no
//!    identity applies (each application shortens the word, so this
//!    terminates);
//! 2. null words (empty by sort disjointness) are deleted, and a standalone
//!    `P` is deleted when a standalone `D` or `E` is present to cover it;
//! 3. a word containing `G'` is deleted when the same word with `E`
//!    inserted after that `G'` is present, a word containing `G` is deleted
//!    when the same word with `E` inserted before that `G` is present, and
//!    a standalone `D` is deleted when both `Q` and `E` are present
//!    (`D ⊆ Q ∪ E` once `E` is reflexive on `X`);
//! 4. the surviving words stay in canonical sorted order.
//!
//! The deletions in stages 2–3 are guarded by the presence of the covering
//! word, so normalization is semantics-preserving for standalone inputs
//! like `GG'` as well as inside the closure trace. Every deletion is
//! reported, carrying its justifying words, so a concrete model can audit
//! the containment it relies on.

use std::collections::BTreeSet;
use std::fmt;

use super::expr::{Atom, Expr, Word};

/// One identity: the pattern composes to exactly the replacement atom.
#[derive(Clone, Copy, Debug)]
pub struct Rule {
    pub lhs: &'static [Atom],
    pub rhs: Atom,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in self.lhs {
            f.write_str(a.symbol())?;
        }
        write!(f, "->{}", self.rhs.symbol())
    }
}

use Atom::{Gt, D, E, G, H, P, Q};

/// The 27 identities, in application order.
pub const RULES: [Rule; 27] = [
    Rule { lhs: &[D, D], rhs: D },
    Rule { lhs: &[D, E], rhs: E },
    Rule { lhs: &[D, G], rhs: G },
    Rule { lhs: &[D, Gt], rhs: Gt },
    Rule { lhs: &[D, H], rhs: H },
    Rule { lhs: &[D, P], rhs: P },
    Rule { lhs: &[D, Q], rhs: Q },
    Rule { lhs: &[E, D], rhs: E },
    Rule { lhs: &[E, E], rhs: E },
    Rule { lhs: &[E, P], rhs: E },
    Rule { lhs: &[G, D], rhs: G },
    Rule { lhs: &[G, Gt], rhs: P },
    Rule { lhs: &[G, H, Gt], rhs: E },
    Rule { lhs: &[G, Q], rhs: G },
    Rule { lhs: &[Gt, D], rhs: Gt },
    Rule { lhs: &[Gt, P], rhs: Gt },
    Rule { lhs: &[H, D], rhs: H },
    Rule { lhs: &[H, H], rhs: Q },
    Rule { lhs: &[H, Q], rhs: H },
    Rule { lhs: &[P, D], rhs: P },
    Rule { lhs: &[P, E], rhs: E },
    Rule { lhs: &[P, G], rhs: G },
    Rule { lhs: &[P, P], rhs: P },
    Rule { lhs: &[Q, D], rhs: Q },
    Rule { lhs: &[Q, Gt], rhs: Gt },
    Rule { lhs: &[Q, H], rhs: H },
    Rule { lhs: &[Q, Q], rhs: Q },
];

/// Rewrite a single word to its normal form under [`RULES`].
pub fn rewrite_word(word: &Word) -> Word {
    let mut atoms = word.atoms().to_vec();
    loop {
        let mut changed = false;
        for rule in &RULES {
            let k = rule.lhs.len();
            let mut i = 0;
            while i + k <= atoms.len() {
                if atoms[i..i + k] == *rule.lhs {
                    atoms.splice(i..i + k, [rule.rhs]);
                    changed = true;
                }
                i += 1;
            }
        }
        if !changed {
            return Word::new(atoms);
        }
    }
}

/// Why a word was removed from the union during normalization.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DeletionKind {
    /// The word denotes the empty relation by sort disjointness.
    EmptyComposition,
    /// Standalone `P`, covered by a standalone `D` or `E`.
    StandaloneP,
    /// `K·G'·L` covered by the present `K·G'·E·L`.
    GtSubsumed,
    /// `K·G·L` covered by the present `K·E·G·L`.
    GSubsumed,
    /// Standalone `D`, covered by `Q ∪ E` together.
    StandaloneD,
}

impl fmt::Display for DeletionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DeletionKind::EmptyComposition => "empty-composition",
            DeletionKind::StandaloneP => "standalone-P",
            DeletionKind::GtSubsumed => "G'-subsumed",
            DeletionKind::GSubsumed => "G-subsumed",
            DeletionKind::StandaloneD => "standalone-D",
        };
        f.write_str(s)
    }
}

/// A recorded deletion event: the removed word and the words whose union
/// covers it (empty for null words, which denote `∅`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Deletion {
    pub word: Word,
    pub kind: DeletionKind,
    pub justifiers: Vec<Word>,
}

impl fmt::Display for Deletion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.word, self.kind)?;
        if !self.justifiers.is_empty() {
            write!(f, " covered by ")?;
            for (n, j) in self.justifiers.iter().enumerate() {
                if n > 0 {
                    write!(f, " ∪ ")?;
                }
                write!(f, "{j}")?;
            }
        }
        Ok(())
    }
}

pub fn normalize(e: &Expr) -> Expr {
    normalize_traced(e).0
}

/// Normalize and report every deletion with its justification.
pub fn normalize_traced(e: &Expr) -> (Expr, Vec<Deletion>) {
    let mut deletions = Vec::new();

    // rewrite pass over every word
    let mut set: BTreeSet<Word> = BTreeSet::new();
    let mut nulls: BTreeSet<Word> = BTreeSet::new();
    for w in e.words() {
        let rw = rewrite_word(w);
        if rw.is_null() {
            nulls.insert(rw);
        } else {
            set.insert(rw);
        }
    }
    for word in nulls {
        deletions.push(Deletion { word, kind: DeletionKind::EmptyComposition, justifiers: Vec::new() });
    }

    // standalone P is covered by a standalone D or E
    let p_word = Word::atom(P);
    let d_word = Word::atom(D);
    let e_word = Word::atom(E);
    if set.contains(&p_word) {
        // prefer E: a standalone D may itself be deleted below, E never is
        let justifier = if set.contains(&e_word) {
            Some(e_word.clone())
        } else if set.contains(&d_word) {
            Some(d_word.clone())
        } else {
            None
        };
        if let Some(j) = justifier {
            set.remove(&p_word);
            deletions.push(Deletion {
                word: p_word,
                kind: DeletionKind::StandaloneP,
                justifiers: vec![j],
            });
        }
    }

    // guarded subsumption, decided simultaneously against the current set
    let snapshot = set.clone();
    let mut subsumed: Vec<Deletion> = Vec::new();
    for w in &snapshot {
        let mut hit = None;
        for (i, &a) in w.atoms().iter().enumerate() {
            if a == Gt {
                let justifier = w.with_inserted(i + 1, E);
                if snapshot.contains(&justifier) {
                    hit = Some((DeletionKind::GtSubsumed, justifier));
                    break;
                }
            }
        }
        if hit.is_none() {
            for (i, &a) in w.atoms().iter().enumerate() {
                if a == G {
                    let justifier = w.with_inserted(i, E);
                    if snapshot.contains(&justifier) {
                        hit = Some((DeletionKind::GSubsumed, justifier));
                        break;
                    }
                }
            }
        }
        if let Some((kind, justifier)) = hit {
            subsumed.push(Deletion { word: w.clone(), kind, justifiers: vec![justifier] });
        }
    }
    let q_word = Word::atom(Q);
    if snapshot.contains(&d_word) && snapshot.contains(&q_word) && snapshot.contains(&e_word) {
        subsumed.push(Deletion {
            word: d_word,
            kind: DeletionKind::StandaloneD,
            justifiers: vec![q_word, e_word],
        });
    }
    for d in &subsumed {
        set.remove(&d.word);
    }
    deletions.extend(subsumed);

    // justifiers must survive their own deletion round
    debug_assert!(deletions
        .iter()
        .flat_map(|d| d.justifiers.iter())
        .all(|j| set.contains(j)));

    (Expr::from_words(set), deletions)
}
