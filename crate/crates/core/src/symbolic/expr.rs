//! Composition words and unions over the seven relation atoms.
//!
//! An [`Atom`] is one of `D, P, Q, E, G, G', H` with a fixed sort signature;
//! a [`Word`] is a non-empty composition sequence of atoms (juxtaposition is
//! diagrammatic composition, left atom applied first); an [`Expr`] is a
//! finite union of words, kept sorted in the canonical atom order
//! `D < P < Q < E < G < G' < H`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::space::SortReq;

/// The seven relation symbols. Declaration order is the canonical
/// lexicographic order used when printing unions.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Atom {
    /// Diagonal on the whole space.
    D,
    /// Diagonal restricted to `X`.
    P,
    /// Diagonal restricted to `Y`.
    Q,
    /// The target equivalence relation on `X`.
    E,
    /// The witness graph, `X` to `Y`.
    G,
    /// Converse of `G`, `Y` to `X`; prints as `G'`.
    Gt,
    /// The slot-swap involution on `Y`.
    H,
}

pub const ATOMS: [Atom; 7] = [Atom::D, Atom::P, Atom::Q, Atom::E, Atom::G, Atom::Gt, Atom::H];

impl Atom {
    pub fn dom(self) -> SortReq {
        match self {
            Atom::D => SortReq::Any,
            Atom::P | Atom::E | Atom::G => SortReq::X,
            Atom::Q | Atom::Gt | Atom::H => SortReq::Y,
        }
    }

    pub fn cod(self) -> SortReq {
        match self {
            Atom::D => SortReq::Any,
            Atom::P | Atom::E | Atom::Gt => SortReq::X,
            Atom::Q | Atom::G | Atom::H => SortReq::Y,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Atom::D => "D",
            Atom::P => "P",
            Atom::Q => "Q",
            Atom::E => "E",
            Atom::G => "G",
            Atom::Gt => "G'",
            Atom::H => "H",
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A non-empty composition sequence of atoms.
///
/// A word whose adjacent sorts clash (an `X` codomain meeting a `Y` domain
/// or vice versa) denotes the empty relation; such words are *null* and are
/// removed by normalization.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Word(Vec<Atom>);

impl Word {
    pub fn new(atoms: Vec<Atom>) -> Word {
        assert!(!atoms.is_empty(), "words are non-empty");
        Word(atoms)
    }

    pub fn atom(a: Atom) -> Word {
        Word(vec![a])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut atoms = self.0.clone();
        atoms.extend_from_slice(&other.0);
        Word(atoms)
    }

    /// Copy of this word with `a` inserted before position `i`.
    pub fn with_inserted(&self, i: usize, a: Atom) -> Word {
        let mut atoms = self.0.clone();
        atoms.insert(i, a);
        Word(atoms)
    }

    /// True when some adjacent pair of atoms has disjoint sorts, so the word
    /// denotes the empty relation.
    pub fn is_null(&self) -> bool {
        self.0.windows(2).any(|w| w[0].cod().clashes(w[1].dom()))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.0 {
            f.write_str(a.symbol())?;
        }
        Ok(())
    }
}

/// A finite union of words.
///
/// The word set is sorted and duplicate-free by construction. Raw expansion
/// results may contain null words; [`crate::symbolic::normalize`] removes
/// them. The canonical text form joins words with `+`; the empty union
/// prints (and parses) as `0`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Expr {
    words: BTreeSet<Word>,
}

impl Expr {
    pub fn from_words(words: impl IntoIterator<Item = Word>) -> Expr {
        Expr { words: words.into_iter().collect() }
    }

    pub fn empty() -> Expr {
        Expr::default()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> + '_ {
        self.words.iter()
    }

    pub fn word_set(&self) -> &BTreeSet<Word> {
        &self.words
    }

    pub fn word_count(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Parse the textual grammar `Expr := Word ("+" Word)*`,
    /// `Word := Atom+`, atoms `D P Q E G G' H`, whitespace ignored.
    /// Words that are null after the sort check are dropped, so e.g. `GG`
    /// parses to the empty union; `0` denotes the empty union explicitly.
    pub fn parse(text: &str) -> Result<Expr, ParseError> {
        if text.trim() == "0" {
            return Ok(Expr::empty());
        }
        let mut words = BTreeSet::new();
        let mut current: Vec<Atom> = Vec::new();
        let mut saw_any = false;
        let mut chars = text.char_indices().peekable();
        while let Some((pos, ch)) = chars.next() {
            match ch {
                c if c.is_whitespace() => {}
                '+' => {
                    if current.is_empty() {
                        return Err(ParseError::EmptyWord { pos });
                    }
                    let w = Word::new(std::mem::take(&mut current));
                    if !w.is_null() {
                        words.insert(w);
                    }
                }
                'D' => current.push(Atom::D),
                'P' => current.push(Atom::P),
                'Q' => current.push(Atom::Q),
                'E' => current.push(Atom::E),
                'H' => current.push(Atom::H),
                'G' => {
                    if matches!(chars.peek(), Some(&(_, '\''))) {
                        chars.next();
                        current.push(Atom::Gt);
                    } else {
                        current.push(Atom::G);
                    }
                }
                other => return Err(ParseError::UnknownToken { token: other, pos }),
            }
            saw_any = saw_any || !ch.is_whitespace();
        }
        if current.is_empty() {
            if saw_any {
                return Err(ParseError::EmptyWord { pos: text.len() });
            }
            return Err(ParseError::EmptyInput);
        }
        let w = Word::new(current);
        if !w.is_null() {
            words.insert(w);
        }
        Ok(Expr { words })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.words.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for w in &self.words {
            if !first {
                f.write_str("+")?;
            }
            write!(f, "{w}")?;
            first = false;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("empty input")]
    EmptyInput,
    #[error("empty word at byte {pos}")]
    EmptyWord { pos: usize },
    #[error("unknown token {token:?} at byte {pos}")]
    UnknownToken { token: char, pos: usize },
}
