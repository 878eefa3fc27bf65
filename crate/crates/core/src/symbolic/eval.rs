//! Concrete evaluation of words and unions on a construction bundle — the
//! soundness bridge between the symbolic closure and the relation kernel.

use crate::construction::ConstructionBundle;
use crate::relation::Relation;

use super::expr::{Atom, Expr, Word};
use super::rewrite::Deletion;

pub fn atom_relation(bundle: &ConstructionBundle, atom: Atom) -> &Relation {
    match atom {
        Atom::D => bundle.d(),
        Atom::P => bundle.p(),
        Atom::Q => bundle.q(),
        Atom::E => bundle.e(),
        Atom::G => bundle.g(),
        Atom::Gt => bundle.g_conv(),
        Atom::H => bundle.h(),
    }
}

/// Left-to-right composition of the word's atoms.
pub fn evaluate_word(bundle: &ConstructionBundle, word: &Word) -> Relation {
    let mut atoms = word.atoms().iter();
    let first = atoms.next().expect("words are non-empty");
    let mut acc = atom_relation(bundle, *first).clone();
    for a in atoms {
        acc = acc
            .compose(atom_relation(bundle, *a))
            .expect("bundle relations share one space");
    }
    acc
}

/// Union over the words; the empty union is the empty relation.
pub fn evaluate(bundle: &ConstructionBundle, expr: &Expr) -> Relation {
    let mut acc = Relation::empty(bundle.space().clone());
    for w in expr.words() {
        acc = acc
            .union(&evaluate_word(bundle, w))
            .expect("bundle relations share one space");
    }
    acc
}

/// Audit one normalization deletion on a concrete bundle: the deleted
/// word's value must be contained in the union of its justifiers' values
/// (empty-composition deletions must evaluate to the empty relation).
pub fn deletion_is_sound(bundle: &ConstructionBundle, deletion: &Deletion) -> bool {
    let deleted = evaluate_word(bundle, &deletion.word);
    if deletion.justifiers.is_empty() {
        return deleted.is_empty();
    }
    let mut cover = Relation::empty(bundle.space().clone());
    for j in &deletion.justifiers {
        cover = cover
            .union(&evaluate_word(bundle, j))
            .expect("bundle relations share one space");
    }
    deleted.is_subset_of(&cover)
}
