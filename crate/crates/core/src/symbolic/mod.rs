//! Symbolic side of the workbench: composition words over the seven atoms,
//! the ordered rewrite system, the staged closure trace, and concrete
//! evaluation against a construction bundle.

mod eval;
mod expr;
mod rewrite;
mod trace;

pub use eval::{atom_relation, deletion_is_sound, evaluate, evaluate_word};
pub use expr::{Atom, Expr, ParseError, Word, ATOMS};
pub use rewrite::{normalize, normalize_traced, rewrite_word, Deletion, DeletionKind, Rule, RULES};
pub use trace::{
    closure_trace, expand_step, generator, i_expr, j_expr, verify_square_idempotent, TraceError,
    TraceReport,
};
