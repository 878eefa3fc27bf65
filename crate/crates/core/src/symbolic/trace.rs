//! Symbolic closure of the generator union: expand powers word by word and
//! normalize until two consecutive stages agree.

use thiserror::Error;

use super::expr::{Atom, Expr, Word};
use super::rewrite::{normalize_traced, Deletion};

/// The five-word generator union `D + G + G' + G'G + H`, i.e. the two
/// equivalence relations written out as `(D ∪ G ∪ Ḡ ∪ ḠG) ∪ (D ∪ H)`.
pub fn generator() -> Expr {
    Expr::from_words([
        Word::atom(Atom::D),
        Word::atom(Atom::G),
        Word::atom(Atom::Gt),
        Word::new(vec![Atom::Gt, Atom::G]),
        Word::atom(Atom::H),
    ])
}

/// The union `I` alone, `D + G + G' + G'G`.
pub fn i_expr() -> Expr {
    Expr::from_words([
        Word::atom(Atom::D),
        Word::atom(Atom::G),
        Word::atom(Atom::Gt),
        Word::new(vec![Atom::Gt, Atom::G]),
    ])
}

/// The union `J` alone, `D + H`.
pub fn j_expr() -> Expr {
    Expr::from_words([Word::atom(Atom::D), Word::atom(Atom::H)])
}

/// One expansion step: compose the generator on the left of every word of
/// `current`, distributing composition over union. The result is raw — not
/// normalized, and possibly containing null words.
pub fn expand_step(current: &Expr) -> Expr {
    let gen = generator();
    let mut words = Vec::new();
    for g in gen.words() {
        for w in current.words() {
            words.push(g.concat(w));
        }
    }
    Expr::from_words(words)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceError {
    #[error("no fixpoint within {max_stages} stages; the rewrite system is defective")]
    NoFixpoint { max_stages: usize },
}

/// The staged closure computation. `stages[k]` is the canonical union for
/// power `k + 1`; the last stage repeats its predecessor. Deletions are
/// tagged with the stage whose normalization produced them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceReport {
    pub stages: Vec<Expr>,
    /// Least `n` with stage `n` equal to stage `n + 1`.
    pub fixpoint: usize,
    pub deletions: Vec<(usize, Deletion)>,
}

impl TraceReport {
    pub fn stage_lines(&self) -> Vec<String> {
        self.stages.iter().map(Expr::to_string).collect()
    }

    pub fn word_counts(&self) -> Vec<usize> {
        self.stages.iter().map(Expr::word_count).collect()
    }

    /// One canonical union per line, trailing newline included.
    pub fn golden_text(&self) -> String {
        let mut out = String::new();
        for line in self.stage_lines() {
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

/// Iterate expansion and normalization from the generator until two
/// consecutive stages agree.
pub fn closure_trace(max_stages: usize) -> Result<TraceReport, TraceError> {
    let (mut current, initial) = normalize_traced(&generator());
    let mut stages = vec![current.clone()];
    let mut deletions: Vec<(usize, Deletion)> =
        initial.into_iter().map(|d| (1, d)).collect();
    for stage in 2..=max_stages {
        let (next, dels) = normalize_traced(&expand_step(&current));
        deletions.extend(dels.into_iter().map(|d| (stage, d)));
        stages.push(next.clone());
        if next == current {
            return Ok(TraceReport { stages, fixpoint: stage - 1, deletions });
        }
        current = next;
    }
    Err(TraceError::NoFixpoint { max_stages })
}

/// Absorb standalone sub-diagonal words: `Q` and `P` into a standalone `D`,
/// `P` into a standalone `E`. The squared-union calculations omit any term
/// contained in a term already present, which is one step more than the
/// trace normalization (the staged closure must keep `Q`).
fn absorb_subdiagonal(e: &Expr) -> Expr {
    let mut words = e.word_set().clone();
    if words.contains(&Word::atom(Atom::D)) {
        words.remove(&Word::atom(Atom::Q));
        words.remove(&Word::atom(Atom::P));
    }
    if words.contains(&Word::atom(Atom::E)) {
        words.remove(&Word::atom(Atom::P));
    }
    Expr::from_words(words)
}

/// Check `normalize(e ∘ e) = normalize(e)` by word-level concatenation,
/// comparing modulo absorption of standalone sub-diagonal terms (`H∘H`
/// collapses to `Q ⊆ D`, which the squared union drops as a sub-relation
/// of `D`).
pub fn verify_square_idempotent(e: &Expr) -> bool {
    let mut squared = Vec::new();
    for a in e.words() {
        for b in e.words() {
            squared.push(a.concat(b));
        }
    }
    let (squared, _) = normalize_traced(&Expr::from_words(squared));
    let (base, _) = normalize_traced(e);
    absorb_subdiagonal(&squared) == absorb_subdiagonal(&base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::rewrite::normalize;

    const STAGE_1: &str = "D+G+G'+G'G+H";
    const STAGE_2: &str = "D+Q+G+GH+G'+G'G+G'GH+H+HG'+HG'G";
    const STAGE_3: &str = "Q+E+EG+GH+G'E+G'EG+G'GH+H+HG'+HG'G+HG'GH";
    const STAGE_4: &str = "Q+E+EG+EGH+G'E+G'EG+G'EGH+H+HG'E+HG'EG+HG'GH";
    const STAGE_5: &str = "Q+E+EG+EGH+G'E+G'EG+G'EGH+H+HG'E+HG'EG+HG'EGH";

    #[test]
    fn expanding_the_diagonal_recovers_the_generator() {
        let d = Expr::from_words([Word::atom(Atom::D)]);
        let raw = expand_step(&d);
        assert_eq!(raw.word_count(), 5);
        assert_eq!(normalize(&raw), generator());
    }

    #[test]
    fn expansion_of_the_generator_has_at_most_25_words() {
        let raw = expand_step(&generator());
        assert!(raw.word_count() <= 25);
        assert_eq!(normalize(&raw).to_string(), STAGE_2);
    }

    #[test]
    fn closure_trace_matches_the_golden_stages() {
        let report = closure_trace(64).unwrap();
        assert_eq!(report.fixpoint, 5);
        assert_eq!(report.stages.len(), 6);
        let lines = report.stage_lines();
        assert_eq!(lines[0], STAGE_1);
        assert_eq!(lines[1], STAGE_2);
        assert_eq!(lines[2], STAGE_3);
        assert_eq!(lines[3], STAGE_4);
        assert_eq!(lines[4], STAGE_5);
        assert_eq!(lines[5], STAGE_5);
        assert_eq!(report.word_counts(), vec![5, 10, 11, 11, 11, 11]);
    }

    #[test]
    fn trace_error_when_stages_are_exhausted() {
        assert_eq!(closure_trace(3), Err(TraceError::NoFixpoint { max_stages: 3 }));
    }

    #[test]
    fn only_the_e_word_meets_x_cross_x_at_the_fixpoint() {
        // every other fixpoint word starts or ends in Y, so the closure
        // restricted to X × X is exactly the E atom
        use crate::space::SortReq;
        let report = closure_trace(64).unwrap();
        let fixpoint = &report.stages[report.fixpoint - 1];
        let mut x_to_x = Vec::new();
        for w in fixpoint.words() {
            let dom = w.atoms().first().unwrap().dom();
            let cod = w.atoms().last().unwrap().cod();
            if dom != SortReq::Y && cod != SortReq::Y {
                x_to_x.push(w.clone());
            }
        }
        assert_eq!(x_to_x, vec![Word::atom(Atom::E)]);
    }

    #[test]
    fn squares_of_the_component_unions_are_idempotent() {
        assert!(verify_square_idempotent(&i_expr()));
        assert!(verify_square_idempotent(&j_expr()));
        assert!(verify_square_idempotent(&Expr::parse("D+G+G'+G'G").unwrap()));
        assert!(verify_square_idempotent(&Expr::parse("D+H").unwrap()));
    }

    #[test]
    fn a_lone_g_is_not_idempotent() {
        // G∘G is empty by sorts, which differs from G
        assert!(!verify_square_idempotent(&Expr::parse("G").unwrap()));
    }
}
