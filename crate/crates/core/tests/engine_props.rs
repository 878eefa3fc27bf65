//! Soundness of the symbolic engine against concrete models, plus the
//! knowledge-operator laws on random partition models.

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;

use relalg::gen::{random_equivalence_on_x, random_model, random_subset};
use relalg::symbolic::{
    self, closure_trace, deletion_is_sound, evaluate, evaluate_word, normalize, Expr, Word, ATOMS,
    RULES,
};
use relalg::{knows, ConstructionBundle, GroundSpace, PointId, Relation, Rng};

fn bundle_for_size(x_size: usize, rng: &mut Rng) -> ConstructionBundle {
    let space = GroundSpace::with_auto_y((1..=x_size).map(|i| format!("x{i}"))).unwrap();
    let e = random_equivalence_on_x(&space, rng);
    ConstructionBundle::for_equivalence(&e).unwrap()
}

fn arb_word() -> impl Strategy<Value = Word> {
    proptest::collection::vec(0usize..ATOMS.len(), 1..=6)
        .prop_map(|ix| Word::new(ix.into_iter().map(|i| ATOMS[i]).collect()))
}

proptest! {
    #[test]
    fn normalize_is_idempotent(words in proptest::collection::vec(arb_word(), 0..6)) {
        let raw = Expr::from_words(words);
        let once = normalize(&raw);
        prop_assert_eq!(normalize(&once), once);
    }

    #[test]
    fn normalization_preserves_the_concrete_value(
        words in proptest::collection::vec(arb_word(), 0..5),
        seed in 0u64..200,
    ) {
        let mut rng = Rng::new(seed);
        let bundle = bundle_for_size(1 + (seed as usize % 3), &mut rng);
        let raw = Expr::from_words(words);
        let cooked = normalize(&raw);
        prop_assert_eq!(evaluate(&bundle, &raw), evaluate(&bundle, &cooked));
    }
}

#[test]
fn every_rewrite_rule_is_a_concrete_identity() {
    let mut rng = Rng::new(2024);
    for x_size in 1..=4 {
        for _ in 0..5 {
            let bundle = bundle_for_size(x_size, &mut rng);
            for rule in &RULES {
                let lhs = evaluate_word(&bundle, &Word::new(rule.lhs.to_vec()));
                let rhs = evaluate_word(&bundle, &Word::atom(rule.rhs));
                assert_eq!(lhs, rhs, "rule {rule} on |X| = {x_size}");
            }
        }
    }
}

#[test]
fn stages_match_concrete_powers_on_random_bundles() {
    let report = closure_trace(64).unwrap();
    let mut rng = Rng::new(7);
    for _ in 0..50 {
        let x_size = 1 + rng.below(5);
        let bundle = bundle_for_size(x_size, &mut rng);
        let iuj = bundle.i_union_j();
        for (k, stage) in report.stages.iter().enumerate() {
            assert_eq!(
                evaluate(&bundle, stage),
                iuj.power(k + 1).unwrap(),
                "stage {} on |X| = {}",
                k + 1,
                x_size
            );
        }
    }
}

#[test]
fn recorded_deletions_are_sound_on_random_bundles() {
    let report = closure_trace(64).unwrap();
    assert!(!report.deletions.is_empty());
    let mut rng = Rng::new(99);
    for _ in 0..20 {
        let bundle = bundle_for_size(1 + rng.below(4), &mut rng);
        for (stage, d) in &report.deletions {
            assert!(deletion_is_sound(&bundle, d), "stage {stage}: {d}");
        }
    }
}

#[test]
fn identity_suite_holds_for_random_witnessed_bundles() {
    let mut rng = Rng::new(41);
    for _ in 0..40 {
        let bundle = bundle_for_size(1 + rng.below(5), &mut rng);
        let suite = relalg::verify_identity_suite(&bundle).unwrap();
        assert!(suite.all_hold(), "{:?}", suite.first_failure());
        let x: BTreeSet<PointId> = bundle.space().x_points().collect();
        let closure = bundle.i_union_j().transitive_closure();
        assert!(closure.stages <= 5);
        assert_eq!(&closure.relation.restrict(&x).unwrap(), bundle.e());
    }
}

#[test]
fn i_and_j_expressions_evaluate_to_the_bundle_relations() {
    let mut rng = Rng::new(5);
    let bundle = bundle_for_size(3, &mut rng);
    assert_eq!(&evaluate(&bundle, &symbolic::i_expr()), bundle.i());
    assert_eq!(&evaluate(&bundle, &symbolic::j_expr()), bundle.j());
    // and the squared expressions stay put concretely as well
    let i2 = bundle.i().power(2).unwrap();
    assert_eq!(&i2, bundle.i());
}

#[test]
fn null_words_evaluate_empty_on_every_bundle() {
    let mut rng = Rng::new(13);
    let bundle = bundle_for_size(3, &mut rng);
    for a in ATOMS {
        for b in ATOMS {
            let w = Word::new(vec![a, b]);
            if w.is_null() {
                assert!(
                    evaluate_word(&bundle, &w).is_empty(),
                    "{w} should denote the empty relation"
                );
            }
        }
    }
}

fn arb_model_seed() -> impl Strategy<Value = u64> {
    any::<u64>()
}

proptest! {
    #[test]
    fn knowledge_operator_laws(seed in arb_model_seed()) {
        let mut rng = Rng::new(seed);
        let model = random_model(&mut rng, 8, 3);
        let states = model.states();
        let a = random_subset(&states, &mut rng);
        for p in model.partitions() {
            let known = knows(&a, p);
            // truth
            prop_assert!(known.is_subset(&a));
            // positive introspection at the operator level
            prop_assert_eq!(knows(&known, p), known.clone());
            // monotonicity
            let b: BTreeSet<PointId> = a.union(&random_subset(&states, &mut rng)).copied().collect();
            prop_assert!(known.is_subset(&knows(&b, p)));
            // agrees with the union-of-inner-blocks formulation
            let mut inner: BTreeSet<PointId> = BTreeSet::new();
            for block in p.blocks() {
                if block.is_subset(&a) {
                    inner.extend(block.iter().copied());
                }
            }
            prop_assert_eq!(known, inner);
        }
    }

    #[test]
    fn meet_and_iteration_agree(seed in arb_model_seed()) {
        let mut rng = Rng::new(seed);
        let model = random_model(&mut rng, 8, 3);
        let states = model.states();
        let a = random_subset(&states, &mut rng);
        prop_assert_eq!(model.common_knowledge_meet(&a), model.common_knowledge_iterated(&a));
    }

    #[test]
    fn meet_is_the_finest_common_coarsening(seed in arb_model_seed()) {
        let mut rng = Rng::new(seed);
        let model = random_model(&mut rng, 6, 3);
        let meet = model.meet();
        // lower bound: every agent's partition refines the meet
        for p in model.partitions() {
            prop_assert!(p.refines(&meet));
        }
        // optimality: each meet block is one connected component of the
        // agent-block overlap graph, so no common coarsening can split it
        for block in meet.blocks() {
            let members: Vec<&BTreeSet<PointId>> = model
                .partitions()
                .iter()
                .flat_map(|p| p.blocks())
                .filter(|b| b.is_subset(block))
                .collect();
            let mut reached: BTreeSet<PointId> = members[0].clone();
            loop {
                let mut grew = false;
                for b in &members {
                    if !b.is_disjoint(&reached) && !b.is_subset(&reached) {
                        reached.extend(b.iter().copied());
                        grew = true;
                    }
                }
                if !grew {
                    break;
                }
            }
            prop_assert_eq!(&reached, block, "meet block splits into components");
        }
    }
}

#[test]
fn witnessed_construction_is_deterministic() {
    let space: Arc<GroundSpace> = GroundSpace::with_auto_y(["u", "v"]).unwrap();
    let e = Relation::diagonal_on(space.clone(), space.x_points());
    let b1 = ConstructionBundle::for_equivalence(&e).unwrap();
    let b2 = ConstructionBundle::for_equivalence(&e).unwrap();
    assert_eq!(b1, b2);
}
