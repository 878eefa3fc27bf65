//! Exhaustive sweep: for every equivalence relation on carriers up to six
//! points, the full identity suite holds, the component relations are
//! idempotent equivalences, and the closed union restricts back to the
//! input.

use std::collections::BTreeSet;

use relalg::{
    enumerate_partitions, verify_identity_suite, ConstructionBundle, GroundSpace, PointId,
};

#[test]
fn every_small_equivalence_relation_round_trips() {
    for n in 0..=6usize {
        let space = GroundSpace::with_auto_y((1..=n).map(|i| format!("x{i}"))).unwrap();
        let x: BTreeSet<PointId> = space.x_points().collect();
        let omega: BTreeSet<PointId> = space.points().collect();
        for partition in enumerate_partitions(&space, &x) {
            let e = partition.to_relation();
            let bundle = ConstructionBundle::for_equivalence(&e).unwrap();

            let suite = verify_identity_suite(&bundle).unwrap();
            assert!(
                suite.all_hold(),
                "identity failed for |X| = {n}, blocks = {:?}: {:?}",
                partition.to_doc().blocks,
                suite.first_failure()
            );

            assert!(bundle.i().is_equivalence(&omega));
            assert!(bundle.j().is_equivalence(&omega));
            assert_eq!(&bundle.i().power(2).unwrap(), bundle.i());
            assert_eq!(&bundle.j().power(2).unwrap(), bundle.j());

            let closure = bundle.i_union_j().transitive_closure();
            assert!(closure.stages <= 5, "|X| = {n} took {} stages", closure.stages);
            assert_eq!(&closure.relation.restrict(&x).unwrap(), &e);
        }
    }
}
