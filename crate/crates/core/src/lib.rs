//! Exact finite relation algebra and the constructions built on it.
//!
//! The crate has four layers:
//!
//! - a kernel of binary relations over two-sorted ground spaces
//!   ([`space`], [`relation`], [`partition`]): union, diagrammatic
//!   composition, converse, restriction, powers, transitive closure,
//!   equivalence checking, saturation;
//! - the closed-equivalence construction ([`construction`]): a witness set
//!   of triples built from an equivalence relation `E` on `X`, the derived
//!   relations `G`, `G'`, `H`, and the equivalence relations `I`, `J` whose
//!   union closes back to `E` on `X`;
//! - a symbolic engine ([`symbolic`]) that expands powers of the generator
//!   union `D + G + G' + G'G + H` as composition words, normalizes them
//!   under 27 ordered identities, finds the closure fixpoint at stage 5,
//!   and evaluates any word concretely against a bundle;
//! - the knowledge calculus ([`epistemic`]) and the star-relation cover
//!   analysis ([`star`]) that put the kernel to work on partition models.
//!
//! Everything is immutable after construction and all operations are pure,
//! so values can be shared freely across threads.

pub mod construction;
pub mod epistemic;
pub mod gen;
pub mod partition;
pub mod relation;
pub mod rng;
pub mod space;
pub mod star;
pub mod symbolic;

pub use construction::{
    build_g, build_h, j_point, transpose_entries, verify_identity_suite, BundleDoc,
    ConstructionBundle, ConstructionError, IdentityCheck, IdentitySuite, WitnessSet,
};
pub use epistemic::{
    knows, pairing_fixture, saturation_demo, EpistemicError, EpistemicModel, Event, ModelDoc,
    SaturationReport,
};
pub use partition::{enumerate_partitions, Partition, PartitionDoc, PartitionError};
pub use relation::{Closure, EquivalenceViolation, Relation, RelationDoc, RelationError};
pub use rng::Rng;
pub use space::{GroundSpace, PointId, Sort, SortReq, SpaceDoc, SpaceError};
pub use star::{star_report, StarError, StarInstance, StarReport};
