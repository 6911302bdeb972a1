//! Length-set backends for concrete monoids: numerical monoids, block monoids
//! of zero-sum sequences over finite abelian groups, and weighted atom systems
//! over either.

pub mod block;
pub mod group;
pub mod numerical;
pub mod weighted;

pub use block::{enumerate_atoms, BlockMonoid, ZeroSumSequence};
pub use group::FiniteAbelianGroup;
pub use numerical::NumericalMonoid;
pub use weighted::{AtomBase, WeightedAtomSystem};
