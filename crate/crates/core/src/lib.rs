//! Subadditive families of subsets of ℕ, their unions of sets of lengths, and
//! certificates for the structure of those unions.

pub mod error;
pub mod family;
pub mod invariants;
pub mod monoids;
pub mod natset;
pub mod oracle;
pub mod structure;

pub use error::Error;
pub use family::{Backend, ExplicitFamily, GeneratedFamily, LengthSystem, Members, Subadditivity, SystemConfig, Unions};
pub use monoids::{AtomBase, BlockMonoid, FiniteAbelianGroup, NumericalMonoid, WeightedAtomSystem, ZeroSumSequence};
pub use natset::{ExtNat, ExtRat, NatSet};

pub type Result<T, E = Error> = std::result::Result<T, E>;
