//! Exact torus-equivariant Schubert classes of symplectic Grassmannians and
//! partial flag varieties.
//!
//! Classes live in `R_∞ = Γ[z, t]` ([`ring`]). They are built either as sums
//! of theta-polynomial Pfaffians ([`theta`], [`pfaffian`], [`schubert`]) or by
//! divided differences from the class of the longest element, and the two
//! routes can be compared exactly. Signed permutations and k-strict
//! partitions are in [`weylc`] and [`kstrict`]; raising-operator expansions
//! are in [`raising`].

pub mod error;
pub mod kstrict;
pub mod pfaffian;
pub mod raising;
pub mod ring;
pub mod schubert;
pub mod theta;
pub mod weylc;

pub use error::{Error, Result};
pub use kstrict::KStrictPartition;
pub use pfaffian::{FormalPfaffian, TableExpr, TableKind, TableTerm};
pub use raising::{FactorKind, FactorSpec, RaisingExpansion};
pub use ring::RingElement;
pub use schubert::PfaffianSum;
pub use theta::ThetaSpec;
pub use weylc::{ParabolicSet, SignedPermutation};
