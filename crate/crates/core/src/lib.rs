//! Pre-Lie and NAP (non-associative permutative) algebra and coalgebra
//! structures on finite connected posets and finite topological spaces.
//!
//! The crate works on isomorphism classes: every operation produces exact
//! rational linear combinations of [`ClassKey`]s. Posets and topologies are
//! kept as closure matrices ([`poset`]), canonicalized by partition
//! refinement ([`canon`]), and combined through grafting and branch removal
//! ([`nap`], [`topology`]). [`enumerate`] builds the class tables the
//! exhaustive checks in [`verify`] sweep over, and [`trees`] holds the
//! rooted-tree model used as an independent dimension oracle.

pub mod canon;
pub mod enumerate;
pub mod error;
pub mod format;
pub mod linear;
pub mod nap;
pub mod orbit;
pub mod poset;
pub mod topology;
pub mod trees;
pub mod verify;

pub use canon::{ClassKey, PermGroupData};
pub use error::{Error, Result};
pub use linear::{FormalSum, LinComb, Rational, TensorSum, TensorSum3};
pub use poset::{Kind, Poset, Relation, Structure, Topology};
