//! Exact computation of tangent numbers, Genocchi numbers and their k-ary
//! generalizations, together with the tree-enumeration machinery that
//! explains their divisibility properties.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactnum`]: big-integer combinatorics and the small number-theoretic
//!   facts (Legendre's formula, a mod-p² product congruence, the
//!   `(k-1)!`-divisibility identity, the case split on `k`).
//! * [`trees`]: complete k-ary tree shapes, hook lengths, increasing
//!   labellings, pivoting classes and per-class divisibility.
//! * [`series`]: the sequences `T`, `G`, `L`, `M`, Fuss-Catalan numbers, the
//!   weighted sum `f(n)`, the generating functions `φ`/`ψ`, and residues of
//!   `M` modulo `k`.
//! * [`registry`]: name-keyed registries of sequence generators and
//!   verification checks, used by the command-line front end.
//!
//! Every value is an exact non-negative integer ([`Nat`]); nothing is ever
//! rounded.

pub mod budget;
pub mod error;
pub mod exactnum;
pub mod registry;
pub mod series;
pub mod trees;

pub use budget::Budget;
pub use error::{Error, Result};
pub use exactnum::Nat;
