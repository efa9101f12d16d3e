//! Completely iterative, symbolically: a tree-monad model and a solver for
//! guarded recursive equation systems.
//!
//! The pieces:
//!
//! * [`tree`] — finite Σ-trees with a truncation marker, the free-monad
//!   structure on them, and random generation;
//! * [`eqsys`] — the textual equation format, guardedness factoring, and the
//!   substitution solver that pins the unique solution down to any depth;
//! * [`model`] — the category whose morphisms are evaluated lazily as
//!   element-to-tree functions, with products as disjoint unions, delay as
//!   one mandatory operation layer, and a dagger that unfolds recursion to
//!   a depth budget.
//!
//! Everything here compares trees only up to a chosen depth `k` — the `□`
//! leaf marks the horizon — so all laws are checked in their depth-`k`
//! reading, which is the faithful one for final-coalgebra semantics at desk
//! scale.

pub mod eqsys;
pub mod model;
pub mod tree;

pub use eqsys::{Atom, EquationMorphism, EquationSystem, RhsClass, Term};
pub use model::{CitmModel, CitmMor, CitmObj, CitmSizes, Elem};
pub use tree::{IdealMonadStructure, OpDecl, Signature, SigmaTree};
