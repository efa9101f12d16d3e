//! An executable laboratory for guarded fixpoint operators.
//!
//! The crate provides four concrete cartesian categories, each equipped with a
//! pointed "delay" endofunctor `▶` and a guarded dagger operator sending
//! `f : ▶X × Y → X` to a solution `f† : Y → X` of the fixpoint equation
//!
//! ```text
//! f† = f ∘ (p_X × Y) ∘ ⟨f†, id_Y⟩
//! ```
//!
//! * [`presheaf`] — set-valued presheaves over a finite well-founded poset,
//!   where the delay at a stage is the limit of the object over all strictly
//!   earlier stages.  Daggers are unique.
//! * [`cpolift`] — finite posets as cpos with the add-a-bottom lift as delay
//!   and least fixpoints as daggers.  Daggers are not unique.
//! * [`cms`] — finite 1-bounded ultrametric spaces with a distance-halving
//!   delay and Banach iteration as dagger.  Daggers are unique.
//! * [`citm`] — guarded systems of equations over a signature, solved by
//!   substitution into (depth-truncated) infinite trees.  Daggers are unique
//!   up to every tested depth.
//!
//! [`laws`] turns the equational theory of such operators (fixpoint,
//! parameter, composition, double dagger, uniformity, Bekič, dinaturality,
//! and the guarded trace axioms) into seeded property checks that run
//! uniformly over all four models and produce replayable JSON reports.

pub mod cat;
pub mod citm;
pub mod cms;
pub mod cpolift;
pub mod laws;
pub mod poset;
pub mod presheaf;
pub mod seeding;
pub mod verdict;

pub use cat::{CatError, GuardedCategory};
pub use verdict::{LawReport, TrialWitness, VerdictMode};
