//! Decision procedure for propositional intuitionistic logic.
//!
//! A propositional sequent is translated into a fragment of classical
//! first-order logic in which every universal is shielded by an accessibility
//! atom. Backward search in a sequent calculus for that fragment, with
//! forward saturation under reflexivity, transitivity, and monotonicity,
//! either closes every branch (yielding a machine-checkable derivation) or
//! saturates an open branch (yielding a finite Kripke countermodel). An
//! independent multisuccedent intuitionistic prover and a bounded model
//! enumerator triangulate the verdicts.

pub mod corpus;
pub mod derivation;
pub mod formula;
pub mod kripke;
pub mod oracle;
pub mod parse;
pub mod prover;
pub mod sequent;
pub mod translate;

pub use derivation::Derivation;
pub use formula::{PropFormula, PsfFormula, Variable};
pub use kripke::{Assignment, KripkeModel};
pub use parse::{parse_formula, parse_sequent};
pub use prover::{prove, prove_prop, ProverError, RuleName, SearchConfig, SearchResult};
pub use sequent::{PropSequent, Sequent, SequentOf};
pub use translate::{translate, translate_sequent};
