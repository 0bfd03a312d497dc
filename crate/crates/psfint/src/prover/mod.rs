//! Backward proof search in the shielded-fragment sequent calculus.
//!
//! The search interleaves forward saturation under the frame rules (refl,
//! tran, mono) with backward application of the logical rules. Every logical
//! rule is invertible, so the first branch that saturates without closing
//! witnesses unprovability and is read off as a finite Kripke countermodel.

mod admissible;
mod extract;
mod search;
mod validate;

pub use admissible::{
    check_monotonicity_lemmas, check_structural_admissibility, AdmissibilityReport,
    MonotonicitySample, StructuralSample,
};
pub use validate::validate_derivation;

use crate::derivation::Derivation;
use crate::formula::{PsfFormula, Variable};
use crate::kripke::{Assignment, KripkeModel};
use crate::sequent::{PropSequent, Sequent};
use crate::translate::{translate_sequent, FreshVars};
use std::fmt;
use thiserror::Error;

/// Search options: frame-rule toggles and the optional depth escape hatch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub enable_refl: bool,
    pub enable_tran: bool,
    pub enable_mono: bool,
    /// Maximum logical rule applications along one branch; `None` relies on
    /// the blocking discipline for termination.
    pub depth_bound: Option<usize>,
    /// Log each logical rule application to stderr.
    pub trace: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            enable_refl: true,
            enable_tran: true,
            enable_mono: true,
            depth_bound: None,
            trace: false,
        }
    }
}

/// The eleven rule labels of the calculus: eight logical rules and the three
/// frame rules applied by saturation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RuleName {
    Ax,
    LBot,
    LAnd,
    RAnd,
    LOr,
    ROr,
    LAllImp,
    RAllImp,
    Refl,
    Tran,
    Mono,
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            RuleName::Ax => "Ax",
            RuleName::LBot => "LBot",
            RuleName::LAnd => "LAnd",
            RuleName::RAnd => "RAnd",
            RuleName::LOr => "LOr",
            RuleName::ROr => "ROr",
            RuleName::LAllImp => "LAllImp",
            RuleName::RAllImp => "RAllImp",
            RuleName::Refl => "Refl",
            RuleName::Tran => "Tran",
            RuleName::Mono => "Mono",
        };
        f.write_str(name)
    }
}

/// Outcome of proof search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchResult {
    /// Every branch closed; the derivation's root is the input sequent.
    Proof(Derivation<RuleName, PsfFormula>),
    /// An open saturated branch was found; the model falsifies the input
    /// sequent under the assignment of its free variables.
    Refuted {
        model: KripkeModel,
        assignment: Assignment,
    },
    /// The configured depth bound was hit before a verdict.
    DepthExceeded,
}

impl SearchResult {
    pub fn is_proof(&self) -> bool {
        matches!(self, SearchResult::Proof(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, SearchResult::Refuted { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProverError {
    #[error("input is outside the fragment: {0}")]
    NotPsf(String),
    /// An extracted countermodel failed its own validity check. This signals
    /// a defect in the search discipline, never a property of the input.
    #[error("countermodel self-check failed: {0}")]
    CountermodelDefect(String),
}

/// Decides a fragment sequent: a derivation, a countermodel, or a depth miss.
pub fn prove(s: &Sequent, cfg: &SearchConfig) -> Result<SearchResult, ProverError> {
    for f in s.antecedent.iter().chain(s.succedent.iter()) {
        if !f.is_psf() {
            return Err(ProverError::NotPsf(f.to_string()));
        }
    }
    let mut supply = FreshVars::new("z", s.all_var_names());
    let branch = search::Branch::root(s);
    match search::expand(branch, &mut supply, cfg) {
        search::Expansion::Closed(mut d) => {
            d.conclusion = s.clone();
            Ok(SearchResult::Proof(d))
        }
        search::Expansion::Open(branch) => {
            let (model, assignment) = extract::extract(&branch, s, cfg)?;
            Ok(SearchResult::Refuted { model, assignment })
        }
        search::Expansion::Exceeded => Ok(SearchResult::DepthExceeded),
    }
}

/// Translates a propositional sequent at `at` and decides the translation.
pub fn prove_prop(
    s: &PropSequent,
    at: &Variable,
    cfg: &SearchConfig,
) -> Result<SearchResult, ProverError> {
    prove(&translate_sequent(s, at), cfg)
}

/// Closes the antecedent under the enabled frame rules: refl adds `R(v,v)`
/// for every variable occurring in the sequent, tran composes relation atoms,
/// mono copies predicate atoms along relation atoms. Idempotent; the
/// succedent is untouched.
pub fn geometric_saturate(s: &Sequent, cfg: &SearchConfig) -> Sequent {
    let vars: Vec<Variable> = s.free_vars().into_iter().collect();
    let mut atoms: std::collections::BTreeSet<PsfFormula> = s
        .antecedent
        .iter()
        .filter(|f| f.is_atom())
        .cloned()
        .collect();
    loop {
        let mut added = Vec::new();
        for step in search::saturation_candidates(&atoms, &vars, cfg) {
            if !atoms.contains(&step.atom) {
                added.push(step.atom.clone());
                atoms.insert(step.atom);
            }
        }
        if added.is_empty() {
            break;
        }
    }
    let mut antecedent = s.antecedent.clone();
    for atom in atoms {
        if !antecedent.contains(&atom) {
            antecedent.push(atom);
        }
    }
    Sequent {
        antecedent,
        succedent: s.succedent.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::validates;
    use crate::parse::parse_sequent;
    use crate::translate::translate_sequent;

    fn decide(text: &str) -> SearchResult {
        let s = parse_sequent(text).unwrap();
        prove_prop(&s, &Variable::from("x"), &SearchConfig::default()).unwrap()
    }

    fn refutation(text: &str) -> (KripkeModel, Assignment, Sequent) {
        let s = parse_sequent(text).unwrap();
        let t = translate_sequent(&s, &Variable::from("x"));
        match prove(&t, &SearchConfig::default()).unwrap() {
            SearchResult::Refuted { model, assignment } => (model, assignment, t),
            other => panic!("{text} should be refuted, got {other:?}"),
        }
    }

    #[test]
    fn named_suite_verdicts() {
        assert!(decide("=> p -> p").is_proof());
        assert!(decide("p & q => q & p").is_proof());
        assert!(decide("=> ~~(p | ~p)").is_proof());
        assert!(decide("=> p | ~p").is_refuted());
        assert!(decide("=> ((p -> q) -> p) -> p").is_refuted());
        assert!(decide("=> (p -> q) | (q -> p)").is_refuted());
    }

    #[test]
    fn excluded_middle_yields_the_two_chain() {
        let (model, assignment, t) = refutation("=> p | ~p");
        assert_eq!(model.worlds.len(), 2);
        assert!(model.rel.contains(&(0, 1)));
        assert!(!model.rel.contains(&(1, 0)));
        assert_eq!(model.val["p"], [1usize].into_iter().collect());
        assert_eq!(assignment[&Variable::from("x")], 0);
        assert!(!validates(&model, &t, &assignment).unwrap());
    }

    #[test]
    fn peirce_yields_a_three_chain_with_p_on_top() {
        let (model, _, _) = refutation("=> ((p -> q) -> p) -> p");
        assert_eq!(model.worlds.len(), 3);
        assert!(model.rel.contains(&(0, 1)) && model.rel.contains(&(1, 2)));
        assert!(model.rel.contains(&(0, 2)), "closure composes the chain");
        assert_eq!(model.val["p"], [2usize].into_iter().collect());
        assert!(model.val.get("q").is_none_or(|ws| ws.is_empty()));
    }

    #[test]
    fn dummett_yields_a_fork() {
        let (model, _, _) = refutation("=> (p -> q) | (q -> p)");
        assert_eq!(model.worlds.len(), 3);
        let succ: Vec<usize> = (1..3).filter(|&w| model.rel.contains(&(0, w))).collect();
        assert_eq!(succ, vec![1, 2]);
        assert!(!model.rel.contains(&(1, 2)) && !model.rel.contains(&(2, 1)));
        let p = &model.val["p"];
        let q = &model.val["q"];
        assert_eq!(p.len(), 1);
        assert_eq!(q.len(), 1);
        assert_ne!(p, q, "p and q hold at different successors");
    }

    #[test]
    fn double_negation_elimination_is_refuted_via_blocking() {
        // The open branch only terminates because the third world is blocked
        // by the second; the back-edge makes them mutually accessible.
        let (model, _, _) = refutation("~~p => p");
        assert!(model.check_int_model());
        assert!(model.worlds.len() >= 2);
        let n = model.worlds.len();
        assert!(model.rel.contains(&(n - 1, n - 2)), "back-edge present");
    }

    #[test]
    fn proofs_validate_against_the_rule_schemas() {
        for text in [
            "=> p -> p",
            "p & q => q & p",
            "=> ~~(p | ~p)",
            "=> p -> q -> p",
            "p | q, p -> r, q -> r => r",
            "=> (p -> q) -> (q -> r) -> p -> r",
        ] {
            let s = parse_sequent(text).unwrap();
            let t = translate_sequent(&s, &Variable::from("x"));
            let SearchResult::Proof(d) = prove(&t, &SearchConfig::default()).unwrap() else {
                panic!("{text} should be provable");
            };
            validate_derivation(&d, &t).unwrap_or_else(|e| panic!("{text}: {e}"));
            assert_eq!(d.conclusion, t, "root carries the input verbatim");
        }
    }

    #[test]
    fn rejects_inputs_outside_the_fragment() {
        let bad = Sequent {
            antecedent: vec![PsfFormula::and(
                PsfFormula::pred("p", "x"),
                PsfFormula::rel("x", "y"),
            )],
            succedent: vec![],
        };
        assert!(matches!(
            prove(&bad, &SearchConfig::default()),
            Err(ProverError::NotPsf(_))
        ));
    }

    #[test]
    fn depth_bound_reports_exceeded() {
        let s = parse_sequent("=> ((p -> q) -> p) -> p").unwrap();
        let cfg = SearchConfig {
            depth_bound: Some(1),
            ..SearchConfig::default()
        };
        assert_eq!(
            prove_prop(&s, &Variable::from("x"), &cfg).unwrap(),
            SearchResult::DepthExceeded
        );
    }

    #[test]
    fn search_is_deterministic() {
        for text in ["=> p | ~p", "=> ((p -> q) -> p) -> p", "p & q => q & p"] {
            let s = parse_sequent(text).unwrap();
            let a = prove_prop(&s, &Variable::from("x"), &SearchConfig::default()).unwrap();
            let b = prove_prop(&s, &Variable::from("x"), &SearchConfig::default()).unwrap();
            assert_eq!(a, b, "{text}");
        }
    }

    #[test]
    fn direct_fragment_sequents_are_decided() {
        // R-atoms and predicate atoms on both sides, no translation involved.
        let s = Sequent {
            antecedent: vec![PsfFormula::rel("x", "y"), PsfFormula::pred("p", "x")],
            succedent: vec![PsfFormula::pred("p", "y")],
        };
        assert!(prove(&s, &SearchConfig::default()).unwrap().is_proof());
        let without_mono = SearchConfig {
            enable_mono: false,
            ..SearchConfig::default()
        };
        assert!(prove(&s, &without_mono).unwrap().is_refuted());
    }

    #[test]
    fn empty_sequent_is_refuted_with_one_world() {
        let s = Sequent {
            antecedent: vec![],
            succedent: vec![],
        };
        let SearchResult::Refuted { model, assignment } =
            prove(&s, &SearchConfig::default()).unwrap()
        else {
            panic!("empty sequent must be refuted");
        };
        assert_eq!(model.worlds.len(), 1);
        assert!(model.check_int_model());
        assert!(assignment.is_empty());
    }

    #[test]
    fn saturation_adds_the_expected_atoms() {
        let s = Sequent {
            antecedent: vec![PsfFormula::rel("x", "y"), PsfFormula::rel("y", "z")],
            succedent: vec![],
        };
        let out = geometric_saturate(&s, &SearchConfig::default());
        for atom in [
            PsfFormula::rel("x", "z"),
            PsfFormula::rel("x", "x"),
            PsfFormula::rel("y", "y"),
            PsfFormula::rel("z", "z"),
        ] {
            assert!(out.antecedent.contains(&atom), "missing {atom}");
        }
        assert_eq!(out.succedent, s.succedent);
        let again = geometric_saturate(&out, &SearchConfig::default());
        assert_eq!(again, out, "saturation is idempotent");

        let m = Sequent {
            antecedent: vec![PsfFormula::rel("x", "y"), PsfFormula::pred("p", "x")],
            succedent: vec![],
        };
        let mout = geometric_saturate(&m, &SearchConfig::default());
        assert!(mout.antecedent.contains(&PsfFormula::pred("p", "y")));

        let lone = Sequent {
            antecedent: vec![],
            succedent: vec![PsfFormula::pred("p", "x")],
        };
        let lout = geometric_saturate(&lone, &SearchConfig::default());
        assert_eq!(lout.antecedent, vec![PsfFormula::rel("x", "x")]);
    }

    #[test]
    fn saturation_respects_toggles() {
        let s = Sequent {
            antecedent: vec![PsfFormula::rel("x", "y"), PsfFormula::rel("y", "z")],
            succedent: vec![],
        };
        let cfg = SearchConfig {
            enable_tran: false,
            enable_refl: false,
            enable_mono: false,
            ..SearchConfig::default()
        };
        assert_eq!(geometric_saturate(&s, &cfg), s);
    }

    #[test]
    fn refutations_always_self_check() {
        for text in [
            "=> p",
            "=> p | ~p",
            "=> ~~p -> p",
            "=> (p -> q) -> (~p | q)",
            "=> ~(p & q) -> (~p | ~q)",
            "p | q => p & q",
            "=> (p -> q) | (q -> p)",
            "~~p => p",
            "=>",
        ] {
            let s = parse_sequent(text).unwrap();
            let t = translate_sequent(&s, &Variable::from("x"));
            let SearchResult::Refuted { model, assignment } =
                prove(&t, &SearchConfig::default()).unwrap()
            else {
                panic!("{text} should be refuted");
            };
            assert!(model.check_int_model(), "{text}");
            assert!(!validates(&model, &t, &assignment).unwrap(), "{text}");
        }
    }
}
