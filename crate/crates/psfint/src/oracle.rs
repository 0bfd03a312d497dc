//! An independent intuitionistic prover used to cross-check the main one.
//!
//! Backward search in a multi-succedent sequent calculus for propositional
//! intuitionistic logic. Conjunction and disjunction rules are invertible and
//! applied eagerly; left and right implication are backtracking choice points,
//! with a per-path repeated-sequent check guaranteeing termination.

use crate::derivation::Derivation;
use crate::formula::PropFormula;
use crate::parse::parse_formula;
use crate::sequent::PropSequent;
use std::collections::BTreeSet;
use std::fmt;

/// Rule labels of the oracle calculus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MG3ipRule {
    Ax,
    LBot,
    LAnd,
    RAnd,
    LOr,
    ROr,
    LImp,
    RImp,
}

impl fmt::Display for MG3ipRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            MG3ipRule::Ax => "Ax",
            MG3ipRule::LBot => "LBot",
            MG3ipRule::LAnd => "LAnd",
            MG3ipRule::RAnd => "RAnd",
            MG3ipRule::LOr => "LOr",
            MG3ipRule::ROr => "ROr",
            MG3ipRule::LImp => "LImp",
            MG3ipRule::RImp => "RImp",
        };
        f.write_str(name)
    }
}

/// Verdict of the oracle prover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleResult {
    Provable(Derivation<MG3ipRule, PropFormula>),
    Unprovable,
}

impl OracleResult {
    pub fn is_provable(&self) -> bool {
        matches!(self, OracleResult::Provable(_))
    }
}

type State = (BTreeSet<PropFormula>, BTreeSet<PropFormula>);

fn sequent_of(gamma: &BTreeSet<PropFormula>, delta: &BTreeSet<PropFormula>) -> PropSequent {
    PropSequent {
        antecedent: gamma.iter().cloned().collect(),
        succedent: delta.iter().cloned().collect(),
    }
}

fn node(
    rule: MG3ipRule,
    gamma: &BTreeSet<PropFormula>,
    delta: &BTreeSet<PropFormula>,
    principal: &PropFormula,
    premises: Vec<Derivation<MG3ipRule, PropFormula>>,
) -> Derivation<MG3ipRule, PropFormula> {
    Derivation {
        rule,
        conclusion: sequent_of(gamma, delta),
        principal: principal.to_string(),
        premises,
    }
}

fn search(
    gamma: &BTreeSet<PropFormula>,
    delta: &BTreeSet<PropFormula>,
    path: &mut BTreeSet<State>,
) -> Option<Derivation<MG3ipRule, PropFormula>> {
    if gamma.contains(&PropFormula::Bottom) {
        return Some(node(MG3ipRule::LBot, gamma, delta, &PropFormula::Bottom, vec![]));
    }
    if let Some(atom) = gamma
        .iter()
        .find(|f| matches!(f, PropFormula::Atom(_)) && delta.contains(f))
    {
        return Some(node(MG3ipRule::Ax, gamma, delta, atom, vec![]));
    }

    // Invertible decompositions strictly shrink the sequent, so they need no
    // loop protection and no backtracking.
    if let Some(f) = gamma.iter().find(|f| matches!(f, PropFormula::And(_, _))).cloned() {
        let PropFormula::And(a, b) = &f else { unreachable!() };
        let mut g = gamma.clone();
        g.remove(&f);
        g.insert((**a).clone());
        g.insert((**b).clone());
        let d = search(&g, delta, path)?;
        return Some(node(MG3ipRule::LAnd, gamma, delta, &f, vec![d]));
    }
    if let Some(f) = delta.iter().find(|f| matches!(f, PropFormula::Or(_, _))).cloned() {
        let PropFormula::Or(a, b) = &f else { unreachable!() };
        let mut d = delta.clone();
        d.remove(&f);
        d.insert((**a).clone());
        d.insert((**b).clone());
        let sub = search(gamma, &d, path)?;
        return Some(node(MG3ipRule::ROr, gamma, delta, &f, vec![sub]));
    }
    if let Some(f) = gamma.iter().find(|f| matches!(f, PropFormula::Or(_, _))).cloned() {
        let PropFormula::Or(a, b) = &f else { unreachable!() };
        let mut left = gamma.clone();
        left.remove(&f);
        left.insert((**a).clone());
        let mut right = gamma.clone();
        right.remove(&f);
        right.insert((**b).clone());
        let dl = search(&left, delta, path)?;
        let dr = search(&right, delta, path)?;
        return Some(node(MG3ipRule::LOr, gamma, delta, &f, vec![dl, dr]));
    }
    if let Some(f) = delta.iter().find(|f| matches!(f, PropFormula::And(_, _))).cloned() {
        let PropFormula::And(a, b) = &f else { unreachable!() };
        let mut left = delta.clone();
        left.remove(&f);
        left.insert((**a).clone());
        let mut right = delta.clone();
        right.remove(&f);
        right.insert((**b).clone());
        let dl = search(gamma, &left, path)?;
        let dr = search(gamma, &right, path)?;
        return Some(node(MG3ipRule::RAnd, gamma, delta, &f, vec![dl, dr]));
    }

    // Implication rules can revisit sequents, so guard against cycles on the
    // current path before branching over the candidates.
    let state: State = (gamma.clone(), delta.clone());
    if !path.insert(state.clone()) {
        return None;
    }
    let mut result = None;
    let left_candidates: Vec<PropFormula> = gamma
        .iter()
        .filter(|f| matches!(f, PropFormula::Imp(_, _)))
        .cloned()
        .collect();
    for f in &left_candidates {
        let PropFormula::Imp(a, b) = f else { unreachable!() };
        let mut d1 = delta.clone();
        d1.insert((**a).clone());
        let Some(p1) = search(gamma, &d1, path) else { continue };
        let mut g2 = gamma.clone();
        g2.remove(f);
        g2.insert((**b).clone());
        let Some(p2) = search(&g2, delta, path) else { continue };
        result = Some(node(MG3ipRule::LImp, gamma, delta, f, vec![p1, p2]));
        break;
    }
    if result.is_none() {
        let right_candidates: Vec<PropFormula> = delta
            .iter()
            .filter(|f| matches!(f, PropFormula::Imp(_, _)))
            .cloned()
            .collect();
        for f in &right_candidates {
            let PropFormula::Imp(a, b) = f else { unreachable!() };
            let mut g = gamma.clone();
            g.insert((**a).clone());
            let d: BTreeSet<PropFormula> = [(**b).clone()].into_iter().collect();
            if let Some(p) = search(&g, &d, path) {
                result = Some(node(MG3ipRule::RImp, gamma, delta, f, vec![p]));
                break;
            }
        }
    }
    path.remove(&state);
    result
}

/// Decides the sequent in the oracle calculus. The returned derivation's root
/// conclusion is the input as given; inner sequents are duplicate-free.
pub fn mg3ip_prove(s: &PropSequent) -> OracleResult {
    let gamma: BTreeSet<PropFormula> = s.antecedent.iter().cloned().collect();
    let delta: BTreeSet<PropFormula> = s.succedent.iter().cloned().collect();
    let mut path = BTreeSet::new();
    match search(&gamma, &delta, &mut path) {
        Some(mut d) => {
            d.conclusion = s.clone();
            OracleResult::Provable(d)
        }
        None => OracleResult::Unprovable,
    }
}

fn collapse(s: &PropSequent) -> State {
    (
        s.antecedent.iter().cloned().collect(),
        s.succedent.iter().cloned().collect(),
    )
}

fn expect_premises(
    d: &Derivation<MG3ipRule, PropFormula>,
    expected: Vec<State>,
) -> Result<(), String> {
    if d.premises.len() != expected.len() {
        return Err(format!(
            "{} expects {} premises, found {}",
            d.rule,
            expected.len(),
            d.premises.len()
        ));
    }
    for (premise, want) in d.premises.iter().zip(expected) {
        if collapse(&premise.conclusion) != want {
            return Err(format!(
                "premise of {} at {} does not match the rule",
                d.rule, d.conclusion
            ));
        }
        check_node(premise)?;
    }
    Ok(())
}

fn check_node(d: &Derivation<MG3ipRule, PropFormula>) -> Result<(), String> {
    let (gamma, delta) = collapse(&d.conclusion);
    let f = parse_formula(&d.principal)
        .map_err(|e| format!("unparseable principal {:?}: {e}", d.principal))?;
    let in_gamma = gamma.contains(&f);
    let in_delta = delta.contains(&f);
    match d.rule {
        MG3ipRule::Ax => {
            if !matches!(f, PropFormula::Atom(_)) {
                return Err(format!("Ax principal {f} is not an atom"));
            }
            if !(in_gamma && in_delta) {
                return Err(format!("Ax principal {f} is not on both sides"));
            }
            expect_premises(d, vec![])
        }
        MG3ipRule::LBot => {
            if !gamma.contains(&PropFormula::Bottom) {
                return Err("LBot without false on the left".to_string());
            }
            expect_premises(d, vec![])
        }
        MG3ipRule::LAnd => {
            let PropFormula::And(a, b) = &f else {
                return Err(format!("LAnd principal {f} is not a conjunction"));
            };
            if !in_gamma {
                return Err(format!("LAnd principal {f} not on the left"));
            }
            let mut g = gamma.clone();
            g.remove(&f);
            g.insert((**a).clone());
            g.insert((**b).clone());
            expect_premises(d, vec![(g, delta)])
        }
        MG3ipRule::RAnd => {
            let PropFormula::And(a, b) = &f else {
                return Err(format!("RAnd principal {f} is not a conjunction"));
            };
            if !in_delta {
                return Err(format!("RAnd principal {f} not on the right"));
            }
            let mut l = delta.clone();
            l.remove(&f);
            l.insert((**a).clone());
            let mut r = delta.clone();
            r.remove(&f);
            r.insert((**b).clone());
            expect_premises(d, vec![(gamma.clone(), l), (gamma, r)])
        }
        MG3ipRule::LOr => {
            let PropFormula::Or(a, b) = &f else {
                return Err(format!("LOr principal {f} is not a disjunction"));
            };
            if !in_gamma {
                return Err(format!("LOr principal {f} not on the left"));
            }
            let mut l = gamma.clone();
            l.remove(&f);
            l.insert((**a).clone());
            let mut r = gamma.clone();
            r.remove(&f);
            r.insert((**b).clone());
            expect_premises(d, vec![(l, delta.clone()), (r, delta)])
        }
        MG3ipRule::ROr => {
            let PropFormula::Or(a, b) = &f else {
                return Err(format!("ROr principal {f} is not a disjunction"));
            };
            if !in_delta {
                return Err(format!("ROr principal {f} not on the right"));
            }
            let mut dd = delta.clone();
            dd.remove(&f);
            dd.insert((**a).clone());
            dd.insert((**b).clone());
            expect_premises(d, vec![(gamma, dd)])
        }
        MG3ipRule::LImp => {
            let PropFormula::Imp(a, b) = &f else {
                return Err(format!("LImp principal {f} is not an implication"));
            };
            if !in_gamma {
                return Err(format!("LImp principal {f} not on the left"));
            }
            let mut d1 = delta.clone();
            d1.insert((**a).clone());
            let mut g2 = gamma.clone();
            g2.remove(&f);
            g2.insert((**b).clone());
            expect_premises(d, vec![(gamma.clone(), d1), (g2, delta)])
        }
        MG3ipRule::RImp => {
            let PropFormula::Imp(a, b) = &f else {
                return Err(format!("RImp principal {f} is not an implication"));
            };
            if !in_delta {
                return Err(format!("RImp principal {f} not on the right"));
            }
            let mut g = gamma.clone();
            g.insert((**a).clone());
            let dd: BTreeSet<PropFormula> = [(**b).clone()].into_iter().collect();
            expect_premises(d, vec![(g, dd)])
        }
    }
}

/// Checks a derivation bottom to top against the oracle calculus: the root
/// must match the endsequent and every node must be a correct rule instance.
/// Sequents are compared as sets, so duplicated members do not matter.
pub fn validate_mg3ip(
    d: &Derivation<MG3ipRule, PropFormula>,
    end: &PropSequent,
) -> Result<(), String> {
    if collapse(&d.conclusion) != collapse(end) {
        return Err(format!(
            "root concludes {} instead of {end}",
            d.conclusion
        ));
    }
    check_node(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_sequent;

    fn verdict(text: &str) -> bool {
        mg3ip_prove(&parse_sequent(text).unwrap()).is_provable()
    }

    // Standard intuitionistic theorems and non-theorems; each verdict is a
    // textbook fact, not an output of this code.
    #[test]
    fn known_provables() {
        for text in [
            "p => p",
            "=> p -> p",
            "=> p -> (q -> p)",
            "=> (p -> (q -> r)) -> ((p -> q) -> (p -> r))",
            "p & q => q & p",
            "p | q => q | p",
            "=> ~~(p | ~p)",
            "=> (p & (p -> q)) -> q",
            "=> false -> p",
            "=> ~(p & ~p)",
            "p -> q, q -> r, p => r",
            "=> (~p | q) -> (p -> q)",
            "=> ((p | q) -> r) -> ((p -> r) & (q -> r))",
            "=> ((p -> r) & (q -> r)) -> ((p | q) -> r)",
            "~~~p => ~p",
        ] {
            assert!(verdict(text), "{text} should be provable");
        }
    }

    #[test]
    fn known_unprovables() {
        for text in [
            "=> p",
            "=> p | ~p",
            "=> ~~p -> p",
            "=> ((p -> q) -> p) -> p",
            "=> (p -> q) | (q -> p)",
            "=> (p -> q) -> (~p | q)",
            "=> ~(p & q) -> (~p | ~q)",
            "p | q => p & q",
            "~~p => p",
            "=>",
        ] {
            assert!(!verdict(text), "{text} should not be provable");
        }
    }

    #[test]
    fn produced_derivations_validate() {
        for text in [
            "=> p -> p",
            "p & q => q & p",
            "=> ~~(p | ~p)",
            "=> (p -> (q -> r)) -> ((p -> q) -> (p -> r))",
            "p | q, p -> r, q -> r => r",
        ] {
            let s = parse_sequent(text).unwrap();
            let OracleResult::Provable(d) = mg3ip_prove(&s) else {
                panic!("{text} should be provable");
            };
            validate_mg3ip(&d, &s).unwrap_or_else(|e| panic!("{text}: {e}"));
            assert_eq!(d.conclusion, s, "root carries the input verbatim");
        }
    }

    #[test]
    fn validator_rejects_tampering() {
        let s = parse_sequent("=> p -> p").unwrap();
        let OracleResult::Provable(d) = mg3ip_prove(&s) else {
            panic!("should be provable");
        };
        let mut wrong_rule = d.clone();
        wrong_rule.rule = MG3ipRule::Ax;
        assert!(validate_mg3ip(&wrong_rule, &s).is_err());
        let mut wrong_end = d.clone();
        wrong_end.conclusion = parse_sequent("=> p -> q").unwrap();
        assert!(validate_mg3ip(&wrong_end, &s).is_err());
        let mut dropped = d;
        dropped.premises.clear();
        assert!(validate_mg3ip(&dropped, &s).is_err());
    }

    #[test]
    fn duplicates_do_not_change_the_verdict() {
        assert!(verdict("p, p, q => q & p"));
        assert!(verdict("p => p | p"));
    }

    #[test]
    fn terminates_on_looping_candidates() {
        // Left implication keeps its principal, so naive search would loop.
        assert!(!verdict("p -> q => q"));
        assert!(!verdict("~~p => p"));
        assert!(verdict("~~(p -> q), p, ~q => false"));
    }
}
