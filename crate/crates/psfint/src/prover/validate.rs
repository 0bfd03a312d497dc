//! Schema-level checking of derivations, independent of how they were found.
//!
//! Each node is compared against its rule's premise shape under set
//! semantics: the principal formula is located in the conclusion by its
//! printed form, the expected premise sequents are computed from the schema,
//! and the recorded premises must match them exactly.

use super::RuleName;
use crate::derivation::Derivation;
use crate::formula::{PsfFormula, Variable};
use crate::sequent::Sequent;
use std::collections::BTreeSet;

type Side = BTreeSet<PsfFormula>;

fn collapse(s: &Sequent) -> (Side, Side) {
    (
        s.antecedent.iter().cloned().collect(),
        s.succedent.iter().cloned().collect(),
    )
}

fn find_in(side: &Side, want: &str) -> Result<PsfFormula, String> {
    side.iter()
        .find(|f| f.to_string() == want)
        .cloned()
        .ok_or_else(|| format!("principal {want} is not in the expected side of the conclusion"))
}

fn parse_rel(s: &str) -> Result<(Variable, Variable), String> {
    let inner = s
        .strip_prefix("R(")
        .and_then(|rest| rest.strip_suffix(')'))
        .ok_or_else(|| format!("{s} is not a relation atom"))?;
    let (a, b) = inner
        .split_once(',')
        .ok_or_else(|| format!("{s} is not a relation atom"))?;
    Ok((Variable::new(a), Variable::new(b)))
}

fn parse_pred(s: &str) -> Result<(String, Variable), String> {
    let open = s.find('(').ok_or_else(|| format!("{s} is not a predicate atom"))?;
    let var = s[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| format!("{s} is not a predicate atom"))?;
    let name = &s[..open];
    if name.is_empty() || name == "R" {
        return Err(format!("{s} is not a predicate atom"));
    }
    Ok((name.to_string(), Variable::new(var)))
}

fn expect_arity(d: &Derivation<RuleName, PsfFormula>, n: usize) -> Result<(), String> {
    if d.premises.len() == n {
        Ok(())
    } else {
        Err(format!(
            "{} expects {n} premises, found {} at {}",
            d.rule,
            d.premises.len(),
            d.conclusion
        ))
    }
}

fn expect_premise(
    d: &Derivation<RuleName, PsfFormula>,
    k: usize,
    want: (Side, Side),
) -> Result<(), String> {
    let got = collapse(&d.premises[k].conclusion);
    if got == want {
        Ok(())
    } else {
        Err(format!(
            "premise {} of {} at {} does not match the rule schema: found {}",
            k + 1,
            d.rule,
            d.conclusion,
            d.premises[k].conclusion
        ))
    }
}

fn split_and(f: &PsfFormula) -> Option<(PsfFormula, PsfFormula)> {
    match f {
        PsfFormula::And(a, b) => Some(((**a).clone(), (**b).clone())),
        _ => None,
    }
}

fn split_or(f: &PsfFormula) -> Option<(PsfFormula, PsfFormula)> {
    match f {
        PsfFormula::Or(a, b) => Some(((**a).clone(), (**b).clone())),
        _ => None,
    }
}

fn check(d: &Derivation<RuleName, PsfFormula>) -> Result<(), String> {
    let (gamma, delta) = collapse(&d.conclusion);
    match d.rule {
        RuleName::Ax => {
            expect_arity(d, 0)?;
            let atom = find_in(&gamma, &d.principal)?;
            if !atom.is_atom() {
                return Err(format!("Ax principal {atom} is not an atom"));
            }
            if !delta.contains(&atom) {
                return Err(format!("Ax principal {atom} is missing from the succedent"));
            }
        }
        RuleName::LBot => {
            expect_arity(d, 0)?;
            if d.principal != "false" {
                return Err(format!("LBot records principal {}", d.principal));
            }
            if !gamma.contains(&PsfFormula::Bottom) {
                return Err("LBot conclusion has no antecedent falsum".to_string());
            }
        }
        RuleName::LAnd => {
            expect_arity(d, 1)?;
            let f = find_in(&gamma, &d.principal)?;
            let (a, b) =
                split_and(&f).ok_or_else(|| format!("LAnd principal {f} is not a conjunction"))?;
            let mut g = gamma.clone();
            g.remove(&f);
            g.insert(a);
            g.insert(b);
            expect_premise(d, 0, (g, delta.clone()))?;
        }
        RuleName::ROr => {
            expect_arity(d, 1)?;
            let f = find_in(&delta, &d.principal)?;
            let (a, b) =
                split_or(&f).ok_or_else(|| format!("ROr principal {f} is not a disjunction"))?;
            let mut dd = delta.clone();
            dd.remove(&f);
            dd.insert(a);
            dd.insert(b);
            expect_premise(d, 0, (gamma.clone(), dd))?;
        }
        RuleName::RAnd => {
            expect_arity(d, 2)?;
            let f = find_in(&delta, &d.principal)?;
            let (a, b) =
                split_and(&f).ok_or_else(|| format!("RAnd principal {f} is not a conjunction"))?;
            for (k, part) in [(0, a), (1, b)] {
                let mut dd = delta.clone();
                dd.remove(&f);
                dd.insert(part);
                expect_premise(d, k, (gamma.clone(), dd))?;
            }
        }
        RuleName::LOr => {
            expect_arity(d, 2)?;
            let f = find_in(&gamma, &d.principal)?;
            let (a, b) =
                split_or(&f).ok_or_else(|| format!("LOr principal {f} is not a disjunction"))?;
            for (k, part) in [(0, a), (1, b)] {
                let mut g = gamma.clone();
                g.remove(&f);
                g.insert(part);
                expect_premise(d, k, (g, delta.clone()))?;
            }
        }
        RuleName::RAllImp => {
            expect_arity(d, 1)?;
            let (ustr, zname) = d
                .principal
                .rsplit_once(" / fresh ")
                .ok_or_else(|| format!("RAllImp principal {} lacks a fresh variable", d.principal))?;
            let u = find_in(&delta, ustr)?;
            if d.conclusion.all_var_names().contains(zname) {
                return Err(format!("RAllImp variable {zname} is not fresh for the conclusion"));
            }
            let z = Variable::new(zname);
            let PsfFormula::ShieldedAll {
                bound,
                base,
                hyp,
                con,
            } = &u
            else {
                return Err(format!("RAllImp principal {u} is not a shielded universal"));
            };
            let mut g = gamma.clone();
            g.insert(PsfFormula::rel(base.clone(), z.clone()));
            g.insert(hyp.subst(bound, &z));
            let mut dd = delta.clone();
            dd.remove(&u);
            dd.insert(con.subst(bound, &z));
            expect_premise(d, 0, (g, dd))?;
        }
        RuleName::LAllImp => {
            expect_arity(d, 2)?;
            let (ustr, zname) = d
                .principal
                .rsplit_once(" / inst ")
                .ok_or_else(|| format!("LAllImp principal {} lacks a variable", d.principal))?;
            let u = find_in(&gamma, ustr)?;
            let z = Variable::new(zname);
            let PsfFormula::ShieldedAll {
                bound,
                base,
                hyp,
                con,
            } = &u
            else {
                return Err(format!("LAllImp principal {u} is not a shielded universal"));
            };
            if !gamma.contains(&PsfFormula::rel(base.clone(), z.clone())) {
                return Err(format!(
                    "LAllImp instantiates {u} at {z} without R({base},{z}) in the antecedent"
                ));
            }
            let mut dd = delta.clone();
            dd.insert(hyp.subst(bound, &z));
            expect_premise(d, 0, (gamma.clone(), dd))?;
            let mut g = gamma.clone();
            g.insert(con.subst(bound, &z));
            expect_premise(d, 1, (g, delta.clone()))?;
        }
        RuleName::Refl => {
            expect_arity(d, 1)?;
            let (a, b) = parse_rel(&d.principal)?;
            if a != b {
                return Err(format!("Refl adds a non-diagonal atom {}", d.principal));
            }
            let known: BTreeSet<String> = d
                .conclusion
                .free_vars()
                .into_iter()
                .map(|v| v.as_str().to_string())
                .collect();
            if !known.contains(a.as_str()) {
                return Err(format!("Refl variable {a} does not occur in the conclusion"));
            }
            let mut g = gamma.clone();
            g.insert(PsfFormula::rel(a.clone(), b));
            expect_premise(d, 0, (g, delta.clone()))?;
        }
        RuleName::Tran => {
            expect_arity(d, 1)?;
            let (added, sources) = d
                .principal
                .split_once(" from ")
                .ok_or_else(|| format!("Tran principal {} lacks sources", d.principal))?;
            let (s1, s2) = sources
                .split_once(", ")
                .ok_or_else(|| format!("Tran principal {} lacks two sources", d.principal))?;
            let (a, dvar) = parse_rel(added)?;
            let (a1, b1) = parse_rel(s1)?;
            let (b2, d2) = parse_rel(s2)?;
            if a != a1 || b1 != b2 || dvar != d2 {
                return Err(format!("Tran sources do not compose: {}", d.principal));
            }
            for s in [&s1, &s2] {
                let (x, y) = parse_rel(s)?;
                if !gamma.contains(&PsfFormula::rel(x, y)) {
                    return Err(format!("Tran source {s} is missing from the antecedent"));
                }
            }
            let mut g = gamma.clone();
            g.insert(PsfFormula::rel(a, dvar));
            expect_premise(d, 0, (g, delta.clone()))?;
        }
        RuleName::Mono => {
            expect_arity(d, 1)?;
            let (added, sources) = d
                .principal
                .split_once(" from ")
                .ok_or_else(|| format!("Mono principal {} lacks sources", d.principal))?;
            let (s1, s2) = sources
                .split_once(", ")
                .ok_or_else(|| format!("Mono principal {} lacks two sources", d.principal))?;
            let (p, y) = parse_pred(added)?;
            let (a, b) = parse_rel(s1)?;
            let (p2, x) = parse_pred(s2)?;
            if p != p2 || y != b || x != a {
                return Err(format!("Mono sources do not justify {}", d.principal));
            }
            if !gamma.contains(&PsfFormula::rel(a, b)) {
                return Err(format!("Mono source {s1} is missing from the antecedent"));
            }
            if !gamma.contains(&PsfFormula::pred(p2, x)) {
                return Err(format!("Mono source {s2} is missing from the antecedent"));
            }
            let mut g = gamma.clone();
            g.insert(PsfFormula::pred(p, y));
            expect_premise(d, 0, (g, delta.clone()))?;
        }
    }
    for premise in &d.premises {
        check(premise)?;
    }
    Ok(())
}

/// Checks every node of `d` against its rule schema and the root against
/// `end` (up to duplicate members on either side).
pub fn validate_derivation(
    d: &Derivation<RuleName, PsfFormula>,
    end: &Sequent,
) -> Result<(), String> {
    if collapse(&d.conclusion) != collapse(end) {
        return Err(format!(
            "derivation concludes {} instead of {end}",
            d.conclusion
        ));
    }
    check(d)
}
