//! Translation of propositional formulas into the shielded fragment.
//!
//! An atom becomes a unary predicate applied to the translation variable, and
//! `A -> B` becomes `forall y. (R(x,y) & A{y}) -> B{y}` with both subformulas
//! translated at the fresh bound variable.

use crate::formula::{PropFormula, PsfFormula, Variable};
use crate::sequent::{PropSequent, Sequent};
use std::collections::BTreeSet;

/// Counter-based supply of fresh variable names.
///
/// Produces `prefix0`, `prefix1`, ... skipping any reserved name, so a
/// generated name never collides with one already in use.
#[derive(Debug, Clone)]
pub struct FreshVars {
    prefix: String,
    counter: usize,
    reserved: BTreeSet<String>,
}

impl FreshVars {
    pub fn new(prefix: impl Into<String>, reserved: BTreeSet<String>) -> Self {
        FreshVars {
            prefix: prefix.into(),
            counter: 0,
            reserved,
        }
    }

    pub fn fresh(&mut self) -> Variable {
        loop {
            let name = format!("{}{}", self.prefix, self.counter);
            self.counter += 1;
            if !self.reserved.contains(&name) {
                return Variable::new(name);
            }
        }
    }
}

fn tr(f: &PropFormula, at: &Variable, supply: &mut FreshVars) -> PsfFormula {
    match f {
        PropFormula::Bottom => PsfFormula::Bottom,
        PropFormula::Atom(name) => PsfFormula::PredAtom(name.clone(), at.clone()),
        PropFormula::And(l, r) => PsfFormula::and(tr(l, at, supply), tr(r, at, supply)),
        PropFormula::Or(l, r) => PsfFormula::or(tr(l, at, supply), tr(r, at, supply)),
        PropFormula::Imp(l, r) => {
            let bound = supply.fresh();
            let hyp = tr(l, &bound, supply);
            let con = tr(r, &bound, supply);
            PsfFormula::ShieldedAll {
                bound,
                base: at.clone(),
                hyp: Box::new(hyp),
                con: Box::new(con),
            }
        }
    }
}

fn supply_for(at: &Variable) -> FreshVars {
    let mut reserved = BTreeSet::new();
    reserved.insert(at.as_str().to_string());
    FreshVars::new("y", reserved)
}

/// Translates one formula at the given variable. Bound variables are named
/// `y0, y1, ...` in traversal order, so equal inputs yield equal outputs.
pub fn translate(f: &PropFormula, at: &Variable) -> PsfFormula {
    let mut supply = supply_for(at);
    tr(f, at, &mut supply)
}

/// Translates every member of a sequent at the same variable, threading one
/// freshness supply through the antecedent and then the succedent.
pub fn translate_sequent(s: &PropSequent, at: &Variable) -> Sequent {
    let mut supply = supply_for(at);
    let antecedent = s
        .antecedent
        .iter()
        .map(|f| tr(f, at, &mut supply))
        .collect();
    let succedent = s
        .succedent
        .iter()
        .map(|f| tr(f, at, &mut supply))
        .collect();
    Sequent::new(antecedent, succedent)
}
