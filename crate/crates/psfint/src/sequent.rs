//! Two-sided sequents with multiset semantics.

use crate::formula::{PropFormula, PsfFormula, Variable};
use std::collections::BTreeSet;
use std::fmt;

/// A sequent `antecedent => succedent` over formulas of type `F`.
///
/// Sides are multisets: member order is irrelevant for equality but
/// multiplicity counts.
#[derive(Debug, Clone)]
pub struct SequentOf<F> {
    pub antecedent: Vec<F>,
    pub succedent: Vec<F>,
}

pub type Sequent = SequentOf<PsfFormula>;
pub type PropSequent = SequentOf<PropFormula>;

impl<F> SequentOf<F> {
    pub fn new(antecedent: Vec<F>, succedent: Vec<F>) -> Self {
        SequentOf {
            antecedent,
            succedent,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.antecedent.is_empty() && self.succedent.is_empty()
    }
}

impl<F: Ord + Clone> PartialEq for SequentOf<F> {
    fn eq(&self, other: &Self) -> bool {
        fn sorted<F: Ord + Clone>(side: &[F]) -> Vec<F> {
            let mut v = side.to_vec();
            v.sort();
            v
        }
        sorted(&self.antecedent) == sorted(&other.antecedent)
            && sorted(&self.succedent) == sorted(&other.succedent)
    }
}

impl<F: Ord + Clone> Eq for SequentOf<F> {}

impl<F: fmt::Display> fmt::Display for SequentOf<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |side: &[F]| {
            side.iter()
                .map(|m| m.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        match (self.antecedent.is_empty(), self.succedent.is_empty()) {
            (true, true) => f.write_str("=>"),
            (true, false) => write!(f, "=> {}", join(&self.succedent)),
            (false, true) => write!(f, "{} =>", join(&self.antecedent)),
            (false, false) => write!(f, "{} => {}", join(&self.antecedent), join(&self.succedent)),
        }
    }
}

impl Sequent {
    /// Free variables of all members, in first-occurrence order (antecedent
    /// before succedent, each formula scanned left to right).
    pub fn free_vars_ordered(&self) -> Vec<Variable> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for member in self.antecedent.iter().chain(self.succedent.iter()) {
            collect_ordered(member, &mut seen, &mut out);
        }
        out
    }

    /// Union of the members' free variables.
    pub fn free_vars(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        for member in self.antecedent.iter().chain(self.succedent.iter()) {
            out.extend(member.free_vars());
        }
        out
    }

    /// True when every member is in the fragment.
    pub fn is_psf(&self) -> bool {
        self.antecedent
            .iter()
            .chain(self.succedent.iter())
            .all(PsfFormula::is_psf)
    }

    /// Every variable name occurring in any member, bound or free.
    pub fn all_var_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for member in self.antecedent.iter().chain(self.succedent.iter()) {
            out.extend(member.all_var_names());
        }
        out
    }

    /// Predicate names occurring in any member.
    pub fn pred_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for member in self.antecedent.iter().chain(self.succedent.iter()) {
            out.extend(member.pred_names());
        }
        out
    }
}

fn collect_ordered(f: &PsfFormula, seen: &mut BTreeSet<Variable>, out: &mut Vec<Variable>) {
    let push = |v: &Variable, seen: &mut BTreeSet<Variable>, out: &mut Vec<Variable>| {
        if seen.insert(v.clone()) {
            out.push(v.clone());
        }
    };
    match f {
        PsfFormula::Bottom => {}
        PsfFormula::PredAtom(_, v) => push(v, seen, out),
        PsfFormula::RelAtom(a, b) => {
            push(a, seen, out);
            push(b, seen, out);
        }
        PsfFormula::And(l, r) | PsfFormula::Or(l, r) => {
            collect_ordered(l, seen, out);
            collect_ordered(r, seen, out);
        }
        PsfFormula::ShieldedAll { base, .. } => {
            // The shield's bodies only mention the bound variable, so the
            // base is the lone free variable below this node.
            push(base, seen, out);
        }
    }
}

impl PropSequent {
    /// Names of atoms occurring on either side.
    pub fn atom_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for member in self.antecedent.iter().chain(self.succedent.iter()) {
            out.extend(member.atom_names());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::PropFormula;

    #[test]
    fn equality_ignores_order_but_not_multiplicity() {
        let p = PropFormula::atom("p");
        let q = PropFormula::atom("q");
        let a = PropSequent::new(vec![p.clone(), q.clone()], vec![]);
        let b = PropSequent::new(vec![q.clone(), p.clone()], vec![]);
        assert_eq!(a, b);
        let c = PropSequent::new(vec![p.clone(), p.clone(), q.clone()], vec![]);
        assert_ne!(a, c);
    }

    #[test]
    fn display_handles_empty_sides() {
        let p = PropFormula::atom("p");
        assert_eq!(PropSequent::new(vec![], vec![]).to_string(), "=>");
        assert_eq!(
            PropSequent::new(vec![], vec![p.clone()]).to_string(),
            "=> p"
        );
        assert_eq!(
            PropSequent::new(vec![p.clone()], vec![]).to_string(),
            "p =>"
        );
        assert_eq!(
            PropSequent::new(vec![p.clone()], vec![p.clone()]).to_string(),
            "p => p"
        );
    }

    #[test]
    fn ordered_free_vars_follow_first_occurrence() {
        let s = Sequent::new(
            vec![
                PsfFormula::rel("x", "y"),
                PsfFormula::pred("p", "x"),
            ],
            vec![PsfFormula::pred("q", "z")],
        );
        let names: Vec<String> = s
            .free_vars_ordered()
            .iter()
            .map(|v| v.as_str().to_string())
            .collect();
        assert_eq!(names, vec!["x", "y", "z"]);
    }
}
