//! Propositional formulas, shielded first-order formulas, and their printers.

use std::collections::BTreeSet;
use std::fmt;

/// A first-order variable name, used both free (as a world label) and bound.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(String);

impl Variable {
    pub fn new(name: impl Into<String>) -> Self {
        Variable(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Variable {
    fn from(name: &str) -> Self {
        Variable(name.to_string())
    }
}

/// Propositional formula over named atoms, falsum, and the three connectives.
///
/// Negation is surface syntax only: `~A` parses and prints as `A -> false`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PropFormula {
    Bottom,
    Atom(String),
    And(Box<PropFormula>, Box<PropFormula>),
    Or(Box<PropFormula>, Box<PropFormula>),
    Imp(Box<PropFormula>, Box<PropFormula>),
}

impl PropFormula {
    pub fn atom(name: impl Into<String>) -> Self {
        PropFormula::Atom(name.into())
    }

    pub fn and(l: PropFormula, r: PropFormula) -> Self {
        PropFormula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: PropFormula, r: PropFormula) -> Self {
        PropFormula::Or(Box::new(l), Box::new(r))
    }

    pub fn imp(l: PropFormula, r: PropFormula) -> Self {
        PropFormula::Imp(Box::new(l), Box::new(r))
    }

    /// Negation is implication into falsum, not a connective of its own.
    #[allow(clippy::should_implement_trait)]
    pub fn neg(f: PropFormula) -> Self {
        PropFormula::imp(f, PropFormula::Bottom)
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            PropFormula::Bottom | PropFormula::Atom(_) => 1,
            PropFormula::And(l, r) | PropFormula::Or(l, r) | PropFormula::Imp(l, r) => {
                1 + l.size() + r.size()
            }
        }
    }

    /// Names of the atoms occurring in the formula.
    pub fn atom_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            PropFormula::Bottom => {}
            PropFormula::Atom(name) => {
                out.insert(name.clone());
            }
            PropFormula::And(l, r) | PropFormula::Or(l, r) | PropFormula::Imp(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }
}

// Printing precedence: -> is 1 (right associative), | is 2, & is 3, ~ is 4.
fn fmt_prop(f: &PropFormula, min_prec: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = match f {
        PropFormula::Bottom | PropFormula::Atom(_) => 5,
        PropFormula::Imp(_, r) if **r == PropFormula::Bottom => 4,
        PropFormula::And(_, _) => 3,
        PropFormula::Or(_, _) => 2,
        PropFormula::Imp(_, _) => 1,
    };
    if prec < min_prec {
        out.write_str("(")?;
        fmt_prop(f, 0, out)?;
        return out.write_str(")");
    }
    match f {
        PropFormula::Bottom => out.write_str("false"),
        PropFormula::Atom(name) => out.write_str(name),
        PropFormula::Imp(l, r) if **r == PropFormula::Bottom => {
            out.write_str("~")?;
            fmt_prop(l, 4, out)
        }
        PropFormula::And(l, r) => {
            fmt_prop(l, 3, out)?;
            out.write_str(" & ")?;
            fmt_prop(r, 4, out)
        }
        PropFormula::Or(l, r) => {
            fmt_prop(l, 2, out)?;
            out.write_str(" | ")?;
            fmt_prop(r, 3, out)
        }
        PropFormula::Imp(l, r) => {
            fmt_prop(l, 2, out)?;
            out.write_str(" -> ")?;
            fmt_prop(r, 1, out)
        }
    }
}

impl fmt::Display for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_prop(self, 0, f)
    }
}

/// Formula of the partially shielded fragment.
///
/// The fragment allows falsum, unary predicate atoms `P(x)`, conjunction and
/// disjunction of fragment formulas sharing at most one free variable, atoms
/// `R(x,y)` of the one fixed binary relation, and the shielded universal
/// `forall y. (R(x,y) & A{y}) -> B{y}`. Arbitrary quantification and
/// implication are intentionally absent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PsfFormula {
    Bottom,
    /// Unary predicate applied to a variable, written `p(x)`.
    PredAtom(String, Variable),
    And(Box<PsfFormula>, Box<PsfFormula>),
    Or(Box<PsfFormula>, Box<PsfFormula>),
    /// Atom of the fixed binary relation, written `R(x,y)`.
    RelAtom(Variable, Variable),
    /// `forall bound. (R(base,bound) & hyp) -> con`; the shield `R(base,bound)`
    /// is part of the constructor, not a separate conjunct.
    ShieldedAll {
        bound: Variable,
        base: Variable,
        hyp: Box<PsfFormula>,
        con: Box<PsfFormula>,
    },
}

impl PsfFormula {
    pub fn pred(name: impl Into<String>, var: impl Into<Variable>) -> Self {
        PsfFormula::PredAtom(name.into(), var.into())
    }

    pub fn rel(from: impl Into<Variable>, to: impl Into<Variable>) -> Self {
        PsfFormula::RelAtom(from.into(), to.into())
    }

    pub fn and(l: PsfFormula, r: PsfFormula) -> Self {
        PsfFormula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: PsfFormula, r: PsfFormula) -> Self {
        PsfFormula::Or(Box::new(l), Box::new(r))
    }

    pub fn shielded_all(
        bound: impl Into<Variable>,
        base: impl Into<Variable>,
        hyp: PsfFormula,
        con: PsfFormula,
    ) -> Self {
        PsfFormula::ShieldedAll {
            bound: bound.into(),
            base: base.into(),
            hyp: Box::new(hyp),
            con: Box::new(con),
        }
    }

    /// Free variables of the formula.
    pub fn free_vars(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut out);
        out
    }

    fn collect_free_vars(&self, out: &mut BTreeSet<Variable>) {
        match self {
            PsfFormula::Bottom => {}
            PsfFormula::PredAtom(_, v) => {
                out.insert(v.clone());
            }
            PsfFormula::RelAtom(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            PsfFormula::And(l, r) | PsfFormula::Or(l, r) => {
                l.collect_free_vars(out);
                r.collect_free_vars(out);
            }
            PsfFormula::ShieldedAll {
                bound,
                base,
                hyp,
                con,
            } => {
                out.insert(base.clone());
                let mut inner = BTreeSet::new();
                hyp.collect_free_vars(&mut inner);
                con.collect_free_vars(&mut inner);
                inner.remove(bound);
                out.extend(inner);
            }
        }
    }

    /// Every variable name occurring anywhere in the formula, bound or free.
    pub fn all_var_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_var_names(&mut out);
        out
    }

    fn collect_var_names(&self, out: &mut BTreeSet<String>) {
        match self {
            PsfFormula::Bottom => {}
            PsfFormula::PredAtom(_, v) => {
                out.insert(v.as_str().to_string());
            }
            PsfFormula::RelAtom(a, b) => {
                out.insert(a.as_str().to_string());
                out.insert(b.as_str().to_string());
            }
            PsfFormula::And(l, r) | PsfFormula::Or(l, r) => {
                l.collect_var_names(out);
                r.collect_var_names(out);
            }
            PsfFormula::ShieldedAll {
                bound,
                base,
                hyp,
                con,
            } => {
                out.insert(bound.as_str().to_string());
                out.insert(base.as_str().to_string());
                hyp.collect_var_names(out);
                con.collect_var_names(out);
            }
        }
    }

    /// Predicate names occurring in the formula (the fixed relation excluded).
    pub fn pred_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_pred_names(&mut out);
        out
    }

    fn collect_pred_names(&self, out: &mut BTreeSet<String>) {
        match self {
            PsfFormula::Bottom | PsfFormula::RelAtom(_, _) => {}
            PsfFormula::PredAtom(name, _) => {
                out.insert(name.clone());
            }
            PsfFormula::And(l, r) | PsfFormula::Or(l, r) => {
                l.collect_pred_names(out);
                r.collect_pred_names(out);
            }
            PsfFormula::ShieldedAll { hyp, con, .. } => {
                hyp.collect_pred_names(out);
                con.collect_pred_names(out);
            }
        }
    }

    /// Membership test for the fragment.
    ///
    /// Conjunction and disjunction children must themselves be fragment
    /// formulas other than relation atoms and share at most one free variable;
    /// the bodies of a shielded universal must have no free variable besides
    /// the bound one.
    pub fn is_psf(&self) -> bool {
        match self {
            PsfFormula::Bottom | PsfFormula::PredAtom(_, _) | PsfFormula::RelAtom(_, _) => true,
            PsfFormula::And(l, r) | PsfFormula::Or(l, r) => {
                is_component(l) && is_component(r) && {
                    let mut vars = l.free_vars();
                    vars.extend(r.free_vars());
                    vars.len() <= 1
                }
            }
            PsfFormula::ShieldedAll {
                bound,
                base,
                hyp,
                con,
            } => {
                bound != base
                    && is_component(hyp)
                    && is_component(con)
                    && hyp.free_vars().iter().all(|v| v == bound)
                    && con.free_vars().iter().all(|v| v == bound)
            }
        }
    }

    /// Replaces free occurrences of `from` by `to`.
    pub fn subst(&self, from: &Variable, to: &Variable) -> PsfFormula {
        match self {
            PsfFormula::Bottom => PsfFormula::Bottom,
            PsfFormula::PredAtom(name, v) => {
                let v = if v == from { to.clone() } else { v.clone() };
                PsfFormula::PredAtom(name.clone(), v)
            }
            PsfFormula::RelAtom(a, b) => {
                let a = if a == from { to.clone() } else { a.clone() };
                let b = if b == from { to.clone() } else { b.clone() };
                PsfFormula::RelAtom(a, b)
            }
            PsfFormula::And(l, r) => PsfFormula::and(l.subst(from, to), r.subst(from, to)),
            PsfFormula::Or(l, r) => PsfFormula::or(l.subst(from, to), r.subst(from, to)),
            PsfFormula::ShieldedAll {
                bound,
                base,
                hyp,
                con,
            } => {
                debug_assert!(bound != to, "substitution would capture {to}");
                let base = if base == from { to.clone() } else { base.clone() };
                if bound == from {
                    PsfFormula::ShieldedAll {
                        bound: bound.clone(),
                        base,
                        hyp: hyp.clone(),
                        con: con.clone(),
                    }
                } else {
                    PsfFormula::ShieldedAll {
                        bound: bound.clone(),
                        base,
                        hyp: Box::new(hyp.subst(from, to)),
                        con: Box::new(con.subst(from, to)),
                    }
                }
            }
        }
    }

    /// True for predicate atoms and relation atoms, the closure targets of
    /// the axiom rule.
    pub fn is_atom(&self) -> bool {
        matches!(self, PsfFormula::PredAtom(_, _) | PsfFormula::RelAtom(_, _))
    }
}

fn is_component(f: &PsfFormula) -> bool {
    !matches!(f, PsfFormula::RelAtom(_, _)) && f.is_psf()
}

// Printing precedence mirrors the propositional one: the shielded universal
// is 1, | is 2, & is 3.
fn fmt_psf(f: &PsfFormula, min_prec: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = match f {
        PsfFormula::Bottom | PsfFormula::PredAtom(_, _) | PsfFormula::RelAtom(_, _) => 5,
        PsfFormula::And(_, _) => 3,
        PsfFormula::Or(_, _) => 2,
        PsfFormula::ShieldedAll { .. } => 1,
    };
    if prec < min_prec {
        out.write_str("(")?;
        fmt_psf(f, 0, out)?;
        return out.write_str(")");
    }
    match f {
        PsfFormula::Bottom => out.write_str("false"),
        PsfFormula::PredAtom(name, v) => write!(out, "{name}({v})"),
        PsfFormula::RelAtom(a, b) => write!(out, "R({a},{b})"),
        PsfFormula::And(l, r) => {
            fmt_psf(l, 3, out)?;
            out.write_str(" & ")?;
            fmt_psf(r, 4, out)
        }
        PsfFormula::Or(l, r) => {
            fmt_psf(l, 2, out)?;
            out.write_str(" | ")?;
            fmt_psf(r, 3, out)
        }
        PsfFormula::ShieldedAll {
            bound,
            base,
            hyp,
            con,
        } => {
            write!(out, "forall {bound}. (R({base},{bound}) & ")?;
            fmt_psf(hyp, 4, out)?;
            out.write_str(") -> ")?;
            fmt_psf(con, 1, out)
        }
    }
}

impl fmt::Display for PsfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_psf(self, 0, f)
    }
}
