//! Derivation trees shared by the classical prover and the oracle calculus.

use crate::sequent::SequentOf;
use serde_json::{json, Value};
use std::fmt;

/// A node of a derivation: a rule application with its conclusion, the
/// principal material the rule acted on, and one subtree per premise.
///
/// `R` is the rule label type and `F` the formula type of the sequents.
#[derive(Debug, Clone)]
pub struct Derivation<R, F> {
    pub rule: R,
    pub conclusion: SequentOf<F>,
    pub principal: String,
    pub premises: Vec<Derivation<R, F>>,
}

impl<R: PartialEq, F: Ord + Clone> PartialEq for Derivation<R, F> {
    fn eq(&self, other: &Self) -> bool {
        self.rule == other.rule
            && self.conclusion == other.conclusion
            && self.principal == other.principal
            && self.premises == other.premises
    }
}

impl<R: Eq, F: Ord + Clone> Eq for Derivation<R, F> {}

impl<R, F> Derivation<R, F> {
    pub fn leaf(rule: R, conclusion: SequentOf<F>, principal: impl Into<String>) -> Self {
        Derivation {
            rule,
            conclusion,
            principal: principal.into(),
            premises: Vec::new(),
        }
    }

    /// Number of rule applications in the tree.
    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(Derivation::node_count).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.premises.iter().map(Derivation::depth).max().unwrap_or(0)
    }

    /// The tree's nodes in preorder.
    pub fn nodes(&self) -> Vec<&Derivation<R, F>> {
        let mut out = vec![self];
        for p in &self.premises {
            out.extend(p.nodes());
        }
        out
    }
}

impl<R: fmt::Display, F: fmt::Display> Derivation<R, F> {
    /// Interchange form: an object with `rule`, `conclusion` (printed),
    /// `principal`, and `premises` (an array of the same shape).
    pub fn to_json(&self) -> Value {
        json!({
            "rule": self.rule.to_string(),
            "conclusion": self.conclusion.to_string(),
            "principal": self.principal,
            "premises": self.premises.iter().map(Derivation::to_json).collect::<Vec<_>>(),
        })
    }

    /// Indented one-node-per-line rendering, premises below their conclusion.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(&mut out, 0);
        out
    }

    fn write_text(&self, out: &mut String, indent: usize) {
        out.push_str(&"  ".repeat(indent));
        out.push_str(&format!(
            "[{}] {}   ({})\n",
            self.rule, self.conclusion, self.principal
        ));
        for p in &self.premises {
            p.write_text(out, indent + 1);
        }
    }

    /// Nested `\infer` rendering for proof.sty-style trees.
    pub fn to_latex(&self) -> String {
        let mut out = String::new();
        self.write_latex(&mut out, 0);
        out
    }

    fn write_latex(&self, out: &mut String, indent: usize) {
        let pad = "  ".repeat(indent);
        let conclusion = latex_escape(&self.conclusion.to_string());
        if self.premises.is_empty() {
            out.push_str(&format!(
                "{pad}\\infer[\\mathrm{{{}}}]{{{conclusion}}}{{}}\n",
                latex_escape(&self.rule.to_string())
            ));
            return;
        }
        out.push_str(&format!(
            "{pad}\\infer[\\mathrm{{{}}}]{{{conclusion}}}{{\n",
            latex_escape(&self.rule.to_string())
        ));
        for (i, p) in self.premises.iter().enumerate() {
            if i > 0 {
                out.push_str(&format!("{pad}&\n"));
            }
            p.write_latex(out, indent + 1);
        }
        out.push_str(&format!("{pad}}}\n"));
    }
}

fn latex_escape(s: &str) -> String {
    s.replace('&', "\\land ")
        .replace('|', "\\lor ")
        .replace('~', "\\lnot ")
        .replace("=>", "\\Rightarrow ")
        .replace("->", "\\to ")
        .replace("forall", "\\forall")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::PropFormula;
    use crate::sequent::PropSequent;

    fn tiny() -> Derivation<&'static str, PropFormula> {
        let p = PropFormula::atom("p");
        let axiom = Derivation::leaf(
            "Ax",
            PropSequent {
                antecedent: vec![p.clone()],
                succedent: vec![p.clone()],
            },
            "p",
        );
        Derivation {
            rule: "RImp",
            conclusion: PropSequent {
                antecedent: vec![],
                succedent: vec![PropFormula::imp(p.clone(), p)],
            },
            principal: "p -> p".to_string(),
            premises: vec![axiom],
        }
    }

    #[test]
    fn json_shape_is_stable() {
        let d = tiny();
        let v = d.to_json();
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            "{\"conclusion\":\"=> p -> p\",\"premises\":[{\"conclusion\":\"p => p\",\
             \"premises\":[],\"principal\":\"p\",\"rule\":\"Ax\"}],\
             \"principal\":\"p -> p\",\"rule\":\"RImp\"}"
        );
    }

    #[test]
    fn counts_and_text() {
        let d = tiny();
        assert_eq!(d.node_count(), 2);
        assert_eq!(d.depth(), 2);
        let text = d.to_text();
        assert!(text.starts_with("[RImp] => p -> p"));
        assert!(text.contains("\n  [Ax] p => p"));
    }

    #[test]
    fn latex_replaces_connectives() {
        let d = tiny();
        let tex = d.to_latex();
        assert!(tex.contains("\\infer[\\mathrm{RImp}]"));
        assert!(tex.contains("\\Rightarrow "));
        assert!(tex.contains("\\to "));
    }
}
