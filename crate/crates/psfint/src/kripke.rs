//! Finite Kripke models, forcing, and bounded countermodel search.

use crate::formula::{PropFormula, PsfFormula, Variable};
use crate::sequent::{PropSequent, Sequent};
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// A finite Kripke frame with a valuation.
///
/// Worlds are identified by index into `worlds`, which holds their printable
/// names. An intuitionistic model additionally satisfies [`KripkeModel::check_int_model`]:
/// `rel` reflexive and transitive, every atom's extension upward closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    pub worlds: Vec<String>,
    pub rel: BTreeSet<(usize, usize)>,
    pub val: BTreeMap<String, BTreeSet<usize>>,
}

/// Maps free variables of a sequent to worlds of a model.
pub type Assignment = BTreeMap<Variable, usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KripkeError {
    #[error("variable {0} is not bound by the assignment")]
    UnboundVariable(Variable),
    #[error("world index {0} is out of range")]
    UnknownWorld(usize),
}

impl KripkeModel {
    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    fn sees(&self, from: usize, to: usize) -> bool {
        self.rel.contains(&(from, to))
    }

    fn atom_true_at(&self, atom: &str, world: usize) -> bool {
        self.val.get(atom).is_some_and(|ws| ws.contains(&world))
    }

    /// Checks the intuitionistic model conditions: all indices in range,
    /// reflexivity, transitivity, and upward-closed valuations.
    pub fn check_int_model(&self) -> bool {
        let n = self.worlds.len();
        if self.rel.iter().any(|&(a, b)| a >= n || b >= n) {
            return false;
        }
        if self.val.values().any(|ws| ws.iter().any(|&w| w >= n)) {
            return false;
        }
        for w in 0..n {
            if !self.sees(w, w) {
                return false;
            }
        }
        for &(a, b) in &self.rel {
            for &(c, d) in &self.rel {
                if b == c && !self.sees(a, d) {
                    return false;
                }
            }
        }
        for ws in self.val.values() {
            for &w in ws {
                for &(a, b) in &self.rel {
                    if a == w && !ws.contains(&b) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Standard intuitionistic forcing of a propositional formula at a world.
///
/// Meaningful on models passing [`KripkeModel::check_int_model`]; the
/// evaluation itself only requires `world` to be in range.
pub fn forces_prop(m: &KripkeModel, world: usize, f: &PropFormula) -> Result<bool, KripkeError> {
    if world >= m.worlds.len() {
        return Err(KripkeError::UnknownWorld(world));
    }
    Ok(match f {
        PropFormula::Bottom => false,
        PropFormula::Atom(name) => m.atom_true_at(name, world),
        PropFormula::And(l, r) => forces_prop(m, world, l)? && forces_prop(m, world, r)?,
        PropFormula::Or(l, r) => forces_prop(m, world, l)? || forces_prop(m, world, r)?,
        PropFormula::Imp(l, r) => {
            for v in 0..m.worlds.len() {
                if m.sees(world, v) && forces_prop(m, v, l)? && !forces_prop(m, v, r)? {
                    return Ok(false);
                }
            }
            true
        }
    })
}

/// Forcing of a fragment formula under an assignment of its free variables.
///
/// The shielded universal quantifies over the relational successors of the
/// base variable's world; a relation atom is forced exactly when the pair of
/// assigned worlds is in `rel`.
pub fn forces_psf(m: &KripkeModel, a: &Assignment, f: &PsfFormula) -> Result<bool, KripkeError> {
    let lookup = |v: &Variable| -> Result<usize, KripkeError> {
        let w = *a
            .get(v)
            .ok_or_else(|| KripkeError::UnboundVariable(v.clone()))?;
        if w >= m.worlds.len() {
            return Err(KripkeError::UnknownWorld(w));
        }
        Ok(w)
    };
    Ok(match f {
        PsfFormula::Bottom => false,
        PsfFormula::PredAtom(name, v) => m.atom_true_at(name, lookup(v)?),
        PsfFormula::RelAtom(from, to) => m.sees(lookup(from)?, lookup(to)?),
        PsfFormula::And(l, r) => forces_psf(m, a, l)? && forces_psf(m, a, r)?,
        PsfFormula::Or(l, r) => forces_psf(m, a, l)? || forces_psf(m, a, r)?,
        PsfFormula::ShieldedAll {
            bound,
            base,
            hyp,
            con,
        } => {
            let from = lookup(base)?;
            for v in 0..m.worlds.len() {
                if !m.sees(from, v) {
                    continue;
                }
                let mut inner = a.clone();
                inner.insert(bound.clone(), v);
                if forces_psf(m, &inner, hyp)? && !forces_psf(m, &inner, con)? {
                    return Ok(false);
                }
            }
            true
        }
    })
}

/// True unless the model refutes the sequent under the assignment, i.e.
/// returns false exactly when every antecedent member is forced and no
/// succedent member is.
pub fn validates(m: &KripkeModel, s: &Sequent, a: &Assignment) -> Result<bool, KripkeError> {
    for member in &s.antecedent {
        if !forces_psf(m, a, member)? {
            return Ok(true);
        }
    }
    for member in &s.succedent {
        if forces_psf(m, a, member)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn rel_from_mask(n: usize, mask: u64) -> BTreeSet<(usize, usize)> {
    let mut rel = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if mask & (1 << (i * n + j)) != 0 {
                rel.insert((i, j));
            }
        }
    }
    rel
}

fn reflexive_transitive(n: usize, rel: &BTreeSet<(usize, usize)>) -> bool {
    (0..n).all(|w| rel.contains(&(w, w)))
        && rel
            .iter()
            .all(|&(a, b)| rel.iter().all(|&(c, d)| b != c || rel.contains(&(a, d))))
}

fn upward_closed(rel: &BTreeSet<(usize, usize)>, ws: &BTreeSet<usize>) -> bool {
    ws.iter()
        .all(|&w| rel.iter().all(|&(a, b)| a != w || ws.contains(&b)))
}

/// Enumerates every intuitionistic model with `1..=max_worlds` worlds over the
/// given atoms, in a fixed canonical order (world count ascending, then the
/// relation bitmask, then the valuation bitmask). The stream is duplicate-free
/// and every yielded model passes [`KripkeModel::check_int_model`].
pub fn enumerate_models(
    max_worlds: usize,
    atoms: &[String],
) -> impl Iterator<Item = KripkeModel> + use<> {
    assert!(max_worlds >= 1, "need at least one world");
    assert!(max_worlds <= 5, "enumeration is only tractable for tiny bounds");
    let mut atoms: Vec<String> = atoms.to_vec();
    atoms.sort();
    atoms.dedup();
    (1..=max_worlds).flat_map(move |n| {
        let atoms = atoms.clone();
        (0u64..1 << (n * n))
            .map(move |mask| rel_from_mask(n, mask))
            .filter(move |rel| reflexive_transitive(n, rel))
            .flat_map(move |rel| {
                let atoms = atoms.clone();
                let k = atoms.len();
                (0u64..1 << (n * k)).filter_map(move |vmask| {
                    let mut val = BTreeMap::new();
                    for (j, atom) in atoms.iter().enumerate() {
                        let ws: BTreeSet<usize> =
                            (0..n).filter(|i| vmask & (1 << (j * n + i)) != 0).collect();
                        if !upward_closed(&rel, &ws) {
                            return None;
                        }
                        val.insert(atom.clone(), ws);
                    }
                    let model = KripkeModel {
                        worlds: (0..n).map(|i| format!("w{i}")).collect(),
                        rel: rel.clone(),
                        val,
                    };
                    debug_assert!(model.check_int_model());
                    Some(model)
                })
            })
    })
}

/// Outcome of bounded semantic refutation search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemanticVerdict {
    /// A model and world where every antecedent member is forced and no
    /// succedent member is.
    Counterexample { model: KripkeModel, world: usize },
    /// No countermodel with at most this many worlds exists.
    NoCounterexample { max_worlds: usize },
}

impl SemanticVerdict {
    pub fn is_counterexample(&self) -> bool {
        matches!(self, SemanticVerdict::Counterexample { .. })
    }
}

fn counterexample_world(m: &KripkeModel, s: &PropSequent) -> Option<usize> {
    (0..m.worlds.len()).find(|&w| {
        s.antecedent
            .iter()
            .all(|f| forces_prop(m, w, f).expect("world in range"))
            && !s
                .succedent
                .iter()
                .any(|f| forces_prop(m, w, f).expect("world in range"))
    })
}

/// Searches the bounded model space for a refutation of the sequent,
/// sequentially in canonical enumeration order.
pub fn semantic_decide_seq(s: &PropSequent, max_worlds: usize) -> SemanticVerdict {
    let atoms: Vec<String> = s.atom_names().into_iter().collect();
    for model in enumerate_models(max_worlds, &atoms) {
        if let Some(world) = counterexample_world(&model, s) {
            return SemanticVerdict::Counterexample { model, world };
        }
    }
    SemanticVerdict::NoCounterexample { max_worlds }
}

/// Searches the bounded model space for a refutation of the sequent.
///
/// With the `parallel` feature the model space is partitioned across threads;
/// the returned counterexample is the first in canonical enumeration order
/// either way.
pub fn semantic_decide(s: &PropSequent, max_worlds: usize) -> SemanticVerdict {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let atoms: Vec<String> = s.atom_names().into_iter().collect();
        let models: Vec<KripkeModel> = enumerate_models(max_worlds, &atoms).collect();
        models
            .into_par_iter()
            .filter_map(|model| {
                counterexample_world(&model, s).map(|world| SemanticVerdict::Counterexample {
                    model,
                    world,
                })
            })
            .find_first(|_| true)
            .unwrap_or(SemanticVerdict::NoCounterexample { max_worlds })
    }
    #[cfg(not(feature = "parallel"))]
    {
        semantic_decide_seq(s, max_worlds)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad model JSON: {0}")]
pub struct ModelJsonError(pub String);

/// Serializes a model in the countermodel interchange shape; `falsified`
/// carries the printed sequent the model was extracted against.
pub fn model_to_json(m: &KripkeModel, falsified: &str) -> Value {
    let rel: Vec<Value> = m
        .rel
        .iter()
        .map(|&(a, b)| json!([m.worlds[a], m.worlds[b]]))
        .collect();
    let val: BTreeMap<String, Vec<String>> = m
        .val
        .iter()
        .map(|(atom, ws)| {
            (
                atom.clone(),
                ws.iter().map(|&w| m.worlds[w].clone()).collect(),
            )
        })
        .collect();
    json!({
        "worlds": m.worlds,
        "rel": rel,
        "val": val,
        "falsified": falsified,
    })
}

/// Reads a model from the countermodel interchange shape. The `falsified`
/// field is optional and ignored.
pub fn model_from_json(v: &Value) -> Result<KripkeModel, ModelJsonError> {
    let err = |msg: &str| ModelJsonError(msg.to_string());
    let obj = v.as_object().ok_or_else(|| err("expected an object"))?;
    let worlds: Vec<String> = obj
        .get("worlds")
        .and_then(Value::as_array)
        .ok_or_else(|| err("missing \"worlds\" array"))?
        .iter()
        .map(|w| w.as_str().map(str::to_string))
        .collect::<Option<_>>()
        .ok_or_else(|| err("world names must be strings"))?;
    let index_of = |name: &str| -> Result<usize, ModelJsonError> {
        worlds
            .iter()
            .position(|w| w == name)
            .ok_or_else(|| ModelJsonError(format!("unknown world \"{name}\"")))
    };
    let mut rel = BTreeSet::new();
    for pair in obj
        .get("rel")
        .and_then(Value::as_array)
        .ok_or_else(|| err("missing \"rel\" array"))?
    {
        let pair = pair.as_array().filter(|p| p.len() == 2).ok_or_else(|| {
            err("each \"rel\" entry must be a two-element array of world names")
        })?;
        let a = pair[0].as_str().ok_or_else(|| err("rel entries must name worlds"))?;
        let b = pair[1].as_str().ok_or_else(|| err("rel entries must name worlds"))?;
        rel.insert((index_of(a)?, index_of(b)?));
    }
    let mut val = BTreeMap::new();
    for (atom, ws) in obj
        .get("val")
        .and_then(Value::as_object)
        .ok_or_else(|| err("missing \"val\" object"))?
    {
        let mut set = BTreeSet::new();
        for w in ws
            .as_array()
            .ok_or_else(|| err("each valuation entry must be an array of world names"))?
        {
            let name = w.as_str().ok_or_else(|| err("valuation entries must name worlds"))?;
            set.insert(index_of(name)?);
        }
        val.insert(atom.clone(), set);
    }
    Ok(KripkeModel { worlds, rel, val })
}

impl fmt::Display for KripkeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "worlds: {}", self.worlds.join(" "))?;
        let rel = self
            .rel
            .iter()
            .map(|&(a, b)| format!("{}<={}", self.worlds[a], self.worlds[b]))
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(f, "rel: {rel}")?;
        for (atom, ws) in &self.val {
            let names = ws
                .iter()
                .map(|&w| self.worlds[w].as_str())
                .collect::<Vec<_>>()
                .join(", ");
            writeln!(f, "val {atom}: {{{names}}}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_formula, parse_sequent};
    use crate::translate::translate;

    fn two_chain_p_on_top() -> KripkeModel {
        KripkeModel {
            worlds: vec!["w0".into(), "w1".into()],
            rel: [(0, 0), (0, 1), (1, 1)].into_iter().collect(),
            val: [("p".to_string(), [1usize].into_iter().collect())]
                .into_iter()
                .collect(),
        }
    }

    #[test]
    fn int_model_check_catches_violations() {
        let mut m = two_chain_p_on_top();
        assert!(m.check_int_model());
        m.rel.remove(&(1, 1));
        assert!(!m.check_int_model());
        let mut m = two_chain_p_on_top();
        m.val.insert("p".into(), [0usize].into_iter().collect());
        assert!(!m.check_int_model(), "p true below but not above");
        let mut m = two_chain_p_on_top();
        m.rel.insert((1, 0));
        assert!(!m.check_int_model(), "cycle breaks heredity for p");
        m.val.insert("p".into(), [0usize, 1].into_iter().collect());
        assert!(
            m.check_int_model(),
            "cycle with a constant valuation is a fine preorder"
        );
    }

    #[test]
    fn excluded_middle_fails_on_the_two_chain() {
        let m = two_chain_p_on_top();
        let f = parse_formula("p | ~p").unwrap();
        assert!(!forces_prop(&m, 0, &f).unwrap());
        assert!(forces_prop(&m, 1, &f).unwrap());
        // Double negation of excluded middle still holds everywhere.
        let g = parse_formula("~~(p | ~p)").unwrap();
        assert!(forces_prop(&m, 0, &g).unwrap());
    }

    #[test]
    fn heredity_on_the_chain() {
        let m = two_chain_p_on_top();
        for text in ["p", "~p", "p -> p", "p | ~p", "~~p"] {
            let f = parse_formula(text).unwrap();
            for &(a, b) in &m.rel {
                if forces_prop(&m, a, &f).unwrap() {
                    assert!(forces_prop(&m, b, &f).unwrap(), "{text} not hereditary");
                }
            }
        }
    }

    #[test]
    fn psf_forcing_agrees_with_propositional_forcing() {
        let m = two_chain_p_on_top();
        let x = Variable::from("x");
        for text in ["p", "~p", "p | ~p", "~~(p | ~p)", "p -> p", "false"] {
            let f = parse_formula(text).unwrap();
            let t = translate(&f, &x);
            for w in 0..2 {
                let a: Assignment = [(x.clone(), w)].into_iter().collect();
                assert_eq!(
                    forces_prop(&m, w, &f).unwrap(),
                    forces_psf(&m, &a, &t).unwrap(),
                    "{text} at w{w}"
                );
            }
        }
    }

    #[test]
    fn forcing_errors_on_missing_bindings() {
        let m = two_chain_p_on_top();
        let f = PsfFormula::pred("p", "x");
        assert_eq!(
            forces_psf(&m, &Assignment::new(), &f),
            Err(KripkeError::UnboundVariable(Variable::from("x")))
        );
        let a: Assignment = [(Variable::from("x"), 7usize)].into_iter().collect();
        assert_eq!(forces_psf(&m, &a, &f), Err(KripkeError::UnknownWorld(7)));
    }

    // Counts fixed independently: preorder counts per world count are known
    // (1 labeled preorder on 1 element, 4 on 2), and monotone valuations are
    // the upward-closed subsets of each preorder, counted by hand.
    #[test]
    fn enumeration_counts_are_frozen() {
        let p = vec!["p".to_string()];
        let pq = vec!["p".to_string(), "q".to_string()];
        assert_eq!(enumerate_models(1, &[]).count(), 1);
        assert_eq!(enumerate_models(1, &p).count(), 2);
        assert_eq!(enumerate_models(2, &[]).count(), 5);
        assert_eq!(enumerate_models(2, &p).count(), 14);
        assert_eq!(enumerate_models(2, &pq).count(), 42);
        assert_eq!(enumerate_models(3, &[]).count(), 34);
    }

    #[test]
    fn enumeration_is_duplicate_free_and_valid() {
        let atoms = vec!["p".to_string()];
        let models: Vec<KripkeModel> = enumerate_models(2, &atoms).collect();
        for m in &models {
            assert!(m.check_int_model());
        }
        for i in 0..models.len() {
            for j in (i + 1)..models.len() {
                assert_ne!(models[i], models[j]);
            }
        }
    }

    #[test]
    fn semantic_decide_finds_the_excluded_middle_chain() {
        let s = parse_sequent("=> p | ~p").unwrap();
        match semantic_decide(&s, 3) {
            SemanticVerdict::Counterexample { model, world } => {
                assert!(model.check_int_model());
                let f = &s.succedent[0];
                assert!(!forces_prop(&model, world, f).unwrap());
                assert_eq!(model.worlds.len(), 2, "first counterexample is the chain");
            }
            other => panic!("expected a counterexample, got {other:?}"),
        }
    }

    #[test]
    fn semantic_decide_respects_validity() {
        for text in ["=> p -> p", "p & q => q & p", "=> ~~(p | ~p)", "p => p | q"] {
            let s = parse_sequent(text).unwrap();
            assert_eq!(
                semantic_decide(&s, 3),
                SemanticVerdict::NoCounterexample { max_worlds: 3 },
                "{text}"
            );
        }
        // Peirce's law needs three worlds; two do not suffice.
        let peirce = parse_sequent("=> ((p -> q) -> p) -> p").unwrap();
        assert!(semantic_decide(&peirce, 2).is_counterexample());
        match semantic_decide(&peirce, 3) {
            SemanticVerdict::Counterexample { model, .. } => {
                assert!(model.worlds.len() <= 3);
            }
            other => panic!("expected a counterexample, got {other:?}"),
        }
    }

    #[test]
    fn model_json_round_trips() {
        let m = two_chain_p_on_top();
        let v = model_to_json(&m, "=> p(x) | (forall y0. (R(x,y0) & p(y0)) -> false)");
        let back = model_from_json(&v).unwrap();
        assert_eq!(m, back);
        assert!(v.get("falsified").is_some());
    }

    #[test]
    fn model_json_rejects_unknown_worlds() {
        let v = json!({
            "worlds": ["w0"],
            "rel": [["w0", "w9"]],
            "val": {},
        });
        assert!(model_from_json(&v).is_err());
    }

    #[test]
    fn parallel_and_sequential_decisions_agree() {
        for text in ["=> p | ~p", "=> p -> p", "=> ((p -> q) -> p) -> p", "p, q => p & q"] {
            let s = parse_sequent(text).unwrap();
            assert_eq!(semantic_decide(&s, 3), semantic_decide_seq(&s, 3), "{text}");
        }
    }
}
