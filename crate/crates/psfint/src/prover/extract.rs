//! Countermodel read-off from an open saturated branch.

use super::search::{blocker_map, Branch};
use super::{ProverError, SearchConfig};
use crate::formula::PsfFormula;
use crate::kripke::{validates, Assignment, KripkeModel};
use crate::sequent::Sequent;
use std::collections::{BTreeMap, BTreeSet};

/// Turns an open branch into a finite countermodel: one world per branch
/// variable, accessibility from the branch relation atoms plus a back-edge
/// from each blocked variable to its blocker, then closed under exactly the
/// frame conditions whose rules saturated the branch. The result is
/// re-checked against the root sequent before being returned.
pub(super) fn extract(
    branch: &Branch,
    root: &Sequent,
    cfg: &SearchConfig,
) -> Result<(KripkeModel, Assignment), ProverError> {
    if branch.vars.is_empty() {
        // A variable-free branch constrains no world; a single reflexive
        // point falsifies it.
        let model = KripkeModel {
            worlds: vec!["w0".to_string()],
            rel: BTreeSet::from([(0, 0)]),
            val: BTreeMap::new(),
        };
        return self_check(model, Assignment::new(), root, cfg);
    }

    let n = branch.vars.len();
    let index: BTreeMap<_, _> = branch
        .vars
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), i))
        .collect();

    let mut rel: BTreeSet<(usize, usize)> = BTreeSet::new();
    if cfg.enable_refl {
        rel.extend((0..n).map(|i| (i, i)));
    }
    for f in &branch.gamma {
        if let PsfFormula::RelAtom(a, b) = f {
            rel.insert((index[a], index[b]));
        }
    }
    for (i, blocker) in blocker_map(branch).iter().enumerate() {
        if let Some(j) = blocker {
            rel.insert((i, *j));
        }
    }
    if cfg.enable_tran {
        loop {
            let pairs: Vec<(usize, usize)> = rel.iter().copied().collect();
            let mut grew = false;
            for &(a, b) in &pairs {
                for &(c, d) in &pairs {
                    if b == c && rel.insert((a, d)) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
    }

    let mut val: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
    for f in &branch.gamma {
        if let PsfFormula::PredAtom(p, v) = f {
            val.entry(p.clone()).or_default().insert(index[v]);
        }
    }
    // Back-edges can introduce successors the branch never saturated over, so
    // close the valuation upward under the final accessibility.
    if cfg.enable_mono {
        for worlds in val.values_mut() {
            let mut grew = true;
            while grew {
                grew = false;
                for &(a, b) in &rel {
                    if worlds.contains(&a) && worlds.insert(b) {
                        grew = true;
                    }
                }
            }
        }
    }

    let model = KripkeModel {
        worlds: (0..n).map(|i| format!("w{i}")).collect(),
        rel,
        val,
    };
    let assignment: Assignment = root
        .free_vars()
        .into_iter()
        .map(|v| {
            let i = index[&v];
            (v, i)
        })
        .collect();
    self_check(model, assignment, root, cfg)
}

fn self_check(
    model: KripkeModel,
    assignment: Assignment,
    root: &Sequent,
    cfg: &SearchConfig,
) -> Result<(KripkeModel, Assignment), ProverError> {
    // With a frame rule disabled the branch is not saturated for the matching
    // frame condition, so only a fully saturated search promises an
    // intuitionistic model; falsification is promised either way.
    let full = cfg.enable_refl && cfg.enable_tran && cfg.enable_mono;
    if full && !model.check_int_model() {
        return Err(ProverError::CountermodelDefect(format!(
            "extracted model violates the frame conditions while refuting {root}"
        )));
    }
    match validates(&model, root, &assignment) {
        Ok(false) => Ok((model, assignment)),
        Ok(true) => Err(ProverError::CountermodelDefect(format!(
            "extracted model fails to falsify {root}"
        ))),
        Err(e) => Err(ProverError::CountermodelDefect(format!(
            "extracted model cannot be evaluated on {root}: {e}"
        ))),
    }
}
