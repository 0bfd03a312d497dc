//! Executable admissibility checks: weakening, contraction, cut, and the two
//! monotonicity lemma shapes, each phrased as "re-run the search on the
//! rule's conclusion whenever its premises prove".

use super::{prove, ProverError, SearchConfig, SearchResult};
use crate::formula::{PsfFormula, Variable};
use crate::sequent::Sequent;

/// A base sequent `Γ ⇒ Δ` with extension contexts `Γ′ ⇒ Δ′` and an optional
/// cut formula `A`.
#[derive(Debug, Clone)]
pub struct StructuralSample {
    pub base: Sequent,
    pub ext: Sequent,
    pub cut: Option<PsfFormula>,
}

/// One monotonicity instance: `a` has exactly the free variable `v`, and is
/// taken at the two related variables `x` and `y`.
#[derive(Debug, Clone)]
pub struct MonotonicitySample {
    pub a: PsfFormula,
    pub v: Variable,
    pub x: Variable,
    pub y: Variable,
    pub context: Sequent,
}

/// Tally of executed implications. `checked` counts instances whose premises
/// proved, `vacuous` those where a premise failed so nothing was implied.
#[derive(Debug, Clone, Default)]
pub struct AdmissibilityReport {
    pub checked: usize,
    pub vacuous: usize,
    pub violations: Vec<String>,
}

impl AdmissibilityReport {
    pub fn all_hold(&self) -> bool {
        self.violations.is_empty()
    }

    /// Runs one implication: when every premise proves, the conclusion must.
    fn implication(
        &mut self,
        label: &str,
        premises: &[&Sequent],
        conclusion: &Sequent,
        cfg: &SearchConfig,
    ) {
        for p in premises {
            match provable(p, cfg) {
                Ok(true) => {}
                Ok(false) => {
                    self.vacuous += 1;
                    return;
                }
                Err(e) => {
                    self.violations.push(format!("{label}: premise {p}: {e}"));
                    return;
                }
            }
        }
        self.checked += 1;
        match provable(conclusion, cfg) {
            Ok(true) => {}
            Ok(false) => self.violations.push(format!(
                "{label}: premises prove but the conclusion {conclusion} does not"
            )),
            Err(e) => self
                .violations
                .push(format!("{label}: conclusion {conclusion}: {e}")),
        }
    }
}

fn provable(s: &Sequent, cfg: &SearchConfig) -> Result<bool, String> {
    match prove(s, cfg) {
        Ok(SearchResult::Proof(_)) => Ok(true),
        Ok(SearchResult::Refuted { .. }) => Ok(false),
        Ok(SearchResult::DepthExceeded) => Err(format!("depth bound hit on {s}")),
        Err(e @ ProverError::NotPsf(_)) => Err(e.to_string()),
        Err(e @ ProverError::CountermodelDefect(_)) => Err(e.to_string()),
    }
}

fn joined(ant: &[&[PsfFormula]], suc: &[&[PsfFormula]]) -> Sequent {
    Sequent {
        antecedent: ant.iter().flat_map(|part| part.iter().cloned()).collect(),
        succedent: suc.iter().flat_map(|part| part.iter().cloned()).collect(),
    }
}

/// Weakening, contraction, and cut over the given samples. For a sample with
/// base `Γ ⇒ Δ`, extension `Γ′ ⇒ Δ′`, and cut formula `A`:
/// weakening requires `Γ,Γ′ ⇒ Δ′,Δ` provable when `Γ ⇒ Δ` is; contraction
/// requires it when `Γ,Γ′,Γ′ ⇒ Δ′,Δ′,Δ` is; cut requires it when both
/// `Γ ⇒ Δ,A` and `A,Γ′ ⇒ Δ′` are.
pub fn check_structural_admissibility(
    samples: &[StructuralSample],
    cfg: &SearchConfig,
) -> AdmissibilityReport {
    let mut report = AdmissibilityReport::default();
    for sample in samples {
        let StructuralSample { base, ext, cut } = sample;
        let combined = joined(
            &[&base.antecedent, &ext.antecedent],
            &[&ext.succedent, &base.succedent],
        );
        report.implication(&format!("weakening of {base}"), &[base], &combined, cfg);
        let doubled = joined(
            &[&base.antecedent, &ext.antecedent, &ext.antecedent],
            &[&ext.succedent, &ext.succedent, &base.succedent],
        );
        report.implication(
            &format!("contraction of {doubled}"),
            &[&doubled],
            &combined,
            cfg,
        );
        if let Some(a) = cut {
            let cut_formula = std::slice::from_ref(a);
            let left = joined(&[&base.antecedent], &[&base.succedent, cut_formula]);
            let right = joined(&[cut_formula, &ext.antecedent], &[&ext.succedent]);
            report.implication(
                &format!("cut on {a} between {left} and {right}"),
                &[&left, &right],
                &combined,
                cfg,
            );
        }
    }
    report
}

/// The two monotonicity lemma shapes. Left: if `R(x,y), A{x}, A{y}, Γ ⇒ Δ`
/// proves then so does `R(x,y), A{x}, Γ ⇒ Δ`. Right: if
/// `R(x,y), Γ ⇒ Δ, A{x}, A{y}` proves then so does `R(x,y), Γ ⇒ Δ, A{y}`.
pub fn check_monotonicity_lemmas(
    samples: &[MonotonicitySample],
    cfg: &SearchConfig,
) -> AdmissibilityReport {
    let mut report = AdmissibilityReport::default();
    for sample in samples {
        let MonotonicitySample { a, v, x, y, context } = sample;
        let fv = a.free_vars();
        if a.is_atom() || fv.len() != 1 || !fv.contains(v) {
            report.violations.push(format!(
                "malformed sample: {a} is not a compound formula in exactly {v}"
            ));
            continue;
        }
        let rel = [PsfFormula::rel(x.clone(), y.clone())];
        let ax = [a.subst(v, x)];
        let ay = [a.subst(v, y)];
        let left_premise = joined(
            &[&rel, &ax, &ay, &context.antecedent],
            &[&context.succedent],
        );
        let left_conclusion = joined(&[&rel, &ax, &context.antecedent], &[&context.succedent]);
        report.implication(
            &format!("left monotonicity of {a} at {x},{y}"),
            &[&left_premise],
            &left_conclusion,
            cfg,
        );
        let right_premise = joined(
            &[&rel, &context.antecedent],
            &[&context.succedent, &ax, &ay],
        );
        let right_conclusion = joined(&[&rel, &context.antecedent], &[&context.succedent, &ay]);
        report.implication(
            &format!("right monotonicity of {a} at {x},{y}"),
            &[&right_premise],
            &right_conclusion,
            cfg,
        );
    }
    report
}
