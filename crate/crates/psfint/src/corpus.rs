//! Sequent corpora and the cross-prover equivalence harness.
//!
//! The exhaustive corpus pairs every formula up to a size bound (plus the
//! empty side) against every other, one formula per side. The harness runs
//! both provers on each instance and reports every disagreement with the
//! artifacts from both sides.

use crate::formula::{PropFormula, PsfFormula, Variable};
use crate::oracle::{mg3ip_prove, OracleResult};
use crate::prover::{
    prove_prop, MonotonicitySample, SearchConfig, SearchResult, StructuralSample,
};
use crate::sequent::PropSequent;
use crate::translate::{translate, translate_sequent};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// All propositional formulas with at most `max_size` nodes over the given
/// atoms and falsum, grouped by size, smaller first. Binary connectives make
/// every size odd.
pub fn exhaustive_formulas(max_size: usize, atoms: &[&str]) -> Vec<PropFormula> {
    let mut by_size: Vec<Vec<PropFormula>> = vec![Vec::new(); max_size + 1];
    if max_size >= 1 {
        by_size[1] = atoms.iter().map(|a| PropFormula::atom(*a)).collect();
        by_size[1].push(PropFormula::Bottom);
    }
    for size in 2..=max_size {
        let mut here = Vec::new();
        for left in 1..size - 1 {
            let right = size - 1 - left;
            for l in &by_size[left] {
                for r in &by_size[right] {
                    here.push(PropFormula::and(l.clone(), r.clone()));
                    here.push(PropFormula::or(l.clone(), r.clone()));
                    here.push(PropFormula::imp(l.clone(), r.clone()));
                }
            }
        }
        by_size[size] = here;
    }
    by_size.into_iter().flatten().collect()
}

/// Every sequent with at most one of the given formulas on each side,
/// including empty sides; `(n+1)^2` sequents for `n` formulas, the empty
/// sequent first.
pub fn one_per_side(formulas: &[PropFormula]) -> Vec<PropSequent> {
    let mut sides: Vec<Vec<PropFormula>> = Vec::with_capacity(formulas.len() + 1);
    sides.push(Vec::new());
    sides.extend(formulas.iter().map(|f| vec![f.clone()]));
    let mut out = Vec::with_capacity(sides.len() * sides.len());
    for ant in &sides {
        for suc in &sides {
            out.push(PropSequent::new(ant.clone(), suc.clone()));
        }
    }
    out
}

/// One instance on which the two provers disagreed, with the artifact each
/// side produced.
#[derive(Debug, Clone)]
pub struct Disagreement {
    pub index: usize,
    pub sequent: PropSequent,
    pub psf: SearchResult,
    pub oracle: OracleResult,
}

/// An instance the fragment prover could not settle, with the reason.
#[derive(Debug, Clone)]
pub struct Unresolved {
    pub index: usize,
    pub sequent: PropSequent,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct EquivalenceReport {
    pub total: usize,
    pub agreements: usize,
    pub disagreements: Vec<Disagreement>,
    pub unresolved: Vec<Unresolved>,
}

impl EquivalenceReport {
    /// True when every instance was settled and the provers always agreed.
    pub fn clean(&self) -> bool {
        self.disagreements.is_empty() && self.unresolved.is_empty()
    }
}

enum Comparison {
    Agree,
    Disagree(Disagreement),
    Unsettled(Unresolved),
}

fn compare_one(index: usize, s: &PropSequent, cfg: &SearchConfig) -> Comparison {
    let oracle = mg3ip_prove(s);
    match prove_prop(s, &Variable::from("x"), cfg) {
        Ok(SearchResult::DepthExceeded) => Comparison::Unsettled(Unresolved {
            index,
            sequent: s.clone(),
            reason: "depth bound hit".to_string(),
        }),
        Ok(psf) => {
            if psf.is_proof() == oracle.is_provable() {
                Comparison::Agree
            } else {
                Comparison::Disagree(Disagreement {
                    index,
                    sequent: s.clone(),
                    psf,
                    oracle,
                })
            }
        }
        Err(e) => Comparison::Unsettled(Unresolved {
            index,
            sequent: s.clone(),
            reason: e.to_string(),
        }),
    }
}

fn assemble(comparisons: Vec<Comparison>) -> EquivalenceReport {
    let mut report = EquivalenceReport {
        total: comparisons.len(),
        ..EquivalenceReport::default()
    };
    for c in comparisons {
        match c {
            Comparison::Agree => report.agreements += 1,
            Comparison::Disagree(d) => report.disagreements.push(d),
            Comparison::Unsettled(u) => report.unresolved.push(u),
        }
    }
    report
}

/// Runs both provers over the corpus sequentially, reporting in input order.
pub fn equivalence_check_seq(corpus: &[PropSequent], cfg: &SearchConfig) -> EquivalenceReport {
    assemble(
        corpus
            .iter()
            .enumerate()
            .map(|(i, s)| compare_one(i, s, cfg))
            .collect(),
    )
}

/// Runs both provers over the corpus, instances in parallel, reporting in
/// input order.
#[cfg(feature = "parallel")]
pub fn equivalence_check(corpus: &[PropSequent], cfg: &SearchConfig) -> EquivalenceReport {
    use rayon::prelude::*;
    assemble(
        corpus
            .par_iter()
            .enumerate()
            .map(|(i, s)| compare_one(i, s, cfg))
            .collect(),
    )
}

#[cfg(not(feature = "parallel"))]
pub fn equivalence_check(corpus: &[PropSequent], cfg: &SearchConfig) -> EquivalenceReport {
    equivalence_check_seq(corpus, cfg)
}

fn random_formula(rng: &mut ChaCha8Rng, budget: usize, atoms: &[&str]) -> PropFormula {
    if budget == 0 || rng.gen_range(0..4) == 0 {
        return if rng.gen_range(0..8) == 0 {
            PropFormula::Bottom
        } else {
            PropFormula::atom(atoms[rng.gen_range(0..atoms.len())])
        };
    }
    let l = random_formula(rng, budget - 1, atoms);
    let r = random_formula(rng, budget - 1, atoms);
    match rng.gen_range(0..4) {
        0 => PropFormula::and(l, r),
        1 => PropFormula::or(l, r),
        2 => PropFormula::imp(l, r),
        _ => PropFormula::neg(l),
    }
}

fn random_compound(rng: &mut ChaCha8Rng, atoms: &[&str]) -> PropFormula {
    let l = random_formula(rng, 2, atoms);
    let r = random_formula(rng, 2, atoms);
    match rng.gen_range(0..4) {
        0 => PropFormula::and(l, r),
        1 => PropFormula::or(l, r),
        2 => PropFormula::imp(l, r),
        _ => PropFormula::neg(l),
    }
}

/// A provable base sequent: a schema that holds in every interpretation,
/// instantiated with random formulas.
fn provable_base(rng: &mut ChaCha8Rng, atoms: &[&str]) -> PropSequent {
    let a = random_formula(rng, 2, atoms);
    let b = random_formula(rng, 2, atoms);
    match rng.gen_range(0..9) {
        0 => PropSequent::new(vec![a.clone()], vec![a]),
        1 => PropSequent::new(
            vec![PropFormula::and(a.clone(), b.clone())],
            vec![PropFormula::and(b, a)],
        ),
        2 => PropSequent::new(vec![a.clone()], vec![PropFormula::or(a, b)]),
        3 => PropSequent::new(vec![PropFormula::and(a.clone(), b)], vec![a]),
        4 => PropSequent::new(vec![a.clone(), b.clone()], vec![PropFormula::and(a, b)]),
        5 => PropSequent::new(vec![PropFormula::imp(a.clone(), b.clone()), a], vec![b]),
        6 => PropSequent::new(vec![], vec![PropFormula::imp(a.clone(), a)]),
        7 => PropSequent::new(vec![PropFormula::Bottom], vec![a]),
        _ => PropSequent::new(vec![a.clone()], vec![PropFormula::imp(b, a)]),
    }
}

/// Seeded structural-admissibility samples: each base is provable by
/// construction, extensions are random, and the cut premises are arranged to
/// prove so no implication is vacuous.
pub fn structural_samples(count: usize, seed: u64) -> Vec<StructuralSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atoms = ["p", "q", "r"];
    let x = Variable::from("x");
    (0..count)
        .map(|_| {
            let base = provable_base(&mut rng, &atoms);
            let cut = random_formula(&mut rng, 2, &atoms);
            let mut ext_ant: Vec<PropFormula> = Vec::new();
            let mut ext_suc: Vec<PropFormula> = Vec::new();
            for _ in 0..rng.gen_range(0..3) {
                ext_ant.push(random_formula(&mut rng, 2, &atoms));
            }
            for _ in 0..rng.gen_range(0..3) {
                ext_suc.push(random_formula(&mut rng, 2, &atoms));
            }
            // Make the right cut premise `A, Γ′ ⇒ Δ′` provable: either Δ′
            // gets A itself, or Γ′ gets A → B with B in Δ′.
            if rng.gen_bool(0.5) {
                ext_suc.push(cut.clone());
            } else {
                let b = random_formula(&mut rng, 1, &atoms);
                ext_ant.push(PropFormula::imp(cut.clone(), b.clone()));
                ext_suc.push(b);
            }
            StructuralSample {
                base: translate_sequent(&base, &x),
                ext: translate_sequent(&PropSequent::new(ext_ant, ext_suc), &x),
                cut: Some(translate(&cut, &x)),
            }
        })
        .collect()
}

/// Seeded monotonicity instances: `a` is a compound formula in one variable,
/// and the context makes both lemma shapes' premises provable so neither
/// check is vacuous.
pub fn monotonicity_samples(count: usize, seed: u64) -> Vec<MonotonicitySample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atoms = ["p", "q"];
    let v = Variable::from("v");
    let x = Variable::from("x");
    let y = Variable::from("y");
    (0..count)
        .map(|_| {
            let a: PsfFormula = loop {
                let candidate = translate(&random_compound(&mut rng, &atoms), &v);
                let fv = candidate.free_vars();
                if fv.len() == 1 && fv.contains(&v) {
                    break candidate;
                }
            };
            let mut ant = vec![a.subst(&v, &x)];
            let mut suc = vec![a.subst(&v, &y)];
            for _ in 0..rng.gen_range(0..2) {
                ant.push(translate(&random_formula(&mut rng, 1, &atoms), &x));
            }
            for _ in 0..rng.gen_range(0..2) {
                suc.push(translate(&random_formula(&mut rng, 1, &atoms), &y));
            }
            MonotonicitySample {
                a,
                v: v.clone(),
                x: x.clone(),
                y: y.clone(),
                context: crate::sequent::Sequent::new(ant, suc),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_sequent;
    use crate::prover::{check_monotonicity_lemmas, check_structural_admissibility, prove};

    #[test]
    fn formula_counts_are_fixed() {
        assert_eq!(exhaustive_formulas(1, &["p", "q"]).len(), 3);
        assert_eq!(exhaustive_formulas(3, &["p", "q"]).len(), 30);
        assert_eq!(exhaustive_formulas(5, &["p", "q"]).len(), 516);
        assert_eq!(exhaustive_formulas(5, &["p"]).len(), 2 + 12 + 144);
    }

    #[test]
    fn formulas_are_distinct_and_within_size() {
        let all = exhaustive_formulas(5, &["p", "q"]);
        let set: std::collections::BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), all.len());
        assert!(all.iter().all(|f| f.size() <= 5));
    }

    #[test]
    fn one_per_side_includes_empty_sides() {
        let formulas = exhaustive_formulas(1, &["p"]);
        let corpus = one_per_side(&formulas);
        assert_eq!(corpus.len(), 9);
        assert!(corpus[0].is_empty());
        assert!(corpus.iter().all(|s| s.antecedent.len() <= 1));
        assert!(corpus.iter().all(|s| s.succedent.len() <= 1));
    }

    #[test]
    fn tiny_corpora_agree() {
        let corpus = [
            parse_sequent("=> p -> p").unwrap(),
            parse_sequent("=> p | ~p").unwrap(),
            parse_sequent("p & q => q & p").unwrap(),
            parse_sequent("=> ((p -> q) -> p) -> p").unwrap(),
        ];
        let report = equivalence_check(&corpus, &SearchConfig::default());
        assert_eq!(report.total, 4);
        assert_eq!(report.agreements, 4);
        assert!(report.clean());
    }

    #[test]
    fn parallel_and_sequential_reports_match() {
        let corpus = one_per_side(&exhaustive_formulas(3, &["p"]));
        let cfg = SearchConfig::default();
        let par = equivalence_check(&corpus, &cfg);
        let seq = equivalence_check_seq(&corpus, &cfg);
        assert_eq!(par.total, seq.total);
        assert_eq!(par.agreements, seq.agreements);
        assert!(par.clean() && seq.clean());
    }

    #[test]
    fn structural_samples_are_provable_and_reproducible() {
        let samples = structural_samples(12, 41);
        for s in &samples {
            assert!(
                prove(&s.base, &SearchConfig::default()).unwrap().is_proof(),
                "base {} must be provable",
                s.base
            );
        }
        let again = structural_samples(12, 41);
        assert_eq!(format!("{samples:?}"), format!("{again:?}"));
        let report = check_structural_admissibility(&samples, &SearchConfig::default());
        assert!(report.all_hold(), "{:?}", report.violations);
        assert_eq!(report.vacuous, 0, "every premise is provable by design");
    }

    #[test]
    fn monotonicity_samples_are_compound_and_nonvacuous() {
        let samples = monotonicity_samples(8, 41);
        for s in &samples {
            assert!(!s.a.is_atom());
            assert_eq!(s.a.free_vars(), [s.v.clone()].into_iter().collect());
        }
        let report = check_monotonicity_lemmas(&samples, &SearchConfig::default());
        assert!(report.all_hold(), "{:?}", report.violations);
        assert_eq!(report.vacuous, 0);
        assert_eq!(report.checked, 16, "both shapes ran on every sample");
    }
}
