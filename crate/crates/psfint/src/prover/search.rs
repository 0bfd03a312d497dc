//! Branch state and the expansion loop of the backward search.

use super::{RuleName, SearchConfig};
use crate::derivation::Derivation;
use crate::formula::{PsfFormula, Variable};
use crate::sequent::Sequent;
use crate::translate::FreshVars;
use std::collections::BTreeSet;

/// One frame-rule application waiting to happen: the atom it would add and
/// the principal description naming its source atoms.
pub(super) struct SaturationStep {
    pub rule: RuleName,
    pub principal: String,
    pub atom: PsfFormula,
}

/// Frame-rule applications available on the given atom set, in a fixed order
/// (refl by variable, then tran, then mono, each over sorted source atoms).
/// Atoms already present are not offered again.
pub(super) fn saturation_candidates(
    atoms: &BTreeSet<PsfFormula>,
    vars: &[Variable],
    cfg: &SearchConfig,
) -> Vec<SaturationStep> {
    let mut out = Vec::new();
    let rels: Vec<(&Variable, &Variable)> = atoms
        .iter()
        .filter_map(|f| match f {
            PsfFormula::RelAtom(a, b) => Some((a, b)),
            _ => None,
        })
        .collect();
    let preds: Vec<(&String, &Variable)> = atoms
        .iter()
        .filter_map(|f| match f {
            PsfFormula::PredAtom(p, v) => Some((p, v)),
            _ => None,
        })
        .collect();
    if cfg.enable_refl {
        for v in vars {
            let atom = PsfFormula::rel(v.clone(), v.clone());
            if !atoms.contains(&atom) {
                out.push(SaturationStep {
                    rule: RuleName::Refl,
                    principal: format!("R({v},{v})"),
                    atom,
                });
            }
        }
    }
    if cfg.enable_tran {
        for &(a, b) in &rels {
            for &(c, d) in &rels {
                if b != c {
                    continue;
                }
                let atom = PsfFormula::rel(a.clone(), d.clone());
                if !atoms.contains(&atom) {
                    out.push(SaturationStep {
                        rule: RuleName::Tran,
                        principal: format!("R({a},{d}) from R({a},{b}), R({c},{d})"),
                        atom,
                    });
                }
            }
        }
    }
    if cfg.enable_mono {
        for &(p, x) in &preds {
            for &(a, b) in &rels {
                if a != x {
                    continue;
                }
                let atom = PsfFormula::pred(p.clone(), b.clone());
                if !atoms.contains(&atom) {
                    out.push(SaturationStep {
                        rule: RuleName::Mono,
                        principal: format!("{p}({b}) from R({a},{b}), {p}({a})"),
                        atom,
                    });
                }
            }
        }
    }
    out
}

/// State of one search branch. `gamma`/`delta` are the live sides under set
/// semantics; the `_hist` sets also keep everything a rule has consumed, which
/// the blocking profiles and instantiation bookkeeping are read from.
#[derive(Debug, Clone)]
pub(super) struct Branch {
    pub gamma: BTreeSet<PsfFormula>,
    pub delta: BTreeSet<PsfFormula>,
    pub gamma_hist: BTreeSet<PsfFormula>,
    pub delta_hist: BTreeSet<PsfFormula>,
    /// Every variable of the branch, creation order; input variables first.
    pub vars: Vec<Variable>,
    /// Canonical forms of the history sets, for lookups up to bound renaming.
    gamma_hist_c: BTreeSet<PsfFormula>,
    delta_hist_c: BTreeSet<PsfFormula>,
    used_pairs: BTreeSet<(PsfFormula, Variable)>,
    rall_done: BTreeSet<PsfFormula>,
    depth: usize,
}

impl Branch {
    pub fn root(s: &Sequent) -> Branch {
        let gamma: BTreeSet<PsfFormula> = s.antecedent.iter().cloned().collect();
        let delta: BTreeSet<PsfFormula> = s.succedent.iter().cloned().collect();
        Branch {
            gamma_hist: gamma.clone(),
            delta_hist: delta.clone(),
            gamma_hist_c: gamma.iter().map(canonical).collect(),
            delta_hist_c: delta.iter().map(canonical).collect(),
            gamma,
            delta,
            vars: s.free_vars_ordered(),
            used_pairs: BTreeSet::new(),
            rall_done: BTreeSet::new(),
            depth: 0,
        }
    }

    fn sequent(&self) -> Sequent {
        Sequent {
            antecedent: self.gamma.iter().cloned().collect(),
            succedent: self.delta.iter().cloned().collect(),
        }
    }

    fn add_gamma(&mut self, f: PsfFormula) {
        self.gamma_hist_c.insert(canonical(&f));
        self.gamma_hist.insert(f.clone());
        self.gamma.insert(f);
    }

    fn add_delta(&mut self, f: PsfFormula) {
        self.delta_hist_c.insert(canonical(&f));
        self.delta_hist.insert(f.clone());
        self.delta.insert(f);
    }
}

fn hole() -> Variable {
    // Not a legal surface identifier, so it collides with no branch variable.
    Variable::new("#")
}

/// Renames bound variables to a depth-indexed scheme, so that formulas which
/// differ only in translation-time bound names compare equal. Bookkeeping keys
/// and blocking profiles go through this; the branch sets and the derivation
/// keep the original names.
fn canonical(f: &PsfFormula) -> PsfFormula {
    fn go(f: &PsfFormula, depth: usize, map: &mut Vec<(Variable, Variable)>) -> PsfFormula {
        fn lookup(v: &Variable, map: &[(Variable, Variable)]) -> Variable {
            map.iter()
                .rev()
                .find(|(from, _)| from == v)
                .map_or_else(|| v.clone(), |(_, to)| to.clone())
        }
        match f {
            PsfFormula::Bottom => PsfFormula::Bottom,
            PsfFormula::PredAtom(p, v) => PsfFormula::pred(p.clone(), lookup(v, map)),
            PsfFormula::RelAtom(a, b) => PsfFormula::rel(lookup(a, map), lookup(b, map)),
            PsfFormula::And(l, r) => PsfFormula::and(go(l, depth, map), go(r, depth, map)),
            PsfFormula::Or(l, r) => PsfFormula::or(go(l, depth, map), go(r, depth, map)),
            PsfFormula::ShieldedAll {
                bound,
                base,
                hyp,
                con,
            } => {
                // Like the hole, "!" keeps the name out of the surface syntax.
                let fresh = Variable::new(format!("!{depth}"));
                let base = lookup(base, map);
                map.push((bound.clone(), fresh.clone()));
                let hyp = go(hyp, depth + 1, map);
                let con = go(con, depth + 1, map);
                map.pop();
                PsfFormula::shielded_all(fresh, base, hyp, con)
            }
        }
    }
    go(f, 0, &mut Vec::new())
}

/// History formulas attributed to `v`: free variable exactly `v`, relation
/// atoms excluded, with `v` renamed to a placeholder and bound names made
/// canonical so profiles of different variables are comparable.
fn attributed(hist: &BTreeSet<PsfFormula>, v: &Variable) -> BTreeSet<PsfFormula> {
    hist.iter()
        .filter(|f| !matches!(f, PsfFormula::RelAtom(_, _)))
        .filter(|f| {
            let fv = f.free_vars();
            fv.len() == 1 && fv.contains(v)
        })
        .map(|f| canonical(&f.subst(v, &hole())))
        .collect()
}

/// For each branch variable, the earliest earlier variable whose profile
/// subsumes it componentwise, if any. A blocked variable gets no further
/// fresh-variable expansions and a back-edge to its blocker in extraction.
///
/// The two attributed sets are enough: by the time a branch goes open, every
/// instantiable antecedent universal has been settled at every variable, and
/// the settlement is itself an attributed formula (the instantiated
/// hypothesis in the succedent history or the instantiated conclusion in the
/// antecedent history), so the subset conditions carry it over to the
/// blocker. The only settlements they miss are variable-free falsum
/// combinations, which hold nowhere and so bind no world to anything.
pub(super) fn blocker_map(branch: &Branch) -> Vec<Option<usize>> {
    let profiles: Vec<_> = branch
        .vars
        .iter()
        .map(|v| {
            (
                attributed(&branch.gamma_hist, v),
                attributed(&branch.delta_hist, v),
            )
        })
        .collect();
    (0..profiles.len())
        .map(|i| {
            (0..i).find(|&j| {
                profiles[i].0.is_subset(&profiles[j].0) && profiles[i].1.is_subset(&profiles[j].1)
            })
        })
        .collect()
}

pub(super) enum Expansion {
    Closed(Derivation<RuleName, PsfFormula>),
    Open(Branch),
    Exceeded,
}

/// Folds a chain of single-premise steps around a finished subtree, outermost
/// step first.
fn wrap(
    chain: Vec<(RuleName, String, Sequent)>,
    top: Derivation<RuleName, PsfFormula>,
) -> Derivation<RuleName, PsfFormula> {
    chain
        .into_iter()
        .rev()
        .fold(top, |acc, (rule, principal, conclusion)| Derivation {
            rule,
            conclusion,
            principal,
            premises: vec![acc],
        })
}

fn note(cfg: &SearchConfig, rule: RuleName, principal: &str) {
    if cfg.trace {
        eprintln!("[{rule}] {principal}");
    }
}

/// Counts a logical rule application; true when the depth bound is hit.
fn over_depth(branch: &mut Branch, cfg: &SearchConfig) -> bool {
    branch.depth += 1;
    matches!(cfg.depth_bound, Some(b) if branch.depth > b)
}

/// Expands one branch to a closed subtree, an open saturated state, or a
/// depth miss. Invertibility of every rule makes the first open branch final,
/// so there is no backtracking.
pub(super) fn expand(
    mut branch: Branch,
    supply: &mut FreshVars,
    cfg: &SearchConfig,
) -> Expansion {
    let mut chain: Vec<(RuleName, String, Sequent)> = Vec::new();
    loop {
        // Frame saturation, one atom per node so the derivation records it.
        while let Some(step) = saturation_candidates(&branch.gamma, &branch.vars, cfg)
            .into_iter()
            .next()
        {
            chain.push((step.rule, step.principal, branch.sequent()));
            branch.add_gamma(step.atom);
        }

        if branch.gamma.contains(&PsfFormula::Bottom) {
            note(cfg, RuleName::LBot, "false");
            let leaf = Derivation::leaf(RuleName::LBot, branch.sequent(), "false");
            return Expansion::Closed(wrap(chain, leaf));
        }
        if let Some(atom) = branch
            .gamma
            .iter()
            .find(|f| f.is_atom() && branch.delta.contains(f))
            .cloned()
        {
            note(cfg, RuleName::Ax, &atom.to_string());
            let leaf = Derivation::leaf(RuleName::Ax, branch.sequent(), atom.to_string());
            return Expansion::Closed(wrap(chain, leaf));
        }

        if let Some(f) = branch
            .gamma
            .iter()
            .find(|f| matches!(f, PsfFormula::And(_, _)))
            .cloned()
        {
            if over_depth(&mut branch, cfg) {
                return Expansion::Exceeded;
            }
            note(cfg, RuleName::LAnd, &f.to_string());
            chain.push((RuleName::LAnd, f.to_string(), branch.sequent()));
            let PsfFormula::And(a, b) = &f else { unreachable!() };
            let (a, b) = ((**a).clone(), (**b).clone());
            branch.gamma.remove(&f);
            branch.add_gamma(a);
            branch.add_gamma(b);
            continue;
        }
        if let Some(f) = branch
            .delta
            .iter()
            .find(|f| matches!(f, PsfFormula::Or(_, _)))
            .cloned()
        {
            if over_depth(&mut branch, cfg) {
                return Expansion::Exceeded;
            }
            note(cfg, RuleName::ROr, &f.to_string());
            chain.push((RuleName::ROr, f.to_string(), branch.sequent()));
            let PsfFormula::Or(a, b) = &f else { unreachable!() };
            let (a, b) = ((**a).clone(), (**b).clone());
            branch.delta.remove(&f);
            branch.add_delta(a);
            branch.add_delta(b);
            continue;
        }

        if let Some(f) = branch
            .delta
            .iter()
            .find(|f| matches!(f, PsfFormula::And(_, _)))
            .cloned()
        {
            if over_depth(&mut branch, cfg) {
                return Expansion::Exceeded;
            }
            note(cfg, RuleName::RAnd, &f.to_string());
            let conclusion = branch.sequent();
            let PsfFormula::And(a, b) = &f else { unreachable!() };
            let (a, b) = ((**a).clone(), (**b).clone());
            let same = a == b;
            let mut left = branch.clone();
            left.delta.remove(&f);
            left.add_delta(a);
            let mut right = branch;
            right.delta.remove(&f);
            right.add_delta(b);
            let dl = match expand(left, supply, cfg) {
                Expansion::Closed(d) => d,
                other => return other,
            };
            // Equal conjuncts give equal premises; prove once and reuse.
            let dr = if same {
                dl.clone()
            } else {
                match expand(right, supply, cfg) {
                    Expansion::Closed(d) => d,
                    other => return other,
                }
            };
            let node = Derivation {
                rule: RuleName::RAnd,
                conclusion,
                principal: f.to_string(),
                premises: vec![dl, dr],
            };
            return Expansion::Closed(wrap(chain, node));
        }
        if let Some(f) = branch
            .gamma
            .iter()
            .find(|f| matches!(f, PsfFormula::Or(_, _)))
            .cloned()
        {
            if over_depth(&mut branch, cfg) {
                return Expansion::Exceeded;
            }
            note(cfg, RuleName::LOr, &f.to_string());
            let conclusion = branch.sequent();
            let PsfFormula::Or(a, b) = &f else { unreachable!() };
            let (a, b) = ((**a).clone(), (**b).clone());
            let same = a == b;
            let mut left = branch.clone();
            left.gamma.remove(&f);
            left.add_gamma(a);
            let mut right = branch;
            right.gamma.remove(&f);
            right.add_gamma(b);
            let dl = match expand(left, supply, cfg) {
                Expansion::Closed(d) => d,
                other => return other,
            };
            // Equal disjuncts give equal premises; prove once and reuse.
            let dr = if same {
                dl.clone()
            } else {
                match expand(right, supply, cfg) {
                    Expansion::Closed(d) => d,
                    other => return other,
                }
            };
            let node = Derivation {
                rule: RuleName::LOr,
                conclusion,
                principal: f.to_string(),
                premises: vec![dl, dr],
            };
            return Expansion::Closed(wrap(chain, node));
        }

        // Instantiation of an antecedent universal at a related variable, once
        // per formula-variable pair up to bound renaming; pairs already
        // settled in the branch history are marked off without branching.
        // Pairs that make one premise trivial fire before fresh-variable
        // expansion; speculative pairs wait until no fresh-variable step
        // applies, since their branching multiplies everything beneath them.
        // Every rule is invertible, so the order only affects tree size.
        let mut live: Vec<(PsfFormula, Variable, PsfFormula, PsfFormula)> = Vec::new();
        let universals: Vec<PsfFormula> = branch
            .gamma
            .iter()
            .filter(|f| matches!(f, PsfFormula::ShieldedAll { .. }))
            .cloned()
            .collect();
        for u in &universals {
            let PsfFormula::ShieldedAll {
                bound,
                base,
                hyp,
                con,
            } = u
            else {
                unreachable!()
            };
            for z in branch.vars.clone() {
                if !branch
                    .gamma
                    .contains(&PsfFormula::rel(base.clone(), z.clone()))
                {
                    continue;
                }
                let key = (canonical(u), z.clone());
                if branch.used_pairs.contains(&key) {
                    continue;
                }
                let hyp_z = hyp.subst(bound, &z);
                let con_z = con.subst(bound, &z);
                if branch.delta_hist_c.contains(&canonical(&hyp_z))
                    || branch.gamma_hist_c.contains(&canonical(&con_z))
                {
                    branch.used_pairs.insert(key);
                    continue;
                }
                live.push((u.clone(), z, hyp_z, con_z));
            }
        }
        // Tier 0 closes one premise outright, tier 1 fires a universal whose
        // hypothesis is already granted (the left premise is an identity
        // goal), tier 2 is speculative.
        let tier = |hyp_z: &PsfFormula, con_z: &PsfFormula| -> u8 {
            if *con_z == PsfFormula::Bottom
                || (con_z.is_atom() && branch.delta.contains(con_z))
                || (hyp_z.is_atom() && branch.gamma.contains(hyp_z))
            {
                0
            } else if branch.gamma_hist_c.contains(&canonical(hyp_z)) {
                1
            } else {
                2
            }
        };
        let pick = live
            .iter()
            .enumerate()
            .min_by_key(|(i, (_, _, hyp_z, con_z))| (tier(hyp_z, con_z), *i))
            .map(|(i, (_, _, hyp_z, con_z))| (i, tier(hyp_z, con_z)));
        let mut inst = match pick {
            Some((i, t)) if t <= 1 => Some(live.swap_remove(i)),
            _ => None,
        };

        if inst.is_none() {
            // Fresh-variable expansion of a succedent universal, once per
            // formula and only at unblocked bases.
            let mut rall: Option<PsfFormula> = None;
            {
                let mut blockers: Option<Vec<Option<usize>>> = None;
                for f in branch.delta.iter() {
                    let PsfFormula::ShieldedAll { base, .. } = f else {
                        continue;
                    };
                    if branch.rall_done.contains(&canonical(f)) {
                        continue;
                    }
                    let map = blockers.get_or_insert_with(|| blocker_map(&branch));
                    let idx = branch
                        .vars
                        .iter()
                        .position(|v| v == base)
                        .expect("universal base is a registered branch variable");
                    if map[idx].is_none() {
                        rall = Some(f.clone());
                        break;
                    }
                }
            }
            if let Some(f) = rall {
                if over_depth(&mut branch, cfg) {
                    return Expansion::Exceeded;
                }
                let z = supply.fresh();
                let principal = format!("{f} / fresh {z}");
                note(cfg, RuleName::RAllImp, &principal);
                chain.push((RuleName::RAllImp, principal, branch.sequent()));
                let PsfFormula::ShieldedAll {
                    bound,
                    base,
                    hyp,
                    con,
                } = &f
                else {
                    unreachable!()
                };
                let rel = PsfFormula::rel(base.clone(), z.clone());
                let hyp_z = hyp.subst(bound, &z);
                let con_z = con.subst(bound, &z);
                branch.vars.push(z);
                branch.delta.remove(&f);
                branch.add_gamma(rel);
                branch.add_gamma(hyp_z);
                branch.add_delta(con_z);
                branch.rall_done.insert(canonical(&f));
                continue;
            }
            inst = pick.map(|(i, _)| live.swap_remove(i));
        }

        if let Some((u, z, hyp_z, con_z)) = inst {
            if over_depth(&mut branch, cfg) {
                return Expansion::Exceeded;
            }
            let principal = format!("{u} / inst {z}");
            note(cfg, RuleName::LAllImp, &principal);
            let conclusion = branch.sequent();
            branch.used_pairs.insert((canonical(&u), z));
            let mut left = branch.clone();
            left.add_delta(hyp_z);
            let mut right = branch;
            right.add_gamma(con_z);
            let dl = match expand(left, supply, cfg) {
                Expansion::Closed(d) => d,
                other => return other,
            };
            let dr = match expand(right, supply, cfg) {
                Expansion::Closed(d) => d,
                other => return other,
            };
            let node = Derivation {
                rule: RuleName::LAllImp,
                conclusion,
                principal,
                premises: vec![dl, dr],
            };
            return Expansion::Closed(wrap(chain, node));
        }

        return Expansion::Open(branch);
    }
}
