//! Command line front end: translation, proof search with countermodel
//! output, model checking against stored models, and corpus-scale
//! cross-validation of the two provers.
//!
//! Exit codes are a stable contract: 0 provable (or clean run), 1 refuted,
//! 2 usage, parse, or consistency error, 3 depth bound exceeded.

use clap::{Args, Parser, Subcommand, ValueEnum};
use psfint::corpus::equivalence_check;
use psfint::kripke::{model_from_json, model_to_json, semantic_decide, validates, SemanticVerdict};
use psfint::oracle::mg3ip_prove;
use psfint::{
    parse_sequent, prove, translate_sequent, Assignment, Derivation, KripkeModel, PropSequent,
    PsfFormula, RuleName, SearchConfig, SearchResult, Sequent, Variable,
};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fs;
use std::process::ExitCode;

const EXIT_PROVABLE: u8 = 0;
const EXIT_REFUTED: u8 = 1;
const EXIT_ERROR: u8 = 2;
const EXIT_DEPTH: u8 = 3;

#[derive(Parser)]
#[command(
    name = "psfint",
    version,
    about = "Decides propositional intuitionistic sequents by relational translation,\n\
             returning checkable derivations or finite Kripke countermodels."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide a sequent; print a derivation or a finite countermodel
    Prove(ProveArgs),
    /// Print the relational translation of a sequent
    Translate(TranslateArgs),
    /// Evaluate a sequent in a model loaded from a JSON file
    ModelCheck(ModelCheckArgs),
    /// Run the relational prover and the multisuccedent prover side by side
    Compare(CompareArgs),
    /// Cross-validate both provers over a file of sequents
    Corpus(CorpusArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Args)]
struct Common {
    /// Sequent text, e.g. "p & q => q | r"
    sequent: String,
    /// Anchor variable the translation is rooted at
    #[arg(long, default_value = "x")]
    var: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct Toggles {
    /// Search without the reflexivity rule
    #[arg(long)]
    no_refl: bool,
    /// Search without the transitivity rule
    #[arg(long)]
    no_tran: bool,
    /// Search without the monotonicity rule
    #[arg(long)]
    no_mono: bool,
    /// Give up after this many rule applications on a branch
    #[arg(long, value_name = "N")]
    depth: Option<usize>,
}

impl Toggles {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            enable_refl: !self.no_refl,
            enable_tran: !self.no_tran,
            enable_mono: !self.no_mono,
            depth_bound: self.depth,
            trace: false,
        }
    }
}

#[derive(Args)]
struct ProveArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    toggles: Toggles,
}

#[derive(Args)]
struct TranslateArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ModelCheckArgs {
    /// Path to a model JSON file with "worlds", "rel", and "val" fields
    model: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    toggles: Toggles,
    /// Also search for countermodels up to this many worlds (0 disables, max 5)
    #[arg(long, value_name = "N", default_value_t = 3)]
    model_bound: usize,
}

#[derive(Args)]
struct CorpusArgs {
    /// UTF-8 file, one sequent per line; '#' starts a comment
    file: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(flatten)]
    toggles: Toggles,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.cmd {
        Cmd::Prove(a) => cmd_prove(a),
        Cmd::Translate(a) => cmd_translate(a),
        Cmd::ModelCheck(a) => cmd_model_check(a),
        Cmd::Compare(a) => cmd_compare(a),
        Cmd::Corpus(a) => cmd_corpus(a),
    };
    ExitCode::from(code)
}

fn fail(msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    EXIT_ERROR
}

/// Validates the anchor name: a plain identifier that cannot collide with
/// the relation symbol or the falsum keyword.
fn anchor(name: &str) -> Result<Variable, String> {
    let mut chars = name.chars();
    let shaped = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    if !shaped {
        return Err(format!("--var must be an identifier, got {name:?}"));
    }
    if name == "R" || name == "false" {
        return Err(format!("--var must not be the reserved name {name:?}"));
    }
    Ok(Variable::new(name))
}

fn parsed(args: &Common) -> Result<(PropSequent, Variable, Sequent), String> {
    let s = parse_sequent(&args.sequent).map_err(|e| e.to_string())?;
    let at = anchor(&args.var)?;
    let translated = translate_sequent(&s, &at);
    Ok((s, at, translated))
}

fn cmd_prove(args: &ProveArgs) -> u8 {
    let (s, _, translated) = match parsed(&args.common) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    let result = match prove(&translated, &args.toggles.config()) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    match result {
        SearchResult::Proof(d) => {
            match args.common.format {
                Format::Text => {
                    println!("input:      {s}");
                    println!("translated: {translated}");
                    println!("verdict:    provable");
                    print!("{}", d.to_text());
                }
                Format::Json => {
                    let doc = json!({
                        "input": s.to_string(),
                        "translated": translated.to_string(),
                        "verdict": "provable",
                        "derivation": d.to_json(),
                    });
                    println!("{doc:#}");
                }
                Format::Latex => print!("{}", derivation_latex(&d)),
            }
            EXIT_PROVABLE
        }
        SearchResult::Refuted { model, assignment } => {
            match args.common.format {
                Format::Text => {
                    println!("input:      {s}");
                    println!("translated: {translated}");
                    println!("verdict:    refuted");
                    print!("{}", model_text(&model, &assignment));
                }
                Format::Json => {
                    let doc = json!({
                        "input": s.to_string(),
                        "translated": translated.to_string(),
                        "verdict": "refuted",
                        "countermodel": model_to_json(&model, &s.to_string()),
                        "assignment": assignment_json(&model, &assignment),
                    });
                    println!("{doc:#}");
                }
                Format::Latex => print!("{}", model_latex(&model, &assignment)),
            }
            EXIT_REFUTED
        }
        SearchResult::DepthExceeded => {
            match args.common.format {
                Format::Text => println!("verdict: depth bound exceeded"),
                Format::Json => {
                    let doc = json!({
                        "input": s.to_string(),
                        "translated": translated.to_string(),
                        "verdict": "depth-exceeded",
                    });
                    println!("{doc:#}");
                }
                Format::Latex => println!("% depth bound exceeded"),
            }
            EXIT_DEPTH
        }
    }
}

fn cmd_translate(args: &TranslateArgs) -> u8 {
    let (s, at, translated) = match parsed(&args.common) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    match args.common.format {
        Format::Text => println!("{translated}"),
        Format::Json => {
            let doc = json!({
                "input": s.to_string(),
                "var": at.as_str(),
                "translated": translated.to_string(),
            });
            println!("{doc:#}");
        }
        Format::Latex => println!("${}$", sequent_latex(&translated)),
    }
    EXIT_PROVABLE
}

fn cmd_model_check(args: &ModelCheckArgs) -> u8 {
    let text = match fs::read_to_string(&args.model) {
        Ok(t) => t,
        Err(e) => return fail(format!("{}: {e}", args.model)),
    };
    let value: Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => return fail(format!("{}: {e}", args.model)),
    };
    let model = match model_from_json(&value) {
        Ok(m) => m,
        Err(e) => return fail(e),
    };
    if !model.check_int_model() {
        eprintln!("note: model is not a reflexive-transitive-monotone intuitionistic model; checking it as given");
    }
    let (s, at, translated) = match parsed(&args.common) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    let mut per_world = Vec::new();
    for w in 0..model.world_count() {
        let a: Assignment = [(at.clone(), w)].into_iter().collect();
        match validates(&model, &translated, &a) {
            Ok(v) => per_world.push(v),
            Err(e) => return fail(e),
        }
    }
    let all = per_world.iter().all(|&v| v);
    let some = per_world.iter().any(|&v| v);
    match args.common.format {
        Format::Text => {
            println!("input:      {s}");
            println!("translated: {translated}");
            for (name, v) in model.worlds.iter().zip(&per_world) {
                println!("{name}: {}", if *v { "validated" } else { "falsified" });
            }
            println!("all worlds:  {}", if all { "yes" } else { "no" });
            println!("some world:  {}", if some { "yes" } else { "no" });
        }
        Format::Json => {
            let worlds: BTreeMap<&String, bool> =
                model.worlds.iter().zip(per_world.iter().copied()).collect();
            let doc = json!({
                "input": s.to_string(),
                "translated": translated.to_string(),
                "per_world": worlds,
                "all_worlds": all,
                "some_world": some,
            });
            println!("{doc:#}");
        }
        Format::Latex => {
            println!("\\begin{{tabular}}{{ll}}");
            for (name, v) in model.worlds.iter().zip(&per_world) {
                println!("${name}$ & {} \\\\", if *v { "validated" } else { "falsified" });
            }
            println!("\\end{{tabular}}");
        }
    }
    if all {
        EXIT_PROVABLE
    } else {
        EXIT_REFUTED
    }
}

fn search_verdict(r: &SearchResult) -> &'static str {
    match r {
        SearchResult::Proof(_) => "provable",
        SearchResult::Refuted { .. } => "refuted",
        SearchResult::DepthExceeded => "depth-exceeded",
    }
}

fn cmd_compare(args: &CompareArgs) -> u8 {
    if args.model_bound > 5 {
        return fail("--model-bound must be at most 5");
    }
    let (s, _, translated) = match parsed(&args.common) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    let relational = match prove(&translated, &args.toggles.config()) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let oracle = mg3ip_prove(&s);
    let bounded = if args.model_bound > 0 {
        Some(semantic_decide(&s, args.model_bound))
    } else {
        None
    };
    let oracle_verdict = if oracle.is_provable() { "provable" } else { "unprovable" };
    let bounded_verdict = bounded.as_ref().map(|v| match v {
        SemanticVerdict::Counterexample { model, .. } => {
            format!("counterexample with {} worlds", model.world_count())
        }
        SemanticVerdict::NoCounterexample { max_worlds } => {
            format!("no counterexample up to {max_worlds} worlds")
        }
    });
    // A bounded counterexample against a derivation is as much a defect as
    // the two provers splitting; a refutation the enumerator cannot confirm
    // within the bound is not (its model may simply need more worlds).
    let undecided = matches!(relational, SearchResult::DepthExceeded);
    let split = !undecided && relational.is_proof() != oracle.is_provable();
    let unsound = relational.is_proof()
        && matches!(bounded, Some(SemanticVerdict::Counterexample { .. }));
    let agreement = if undecided {
        "undecided"
    } else if split || unsound {
        "no"
    } else {
        "yes"
    };
    match args.common.format {
        Format::Text => {
            println!("input:      {s}");
            println!("relational: {}", search_verdict(&relational));
            println!("oracle:     {oracle_verdict}");
            if let Some(b) = &bounded_verdict {
                println!("bounded:    {b}");
            }
            println!("agreement:  {agreement}");
        }
        Format::Json => {
            let doc = json!({
                "input": s.to_string(),
                "relational": search_verdict(&relational),
                "oracle": oracle_verdict,
                "bounded": bounded_verdict,
                "agreement": agreement,
            });
            println!("{doc:#}");
        }
        Format::Latex => {
            println!("\\begin{{tabular}}{{ll}}");
            println!("relational & {} \\\\", search_verdict(&relational));
            println!("oracle & {oracle_verdict} \\\\");
            if let Some(b) = &bounded_verdict {
                println!("bounded & {b} \\\\");
            }
            println!("agreement & {agreement} \\\\");
            println!("\\end{{tabular}}");
        }
    }
    if undecided {
        EXIT_DEPTH
    } else if split || unsound {
        eprintln!("error: the provers disagree on {s}");
        EXIT_ERROR
    } else if relational.is_proof() {
        EXIT_PROVABLE
    } else {
        EXIT_REFUTED
    }
}

fn cmd_corpus(args: &CorpusArgs) -> u8 {
    let text = match fs::read_to_string(&args.file) {
        Ok(t) => t,
        Err(e) => return fail(format!("{}: {e}", args.file)),
    };
    let mut lines: Vec<usize> = Vec::new();
    let mut sequents: Vec<PropSequent> = Vec::new();
    let mut bad = 0usize;
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        match parse_sequent(body) {
            Ok(s) => {
                lines.push(i + 1);
                sequents.push(s);
            }
            Err(e) => {
                eprintln!("line {}: {e}", i + 1);
                bad += 1;
            }
        }
    }
    if bad > 0 {
        return EXIT_ERROR;
    }
    let report = equivalence_check(&sequents, &args.toggles.config());
    match args.format {
        Format::Text => {
            println!("total:         {}", report.total);
            println!("agreements:    {}", report.agreements);
            println!("disagreements: {}", report.disagreements.len());
            println!("unresolved:    {}", report.unresolved.len());
            for d in &report.disagreements {
                println!(
                    "line {}: {}  [relational: {}, oracle: {}]",
                    lines[d.index],
                    d.sequent,
                    search_verdict(&d.psf),
                    if d.oracle.is_provable() { "provable" } else { "unprovable" },
                );
            }
            for u in &report.unresolved {
                println!("line {}: {}  [unresolved: {}]", lines[u.index], u.sequent, u.reason);
            }
        }
        Format::Json => {
            let disagreements: Vec<Value> = report
                .disagreements
                .iter()
                .map(|d| {
                    json!({
                        "line": lines[d.index],
                        "sequent": d.sequent.to_string(),
                        "relational": search_verdict(&d.psf),
                        "oracle": if d.oracle.is_provable() { "provable" } else { "unprovable" },
                    })
                })
                .collect();
            let unresolved: Vec<Value> = report
                .unresolved
                .iter()
                .map(|u| {
                    json!({
                        "line": lines[u.index],
                        "sequent": u.sequent.to_string(),
                        "reason": u.reason,
                    })
                })
                .collect();
            let doc = json!({
                "total": report.total,
                "agreements": report.agreements,
                "disagreements": disagreements,
                "unresolved": unresolved,
            });
            println!("{doc:#}");
        }
        Format::Latex => {
            println!("\\begin{{tabular}}{{lr}}");
            println!("total & {} \\\\", report.total);
            println!("agreements & {} \\\\", report.agreements);
            println!("disagreements & {} \\\\", report.disagreements.len());
            println!("unresolved & {} \\\\", report.unresolved.len());
            println!("\\end{{tabular}}");
        }
    }
    if !report.disagreements.is_empty() {
        eprintln!("error: the provers disagree on {} sequents", report.disagreements.len());
        EXIT_ERROR
    } else if !report.unresolved.is_empty() {
        EXIT_DEPTH
    } else {
        EXIT_PROVABLE
    }
}

fn model_text(m: &KripkeModel, a: &Assignment) -> String {
    let mut out = String::new();
    out.push_str(&format!("worlds: {}\n", m.worlds.join(" ")));
    let rel: Vec<String> = m
        .rel
        .iter()
        .map(|&(i, j)| format!("({},{})", m.worlds[i], m.worlds[j]))
        .collect();
    out.push_str(&format!("rel:    {}\n", rel.join(" ")));
    for (atom, ws) in &m.val {
        let names: Vec<&str> = ws.iter().map(|&w| m.worlds[w].as_str()).collect();
        out.push_str(&format!("val:    {atom} -> {{{}}}\n", names.join(", ")));
    }
    for (var, &w) in a {
        out.push_str(&format!("assign: {var} -> {}\n", m.worlds[w]));
    }
    out
}

fn assignment_json(m: &KripkeModel, a: &Assignment) -> Value {
    let map: BTreeMap<String, &String> = a
        .iter()
        .map(|(var, &w)| (var.as_str().to_string(), &m.worlds[w]))
        .collect();
    json!(map)
}

fn psf_latex(f: &PsfFormula) -> String {
    match f {
        PsfFormula::Bottom => "\\bot".into(),
        PsfFormula::PredAtom(p, v) => format!("{p}({v})"),
        PsfFormula::RelAtom(a, b) => format!("R({a},{b})"),
        PsfFormula::And(l, r) => format!("({} \\land {})", psf_latex(l), psf_latex(r)),
        PsfFormula::Or(l, r) => format!("({} \\lor {})", psf_latex(l), psf_latex(r)),
        PsfFormula::ShieldedAll { bound, base, hyp, con } => format!(
            "\\forall {bound}\\,((R({base},{bound}) \\land {}) \\to {})",
            psf_latex(hyp),
            psf_latex(con)
        ),
    }
}

fn sequent_latex(s: &Sequent) -> String {
    let side = |fs: &[PsfFormula]| {
        fs.iter().map(psf_latex).collect::<Vec<_>>().join(", ")
    };
    format!(
        "{} \\Rightarrow {}",
        side(&s.antecedent),
        side(&s.succedent)
    )
}

fn derivation_latex(d: &Derivation<RuleName, PsfFormula>) -> String {
    fn emit(d: &Derivation<RuleName, PsfFormula>, out: &mut String) {
        for p in &d.premises {
            emit(p, out);
        }
        if d.premises.is_empty() {
            out.push_str("\\AxiomC{}\n");
        }
        out.push_str(&format!("\\RightLabel{{\\scriptsize {}}}\n", d.rule));
        let line = format!("${}$", sequent_latex(&d.conclusion));
        match d.premises.len() {
            0 | 1 => out.push_str(&format!("\\UnaryInfC{{{line}}}\n")),
            _ => out.push_str(&format!("\\BinaryInfC{{{line}}}\n")),
        }
    }
    let mut out = String::from("\\begin{prooftree}\n");
    emit(d, &mut out);
    out.push_str("\\end{prooftree}\n");
    out
}

fn model_latex(m: &KripkeModel, a: &Assignment) -> String {
    let mut out = String::from("\\begin{tabular}{ll}\n");
    out.push_str(&format!("worlds & ${}$ \\\\\n", m.worlds.join(", ")));
    let rel: Vec<String> = m
        .rel
        .iter()
        .map(|&(i, j)| format!("({},{})", m.worlds[i], m.worlds[j]))
        .collect();
    out.push_str(&format!("$R$ & ${}$ \\\\\n", rel.join(", ")));
    for (atom, ws) in &m.val {
        let names: Vec<&str> = ws.iter().map(|&w| m.worlds[w].as_str()).collect();
        out.push_str(&format!("${atom}$ & $\\{{{}\\}}$ \\\\\n", names.join(", ")));
    }
    for (var, &w) in a {
        out.push_str(&format!("${var}$ & $\\mapsto {}$ \\\\\n", m.worlds[w]));
    }
    out.push_str("\\end{tabular}\n");
    out
}
