//! End-to-end tests of the binary: exit codes, output stability, file
//! handling, and flag plumbing.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psfint"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn tmp_file(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    fs::write(&path, contents).unwrap();
    path
}

#[test]
fn exit_codes_form_the_documented_contract() {
    assert_eq!(code(&run(&["prove", "=> p -> p"])), 0);
    assert_eq!(code(&run(&["prove", "=> p | ~p"])), 1);
    assert_eq!(code(&run(&["prove", "=> p ->"])), 2);
    assert_eq!(code(&run(&["prove", "=> ((p -> q) -> p) -> p", "--depth", "1"])), 3);
}

#[test]
fn verdict_lines_name_the_outcome() {
    let out = run(&["prove", "=> p -> p"]);
    assert!(stdout(&out).contains("verdict:    provable"));
    let out = run(&["prove", "=> p | ~p"]);
    assert!(stdout(&out).contains("verdict:    refuted"));
    assert!(stdout(&out).contains("assign: x -> w0"));
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    for sequent in ["=> p | ~p", "=> ((p -> q) -> p) -> p", "p & q => q & p"] {
        let a = run(&["prove", sequent, "--format", "json"]);
        let b = run(&["prove", sequent, "--format", "json"]);
        assert_eq!(a.stdout, b.stdout, "{sequent}");
        serde_json::from_slice::<serde_json::Value>(&a.stdout)
            .unwrap_or_else(|e| panic!("{sequent}: not JSON: {e}"));
    }
}

#[test]
fn translate_prints_the_relational_form() {
    let out = run(&["translate", "=> p -> q"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "=> forall y0. (R(x,y0) & p(y0)) -> q(y0)\n");
}

#[test]
fn var_flag_renames_the_anchor() {
    let out = run(&["translate", "=> p -> q", "--var", "w"]);
    assert_eq!(stdout(&out), "=> forall y0. (R(w,y0) & p(y0)) -> q(y0)\n");
}

#[test]
fn var_flag_rejects_reserved_and_malformed_names() {
    for bad in ["R", "false", "0x", "a b"] {
        let out = run(&["translate", "=> p", "--var", bad]);
        assert_eq!(code(&out), 2, "--var {bad}");
        assert!(stderr(&out).starts_with("error:"), "--var {bad}");
    }
}

#[test]
fn frame_toggles_thread_through_to_the_search() {
    // The identity implication closes from the fresh world alone, so it
    // stays provable with every frame rule disabled.
    let out = run(&["prove", "=> p -> p", "--no-refl", "--no-tran", "--no-mono"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn corpus_file_drives_both_provers() {
    let path = tmp_file(
        "corpus_ok.txt",
        "# named suite, one sequent per line\n\
         => p -> p\n\
         \n\
         => p | ~p   # excluded middle fails intuitionistically\n\
         p & q => q & p\n",
    );
    let out = run(&["corpus", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("total:         3"), "{text}");
    assert!(text.contains("agreements:    3"), "{text}");
    assert!(text.contains("disagreements: 0"), "{text}");
}

#[test]
fn corpus_reports_parse_failures_with_line_numbers() {
    let path = tmp_file("corpus_bad.txt", "=> p -> p\n=> p ->\n");
    let out = run(&["corpus", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));
}

#[test]
fn missing_corpus_file_is_a_usage_error() {
    let out = run(&["corpus", "/nonexistent/path.txt"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn model_check_evaluates_a_stored_model() {
    let path = tmp_file(
        "two_chain.json",
        r#"{"worlds": ["w0", "w1"],
            "rel": [["w0","w0"], ["w0","w1"], ["w1","w1"]],
            "val": {"p": ["w1"]}}"#,
    );
    let model = path.to_str().unwrap();
    // Falsified at the root, validated at the top: some world refutes it.
    let out = run(&["model-check", model, "=> p | ~p"]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("w0: falsified"), "{text}");
    assert!(text.contains("w1: validated"), "{text}");
    // An intuitionistic validity holds at every world.
    let out = run(&["model-check", model, "=> p -> p"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("all worlds:  yes"));
}

#[test]
fn model_check_rejects_malformed_models() {
    let path = tmp_file(
        "bad_model.json",
        r#"{"worlds": ["w0"], "rel": [["w0","w9"]], "val": {}}"#,
    );
    let out = run(&["model-check", path.to_str().unwrap(), "=> p"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn compare_reports_agreement_on_the_named_suite() {
    let provable = run(&["compare", "=> ~~(p | ~p)"]);
    assert_eq!(code(&provable), 0);
    assert!(stdout(&provable).contains("agreement:  yes"));
    let refuted = run(&["compare", "=> (p -> q) | (q -> p)"]);
    assert_eq!(code(&refuted), 1);
    let text = stdout(&refuted);
    assert!(text.contains("agreement:  yes"), "{text}");
    assert!(text.contains("counterexample with 3 worlds"), "{text}");
}

#[test]
fn compare_rejects_oversized_model_bounds() {
    let out = run(&["compare", "=> p", "--model-bound", "9"]);
    assert_eq!(code(&out), 2);
}
