use std::path::PathBuf;
use std::process::{Command, Output};

fn program(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../programs")
        .join(name)
}

fn lrbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrbound")).args(args).output().unwrap()
}

fn with_file(args: &[&str], file: &str) -> Output {
    let path = program(file);
    let mut all: Vec<&str> = args.to_vec();
    all.push(path.to_str().unwrap());
    lrbound(&all)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn verdict_lines(o: &Output) -> Vec<String> {
    stdout(o)
        .lines()
        .filter(|l| l.starts_with('X'))
        .map(String::from)
        .collect()
}

#[test]
fn analyze_swapping_sum() {
    let o = with_file(&["analyze", "--mode", "poly"], "growing_sum.lr");
    assert!(o.status.success());
    assert_eq!(
        verdict_lines(&o),
        ["X1: NOT-POLY", "X2: NOT-POLY", "X3: NOT-POLY", "X4: POLY"]
    );
    assert!(stdout(&o).starts_with("mode: poly\n"));
}

#[test]
fn analyze_bounded_sum() {
    let o = with_file(&["analyze"], "bounded_sum.lr");
    assert_eq!(verdict_lines(&o), ["X1: POLY", "X2: POLY", "X3: POLY", "X4: POLY"]);
}

#[test]
fn analyze_square_in_linear_mode() {
    let o = with_file(&["analyze", "--mode", "lin"], "square.lr");
    assert_eq!(verdict_lines(&o), ["X1: NOT-LIN", "X2: LIN"]);
}

#[test]
fn single_variable_with_witness() {
    let o = with_file(&["analyze", "--var", "1", "--witness"], "copy_double.lr");
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(verdict_lines(&o), ["X1: NOT-POLY"]);
    assert!(out.contains("    [L2] loop X4"), "{out}");
    let o = with_file(&["analyze", "--var", "9"], "copy_double.lr");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_report_carries_the_text_fields() {
    let text = stdout(&with_file(&["analyze", "--witness"], "copy_double.lr"));
    let o = with_file(&["analyze", "--witness", "--format", "json"], "copy_double.lr");
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["mode"], "poly");
    let verdicts = v["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 4);
    for entry in verdicts {
        let line = format!("X{}: {}", entry["var"], entry["verdict"].as_str().unwrap());
        assert!(text.contains(&line), "{line}");
        assert_eq!(entry["bounded"].as_bool().unwrap(), entry.get("witness").is_none());
    }
    for key in [
        "distinct_contexts",
        "max_contexts_per_node",
        "memo_entries",
        "judgements",
    ] {
        let line = format!("{key}: {}", v["stats"][key]);
        assert!(text.contains(&line), "{line}");
    }
    assert!(v["time_ms"].is_number());
}

#[test]
fn analysis_flags_do_not_change_verdicts_here() {
    let base = verdict_lines(&with_file(&["analyze"], "copy_double_reset.lr"));
    let full = verdict_lines(&with_file(&["analyze", "--full-l2-fixpoint"], "copy_double_reset.lr"));
    assert_eq!(base, full);
    let weak = with_file(&["analyze", "--post-weakening"], "copy_double_reset.lr");
    assert!(weak.status.success());
}

#[test]
fn parse_errors_exit_2() {
    let o = with_file(&["analyze"], "bad_bound.lr");
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad_bound.lr:1:11:"), "{err}");
    let o = with_file(&["run", "--inputs", "1"], "bad_bound.lr");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn resource_cap_exits_3() {
    let o = with_file(&["analyze", "--max-contexts-per-node", "1"], "copy_double_reset.lr");
    assert_eq!(o.status.code(), Some(3));
    let o = with_file(&["analyze", "--max-memo-entries", "1"], "growing_sum.lr");
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn missing_file_fails() {
    let o = lrbound(&["analyze", "/nonexistent/x.lr"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn run_reports_maxima() {
    let o = with_file(&["run", "--inputs", "5"], "skip.lr");
    assert!(stdout(&o).contains("max X1 = 5\n"));
    let o = with_file(&["run", "--inputs", "1,3"], "doubling.lr");
    let out = stdout(&o);
    assert!(out.contains("reachable stores: 4\n"), "{out}");
    assert!(out.contains("max X1 = 8\n"), "{out}");
    assert!(out.contains("max steps: 3\n"), "{out}");
    assert!(out.contains("truncated: no\n"), "{out}");
    let o = with_file(&["run", "--inputs", "1,1,0,2"], "growing_sum.lr");
    assert!(stdout(&o).contains("max X1 = 3\n"));
}

#[test]
fn run_input_count_must_match() {
    let o = with_file(&["run", "--inputs", "1,2,3"], "doubling.lr");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn strict_truncation_exits_4() {
    let o = with_file(&["run", "--inputs", "2,9", "--max-value", "100"], "doubling.lr");
    assert!(o.status.success());
    assert!(stdout(&o).contains("truncated: yes"));
    let o = with_file(
        &["run", "--inputs", "2,9", "--max-value", "100", "--strict"],
        "doubling.lr",
    );
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn nfa_commands() {
    let o = with_file(&["nfa", "check"], "universal1.nfa");
    assert_eq!(stdout(&o), "UNIVERSAL\n");
    let o = with_file(&["nfa", "check"], "zeros_only.nfa");
    assert_eq!(stdout(&o), "NOT-UNIVERSAL\n");
    let o = with_file(&["nfa", "difftest"], "universal1.nfa");
    assert_eq!(stdout(&o), "AGREE (Z LIN, oracle true)\n");
    let o = with_file(&["nfa", "difftest"], "zeros_only.nfa");
    assert_eq!(stdout(&o), "AGREE (Z NOT-LIN, oracle false)\n");
    let o = with_file(&["nfa", "difftest"], "universal2.nfa");
    assert!(o.status.success());
    let o = with_file(&["nfa", "check"], "growing_sum.lr");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn nfa_emit_golden() {
    let o = with_file(&["nfa", "emit"], "universal1.nfa");
    let expected = "vars 4\nX1 := 0 ;\nloop X3 {\n  choose {\n    X2 := X4 ;\n    X2 := X2 * X1 ;\n    X1 := X2\n  } or {\n    X2 := X4 ;\n    X2 := X2 * X1 ;\n    X1 := X2\n  }\n} ;\nX4 := X4 * X1\n";
    assert_eq!(stdout(&o), expected);
}

#[test]
fn random_difftest_is_seeded() {
    let args = ["nfa", "difftest", "--random", "20", "--states", "3", "--seed", "42"];
    let a = lrbound(&args);
    let b = lrbound(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).ends_with("20 automata: 20 AGREE, 0 DISAGREE\n"));
    let o = lrbound(&["nfa", "emit", "--random", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sample_programs_match_library_corpus() {
    for (file, name) in [
        ("growing_sum.lr", "growing_sum"),
        ("bounded_sum.lr", "bounded_sum"),
        ("copy_double.lr", "copy_double"),
        ("copy_double_reset.lr", "copy_double_reset"),
        ("square.lr", "square"),
        ("accumulate.lr", "accumulate"),
        ("doubling.lr", "doubling"),
    ] {
        let text = std::fs::read_to_string(program(file)).unwrap();
        let parsed = lrbound::parse_program(&text).unwrap();
        assert_eq!(Some(parsed), lrbound::corpus::example(name), "{file}");
    }
}
