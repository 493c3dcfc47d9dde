use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    run_env(args, None)
}

fn run_env(args: &[&str], max_base: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_possib"));
    for a in args {
        if a.contains('.') && !a.starts_with('-') {
            cmd.arg(fixture(a));
        } else {
            cmd.arg(a);
        }
    }
    cmd.env_remove("POSSIB_MAX_BASE");
    if let Some(v) = max_base {
        cmd.env("POSSIB_MAX_BASE", v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn models_lists_every_model() {
    let o = run(&["models", "--theory", "birds_positive.pl", "--predicates", "red/0,green/0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "{bird, light}\n{bird, light, red}\n{bird, green, light}\n{bird, green, light, red}\n"
    );
    let o = run(&["models", "--theory", "birds_positive.pl", "--predicates", "red/0,green/0", "--limit", "1"]);
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn unsatisfiable_theory_has_no_models() {
    let o = run(&["models", "--theory", "unsatisfiable.pl"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
}

#[test]
fn check_exit_codes() {
    let yes = run(&["check", "--setting", "assumption_based", "--hypothesis", "light_square.dnf", "--example", "shapes.json", "--sign", "+"]);
    assert_eq!((stdout(&yes).trim(), yes.status.code()), ("compatible", Some(0)));
    let no = run(&["check", "--setting", "assumption_based", "--hypothesis", "white_square.dnf", "--example", "shapes.json", "--sign", "+"]);
    assert_eq!((stdout(&no).trim(), no.status.code()), ("incompatible", Some(1)));
    let neg = run(&["check", "--setting", "generalized", "--hypothesis", "birds_hypothesis.dnf", "--example", "birds_negative.json", "--sign", "-"]);
    assert_eq!(neg.status.code(), Some(0));
}

#[test]
fn learn_traces_the_disjunction_veto() {
    let o = run(&["learn", "--task", "disjunction_task.json", "--emit-trace"]);
    let out = stdout(&o);
    assert!(out.contains("trace: reject square in disjunction vetoed by e_minus"), "{out}");
    assert!(out.contains("failure: uncovered"), "{out}");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn learn_with_horn_shortcut() {
    let o = run(&["learn", "--task", "horn_task.json", "--emit-trace", "--horn-shortcut"]);
    assert_eq!(
        stdout(&o),
        "shortcut: engaged\ntrace: reject red vetoed by n1\ntrace: accept square covering p1, p2\nhypothesis: square\n"
    );
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn learn_without_positives_fails() {
    let o = run(&["learn", "--task", "no_positives_task.json"]);
    assert!(stdout(&o).contains("failure: no positive examples"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn classify_instances() {
    let o = run(&["classify", "--setting", "generalized", "--hypothesis", "bird_red.dnf", "--instance", "migratory.json"]);
    assert_eq!(stdout(&o).trim(), "contradictory");
    let o = run(&["classify", "--setting", "uncertain", "--hypothesis", "a.dnf", "--instance", "uncertain_instance.json"]);
    assert_eq!(stdout(&o).trim(), "uncertain");
}

#[test]
fn reductions_report() {
    let o = run(&["reduce", "--from", "sat", "--task", "sat_task.json", "--verify"]);
    assert!(stdout(&o).contains("EQUAL"));
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["reduce", "--from", "possibilities", "--task", "two_possibilities.json"]);
    assert!(stdout(&o).contains("NO SINGLE SAT EXAMPLE MATCHES"));
}

#[test]
fn rna_probabilities() {
    let o = run(&["rna", "--input", "palindromes.json", "--top-k", "1", "--patterns", "palindrome_patterns.txt"]);
    let out = stdout(&o);
    assert!(out.contains("retained mass 0.900000"), "{out}");
    assert!(out.contains("1.000000"), "{out}");
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn invalid_input_exits_with_two() {
    assert_eq!(run(&["models", "--theory", "missing.pl"]).status.code(), Some(2));
    let bad = std::env::temp_dir().join("possib_bad_task.json");
    std::fs::write(&bad, r#"{"setting":"x"}"#).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_possib"))
        .args(["learn", "--task"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("schema violation"));
}

#[test]
fn base_cap_exits_with_three() {
    let o = run_env(&["models", "--theory", "birds_positive.pl", "--predicates", "red/0,green/0"], Some("2"));
    assert_eq!(o.status.code(), Some(3));
}
