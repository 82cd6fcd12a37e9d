use std::path::{Path, PathBuf};
use std::process::Command;

use redprod_core::fragments::is_classical_horn;
use redprod_core::semantics::{eval_classical, tuple_count, ClassicalStructure};
use redprod_core::syntax::{parse_classical_inferred, parse_formula_inferred};
use redprod_core::Rational;
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn redprod(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_redprod")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn json(run: &Run) -> Value {
    serde_json::from_str(&run.stdout).unwrap_or_else(|e| panic!("{e}: {}", run.stdout))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const TWO_CLASSICAL: &str = r#"{"classical": true, "signature": {}, "points": ["1", "2"]}"#;

const ONE_POINT: &str = r#"{
    "signature": {"dmax": "1", "constants": ["c"]},
    "points": ["p"],
    "consts": {"c": "p"}
}"#;

fn unary(values: &[&str]) -> String {
    let labels: Vec<String> = (0..values.len()).map(|i| format!("\"{}\"", (b'a' + i as u8) as char)).collect();
    let table: Vec<String> = labels.iter().zip(values).map(|(l, v)| format!("{l}: \"{v}\"")).collect();
    format!(
        r#"{{
            "signature": {{"dmax": "1", "predicates": [{{"name": "P", "arity": 1, "lo": "0", "hi": "1", "lipschitz": "1"}}]}},
            "points": [{}],
            "preds": {{"P": {{{}}}}}
        }}"#,
        labels.join(", "),
        table.join(", ")
    )
}

const COUNTEREXAMPLE: &str = "forall x1. forall x2. exists y. (y != x1 & y != x2)";

#[test]
fn to_horn_output_is_horn_and_equivalent() {
    let input = "(exists x. P(x)) & forall x. (P(x) -> Q(x))";
    let run = redprod(&["to-horn", input]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let (horn, _) = parse_classical_inferred(run.stdout.trim()).unwrap();
    assert!(is_classical_horn(&horn));
    let (original, sig) = parse_classical_inferred(input).unwrap();
    let check = redprod(&["check", "--fragment", "classical-horn", run.stdout.trim()]);
    assert_eq!(check.code, 0, "{}", check.stdout);
    for n in 1..=3usize {
        let cells = 2 * n;
        for mask in 0u32..(1 << cells) {
            let mut m = ClassicalStructure::empty(sig.clone(), (0..n).map(|i| i.to_string()).collect());
            for (r, table) in m.relations.iter_mut().enumerate() {
                assert_eq!(table.len(), tuple_count(n, 1));
                for (i, cell) in table.iter_mut().enumerate() {
                    *cell = mask >> (r * n + i) & 1 == 1;
                }
            }
            let a = eval_classical(&m, &original, &Default::default()).unwrap();
            let b = eval_classical(&m, &horn, &Default::default()).unwrap();
            assert_eq!(a, b, "{n} points, mask {mask:b}");
        }
    }
}

#[test]
fn counterexample_is_preserved_but_not_copreserved() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", TWO_CLASSICAL);
    let run = redprod(&[
        "--json", "preserve", "-s", s(&m), "-s", s(&m), "--filter", "kernel=0,1", "--classical", "-f", COUNTEREXAMPLE,
    ]);
    assert_eq!(run.code, 1, "{}", run.stderr);
    let report = json(&run);
    assert_eq!(report["preserved"], true);
    assert_eq!(report["copreserved"], false);
    assert_eq!(report["rows"][0]["product_value"], "0");
    assert_eq!(report["rows"][0]["limsup"], "1");
}

#[test]
fn one_point_distance_to_constant() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "one_point.json", ONE_POINT);
    let run = redprod(&["eval", "-s", s(&m), "-f", "inf x. d(x, c)"]);
    assert_eq!((run.code, run.stdout.as_str()), (0, "0\n"));
}

#[test]
fn classical_eval_reports_truth() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", TWO_CLASSICAL);
    let run = redprod(&["--json", "eval", "-s", s(&m), "--classical", "-f", "exists y. y != x", "--assign", "x=1"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let v = json(&run);
    assert_eq!(v["value"], "0");
    assert_eq!(v["holds"], true);
    assert_eq!(v["assignment"]["x"], "1");
}

#[test]
fn usage_and_data_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    assert_eq!(redprod(&["frobnicate"]).code, 2);
    let missing = redprod(&["eval", "-s", "/nonexistent/m.json", "-f", "0"]);
    assert_eq!(missing.code, 2);
    assert!(missing.stderr.contains("cannot read"));
    let bad = write(
        &dir,
        "bad.json",
        r#"{"signature": {"dmax": "1"}, "points": ["a", "b"], "dist": [["0", "1/2"], ["1", "0"]]}"#,
    );
    let run = redprod(&["eval", "-s", s(&bad), "-f", "0"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("invalid structure"), "{}", run.stderr);
    let one = write(&dir, "one.json", ONE_POINT);
    let open = redprod(&["eval", "-s", s(&one), "-f", "d(x, c)"]);
    assert_eq!(open.code, 2);
    assert!(open.stderr.contains("not assigned"), "{}", open.stderr);
    assert_eq!(redprod(&["gen-scp", "--phi", "P(x)", "--psi", "P(x)"]).code, 2);
    assert_eq!(redprod(&["to-horn", "forall x. (P(x) | Q(x))"]).code, 2);
}

#[test]
fn lipschitz_violations_can_be_downgraded() {
    let dir = TempDir::new().unwrap();
    let text = r#"{
        "signature": {"dmax": "1", "predicates": [{"name": "P", "arity": 1, "lo": "0", "hi": "1", "lipschitz": "1"}]},
        "points": ["a", "b"],
        "dist": [["0", "1/4"], ["1/4", "0"]],
        "preds": {"P": {"a": "0", "b": "1"}}
    }"#;
    let m = write(&dir, "steep.json", text);
    assert_eq!(redprod(&["eval", "-s", s(&m), "-f", "sup x. P(x)"]).code, 2);
    let lenient = redprod(&["--lenient-lipschitz", "eval", "-s", s(&m), "-f", "sup x. P(x)"]);
    assert_eq!((lenient.code, lenient.stdout.as_str()), (0, "1\n"));
    assert!(lenient.stderr.contains("warning"));
}

#[test]
fn check_exit_code_follows_membership() {
    let run = redprod(&["check", "--fragment", "palyutin", "min(P(x), Q(x))"]);
    assert_eq!(run.code, 1);
    let run = redprod(&["--json", "check", "--fragment", "b-combination", "min(P(x), Q(x))"]);
    assert_eq!(run.code, 0);
    assert_eq!(json(&run)["member"], true);
    let all = redprod(&["--json", "check", "P(x)"]);
    assert_eq!(all.code, 0);
    let v = json(&all);
    let names: Vec<&str> = v["fragments"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(names, ["atomic", "primitive-horn", "horn", "palyutin", "b-combination"]);
    let classical = redprod(&["--json", "check", "--classical", COUNTEREXAMPLE]);
    let v = json(&classical);
    let names: Vec<&str> = v["fragments"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(names.contains(&"classical-horn") && !names.contains(&"classical-palyutin"));
}

#[test]
fn product_file_matches_limsup() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", &unary(&["0", "1"]));
    let b = write(&dir, "b.json", &unary(&["1/2", "1/4"]));
    let out = dir.path().join("p.json");
    let run = redprod(&["product", "-s", s(&a), "-s", s(&b), "--filter", "trivial", "-o", s(&out)]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let cases = [("(a,a)", "1/2"), ("(a,b)", "1/4"), ("(b,a)", "1"), ("(b,b)", "1")];
    for (point, expected) in cases {
        let assign = format!("x={point}");
        let run = redprod(&["eval", "-s", s(&out), "-f", "P(x)", "--assign", &assign]);
        assert_eq!(run.stdout.trim(), expected, "{point}: {}", run.stderr);
    }
    let ultra = redprod(&["product", "-s", s(&a), "-s", s(&b), "--filter", "ultra=1"]);
    let v: Value = serde_json::from_str(&ultra.stdout).unwrap();
    assert_eq!(v["points"], serde_json::json!(["a", "b"]));
    assert_eq!(v["preds"]["P"]["a"], "1/2");
    let capped = redprod(&["product", "-s", s(&a), "-s", s(&b), "--cap", "3"]);
    assert_eq!(capped.code, 2);
}

#[test]
fn json_reports_are_deterministic_and_echo_formulas() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", &unary(&["0", "1/2", "1"]));
    let b = write(&dir, "b.json", &unary(&["1/3"]));
    let text = "h[x; pl{(0,1),(1,0)}slopes[-1,-1]](P(x), pl{(0,0)}slopes[0,1](d(x, y)))";
    let args = ["--json", "preserve", "-s", s(&a), "-s", s(&b), "--filter", "gen=0,1;0", "-f", text];
    let first = redprod(&args);
    assert_eq!(first.code, 0, "{}", first.stderr);
    for _ in 0..3 {
        assert_eq!(redprod(&args).stdout, first.stdout);
    }
    let report = json(&first);
    assert_eq!(report["kernel"], serde_json::json!([0]));
    let echoed = report["formula"].as_str().unwrap();
    assert_eq!(parse_formula_inferred(echoed).unwrap().0, parse_formula_inferred(text).unwrap().0);
}

#[test]
fn equiv_verdicts() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", &unary(&["0", "1"]));
    let copy = write(&dir, "copy.json", &unary(&["1", "0", "1"]));
    let other = write(&dir, "other.json", &unary(&["1/2", "1"]));
    let same = redprod(&["equiv", "-s", s(&m), "-s", s(&copy), "--depth", "2"]);
    assert_eq!(same.code, 0, "{}{}", same.stdout, same.stderr);
    let run = redprod(&["--json", "equiv", "-s", s(&m), "-s", s(&other), "--depth", "2"]);
    assert_eq!(run.code, 1);
    let v = json(&run);
    assert_eq!(v["equivalent"], false);
    assert_ne!(v["separator"]["left"], v["separator"]["right"]);
    assert_eq!(redprod(&["equiv", "-s", s(&m), "--depth", "1"]).code, 2);
}

#[test]
fn scp_and_stability_sentences() {
    let run = redprod(&["--json", "gen-scp", "--phi", "P(x)", "--psi", "P(x)", "--psi", "Q(x, y)"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let v = json(&run);
    assert_eq!(v["threshold"], "0");
    assert!(parse_formula_inferred(v["sentence"].as_str().unwrap()).unwrap().0.is_sentence());
    let dec = redprod(&["gen-scp", "--phi", "P(x)", "--psi", "P(x)", "--psi", "P(x)", "--connective", "pl{(0,1),(1,0)}slopes[-1,-1]", "--connective", "pl{(0,1),(1,0)}slopes[-1,-1]"]);
    assert_eq!(dec.code, 2);
    let inc = redprod(&[
        "gen-scp", "--mono", "nonincreasing", "--phi", "P(x)", "--psi", "P(x)", "--psi", "P(x)",
        "--connective", "pl{(0,1),(1,0)}slopes[-1,-1]", "--connective", "pl{(0,1),(1,0)}slopes[-1,-1]",
    ]);
    assert_eq!(inc.code, 0, "{}", inc.stderr);
    let classical = redprod(&["gen-scp", "--classical", "--phi", "P(x)", "--psi", "Q(x)"]);
    assert_eq!(classical.code, 0, "{}", classical.stderr);
    assert!(parse_classical_inferred(classical.stdout.trim()).unwrap().0.is_sentence());
    let stab = redprod(&["stability-criterion", "--phi", "d(x, y)"]);
    assert_eq!(stab.code, 0);
    assert!(stab.stdout.trim().ends_with("<= 0"));
    assert_eq!(redprod(&["stability-criterion", "--phi", "min(P(x), Q(y))"]).code, 2);
}

#[test]
fn approximation_stays_within_two_eps() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", &unary(&["0", "1/3", "1"]));
    let run = redprod(&["--json", "approx", "--phi", "sup y. max(P(x), d(x, y))", "--eps", "1/2", "--measure", s(&m)]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let v = json(&run);
    let gap: Rational = serde_json::from_value(v["max_deviation"].clone()).unwrap();
    assert!(gap <= Rational::ONE, "{gap}");
    assert_eq!(v["thresholds"], serde_json::json!(["0", "1/2", "1"]));
    let elim = redprod(&["--json", "approx", "--phi", "P(x)", "--gamma", "P(y)", "--var", "x", "--eps", "1", "--measure", s(&m)]);
    assert_eq!(elim.code, 0, "{}", elim.stderr);
    let v = json(&elim);
    assert!(v["fragments"].as_array().unwrap().contains(&Value::from("b-combination")));
    let bad = redprod(&["approx", "--phi", "P(x)", "--eps", "2/3"]);
    assert_eq!(bad.code, 2);
}
