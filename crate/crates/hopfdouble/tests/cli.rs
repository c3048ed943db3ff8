use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopfdouble"))
        .args(args)
        .env("HOPFDOUBLE_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn module_algebra_suite_passes() {
    let o = run(&["verify", "--suite", "module-algebra", "--p", "2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("heterotic_module_algebra: pass"));
}

#[test]
fn truncate_reports_lambda_failure() {
    let o = run(&["truncate", "--p", "2", "--format", "json"]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "fail");
    let failed: Vec<&str> = v["failures"].as_array().unwrap().iter().map(|f| f["check"].as_str().unwrap()).collect();
    assert_eq!(failed, ["matp_isomorphism", "zdl_relations"]);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&["verify", "--suite", "nonsense"])), 2);
    assert_eq!(code(&run(&["build", "--p", "1"])), 2);
    assert_eq!(code(&run(&["eval", "E*foo"])), 2);
    assert_eq!(code(&run(&["eval", "E^7"])), 0);
    assert_eq!(code(&run(&["decompose", "--carrier", "lambda^x"])), 2);
    assert_eq!(code(&run(&[])), 2);
}

#[test]
fn same_seed_same_report() {
    let args = ["verify-closed-forms", "--p", "3", "--sample", "10000", "--seed", "7", "--format", "json"];
    let strip = |o: Output| {
        assert_eq!(code(&o), 0);
        let mut v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert!(v.as_object_mut().unwrap().remove("timestamp").is_some());
        serde_json::to_string(&v).unwrap()
    };
    let a = strip(run(&args));
    let b = strip(run(&args));
    assert_eq!(a, b);
    assert!(a.contains("\"seed\":7"));
}

#[test]
fn printed_elements() {
    let o = run(&["eval", "(q - q^-1)*F # 1"]);
    assert_eq!(stdout(&o).trim(), "(2*q)*F # 1");
    let o = run(&["act", "--host", "hbar", "F |> z"]);
    assert_eq!(stdout(&o).trim(), "1");
    let o = run(&["act", "k |> F*K^3 # E*k"]);
    assert_eq!(code(&o), 0);
    // k ▷ (F^aκ^b # E^ck^d) = q^{-a+c-b/2} times the same monomial
    let o2 = run(&["eval", "w^-3 * F*K^3 # E*k"]);
    assert_eq!(stdout(&o), stdout(&o2));
}

#[test]
fn decompose_json() {
    let o = run(&["decompose", "--p", "2", "--carrier", "hbar", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["multiplicities"]["P+2"], 2);
    assert_eq!(v["multiplicities"]["P-1"], 1);
    assert_eq!(v["audit"], true);
}

#[test]
fn export_then_check() {
    let dir = std::env::temp_dir().join(format!("hopfdouble-export-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("b.json");
    let p = path.to_str().unwrap();
    let o = run(&["export", "--p", "2", "--algebra", "b", "--format", "json", "--output", p]);
    assert_eq!(code(&o), 0);
    let o = run(&["check-hopf", "--input", p]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    // overwriting one structure constant with 2 must break an axiom
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let mult = v["mult"].as_array_mut().unwrap();
    let last = mult.last_mut().unwrap();
    last[3] = serde_json::json!({"num": [2, 0, 0, 0], "den": [1, 1, 1, 1]});
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    let o = run(&["check-hopf", "--input", p]);
    assert_eq!(code(&o), 1);
    std::fs::remove_dir_all(&dir).unwrap();
}
