use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jumploci")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn grp(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".grp").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn fox_entry_in_fraction_form() {
    let o = run(&["fox", "--builtin", "cs", "--entry", "x,1", "--format", "paper"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "-(r^4*s^2 + r^4 + r^3*s + r^2*s^2 + r^2*s + r*s^2 + s^3)/s^3");
}

#[test]
fn fox_on_a_user_file() {
    let f = grp("gens: a b\nrel: a^2 b^-3\n");
    let o = run(&["fox", "--file", f.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("dR1/da = t^3 + 1"), "{out}");
    assert!(out.contains("dR1/db = -t^4 - t^2 - 1"), "{out}");

    let o = run(&["fox", "--file", f.path().to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.is_object());
}

#[test]
fn syntax_errors_exit_with_usage_code() {
    let f = grp("gens: a\nrel: a^^2 q\n");
    let o = run(&["fox", "--file", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2, column 8"), "{}", stderr(&o));
}

#[test]
fn missing_file_and_bad_flags_exit_2() {
    assert_eq!(run(&["fox", "--file", "/nonexistent/x.grp"]).status.code(), Some(2));
    assert_eq!(run(&["count"]).status.code(), Some(2));
    assert_eq!(run(&["fox", "--builtin", "cs", "--entry", "w,1"]).status.code(), Some(2));
}

#[test]
fn verify_cs_reports_the_table_discrepancy() {
    let o = run(&["verify-cs", "--samples", "10", "--n-max", "4"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("[FAIL] tables"), "{out}");
    assert!(out.contains("[PASS] census"), "{out}");
    assert!(out.contains("[PASS] invariants"), "{out}");
    assert!(stderr(&o).contains("tables"));
}

#[test]
fn mutated_fixture_names_the_entry() {
    let o = run(&["verify-cs", "--mutate-fixture", "0", "--samples", "5", "--n-max", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("dR1/dx"), "{}", stderr(&o));
}

#[test]
fn verify_cs_json_is_deterministic() {
    let args = ["verify-cs", "--n-max", "1", "--samples", "8", "--seed", "7", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["census"].as_array().unwrap().len(), 1);
    assert_eq!(v["census"][0]["rows"], 1);
}

#[test]
fn count_of_index_6() {
    let o = run(&["count", "--n", "6"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("12"));
    assert_eq!(stdout(&o).lines().count(), 13);
}

#[test]
fn census_csv_up_to_6() {
    let o = run(&["census", "--builtin", "cs", "--n-max", "6", "--format", "csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 1 + 3 + 4 + 7 + 6 + 12);
    assert!(rows.iter().all(|r| r.ends_with(",2")));
}

#[test]
fn invariants_of_a_ball_quotient() {
    let o = run(&["invariants", "--q", "1", "--pg", "3", "--c2", "9"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ball_quotient"], true);
    assert_eq!(v["c1_sq"], 27);
    assert_eq!(v["chi"], 3);
}

#[test]
fn strata_on_the_tables_is_confirmed() {
    let o = run(&["strata", "--matrix", "tables", "--samples", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["strata", "--samples", "20", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "refuted");
}
