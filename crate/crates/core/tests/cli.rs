use std::process::{Command, Output};

fn canyons(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_canyons")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn compare_distinguishes_the_deformation() {
    let o = canyons(&["compare", "x^3+y^12", "x^3+y^12+x^2*y^5"]);
    assert_eq!(o.status.code(), Some(3));
    let out = stdout(&o);
    assert!(out.starts_with("DISTINGUISHED"));
    assert!(out.contains("witness: canyon degree multiset {11/2} != {6, 6}"));
}

#[test]
fn compare_accepts_the_quartic_pair() {
    let o = canyons(&["compare", "z^4 + z^2*w^2 + w^4", "z^4 + w^4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "INDISTINGUISHABLE\n");
}

#[test]
fn analyze_reports_the_canyon() {
    let o = canyons(&["analyze", "x^3+y^12"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("degree 11/2, jet 0, multiplicity 2, h = 12, a = 1, partial Milnor 22, curvature 24*(2pi)"));
    assert!(out.contains("Milnor number: 22"));
}

#[test]
fn json_report_is_deterministic_and_independent_of_threads() {
    let a = canyons(&["analyze", "--json", "x^2+y^3"]);
    let b = canyons(&["--threads", "4", "analyze", "--json", "x^2+y^3"]);
    let c = canyons(&["--threads", "1", "analyze", "--json", "x^2+y^3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["milnor"], 2);
    assert_eq!(v["canyons"][0]["degree"], "2");
    assert_eq!(v["canyons"][0]["h"], "3");
    assert_eq!(v["canyons"][0]["disk_geometry"]["disk_count"], 3);
    assert_eq!(v["signature"]["clusters"][0]["degree"], "2");
}

#[test]
fn milnor_agrees_with_resultants() {
    let o = canyons(&["milnor", "--json", "x^3 + y^12 + x^2*y^5"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["milnor"], 22);
    assert_eq!(v["resultant_oracle"], 22);
}

#[test]
fn y_var_swaps_the_roles() {
    let o = canyons(&["--y-var", "x", "analyze", "y^3 + x^12"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("y = 0   multiplicity 2, degree 11/2"));
}

#[test]
fn generic_polars_take_a_list_of_directions() {
    let o = canyons(&["generic-polars", "--tau", "1,-1/2+i", "--json", "x^3+y^12+x^2*y^5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[1]["polars"][0]["source"], "generic((-1/2+i))");
}

#[test]
fn input_errors_exit_with_1() {
    let o = canyons(&["analyze", "x^2 + y^3 )"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("position 10"));
    assert_eq!(canyons(&["analyze", "x^2 + 1"]).status.code(), Some(1));
    assert_eq!(canyons(&["analyze", "x^2"]).status.code(), Some(1));
    assert_eq!(canyons(&["bogus"]).status.code(), Some(1));
    assert_eq!(canyons(&["generic-polars", "--tau", "0", "x^3+y^4"]).status.code(), Some(1));
    assert_eq!(canyons(&["--help"]).status.code(), Some(0));
}

#[test]
fn a_short_fixed_horizon_is_an_analytic_failure() {
    let o = canyons(&["--horizon", "1", "analyze", "x^3+y^12+x^2*y^5"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("error in expansion"));
    assert!(err.contains("--horizon"));
}
