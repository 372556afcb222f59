use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tangenocchi"))
        .args(args)
        .env_remove("TANGENOCCHI_BUDGET_SHAPES")
        .env_remove("TANGENOCCHI_BUDGET_FACTORIAL")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&full)).unwrap()
}

fn column(v: &Value, name: &str) -> Vec<String> {
    v["rows"].as_array().unwrap().iter().map(|r| r[name].as_str().unwrap_or("").to_string()).collect()
}

/// Reads a CSV column back through the csv crate.
fn csv_column(text: &str, name: &str) -> Vec<String> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let idx = rdr.headers().unwrap().iter().position(|h| h == name).unwrap();
    rdr.records().map(|r| r.unwrap()[idx].to_string()).collect()
}

#[test]
fn seq_tangent_table() {
    let v = json(&["seq", "--kind", "tangent", "--n-max", "6"]);
    assert_eq!(column(&v, "T_{2n+1}"), ["1", "2", "16", "272", "7936", "353792", "22368256"]);
    assert_eq!(v["command"], "seq");
}

#[test]
fn seq_m_ternary_csv_round_trip() {
    let text = stdout(&["seq", "--kind", "m", "--k", "3", "--n-max", "5", "--format", "csv"]);
    assert!(text.starts_with("n,index,M_{6n+3}\n"));
    assert!(!text.contains('\r'));
    assert_eq!(
        csv_column(&text, "M_{6n+3}"),
        ["1", "70", "500500", "43001959000", "21100495466050000", "39781831724228093500000"]
    );
    assert_eq!(csv_column(&text, "index"), ["3", "9", "15", "21", "27", "33"]);
}

#[test]
fn seq_fuss_catalan() {
    let v = json(&["seq", "--kind", "fuss-catalan", "--k", "2", "--n-max", "3"]);
    assert_eq!(column(&v, "C_2(n)"), ["1", "1", "2", "5"]);
}

#[test]
fn json_integers_beyond_double_precision_are_strings() {
    let v = json(&["seq", "--kind", "m", "--k", "4", "--n-max", "4"]);
    let last = v["rows"][4]["M_{12n+4}"].as_str().unwrap();
    assert_eq!(last, "6992644904557760596067178252404694486328125");
}

#[test]
fn classes_binary_four() {
    let v = json(&["classes", "--k", "2", "--n", "4"]);
    assert_eq!(column(&v, "class_size"), ["8", "2", "4", "14"]);
    assert_eq!(column(&v, "labelings"), ["384", "640", "896", ""]);
    assert_eq!(column(&v, "total"), ["3072", "1280", "3584", "7936"]);
    assert_eq!(column(&v, "quotient"), ["60", "25", "70", "155"]);
    assert_eq!(v["rows"][3]["class"], "sum");
}

#[test]
fn classes_binary_three_and_zero() {
    let text = stdout(&["classes", "--k", "2", "--n", "3", "--format", "csv"]);
    assert_eq!(csv_column(&text, "total"), ["192", "80", "272"]);
    let text = stdout(&["classes", "--k", "2", "--n", "0", "--format", "csv"]);
    assert_eq!(csv_column(&text, "total"), ["1", "1"]);
    assert_eq!(csv_column(&text, "class"), ["L", "sum"]);
}

#[test]
fn verify_theorem3() {
    let v = json(&["verify", "--scope", "theorem3", "--n-range", "0..10"]);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["rows"].as_array().unwrap().len(), 11);
    assert_eq!(v["rows"][4]["detail"], "f(4) = 99225");
}

#[test]
fn verify_theorem2() {
    let v = json(&["verify", "--scope", "theorem2", "--k-range", "2..4"]);
    assert_eq!(v["status"], "pass");
    assert!(column(&v, "result").iter().all(|r| r == "pass"));
}

#[test]
fn verify_lemmas_and_theorem1() {
    for scope in ["lemmas", "theorem1"] {
        let v = json(&["verify", "--scope", scope]);
        assert_eq!(v["status"], "pass", "{scope}");
    }
}

#[test]
fn residues_examples() {
    let v = json(&["residues", "--k", "8", "--n-max", "7"]);
    assert_eq!(column(&v, "m_n"), ["1", "1", "5", "5", "1", "1", "5", "5"]);
    assert_eq!(v["summary"]["period"], "4 from n=0 (2 repetitions observed)");

    let v = json(&["residues", "--k", "6", "--n-max", "4"]);
    assert_eq!(column(&v, "m_n"), ["1", "0", "0", "0", "0"]);
    assert_eq!(v["summary"]["period"], "1 from n=1 (4 repetitions observed)");
}

#[test]
fn residues_625_prefix() {
    // The direct cross-check is the expensive part; the residues do not
    // depend on it.
    let v = json(&["residues", "--k", "625", "--n-max", "4", "--budget-factorial", "400000"]);
    assert_eq!(column(&v, "m_n"), ["1", "1", "126", "376", "126"]);
}

#[test]
fn output_is_deterministic() {
    for format in ["table", "csv", "json"] {
        let args = ["classes", "--k", "3", "--n", "3", "--format", format];
        assert_eq!(stdout(&args), stdout(&args));
    }
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(args).status.code().unwrap();
    assert_eq!(code(&["seq", "--kind", "tangent", "--n-max", "2"]), 0);
    assert_eq!(code(&["seq", "--kind", "tangent", "--k", "3"]), 2);
    assert_eq!(code(&["seq", "--kind", "m"]), 2);
    assert_eq!(code(&["seq", "--kind", "bernoulli"]), 2);
    assert_eq!(code(&["residues", "--k", "1"]), 2);
    assert_eq!(code(&["verify", "--k-range", "4..2"]), 2);
    assert_eq!(code(&["classes", "--k", "2", "--n", "9", "--budget-shapes", "100"]), 3);
}

#[test]
fn budget_env_var_mirrors_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_tangenocchi"))
        .args(["classes", "--k", "2", "--n", "9"])
        .env("TANGENOCCHI_BUDGET_SHAPES", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("--budget-shapes"), "{err}");
}
