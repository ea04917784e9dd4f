use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coherent-surplus"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn w1() -> String {
    fixture("w1.json").display().to_string()
}

fn w1_model4() -> String {
    fixture("w1-model4.json").display().to_string()
}

#[test]
fn model2_json_report() {
    let o = bin(&["run", "--model", "2", &w1()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let report = &v[0];
    assert_eq!(report["model"], "reinsured");
    let r = report["retention"]["retention"].as_f64().unwrap();
    assert!((r - 29.0 / 9.0).abs() < 1e-11);
    assert_eq!(report["verdicts"][0]["accepted"], true);
}

#[test]
fn all_models_csv_has_four_sections() {
    let o = bin(&["run", "--model", "all", &w1_model4(), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        ["model", "kind", "name", "value", "atom_w1", "atom_w2", "atom_w3", "atom_w4"]
    );
    let mut models: Vec<String> = reader
        .records()
        .map(|r| r.unwrap()[0].to_string())
        .collect();
    models.dedup();
    assert_eq!(models, ["1", "2", "3", "4"]);
}

#[test]
fn underpriced_premia_are_an_input_error() {
    let o = bin(&[
        "run",
        "--model",
        "3",
        &fixture("w1-underpriced.json").display().to_string(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("premia.agent1"), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
}

#[test]
fn rejected_verdict_exits_with_three() {
    // No initial capital and agent 2 at its fair premium: agent 1 owns the
    // whole surplus and so carries the aggregate risk, worth less to it than
    // its own claim.
    let text = std::fs::read_to_string(fixture("w1-model4.json"))
        .unwrap()
        .replace("\"capital\": 1", "\"capital\": 0")
        .replace("\"100/64\"", "5")
        .replace("\"93/64\"", "\"19/16\"");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("expensive.json");
    std::fs::write(&path, text).unwrap();
    let o = bin(&[
        "run",
        "--model",
        "3",
        path.to_str().unwrap(),
        "--format",
        "text",
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stdout(&o).contains("agent1.accepted = false"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for format in ["json", "csv", "text"] {
        let a = bin(&["run", "--model", "all", &w1_model4(), "--format", format]);
        let b = bin(&["run", "--model", "all", &w1_model4(), "--format", format]);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{format}");
    }
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.txt");
    let o = bin(&[
        "run",
        "--model",
        "1",
        &w1(),
        "--format",
        "text",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.starts_with("== model 1 ==\n"));
    assert!(text.contains("insurer.utility = 1.19140625\n"));
}

#[test]
fn sweep_command() {
    let o = bin(&[
        "sweep",
        &w1_model4(),
        "--grid",
        "0.25:8:32",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("capital,retention,insurer_utility"));
    assert_eq!(text.lines().filter(|l| !l.starts_with("check")).count(), 33);
    assert!(text.contains("check,monotone,true"));

    let o = bin(&["sweep", &w1_model4(), "--grid", "2:2:1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o)
            .lines()
            .filter(|l| !l.starts_with("check"))
            .count(),
        2
    );

    let o = bin(&["sweep", &w1_model4(), "--grid", "-1:2:3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("grid.lo"));

    let o = bin(&["sweep", &w1(), "--grid", "1:2:3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("premia"));
}

#[test]
fn verify_command() {
    let o = bin(&[
        "verify",
        "--seed",
        "7",
        "--instances",
        "20",
        "--format",
        "text",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("[PASS] choquet utility"));
    assert!(!stdout(&o).contains("[FAIL]"));
}

#[test]
fn run_with_verify_flag_appends_the_suite() {
    let o = bin(&[
        "run",
        "--model",
        "2",
        &w1(),
        "--format",
        "text",
        "--verify",
        "--seed",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("== model 2 =="));
    assert!(text.contains("seed 3 over 200 instances"));
}

#[test]
fn validate_command() {
    let o = bin(&["validate", &w1()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "ok: 4 atoms, 2 agents, reinsurer\n");

    let text = std::fs::read_to_string(fixture("w1.json"))
        .unwrap()
        .replace(
            r#""probs": ["1/4", "1/4", "1/4", "1/4"]"#,
            r#""probs": [0.25, 0.25, 0.25, 0.24]"#,
        );
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, text).unwrap();
    let o = bin(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("space.probs"), "{}", stderr(&o));
}

#[test]
fn model4_without_reinsurer_names_the_field() {
    let text = std::fs::read_to_string(fixture("w1-model4.json"))
        .unwrap()
        .replace(r#""reinsurer": "power:3","#, "");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("no-reinsurer.json");
    std::fs::write(&path, text).unwrap();
    let o = bin(&["run", "--model", "4", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("utilities.reinsurer"), "{}", stderr(&o));
}
