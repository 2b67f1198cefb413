use std::process::{Command, Output};

fn gatesearch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gatesearch")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines().find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('\t'))).unwrap_or_else(|| panic!("no {key} in {text}"))
}

#[test]
fn schedule_prints_widths() {
    let o = gatesearch(&["schedule", "--n", "1024", "--k", "4", "--r", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).take(3).map(|l| l.split('\t').nth(1).unwrap()).collect::<Vec<_>>();
    assert_eq!(rows, ["20", "26", "1024"]);
    let json = gatesearch(&["schedule", "--n", "1024", "--k", "4", "--r", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["n_seq"], serde_json::json!([20, 26, 1024]));
}

#[test]
fn configuration_errors_exit_2_with_one_line() {
    for args in [&["schedule", "--n", "1024", "--k", "6", "--r", "2"][..], &["schedule", "--n", "20", "--k", "4", "--r", "9"]] {
        let o = gatesearch(args);
        assert_eq!(o.status.code(), Some(2));
        assert_eq!(String::from_utf8_lossy(&o.stderr).lines().count(), 1);
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn estimates() {
    let o = gatesearch(&["estimate", "--n", "1024", "--k", "4", "--r", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let row = out.lines().find(|l| l.contains("\trecursion.queries\t")).expect("query bound row");
    assert!(row.ends_with("\ttrue\ttrue"), "{row}");

    let o = gatesearch(&["estimate", "--grover02", "--n", "64"]);
    let out = stdout(&o);
    assert!(out.starts_with("# k=6 n_seq=20,64\n"), "{out}");

    let o = gatesearch(&["estimate", "--main-eps", "--n", "1024", "--epsilon", "1.0", "--relaxed", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("warning: relaxed mode; unmet preconditions: "));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["k"], "4096");
    assert_eq!(v["c"], "64/7");
    let eps = v["rows"].as_array().unwrap().iter().find(|r| r["bound"] == "epsilon").unwrap();
    assert_eq!(eps["holds"], true);
}

#[test]
fn simulations() {
    let o = gatesearch(&["simulate", "--pipeline", "--n-seq", "4,8", "--k", "4", "--solution", "37", "--boost"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(field(&out, "measured"), "1.00000000000");
    assert_eq!(field(&out, "queries"), "22");

    let o = gatesearch(&["simulate", "--c1", "--n", "4", "--k", "4", "--solution", "9"]);
    assert_eq!(field(&stdout(&o), "measured"), "0.250000000000");

    let o = gatesearch(&["simulate", "--c1", "--n", "30", "--k", "4", "--solution", "9"]);
    assert_eq!(o.status.code(), Some(3));

    let o = gatesearch(&["simulate", "--c1", "--n", "4", "--bits", "0010", "--k", "4"]);
    assert_eq!(field(&stdout(&o), "measured"), "0.250000000000");
    let o = gatesearch(&["simulate", "--c1", "--n", "4", "--bits", "0011", "--k", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_filters_and_catches_faults() {
    let o = gatesearch(&["verify", "--only", "facts"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 2, "{out}");
    assert!(out.lines().nth(1).unwrap().starts_with("facts\t"));
    let o = gatesearch(&["verify", "--only", "constructions", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL constructions: amplify n=2"));
}

#[test]
fn export_import_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c1.jsonl");
    let p = path.to_str().unwrap();
    let o = gatesearch(&["export", "--c1", "--n", "4", "--k", "4", "--output", p]);
    assert_eq!(o.status.code(), Some(0));
    let first = std::fs::read(&path).unwrap();
    let text = String::from_utf8(first.clone()).unwrap();
    assert!(text.starts_with("{\"wires\":5,\"ancilla\":[]}\n"));
    assert!(text.trim_end().ends_with("\"address_wires\":[0,1,2,3],\"flag_wires\":[4]}"));

    gatesearch(&["export", "--c1", "--n", "4", "--k", "4", "--output", p]);
    assert_eq!(std::fs::read(&path).unwrap(), first, "export is byte-stable");

    let built = stdout(&o);
    let o = gatesearch(&["import", "--input", p, "--solution", "11"]);
    assert_eq!(o.status.code(), Some(0));
    let imported = stdout(&o);
    for key in ["queries", "gates"] {
        assert_eq!(field(&built, key), field(&imported, key));
    }
    let diff: f64 = field(&imported, "difference").parse().unwrap();
    assert!(diff < 1e-12);

    let o = gatesearch(&["export", "--c1", "--n", "4", "--output", dir.path().join("missing/x.jsonl").to_str().unwrap()]);
    assert_ne!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("i/o error"));
}

#[test]
fn identical_configs_give_identical_output() {
    let args = ["estimate", "--n", "4096", "--k", "8", "--r", "2", "--boost", "--format", "json"];
    assert_eq!(gatesearch(&args).stdout, gatesearch(&args).stdout);
    let args = ["verify", "--only", "circuit,oracle", "--seed", "9"];
    let strip = |o: Output| stdout(&o).lines().map(|l| l.split('\t').take(3).collect::<Vec<_>>().join("\t")).collect::<Vec<_>>();
    assert_eq!(strip(gatesearch(&args)), strip(gatesearch(&args)));
}
