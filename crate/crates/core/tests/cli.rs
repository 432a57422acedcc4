use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_atoral-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn mahler_csv() {
    let o = run(&["mahler", "x1 - 2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert!(text.starts_with("# atoral-lab v1, experiment=mahler, seed=0"));
    let value: f64 = row[header.iter().position(|&h| h == "value").unwrap()].parse().unwrap();
    assert!((value - 2f64.ln()).abs() < 1e-12);
}

#[test]
fn json_output() {
    let o = run(&["--json", "atoral", "--poly", "x1^2 - 3*x1 + 1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["experiment"], "atoral");
    assert_eq!(v["rows"][0]["verdict"], "yes");
}

#[test]
fn bad_input_exits_3() {
    assert_eq!(run(&["mahler", "x1 +* 2"]).status.code(), Some(3));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(run(&["orbit-average", "--poly", "x1"]).status.code(), Some(3));
}

#[test]
fn help_exits_0() {
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    for cmd in [
        "mahler",
        "orbit-average",
        "lsv-average",
        "reduction-pipeline",
        "ih-search",
        "separation-audit",
        "gauss-audit",
        "discrepancy",
        "lawton",
        "atoral",
    ] {
        assert!(stdout(&o).contains(cmd), "{cmd} missing from help");
    }
}

#[test]
fn discrepancy_from_file_and_out() {
    let dir = std::env::temp_dir().join(format!("atoral-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let pts = dir.join("pts.txt");
    let out = dir.join("out.csv");
    std::fs::write(&pts, "# grid\n0,0\n1/2,0\n0,1/2\n1/2,1/2\n").unwrap();
    let o = run(&["discrepancy", "--file", pts.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let row = text.lines().filter(|l| !l.starts_with('#')).nth(1).unwrap();
    assert!(row.starts_with("4,2,"), "{row}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn pipeline_reports_agreement() {
    let o = run(&[
        "reduction-pipeline",
        "--poly",
        "1 + x1 + x2",
        "--zeta",
        "1/101,5/101",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ok"], true);
}

#[test]
fn ih_search_unit_points() {
    let o = run(&["ih-search", "1 - x1", "--bmax", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let ns: Vec<String> = stdout(&o)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().to_string())
        .collect();
    assert_eq!(ns, ["6", "10", "12"]);
}
