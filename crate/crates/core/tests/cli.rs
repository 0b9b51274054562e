use maxspec::{builtin_psi, compute_spectrum, hill_estimate, PsiTable};
use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn maxspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxspec")).args(args).env_remove("MAXSPEC_PSI_TABLE").output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = maxspec(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn failure(out: &Output) -> Value {
    assert!(!out.status.success());
    serde_json::from_slice(&out.stderr).unwrap()
}

fn simulate(dir: &Path, dist: &str, n: usize) -> String {
    let path = dir.join("sample.txt");
    let p = path.to_str().unwrap().to_string();
    ok(&["simulate", "--dist", dist, "--n", &n.to_string(), "--output", &p]);
    p
}

#[test]
fn full_range_estimate_on_frechet_sample() {
    let dir = tempfile::tempdir().unwrap();
    let input = simulate(dir.path(), "frechet:alpha=1.5", 1 << 17);
    let r: Value = serde_json::from_str(&ok(&["estimate", "--input", &input, "--j1", "1"])).unwrap();
    let alpha = r["alpha"].as_f64().unwrap();
    assert!((1.47..=1.53).contains(&alpha), "alpha {alpha}");
    assert!((0.0025..=0.0035).contains(&r["seH"].as_f64().unwrap()));
    assert_eq!(r["j1"], 1);
    assert_eq!(r["j2"], 17);
    assert_eq!(r["spectrum"].as_array().unwrap().len(), 17);
    assert!(r["trace"].is_null());
    assert_eq!(r["ci"]["method"]["kind"], "asymptotic");
    assert_eq!(r["psi"]["kind"], "builtin");
}

#[test]
fn simulate_then_estimate_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = simulate(dir.path(), "exp_frechet_mixture:alpha=1", 1 << 14);
    let first = (std::fs::read(&a).unwrap(), ok(&["estimate", "--input", &a]));
    let b = simulate(dir.path(), "exp_frechet_mixture:alpha=1", 1 << 14);
    let second = (std::fs::read(&b).unwrap(), ok(&["estimate", "--input", &b]));
    assert_eq!(first, second);
    let r: Value = serde_json::from_str(&first.1).unwrap();
    assert!(!r["trace"]["steps"].as_array().unwrap().is_empty());
    assert_eq!(r["trace"]["selectedJ1"], r["j1"]);
}

#[test]
fn reports_parse_back_losslessly() {
    let dir = tempfile::tempdir().unwrap();
    let input = simulate(dir.path(), "pareto:alpha=1.2", 5000);
    let data = maxspec::io::read_series(Path::new(&input), None).unwrap();
    let direct = maxspec::DistributionSpec::Pareto { alpha: 1.2, sigma0: 1.0 }
        .sample(5000, maxspec::SeededStream::default())
        .unwrap();
    assert_eq!(data, direct);

    let json: Value = serde_json::from_str(&ok(&["estimate", "--input", &input, "--j1", "2"])).unwrap();
    let spec = compute_spectrum(&data).unwrap();
    for p in json["spectrum"].as_array().unwrap() {
        let j = p["j"].as_u64().unwrap() as usize;
        assert_eq!(p["y"].as_f64(), spec.y(j));
    }
    let csv = ok(&["estimate", "--input", &input, "--j1", "2", "--format", "csv"]);
    let alpha_line = csv.lines().find_map(|l| l.strip_prefix("# alpha=")).unwrap();
    assert_eq!(alpha_line.parse::<f64>().unwrap(), json["alpha"].as_f64().unwrap());
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "j,nj,y,errorbar");
    assert_eq!(rows.len(), 1 + spec.j_max);
    let y1: f64 = rows[1].split(',').nth(2).unwrap().parse().unwrap();
    assert_eq!(Some(y1), spec.y(1));
}

#[test]
fn constant_input_reports_zero_slope() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flat.txt");
    std::fs::write(&path, "7\n".repeat(1024)).unwrap();
    let out = maxspec(&["estimate", "--input", path.to_str().unwrap()]);
    let err = failure(&out);
    assert_eq!(err["error"]["kind"], "non_positive_slope");
    assert_eq!(err["error"]["message"], "degenerate spectrum: zero slope");
    assert_eq!(err["partial"]["H"].as_f64(), Some(0.0));
}

#[test]
fn input_errors_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "# values\n1.0\n2.0\n\nthree\n").unwrap();
    let err = failure(&maxspec(&["hill", "--input", bad.to_str().unwrap()]));
    assert_eq!(err["error"]["kind"], "parse");
    assert!(err["error"]["message"].as_str().unwrap().contains("line 5"));

    let err = failure(&maxspec(&["estimate", "--input", dir.path().join("missing").to_str().unwrap()]));
    assert_eq!(err["error"]["kind"], "input");

    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "# nothing\n").unwrap();
    assert_eq!(failure(&maxspec(&["estimate", "--input", empty.to_str().unwrap()]))["error"]["kind"], "input");

    let usage = maxspec(&["estimate"]);
    assert_eq!(usage.status.code(), Some(2));
    assert_eq!(failure(&usage)["error"]["kind"], "usage");

    let input = simulate(dir.path(), "frechet:alpha=1", 256);
    let err = failure(&maxspec(&["estimate", "--input", &input, "--j1", "5", "--j2", "3"]));
    assert_eq!(err["error"]["kind"], "range");
    let err = failure(&maxspec(&["bootstrap", "--input", &input, "--j1", "1", "--replicates", "10"]));
    assert_eq!(err["error"]["kind"], "parameter");
}

#[test]
fn multi_column_input_needs_a_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let mut text = String::from("id,loss\n");
    for i in 1..=64 {
        text.push_str(&format!("{i},{}\n", (i * 37 % 101) as f64 + 0.5));
    }
    std::fs::write(&path, text).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(failure(&maxspec(&["hill", "--input", p]))["error"]["kind"], "input");
    let by_name: Value = serde_json::from_str(&ok(&["hill", "--input", p, "--column", "loss", "--k", "10"])).unwrap();
    let by_index: Value = serde_json::from_str(&ok(&["hill", "--input", p, "--column", "2", "--k", "10"])).unwrap();
    assert_eq!(by_name, by_index);
}

#[test]
fn hill_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let input = simulate(dir.path(), "pareto:alpha=2", 2000);
    let data = maxspec::io::read_series(Path::new(&input), None).unwrap();
    let r: Value = serde_json::from_str(&ok(&["hill", "--input", &input, "--k", "100"])).unwrap();
    assert_eq!(r["hill"][0]["alpha"].as_f64().unwrap(), hill_estimate(&data, 100).unwrap());
    let csv = ok(&["hill", "--input", &input, "--format", "csv"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("k,alpha"));
    assert_eq!(lines.count(), 1999);
}

#[test]
fn bootstrap_is_thread_count_independent() {
    let dir = tempfile::tempdir().unwrap();
    let input = simulate(dir.path(), "frechet:alpha=1", 1 << 11);
    let args = ["bootstrap", "--input", &input, "--j1", "1", "--replicates", "200", "--seed", "9"];
    let one = ok(&[&args[..], &["--threads", "1"]].concat());
    let three = ok(&[&args[..], &["--threads", "3"]].concat());
    assert_eq!(one, three);
    let r: Value = serde_json::from_str(&one).unwrap();
    assert_eq!(r["method"]["kind"], "permutation");
    assert_eq!(r["method"]["replicates"], 200);
    assert_eq!(r["method"]["seed"], 9);
    let csv = ok(&[&args[..], &["--format", "csv"]].concat());
    assert!(csv.starts_with("level,H,H_low,H_high,alpha_low,alpha_high,replicates,seed,stream,dropped\n"));
}

#[test]
fn psi_table_regeneration_and_override() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("psi.csv");
    let t = table.to_str().unwrap();
    ok(&["psi-table", "--max-lag", "12", "--pairs", "250000", "--bags", "4", "--output", t]);
    let parsed = PsiTable::from_csv(&std::fs::read_to_string(&table).unwrap()).unwrap();
    assert_eq!(parsed.max_lag(), 12);
    for (a, b) in parsed.values().iter().zip(builtin_psi().values()) {
        assert!((a - b).abs() < 0.05, "{a} vs {b}");
    }

    let input = simulate(dir.path(), "frechet:alpha=1", 1 << 10);
    let out = Command::new(env!("CARGO_BIN_EXE_maxspec"))
        .args(["estimate", "--input", &input, "--j1", "1"])
        .env("MAXSPEC_PSI_TABLE", t)
        .output()
        .unwrap();
    assert!(out.status.success());
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["psi"]["kind"], "monte_carlo");
    assert_eq!(r["psi"]["pairs"], 250000);

    let out = Command::new(env!("CARGO_BIN_EXE_maxspec"))
        .args(["estimate", "--input", &input, "--j1", "1"])
        .env("MAXSPEC_PSI_TABLE", dir.path().join("nope.csv"))
        .output()
        .unwrap();
    assert_eq!(failure(&out)["error"]["kind"], "input");
}

#[test]
fn simulate_json_and_bad_models() {
    let out = ok(&["simulate", "--dist", "stable:alpha=1.5,beta=0.2", "--n", "5", "--format", "json"]);
    let r: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(r["dist"]["model"], "stable");
    assert_eq!(r["values"].as_array().unwrap().len(), 5);
    let err = failure(&maxspec(&["simulate", "--dist", "gamma:shape=2", "--n", "5"]));
    assert_eq!(err["error"]["kind"], "parameter");
}
