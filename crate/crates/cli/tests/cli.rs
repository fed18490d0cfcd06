use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hamming-intersect")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn exact_small_examples() {
    for (n, k, r, want) in [("6", "2", "1", "1"), ("4", "2", "1", "1"), ("6", "2", "2", "8")] {
        let out = run(&["exact", "--n", n, "--k", k, "--r", r]);
        assert_eq!(out.status.code(), Some(0), "{n} {k} {r}");
        assert_eq!(stdout(&out).trim(), want, "{n} {k} {r}");
    }
}

#[test]
fn exact_with_oracle_reports_match() {
    let out = run(&["exact", "--n", "12", "--k", "4", "--r", "4", "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[1], format!("oracle {}", lines[0]));
    assert_eq!(lines[2], "MATCH");
}

#[test]
fn exact_from_centers_file() {
    let dir = std::env::temp_dir().join(format!("hi-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("centers.txt");
    std::fs::write(&path, "10110010\n01100111\n11011000\n").unwrap();
    let out = run(&["exact", "--centers-file", path.to_str().unwrap(), "--r", "3", "--oracle"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).ends_with("MATCH\n"));

    std::fs::write(&path, "1011\n0110\n").unwrap();
    let out = run(&["exact", "--centers-file", path.to_str().unwrap(), "--r", "1"]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn invalid_arguments_exit_two() {
    let cases: &[&[&str]] = &[
        &["exact", "--n", "4", "--k", "3", "--r", "1"],
        &["exact", "--n", "6", "--k", "2", "--r", "7"],
        &["exact", "--n", "30", "--k", "4", "--r", "4", "--oracle"],
        &["rate", "f3", "--alpha", "0.1", "--beta", "0.3"],
        &["rate", "f3", "--alpha", "0.3", "--beta", "0.7"],
        &["rate", "g2", "--alpha", "0.6", "--beta", "0.2"],
        &["critical", "--C", "1", "--t", "4,2"],
        &["sweep", "--alpha", "0.3", "--beta-min", "0.5", "--beta-max", "0.1", "--steps", "4"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn rates_at_reference_point() {
    let out = run(&["rate", "g2", "--alpha", "0.3", "--beta", "0.2"]);
    assert_eq!(stdout(&out), "g2 0.588497551807\n");

    let out = run(&["--format", "json", "rate", "f3", "--alpha", "0.3", "--beta", "0.2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let f3 = v["value"].as_f64().unwrap();
    assert!(f3 > 0.0 && f3 < 0.588497551807);
    assert!(v["active_constraints"].as_array().unwrap().iter().any(|c| c == "rho-at-alpha"));
}

#[test]
fn output_is_deterministic() {
    let cases: &[&[&str]] = &[
        &["rate", "f3", "--alpha", "0.27", "--beta", "0.31"],
        &["--format", "json", "sweep", "--alpha", "0.2", "--beta-min", "0.05", "--beta-max", "0.4", "--steps", "6"],
        &["--format", "csv", "critical", "--C", "2", "--t", "4,8,16"],
    ];
    for args in cases {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn sweep_csv_round_trips() {
    let out =
        run(&["--format", "csv", "sweep", "--alpha", "0.3", "--beta-min", "0.05", "--beta-max", "0.6", "--steps", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(reader.headers().unwrap(), vec!["beta", "f3", "g2", "gap"]);
    let rows: Vec<Vec<f64>> =
        reader.records().map(|r| r.unwrap().iter().map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 8);
    assert_eq!(rows[0][0], 0.05);
    assert_eq!(rows[7][0], 0.6);
    for row in &rows {
        assert!(row[1] <= row[2] + 1e-9, "{row:?}");
        assert!((row[3] - (row[2] - row[1])).abs() < 1e-10, "{row:?}");
    }
    assert!(rows.windows(2).all(|w| w[1][1] <= w[0][1] + 1e-6));
}

#[test]
fn sweep_notes_go_to_stderr() {
    // beta beyond 2 alpha is outside the nontrivial regime and gets dropped.
    let out =
        run(&["--format", "csv", "sweep", "--alpha", "0.1", "--beta-min", "0.05", "--beta-max", "0.3", "--steps", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!out.stderr.is_empty());
    let rows = csv::Reader::from_reader(out.stdout.as_slice()).records().count();
    assert!(rows < 6 && rows > 0);
}

#[test]
fn converge_deviations_shrink() {
    let out = run(&["--format", "csv", "converge", "--alpha", "0.3", "--beta", "0.2", "--n", "100,200,400"]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let dev: Vec<f64> = reader.records().map(|r| r.unwrap()[5].parse().unwrap()).collect();
    assert_eq!(dev.len(), 3);
    assert!(dev[1] <= 0.75 * dev[0] && dev[2] <= 0.75 * dev[1], "{dev:?}");
}

#[test]
fn critical_json_carries_exact_counts() {
    let out = run(&["--format", "json", "critical", "--C", "1", "--t", "2,4"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["rows"][0]["count"], "17");
    assert_eq!(v["rows"][1]["count"], "81");
}

#[test]
fn verify_fast_passes() {
    let out = run(&["verify", "--fast"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
    assert_eq!(text.lines().count(), 13);
}
