//! End-to-end tests of the binary: output bytes, exit codes, and
//! determinism across worker counts.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gf2collatz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Drops the trailing wall_ms column from data rows; header and comment
/// lines pass through.
fn strip_wall(csv: &str) -> String {
    csv.lines()
        .map(|line| {
            if line.starts_with('#') || line.starts_with("n,") {
                line.to_string()
            } else {
                line.rsplit_once(',').expect("columns").0.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn trace_prints_odd_degree_sequence() {
    assert_eq!(
        stdout_of(&["trace", "--poly", "x^31+x+1"]),
        "[31, 29, 24, 24, 16, 16, 16, 16, 0]\n"
    );
    // Hex input form means the same seed.
    assert_eq!(
        stdout_of(&["trace", "--poly", "0x80000003"]),
        "[31, 29, 24, 24, 16, 16, 16, 16, 0]\n"
    );
}

#[test]
fn trace_json_and_record_forms() {
    let json = stdout_of(&["trace", "--poly", "x^2+x+1", "--json"]);
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(value["seed"], "0x7");
    assert_eq!(value["m"], 2);
    assert_eq!(value["valuations"], serde_json::json!([[2, 2], [1, 1]]));

    let record = stdout_of(&["trace", "--poly", "x^2+x+1", "--record"]);
    assert_eq!(
        record,
        "seed=0x7 deg=2 m=2 r_a=3\n\
         k=0 odd=0x7 odd_deg=2 even=0x14 even_deg=4 a=2 b=2\n\
         k=1 odd=0x1 odd_deg=0 even=0x6 even_deg=2 a=1 b=1\n"
    );
}

#[test]
fn exit_codes() {
    // Domain error: zero polynomial.
    let out = run(&["trace", "--poly", "0x0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("zero polynomial"));

    // Domain error: malformed polynomial text.
    let out = run(&["trace", "--poly", "x^2+squid"]);
    assert_eq!(out.status.code(), Some(1));

    // Usage errors.
    assert_eq!(run(&["trace", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["search-f"]).status.code(), Some(2));

    // Domain error: degree over the ceiling.
    let out = run(&["search-f", "--n", "40"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ceiling"));
}

#[test]
fn count_command() {
    assert_eq!(stdout_of(&["count", "--degree", "6", "--stratum", "odd"]), "16\n");
    assert_eq!(
        stdout_of(&["count", "--degree", "3", "--stratum", "quadrants"]),
        "p(0)=0,4\np(0)=1,4\np(1)=0,4\np(1)=1,4\n"
    );
    assert_eq!(stdout_of(&["count", "--degree", "5", "--stratum", "all"]), "32\n");
    // Odd stratum is undefined at degree 0.
    assert_eq!(
        run(&["count", "--degree", "0", "--stratum", "odd"]).status.code(),
        Some(1)
    );
}

#[test]
fn search_f_is_deterministic_across_workers() {
    let expected_values = [0u64, 1, 2, 3, 4, 8, 10, 11, 12, 16, 18, 20];
    let base = stdout_of(&["search-f", "--n", "12", "--par", "1"]);
    for par in ["2", "8"] {
        let other = stdout_of(&["search-f", "--n", "12", "--par", par]);
        assert_eq!(strip_wall(&base), strip_wall(&other), "par={par}");
    }
    let mut lines = base.lines();
    assert_eq!(
        lines.next(),
        Some("n,value,witness_hex,convention,seeds_examined,wall_ms")
    );
    for (i, line) in lines.by_ref().take(12).enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[0], (i + 1).to_string());
        assert_eq!(fields[1], expected_values[i].to_string(), "row {}", i + 1);
        assert_eq!(fields[3], "transient");
    }
    assert!(lines.next().unwrap().starts_with("# convention:"));
}

#[test]
fn search_f_checkpoint_resume_matches() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("f.ck");
    let ck_str = ck.to_str().unwrap();
    let plain = stdout_of(&["search-f", "--n", "11", "--par", "3"]);
    let _ = stdout_of(&["search-f", "--n", "11", "--par", "3", "--checkpoint", ck_str]);
    // Simulate a kill partway through the checkpointed run.
    let bytes = std::fs::read(&ck).unwrap();
    std::fs::write(&ck, &bytes[..bytes.len() / 2]).unwrap();
    let resumed = stdout_of(&[
        "search-f", "--n", "11", "--par", "3", "--checkpoint", ck_str, "--resume",
    ]);
    assert_eq!(strip_wall(&plain), strip_wall(&resumed));
    // --resume without --checkpoint is a usage error.
    assert_eq!(run(&["search-f", "--n", "5", "--resume"]).status.code(), Some(2));
}

#[test]
fn search_g_csv_and_census_agree() {
    let csv = stdout_of(&["search-g", "--n", "8"]);
    let row8 = csv
        .lines()
        .find(|l| l.starts_with("8,"))
        .expect("row for n=8");
    let fields: Vec<&str> = row8.split(',').collect();
    assert_eq!(fields[1], "4"); // g(8) = 4
    assert_eq!(fields[3], "chain");

    let census_json = stdout_of(&["search-g", "--n", "8", "--census"]);
    let census: serde_json::Value = serde_json::from_str(&census_json).unwrap();
    assert_eq!(census["n"], 8);
    assert_eq!(census["max_chain_len"].to_string(), fields[1]);
    assert_eq!(census["witness_chain"][0], serde_json::json!(fields[2]));
    let histogram = census["histogram"].as_object().unwrap();
    let mass: u64 = histogram
        .iter()
        .map(|(len, c)| len.parse::<u64>().unwrap() * c.as_u64().unwrap())
        .sum();
    assert_eq!(mass, 64); // 2^(8-2)
}

#[test]
fn families_conjecture_csv() {
    // n = 32 sits on the 2^(s+1) <= n boundary, where the predicted length
    // 2^s+1 overshoots the observed one; the checker reports the failure as
    // a finding rather than an error.
    let csv = stdout_of(&["families", "--check", "c4", "--range", "31..34"]);
    assert_eq!(
        csv,
        "family,n,predicted,observed,verdict\n\
         t,31,9,9,holds\n\
         t,32,17,9,fails\n\
         t,33,17,17,holds\n\
         t,34,17,17,holds\n"
    );
    let text = stdout_of(&[
        "families", "--check", "c3", "--range", "31..31", "--format", "text",
    ]);
    assert!(text.contains("conjecture c3"));
    assert!(text.contains("n=31"));
    assert!(text.contains("holds"));
    // c2 interprets the range as r values.
    let c2 = stdout_of(&["families", "--check", "c2", "--range", "4..4"]);
    assert_eq!(c2.lines().count(), 9); // header + 8 rows for j = 0..=7
    assert!(c2.lines().all(|l| l.starts_with("family") || l.ends_with("holds")));

    // Out-of-domain range is a domain error.
    assert_eq!(
        run(&["families", "--check", "c3", "--range", "2..5"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["families", "--check", "c9", "--range", "2..5"]).status.code(),
        Some(1)
    );
}

#[test]
fn families_tables_mirror_rows() {
    let text = stdout_of(&["families", "--check", "tables", "--range", "31..32"]);
    assert!(text.contains("family t (x^n+x+1)"));
    assert!(text.contains("31 | [31, 29, 24, 24, 16, 16, 16, 16, 0] | 9"));
    assert!(text.contains("32 | [28, 27, 24, 23, 16, 16, 16, 16, 0] | 9")); // S_32
    assert!(text.contains("p1 | [14, 14, 13, 13, 12, 12, 10, 10, 9, 8, 7, 5, 4, 3, 0] | 15"));
}

#[test]
fn matthews_census_matches_library() {
    let cfg_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/matthews_ex1.cfg");
    let cfg_str = cfg_path.to_str().unwrap();
    let csv = stdout_of(&[
        "matthews",
        "--config",
        cfg_str,
        "--max-degree",
        "64",
        "--steps",
        "10000",
        "--all-seeds-upto",
        "4",
    ]);
    let cfg = gf2collatz::matthews::MatthewsConfig::divergent_example();
    let rows = gf2collatz::matthews::census(&cfg, 4, 64, 10_000);
    assert_eq!(csv, gf2collatz::matthews::census_csv(&rows));

    let single = stdout_of(&[
        "matthews",
        "--config",
        cfg_str,
        "--max-degree",
        "64",
        "--steps",
        "10000",
        "--seed",
        "0x1",
    ]);
    assert!(single.starts_with("seed=0x1 kind=degree_divergence"));

    // One of --seed / --all-seeds-upto is required.
    assert_eq!(
        run(&["matthews", "--config", cfg_str]).status.code(),
        Some(2)
    );
    // Bad config file is a domain error.
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "K=x^2+x\nD=x\nR[0]=0\nR[1]=1\n").unwrap();
    let out = run(&[
        "matthews",
        "--config",
        bad.to_str().unwrap(),
        "--seed",
        "0x1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("coprime"));
}
