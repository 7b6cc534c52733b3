//! End-to-end tests of the binary: flag parsing, exit-status contract,
//! output determinism and exact round-trips.

use std::process::{Command, Output};

fn k3stab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3stab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn pairing_examples() {
    let out = k3stab(&["pairing", "--d", "3", "--v", "12,10,25", "--w", "12,10,25"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0\n");

    let out = k3stab(&["pairing", "--d", "1", "--v", "1,0,1", "--w", "1,0,1"]);
    assert_eq!(stdout(&out), "-2\n");

    let out = k3stab(&["pairing", "--d", "3", "--v", "1,0,1", "--w", "0,0,1"]);
    assert_eq!(stdout(&out), "-1\n");
}

#[test]
fn parse_failures_exit_nonzero() {
    let out = k3stab(&["pairing", "--d", "3", "--v", "12,10", "--w", "1,0,1"]);
    assert_eq!(out.status.code(), Some(1));

    let out = k3stab(&["pairing", "--d", "0", "--v", "1,0,1", "--w", "1,0,1"]);
    assert_eq!(out.status.code(), Some(1));

    let out = k3stab(&["certify", "--d", "3", "--v", "1,0,1", "--sigma", "0,-1"]);
    assert_eq!(out.status.code(), Some(1));

    let out = k3stab(&[
        "certify", "--d", "3", "--v", "1,0,1", "--sigma", "0,2", "--assume", "nonsense",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn certify_exit_codes_follow_the_verdict() {
    let out = k3stab(&[
        "certify",
        "--d",
        "3",
        "--v",
        "12,10,25",
        "--sigma",
        "0,2",
        "--assume",
        "gieseker-stable",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("A5 Stable"));

    let out = k3stab(&[
        "certify",
        "--d",
        "3",
        "--v",
        "1,0,1",
        "--sigma",
        "1,1",
        "--assume",
        "mu-stable-locally-free",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("A11 Stable"));

    let out = k3stab(&["certify", "--d", "3", "--v", "0,0,1", "--sigma", "0,2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).starts_with("A6 NotApplicable"));

    // bound failure is a plain no-conclusion, not an error
    let out = k3stab(&[
        "certify",
        "--d",
        "3",
        "--v",
        "12,10,25",
        "--sigma",
        "0,1",
        "--assume",
        "gieseker-stable",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn certify_json_carries_the_exact_bound() {
    let out = k3stab(&[
        "certify",
        "--d",
        "3",
        "--v",
        "12,10,25",
        "--sigma",
        "0,2",
        "--assume",
        "gieseker-stable",
        "--format",
        "json",
        "--verify",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let j: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(j["theorem"], "A5");
    assert_eq!(j["verdict"], "Stable");
    assert_eq!(j["oracle"]["outcome"], "no-numerical-destabilizer");
    let hyps = j["hypotheses"].as_array().unwrap();
    assert!(hyps.iter().any(|h| h["name"] == "slope_bound"
        && h["instance"].as_str().unwrap().contains("10 <= d*y^2 = 12")));
}

#[test]
fn classify_examples() {
    let out = k3stab(&["classify", "--d", "3", "--v", "12,10,25"]);
    assert!(stdout(&out).starts_with("MuStableLocallyFree"));

    let out = k3stab(&["classify", "--d", "1", "--v", "4,2,1"]);
    assert!(stdout(&out).starts_with("SquareAmbiguous, witness 2,1,1"));

    let out = k3stab(&["classify", "--d", "3", "--v", "12,10,24"]);
    let text = stdout(&out);
    assert!(text.starts_with("NotFine"));
    assert!(text.contains("gcd: 12"));
}

#[test]
fn walls_line_circle_and_degenerate_pair() {
    let out = k3stab(&["walls", "--d", "1", "--a", "1,0,1", "--e", "0,0,1"]);
    let text = stdout(&out);
    assert!(text.contains("(-1)x + (0) = 0"));
    assert!(text.contains("x=0 y^2=1 y=1"));

    let out = k3stab(&[
        "walls",
        "--d",
        "3",
        "--a",
        "1,1,4",
        "--e",
        "1,0,1",
        "--samples",
        "5",
    ]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 6, "curve line plus five samples");

    let out = k3stab(&["walls", "--d", "1", "--a", "2,4,6", "--e", "1,2,3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn scan_csv_is_deterministic_and_headed() {
    let args = [
        "scan",
        "--d",
        "3",
        "--v",
        "12,10,25",
        "--grid",
        "-1,2,1/4,4,1/4",
    ];
    let first = k3stab(&args);
    let second = k3stab(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "byte-identical reruns");
    let text = stdout(&first);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,in_VX,region,certificates"));
    assert_eq!(text.lines().count(), 1 + 13 * 16);
    assert!(text.contains("V_plus"));
    assert!(text.contains("V_minus"));
}

#[test]
fn degenerate_scan_emits_header_only() {
    let out = k3stab(&[
        "scan",
        "--d",
        "3",
        "--v",
        "12,10,25",
        "--grid",
        "2,-1,1,2,1/2",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "x,y,in_VX,region,certificates\n");
}

#[test]
fn scan_svg_renders_regions_and_requested_walls() {
    let out = k3stab(&[
        "scan",
        "--d",
        "3",
        "--v",
        "12,10,25",
        "--grid",
        "-1,2,1/4,4,1/4",
        "--format",
        "svg",
        "--a",
        "1,1,4",
        "--e",
        "1,0,1",
    ]);
    let text = stdout(&out);
    assert!(text.starts_with("<svg"));
    assert!(text.contains("<rect"));
    assert!(text.contains("<path"));
    assert!(text.trim_end().ends_with("</svg>"));
}

#[test]
fn json_outputs_are_deterministic() {
    let args = [
        "scan",
        "--d",
        "3",
        "--v",
        "12,10,25",
        "--grid",
        "-1,1,1/2,2,1/2",
        "--format",
        "json",
    ];
    assert_eq!(k3stab(&args).stdout, k3stab(&args).stdout);
}

#[test]
fn enumerate_reports_wall_contacts() {
    let out = k3stab(&[
        "enumerate",
        "--d",
        "1",
        "--v",
        "1,1,1",
        "--sigma",
        "1/5,2/5",
        "--max-rank",
        "4",
    ]);
    let text = stdout(&out);
    assert!(text.contains("2,1,1 N=0 [on-wall]"));
    assert!(text.contains("count: 1"));
}

#[test]
fn printed_rationals_reparse_to_identical_values() {
    let out = k3stab(&[
        "charge", "--d", "3", "--v", "12,10,25", "--sigma", "-7/3,5/6", "--format", "json",
    ]);
    let j: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for key in ["re", "im", "lambda"] {
        let s = j[key].as_str().unwrap();
        let parsed = k3stab::parse_rational(s).unwrap();
        assert_eq!(k3stab::fmt_rational(&parsed), s);
    }
}

#[test]
fn out_flag_writes_the_artifact() {
    let dir = std::env::temp_dir().join("k3stab-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scan.csv");
    let out = k3stab(&[
        "scan",
        "--d",
        "3",
        "--v",
        "12,10,25",
        "--grid",
        "0,1,1,2,1/2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("x,y,in_VX,region,certificates"));
    std::fs::remove_file(&path).ok();
}
