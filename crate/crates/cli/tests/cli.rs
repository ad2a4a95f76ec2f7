//! End-to-end checks of the command-line surface: exit codes, determinism,
//! and JSON round trips.

use std::path::Path;
use std::process::{Command, Output};

fn symsos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symsos"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_file(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn multiplicity_table() {
    let out = symsos(&["multiplicity", "--n", "3", "--d", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "lambda\tmultiplicity\n3\t2\n2,1\t2\n1,1,1\t0\n");
    // Byte-identical across runs.
    let again = symsos(&["multiplicity", "--n", "3", "--d", "2"]);
    assert_eq!(again.stdout, text.as_bytes());
}

#[test]
fn certify_verify_round_trip_and_exit_codes() {
    let dir = std::env::temp_dir().join("symsos-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let poly = write_file(
        &dir,
        "h21-h111.txt",
        "1/54*x1^6 + 1/54*x2^6 + 1/54*x3^6 - 1/18*x1^2*x2^2*x3^2\n",
    );
    let cert = dir.join("cert.json").to_string_lossy().into_owned();
    let out = symsos(&[
        "certify", "--poly", &poly, "--group", "s3", "--out", &cert,
    ]);
    assert_eq!(out.status.code(), Some(0), "{:?}", out);

    let out = symsos(&["verify", "--poly", &poly, "--cert", &cert]);
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let report: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("verify prints JSON");
    assert!(report["residual"].as_f64().unwrap() <= 1e-7);

    // The non-SOS quartic exits 1.
    let out = symsos(&["quartic", "--coeffs", "1,2,1,0"]);
    assert_eq!(out.status.code(), Some(1));
    // Usage errors exit 64.
    let out = symsos(&["quartic", "--coeffs", "1,2,1"]);
    assert_eq!(out.status.code(), Some(64));
    let out = symsos(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn hpair_exit_codes() {
    let out = symsos(&["hpair", "--lambda", "1,1,1", "--mu", "2,1", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    // The reverse direction is refuted by an explicit point.
    let out = symsos(&["hpair", "--lambda", "2,1", "--mu", "1,1,1", "--n", "3", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let body: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(body["status"], "refuted-by-point");
}

#[test]
fn survey_csv_deterministic() {
    let args = [
        "survey",
        "--expr",
        "x1^4 + x2^4 + x3^4 + x1^2*x2^2 + x1^2*x3^2 + x2^2*x3^2",
        "--group",
        "s3",
        "--samples",
        "10",
        "--seed",
        "5",
    ];
    let a = symsos(&args);
    assert!(a.status.success());
    let b = symsos(&args);
    assert_eq!(a.stdout, b.stdout, "identical seed must give identical CSV");
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("rank,count\n"));
    // Two-column CSV with numeric entries.
    for line in text.lines().skip(1) {
        let mut cols = line.split(',');
        let _: usize = cols.next().unwrap().parse().unwrap();
        let _: usize = cols.next().unwrap().parse().unwrap();
        assert!(cols.next().is_none());
    }
}

#[test]
fn basis_and_quadratic_json() {
    let out = symsos(&["basis", "--kind", "p", "--lambda", "4", "--n", "2", "--normalize"]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        "1/2*x1^4 + 1/2*x2^4"
    );
    let out = symsos(&["quadratic", "--a", "1", "--b", "1", "--n", "5", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let body: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(body["sos"], true);
    assert_eq!(body["rank"], 1);
    let out = symsos(&["quadratic", "--a", "1", "--b", "2", "--n", "5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn hposet_small_outputs() {
    let dir = std::env::temp_dir().join("symsos-cli-poset");
    std::fs::create_dir_all(&dir).unwrap();
    let dot = dir.join("w3.dot").to_string_lossy().into_owned();
    let json = dir.join("w3.json").to_string_lossy().into_owned();
    let out = symsos(&[
        "hposet", "--weight", "3", "--n", "3", "--dot", &dot, "--json", &json,
    ]);
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let dot_text = std::fs::read_to_string(&dot).unwrap();
    assert!(dot_text.contains("\"1,1,1\" -> \"2,1\" [color=black];"), "{dot_text}");
    let body: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(body["weight"], 3);
    assert!(body["verdicts"].as_array().unwrap().len() == 6);
}
