//! End-to-end tests of the command-line binary: spawn the real executable,
//! check exit codes, and parse its output the way a scripted consumer would.

use std::path::PathBuf;
use std::process::{Command, Output};

use adefect::gallery::build_bundle;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_adefect"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary spawns")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn parse_json(out: &Output) -> Value {
    serde_json::from_str(&stdout_str(out)).expect("stdout is valid JSON")
}

/// A scratch file under the system temp directory, cleaned up on drop.
struct ScratchFile(PathBuf);

impl ScratchFile {
    fn write(stem: &str, contents: &str) -> Self {
        let path = std::env::temp_dir().join(format!(
            "adefect-cli-test-{}-{stem}",
            std::process::id()
        ));
        std::fs::write(&path, contents).expect("scratch file writes");
        ScratchFile(path)
    }

    fn path(&self) -> &str {
        self.0.to_str().expect("temp path is UTF-8")
    }
}

impl Drop for ScratchFile {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.0);
    }
}

#[test]
fn gallery_list_names_every_bundle() {
    let out = run(&["gallery", "list"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    for name in [
        "sextic30",
        "table72_row1",
        "table72_row9",
        "residual27",
        "cusp36",
        "octic64",
        "quintic_template",
    ] {
        assert!(text.contains(name), "missing {name} in:\n{text}");
    }
}

#[test]
fn gallery_sextic30_reports_its_headline_numbers() {
    let out = run(&["gallery", "sextic30", "--format", "json"]);
    assert!(out.status.success());
    let v = parse_json(&out);
    assert_eq!(v["name"], "sextic30");
    assert_eq!(v["h11"], 11);
    assert_eq!(v["h12"], 23);
    assert_eq!(v["points"], 30);
    assert_eq!(v["matches_expected"], true);
}

#[test]
fn gallery_text_reports_reproduction() {
    let out = run(&["gallery", "table72_row1"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.contains("-> reproduced"), "unexpected text:\n{text}");
}

#[test]
fn smooth_double_octic_has_the_textbook_numbers() {
    let out = run(&[
        "hodge", "--cover", "2", "--degree", "8", "--points", "none", "--format", "json",
    ]);
    assert!(out.status.success());
    let v = parse_json(&out);
    assert_eq!(v["h11"], 1);
    assert_eq!(v["h12"], 149);
    let checks = v["checks"].as_array().expect("checks array");
    assert!(!checks.is_empty());
    assert!(
        checks.iter().all(|c| c["pass"] == true),
        "failing checks: {checks:?}"
    );
}

#[test]
fn classify_recovers_the_cusp_inventory_from_plain_coordinates() {
    let bundle = build_bundle("cusp36", 256).expect("cusp36 builds");
    let surface = ScratchFile::write("cusp36.poly", &bundle.surface.to_string());
    let coords: Vec<_> = bundle.records.iter().map(|r| &r.point).collect();
    let points = ScratchFile::write(
        "cusp36.pts",
        &serde_json::to_string(&coords).expect("points serialize"),
    );

    let out = run(&[
        "classify",
        "--surface",
        surface.path(),
        "--points",
        points.path(),
        "--format",
        "json",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = parse_json(&out);
    let records = v["points"].as_array().expect("points array");
    assert_eq!(records.len(), 36);
    for r in records {
        assert_eq!(r["type"], "A2", "record: {r}");
        assert!(r["v1"].is_array(), "frame missing: {r}");
    }
    assert_eq!(v["inventory"]["A2"], 36);
}

#[test]
fn defect_accepts_records_dumped_from_a_bundle() {
    let bundle = build_bundle("table72_row1", 256).expect("table72_row1 builds");
    let points = ScratchFile::write(
        "row1.pts",
        &serde_json::to_string(&bundle.records).expect("records serialize"),
    );

    let out = run(&[
        "defect", "--points", points.path(), "--degree", "6", "--cover", "3", "--format", "json",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = parse_json(&out);
    assert_eq!(v["delta"], 12);
    assert_eq!(v["mu"], 40);
    assert_eq!(v["certified"], true);
    assert_eq!(v["formula"], "triple");
}

#[test]
fn rank_counts_value_conditions() {
    let surface = ScratchFile::write("cusp.poly", "y0*y1*y2 - y3^3");
    let points = ScratchFile::write(
        "cusp.pts",
        r#"[[{"rational": 1}, {"rational": 0}, {"rational": 0}, {"rational": 0}]]"#,
    );
    let out = run(&[
        "rank",
        "--points",
        points.path(),
        "--degree",
        "2",
        "--conditions",
        "values",
        "--surface",
        surface.path(),
        "--format",
        "json",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = parse_json(&out);
    assert_eq!(v["rank"]["rank"], 1);
    assert_eq!(v["rank"]["certified"], true);
    assert_eq!(v["rows"], 10);
    assert_eq!(v["cols"], 1);
}

#[test]
fn json_output_is_byte_deterministic() {
    let first = run(&["gallery", "table72_row1", "--format", "json"]);
    let second = run(&["gallery", "table72_row1", "--format", "json"]);
    assert!(first.status.success() && second.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn json_output_reparses_to_the_same_document() {
    let out = run(&["gallery", "table72_row1", "--format", "json"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let v: Value = serde_json::from_str(&text).expect("valid JSON");
    let reprinted = format!(
        "{}\n",
        serde_json::to_string_pretty(&v).expect("reserialization")
    );
    assert_eq!(text, reprinted, "output is not in canonical form");
}

#[test]
fn bad_inputs_exit_with_code_2() {
    let unknown = run(&["gallery", "no_such_example"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&unknown.stderr).is_empty());

    let missing = run(&[
        "classify", "--surface", "/nonexistent.poly", "--points", "/nonexistent.pts",
    ]);
    assert_eq!(missing.status.code(), Some(2));

    let precision = run(&["--precision", "8", "gallery", "list"]);
    assert_eq!(precision.status.code(), Some(2));
}
