use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fgver(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fgver"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str], expect: i32) -> Value {
    let out = fgver(args);
    assert_eq!(
        out.status.code(),
        Some(expect),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn verdict<'a>(r: &'a Value, name: &str) -> &'a Value {
    r["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["name"] == name)
        .unwrap_or_else(|| panic!("no verdict {name}"))
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn singer_spread_is_two_character_with_sizes_9_and_5() {
    let dir = tempfile::tempdir().unwrap();
    let built = report(&["build", "singer", "--r", "3", "--q", "2", "--out-dir", path(dir.path())], 0);
    assert_eq!(built["verdicts"][0]["params"]["orbits"], serde_json::json!([5, 15, 15]));
    assert_eq!(built["files"].as_array().unwrap().len(), 3);

    let file = dir.path().join("singer-pg32-orbit0.lns");
    let r = report(&["verify", path(&file), "--checks", "cover,dual-proj,two-char"], 0);
    assert_eq!(r["pass"], true);
    let tc = &verdict(&r, "two-char")["params"]["report"];
    assert_eq!((tc["alpha"].as_u64(), tc["beta"].as_u64()), (Some(9), Some(5)));
    assert_eq!(tc["identity_residual"], 0);
}

#[test]
fn projected_hexagon_is_nine_tight() {
    let dir = tempfile::tempdir().unwrap();
    report(&["build", "hexagon", "--q", "2", "--out-dir", path(dir.path())], 0);
    let file = dir.path().join("hexagon-w52.lns");
    let r = report(&["verify", path(&file), "--checks", "cover,dual-symp,tight-H,tight-W"], 0);
    for name in ["tight-H", "tight-W"] {
        assert_eq!(verdict(&r, name)["params"]["report"]["i"], 9);
    }
    assert_eq!(r["geometry"]["extension_modulus"], "x^2+x+1");
    assert!(r["geometry"]["grams"]["hermitian"].is_array());

    let forced = report(&["verify", path(&file), "--checks", "tight-W", "--i", "8"], 1);
    assert_eq!(forced["pass"], false);
}

#[test]
fn hexagon_of_order_three_passes_parabolic_checks() {
    let dir = tempfile::tempdir().unwrap();
    report(&["build", "hexagon", "--q", "3", "--out-dir", path(dir.path())], 0);
    let file = dir.path().join("hexagon-q63.lns");
    let r = report(&["verify", path(&file), "--checks", "cover,lemma4,dual-par-I"], 0);
    assert_eq!(verdict(&r, "dual-par-I")["params"]["x_in"], 13);
    assert_eq!(verdict(&r, "dual-par-I")["params"]["x_out"], 4);
}

#[test]
fn duplicate_line_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("dup.lns");
    std::fs::write(&file, "q=2 r=3 kind=projective\n1,0,0,0;0,1,0,0\n1,1,0,0;0,1,0,0\n").unwrap();
    let out = fgver(&["verify", path(&file), "--checks", "cover"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3") && err.contains("duplicate line"), "{err}");
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("proj.lns");
    std::fs::write(&file, "q=2 r=3 kind=projective\n1,0,0,0;0,1,0,0\n").unwrap();
    for args in [
        vec!["verify", path(&file), "--checks", "dual-symp"],
        vec!["verify", path(&file), "--checks", "nonsense"],
        vec!["verify", path(&file)],
        vec!["build", "hexagon", "--q", "4", "--out-dir", path(dir.path())],
        vec!["build", "simplex", "--config", "H99", "--out-dir", path(dir.path())],
    ] {
        assert_eq!(fgver(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn non_cover_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("one.lns");
    std::fs::write(&file, "q=2 r=3 kind=projective\n1,0,0,0;0,1,0,0\n").unwrap();
    let r = report(&["verify", path(&file), "--checks", "cover,two-char"], 1);
    assert_eq!(verdict(&r, "cover")["pass"], false);
    assert!(verdict(&r, "two-char")["params"]["error"].is_string());
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    report(&["build", "singer", "--r", "3", "--q", "3", "--out-dir", path(dir.path())], 0);
    let file = dir.path().join("singer-pg33-orbit0.lns");
    let run = |threads: &str| {
        let out = fgver(&["--threads", threads, "verify", path(&file), "--checks", "cover,lemma1,dual-proj,two-char"]);
        assert_eq!(out.status.code(), Some(0));
        out.stdout
    };
    let one = run("1");
    assert_eq!(one, run("1"));
    assert_eq!(one, run("3"));
}

#[test]
fn report_file_matches_stdout_report() {
    let dir = tempfile::tempdir().unwrap();
    report(&["build", "singer", "--r", "3", "--q", "2", "--out-dir", path(dir.path())], 0);
    let file = dir.path().join("singer-pg32-orbit1.lns");
    let out = dir.path().join("report.json");
    let args = ["verify", path(&file), "--checks", "cover,lemma1"];
    let printed = fgver(&args).stdout;
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path(&out)]);
    assert_eq!(fgver(&with_out).status.code(), Some(0));
    let written = std::fs::read(&out).unwrap();
    let strip = |b: &[u8]| {
        let mut v: Value = serde_json::from_slice(b).unwrap();
        v["command"] = Value::Null;
        v
    };
    assert_eq!(strip(&printed), strip(&written));
}

#[test]
fn simplex_build_writes_fifteen_points() {
    let dir = tempfile::tempdir().unwrap();
    let r = report(&["build", "simplex", "--config", "H44-L1", "--out-dir", path(dir.path())], 0);
    assert_eq!(verdict(&r, "H44-L1 is tight")["params"]["i"], 3);
    let text = std::fs::read_to_string(dir.path().join("simplex-H44-L1.pts")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("q=4 r=4 kind=points"));
    assert_eq!(lines.count(), 15);
}

#[test]
fn spread_bundle_build_writes_manifest_and_files() {
    let dir = tempfile::tempdir().unwrap();
    let r = report(&["build", "dye", "--n", "2", "--q", "2", "--out-dir", path(dir.path())], 0);
    let summary = &verdict(&r, "bundle checks")["params"];
    assert_eq!(summary["r_size"], 5525);
    assert_eq!(summary["m_size"], 85);
    for f in ["F.lns", "O1.lns", "O2.lns", "R.pts", "manifest.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let manifest: Value = serde_json::from_slice(&std::fs::read(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["forms"].as_array().unwrap().len(), 3);
    assert_eq!(manifest["moduli"]["ext_order"], 4);

    let f = dir.path().join("F.lns");
    let v = report(&["verify", path(&f), "--checks", "cover,dual-proj"], 0);
    assert_eq!(verdict(&v, "cover")["params"]["m"], 1);
}

#[test]
fn small_suite_passes_and_is_reproducible() {
    let run = || {
        let out = fgver(&["paper-suite", "--scale", "small"]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    let a = run();
    let r: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(r["verdicts"].as_array().unwrap().len(), 10);
    assert_eq!(a, run());
}
