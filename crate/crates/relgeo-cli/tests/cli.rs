//! End-to-end tests of the relgeo binary: exit codes, output formats,
//! group-file round trips, and ball caching.

use std::path::Path;
use std::process::{Command, Output};

fn relgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relgeo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = relgeo(args);
    assert!(
        out.status.success(),
        "relgeo {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 stdout")
}

#[test]
fn ball_info_reports_sphere_sizes() {
    let text = ok(&["ball", "info", "--sample", "z2", "--radius", "4"]);
    assert!(text.contains("radius: 4"));
    assert!(text.contains("elements: 41"));
    assert!(text.contains("spheres: 1 4 8 12 16"));
}

#[test]
fn ball_cache_is_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = [
        "ball", "build", "--sample", "f2", "--radius", "4", "--factor-radius", "4", "--cache",
        cache,
    ];
    ok(&args);
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 1);
    let name = files[0].as_ref().unwrap().file_name();
    let name = name.to_str().unwrap().to_string();
    assert!(name.starts_with("ball-") && name.ends_with("-r4.gwb"), "{name}");
    let written = std::fs::metadata(dir.path().join(&name)).unwrap().modified().unwrap();
    ok(&args);
    let reused = std::fs::metadata(dir.path().join(&name)).unwrap().modified().unwrap();
    assert_eq!(written, reused, "second run must not rewrite the cache file");
}

#[test]
fn group_file_round_trips_through_enlargement() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z2big.json");
    ok(&[
        "genset", "enlarge-ball", "--sample", "z2", "--radius", "4", "--m", "2", "--out",
        path.to_str().unwrap(),
    ]);
    let text = ok(&[
        "ball", "info", "--group", path.to_str().unwrap(), "--alphabet", "ball-2", "--radius",
        "3",
    ]);
    assert!(text.contains("alphabet: 12 letters"));
    assert!(text.contains("spheres: 1 12 28 44"));
}

#[test]
fn growth_series_of_the_free_group() {
    let text = ok(&[
        "lang", "growth", "--sample", "f2", "--radius", "6", "--factor-radius", "6",
    ]);
    assert!(text.contains("(1 + z) / (1 - 3*z)"), "{text}");
    assert!(text.contains("coeffs: 1 4 12 36"));
}

#[test]
fn bcd_check_on_the_abelian_plane() {
    let text = ok(&[
        "check", "bcd", "--sample", "z2", "--radius", "6", "--max-len", "5", "--max-const", "2",
    ]);
    assert!(text.contains("bcd,z2,5,0,true"), "{text}");
    assert!(text.contains("empirical"));
}

#[test]
fn conjugacy_decision_with_conjugator() {
    let text = ok(&[
        "conj", "decide", "--sample", "f2", "--radius", "7", "--factor-radius", "7", "--bound",
        "2", "a b a^-1", "b",
    ]);
    assert_eq!(text.trim(), "conjugate, conjugator=a");
    let text = ok(&[
        "conj", "decide", "--sample", "f2", "--radius", "7", "--factor-radius", "7", "--bound",
        "2", "a", "b",
    ]);
    assert!(text.starts_with("not conjugate"), "{text}");
}

#[test]
fn verify_suite_passes_on_the_line() {
    let text = ok(&[
        "verify", "all", "--sample", "z", "--radius", "6", "--factor-radius", "6", "--max-len",
        "5",
    ]);
    assert!(text.contains("all checks passed"), "{text}");
}

#[test]
fn errors_use_the_code_detail_format() {
    let out = relgeo(&["lang", "geo", "--group", "/definitely/not/here.json", "--alphabet", "x"]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error: io: "), "{err}");

    let out = relgeo(&["ball", "info", "--sample", "nope"]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error: usage: "), "{err}");
}

#[test]
fn dfa_and_dot_files_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let dfa = dir.path().join("geo.dfa");
    let dot = dir.path().join("geo.dot");
    ok(&[
        "lang", "geo", "--sample", "z", "--radius", "5", "--factor-radius", "5", "--out",
        dfa.to_str().unwrap(), "--dot", dot.to_str().unwrap(),
    ]);
    let dfa_text = std::fs::read_to_string(&dfa).unwrap();
    assert!(dfa_text.contains("states"), "{dfa_text}");
    let dot_text = std::fs::read_to_string(&dot).unwrap();
    assert!(dot_text.starts_with("digraph"), "{dot_text}");
    assert!(!Path::new(&dir.path().join("geo.dfa.tmp")).exists());
}
