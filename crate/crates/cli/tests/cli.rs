use std::path::Path;
use std::process::Command;
use tempfile::TempDir;

fn qls(dir: &Path, args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qls")).current_dir(dir).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let files = [
        ("plane.qls", "field q\nspace Aq   # the quantum plane\ngens x y\nrel x*y - q*y*x\n"),
        ("free.qls", "space F\ngens x y\n"),
        ("inhom.qls", "gens x y\nrel x*y - y\n"),
        ("broken.qls", "gens x y\nrel x*y - (y\n"),
        ("diag.mat", "field q p\n2 2\np 0\n0 1\n"),
        ("uni.mat", "2 2\n1 1\n0 1\n"),
    ];
    for (name, text) in files {
        std::fs::write(dir.path().join(name), text).unwrap();
    }
    dir
}

#[test]
fn parse_prints_canonical_rows() {
    let w = workspace();
    let (code, out, _) = qls(w.path(), &["parse", "plane.qls"]);
    assert_eq!(code, 0);
    assert_eq!(out, "space Aq\ngens x y\ndegree 2:\n  x*y - q*y*x\n");
    let (code, out, _) = qls(w.path(), &["parse", "free.qls"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("(no relations)\n"));
}

#[test]
fn parse_errors_exit_two() {
    let w = workspace();
    let (code, _, err) = qls(w.path(), &["parse", "inhom.qls"]);
    assert_eq!(code, 2);
    assert!(err.contains("inhomogeneous"));
    let (code, _, err) = qls(w.path(), &["parse", "broken.qls"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2, column 13"), "{err}");
    let (code, _, _) = qls(w.path(), &["parse", "missing.qls"]);
    assert_eq!(code, 2);
}

#[test]
fn hom_of_planes_in_degree_two() {
    let w = workspace();
    let (code, out, _) = qls(w.path(), &["hom", "plane.qls", "plane.qls", "--degree", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.starts_with("  ")).count(), 3);
}

#[test]
fn twisted_end_equivalences() {
    let w = workspace();
    let (code, out, _) = qls(w.path(), &["end", "plane.qls", "--twist", "diag.mat", "--check-equivalence", "--degree", "3"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 2);
}

#[test]
fn unstable_sigma_is_a_precondition_failure() {
    let w = workspace();
    let (code, _, err) = qls(w.path(), &["equivalence", "plane.qls", "--twist", "uni.mat", "--degree", "3"]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn failed_checks_exit_four() {
    let w = workspace();
    let mut rows = vec!["8 8".to_string()];
    for r in 0..8 {
        rows.push((0..8).map(|c| if r == c || (r, c) == (0, 1) { "1" } else { "0" }).collect::<Vec<_>>().join(" "));
    }
    std::fs::write(w.path().join("tau.mat"), rows.join("\n") + "\n").unwrap();
    let (code, out, _) = qls(w.path(), &["factor-tau", "tau.mat"]);
    assert_eq!(code, 4);
    assert!(out.contains("FAIL"));
}

#[test]
fn appendix_selftest() {
    let w = workspace();
    let (code, out, _) = qls(w.path(), &["selftest", "appendix"]);
    assert_eq!(code, 0);
    assert!(out.contains("FAILURE DETECTED (expected)"));
    let (code, out, _) = qls(w.path(), &["selftest", "appendix", "--lambda", "0"]);
    assert_eq!(code, 0);
    assert!(out.contains("no failure"));
}

#[test]
fn machine_output_parses_back() {
    let w = workspace();
    let (_, dual, _) = qls(w.path(), &["dual", "plane.qls", "--format", "machine"]);
    std::fs::write(w.path().join("dual.qls"), &dual).unwrap();
    let (code, again, _) = qls(w.path(), &["parse", "dual.qls", "--format", "machine"]);
    assert_eq!(code, 0);
    assert_eq!(again, dual);
}

#[test]
fn repeated_runs_are_identical() {
    let w = workspace();
    let args = ["twist-hom", "plane.qls", "plane.qls", "--twist", "uni.mat", "--degree", "3"];
    let first = qls(w.path(), &args);
    assert_eq!(first.0, 0);
    assert_eq!(first, qls(w.path(), &args));
}

#[test]
fn presets_resolve() {
    let w = workspace();
    let (code, out, _) = qls(w.path(), &["hilbert", "@u3", "--format", "machine"]);
    assert_eq!(code, 0);
    assert_eq!(out, "hilbert\t1\t1\t1\t0\t0\n");
    let (code, _, _) = qls(w.path(), &["hilbert", "@nothing"]);
    assert_eq!(code, 2);
}
