//! End-to-end runs of the `folcone` binary against the fixtures and goldens.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).unwrap()
}

fn folcone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_folcone"))
        .args(args)
        .env_remove("FOLCONE_ENUM_CAP")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn assert_exit(args: &[&str], code: i32) -> Output {
    let o = folcone(args);
    assert_eq!(
        o.status.code(),
        Some(code),
        "{args:?}: stderr {}",
        String::from_utf8_lossy(&o.stderr)
    );
    if code != 0 {
        assert!(o.stdout.is_empty(), "{args:?} printed on failure");
        assert!(!o.stderr.is_empty(), "{args:?} gave no diagnostic");
    }
    o
}

#[test]
fn cone_report_matches_golden() {
    let gm = fixture("gm.json");
    let text = assert_exit(&["cone", &gm], 0);
    assert_eq!(stdout(&text), golden("gm_cone.txt"));
    assert!(stdout(&text).contains("facets: 2"));
    let json = assert_exit(&["cone", &gm, "--format", "json"], 0);
    assert_eq!(stdout(&json), golden("gm_cone.json"));
}

#[test]
fn classifications_match_golden() {
    let gm = fixture("gm.json");
    for (ray, file) in [
        ("1,1", "gm_classify_proper.json"),
        ("1,-1", "gm_classify_boundary.json"),
        ("-1,0", "gm_classify_outside.json"),
    ] {
        let o = assert_exit(&["classify", &gm, "--ray", ray, "--format", "json"], 0);
        assert_eq!(stdout(&o), golden(file), "ray {ray}");
    }
    let o = assert_exit(&["classify", &gm, "--ray", "1,-1"], 0);
    assert!(stdout(&o).contains("verdict: BoundaryRay"));
    let o = assert_exit(&["classify", &gm, "--ray", "2/3,1/3"], 0);
    assert!(stdout(&o).contains("primitive: (2,1)"));
}

#[test]
fn bad_rays_are_validation_errors() {
    let gm = fixture("gm.json");
    assert_exit(&["classify", &gm, "--ray", "1,2,3"], 1);
    assert_exit(&["classify", &gm, "--ray", "1,x"], 1);
    assert_exit(&["classify", &gm, "--ray", "0,0"], 1);
}

#[test]
fn product_zero_ray_is_degenerate() {
    let o = assert_exit(&["classify", &fixture("product.json"), "--ray", "0,0"], 0);
    assert!(stdout(&o).contains("DegenerateProductRay"));
}

#[test]
fn exit_code_contract() {
    assert_exit(&["cone", &fixture("bad.json")], 2);
    assert_exit(&["check", &fixture("zero_loop.json")], 1);
    assert_exit(&["check", &fixture("broken.json")], 3);
    assert_exit(&["check", &fixture("does_not_exist.json")], 3);
    assert_exit(&["simulate", &fixture("product.json")], 2);
    assert_exit(&["simulate", &fixture("gm.json"), "--steps", "0"], 1);
    assert_exit(&["no-such-command"], 1);
    assert_exit(&["cone"], 1);
    assert_exit(&["--help"], 0);
}

#[test]
fn family_exit_codes() {
    let o = assert_exit(&["family", &fixture("gm.json"), &fixture("gm_negated.json")], 0);
    assert_eq!(stdout(&o), golden("gm_family.txt"));
    assert_exit(&["family", &fixture("gm.json"), &fixture("gm.json")], 0);
    let o = assert_exit(&["family", &fixture("gm.json"), &fixture("self_loop.json")], 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("overlap"));
}

#[test]
fn check_and_loops() {
    let gm = fixture("gm.json");
    let o = assert_exit(&["check", &gm], 0);
    assert_eq!(
        stdout(&o),
        "system: gm\nletters: 2\ntransitions: 3\nminimal loops: 2\nproduct-type: false\n"
    );
    let o = assert_exit(&["loops", &gm, "--max-len", "3"], 0);
    let s = stdout(&o);
    assert!(s.contains("(a,b) (1,1)"));
    assert!(s.contains("periodic strings (length <= 3): 5"));
}

#[test]
fn enumeration_budget_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_folcone"))
        .args(["loops", &fixture("gm.json"), "--max-len", "12"])
        .env("FOLCONE_ENUM_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget of 10"));
}

#[test]
fn verify_and_disk() {
    let gm = fixture("gm.json");
    let o = assert_exit(&["verify", &gm, "--max-len", "8", "--integer-max-len", "6"], 0);
    assert_eq!(stdout(&o).matches("PASS").count(), 3);
    let o = assert_exit(&["disk", &gm], 0);
    assert!(stdout(&o).contains("verdict: subcone"));
}

#[test]
fn slice_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("slice.csv");
    let out_s = out.to_string_lossy().into_owned();
    let o = assert_exit(&["slice", &fixture("gm.json"), "--plane", "1,0;0,1", "--out", &out_s], 0);
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), golden("gm_slice.csv"));
    assert_exit(&["slice", &fixture("gm.json"), "--plane", "1,0;2,0"], 1);
}

#[test]
fn simulate_is_deterministic() {
    let gm = fixture("gm.json");
    let args = ["simulate", gm.as_str(), "--steps", "2000", "--trials", "3", "--seed", "7", "--format", "json"];
    let a = assert_exit(&args, 0);
    let b = assert_exit(&args, 0);
    assert_eq!(a.stdout, b.stdout);
    let o = assert_exit(&["simulate", &gm, "--steps", "10000", "--seed", "3"], 0);
    assert!(stdout(&o).contains("statistic 9/1024"));
    assert!(stdout(&o).contains(" 0 outside"));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let gm = fixture("gm.json");
    for args in [
        vec!["cone", gm.as_str(), "--format", "json"],
        vec!["loops", gm.as_str(), "--max-len", "6"],
        vec!["verify", gm.as_str()],
    ] {
        assert_eq!(folcone(&args).stdout, folcone(&args).stdout, "{args:?}");
    }
}
