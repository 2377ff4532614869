use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qhopf::file::StructureFile;

fn golden(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "golden", &format!("{name}.qh")].iter().collect()
}

fn qhopf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhopf")).args(args).output().expect("run qhopf")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = qhopf(args);
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn verify_all_golden_files_pass() {
    for name in ["z2-group", "z2-cocycle", "sweedler-h4", "grassmann-theta", "sweedler-twisted"] {
        let (code, stdout, _) = run(&["verify", p(&golden(name)), "--checks", "all"]);
        assert_eq!(code, 0, "{name}:\n{stdout}");
        assert!(stdout.contains("pentagon"));
    }
}

#[test]
fn verify_json_is_deterministic() {
    let path = golden("sweedler-twisted");
    let a = qhopf(&["verify", p(&path), "--json"]).stdout;
    let b = qhopf(&["verify", p(&path), "--json"]).stdout;
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["passed"], true);
    assert!(v["checks"].as_array().unwrap().iter().any(|c| c["id"] == "quasi-ybe"));
}

#[test]
fn corrupted_pentagon_exits_one() {
    let mut file = StructureFile::read(&golden("z2-cocycle")).unwrap();
    let last = file.phi.len() - 1;
    file.phi[last].coeff = "3".into();
    file.phi_inv = None;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.qh");
    std::fs::write(&path, file.to_json()).unwrap();
    let (code, stdout, _) = run(&["verify", p(&path), "--checks", "axioms", "--json"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let pentagon = v["checks"].as_array().unwrap().iter().find(|c| c["id"] == "pentagon").unwrap();
    assert_eq!(pentagon["passed"], false);
    assert_ne!(pentagon["witness"]["difference"], "0");
}

#[test]
fn bad_scalar_exits_two_with_position() {
    let text = std::fs::read_to_string(golden("z2-group")).unwrap().replacen("\"1/2\"", "\"1/*2\"", 1);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.qh");
    std::fs::write(&path, text).unwrap();
    let (code, _, stderr) = run(&["verify", p(&path)]);
    assert_eq!(code, 2);
    assert!(stderr.contains("at position 2"), "{stderr}");
}

#[test]
fn malformed_json_exits_two_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.qh");
    std::fs::write(&path, "{\n  \"field\": \"rationals\",\n  oops\n}").unwrap();
    let (code, _, stderr) = run(&["verify", p(&path)]);
    assert_eq!(code, 2);
    assert!(stderr.contains("line 3"), "{stderr}");
}

#[test]
fn missing_r_is_a_failure_only_when_requested() {
    let path = golden("z2-cocycle");
    assert_eq!(run(&["verify", p(&path), "--checks", "all"]).0, 0);
    assert_eq!(run(&["verify", p(&path), "--checks", "qtri"]).0, 1);
}

#[test]
fn casimir_u_on_z2_group_is_g() {
    let (code, stdout, _) = run(&["casimir", p(&golden("z2-group")), "--kind", "u"]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("u: g\n"), "{stdout}");
    assert!(stdout.contains("[pass] antipode-square-conjugation"));
}

#[test]
fn casimir_c1_from_beta_is_unit() {
    for name in ["z2-cocycle", "sweedler-twisted"] {
        let (code, stdout, _) = run(&["casimir", p(&golden(name)), "--kind", "c1", "--source", "beta", "--json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
        assert_eq!(v["elements"][0]["element"], serde_json::json!({"1": "1"}));
    }
}

#[test]
fn casimir_cm_on_sweedler_regular() {
    let (code, stdout, _) = run(&[
        "casimir",
        p(&golden("sweedler-h4")),
        "--kind",
        "cm",
        "--power",
        "0",
        "--rep",
        "regular",
    ]);
    assert_eq!(code, 0);
    // u = g and Tr(π_reg(g)) = 0
    assert!(stdout.starts_with("C_0 on regular: 0\n"), "{stdout}");
    let (code, _, stderr) = run(&["casimir", p(&golden("sweedler-h4")), "--kind", "cm"]);
    assert_eq!(code, 2, "{stderr}");
}

#[test]
fn casimir_on_structure_without_r_is_input_error() {
    let (code, _, stderr) = run(&["casimir", p(&golden("z2-cocycle")), "--kind", "u"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("R"), "{stderr}");
}

#[test]
fn twist_sweedler_reproduces_twisted_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e5.qh");
    let (code, stdout, _) = run(&[
        "twist",
        p(&golden("sweedler-h4")),
        "--twistor",
        "Ft",
        "--verify-invariance",
        "--out",
        p(&out),
    ]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("[pass] casimir-family-twist-invariant[regular, m=-1]"));
    let written = StructureFile::read(&out).unwrap().to_entry().unwrap();
    let expected = StructureFile::read(&golden("sweedler-twisted")).unwrap().to_entry().unwrap();
    assert_eq!(written.structure, expected.structure);
}

#[test]
fn identity_twist_is_a_no_op() {
    let path = golden("grassmann-theta");
    let (code, stdout, _) = run(&["twist", p(&path), "--twistor", "identity"]);
    assert_eq!(code, 0);
    let twisted = StructureFile::from_json(&stdout).unwrap().to_entry().unwrap();
    let original = StructureFile::read(&path).unwrap().to_entry().unwrap();
    assert_eq!(twisted.structure, original.structure);
}

#[test]
fn pminus_twist_keeps_u() {
    let (code, stdout, _) = run(&[
        "twist",
        p(&golden("z2-group")),
        "--twistor",
        "pminus",
        "--verify-invariance",
        "--json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let u = v["checks"].as_array().unwrap().iter().find(|c| c["id"] == "u-twist-invariant").unwrap();
    assert_eq!(u["passed"], true);
    let (code, _, _) = run(&["twist", p(&golden("z2-group")), "--twistor", "nope"]);
    assert_eq!(code, 2);
}

#[test]
fn center_of_sweedler_is_scalars() {
    let (code, stdout, _) = run(&["center", p(&golden("sweedler-h4")), "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["even"], serde_json::json!([{"1": "1"}]));
    assert_eq!(v["odd"], serde_json::json!([]));
}

#[test]
fn catalog_regenerates_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = run(&["catalog", "--out", p(dir.path())]);
    assert_eq!(code, 0);
    let golden_dir: PathBuf = [env!("CARGO_MANIFEST_DIR"), "golden"].iter().collect();
    for entry in std::fs::read_dir(&golden_dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap();
        let fresh = std::fs::read_to_string(dir.path().join(name)).unwrap();
        assert_eq!(fresh, std::fs::read_to_string(&path).unwrap(), "{name:?} is stale");
    }
}
