use qhopf::catalog::load_builtin;
use qhopf::file::StructureFile;

#[test]
fn golden_files_round_trip_exactly() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("golden");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let file = StructureFile::from_json(&text).unwrap();
        let rebuilt = file.to_entry().unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(StructureFile::from_entry(&rebuilt).to_json(), text, "{}", path.display());
        let builtin = load_builtin(&file.name).unwrap();
        assert_eq!(builtin.structure, rebuilt.structure);
        seen += 1;
    }
    assert!(seen >= 5);
}

#[test]
fn golden_scalars_are_strings() {
    let text = std::fs::read_to_string(
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("golden/sweedler-twisted.qh"),
    )
    .unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for term in v["phi"].as_array().unwrap() {
        assert!(term["coeff"].is_string());
        assert!(term["legs"].as_array().unwrap().iter().all(|l| l.is_string()));
    }
}
