//! The JSON files under `fixtures/` must stay in lockstep with the
//! programmatic builders. `regenerate_fixture_files` (ignored by default)
//! rewrites them.

use derived_brackets::algebra::{AlgebraSpec, LieSpec};
use derived_brackets::fixtures;
use derived_brackets::format::AlgebraFile;
use derived_brackets::MultilinearMap;
use std::collections::BTreeMap;
use std::path::PathBuf;

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn lie_carrier(lie: &LieSpec) -> AlgebraSpec {
    AlgebraSpec::new(
        lie.basis().clone(),
        MultilinearMap::zero(lie.basis().clone(), lie.basis().clone(), 2, 0),
        None,
        BTreeMap::new(),
    )
    .unwrap()
}

fn all_files() -> Vec<(&'static str, AlgebraFile)> {
    vec![
        ("fix_a.json", AlgebraFile::from_spec(&fixtures::fix_a(), None)),
        ("fix_b.json", AlgebraFile::from_spec(&fixtures::fix_b(), None)),
        ("fix_c.json", AlgebraFile::from_spec(&fixtures::fix_c(), None)),
        ("fix_d.json", AlgebraFile::from_spec(&fixtures::fix_d(), None)),
        ("fix_e.json", AlgebraFile::from_spec(&fixtures::fix_e(), None)),
        (
            "fix_d_nonassoc.json",
            AlgebraFile::from_spec(&fixtures::fix_d_nonassoc(), None),
        ),
        ("fix_d_dga.json", AlgebraFile::from_spec(&fixtures::fix_d_dga(), None)),
        (
            "fix_sd.json",
            AlgebraFile::from_spec(
                &lie_carrier(&fixtures::semidirect_fixture()),
                Some(&fixtures::semidirect_fixture()),
            ),
        ),
    ]
}

#[test]
fn fixture_files_match_builders() {
    for (name, file) in all_files() {
        let path = fixtures_dir().join(name);
        let text = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()));
        let on_disk = AlgebraFile::parse(&text).unwrap();
        assert_eq!(on_disk, file, "{name} differs from its builder");
        // and the files load into valid specs
        on_disk.to_spec().unwrap();
    }
}

#[test]
fn loading_fixture_files_roundtrips() {
    for (name, _) in all_files() {
        let path = fixtures_dir().join(name);
        let text = std::fs::read_to_string(&path).unwrap();
        let parsed = AlgebraFile::parse(&text).unwrap();
        let (spec, lie) = parsed.to_spec().unwrap();
        let rewritten = AlgebraFile::from_spec(&spec, lie.as_ref());
        assert_eq!(parsed, rewritten, "{name} does not round-trip");
    }
}

#[test]
#[ignore = "writes the fixture files; run explicitly after changing builders"]
fn regenerate_fixture_files() {
    std::fs::create_dir_all(fixtures_dir()).unwrap();
    for (name, file) in all_files() {
        let path = fixtures_dir().join(name);
        std::fs::write(&path, file.to_json() + "\n").unwrap();
        println!("wrote {}", path.display());
    }
}
