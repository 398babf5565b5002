use std::path::PathBuf;

use rospace::fixtures::{all, file_contents, NAMES};
use rospace::tree::GraphOfGroupsTree;

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

#[test]
fn fixture_files_match_the_builders() {
    let regenerate = std::env::var_os("ROSPACE_WRITE_FIXTURES").is_some();
    for f in all().unwrap() {
        let path = dir().join(format!("{}.json", f.name));
        let want = file_contents(&f);
        if regenerate {
            std::fs::write(&path, &want).unwrap();
        }
        let have = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(have, want, "{} is stale", path.display());
        let back = GraphOfGroupsTree::from_json(&serde_json::from_str(&have).unwrap()).unwrap();
        assert_eq!(back, f.tree);
    }
    assert_eq!(std::fs::read_dir(dir()).unwrap().count(), NAMES.len());
}
