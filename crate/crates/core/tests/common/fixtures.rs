use std::path::PathBuf;

use mglex::assembly::{assemble, CompositionTree, Reading};
use mglex::lexicon::Lexicon;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn lexicon(name: &str) -> Lexicon {
    let path = data_dir().join("lexicons").join(format!("{name}.json"));
    let src = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    Lexicon::from_json(&src).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn tree(lexicon: &str, id: &str) -> CompositionTree {
    let path = data_dir().join("trees").join(lexicon).join(format!("{id}.json"));
    let src = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    CompositionTree::from_json(&src).unwrap()
}

/// Tree ids of a fixture lexicon, sorted.
pub fn tree_ids(lexicon: &str) -> Vec<String> {
    let dir = data_dir().join("trees").join(lexicon);
    let mut ids: Vec<String> = std::fs::read_dir(&dir)
        .map(|rd| {
            rd.filter_map(|e| e.ok())
                .filter_map(|e| e.path().file_stem().map(|s| s.to_string_lossy().into_owned()))
                .collect()
        })
        .unwrap_or_default();
    ids.sort();
    ids
}

pub const FIXTURES: [&str; 7] =
    ["montague", "sample", "determiners", "ontology", "fictive", "deverbals", "plurals"];

pub fn readings(lexicon_name: &str, id: &str) -> Vec<Reading> {
    let lex = lexicon(lexicon_name);
    assemble(&lex, &tree(lexicon_name, id)).unwrap()
}
