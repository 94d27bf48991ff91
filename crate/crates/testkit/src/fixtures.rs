//! The shipped seed ontology and ABox fixtures.

use std::path::PathBuf;

use nis_core::dsl;
use nis_core::kb::KnowledgeBase;
use nis_core::turtle::parse_turtle;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn data_path(name: &str) -> PathBuf {
    data_dir().join(name)
}

pub fn read(name: &str) -> String {
    let path = data_path(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// The seed measure set compiled to a KB.
pub fn seed_kb() -> KnowledgeBase {
    let ms = dsl::parse_measures(&read("nis-seed.dsl")).expect("seed parses");
    dsl::compile(&ms).expect("seed compiles")
}

/// The shipped Turtle ontology.
pub fn seed_ontology() -> KnowledgeBase {
    parse_turtle(&read("nis-articles-7-10.ttl"))
        .expect("ontology parses")
        .kb
}

/// The shipped ontology merged with `individualN.ttl`.
pub fn with_individual(n: u8) -> KnowledgeBase {
    let mut kb = seed_ontology();
    let facts = parse_turtle(&read(&format!("individual{n}.ttl")))
        .expect("facts parse")
        .kb;
    kb.merge(&facts).expect("facts merge");
    kb
}
