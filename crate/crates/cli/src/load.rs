use std::fmt;
use std::fs;
use std::path::Path;

use nis_core::dsl;
use nis_core::kb::KnowledgeBase;
use nis_core::turtle::parse_turtle;

/// A user-facing error; printed to stderr with exit status 2.
#[derive(Debug)]
pub struct Failure(String);

impl Failure {
    pub fn new(message: impl fmt::Display) -> Self {
        Failure(format!("error: {message}"))
    }

    pub fn at(path: &Path, message: impl fmt::Display) -> Self {
        Failure(format!("{}: error: {message}", path.display()))
    }

    /// A positioned parse diagnostic, `path:line:column: error: message`.
    pub fn diagnostic(path: &Path, diagnostic: impl fmt::Display) -> Self {
        Failure(format!("{}:{diagnostic}", path.display()))
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::at(path, e))
}

/// Loads Turtle, or compiles the file first when it has a `.dsl` extension.
pub fn load_kb(path: &Path) -> Result<KnowledgeBase, Failure> {
    let text = read(path)?;
    if path.extension().is_some_and(|e| e == "dsl") {
        return dsl::parse_measures(&text)
            .and_then(|ms| dsl::compile(&ms))
            .map_err(|e| Failure::at(path, e));
    }
    let parsed = parse_turtle(&text).map_err(|e| Failure::diagnostic(path, e.diagnostic()))?;
    for w in &parsed.warnings {
        eprintln!("{}:{w}", path.display());
    }
    Ok(parsed.kb)
}
