//! Test support for proofblocks: brute-force oracles that work straight from
//! the definition of an accepted ordering, and seeded random instances.
//!
//! Nothing here calls the grading engine's own algorithms; the oracles read
//! only a graph's node list, edge list and contiguity sets.

pub mod oracle;
pub mod random;

use std::path::PathBuf;

/// Path of a file under `crates/core/tests/fixtures`.
pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

pub fn read_fixture(name: &str) -> String {
    let path = fixture_path(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

/// Parses a fixture, naming the question after the file stem.
pub fn load_fixture(name: &str) -> proofblocks::Question {
    let id = name.trim_end_matches(".pb.html");
    match proofblocks::parse_question_with_id(id, &read_fixture(name)) {
        Ok(parsed) => parsed.question,
        Err(findings) => panic!("fixture {name} does not parse: {findings:?}"),
    }
}
