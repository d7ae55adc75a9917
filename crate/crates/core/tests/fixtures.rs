use std::path::PathBuf;

use proofblocks::{
    count_orderings, expand, grade, lint, parse_question_with_id, valid_orderings, Status,
    Submission,
};

fn read(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    std::fs::read_to_string(path).unwrap()
}

fn load(name: &str) -> proofblocks::Question {
    parse_question_with_id(name.trim_end_matches(".pb.html"), &read(name))
        .unwrap()
        .question
}

#[test]
fn fig1_fixture() {
    let q = load("fig1.pb.html");
    assert_eq!(q.id, "fig1");
    assert_eq!(q.blocks.len(), 7);
    let g = expand(&q).unwrap();
    let edges: Vec<_> = g.edges().collect();
    assert_eq!(
        edges,
        [("1", "2"), ("2", "3"), ("3", "7"), ("4", "5"), ("5", "6"), ("6", "7")]
    );
    assert_eq!(count_orderings(&g).unwrap(), 20);
    for ordering in [
        ["1", "2", "3", "4", "5", "6", "7"],
        ["4", "5", "6", "1", "2", "3", "7"],
        ["1", "4", "2", "3", "5", "6", "7"],
    ] {
        assert_eq!(grade(&q, &Submission::new(ordering)).unwrap().status, Status::Correct);
    }
}

#[test]
fn induction_fixture() {
    let q = load("induction.pb.html");
    assert_eq!(q.distractors().count(), 1);
    let g = expand(&q).unwrap();
    assert_eq!(valid_orderings(&g, None).unwrap().len(), 2);
    let out = grade(&q, &Submission::new(["n1", "b1", "i1", "b2", "i2", "c"])).unwrap();
    assert_eq!(out.first_failure, Some(3));
}

#[test]
fn chain_fixture_lints() {
    let findings = lint(&load("chain5.pb.html"));
    assert!(findings.iter().any(|f| f.code == "W01"));
    assert!(findings.iter().any(|f| f.code == "I01" && f.message.starts_with("1 ")));
}

#[test]
fn deadend_fixture() {
    let q = load("deadend.pb.html");
    assert!(lint(&q).iter().any(|f| f.code == "W03" && f.subject == "b"));
    // Starting the group first is locally fine but can never be completed.
    let out = grade(&q, &Submission::new(["a"])).unwrap();
    assert_eq!(out.status, Status::Incomplete);
    assert_eq!(out.first_failure, None);
    let g = expand(&q).unwrap();
    assert!(valid_orderings(&g, None)
        .unwrap()
        .iter()
        .all(|t| t[0] != "a"));
}

#[test]
fn every_error_code_has_a_fixture() {
    for (file, code, line) in [
        ("e01_unknown_tag.pb.html", "E01", 4),
        ("e02_duplicate_tag.pb.html", "E02", 4),
        ("e03_cycle.pb.html", "E03", 3),
        ("e04_distractor_dependency.pb.html", "E04", 4),
        ("e05_nested_group.pb.html", "E05", 5),
        ("e06_malformed.pb.html", "E06", 3),
        ("e07_no_required_blocks.pb.html", "E07", 2),
    ] {
        let findings = parse_question_with_id("x", &read(file)).unwrap_err();
        let errors: Vec<_> = findings.iter().filter(|f| f.is_error()).collect();
        assert_eq!(errors.len(), 1, "{file}: {findings:?}");
        assert_eq!(errors[0].code, code, "{file}");
        assert_eq!(errors[0].line, line, "{file}");
    }
}
