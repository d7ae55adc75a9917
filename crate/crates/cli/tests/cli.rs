use proofblocks_cli::{run, EXIT_INCORRECT, EXIT_OK, EXIT_QUESTION_ERRORS, EXIT_USAGE};
use proofblocks_testkit::fixture_path;
use serde_json::Value;

struct Output {
    code: i32,
    out: String,
    err: String,
}

fn cli(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("proofblocks").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Output {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn fixture(name: &str) -> String {
    fixture_path(name).to_string_lossy().into_owned()
}

#[test]
fn grade_accepts_alternative_order() {
    let r = cli(&["grade", &fixture("fig1.pb.html"), "--ordering", "1,4,2,3,5,6,7"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.starts_with("correct\n"));
}

#[test]
fn grade_json_for_swapped_lines() {
    let r = cli(&["grade", &fixture("fig1.pb.html"), "--ordering", "2,1,3,4,5,6,7", "--json"]);
    assert_eq!(r.code, EXIT_INCORRECT);
    let v: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["status"], "wrong_at_line");
    assert_eq!(v["first_failure"], 1);
    assert_eq!(v["edit_distance"], 2);
    assert_eq!(v["score"]["numerator"], 5);
    assert_eq!(v["score"]["denominator"], 7);
    assert!((v["score"]["value"].as_f64().unwrap() - 0.714286).abs() < 1e-9);
    let again = cli(&["grade", &fixture("fig1.pb.html"), "--ordering", "2,1,3,4,5,6,7", "--json"]);
    assert_eq!(r.out, again.out);
}

#[test]
fn grade_human_output() {
    let r = cli(&["grade", &fixture("fig1.pb.html"), "--ordering", "1,2,3"]);
    assert_eq!(r.code, EXIT_INCORRECT);
    assert_eq!(r.out, "incomplete\nscore: 3/7 (0.428571)\nedit distance: 4\n");
    let r = cli(&["grade", &fixture("fig1.pb.html"), "--ordering", ""]);
    assert_eq!(r.code, EXIT_INCORRECT);
    assert!(r.out.starts_with("incomplete\nscore: 0 "));
}

#[test]
fn grade_from_submission_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sub.json");
    std::fs::write(&path, r#"{"question_id": "fig1", "ordering": ["4","5","6","1","2","3","7"]}"#).unwrap();
    let r = cli(&["grade", &fixture("fig1.pb.html"), "--submission", path.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);

    std::fs::write(&path, r#"{"question_id": "other", "ordering": ["1"]}"#).unwrap();
    let r = cli(&["grade", &fixture("fig1.pb.html"), "--submission", path.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_INCORRECT);
    assert!(r.err.contains("submission is for `other`"));

    std::fs::write(&path, "{\"ordering\": [1]}").unwrap();
    let r = cli(&["grade", &fixture("fig1.pb.html"), "--submission", path.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_USAGE);
}

#[test]
fn grade_needs_exactly_one_input() {
    assert_eq!(cli(&["grade", &fixture("fig1.pb.html")]).code, EXIT_USAGE);
    let both = cli(&["grade", &fixture("fig1.pb.html"), "--ordering", "1", "--submission", "x.json"]);
    assert_eq!(both.code, EXIT_USAGE);
}

#[test]
fn count_and_enumerate() {
    let r = cli(&["count", &fixture("chain5.pb.html")]);
    assert_eq!((r.code, r.out.as_str()), (EXIT_OK, "1\n"));
    assert_eq!(cli(&["count", &fixture("fig1.pb.html")]).out, "20\n");

    let r = cli(&["enumerate", &fixture("induction.pb.html")]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.out.lines().count(), 2);
    for line in r.out.lines() {
        let g = cli(&["grade", &fixture("induction.pb.html"), "--ordering", line]);
        assert_eq!(g.code, EXIT_OK, "{line}");
    }
    let r = cli(&["enumerate", &fixture("fig1.pb.html"), "--limit", "3"]);
    assert_eq!(r.out.lines().collect::<Vec<_>>(), ["1,2,3,4,5,6,7", "1,2,4,3,5,6,7", "1,2,4,5,3,6,7"]);
}

#[test]
fn enumerate_refuses_large_questions_without_limit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wide.pb.html");
    let answers: String = (0..12).map(|i| format!("<pl-answer tag=\"a{i}\">line {i}</pl-answer>\n")).collect();
    std::fs::write(&path, format!("<pl-order-blocks>\n{answers}</pl-order-blocks>\n")).unwrap();
    let file = path.to_str().unwrap();
    let r = cli(&["enumerate", file]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.err.contains("--limit"));
    assert_eq!(cli(&["enumerate", file, "--limit", "2"]).out.lines().count(), 2);
    assert_eq!(cli(&["count", file]).out, "479001600\n");
}

#[test]
fn validate_exit_codes() {
    let r = cli(&["validate", &fixture("fig1.pb.html")]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("info I01: 20 accepted orderings"));
    assert!(!r.out.contains("W01"));

    let r = cli(&["validate", &fixture("chain5.pb.html")]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("warning W01"));

    for (name, code) in [
        ("e01_unknown_tag.pb.html", "E01"),
        ("e02_duplicate_tag.pb.html", "E02"),
        ("e03_cycle.pb.html", "E03"),
        ("e04_distractor_dependency.pb.html", "E04"),
        ("e05_nested_group.pb.html", "E05"),
        ("e06_malformed.pb.html", "E06"),
        ("e07_no_required_blocks.pb.html", "E07"),
    ] {
        let r = cli(&["validate", &fixture(name)]);
        assert_eq!(r.code, EXIT_QUESTION_ERRORS, "{name}");
        assert!(r.out.contains(&format!("error {code}")), "{name}: {}", r.out);
        // Every other command refuses the file the same way.
        assert_eq!(cli(&["count", &fixture(name)]).code, EXIT_QUESTION_ERRORS, "{name}");
        assert_eq!(
            cli(&["grade", &fixture(name), "--ordering", "a"]).code,
            EXIT_QUESTION_ERRORS,
            "{name}"
        );
    }
}

#[test]
fn validate_json_report() {
    let r = cli(&["validate", "--json", &fixture("e03_cycle.pb.html")]);
    assert_eq!(r.code, EXIT_QUESTION_ERRORS);
    let v: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["question_id"], "e03_cycle");
    assert_eq!(v["ok"], false);
    assert_eq!(v["findings"][0]["code"], "E03");
    assert_eq!(v["findings"][0]["line"], 3);

    let r = cli(&["validate", "--json", &fixture("deadend.pb.html")]);
    let v: Value = serde_json::from_str(&r.out).unwrap();
    let w03: Vec<&Value> = v["findings"].as_array().unwrap().iter().filter(|f| f["code"] == "W03").collect();
    assert_eq!(w03.len(), 1);
    assert_eq!(w03[0]["subject"], "b");
    assert_eq!(w03[0]["severity"], "warning");
}

#[test]
fn render_is_deterministic() {
    let a = cli(&["render", &fixture("fig1.pb.html"), "--seed", "42", "--json"]);
    let b = cli(&["render", &fixture("fig1.pb.html"), "--seed", "42", "--json"]);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.out, b.out);
    assert!(!a.out.contains("depends"));
    let v: Value = serde_json::from_str(&a.out).unwrap();
    assert_eq!(v["blocks"].as_array().unwrap().len(), 7);

    let human = cli(&["render", &fixture("fig1.pb.html"), "--seed", "42"]);
    assert!(human.out.starts_with("fig1 (seed 42)\n"));
    assert_eq!(human.out.lines().filter(|l| l.starts_with('[')).count(), 7);
    assert_eq!(cli(&["render", &fixture("fig1.pb.html")]).code, EXIT_USAGE);
}

#[test]
fn crlf_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig1.pb.html");
    let text = std::fs::read_to_string(fixture_path("fig1.pb.html")).unwrap();
    std::fs::write(&path, text.replace('\n', "\r\n")).unwrap();
    let crlf = cli(&["render", path.to_str().unwrap(), "--seed", "7", "--json"]);
    let lf = cli(&["render", &fixture("fig1.pb.html"), "--seed", "7", "--json"]);
    assert_eq!(crlf.code, EXIT_OK);
    assert_eq!(crlf.out, lf.out);
    assert_eq!(cli(&["count", path.to_str().unwrap()]).out, "20\n");
}

#[test]
fn usage_errors() {
    let r = cli(&["frobnicate"]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.err.contains("Usage"));
    assert!(r.out.is_empty());
    assert_eq!(cli(&[]).code, EXIT_USAGE);
    assert_eq!(cli(&["count", &fixture("fig1.pb.html"), "--bogus"]).code, EXIT_USAGE);
    assert_eq!(cli(&["count", "/definitely/missing.pb.html"]).code, EXIT_USAGE);
    assert_eq!(cli(&["serve", "--questions-dir", "/definitely/missing", "--port", "0"]).code, EXIT_USAGE);
}

#[test]
fn help_and_version_succeed() {
    let r = cli(&["--help"]);
    assert_eq!(r.code, EXIT_OK);
    for sub in ["validate", "grade", "enumerate", "count", "render", "serve"] {
        assert!(r.out.contains(sub), "{sub}");
    }
    assert_eq!(cli(&["--version"]).code, EXIT_OK);
    let serve = cli(&["serve", "--help"]);
    assert!(serve.out.contains("PB_QUESTIONS_DIR"));
}
