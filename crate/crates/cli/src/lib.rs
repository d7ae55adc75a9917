//! The `proofblocks` command line: validate, grade, enumerate, count, render
//! and serve. [`run`] does all the work so tests can drive it in-process.
//!
//! Exit codes: 0 success, 1 the submission is not correct, 2 the question has
//! parse or lint errors (or cannot be processed), 3 usage or IO errors.

use std::ffi::OsString;
use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{ArgGroup, Parser, Subcommand};
use proofblocks::{
    count_orderings, expand, grade_ordering, lint, parse_question_with_id, parse_submission,
    render_student_view, valid_orderings, Exec, LintFinding, LintSeverity, ParseFinding,
    ParseSeverity, Question, Status,
};
use proofblocks_service::{QuestionStore, ServiceConfig};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCORRECT: i32 = 1;
pub const EXIT_QUESTION_ERRORS: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Parser)]
#[command(name = "proofblocks", version, about = "Author, check and grade proof-ordering questions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and lint a question file.
    Validate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Grade one ordering of block tags.
    #[command(group(ArgGroup::new("input").required(true)))]
    Grade {
        file: PathBuf,
        /// Comma-separated block tags, e.g. `1,4,2,3`.
        #[arg(long, group = "input", value_name = "TAGS")]
        ordering: Option<String>,
        /// JSON submission: `{"question_id": "...", "ordering": [...]}`.
        #[arg(long, group = "input", value_name = "FILE")]
        submission: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Print accepted orderings, one per line.
    Enumerate {
        file: PathBuf,
        #[arg(long, value_name = "N")]
        limit: Option<usize>,
    },
    /// Print the number of accepted orderings.
    Count { file: PathBuf },
    /// Print the shuffled student view for a seed.
    Render {
        file: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Serve the HTTP API over a directory of question files.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        #[arg(long, env = "PB_QUESTIONS_DIR", value_name = "DIR")]
        questions_dir: PathBuf,
        /// Origins allowed by CORS; `*` allows any.
        #[arg(
            long = "allow-origin",
            value_name = "ORIGIN",
            value_delimiter = ',',
            default_value = "http://localhost:5173"
        )]
        allow_origin: Vec<String>,
        /// Built client assets, served under `/`.
        #[arg(long, value_name = "DIR")]
        static_dir: Option<PathBuf>,
    },
}

/// A command failure together with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn question(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_QUESTION_ERRORS,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

type CmdResult = Result<i32, Failure>;

/// Runs the command line `args` (including the program name) and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Validate { file, json } => validate(&file, json, out),
        Command::Grade {
            file,
            ordering,
            submission,
            json,
        } => grade(&file, ordering, submission, json, out, err),
        Command::Enumerate { file, limit } => enumerate(&file, limit, out, err),
        Command::Count { file } => count(&file, out, err),
        Command::Render { file, seed, json } => render(&file, seed, json, out, err),
        Command::Serve {
            port,
            host,
            questions_dir,
            allow_origin,
            static_dir,
        } => serve(
            SocketAddr::new(host, port),
            &questions_dir,
            ServiceConfig {
                allowed_origins: allow_origin,
                static_dir,
            },
        ),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Reads a UTF-8 file with line endings normalized to `\n`.
fn read_text(path: &Path) -> Result<String, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    Ok(text.replace("\r\n", "\n"))
}

fn question_id(path: &Path) -> String {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    match name.strip_suffix(".pb.html") {
        Some(id) => id.to_string(),
        None => path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or(name),
    }
}

fn print_parse_finding(err: &mut dyn Write, path: &Path, f: &ParseFinding) -> std::io::Result<()> {
    let e = ReportEntry::from(f);
    writeln!(err, "{}:{}: {} {}: {}", path.display(), f.line, e.severity, e.code, e.message)
}

/// Parses a question, printing warnings and failing with code 2 on errors.
fn load(path: &Path, err: &mut dyn Write) -> Result<Question, Failure> {
    let text = read_text(path)?;
    match parse_question_with_id(&question_id(path), &text) {
        Ok(parsed) => {
            for w in &parsed.warnings {
                print_parse_finding(err, path, w)?;
            }
            Ok(parsed.question)
        }
        Err(findings) => {
            for f in &findings {
                print_parse_finding(err, path, f)?;
            }
            let errors = findings.iter().filter(|f| f.is_error()).count();
            Err(Failure::question(format!("{}: {errors} error(s)", path.display())))
        }
    }
}

fn load_graph(path: &Path, err: &mut dyn Write) -> Result<(Question, proofblocks::ExpandedGraph), Failure> {
    let question = load(path, err)?;
    let graph = expand(&question).map_err(|e| Failure::question(e.to_string()))?;
    Ok((question, graph))
}

#[derive(Serialize)]
struct Report {
    question_id: String,
    ok: bool,
    errors: usize,
    warnings: usize,
    findings: Vec<ReportEntry>,
}

#[derive(Serialize)]
struct ReportEntry {
    severity: &'static str,
    code: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    subject: Option<String>,
    message: String,
}

impl From<&ParseFinding> for ReportEntry {
    fn from(f: &ParseFinding) -> Self {
        ReportEntry {
            severity: match f.severity {
                ParseSeverity::Error => "error",
                ParseSeverity::Warning => "warning",
            },
            code: f.code.clone(),
            line: Some(f.line),
            subject: None,
            message: f.message.clone(),
        }
    }
}

impl From<&LintFinding> for ReportEntry {
    fn from(f: &LintFinding) -> Self {
        ReportEntry {
            severity: match f.severity {
                LintSeverity::Error => "error",
                LintSeverity::Warning => "warning",
                LintSeverity::Info => "info",
            },
            code: f.code.clone(),
            line: None,
            subject: Some(f.subject.clone()),
            message: f.message.clone(),
        }
    }
}

fn validate(path: &Path, json: bool, out: &mut dyn Write) -> CmdResult {
    let text = read_text(path)?;
    let id = question_id(path);
    let entries: Vec<ReportEntry> = match parse_question_with_id(&id, &text) {
        Ok(parsed) => {
            let mut entries: Vec<ReportEntry> = parsed.warnings.iter().map(Into::into).collect();
            entries.extend(lint(&parsed.question).iter().map(ReportEntry::from));
            entries
        }
        Err(findings) => findings.iter().map(Into::into).collect(),
    };
    let errors = entries.iter().filter(|e| e.severity == "error").count();
    let warnings = entries.iter().filter(|e| e.severity == "warning").count();
    let report = Report {
        question_id: id,
        ok: errors == 0,
        errors,
        warnings,
        findings: entries,
    };
    if json {
        writeln!(out, "{}", to_json(&report))?;
    } else {
        for e in &report.findings {
            let location = match (e.line, &e.subject) {
                (Some(line), _) => format!("{}:{line}", path.display()),
                (None, Some(subject)) => format!("{} [{subject}]", path.display()),
                (None, None) => path.display().to_string(),
            };
            writeln!(out, "{location}: {} {}: {}", e.severity, e.code, e.message)?;
        }
        writeln!(out, "{errors} error(s), {warnings} warning(s)")?;
    }
    Ok(if report.ok { EXIT_OK } else { EXIT_QUESTION_ERRORS })
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types always serialize")
}

fn split_tags(list: &str) -> Vec<String> {
    if list.trim().is_empty() {
        return Vec::new();
    }
    list.split(',').map(|t| t.trim().to_string()).collect()
}

fn grade(
    path: &Path,
    ordering: Option<String>,
    submission: Option<PathBuf>,
    json: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let (question, graph) = load_graph(path, err)?;
    let tags = match (ordering, submission) {
        (Some(list), _) => split_tags(&list),
        (None, Some(file)) => {
            let sub = parse_submission(&read_text(&file)?)
                .map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
            if !sub.question_id.is_empty() && sub.question_id != question.id {
                writeln!(
                    err,
                    "warning: submission is for `{}`, grading against `{}`",
                    sub.question_id, question.id
                )?;
            }
            sub.ordering
        }
        (None, None) => unreachable!("clap requires one input"),
    };
    let outcome = grade_ordering(&graph, question.options, &tags, Exec::default())
        .map_err(|e| Failure::question(e.to_string()))?;
    if json {
        writeln!(out, "{}", to_json(&outcome))?;
    } else {
        match (outcome.status, outcome.first_failure) {
            (Status::WrongAtLine, Some(line)) => writeln!(out, "wrong at line {line}")?,
            (status, _) => writeln!(out, "{}", status.to_string().replace('_', " "))?,
        }
        writeln!(out, "score: {} ({:.6})", outcome.score, outcome.score.to_f64())?;
        writeln!(out, "edit distance: {}", outcome.edit_distance)?;
    }
    Ok(if outcome.status == Status::Correct {
        EXIT_OK
    } else {
        EXIT_INCORRECT
    })
}

fn enumerate(path: &Path, limit: Option<usize>, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let (_, graph) = load_graph(path, err)?;
    let orderings = valid_orderings(&graph, limit).map_err(|e| {
        Failure::usage(format!("{e}; pass --limit to list only the first orderings"))
    })?;
    for t in orderings {
        writeln!(out, "{}", t.join(","))?;
    }
    Ok(EXIT_OK)
}

fn count(path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let (_, graph) = load_graph(path, err)?;
    let n = count_orderings(&graph).map_err(|e| Failure::question(e.to_string()))?;
    writeln!(out, "{n}")?;
    Ok(EXIT_OK)
}

fn render(path: &Path, seed: u64, json: bool, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let question = load(path, err)?;
    let view = render_student_view(&question, seed);
    if json {
        writeln!(out, "{}", to_json(&view))?;
    } else {
        writeln!(out, "{} (seed {})", view.question_id, view.seed)?;
        if !view.prompt.is_empty() {
            writeln!(out, "{}", view.prompt)?;
        }
        writeln!(out)?;
        for b in &view.blocks {
            writeln!(out, "[{}] {}", b.render_id, b.text)?;
        }
    }
    Ok(EXIT_OK)
}

fn serve(addr: SocketAddr, dir: &Path, config: ServiceConfig) -> CmdResult {
    let store = QuestionStore::load(dir).map_err(|e| Failure::usage(e.to_string()))?;
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(proofblocks_service::serve(addr, store, config))?;
    Ok(EXIT_OK)
}
