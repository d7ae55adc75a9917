//! Strict recognizer for the question markup.
//!
//! Only the `pl-` elements are parsed. Bodies of `pl-answer` and
//! `pl-question-panel` are kept verbatim, so inline HTML or math inside them
//! is opaque display text. Outside `pl-order-blocks`, any non-`pl-` markup is
//! skipped.

use std::collections::{HashMap, HashSet};

use super::ParseFinding;
use crate::error::Error;
use crate::graph::expand;
use crate::model::{
    Block, FeedbackMode, GradingOptions, Group, Question, ScoringMode, UNKNOWN_TAG,
};

const PANEL: &str = "pl-question-panel";
const CONTAINER: &str = "pl-order-blocks";
const GROUP: &str = "pl-block-group";
const ANSWER: &str = "pl-answer";

/// A successfully parsed question and any warnings raised along the way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedQuestion {
    pub question: Question,
    pub warnings: Vec<ParseFinding>,
}

pub fn parse_question(text: &str) -> Result<ParsedQuestion, Vec<ParseFinding>> {
    parse_question_with_id("", text)
}

/// Parses markup into a question with the given id. On failure every finding
/// is returned, warnings included.
pub fn parse_question_with_id(id: &str, text: &str) -> Result<ParsedQuestion, Vec<ParseFinding>> {
    let text = text.replace("\r\n", "\n");
    let mut scanner = Scanner::new(&text);
    let doc = match scanner.document() {
        Ok(doc) => doc,
        Err(err) => {
            let mut findings = scanner.warnings;
            findings.push(err);
            return Err(findings);
        }
    };
    let mut findings = scanner.warnings;
    let question = build(id, doc, &mut findings);
    findings.sort_by_key(|f| (f.line, f.severity));
    match question {
        Some(question) if !findings.iter().any(ParseFinding::is_error) => Ok(ParsedQuestion {
            question,
            warnings: findings,
        }),
        _ => Err(findings),
    }
}

#[derive(Debug)]
struct RawAnswer {
    line: usize,
    tag: Option<String>,
    depends: Vec<String>,
    correct: bool,
    text: String,
    group: Option<usize>,
}

#[derive(Debug)]
struct RawGroup {
    line: usize,
    tag: Option<String>,
    depends: Vec<String>,
}

#[derive(Debug, Default)]
struct RawDoc {
    prompt: Option<String>,
    container_line: Option<usize>,
    options: GradingOptions,
    answers: Vec<RawAnswer>,
    groups: Vec<RawGroup>,
}

struct OpenTag {
    name: String,
    line: usize,
    attrs: Vec<(String, String)>,
    self_closing: bool,
}

struct Scanner<'a> {
    src: &'a str,
    pos: usize,
    line_starts: Vec<usize>,
    warnings: Vec<ParseFinding>,
}

type Step<T> = Result<T, ParseFinding>;

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        let line_starts = std::iter::once(0)
            .chain(src.match_indices('\n').map(|(i, _)| i + 1))
            .collect();
        Scanner {
            src,
            pos: 0,
            line_starts,
            warnings: Vec::new(),
        }
    }

    fn line_at(&self, offset: usize) -> usize {
        self.line_starts.partition_point(|&s| s <= offset)
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn malformed(&self, offset: usize, message: impl Into<String>) -> ParseFinding {
        ParseFinding::error("E06", self.line_at(offset), message)
    }

    fn skip_whitespace(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn skip_comment(&mut self) -> Step<()> {
        let start = self.pos;
        match self.rest().find("-->") {
            Some(end) => {
                self.pos += end + 3;
                Ok(())
            }
            None => Err(self.malformed(start, "unclosed comment")),
        }
    }

    /// Reads an opening tag starting at `<`.
    fn open_tag(&mut self) -> Step<OpenTag> {
        let start = self.pos;
        let line = self.line_at(start);
        self.pos += 1;
        let name_len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '-'))
            .unwrap_or(self.rest().len());
        let name = self.rest()[..name_len].to_string();
        self.pos += name_len;
        let mut attrs: Vec<(String, String)> = Vec::new();
        loop {
            self.skip_whitespace();
            let rest = self.rest();
            if rest.is_empty() {
                return Err(self.malformed(start, format!("unterminated <{name}> tag")));
            }
            if let Some(after) = rest.strip_prefix("/>") {
                self.pos = self.src.len() - after.len();
                return Ok(OpenTag {
                    name,
                    line,
                    attrs,
                    self_closing: true,
                });
            }
            if let Some(after) = rest.strip_prefix('>') {
                self.pos = self.src.len() - after.len();
                return Ok(OpenTag {
                    name,
                    line,
                    attrs,
                    self_closing: false,
                });
            }
            let key_len = rest
                .find(|c: char| c.is_whitespace() || c == '=' || c == '>' || c == '/')
                .unwrap_or(rest.len());
            if key_len == 0 {
                return Err(self.malformed(self.pos, format!("bad attribute in <{name}>")));
            }
            let key = rest[..key_len].to_string();
            self.pos += key_len;
            self.skip_whitespace();
            let value = if self.rest().starts_with('=') {
                self.pos += 1;
                self.skip_whitespace();
                self.attr_value(&name)?
            } else {
                String::new()
            };
            if attrs.iter().any(|(k, _)| *k == key) {
                return Err(self.malformed(start, format!("attribute `{key}` repeated on <{name}>")));
            }
            attrs.push((key, value));
        }
    }

    fn attr_value(&mut self, element: &str) -> Step<String> {
        let start = self.pos;
        let rest = self.rest();
        match rest.chars().next() {
            Some(q @ ('"' | '\'')) => match rest[1..].find(q) {
                Some(end) => {
                    self.pos += end + 2;
                    Ok(rest[1..end + 1].to_string())
                }
                None => Err(self.malformed(start, format!("unterminated attribute value in <{element}>"))),
            },
            Some(_) => {
                let len = rest
                    .find(|c: char| c.is_whitespace() || c == '>')
                    .unwrap_or(rest.len());
                self.pos += len;
                Ok(rest[..len].to_string())
            }
            None => Err(self.malformed(start, format!("unterminated <{element}> tag"))),
        }
    }

    /// Raw body up to the closing tag, which is consumed. Any nested `pl-`
    /// structural element means the element was never closed.
    fn raw_body(&mut self, tag: &OpenTag, forbidden: &[&str]) -> Step<String> {
        let close = format!("</{}>", tag.name);
        let rest = self.rest();
        let end = rest.find(&close);
        let cut = end.unwrap_or(rest.len());
        let nested = forbidden
            .iter()
            .filter_map(|f| rest[..cut].find(&format!("<{f}")))
            .min();
        match (end, nested) {
            (Some(end), None) => {
                self.pos += end + close.len();
                Ok(rest[..end].to_string())
            }
            _ => Err(ParseFinding::error(
                "E06",
                tag.line,
                format!("<{}> is not closed", tag.name),
            )),
        }
    }

    fn document(&mut self) -> Step<RawDoc> {
        let mut doc = RawDoc::default();
        while let Some(lt) = self.rest().find('<') {
            self.pos += lt;
            let rest = self.rest();
            if rest.starts_with("<!--") {
                self.skip_comment()?;
            } else if rest.starts_with("</pl-") {
                return Err(self.malformed(self.pos, "closing tag without a matching opening tag"));
            } else if rest.starts_with("<pl-") {
                let tag = self.open_tag()?;
                match tag.name.as_str() {
                    PANEL => {
                        for (k, _) in &tag.attrs {
                            self.ignored_at(tag.line, PANEL, k);
                        }
                        let body = if tag.self_closing {
                            String::new()
                        } else {
                            self.raw_body(&tag, &[CONTAINER])?
                        };
                        let body = body.trim().to_string();
                        doc.prompt = Some(match doc.prompt.take() {
                            Some(prev) => format!("{prev}\n{body}"),
                            None => body,
                        });
                    }
                    CONTAINER => {
                        if doc.container_line.is_some() {
                            return Err(ParseFinding::error(
                                "E06",
                                tag.line,
                                "only one <pl-order-blocks> is allowed",
                            ));
                        }
                        doc.container_line = Some(tag.line);
                        doc.options = self.container_options(&tag)?;
                        if !tag.self_closing {
                            self.container(&mut doc)?;
                        }
                    }
                    ANSWER | GROUP => {
                        return Err(ParseFinding::error(
                            "E06",
                            tag.line,
                            format!("<{}> outside <pl-order-blocks>", tag.name),
                        ))
                    }
                    other => {
                        return Err(ParseFinding::error(
                            "E06",
                            tag.line,
                            format!("unknown element <{other}>"),
                        ))
                    }
                }
            } else {
                self.pos += 1;
            }
        }
        Ok(doc)
    }

    fn container_options(&mut self, tag: &OpenTag) -> Step<GradingOptions> {
        let mut options = GradingOptions::default();
        for (key, value) in &tag.attrs {
            match key.as_str() {
                "feedback" => {
                    options.feedback_mode = match value.as_str() {
                        "first-wrong" | "first-wrong-verbose" | "first-failure" => FeedbackMode::FirstFailure,
                        "none" => FeedbackMode::None,
                        other => {
                            return Err(ParseFinding::error(
                                "E06",
                                tag.line,
                                format!("unknown feedback mode `{other}`"),
                            ))
                        }
                    }
                }
                "partial-credit" => {
                    options.scoring_mode = match value.as_str() {
                        "lcs" | "edit-distance" => ScoringMode::EditDistance,
                        "none" => ScoringMode::Binary,
                        other => {
                            return Err(ParseFinding::error(
                                "E06",
                                tag.line,
                                format!("unknown partial-credit mode `{other}`"),
                            ))
                        }
                    }
                }
                other => self.ignored_at(tag.line, CONTAINER, other),
            }
        }
        Ok(options)
    }

    /// Children of `pl-order-blocks` (or of a group when `group` is set).
    fn children(&mut self, doc: &mut RawDoc, group: Option<(usize, &OpenTag)>) -> Step<()> {
        let (close, opener) = match group {
            Some((_, tag)) => (format!("</{GROUP}>"), tag.line),
            None => (format!("</{CONTAINER}>"), doc.container_line.unwrap_or(1)),
        };
        let element = if group.is_some() { GROUP } else { CONTAINER };
        loop {
            self.skip_whitespace();
            let rest = self.rest();
            if rest.is_empty() {
                return Err(ParseFinding::error("E06", opener, format!("<{element}> is not closed")));
            }
            if let Some(after) = rest.strip_prefix(close.as_str()) {
                self.pos = self.src.len() - after.len();
                return Ok(());
            }
            if rest.starts_with("<!--") {
                self.skip_comment()?;
                continue;
            }
            if rest.starts_with(&format!("<{ANSWER}")) {
                let tag = self.open_tag()?;
                if tag.name == ANSWER {
                    self.answer(doc, tag, group.map(|(g, _)| g))?;
                    continue;
                }
                return Err(ParseFinding::error("E06", tag.line, format!("unknown element <{}>", tag.name)));
            }
            if rest.starts_with(&format!("<{GROUP}")) {
                let tag = self.open_tag()?;
                if tag.name != GROUP {
                    return Err(ParseFinding::error("E06", tag.line, format!("unknown element <{}>", tag.name)));
                }
                if group.is_some() {
                    return Err(ParseFinding::error(
                        "E05",
                        tag.line,
                        "<pl-block-group> cannot be nested inside another group",
                    ));
                }
                self.group(doc, tag)?;
                continue;
            }
            return Err(self.malformed(self.pos, format!("unexpected content inside <{element}>")));
        }
    }

    fn container(&mut self, doc: &mut RawDoc) -> Step<()> {
        self.children(doc, None)
    }

    fn group(&mut self, doc: &mut RawDoc, tag: OpenTag) -> Step<()> {
        let mut raw = RawGroup {
            line: tag.line,
            tag: None,
            depends: Vec::new(),
        };
        for (key, value) in &tag.attrs {
            match key.as_str() {
                "tag" => raw.tag = Some(value.trim().to_string()),
                "depends" => raw.depends = split_depends(value),
                other => self.ignored_at(tag.line, GROUP, other),
            }
        }
        if tag.self_closing {
            return Err(ParseFinding::error("E06", tag.line, "<pl-block-group> has no blocks"));
        }
        let index = doc.groups.len();
        doc.groups.push(raw);
        let before = doc.answers.len();
        self.children(doc, Some((index, &tag)))?;
        if doc.answers.len() == before {
            return Err(ParseFinding::error("E06", tag.line, "<pl-block-group> has no blocks"));
        }
        Ok(())
    }

    fn ignored_at(&mut self, line: usize, element: &str, attr: &str) {
        self.warnings.push(ParseFinding::warning(
            "P01",
            line,
            format!("attribute `{attr}` on <{element}> is not used and was ignored"),
        ));
    }

    fn answer(&mut self, doc: &mut RawDoc, tag: OpenTag, group: Option<usize>) -> Step<()> {
        let mut raw = RawAnswer {
            line: tag.line,
            tag: None,
            depends: Vec::new(),
            correct: true,
            text: String::new(),
            group,
        };
        for (key, value) in &tag.attrs {
            match key.as_str() {
                "tag" => raw.tag = Some(value.trim().to_string()),
                "depends" => raw.depends = split_depends(value),
                "correct" => {
                    raw.correct = match value.trim() {
                        "true" | "True" => true,
                        "false" | "False" => false,
                        other => {
                            return Err(ParseFinding::error(
                                "E06",
                                tag.line,
                                format!("`correct` must be true or false, not `{other}`"),
                            ))
                        }
                    }
                }
                other => self.ignored_at(tag.line, ANSWER, other),
            }
        }
        if !tag.self_closing {
            raw.text = self
                .raw_body(&tag, &[ANSWER, GROUP, CONTAINER])?
                .trim()
                .to_string();
        }
        doc.answers.push(raw);
        Ok(())
    }
}

fn split_depends(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

fn valid_tag(tag: &str) -> bool {
    !tag.is_empty()
        && tag != UNKNOWN_TAG
        && !tag
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, ',' | '<' | '>' | '"' | '\'' | '&'))
}

/// Turns the raw element tree into a question, reporting semantic errors.
fn build(id: &str, doc: RawDoc, findings: &mut Vec<ParseFinding>) -> Option<Question> {
    let Some(container_line) = doc.container_line else {
        findings.push(ParseFinding::error("E07", 1, "no <pl-order-blocks> element"));
        return None;
    };
    if doc.prompt.is_none() {
        findings.push(ParseFinding::warning("P02", 1, "no <pl-question-panel>; prompt is empty"));
    }

    let explicit: HashSet<&str> = doc
        .answers
        .iter()
        .filter_map(|a| a.tag.as_deref())
        .chain(doc.groups.iter().filter_map(|g| g.tag.as_deref()))
        .collect();
    let synthetic = |prefix: char, counter: &mut usize| loop {
        *counter += 1;
        let candidate = format!("{prefix}{counter}");
        if !explicit.contains(candidate.as_str()) {
            return candidate;
        }
    };
    let mut answer_counter = 0;
    let answer_tags: Vec<String> = doc
        .answers
        .iter()
        .map(|a| a.tag.clone().unwrap_or_else(|| synthetic('d', &mut answer_counter)))
        .collect();
    let mut group_counter = 0;
    let group_tags: Vec<String> = doc
        .groups
        .iter()
        .map(|g| g.tag.clone().unwrap_or_else(|| synthetic('g', &mut group_counter)))
        .collect();

    let mut ok = true;
    let mut declared: HashMap<&str, usize> = HashMap::new();
    let decls = doc
        .answers
        .iter()
        .map(|a| a.line)
        .zip(&answer_tags)
        .chain(doc.groups.iter().map(|g| g.line).zip(&group_tags));
    let mut decls: Vec<(usize, &String)> = decls.collect();
    decls.sort_by_key(|(line, _)| *line);
    for (line, tag) in decls {
        if !valid_tag(tag) {
            findings.push(ParseFinding::error("E06", line, format!("`{tag}` is not a valid tag")));
            ok = false;
        } else if let Some(first) = declared.insert(tag.as_str(), line) {
            declared.insert(tag.as_str(), first);
            findings.push(ParseFinding::error(
                "E02",
                line,
                format!("tag `{tag}` already declared on line {first}"),
            ));
            ok = false;
        }
    }

    let distractors: HashSet<&str> = doc
        .answers
        .iter()
        .zip(&answer_tags)
        .filter(|(a, _)| !a.correct)
        .map(|(_, t)| t.as_str())
        .collect();
    let mut check_refs = |line: usize, deps: &[String]| {
        for dep in deps {
            if !declared.contains_key(dep.as_str()) {
                findings.push(ParseFinding::error("E01", line, format!("depends on unknown tag `{dep}`")));
                ok = false;
            } else if distractors.contains(dep.as_str()) {
                findings.push(ParseFinding::error(
                    "E04",
                    line,
                    format!("depends on distractor `{dep}`; distractors cannot be part of a proof"),
                ));
                ok = false;
            }
        }
    };
    for answer in doc.answers.iter().filter(|a| a.correct) {
        check_refs(answer.line, &answer.depends);
    }
    for group in &doc.groups {
        check_refs(group.line, &group.depends);
    }

    let mut blocks = Vec::with_capacity(doc.answers.len());
    for (answer, tag) in doc.answers.iter().zip(&answer_tags) {
        let mut depends = answer.depends.clone();
        if !answer.correct && !depends.is_empty() {
            findings.push(ParseFinding::warning(
                "P03",
                answer.line,
                "depends on a distractor is ignored",
            ));
            depends.clear();
        }
        blocks.push(Block {
            tag: tag.clone(),
            text: answer.text.clone(),
            is_distractor: !answer.correct,
            depends,
            group: answer.group.map(|g| group_tags[g].clone()),
        });
    }
    let groups = doc
        .groups
        .iter()
        .enumerate()
        .map(|(gi, g)| Group {
            tag: group_tags[gi].clone(),
            depends: g.depends.clone(),
            members: doc
                .answers
                .iter()
                .zip(&answer_tags)
                .filter(|(a, _)| a.group == Some(gi))
                .map(|(_, t)| t.clone())
                .collect(),
        })
        .collect();

    if !blocks.iter().any(|b| !b.is_distractor) {
        findings.push(ParseFinding::error(
            "E07",
            container_line,
            "<pl-order-blocks> has no required blocks",
        ));
        ok = false;
    }
    if !ok {
        return None;
    }

    let question = Question {
        id: id.to_string(),
        prompt: doc.prompt.unwrap_or_default(),
        blocks,
        groups,
        options: doc.options,
    };
    let line_of = |tag: &str| {
        doc.answers
            .iter()
            .zip(&answer_tags)
            .map(|(a, t)| (a.line, t))
            .chain(doc.groups.iter().map(|g| g.line).zip(&group_tags))
            .find(|(_, t)| t.as_str() == tag)
            .map_or(container_line, |(line, _)| line)
    };
    match expand(&question) {
        Ok(_) => Some(question),
        Err(Error::Cycle(cycle)) => {
            findings.push(ParseFinding::error(
                "E03",
                cycle.iter().map(|t| line_of(t)).min().unwrap_or(container_line),
                format!("dependency cycle: {}", cycle.join(" -> ")),
            ));
            None
        }
        Err(other) => {
            findings.push(ParseFinding::error("E06", container_line, other.to_string()));
            None
        }
    }
}
