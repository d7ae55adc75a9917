use std::collections::HashSet;
use std::fmt::Write;

use crate::model::{FeedbackMode, Question, ScoringMode};

/// Canonical markup for a question. Group members are written together at
/// the position of the group's first member, so `parse(to_markup(q)) == q`
/// whenever each group's members are adjacent in `q.blocks` and listed in
/// that order.
pub fn to_markup(question: &Question) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "<pl-question-panel>\n{}\n</pl-question-panel>\n", question.prompt);
    let feedback = match question.options.feedback_mode {
        FeedbackMode::FirstFailure => "first-wrong",
        FeedbackMode::None => "none",
    };
    let credit = match question.options.scoring_mode {
        ScoringMode::EditDistance => "lcs",
        ScoringMode::Binary => "none",
    };
    let _ = writeln!(out, "<pl-order-blocks feedback=\"{feedback}\" partial-credit=\"{credit}\">");

    let mut written_groups = HashSet::new();
    for block in &question.blocks {
        match block.group.as_deref().and_then(|g| question.group(g)) {
            None => write_answer(&mut out, question, &block.tag, "  "),
            Some(group) => {
                if !written_groups.insert(group.tag.as_str()) {
                    continue;
                }
                let _ = write!(out, "  <pl-block-group tag=\"{}\"", group.tag);
                if !group.depends.is_empty() {
                    let _ = write!(out, " depends=\"{}\"", group.depends.join(","));
                }
                out.push_str(">\n");
                for member in &group.members {
                    write_answer(&mut out, question, member, "    ");
                }
                out.push_str("  </pl-block-group>\n");
            }
        }
    }
    out.push_str("</pl-order-blocks>\n");
    out
}

fn write_answer(out: &mut String, question: &Question, tag: &str, indent: &str) {
    let Some(block) = question.block(tag) else {
        return;
    };
    let _ = write!(out, "{indent}<pl-answer tag=\"{}\"", block.tag);
    if block.is_distractor {
        out.push_str(" correct=\"false\"");
    }
    if !block.depends.is_empty() {
        let _ = write!(out, " depends=\"{}\"", block.depends.join(","));
    }
    let _ = writeln!(out, ">{}</pl-answer>", block.text);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qformat::parse_question_with_id;
    use crate::test_fixtures::{fig1, induction};

    #[test]
    fn round_trips() {
        for q in [fig1(), induction()] {
            let text = to_markup(&q);
            let back = parse_question_with_id(&q.id, &text).unwrap();
            assert_eq!(back.question, q, "{text}");
            assert!(back.warnings.is_empty());
        }
    }
}
