use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use proofblocks::{expand, parse_question_with_id, ExpandedGraph, Question};

const QUESTION_SUFFIX: &str = ".pb.html";
const TITLE_CHARS: usize = 60;

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("reading {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

pub(crate) struct Entry {
    pub(crate) question: Question,
    pub(crate) graph: ExpandedGraph,
}

/// Questions parsed once at startup. Immutable afterwards.
#[derive(Default)]
pub struct QuestionStore {
    root: Option<PathBuf>,
    entries: BTreeMap<String, Entry>,
}

impl QuestionStore {
    /// Loads every `*.pb.html` directly under `dir`; the id is the file name
    /// without that suffix. Files that fail to read, parse or expand are
    /// skipped with a warning.
    pub fn load(dir: impl AsRef<Path>) -> Result<Self, LoadError> {
        let dir = dir.as_ref();
        let io_err = |source| LoadError::Io {
            path: dir.to_path_buf(),
            source,
        };
        let mut paths = Vec::new();
        for item in std::fs::read_dir(dir).map_err(io_err)? {
            let path = item.map_err(io_err)?.path();
            if path.is_file() && id_of(&path).is_some() {
                paths.push(path);
            }
        }
        paths.sort();

        let mut store = QuestionStore {
            root: Some(dir.to_path_buf()),
            entries: BTreeMap::new(),
        };
        for path in paths {
            let id = id_of(&path).unwrap().to_string();
            let text = match std::fs::read_to_string(&path) {
                Ok(text) => text.replace("\r\n", "\n"),
                Err(e) => {
                    log::warn!("skipping {}: {e}", path.display());
                    continue;
                }
            };
            match parse_question_with_id(&id, &text) {
                Ok(parsed) => {
                    if let Err(e) = store.insert(parsed.question) {
                        log::warn!("skipping {}: {e}", path.display());
                    }
                }
                Err(findings) => {
                    let first = findings.iter().find(|f| f.is_error()).or(findings.first());
                    match first {
                        Some(f) => log::warn!("skipping {}: {f}", path.display()),
                        None => log::warn!("skipping {}", path.display()),
                    }
                }
            }
        }
        log::info!("loaded {} question(s) from {}", store.len(), dir.display());
        Ok(store)
    }

    /// Builds a store from already parsed questions, keyed by their ids.
    pub fn from_questions(questions: impl IntoIterator<Item = Question>) -> proofblocks::Result<Self> {
        let mut store = QuestionStore::default();
        for q in questions {
            store.insert(q)?;
        }
        Ok(store)
    }

    fn insert(&mut self, question: Question) -> proofblocks::Result<()> {
        let graph = expand(&question)?;
        self.entries
            .insert(question.id.clone(), Entry { question, graph });
        Ok(())
    }

    pub fn root(&self) -> Option<&Path> {
        self.root.as_deref()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Ids in sorted order.
    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn question(&self, id: &str) -> Option<&Question> {
        self.entries.get(id).map(|e| &e.question)
    }

    pub(crate) fn entry(&self, id: &str) -> Option<&Entry> {
        self.entries.get(id)
    }
}

fn id_of(path: &Path) -> Option<&str> {
    let name = path.file_name()?.to_str()?;
    let id = name.strip_suffix(QUESTION_SUFFIX)?;
    (!id.is_empty()).then_some(id)
}

/// First text of a prompt: markup tags removed, whitespace collapsed and cut
/// to 60 characters with a trailing ellipsis.
pub fn title_of(prompt: &str) -> String {
    let mut plain = String::with_capacity(prompt.len());
    let mut in_tag = false;
    for c in prompt.chars() {
        match c {
            '<' => in_tag = true,
            '>' if in_tag => {
                in_tag = false;
                plain.push(' ');
            }
            _ if !in_tag => plain.push(c),
            _ => {}
        }
    }
    let words: Vec<&str> = plain.split_whitespace().collect();
    let text = words.join(" ");
    if text.chars().count() <= TITLE_CHARS {
        return text;
    }
    let cut: String = text.chars().take(TITLE_CHARS - 1).collect();
    format!("{}…", cut.trim_end())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn titles() {
        assert_eq!(title_of("<p>Prove  that\n x.</p>"), "Prove that x.");
        assert_eq!(title_of(""), "");
        let long = "word ".repeat(30);
        let t = title_of(&long);
        assert_eq!(t.chars().count(), 60);
        assert!(t.ends_with('…'));
    }

    #[test]
    fn ids_need_the_suffix() {
        assert_eq!(id_of(Path::new("a/fig1.pb.html")), Some("fig1"));
        assert_eq!(id_of(Path::new("a/fig1.html")), None);
        assert_eq!(id_of(Path::new(".pb.html")), None);
    }
}
