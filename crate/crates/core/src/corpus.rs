//! Document and goal-catalog ingestion.
//!
//! Every string that reaches the similarity code passes through
//! [`normalize_text`] first: lowercase, compatibility-normalized, diacritics
//! folded to their base letters and whitespace collapsed. Jaro-Winkler is
//! character-exact, so this is the single place where case and accents are
//! dealt with.

use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

const BUILTIN_SPANISH_STOPWORDS: &str = include_str!("../data/stopwords-es.txt");

/// Tokens shorter than this (in characters) are dropped.
pub const MIN_TOKEN_CHARS: usize = 2;

const SENTENCE_TERMINATORS: [char; 4] = ['.', '!', '?', '\n'];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedSentence {
    pub index: usize,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub sentence_index: usize,
}

/// One ingested plan document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    /// Slug derived from the file name; unique within a corpus.
    pub id: String,
    pub title: String,
    pub raw_text: String,
    pub sentences: Vec<NormalizedSentence>,
    /// Concatenation of the per-sentence token lists, in sentence order.
    pub tokens: Vec<Token>,
}

impl Document {
    /// Preprocess `raw_text` into sentences and tokens.
    ///
    /// Line breaks in the raw text are sentence boundaries, so each line is
    /// normalized on its own before segmentation.
    pub fn from_text(
        id: impl Into<String>,
        title: impl Into<String>,
        raw_text: impl Into<String>,
        stopwords: &StopwordList,
    ) -> Self {
        let raw_text = raw_text.into();
        let normalized = raw_text
            .lines()
            .map(normalize_text)
            .collect::<Vec<_>>()
            .join("\n");
        let sentences = segment_sentences(&normalized);
        let tokens = sentences
            .iter()
            .flat_map(|s| tokenize(s, stopwords))
            .collect();
        Document {
            id: id.into(),
            title: title.into(),
            raw_text,
            sentences,
            tokens,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Goal {
    pub id: String,
    pub name: String,
    pub statement: String,
}

/// Labeled goal statements in catalog (file) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoalCatalog {
    pub goals: Vec<Goal>,
}

impl GoalCatalog {
    pub fn len(&self) -> usize {
        self.goals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.goals.is_empty()
    }

    pub fn ids(&self) -> Vec<String> {
        self.goals.iter().map(|g| g.id.clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopwordList {
    words: HashSet<String>,
    source: String,
}

impl StopwordList {
    pub fn empty() -> Self {
        StopwordList {
            words: HashSet::new(),
            source: "none".to_string(),
        }
    }

    /// The Spanish list bundled with the crate.
    pub fn builtin_spanish() -> Self {
        Self::parse(BUILTIN_SPANISH_STOPWORDS, "builtin-spanish")
    }

    /// One word per line; blank lines and lines starting with `#` are ignored.
    pub fn load(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        let text = String::from_utf8(bytes).map_err(|_| Error::NotUtf8(path.to_path_buf()))?;
        Ok(Self::parse(&text, &path.display().to_string()))
    }

    pub fn parse(text: &str, source: &str) -> Self {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(normalize_text)
            .filter(|w| !w.is_empty())
            .collect();
        StopwordList {
            words,
            source: source.to_string(),
        }
    }

    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        StopwordList {
            words: words
                .into_iter()
                .map(|w| normalize_text(w.as_ref()))
                .filter(|w| !w.is_empty())
                .collect(),
            source: "inline".to_string(),
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}

fn fold_once(text: &str) -> String {
    let lowered = text.to_lowercase();
    let stripped: String = lowered.nfkd().filter(|c| !is_combining_mark(*c)).collect();
    let recomposed: String = stripped.nfkc().collect();
    let mut out = String::with_capacity(recomposed.len());
    for word in recomposed.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

/// Lowercase, NFKC, fold diacritics (`á` → `a`, `ñ` → `n`) and collapse
/// whitespace runs to single spaces. Total and idempotent.
pub fn normalize_text(raw: &str) -> String {
    let mut current = fold_once(raw);
    // A few compatibility characters decompose into uppercase letters or
    // into sequences that only settle after a second pass.
    for _ in 0..4 {
        let next = fold_once(&current);
        if next == current {
            break;
        }
        current = next;
    }
    current
}

/// Split normalized text on `.`, `!`, `?` and newlines. Fragments are trimmed
/// and empty ones dropped; indices are consecutive from 0.
pub fn segment_sentences(normalized: &str) -> Vec<NormalizedSentence> {
    normalized
        .split(SENTENCE_TERMINATORS)
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .enumerate()
        .map(|(index, text)| NormalizedSentence {
            index,
            text: text.to_string(),
        })
        .collect()
}

/// Maximal runs of letters, minus stopwords and tokens under
/// [`MIN_TOKEN_CHARS`] characters.
pub fn tokenize(sentence: &NormalizedSentence, stopwords: &StopwordList) -> Vec<Token> {
    sentence
        .text
        .split(|c: char| !c.is_alphabetic())
        .filter(|w| w.chars().count() >= MIN_TOKEN_CHARS && !stopwords.contains(w))
        .map(|w| Token {
            surface: w.to_string(),
            sentence_index: sentence.index,
        })
        .collect()
}

/// Filename stem to document id: normalized, every non-alphanumeric run
/// replaced by one hyphen, no leading or trailing hyphen.
pub fn slugify(name: &str) -> String {
    let mut slug = String::with_capacity(name.len());
    for c in normalize_text(name).chars() {
        if c.is_ascii_alphanumeric() {
            slug.push(c);
        } else if !slug.is_empty() && !slug.ends_with('-') {
            slug.push('-');
        }
    }
    while slug.ends_with('-') {
        slug.pop();
    }
    slug
}

fn is_txt(path: &Path) -> bool {
    path.is_file()
        && path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("txt"))
}

fn load_document(path: &Path, stopwords: &StopwordList) -> Result<Document> {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| Error::BadDocumentName(path.to_path_buf()))?;
    let id = slugify(stem);
    if id.is_empty() {
        return Err(Error::BadDocumentName(path.to_path_buf()));
    }
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let mut text = String::from_utf8(bytes).map_err(|_| Error::NotUtf8(path.to_path_buf()))?;
    if text.starts_with('\u{feff}') {
        text.remove(0);
    }
    Ok(Document::from_text(id, stem, text, stopwords))
}

/// Load every `.txt` file in `dir` (non-recursive), sorted by document id.
pub fn load_corpus(dir: &Path, stopwords: &StopwordList) -> Result<Vec<Document>> {
    if !dir.is_dir() {
        return Err(Error::MissingDirectory(dir.to_path_buf()));
    }
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .map(|entry| entry.map(|e| e.path()).map_err(|e| Error::io(dir, e)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|p| is_txt(p))
        .collect();
    if paths.is_empty() {
        return Err(Error::NoDocuments(dir.to_path_buf()));
    }
    // read_dir order is platform dependent; errors must not be
    paths.sort();

    let mut docs = paths
        .par_iter()
        .map(|p| load_document(p, stopwords).map(|d| (d, p)))
        .collect::<Result<Vec<_>>>()?;
    docs.sort_by(|a, b| a.0.id.cmp(&b.0.id).then_with(|| a.1.cmp(b.1)));

    let mut seen = BTreeSet::new();
    for (doc, path) in &docs {
        if !seen.insert(doc.id.as_str()) {
            return Err(Error::DuplicateDocument {
                id: doc.id.clone(),
                path: path.to_path_buf(),
            });
        }
    }
    Ok(docs.into_iter().map(|(d, _)| d).collect())
}

#[derive(Deserialize)]
struct RawGoal {
    id: String,
    name: String,
    statement: String,
}

/// Load a goal catalog: a JSON array of `{"id", "name", "statement"}`.
pub fn load_goals(path: &Path) -> Result<GoalCatalog> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let text = String::from_utf8(bytes).map_err(|_| Error::NotUtf8(path.to_path_buf()))?;
    parse_goals(&text, path)
}

pub fn parse_goals(json: &str, source: &Path) -> Result<GoalCatalog> {
    let raw: Vec<RawGoal> = serde_json::from_str(json).map_err(|e| Error::Json {
        path: source.to_path_buf(),
        source: e,
    })?;
    let mut seen = HashSet::new();
    let mut goals = Vec::with_capacity(raw.len());
    for (n, g) in raw.into_iter().enumerate() {
        let id = g.id.trim().to_string();
        if id.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "goal catalog: entry {n} has an empty id"
            )));
        }
        if !seen.insert(id.clone()) {
            return Err(Error::DuplicateGoal(id));
        }
        // trimmed like a sentence so a verbatim copy in a plan matches exactly
        let statement = normalize_text(&g.statement)
            .trim_matches(|c: char| c == ' ' || SENTENCE_TERMINATORS.contains(&c))
            .to_string();
        if statement.is_empty() {
            return Err(Error::EmptyGoalStatement(id));
        }
        goals.push(Goal {
            id,
            name: normalize_text(&g.name),
            statement,
        });
    }
    Ok(GoalCatalog { goals })
}
