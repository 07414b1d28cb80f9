//! Term weights for word clouds, keyword-lexicon area scores and the
//! document-by-goal alignment matrix.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::de::{Deserializer, MapAccess, Visitor};

use crate::corpus::{normalize_text, Document, GoalCatalog};
use crate::error::{Error, Result};
use crate::textsim::{
    jaro_winkler_encoded, AggregationPolicy, Alphabet, EncodedText, JaroWinklerParams, Scratch,
};

const DEFAULT_LEXICON: &str = include_str!("../data/areas-es.json");

pub const DEFAULT_TOP_N: usize = 100;

/// Labeled dense matrix, row-major, every value in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    values: Vec<f64>,
}

impl SimilarityMatrix {
    pub fn new(row_labels: Vec<String>, col_labels: Vec<String>, values: Vec<f64>) -> Result<Self> {
        if row_labels.is_empty() || col_labels.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        if values.len() != row_labels.len() * col_labels.len() {
            return Err(Error::InvalidParameter(format!(
                "matrix has {} values for {}x{} labels",
                values.len(),
                row_labels.len(),
                col_labels.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidParameter(format!(
                "matrix value {v} outside [0, 1]"
            )));
        }
        Ok(SimilarityMatrix {
            row_labels,
            col_labels,
            values,
        })
    }

    pub fn rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols() + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let c = self.cols();
        &self.values[row * c..(row + 1) * c]
    }

    pub fn is_symmetric(&self) -> bool {
        self.row_labels == self.col_labels
            && (0..self.rows()).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TermEntry {
    pub term: String,
    pub count: usize,
    /// `count / max_count`.
    pub weight: f64,
}

/// Term frequencies of one document, count descending then term ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct TermWeights {
    pub document_id: String,
    pub entries: Vec<TermEntry>,
}

pub fn term_weights(doc: &Document, top_n: usize) -> Result<TermWeights> {
    if doc.tokens.is_empty() {
        return Err(Error::NoTokens(doc.id.clone()));
    }
    if top_n == 0 {
        return Err(Error::InvalidParameter("top_n must be at least 1".into()));
    }
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for t in &doc.tokens {
        *counts.entry(t.surface.as_str()).or_default() += 1;
    }
    let mut ranked: Vec<(&str, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked.truncate(top_n);
    let max = ranked[0].1 as f64;
    Ok(TermWeights {
        document_id: doc.id.clone(),
        entries: ranked
            .into_iter()
            .map(|(term, count)| TermEntry {
                term: term.to_string(),
                count,
                weight: count as f64 / max,
            })
            .collect(),
    })
}

/// Thematic areas and their keywords. Keywords are normalized and belong to
/// exactly one area.
#[derive(Debug, Clone, PartialEq)]
pub struct AreaLexicon {
    areas: Vec<(String, BTreeSet<String>)>,
}

impl AreaLexicon {
    pub fn new<I, K>(areas: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, K)>,
        K: IntoIterator,
        K::Item: AsRef<str>,
    {
        let mut out: Vec<(String, BTreeSet<String>)> = Vec::new();
        let mut owner: HashMap<String, String> = HashMap::new();
        for (area, keywords) in areas {
            if area.trim().is_empty() {
                return Err(Error::InvalidParameter(
                    "area lexicon: empty area name".into(),
                ));
            }
            if out.iter().any(|(a, _)| *a == area) {
                return Err(Error::DuplicateArea(area));
            }
            let mut set = BTreeSet::new();
            for kw in keywords {
                let kw = normalize_text(kw.as_ref());
                if kw.is_empty() || set.contains(&kw) {
                    continue;
                }
                if let Some(first) = owner.get(&kw) {
                    return Err(Error::OverlappingKeyword {
                        keyword: kw,
                        first: first.clone(),
                        second: area,
                    });
                }
                owner.insert(kw.clone(), area.clone());
                set.insert(kw);
            }
            out.push((area, set));
        }
        if out.is_empty() {
            return Err(Error::EmptyLexicon);
        }
        Ok(AreaLexicon { areas: out })
    }

    /// Economy, health, education and politics seed keywords in Spanish.
    pub fn builtin_spanish() -> Self {
        Self::parse(DEFAULT_LEXICON, Path::new("builtin areas-es.json"))
            .expect("bundled lexicon is valid")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        let text = String::from_utf8(bytes).map_err(|_| Error::NotUtf8(path.to_path_buf()))?;
        Self::parse(&text, path)
    }

    /// `{"area": ["keyword", ...], ...}`; area order follows the file.
    pub fn parse(json: &str, source: &Path) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_str(json);
        let entries = de
            .deserialize_map(OrderedAreas)
            .and_then(|v| de.end().map(|_| v))
            .map_err(|e| Error::Json {
                path: source.to_path_buf(),
                source: e,
            })?;
        Self::new(entries)
    }

    pub fn area_names(&self) -> Vec<String> {
        self.areas.iter().map(|(a, _)| a.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.areas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.areas.is_empty()
    }

    pub fn area_of(&self, keyword: &str) -> Option<&str> {
        self.areas
            .iter()
            .find(|(_, kws)| kws.contains(keyword))
            .map(|(a, _)| a.as_str())
    }
}

// serde_json maps lose key order and silently drop duplicate keys; both matter
// here, so walk the object by hand.
struct OrderedAreas;

impl<'de> Visitor<'de> for OrderedAreas {
    type Value = Vec<(String, Vec<String>)>;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an object mapping area names to keyword arrays")
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
        let mut out = Vec::new();
        while let Some((k, v)) = map.next_entry::<String, Vec<String>>()? {
            out.push((k, v));
        }
        Ok(out)
    }
}

/// Fraction of a document's tokens falling in each area, lexicon order.
#[derive(Debug, Clone, PartialEq)]
pub struct AreaScores {
    pub document_id: String,
    pub scores: Vec<(String, f64)>,
}

pub fn area_scores(doc: &Document, lexicon: &AreaLexicon) -> Result<AreaScores> {
    if doc.tokens.is_empty() {
        return Err(Error::NoTokens(doc.id.clone()));
    }
    let total = doc.tokens.len() as f64;
    let scores = lexicon
        .areas
        .iter()
        .map(|(area, keywords)| {
            let hits = doc
                .tokens
                .iter()
                .filter(|t| keywords.contains(&t.surface))
                .count();
            (area.clone(), hits as f64 / total)
        })
        .collect();
    Ok(AreaScores {
        document_id: doc.id.clone(),
        scores,
    })
}

/// Documents (sorted by id) by goals (catalog order). Each cell aggregates
/// the Jaro-Winkler scores of every document sentence against the goal
/// statement with `policy`.
pub fn goal_alignment(
    docs: &[Document],
    goals: &GoalCatalog,
    params: &JaroWinklerParams,
    policy: &AggregationPolicy,
) -> Result<SimilarityMatrix> {
    if docs.is_empty() {
        return Err(Error::TooFewDocuments {
            required: 1,
            actual: 0,
        });
    }
    if goals.is_empty() {
        return Err(Error::EmptyCatalog);
    }
    let mut sorted: Vec<&Document> = docs.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    if let Some(d) = sorted.iter().find(|d| d.sentences.is_empty()) {
        return Err(Error::NoSentences(d.id.clone()));
    }

    let alphabet = Alphabet::from_texts(
        sorted
            .iter()
            .flat_map(|d| d.sentences.iter().map(|s| s.text.as_str()))
            .chain(goals.goals.iter().map(|g| g.statement.as_str())),
    );
    let statements: Vec<EncodedText> = goals
        .goals
        .iter()
        .map(|g| alphabet.encode(&g.statement))
        .collect();
    let values: Vec<f64> = sorted
        .par_iter()
        .flat_map_iter(|doc| {
            let sentences: Vec<EncodedText> = doc
                .sentences
                .iter()
                .map(|s| alphabet.encode(&s.text))
                .collect();
            let mut scratch = Scratch::default();
            statements
                .iter()
                .map(|goal| {
                    let scores: Vec<f64> = sentences
                        .iter()
                        .map(|s| jaro_winkler_encoded(s, goal, params, &mut scratch))
                        .collect();
                    policy.aggregate(&scores)
                })
                .collect::<Vec<_>>()
        })
        .collect();

    SimilarityMatrix::new(
        sorted.iter().map(|d| d.id.clone()).collect(),
        goals.ids(),
        values,
    )
}
