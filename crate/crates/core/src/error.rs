use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("corpus directory not found: {}", .0.display())]
    MissingDirectory(PathBuf),
    #[error("no documents in {}", .0.display())]
    NoDocuments(PathBuf),
    #[error("{} is not valid UTF-8", .0.display())]
    NotUtf8(PathBuf),
    #[error("cannot derive a document id from {}", .0.display())]
    BadDocumentName(PathBuf),
    #[error("duplicate document id {id:?} ({})", .path.display())]
    DuplicateDocument { id: String, path: PathBuf },
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: malformed JSON: {source}", .path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("goal catalog: duplicate goal id {0:?}")]
    DuplicateGoal(String),
    #[error("goal catalog: goal {0:?} has an empty statement")]
    EmptyGoalStatement(String),
    #[error("goal catalog is empty")]
    EmptyCatalog,
    #[error("area lexicon: duplicate area {0:?}")]
    DuplicateArea(String),
    #[error("area lexicon: keyword {keyword:?} appears in both {first:?} and {second:?}")]
    OverlappingKeyword {
        keyword: String,
        first: String,
        second: String,
    },
    #[error("area lexicon is empty")]
    EmptyLexicon,
    #[error("document {0:?} has no sentences")]
    NoSentences(String),
    #[error("document {0:?} has no tokens")]
    NoTokens(String),
    #[error("at least {required} documents required, got {actual}")]
    TooFewDocuments { required: usize, actual: usize },
    #[error("no target sentences to compare against")]
    EmptyTargets,
    #[error("oracle input too long: {len} characters (limit {limit})")]
    OracleLimit { len: usize, limit: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("matrix has no cells")]
    EmptyMatrix,
    #[error("nothing to render: term list is empty")]
    EmptyTerms,
    #[error("{}: CSV error: {source}", .path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
