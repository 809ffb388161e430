use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cover element `{0}` has zero measure")]
    ZeroMeasure(String),
    #[error("weight {weight} for member `{member}` must be positive")]
    NonPositiveWeight { member: String, weight: String },
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("conflicting weights for member `{0}`")]
    ConflictingWeight(String),
    #[error("empty collection")]
    EmptyCollection,
    #[error("nerve budget exceeded: estimated {estimated} simplices, budget {budget}")]
    NerveBudgetExceeded { estimated: usize, budget: usize },
    #[error("unequal cover cardinality: {0} vs {1}")]
    UnequalCardinality(usize, usize),
    #[error("covers do not share a measure")]
    MeasureMismatch,
    #[error("not a path: no edge between `{0}` and `{1}`")]
    NotAPath(String, String),
    #[error("no path between `{0}` and `{1}`")]
    NoPath(String, String),
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("unknown label `{label}`; nearest matches: {}", suggestions.join(", "))]
    UnknownLabel { label: String, suggestions: Vec<String> },
    #[error("balls do not all intersect (radius {radius} <= half-spread {half_spread})")]
    BallsDoNotIntersect { radius: f64, half_spread: f64 },
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("insufficient samples: no sample landed in the union")]
    InsufficientSamples,
    #[error("diagrams mix homology dimensions")]
    MixedDimensions,
    #[error("no elements survive filter")]
    NoElementsSurvive,
    #[error("{0}")]
    Usage(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
