use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("a point of the tropical projective torus needs at least 2 coordinates, got {0}")]
    TooFewCoordinates(usize),
    #[error("coordinate {0} is not finite")]
    NonFinite(usize),
    #[error("no permutation has a finite weight (no finite perfect assignment)")]
    DegenerateAssignment,
    #[error("a {0}x{0} matrix has no second permutation")]
    NoSecondPermutation(usize),
    #[error("rank {d} must be smaller than the ambient dimension {e}")]
    RankTooLarge { d: usize, e: usize },
    #[error("C({e},{d}) = {count} subsets exceeds the supported limit of {limit}")]
    TooManySubsets { e: usize, d: usize, count: u128, limit: u128 },
    #[error("malformed linear space: coordinate {0} has an all -inf Plücker slice")]
    MalformedLinearSpace(usize),
    #[error("malformed linear space: exchange relation fails for sigma={sigma:?}, tau={tau:?}")]
    ExchangeRelation { sigma: Vec<usize>, tau: Vec<usize> },
    #[error("empty input")]
    Empty,
    #[error("not a dissimilarity matrix: {0}")]
    NotDissimilarity(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("linear program failed: {0}")]
    Solver(String),
    #[error("Newick syntax error at byte {offset}: {msg}")]
    Newick { offset: usize, msg: String },
    #[error("input is not an ultrametric")]
    NotUltrametric,
    #[error("vector of length {0} is not C(m,2) for any m >= 2")]
    NotTriangular(usize),
    #[error("leaf label sets differ: {0}")]
    MixedLeafSets(String),
    #[error("missing variable {0}")]
    MissingVariable(String),
    #[error("LP parse error on line {line}: {msg}")]
    LpParse { line: usize, msg: String },
    #[error("CSV error at row {row}, column {col}: {msg}")]
    Csv { row: usize, col: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
