use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid topology parameters: {0}")]
    InvalidParameter(String),
    #[error("grid topology needs a perfect-square vertex count, got n = {0}")]
    NonSquareGrid(usize),
    #[error("locality radius {r} is too large for n = {n}")]
    RadiusTooLarge { n: usize, r: usize },
    #[error("small-world weights violate w0*n <= C*w1*r (w0 = {w0}, w1 = {w1}, n = {n}, r = {r}, C = {c})")]
    WeightRatioUnbounded {
        w0: f64,
        w1: f64,
        n: usize,
        r: usize,
        c: f64,
    },
    #[error("hyper-edge width L = {width} does not fit in a window of radius r = {r}")]
    WidthExceedsRadius { width: usize, r: usize },
    #[error("hyper-edge universe too large to enumerate ({0} candidate windows)")]
    UniverseTooLarge(usize),

    #[error("theta must lie in (0, 1), got {0}")]
    ThetaOutOfRange(f64),
    #[error("single-vertex error rate p must lie in [0, 0.5), got {0}")]
    POutOfRange(f64),
    #[error("target sample size must be positive, got {0}")]
    NonpositiveSampleSize(f64),
    #[error("topology has no edges")]
    EmptyTopology,
    #[error("weight profile produced a non-positive weight {weight} at distance {distance}")]
    NonpositiveWeight { distance: f64, weight: f64 },

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),
    #[error("Chernoff information is zero (theta = 0.5 carries no information)")]
    ZeroDivergence,
    #[error("unsupported limit combination: {0}")]
    UnsupportedCombination(String),

    #[error("recovery requires theta < 0.5 (pre-flip parities first), got {0}")]
    ThetaAboveHalf(f64),
    #[error("window width {w} is invalid for n = {n} (must be even, >= 2 and <= n)")]
    InvalidWindow { w: usize, n: usize },
    #[error("brute-force ML supports n <= {max}, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("labelings have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(usize),
    #[error("no samples")]
    EmptySamples,
    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("sample file parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
