use thiserror::Error;

pub type Result<T> = std::result::Result<T, HtmError>;

#[derive(Debug, Error)]
pub enum HtmError {
    #[error("vector ({x}, {y}, {z}) is not a finite unit vector")]
    InvalidVector { x: f64, y: f64, z: f64 },

    #[error("depth {depth} outside the supported range {min}..={max}")]
    DepthLimitExceeded { depth: u32, min: u32, max: u32 },

    #[error("invalid HTM id {0}")]
    InvalidId(u64),

    #[error("invalid trixel name {0:?}")]
    InvalidName(String),

    #[error("circle with offset {0} has no perimeter")]
    DegenerateCircle(f64),

    #[error("edge endpoints are antipodal")]
    InvalidEdge,

    #[error("range budget must be at least 1, got {0}")]
    InvalidBudget(usize),

    #[error("range depth {range_depth} is shallower than cover entry depth {entry_depth}")]
    RangeDepthTooShallow { range_depth: u32, entry_depth: u32 },

    #[error("malformed patch boundary: {0}")]
    MalformedBoundary(String),

    #[error("patch has no arcs")]
    EmptyPatch,

    #[error("points do not fit inside one open hemisphere")]
    NotHemispheric,

    #[error("need at least 3 distinct, non-collinear points, got {0}")]
    TooFewPoints(usize),

    #[error("search radius must be positive, got {0}")]
    InvalidRadius(f64),

    #[error("cost model needs positive ratio and density, got R={ratio}, D={density}")]
    InvalidCostModel { ratio: f64, density: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("malformed index file: {0}")]
    IndexFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
