use thiserror::Error;

/// Everything that can go wrong while building or transforming the algebraic
/// objects in this crate. Parse-shaped variants map to CLI exit code 2, the
/// rest to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix shapes are incompatible: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    ShapeMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("singular matrix has no inverse")]
    Singular,

    #[error("structure constants violate antisymmetry at (i, j, k) = ({i}, {j}, {k})")]
    Antisymmetry { i: usize, j: usize, k: usize },

    #[error(
        "Jacobi identity fails on basis triple ({i}, {j}, {k}): component {component} of the cyclic sum is {residual}"
    )]
    Jacobi {
        i: usize,
        j: usize,
        k: usize,
        component: usize,
        residual: String,
    },

    #[error("metric is not symmetric at entry ({i}, {j})")]
    MetricNotSymmetric { i: usize, j: usize },

    #[error("metric is not positive definite: leading principal minor of order {order} is {value}")]
    MetricNotPositiveDefinite { order: usize, value: String },

    #[error("J is not an almost complex structure: (J^2 + Id) has nonzero entry at ({i}, {j})")]
    NotAlmostComplex { i: usize, j: usize },

    #[error("J does not preserve the metric: (J^T g J - g) has nonzero entry at ({i}, {j})")]
    JNotOrthogonal { i: usize, j: usize },

    #[error("Lee data needs dimension 2n+2 with n >= 1; got dimension {dim}")]
    LeeUndefined { dim: usize },

    #[error("operation needs a nonzero Lee form, but |theta|^2 = 0 here")]
    LeeFormVanishes,

    #[error("{map} is not a derivation: fails on basis pair ({i}, {j}) in component {component}")]
    NotDerivation {
        map: &'static str,
        i: usize,
        j: usize,
        component: usize,
    },

    #[error("base algebra with (g, J) is not Kähler: {reason}")]
    BaseNotKaehler { reason: String },

    #[error("triple does not satisfy the membership conditions: {reason}")]
    NotMember { reason: String },

    #[error("linear system is infeasible: reduced row {row} reads 0 = {value}")]
    Infeasible { row: usize, value: String },

    #[error("square root of {value} is not exactly representable in this backend")]
    NoExactSqrt { value: String },

    #[error("cannot apply a form of degree {degree} here: {reason}")]
    BadDegree { degree: usize, reason: String },

    #[error("invalid rational literal {text:?}: {reason}")]
    ParseRational { text: String, reason: String },

    #[error("document is invalid at {field}: {reason}")]
    Document { field: String, reason: String },

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    /// True for errors that mean "the input text was malformed" rather than
    /// "the mathematics rejected the input".
    pub fn is_parse_error(&self) -> bool {
        matches!(self, Error::ParseRational { .. } | Error::Document { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
