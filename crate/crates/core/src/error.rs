use thiserror::Error;

/// Failures raised by the geometric constructions, coordinate maps and
/// spectral computations. Every variant names the invariant that broke and,
/// where it makes sense, the vertex index at which it happened.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("no normalized lift: gcd(n = {n}, d + 1 = {}) != 1", d + 1)]
    GcdObstruction { n: usize, d: usize },

    #[error("degenerate input: consecutive determinant vanishes at index {index}")]
    DegenerateInput { index: i64 },

    #[error("inconsistent lift at index {index}: V_j coefficient deviates from (-1)^d")]
    InconsistentLift { index: i64 },

    #[error("reconstructed polygon is not in general position (index {index})")]
    DegenerateOutput { index: i64 },

    #[error("degenerate span: points do not span a hyperplane (index {index})")]
    DegenerateSpan { index: i64 },

    #[error("degenerate intersection: hyperplanes do not meet in a point (index {index})")]
    DegenerateIntersection { index: i64 },

    #[error("points are not collinear")]
    NotCollinear,

    #[error("coincident points in cross-ratio")]
    CoincidentPoints,

    #[error("division by zero in {expr} at index {index}")]
    DivisionByZero { expr: &'static str, index: usize },

    #[error("singular step: {expr} vanishes at index {index}")]
    SingularStep { expr: &'static str, index: usize },

    #[error("singular matrix")]
    SingularMatrix,

    #[error("spectral function has unexpected support: {0}")]
    UnexpectedSupport(String),

    #[error("no exact root: {0}")]
    NoExactRoot(String),

    #[error("non-generic spectral data: {0}")]
    NonGeneric(String),

    #[error("ODE integration failed: {0}")]
    StiffnessFailure(String),

    #[error("envelope kernel is not one-dimensional at x = {x}")]
    KernelDimension { x: f64 },

    #[error("poor conditioning: residual {residual:.3e} exceeds {threshold:.3e}")]
    PoorConditioning { residual: f64, threshold: f64 },

    #[error("ill-conditioned operator recovery at x = {x}")]
    IllConditioned { x: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
