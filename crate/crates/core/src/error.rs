use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{quantity} must be positive, got {value}")]
    NonPositive { quantity: &'static str, value: f64 },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("unsupported structure X{0}: only n = 2, 3, 4 are equidistant in three dimensions")]
    UnsupportedStructure(usize),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("sites {0} and {1} coincide")]
    DuplicateSite(usize, usize),

    #[error("dressing b = {b}, e = {e}: the prop function has a node on (0, inf) (e > |b|)")]
    IrregularDressing { b: f64, e: f64 },

    #[error("prop function vanishes at r = {r}")]
    PropNode { r: f64 },

    #[error("substitution pole: alpha = {alpha} equals e = {e}")]
    SubstitutionPole { alpha: f64, e: f64 },

    #[error("boundary coefficient is singular at k^2 = b^2 (k = {k}, b = {b})")]
    SingularCoefficient { k: f64, b: f64 },

    #[error("point lies on the dressing center; the dressed Green function is singular there")]
    CenterSingularity,

    #[error("unsupported dressing: {0}")]
    UnsupportedDressing(String),

    #[error("Green function requested at coincident points")]
    Coincident,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("compatibility condition has complex roots (discriminant {discriminant:e})")]
    ComplexRoots { discriminant: f64 },

    #[error("pencil solve failed: {0}")]
    Pencil(String),

    #[error("oracle: {0}")]
    Oracle(String),
}
