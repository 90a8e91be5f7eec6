use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("value {value} out of range (bound {bound})")]
    OutOfRange { value: usize, bound: usize },

    #[error("map is not injective: points {first} and {second} share image {image}")]
    NotInjective { first: usize, second: usize, image: usize },

    #[error("partial bijections {first} and {second} are not compatible")]
    Incompatible { first: usize, second: usize },

    #[error("closure exceeded cap {cap} after {count} elements")]
    ClosureExplosion { count: usize, cap: usize },

    #[error("symmetric inverse monoid on {n} points has {size} elements, above cap {cap}")]
    SizeOverflow { n: usize, size: u128, cap: usize },

    #[error("invalid inverse monoid table: {0}")]
    InvalidTable(String),

    #[error("atoms do not partition the points: {0}")]
    NotPartition(String),

    #[error("set is not measurable: {0}")]
    NotMeasurable(String),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("morphism endpoints do not match")]
    EndpointMismatch,

    #[error("elements belong to different spaces")]
    SpaceMismatch,

    #[error("cannot normalize a measure on the empty set")]
    EmptyNormalization,

    #[error("decision budget exhausted: {0}")]
    Undecided(String),

    #[error("ambiguous maximum: {0}")]
    Ambiguous(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
