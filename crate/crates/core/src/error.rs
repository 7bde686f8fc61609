use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid scalar: {0}")]
    InvalidScalar(String),
    #[error("invalid group: {}", .0.join("; "))]
    InvalidGroup(Vec<String>),
    #[error("unknown group element `{0}`")]
    UnknownElement(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("out of window: {0}")]
    OutOfWindow(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid builder input: {0}")]
    InvalidBuilder(String),
    #[error("no components in window")]
    EmptyWindow,
    #[error("G-algebra does not carry the identification with an associated graded algebra")]
    NotAssociated,
    #[error("principal map fails verification: {0}")]
    UnverifiedPrincipalMap(String),
    #[error("twisting system fails verification: {0}")]
    UnverifiedTwistingSystem(String),
    #[error("twisting system is not normalized: {0}")]
    UnnormalizedTwistingSystem(String),
    #[error("morphism is not a certified isomorphism: {0}")]
    UncertifiedIso(String),
    #[error("missing component: {0}")]
    MissingComponent(String),
    #[error("singular block: {0}")]
    SingularBlock(String),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
