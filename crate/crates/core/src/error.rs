use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("element is not a member of the group")]
    NotInGroup,
    #[error("n must be positive")]
    ZeroConductor,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse cyclotomic {0:?}")]
    CyclotomicParse(String),
    #[error("value is not rational")]
    NotRational,
    #[error("class function is not a virtual character")]
    NotVirtualCharacter,
    #[error("{0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("class function has {found} values, the group has {expected} classes")]
    ClassCountMismatch { expected: usize, found: usize },
    #[error("class functions belong to different groups")]
    OwnerMismatch,
    #[error("group of order {0} is not a p-group")]
    NotPGroup(u64),
    #[error("normal closure of the seed is not elementary abelian")]
    NotElementaryAbelian,
    #[error("quotient action on the chosen orbit is not faithful (order {found}, need {expected}); select another orbit")]
    UnfaithfulOrbit { expected: u64, found: u64 },
    #[error("malformed presentation: {0}")]
    Presentation(String),
    #[error("relator {index} ({family}) does not evaluate to the identity")]
    RelatorFailed { index: usize, family: &'static str },
    #[error("malformed store: {0}")]
    Store(String),
    #[error("store segments have different headers")]
    HeaderMismatch,
    #[error("group of order {0} exceeds the limit for this method")]
    TooLarge(u64),
    #[error("oracle failed: {0}")]
    Oracle(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
