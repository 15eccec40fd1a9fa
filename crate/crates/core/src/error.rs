use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus {0}")]
    InvalidModulus(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("k = {k} is not a unit modulo {n}")]
    NotAnAutomorphism { k: i64, n: u64 },
    #[error("element is not real")]
    NotReal,
    #[error("element does not lie in the cubic subfield")]
    NotInSubfield,
    #[error("element is not rational")]
    NotRational,
    #[error("generator has degree {0}, expected 3")]
    NotCubic(usize),
    #[error("Gram matrix is singular")]
    DegenerateBasis,
    #[error("full sum does not vanish")]
    NotARelation,
    #[error("relation too long: {0} terms (max 12)")]
    RelationTooLong(usize),
    #[error("invalid relation: {0}")]
    InvalidRelation(String),
    #[error("invariant breach: {0}")]
    InvariantBreach(String),
    #[error("rank of M_R is {0}, expected 2")]
    DegenerateRank(usize),
    #[error("all elimination constraints vanish identically")]
    Underdetermined,
    #[error("geometric infeasibility: {0}")]
    Infeasible(String),
    #[error("non-periodic configuration: {0}")]
    NonPeriodic(String),
    #[error("degenerate saddle: marked point orbits collide")]
    DegenerateSaddle,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
