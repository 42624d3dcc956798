use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("lattice is not contained in the claimed superlattice")]
    NotSublattice,
    #[error("lattice ranks differ: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("zero ideal")]
    ZeroIdeal,
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid field parameter: {0}")]
    BadField(String),
    #[error("bad discriminant {0}: {1}")]
    BadDiscriminant(i64, String),
    #[error("group mismatch")]
    GroupMismatch,
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),
    #[error("map is not surjective")]
    NotSurjective,
    #[error("map is not a section of the given surjection")]
    NotSection,
    #[error("map is not equivariant")]
    NotEquivariant,
    #[error("matrix does not satisfy the semilinear involution law")]
    NotInvolution,
    #[error("map does not send the source lattice into the target lattice")]
    NotLatticeMap,
    #[error("map is not injective, so it is not an isogeny")]
    NotIsogeny,
    #[error("input sequence is not exact: {0}")]
    NotExactInput(String),
    #[error("module map is not well defined")]
    NotWellDefined,
    #[error("tau is not in the upper half plane")]
    NotUpperHalfPlane,
    #[error("requested precision cannot be achieved: {0}")]
    PrecisionUnachievable(String),
    #[error("precision exhausted after retries: {0}")]
    PrecisionExhausted(String),
    #[error("computation cancelled")]
    Cancelled,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invariant violated: {0}")]
    Invariant(String),
}
