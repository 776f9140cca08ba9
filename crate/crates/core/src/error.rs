use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unknown model family `{0}` (expected `ghz` or `z2`)")]
    UnknownFamily(String),
    #[error("unknown embedding scheme `{0}` (expected `scar` or `ground`)")]
    UnknownScheme(String),
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("every trace amplitude vanishes; the state is zero")]
    DegenerateInput,
    #[error("normalization trace tr(E^L) vanishes")]
    DegenerateNormalization,
    #[error("dominant transfer-matrix eigenvalue is degenerate (relative gap {gap:.3e}); use the finite-size correlation")]
    AtTransition { gap: f64 },
    #[error("local complement has dimension {found}, expected {expected} (numerical rank of the MPS block space is {rank})")]
    ComplementRank {
        expected: usize,
        found: usize,
        rank: usize,
    },
    #[error("coefficient matrix is not Hermitian (max |c - c^H| = {0:.3e})")]
    NonHermitian(f64),
    #[error("chain of {sites} sites is shorter than the operator support {support}")]
    ChainTooShort { sites: usize, support: usize },
    #[error("dense matrix of dimension {dim} exceeds the cap {cap}")]
    DenseCapExceeded { dim: usize, cap: usize },
    #[error("Hamiltonian is not translation covariant (deviation {0:.3e})")]
    SymmetryViolation(f64),
    #[error("eigensolver did not converge for a matrix of dimension {dim}")]
    NoConvergence { dim: usize },
    #[error("operation needs an even number of sites, got {0}")]
    OddLength(usize),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
