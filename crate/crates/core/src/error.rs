use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vector ({x}, {y}, {z}) is not a unit vector (norm {norm})")]
    NonUnitVector { x: f64, y: f64, z: f64, norm: f64 },

    #[error("non-finite component in {0}")]
    NonFinite(&'static str),

    #[error("coefficient {name} = {value} outside [-1, 1]")]
    CoefficientOutOfRange { name: &'static str, value: f64 },

    #[error("matrix dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {off_diagonal:e})")]
    NotConverged { sweeps: usize, off_diagonal: f64 },

    #[error("expectation value has imaginary residue {0:e}; operator is not Hermitian")]
    ImaginaryResidue(f64),

    #[error("B^2 = 4 - [A,A'][B,B'] violated: deviation {deviation:e}, cross commutators {cross:e}")]
    IdentityViolated { deviation: f64, cross: f64 },

    #[error("invalid hidden-variable model: {0}")]
    InvalidModel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
