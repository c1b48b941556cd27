use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("fundamental symmetry is not Hermitian (residual {0:.3e})")]
    NotHermitian(f64),
    #[error("fundamental symmetry is not an involution (residual {0:.3e})")]
    NotInvolution(f64),
    #[error("relations are defined over different spaces")]
    HostMismatch,
    #[error("relation is not symmetric")]
    NotSymmetric,
    #[error("relation is not self-adjoint")]
    NotSelfAdjoint,
    #[error("{z} is not a regular point")]
    NotRegular { z: Complex64 },
    #[error("boundary map is not surjective (rank {rank}, expected {expected})")]
    NotSurjective { rank: usize, expected: usize },
    #[error("Green identity fails: residual {residual:.3e} at basis pair ({i}, {j})")]
    GreenIdentity { residual: f64, i: usize, j: usize },
    #[error("kernel of {0} is not self-adjoint")]
    KernelNotSelfAdjoint(&'static str),
    #[error("boundary map restricted to the witness is not invertible")]
    RestrictedSingular,
    #[error("transform is not unitary for the boundary form (residual {0:.3e})")]
    NotBoundaryUnitary(f64),
    #[error("tau does not map T bijectively onto T'")]
    TauNotBijective,
    #[error("Theta is not self-adjoint (residual {0:.3e})")]
    ThetaNotSelfAdjoint(f64),
    #[error("block B is singular")]
    SingularB,
    #[error("not in the extension class: {0}")]
    NotInClass(String),
    #[error("signatures differ: {0:?} vs {1:?}")]
    SignatureMismatch((usize, usize), (usize, usize)),
    #[error("rejection sampling gave up after {0} attempts")]
    SamplingExhausted(usize),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
