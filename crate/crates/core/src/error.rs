use alloc::string::String;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CochainError {
    #[error("degree {degree}: expected a {expected:?} matrix, found {found:?}")]
    ShapeMismatch { degree: i32, expected: (usize, usize), found: (usize, usize) },
    #[error("{dims} graded pieces but {differentials} differentials")]
    DifferentialCount { dims: usize, differentials: usize },
    #[error("d ∘ d is not zero")]
    NotAComplex,
    #[error("map does not commute with the differentials")]
    NotAChainMap,
    #[error("maps are not composable")]
    NotComposable,
    #[error("degree {degree} outside {min}..={max}")]
    DegreeOutOfRange { degree: i32, min: i32, max: i32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StratifiedError {
    #[error(transparent)]
    Cochain(#[from] CochainError),
    #[error("model invariant violated: {0}")]
    Model(String),
    #[error("link complex Y is not identified with B ⊗ F")]
    MissingBigrading,
    #[error("restriction M → Y is not a chain map")]
    InconsistentRestriction,
    #[error("perversity {src} does not truncate inside {tgt}")]
    PerversityOrder { src: String, tgt: String },
    #[error("perversity {0} lies strictly between the extended ranges")]
    NotExtended(String),
    #[error("unknown built-in space `{0}`")]
    UnknownSpace(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("negative eigenvalue {value} in degree {degree}")]
    Negative { degree: usize, value: f64 },
    #[error("eigenvalues in degree {0} are not sorted")]
    Unsorted(usize),
    #[error("degree {degree}: {zeros} zero modes but Betti number {betti}")]
    BettiMismatch { degree: usize, zeros: usize, betti: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FibreError {
    #[error("circle factor needs at least 3 segments, got {0}")]
    DegenerateSize(usize),
    #[error("lengths must be positive and finite")]
    BadLength,
    #[error("degree {degree} out of range (fibre dimension {dim})")]
    Degree { degree: usize, dim: usize },
    #[error("requested {count} eigenvalues from a {available}-dimensional space")]
    Count { count: usize, available: usize },
    #[error("eigenpair {index} in degree {degree} has residual {residual:e} above {bound:e}")]
    Residual { degree: usize, index: usize, residual: f64, bound: f64 },
    #[error("symmetric eigensolver did not converge in degree {0}")]
    NoConvergence(usize),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Cochain(#[from] CochainError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RadialError {
    #[error("x0 must lie in (0, 1/10], got {0}")]
    BadGrid(f64),
    #[error("profile grid is not strictly increasing or has non-finite samples")]
    BadProfile,
    #[error("profile is not a fibre-harmonic mode (eigenvalue {0})")]
    NotHarmonic(f64),
    #[error("K_c is unbounded: k = {k} is not below (f+3)/2 − a")]
    Unbounded { k: i64 },
    #[error("c must lie in (1/2, 1), got {0}")]
    BadBasepoint(f64),
    #[error("grid too coarse for quadrature ({0} points)")]
    Quadrature(usize),
    #[error("ODE step size underflow at x = {0}")]
    StepUnderflow(f64),
    #[error("restriction of the form to x = c is not exact on the fibre (residual {0:e})")]
    NotExact(f64),
    #[error("form degree {0} has no radial part to integrate")]
    Degree(usize),
}
