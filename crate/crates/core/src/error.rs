use thiserror::Error;

/// Failures raised by the solver, the wavefunction tools and the grid oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("effective frequency ω − ω_c/2 = {0} is negative")]
    NegativeEffectiveFrequency(f64),

    #[error("supercritical coupling: (m_l + |e|Φ_AB)² − Z²|e|⁴ = {radicand} < 0")]
    SupercriticalCoupling { radicand: f64 },

    /// γ = 0 with s = +1: the Frobenius exponent vanishes and δ = 0.
    #[error("critical exponent: γ = 0 with s = +1 gives φ(0) ≠ 0")]
    CriticalExponent,

    #[error("imaginary energy: m0² + 2 m0 ω̄ κ = {0} < 0")]
    ImaginaryEnergy(f64),

    #[error("no bound state: {0}")]
    NoBoundState(String),

    #[error("degenerate condition: {0}")]
    DegenerateCondition(String),

    #[error("series not converged after {terms} terms at x = {x}")]
    SeriesNotConverged { x: f64, terms: usize },

    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
}

impl Error {
    /// Stable machine-readable name, used by the CLI error records.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::NegativeEffectiveFrequency(_) => "NegativeEffectiveFrequency",
            Error::SupercriticalCoupling { .. } => "SupercriticalCoupling",
            Error::CriticalExponent => "CriticalExponent",
            Error::ImaginaryEnergy(_) => "ImaginaryEnergy",
            Error::NoBoundState(_) => "NoBoundState",
            Error::DegenerateCondition(_) => "DegenerateCondition",
            Error::SeriesNotConverged { .. } => "SeriesNotConverged",
            Error::QuadratureFailure(_) => "QuadratureFailure",
            Error::GridTooCoarse(_) => "GridTooCoarse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
