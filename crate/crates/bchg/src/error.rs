use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("multiplicity outside the admissible domain: {0}")]
    Domain(String),
    #[error("gamma pole at {0}")]
    PoleAt(i64),
    #[error("c-function normalisation is singular for this multiplicity")]
    NotRegular,
    #[error("spectral parameter is not generic: <mu, mu - 2 lambda> vanishes at nu = {nu:?}")]
    NonGenericSpectral { nu: Vec<u32> },
    #[error("point too close to a wall (margin {margin:.3e}, minimum {min:.3e})")]
    WallTooClose { margin: f64, min: f64 },
    #[error("Weyl orbit of lambda is degenerate; use the ODE engine")]
    DegenerateOrbit,
    #[error("point lies on a wall")]
    SingularPoint,
    #[error("Frobenius recursion is resonant at order {0}")]
    ResonanceAtZero(usize),
    #[error("integrator step collapsed at t = {t:.6}")]
    StiffnessFailure { t: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("series did not reach the requested tolerance (height {height}, tail {tail:.3e})")]
    Truncation { height: usize, tail: f64 },
}

impl Error {
    /// Exit code used by the command line front end: 2 for domain problems, 3 for numerical ones.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invalid(_)
            | Error::Domain(_)
            | Error::NotRegular
            | Error::Unsupported(_)
            | Error::DegenerateOrbit
            | Error::NonGenericSpectral { .. }
            | Error::PoleAt(_) => 2,
            _ => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Invalid(_) => "invalid",
            Error::Domain(_) => "domain",
            Error::PoleAt(_) => "pole",
            Error::NotRegular => "not_regular",
            Error::NonGenericSpectral { .. } => "non_generic_spectral",
            Error::WallTooClose { .. } => "wall_too_close",
            Error::DegenerateOrbit => "degenerate_orbit",
            Error::SingularPoint => "singular_point",
            Error::ResonanceAtZero(_) => "resonance_at_zero",
            Error::StiffnessFailure { .. } => "stiffness_failure",
            Error::Unsupported(_) => "unsupported",
            Error::Truncation { .. } => "truncation",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
