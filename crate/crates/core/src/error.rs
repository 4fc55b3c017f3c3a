use thiserror::Error;

/// Which exponential integral of the energy failed an admissibility check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integral {
    /// `∫_{S⁴₊} Q e^{4u}`
    Interior,
    /// `∮_{S³} T e^{3u}`
    Boundary,
}

impl std::fmt::Display for Integral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Integral::Interior => write!(f, "interior integral of Q e^(4u)"),
            Integral::Boundary => write!(f, "boundary integral of T e^(3u)"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("{what} = {value} is outside its domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("samples are not even under x5 -> -x5 (odd content {odd:.3e} > tolerance {tol:.1e})")]
    Parity { odd: f64, tol: f64 },

    #[error("structural error: {0}")]
    Structure(String),

    #[error("inadmissible field: {integral} is {value:.6e}, must be positive")]
    Admissibility { integral: Integral, value: f64 },

    #[error("covering construction failed: {0}")]
    Covering(String),

    #[error("solver did not converge: {0}")]
    NonConvergence(String),

    #[error("{0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
