use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// First fundamental form is singular (`EG - F^2 <= 0`) at `(u, v)`.
    DegeneratePoint { u: f64, v: f64 },
    /// Patch is not in conformal curvature coordinates, or `H` is not constant.
    NotCurvatureCoordinate(String),
    /// Grid or stencil too small, or a tolerance out of range.
    Config(String),
    /// Graph extraction failed; `max_radius` is the largest radius that worked.
    ShrinkRadius { max_radius: f64 },
    /// The sphere case `H = -1`, which the contact results exclude.
    ExcludedCase(String),
    /// Gaussian curvature changes sign, or vanishes identically.
    NotApplicable(String),
    /// `|1 + ρκ|` at or below the singular threshold.
    Singular { factor: f64 },
    /// Every sample was singular.
    EmptySample,
    /// Curve samples do not lie on a sphere, boundary not planar, etc.
    Input(String),
    /// No solution inside the scanned bracket.
    Infeasible(String),
    /// Iteration did not converge.
    Solver(String),
    /// ODE step size underflow.
    Integrator { s: f64 },
    /// The moving plane at distance `L` still meets the cloud.
    InvalidSweepDistance { l: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegeneratePoint { u, v } => {
                write!(f, "degenerate metric at (u, v) = ({u}, {v})")
            }
            Error::NotCurvatureCoordinate(m) => {
                write!(f, "not a conformal curvature coordinate: {m}")
            }
            Error::Config(m) => write!(f, "configuration error: {m}"),
            Error::ShrinkRadius { max_radius } => {
                write!(
                    f,
                    "graph projection not injective; largest feasible radius {max_radius:e}"
                )
            }
            Error::ExcludedCase(m) => write!(f, "excluded case: {m}"),
            Error::NotApplicable(m) => write!(f, "not applicable: {m}"),
            Error::Singular { factor } => {
                write!(f, "singular offset point (1 + rho kappa = {factor:e})")
            }
            Error::EmptySample => f.write_str("every sample point is singular"),
            Error::Input(m) => write!(f, "invalid input: {m}"),
            Error::Infeasible(m) => write!(f, "infeasible configuration: {m}"),
            Error::Solver(m) => write!(f, "solver did not converge: {m}"),
            Error::Integrator { s } => write!(f, "integrator step size underflow at arclength {s}"),
            Error::InvalidSweepDistance { l } => {
                write!(f, "plane at distance {l} still meets the cloud")
            }
        }
    }
}

impl core::error::Error for Error {}
