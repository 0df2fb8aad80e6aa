use std::path::PathBuf;

use num_complex::Complex64;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid oscillator: {0}")]
    InvalidOscillator(String),

    #[error("singular medium: eps*mu = {0} has no refractive index")]
    SingularMedium(Complex64),

    #[error("coincident points: the unaveraged Green's tensor diverges at rho = 0")]
    Coincident,

    #[error("k = {k} sits on the pole k^2 = omega^2 eps mu")]
    SingularMode { k: f64 },

    #[error(
        "lossless medium with real positive omega^2 eps mu = {0}: pole on the integration contour"
    )]
    PoleOnContour(f64),

    #[error(
        "quadrature did not converge: estimate {estimate}, error {error_estimate:e} \
         after {intervals} intervals ({evaluations} evaluations)"
    )]
    Quadrature {
        estimate: Complex64,
        error_estimate: f64,
        intervals: usize,
        evaluations: usize,
    },

    #[error(
        "rotation by {0} rad is not a multiple of pi/2; magneto-electric response is not modelled"
    )]
    UnsupportedAngle(f64),

    #[error("noise sources of convention {convention} do not close the Green's identity (relative residual {residual:e})")]
    ConventionMismatch {
        convention: &'static str,
        residual: f64,
    },

    #[error("sample frequency {sample} does not match the dipole frequency {dipole}")]
    FrequencyMismatch { sample: f64, dipole: f64 },

    #[error("invalid sweep configuration: {0}")]
    Config(String),

    #[error("at omega = {omega}, R_sphere = {r_sphere_angstrom} A: {source}")]
    GridPoint {
        omega: f64,
        r_sphere_angstrom: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}
