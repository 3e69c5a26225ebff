use thiserror::Error;

/// Failure modes of the solver, from low-level quadrature up to full pipeline runs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),

    #[error("non-finite sample at x = {x}: {context}")]
    NonFiniteSample { x: f64, context: String },

    #[error("quadrature integrand not finite at theta = {theta}")]
    QuadratureSample { theta: f64 },

    #[error("spline fit failed: {0}")]
    SplineFit(String),

    #[error("root scan hit a non-finite value at x = {x}")]
    RootScan { x: f64 },

    #[error("ODE solve failed near x = {x}: {context}")]
    OdeFailure { x: f64, context: String },

    #[error("value out of range at x = {x}: {context}")]
    Range { x: f64, context: String },

    #[error("series pole at z = -1")]
    PoleAtMinusOne,

    #[error("zero of the Wronskian at z = {z} looks degenerate: |phi'| = {phi_prime:.3e}")]
    DegenerateEigenvalue { z: f64, phi_prime: f64 },

    #[error("norming-constant consistency failure: {0}")]
    NormingConsistency(String),

    #[error("assembled kernel entry at x = {x} has imaginary residue {im:.3e}")]
    AssemblyResidue { x: f64, im: f64 },

    #[error("linear system at x = {x} is ill-conditioned (cond = {cond:.3e})")]
    IllConditioned { x: f64, cond: f64 },

    #[error("recovery denominator vanishes near x = {x} (|1 + coefficient| = {magnitude:.3e})")]
    RecoverySingularity { x: f64, magnitude: f64 },

    #[error("evolution factor exp({exponent:.2}) would overflow; reduce the time step")]
    EvolutionOverflow { exponent: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("malformed data file: {0}")]
    FileFormat(String),

    #[error("{stage} stage failed{}: {source}", time.map(|t| format!(" at t = {t}")).unwrap_or_default())]
    Stage {
        stage: &'static str,
        time: Option<f64>,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn in_stage(self, stage: &'static str, time: Option<f64>) -> Self {
        Error::Stage {
            stage,
            time,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
