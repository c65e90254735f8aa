use thiserror::Error;

/// Errors produced by geometry validation, simulators and test construction.
#[derive(Debug, Error)]
pub enum Error {
    /// A window or directed-set parameter violates its invariants.
    #[error("invalid geometry: {0}")]
    Geometry(String),

    /// A numeric argument lies outside the domain of the operation.
    #[error("parameter out of domain: {0}")]
    Domain(String),

    /// A model or test configuration is inconsistent.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A simulator could not produce a realization (e.g. infeasible packing).
    #[error("simulation failed: {0}")]
    Simulation(String),

    /// The input pattern has too few points for the requested operation.
    #[error("pattern has {got} points but at least {needed} are required")]
    TooFewPoints { needed: usize, got: usize },

    /// Pairwise rotation on a Fry pattern whose pair links are gone.
    #[error("pair links are not available; pairwise rotation needs a symmetric Fry pattern")]
    BrokenPairLinks,

    /// Curves passed to a joint ordering do not share the same radius grid.
    #[error("curve statistics are sampled on different radius grids")]
    GridMismatch,

    /// A curve has too few usable grid points to be scored.
    #[error("curve has fewer than two usable grid points")]
    DegenerateCurve,

    /// Underlying I/O failure.
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    /// A data file row that does not parse.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A data file that parses but violates its contract.
    #[error("invalid data: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;
