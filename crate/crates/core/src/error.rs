use thiserror::Error;

/// Errors raised by model construction, propagation and statistics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("level indices ({lower}, {upper}) invalid for dimension {dim}")]
    LevelIndex { dim: usize, lower: usize, upper: usize },

    #[error("{what} is not Hermitian (max deviation {deviation:.3e})")]
    NonHermitian { what: &'static str, deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("time interval reversed: t1 = {t1} > t2 = {t2}")]
    ReversedTimes { t1: f64, t2: f64 },

    #[error("correlation times must be sorted ascending")]
    UnsortedTimes,

    #[error("port count mismatch: {left} vs {right}")]
    PortMismatch { left: usize, right: usize },

    #[error("port index {index} out of range for a {ports}-port triplet")]
    PortIndex { index: usize, ports: usize },

    #[error(
        "ill-posed feedback loop {out_port}->{in_port}: S[{out_port},{in_port}] = {s_re}+{s_im}i leaves 1 - S singular"
    )]
    SingularFeedback {
        out_port: usize,
        in_port: usize,
        s_re: f64,
        s_im: f64,
    },

    #[error(
        "wave packet needs more coupling than available: clipped fraction {fraction:.3e} exceeds budget {budget:.3e}; a maximum coupling of {minimal_gamma:.4} would suffice"
    )]
    ClipBudgetExceeded {
        fraction: f64,
        budget: f64,
        minimal_gamma: f64,
    },

    #[error("photon probability P_{n} = {value:.3e} is below the quadrature slack; refine the grid or raise the cutoff")]
    NegativeProbability { n: usize, value: f64 },

    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
