use thiserror::Error;

/// Why a time integration stopped early.
#[derive(Debug, Clone, PartialEq)]
pub enum AbortReason {
    /// A NaN or infinite value appeared in the state.
    NonFinite,
    /// The embedding constraint drifted beyond the allowed bound.
    ConstraintDrift(f64),
    /// `N_4` exceeded twice its initial value.
    TimeCut { n4: f64, n4_initial: f64 },
}

impl std::fmt::Display for AbortReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AbortReason::NonFinite => write!(f, "non-finite value in state"),
            AbortReason::ConstraintDrift(d) => write!(f, "constraint drift {d:.3e} exceeds 1e-8"),
            AbortReason::TimeCut { n4, n4_initial } => {
                write!(f, "time-cut reached: N_4 = {n4:.6e} > 2 * {n4_initial:.6e}")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum FlowError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated at node {node}: {reason}")]
    PreconditionViolation { node: usize, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical abort at step {step} (t = {t:.6e}): {reason}")]
    NumericalAbort { step: usize, t: f64, reason: AbortReason },

    #[error("run with epsilon = {epsilon} failed: {source}")]
    SweepRun {
        epsilon: f64,
        #[source]
        source: Box<FlowError>,
    },

    #[error("checkpoint format error: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, FlowError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(FlowError::InvalidArgument(msg.into()))
}
