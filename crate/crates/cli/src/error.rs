use lqs_core::Error as CoreError;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const INPUT: i32 = 3;
    pub const EXACTNESS: i32 = 4;
    pub const ASSUMPTION: i32 = 5;
    pub const PRECONDITION: i32 = 6;
    pub const NUMERICAL: i32 = 7;
    pub const NETWORK: i32 = 8;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("exact mode unavailable: {0}")]
    Exactness(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Input(_) | CliError::Io(_) => exit::INPUT,
            CliError::Exactness(_) => exit::EXACTNESS,
            CliError::Core(e) => core_exit_code(e),
        }
    }
}

pub fn core_exit_code(e: &CoreError) -> i32 {
    match e {
        CoreError::NonFinite { .. } | CoreError::Parameter(_) => exit::INPUT,
        CoreError::ExactnessUnavailable => exit::EXACTNESS,
        CoreError::AssumptionViolated { .. } => exit::ASSUMPTION,
        CoreError::Dimension(_)
        | CoreError::PoleEvaluation { .. }
        | CoreError::NotRealizable { .. }
        | CoreError::NoNullSpace { .. }
        | CoreError::AtPole { .. }
        | CoreError::NormalRankDeficient { .. } => exit::PRECONDITION,
        CoreError::NoConvergence { .. } | CoreError::SubspaceInstability { .. } => exit::NUMERICAL,
        CoreError::DegenerateNetwork(_) | CoreError::SynthesisSingular(_) => exit::NETWORK,
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub const EXIT_CODE_HELP: &str = "\
Exit codes:
  0  success
  1  a check or verification failed
  2  usage error
  3  unreadable or invalid input file
  4  exact arithmetic requested but the input is not exact
  5  refused: the hidden-mode assumption does not hold
  6  precondition failed (not realizable, evaluation at a pole, rank or dimension problem)
  7  numerical failure (no convergence, unstable subspace dimension)
  8  degenerate or unphysical feedback network";
