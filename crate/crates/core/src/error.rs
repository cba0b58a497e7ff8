use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown voter id `{0}`")]
    UnknownVoter(String),

    #[error("duplicate voter id `{0}`")]
    DuplicateVoter(String),

    #[error("voter `{id}` is listed in both bloc `{first}` and bloc `{second}`")]
    OverlappingBlocs {
        id: String,
        first: String,
        second: String,
    },

    #[error("line {line}, column {column}: {reason}")]
    Parse {
        line: usize,
        column: usize,
        reason: String,
    },

    #[error("line {line}: {reason}")]
    Validation { line: usize, reason: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error(
        "swing table of {players} x {excess_seats} x {pop_cells} cells needs {bytes} bytes, \
         over the memory budget of {budget} bytes"
    )]
    Resource {
        players: usize,
        excess_seats: usize,
        pop_cells: usize,
        bytes: u128,
        budget: usize,
    },

    #[error("refusing to enumerate 2^{n} coalitions (limit is n <= {limit})")]
    OracleLimit { n: usize, limit: usize },

    #[error("no voter is critical in any coalition; indices cannot be normalised")]
    Normalization,
}

impl Error {
    /// Resource and enumeration-guard errors are distinguished from plain input errors.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. } | Error::OracleLimit { .. })
    }

    pub(crate) fn parse(line: usize, column: usize, reason: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            reason: reason.into(),
        }
    }
}
