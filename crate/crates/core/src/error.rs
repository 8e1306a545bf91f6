use std::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or out-of-contract input (bad JSON values, invalid
    /// instance, alphabet/field mismatch, unparseable flags).
    Input(String),
    /// A configured resource limit was hit (size guard, edge cap,
    /// choice-assignment cap).
    Capacity(String),
    /// A codebook or hyperedge failed a structural requirement
    /// (assignment not total, empty fiber, id out of range).
    Structure(String),
    /// An operation was handed a fiber that does not decode.
    InvalidFiber {
        /// 1-based side-information set of the violated receiver.
        receiver: Vec<usize>,
        /// Side-information value selecting the violated slice.
        side_info: Vec<u32>,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Input(msg) => write!(f, "input error: {msg}"),
            Error::Capacity(msg) => write!(f, "capacity error: {msg}"),
            Error::Structure(msg) => write!(f, "structural error: {msg}"),
            Error::InvalidFiber { receiver, side_info } => write!(
                f,
                "invalid fiber: receiver {receiver:?} at side information {side_info:?} \
                 has no constant coordinate"
            ),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
