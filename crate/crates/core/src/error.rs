use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NonHermitian(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("map is not completely positive (Choi eigenvalue {0:e})")]
    NotCompletelyPositive(f64),

    #[error("map increases trace (sum of K^dagger K exceeds identity by {0:e})")]
    TraceIncreasing(f64),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("expected a two-qubit operator (dimension 4), got dimension {0}")]
    BadDimension(usize),

    #[error(
        "concurrence and PPT verdicts disagree (pre-clamp concurrence {pre_clamp:e}, \
         min partial-transpose eigenvalue {min_pt_eigenvalue:e})"
    )]
    ToleranceConflict {
        pre_clamp: f64,
        min_pt_eigenvalue: f64,
    },

    #[error("no entanglement-breaking crossing found before x = {x_hi}")]
    NoBracket { x_hi: f64 },

    #[error("inconsistent optical element: {0}")]
    ElementInconsistent(String),

    #[error("postselection success probability {0:e} is too small to renormalize")]
    ZeroSuccessProbability(f64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    pub(crate) fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
        if value.is_finite() && value >= lo && value <= hi {
            Ok(())
        } else {
            Err(Error::OutOfRange { name, value, lo, hi })
        }
    }

    /// True for failures of the numerics rather than of the caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonHermitian(_)
                | Error::NotCompletelyPositive(_)
                | Error::ToleranceConflict { .. }
                | Error::NoBracket { .. }
                | Error::ZeroSuccessProbability(_)
        )
    }
}
