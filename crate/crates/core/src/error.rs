//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong across instance handling, solving and gadget
/// construction.
#[derive(Debug, Error)]
pub enum Error {
    /// A structurally broken instance: ragged tables, out-of-range ids,
    /// non-positive weights, `k` out of range, and similar.
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    /// A parameter outside its documented range (epsilon, delta, gamma, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Cost evaluation was asked for an empty facility set.
    #[error("cost is undefined for an empty facility set")]
    EmptyFacilitySet,

    /// The metric has no positive distance (or a single point) where a
    /// positive spread is required.
    #[error("degenerate metric: {0}")]
    DegenerateMetric(String),

    /// The number of guesses the solver would enumerate exceeds the budget.
    #[error("guess budget exceeded: enumeration needs {needed} guesses, budget is {budget}")]
    GuessBudgetExceeded { needed: u128, budget: u128 },

    /// An exhaustive oracle (brute force, label-cover optimum, explicit set
    /// system) would exceed its enumeration guard.
    #[error("oracle budget exceeded: {0}")]
    OracleBudgetExceeded(String),

    /// Exhaustive verification was requested for an instance above the size
    /// limits of the exhaustive checks.
    #[error("instance too large for exhaustive verification: {0}")]
    VerifyTooLarge(String),

    /// The baseline that opens centers at client locations was given an
    /// instance whose clients are not all facilities.
    #[error("non-bipartite baseline requires every client to be a facility; client {client} is not")]
    BipartiteInstance { client: usize },

    /// The matroid admits no independent set meeting the requested rank.
    #[error("matroid constraint infeasible: {0}")]
    InfeasibleMatroid(String),

    /// Malformed JSON or a JSON document not matching the expected schema.
    #[error("malformed input: {0}")]
    Malformed(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Malformed(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
