//! Error vocabulary shared across the workspace.
//!
//! Variants carry stable kebab-case message heads; the CLI and the test
//! suites match on these strings, so they are part of the public contract.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// `(+inf) + (-inf)` — never silently absorbed.
    #[error("indeterminate-sum")]
    IndeterminateSum,
    /// The upper-semicontinuity witness needs a strictly negative functional value.
    #[error("requires-negative-phi")]
    RequiresNegativePhi,
    /// The lower-semicontinuity witness needs a nonpositive functional value.
    #[error("requires-nonpositive-phi")]
    RequiresNonpositivePhi,
    /// A point lies outside the effective domain of the function at hand.
    #[error("not-in-domain")]
    NotInDomain,
    /// A dyadic measure split needs `|A| * 2^-N` to be a positive integer.
    #[error("grid-too-coarse")]
    GridTooCoarse,
    /// A named scalar parameter violates its range constraint.
    #[error("out-of-range: {0}")]
    OutOfRange(&'static str),
    /// The local Lipschitz hypothesis of a transfer check failed; the payload
    /// describes the witnessing pair.
    #[error("hypothesis-failed: {0}")]
    HypothesisFailed(String),
    /// Structurally malformed LP data.
    #[error("dimension-mismatch: {0}")]
    DimensionMismatch(&'static str),
    /// A named operation precondition was violated.
    #[error("precondition: {0}")]
    Precondition(&'static str),
    /// An oracle evaluation failed; the offending point is attached.
    #[error("oracle-eval at {point}: {source}")]
    OracleEval {
        point: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wrap an oracle failure with the point (or index) it occurred at.
    pub fn at_point(self, point: impl Into<String>) -> Error {
        Error::OracleEval {
            point: point.into(),
            source: Box::new(self),
        }
    }
}
