//! Exact verification toolkit for duality gaps in conic linear programming.
//!
//! The crate bundles an exact rational finite-LP solver with certificate
//! re-verification ([`lp`]), generic property checkers for sublinear
//! functions given as evaluation oracles ([`oracle`]), and executable models
//! of classical counterexamples where strong duality or lower semicontinuity
//! of the value function fails:
//!
//! * [`seq`] — finitely supported sequences with a discontinuous linear
//!   functional; the three pathological sublinear functions built from it and
//!   their semicontinuity witness sequences.
//! * [`soc`] — a three-dimensional rotated-cone program whose value function
//!   has a closed form that is not lower semicontinuous on a ray.
//! * [`hilbert`] — a truncated sequence-space LP with unique primal feasible
//!   points whose dual becomes infeasible in the limit (norm blow-up bound).
//! * [`kretschmer`] — the continuum LP family on `[0,1]` with a positive
//!   duality gap, discretized from both sides so the gap appears as a
//!   non-vanishing bracket between two finite LP values.
//!
//! All load-bearing arithmetic is exact ([`Rat`]); floating point appears
//! only where a quantity is genuinely irrational (norms, square roots) and is
//! then compared with stated tolerances.

pub mod error;
pub mod hilbert;
pub mod kretschmer;
pub mod lp;
pub mod oracle;
pub mod rat;
pub mod seq;
pub mod soc;
pub mod xreal;

pub use error::Error;
pub use rat::{rat, Rat};
pub use xreal::XReal;
