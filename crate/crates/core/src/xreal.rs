//! Extended reals: the codomain of value functions and convex oracles.
//!
//! The order is total with `-inf < finite < +inf`. Addition is total except
//! for `(+inf) + (-inf)`, which is a reported error — silent absorption would
//! mask oracle bugs.

use crate::error::Error;
use crate::rat::Rat;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum XReal {
    NegInf,
    Finite(Rat),
    PosInf,
}

impl XReal {
    pub fn zero() -> XReal {
        XReal::Finite(Rat::ZERO)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, XReal::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            XReal::Finite(r) => Some(r),
            _ => None,
        }
    }

    /// Total except `(+inf) + (-inf)`.
    pub fn checked_add(&self, rhs: &XReal) -> Result<XReal, Error> {
        use XReal::*;
        match (self, rhs) {
            (PosInf, NegInf) | (NegInf, PosInf) => Err(Error::IndeterminateSum),
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
            (Finite(a), Finite(b)) => Ok(Finite(a + b)),
        }
    }

    pub fn checked_sub(&self, rhs: &XReal) -> Result<XReal, Error> {
        self.checked_add(&rhs.clone().neg())
    }

    pub fn neg(self) -> XReal {
        match self {
            XReal::PosInf => XReal::NegInf,
            XReal::NegInf => XReal::PosInf,
            XReal::Finite(r) => XReal::Finite(-r),
        }
    }

    /// Multiplication by a strictly positive scalar keeps the tag.
    pub fn scale_pos(&self, t: &Rat) -> XReal {
        assert!(t.is_positive(), "scale_pos needs t > 0");
        match self {
            XReal::Finite(r) => XReal::Finite(r * t),
            other => other.clone(),
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            XReal::NegInf => f64::NEG_INFINITY,
            XReal::PosInf => f64::INFINITY,
            XReal::Finite(r) => r.approx(),
        }
    }
}

impl From<Rat> for XReal {
    fn from(r: Rat) -> Self {
        XReal::Finite(r)
    }
}

impl fmt::Display for XReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XReal::NegInf => write!(f, "-inf"),
            XReal::PosInf => write!(f, "inf"),
            XReal::Finite(r) => write!(f, "{}", r),
        }
    }
}
