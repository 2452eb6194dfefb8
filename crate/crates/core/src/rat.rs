//! Exact rational arithmetic with a machine-word fast path.
//!
//! `Rat` keeps numerator and denominator in `i64` (always reduced, denominator
//! strictly positive) and promotes to a boxed [`BigRational`] only when an
//! operation overflows the word size. Simplex pivoting spends nearly all of
//! its time in the small path; the big path exists for correctness, not speed.
//!
//! Values always display as `p/q`, including integers (`1` prints as `1/1`);
//! parsing additionally accepts plain integers and decimal literals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero as _};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

#[derive(Clone)]
pub enum Rat {
    /// Numerator, denominator: `den > 0`, `gcd(|num|, den) == 1`, zero is `(0, 1)`.
    /// `i64::MIN` never appears, so negation stays in-word.
    Small(i64, i64),
    /// Reduced value that does not fit the small representation.
    Big(Box<BigRational>),
}

#[inline]
fn gcd_i64(a: i64, b: i64) -> i64 {
    a.unsigned_abs().gcd(&b.unsigned_abs()) as i64
}

#[inline]
fn gcd_i128(a: i128, b: i128) -> i128 {
    a.unsigned_abs().gcd(&b.unsigned_abs()) as i128
}

/// Fits `Small` iff both parts are strictly inside the `i64` range
/// (excluding `i64::MIN` keeps negation total).
#[inline]
fn fits(v: i128) -> bool {
    v > i64::MIN as i128 && v <= i64::MAX as i128
}

/// Integer square root of a nonnegative `i64` when exact. The float seed can
/// be off by one near the top of the range, so neighbors are checked.
fn isqrt_checked(n: i64) -> Option<i64> {
    debug_assert!(n >= 0);
    let seed = (n as f64).sqrt() as i64;
    for r in seed.saturating_sub(1)..=seed + 1 {
        if r >= 0 && r.checked_mul(r) == Some(n) {
            return Some(r);
        }
    }
    None
}

impl Rat {
    pub const ZERO: Rat = Rat::Small(0, 1);
    pub const ONE: Rat = Rat::Small(1, 1);

    /// Build from a signed fraction; reduces and normalizes the sign.
    /// Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Rat {
        Rat::from_i128(num as i128, den as i128)
    }

    pub fn from_int(n: i64) -> Rat {
        if n == i64::MIN {
            Rat::from_i128(n as i128, 1)
        } else {
            Rat::Small(n, 1)
        }
    }

    /// Reduce an `i128` fraction and pick the narrowest representation.
    pub fn from_i128(mut num: i128, mut den: i128) -> Rat {
        assert!(den != 0, "rational with zero denominator");
        if den < 0 {
            num = -num;
            den = -den;
        }
        if num == 0 {
            return Rat::ZERO;
        }
        let g = gcd_i128(num, den);
        num /= g;
        den /= g;
        if fits(num) && fits(den) {
            Rat::Small(num as i64, den as i64)
        } else {
            Rat::Big(Box::new(BigRational::new_raw(
                BigInt::from(num),
                BigInt::from(den),
            )))
        }
    }

    fn from_big(b: BigRational) -> Rat {
        if let (Some(n), Some(d)) = (b.numer().to_i64(), b.denom().to_i64()) {
            if n != i64::MIN {
                return Rat::Small(n, d); // BigRational keeps itself reduced, den > 0
            }
        }
        Rat::Big(Box::new(b))
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rat::Big(b) => (**b).clone(),
        }
    }

    /// Exact value of a finite `f64` (every finite double is a dyadic rational).
    /// Returns `None` for NaN or infinities.
    pub fn from_f64(x: f64) -> Option<Rat> {
        BigRational::from_float(x).map(Rat::from_big)
    }

    /// Nearest rational with denominator `10^digits`. Panics if the scaled
    /// value leaves the `i64` range or `x` is not finite.
    pub fn from_decimal(x: f64, digits: u32) -> Rat {
        assert!(x.is_finite(), "cannot round a non-finite value");
        let scale = 10f64.powi(digits as i32);
        let scaled = (x * scale).round();
        assert!(
            scaled.abs() < i64::MAX as f64,
            "decimal rounding out of range"
        );
        Rat::from_i128(scaled as i128, 10i128.pow(digits))
    }

    /// `2^k` for any signed `k`.
    pub fn pow2(k: i32) -> Rat {
        if k >= 0 {
            if k < 63 {
                Rat::Small(1i64 << k, 1)
            } else {
                Rat::from_big(BigRational::from_integer(BigInt::from(1u8) << k as usize))
            }
        } else {
            let k = -k;
            if k < 63 {
                Rat::Small(1, 1i64 << k)
            } else {
                Rat::from_big(BigRational::new_raw(
                    BigInt::from(1u8),
                    BigInt::from(1u8) << k as usize,
                ))
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rat::Small(0, _))
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Rat::Small(n, _) => *n > 0,
            Rat::Big(b) => b.is_positive(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rat::Small(n, _) => *n < 0,
            Rat::Big(b) => b.is_negative(),
        }
    }

    pub fn abs(&self) -> Rat {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn recip(&self) -> Rat {
        match self {
            Rat::Small(n, d) => {
                assert!(*n != 0, "reciprocal of zero");
                if *n < 0 {
                    Rat::Small(-d, -n)
                } else {
                    Rat::Small(*d, *n)
                }
            }
            Rat::Big(b) => {
                assert!(!b.is_zero(), "reciprocal of zero");
                Rat::from_big(b.recip())
            }
        }
    }

    /// Exact square root when the value is a perfect square of a rational.
    pub fn sqrt_exact(&self) -> Option<Rat> {
        if self.is_negative() {
            return None;
        }
        match self {
            Rat::Small(n, d) => {
                let rn = isqrt_checked(*n)?;
                let rd = isqrt_checked(*d)?;
                Some(Rat::Small(rn, rd))
            }
            Rat::Big(b) => {
                let rn = b.numer().sqrt();
                let rd = b.denom().sqrt();
                if &(&rn * &rn) == b.numer() && &(&rd * &rd) == b.denom() {
                    Some(Rat::from_big(BigRational::new(rn, rd)))
                } else {
                    None
                }
            }
        }
    }

    /// The value as an `i64` when it is an integer of that size.
    pub fn to_integer(&self) -> Option<i64> {
        match self {
            Rat::Small(n, d) => (*d == 1).then_some(*n),
            Rat::Big(b) => {
                if b.is_integer() {
                    b.numer().to_i64()
                } else {
                    None
                }
            }
        }
    }

    /// Round-to-nearest `f64`; loses precision only past the 53rd bit.
    pub fn approx(&self) -> f64 {
        match self {
            Rat::Small(n, d) => *n as f64 / *d as f64,
            Rat::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    #[inline]
    fn add_impl(&self, rhs: &Rat, negate_rhs: bool) -> Rat {
        match (self, rhs) {
            (Rat::Small(a, b), Rat::Small(c0, d)) => {
                let (a, b, d) = (*a as i128, *b as i128, *d as i128);
                let c = if negate_rhs { -(*c0 as i128) } else { *c0 as i128 };
                // Knuth's trick: with g0 = gcd(b, d), the partial sum over the
                // reduced denominators shares factors with g0 only.
                let g0 = gcd_i128(b, d);
                if g0 == 1 {
                    let num = a * d + c * b;
                    if num == 0 {
                        return Rat::ZERO;
                    }
                    let den = b * d;
                    if fits(num) && fits(den) {
                        return Rat::Small(num as i64, den as i64);
                    }
                    return Rat::from_i128(num, den);
                }
                let d1 = d / g0;
                let b1 = b / g0;
                let t = a * d1 + c * b1;
                if t == 0 {
                    return Rat::ZERO;
                }
                let g1 = gcd_i128(t, g0);
                let num = t / g1;
                let den = b1 * (d / g1);
                if fits(num) && fits(den) {
                    Rat::Small(num as i64, den as i64)
                } else {
                    Rat::from_i128(num, den)
                }
            }
            _ => {
                let r = if negate_rhs {
                    self.to_big() - rhs.to_big()
                } else {
                    self.to_big() + rhs.to_big()
                };
                Rat::from_big(r)
            }
        }
    }

    #[inline]
    fn mul_impl(&self, rhs: &Rat) -> Rat {
        match (self, rhs) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                if *a == 0 || *c == 0 {
                    return Rat::ZERO;
                }
                // Cross-reduce first so the products stay small.
                let g1 = gcd_i64(*a, *d);
                let g2 = gcd_i64(*b, *c);
                let num = (*a / g1) as i128 * (*c / g2) as i128;
                let den = (*b / g2) as i128 * (*d / g1) as i128;
                if fits(num) && fits(den) {
                    Rat::Small(num as i64, den as i64)
                } else {
                    Rat::from_i128(num, den)
                }
            }
            _ => Rat::from_big(self.to_big() * rhs.to_big()),
        }
    }

    fn div_impl(&self, rhs: &Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero rational");
        self.mul_impl(&rhs.recip())
    }

    fn cmp_impl(&self, rhs: &Rat) -> Ordering {
        match (self, rhs) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&rhs.to_big()),
        }
    }
}

impl Default for Rat {
    fn default() -> Self {
        Rat::ZERO
    }
}

impl PartialEq for Rat {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Rat::Small(a, b), Rat::Small(c, d)) => a == c && b == d, // canonical forms
            (Rat::Big(a), Rat::Big(b)) => a == b,
            _ => false, // a Big never fits Small by construction
        }
    }
}
impl Eq for Rat {}

impl Hash for Rat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Rat::Small(n, d) => {
                n.hash(state);
                d.hash(state);
            }
            Rat::Big(b) => b.hash(state),
        }
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_impl(other)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small(n, d) => write!(f, "{}/{}", n, d),
            Rat::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = String;

    /// Accepts `p/q`, integer, and decimal literals, with optional sign.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = |_| format!("invalid rational literal `{s}`");
        if let Some((num, den)) = s.split_once('/') {
            let n: i128 = num.trim().parse().map_err(bad)?;
            let d: i128 = den.trim().parse().map_err(bad)?;
            if d == 0 {
                return Err(format!("zero denominator in `{s}`"));
            }
            return Ok(Rat::from_i128(n, d));
        }
        if let Some((int, frac)) = s.split_once('.') {
            let neg = int.trim_start().starts_with('-');
            let i: i128 = if int.is_empty() || int == "-" {
                0
            } else {
                int.parse().map_err(bad)?
            };
            if frac.len() > 27 || !frac.chars().all(|c| c.is_ascii_digit()) {
                return Err(format!("invalid rational literal `{s}`"));
            }
            let f: i128 = if frac.is_empty() {
                0
            } else {
                frac.parse().map_err(bad)?
            };
            let scale = 10i128.pow(frac.len() as u32);
            let mag = i.unsigned_abs() as i128 * scale + f;
            return Ok(Rat::from_i128(if neg { -mag } else { mag }, scale));
        }
        let n: i128 = s.parse().map_err(bad)?;
        Ok(Rat::from_i128(n, 1))
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $impl:ident $(, $negate:expr)?) => {
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            #[inline]
            fn $method(self, rhs: &Rat) -> Rat {
                self.$impl(rhs $(, $negate)?)
            }
        }
        impl $trait<Rat> for Rat {
            type Output = Rat;
            #[inline]
            fn $method(self, rhs: Rat) -> Rat {
                (&self).$impl(&rhs $(, $negate)?)
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            #[inline]
            fn $method(self, rhs: &Rat) -> Rat {
                (&self).$impl(rhs $(, $negate)?)
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            #[inline]
            fn $method(self, rhs: Rat) -> Rat {
                self.$impl(&rhs $(, $negate)?)
            }
        }
    };
}

binop!(Add, add, add_impl, false);
binop!(Sub, sub, add_impl, true);
binop!(Mul, mul, mul_impl);
binop!(Div, div, div_impl);

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match self {
            Rat::Small(n, d) => Rat::Small(-n, *d), // i64::MIN excluded by invariant
            Rat::Big(b) => Rat::from_big(-(**b).clone()),
        }
    }
}
impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        -&self
    }
}

impl AddAssign<&Rat> for Rat {
    #[inline]
    fn add_assign(&mut self, rhs: &Rat) {
        *self = (&*self).add_impl(rhs, false);
    }
}
impl SubAssign<&Rat> for Rat {
    #[inline]
    fn sub_assign(&mut self, rhs: &Rat) {
        *self = (&*self).add_impl(rhs, true);
    }
}
impl MulAssign<&Rat> for Rat {
    #[inline]
    fn mul_assign(&mut self, rhs: &Rat) {
        *self = (&*self).mul_impl(rhs);
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        let mut acc = Rat::ZERO;
        for v in iter {
            acc += &v;
        }
        acc
    }
}
impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        let mut acc = Rat::ZERO;
        for v in iter {
            acc += v;
        }
        acc
    }
}

/// Shorthand used pervasively in tests and constructions.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num, den)
}
