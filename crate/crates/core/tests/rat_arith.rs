//! Arithmetic on `Rat` cross-checked against `BigRational`, which serves as
//! the independent reference implementation, plus parsing/printing contracts.

use gaplab_core::rat::{rat, Rat};
use gaplab_core::xreal::XReal;
use gaplab_core::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use std::str::FromStr;

fn big(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn as_big(r: &Rat) -> BigRational {
    // Round-trip through the canonical display form.
    let s = r.to_string();
    let (n, d) = s.split_once('/').unwrap();
    BigRational::new(n.parse().unwrap(), d.parse().unwrap())
}

proptest! {
    #[test]
    fn matches_reference_arithmetic(a in -2000i64..2000, b in 1i64..2000, c in -2000i64..2000, d in 1i64..2000) {
        let x = rat(a, b);
        let y = rat(c, d);
        let (bx, by) = (big(a, b), big(c, d));
        prop_assert_eq!(as_big(&(&x + &y)), &bx + &by);
        prop_assert_eq!(as_big(&(&x - &y)), &bx - &by);
        prop_assert_eq!(as_big(&(&x * &y)), &bx * &by);
        if c != 0 {
            prop_assert_eq!(as_big(&(&x / &y)), &bx / &by);
        }
        prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
    }

    #[test]
    fn overflow_promotes_and_stays_exact(a in i64::MAX/4..i64::MAX/2, b in 3i64..1000) {
        // Large operands force the boxed path; results must still match.
        let x = rat(a, b);
        let prod = &x * &x;
        prop_assert_eq!(as_big(&prod), big(a, b) * big(a, b));
        let sum = &x + &x;
        prop_assert_eq!(as_big(&sum), big(a, b) * big(2, 1));
    }

    #[test]
    fn display_parse_roundtrip(a in -100000i64..100000, b in 1i64..100000) {
        let x = rat(a, b);
        let back = Rat::from_str(&x.to_string()).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn f64_embedding_is_exact(a in -1_000_000i64..1_000_000, k in 0u32..40) {
        // Every finite double is a dyadic rational; the embedding must be exact.
        let x = a as f64 / (1u64 << k) as f64;
        let r = Rat::from_f64(x).unwrap();
        prop_assert_eq!(r.approx(), x);
    }
}

#[test]
fn parses_all_literal_forms() {
    assert_eq!(Rat::from_str("3").unwrap(), rat(3, 1));
    assert_eq!(Rat::from_str("-3/4").unwrap(), rat(-3, 4));
    assert_eq!(Rat::from_str("0.25").unwrap(), rat(1, 4));
    assert_eq!(Rat::from_str("-1.5").unwrap(), rat(-3, 2));
    assert_eq!(Rat::from_str(" 7/2 ").unwrap(), rat(7, 2));
    assert!(Rat::from_str("1/0").is_err());
    assert!(Rat::from_str("abc").is_err());
}

#[test]
fn displays_integers_with_denominator() {
    assert_eq!(rat(1, 1).to_string(), "1/1");
    assert_eq!(rat(-6, 3).to_string(), "-2/1");
    assert_eq!(Rat::ZERO.to_string(), "0/1");
}

#[test]
fn decimal_rounding_has_power_of_ten_denominator() {
    let r = Rat::from_decimal(2f64.powf(0.25), 12);
    // |r - 2^(1/4)| <= 5e-13 by construction.
    assert!((r.approx() - 2f64.powf(0.25)).abs() <= 5e-13);
    assert_eq!(&r * &Rat::from_i128(10i128.pow(12), 1), {
        let scaled = (2f64.powf(0.25) * 1e12).round() as i64;
        Rat::from_int(scaled)
    });
}

#[test]
fn extended_order_and_indeterminate_sum() {
    let fin = XReal::Finite(rat(5, 2));
    assert!(XReal::NegInf < fin && fin < XReal::PosInf);
    assert_eq!(
        XReal::PosInf.checked_add(&XReal::NegInf),
        Err(Error::IndeterminateSum)
    );
    assert_eq!(
        XReal::PosInf.checked_add(&fin).unwrap(),
        XReal::PosInf
    );
    assert_eq!(
        fin.checked_add(&XReal::Finite(rat(-1, 2))).unwrap(),
        XReal::Finite(rat(2, 1))
    );
    assert_eq!(XReal::PosInf.scale_pos(&rat(1, 2)), XReal::PosInf);
    assert_eq!(fin.scale_pos(&rat(2, 1)), XReal::Finite(rat(5, 1)));
}

#[test]
fn exact_square_roots_when_they_exist() {
    assert_eq!(rat(9, 4).sqrt_exact(), Some(rat(3, 2)));
    assert_eq!(rat(1, 100).sqrt_exact(), Some(rat(1, 10)));
    assert_eq!(Rat::ZERO.sqrt_exact(), Some(Rat::ZERO));
    assert_eq!(rat(2, 1).sqrt_exact(), None);
    assert_eq!(rat(-4, 1).sqrt_exact(), None);
    // Through the big-integer representation and back down.
    let big = Rat::from_int(1_000_000_007);
    let sq = &big * &big;
    assert_eq!(sq.sqrt_exact(), Some(big));
    let huge = Rat::from_i128(i64::MAX as i128 + 1, 1);
    assert_eq!((&huge * &huge).sqrt_exact(), Some(huge));
}
