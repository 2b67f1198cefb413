//! Exact comparisons against `c·√R` by squaring with sign care.

use std::cmp::Ordering;

use rug::{Integer, Rational};

/// Compares `lhs` with `coeff·√radicand` exactly (`radicand ≥ 0`).
pub fn cmp_surd(lhs: &Rational, coeff: &Rational, radicand: &Rational) -> Ordering {
    assert!(*radicand >= 0, "negative radicand");
    let rhs_sign = if *radicand == 0 { Ordering::Equal } else { coeff.cmp0() };
    let lhs_sign = lhs.cmp0();
    if lhs_sign != rhs_sign {
        return lhs_sign.cmp(&rhs_sign);
    }
    if lhs_sign == Ordering::Equal {
        return Ordering::Equal;
    }
    let l2 = Rational::from(lhs.square_ref());
    let r2 = Rational::from(coeff.square_ref()) * radicand;
    let mag = l2.cmp(&r2);
    if lhs_sign == Ordering::Less {
        mag.reverse()
    } else {
        mag
    }
}

pub fn le_surd(lhs: &Rational, coeff: &Rational, radicand: &Rational) -> bool {
    cmp_surd(lhs, coeff, radicand) != Ordering::Greater
}

pub fn ge_surd(lhs: &Rational, coeff: &Rational, radicand: &Rational) -> bool {
    cmp_surd(lhs, coeff, radicand) != Ordering::Less
}

/// `⌊√x⌋` for `x ≥ 0`.
pub fn floor_sqrt(x: &Rational) -> Integer {
    let floor = Integer::from(x.numer() / x.denom());
    floor.sqrt()
}

/// `⌈coeff·√radicand − 1/2⌉` for nonnegative operands.
pub fn ceil_surd_minus_half(coeff: &Rational, radicand: &Rational) -> Integer {
    assert!(*coeff >= 0 && *radicand >= 0);
    let y2 = Rational::from(coeff.square_ref()) * radicand;
    let j = floor_sqrt(&y2);
    let half_up = Rational::from(&j) + Rational::from((1, 2));
    if Rational::from(half_up.square_ref()) >= y2 {
        j
    } else {
        j + 1u32
    }
}

/// `⌈coeff·√radicand⌉` for nonnegative operands.
pub fn ceil_surd(coeff: &Rational, radicand: &Rational) -> Integer {
    let y2 = Rational::from(coeff.square_ref()) * radicand;
    let j = floor_sqrt(&y2);
    if Integer::from(j.square_ref()) == y2 {
        j
    } else {
        j + 1u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn sign_cases() {
        assert_eq!(cmp_surd(&q(-1, 1), &q(1, 1), &q(2, 1)), Ordering::Less);
        assert_eq!(cmp_surd(&q(1, 1), &q(-1, 1), &q(2, 1)), Ordering::Greater);
        assert_eq!(cmp_surd(&q(-2, 1), &q(-1, 1), &q(2, 1)), Ordering::Less);
        assert_eq!(cmp_surd(&q(0, 1), &q(5, 1), &q(0, 1)), Ordering::Equal);
        assert_eq!(cmp_surd(&q(3, 1), &q(1, 1), &q(9, 1)), Ordering::Equal);
    }

    #[test]
    fn c1_bound_at_twenty_bits() {
        // ⌈2^10·(5/4)/(2·2) − 1/2⌉ = ⌈320 − 1/2⌉ = 320
        let v = ceil_surd_minus_half(&q(5, 8), &q(1 << 18, 1));
        assert_eq!(v, 320);
    }

    proptest! {
        #[test]
        fn agrees_with_floats_away_from_ties(l in -1000i64..1000, c in -100i64..100, r in 0i64..1000) {
            let rhs = (c as f64) * (r as f64).sqrt();
            prop_assume!((rhs - l as f64).abs() > 1e-6);
            let expect = (l as f64).partial_cmp(&rhs).unwrap();
            prop_assert_eq!(cmp_surd(&q(l, 1), &q(c, 1), &q(r, 1)), expect);
        }

        #[test]
        fn ceil_minus_half_matches_float(c in 0i64..1000, r in 0i64..100000) {
            let y = (c as f64 / 7.0) * (r as f64).sqrt() - 0.5;
            prop_assume!((y - y.round()).abs() > 1e-6);
            prop_assert_eq!(ceil_surd_minus_half(&q(c, 7), &q(r, 1)).to_f64(), y.ceil().max(0.0));
        }
    }
}
