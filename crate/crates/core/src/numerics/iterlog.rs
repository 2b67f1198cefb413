use rug::Integer;

use super::interval::Interval;
use crate::error::{bail, Result};

/// A positive integer given directly or as a base-2 exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Magnitude {
    Value(Integer),
    /// `2^n`.
    Pow2(Integer),
}

impl Magnitude {
    pub fn pow2(n: u64) -> Self {
        Magnitude::Pow2(Integer::from(n))
    }
}

/// `T(0) = 1, T(r) = 2^T(r-1)`; `log*(x) ≤ r` iff `x ≤ T(r)`.
fn tower_le(x: &Integer, r: u32) -> bool {
    let mut t = Integer::from(1);
    for _ in 0..r {
        // T(5) already has 65537 bits; anything a caller can hold is below T(6).
        match t.to_u32() {
            Some(e) if e <= 1 << 17 => t = Integer::from(1) << e,
            _ => return true,
        }
    }
    *x <= t
}

fn log_star_int(x: &Integer) -> u32 {
    (0..).find(|&r| tower_le(x, r)).unwrap()
}

/// Number of binary logarithms needed to bring the value to at most 1.
pub fn log_star(m: &Magnitude) -> Result<u32> {
    match m {
        Magnitude::Value(n) => {
            if *n < 1 {
                bail!(Domain, "log* of {n}: input must be at least 1");
            }
            Ok(log_star_int(n))
        }
        Magnitude::Pow2(e) => {
            if *e < 0 {
                bail!(Domain, "negative exponent {e}");
            }
            // 2^e ≤ T(r) iff e ≤ T(r-1) for r ≥ 1.
            Ok(if *e == 0 { 0 } else { 1 + log_star_int(e) })
        }
    }
}

/// `s`-fold binary logarithm, enclosed at `prec` bits.
pub fn iterated_log_enclosure(m: &Magnitude, s: u32, prec: u32) -> Result<Interval> {
    let (mut v, mut left) = match m {
        Magnitude::Value(n) => {
            if *n < 1 {
                bail!(Domain, "iterated log of nonpositive {n}");
            }
            (Interval::from_integer(prec, n), s)
        }
        Magnitude::Pow2(e) if s == 0 => {
            let Some(e) = e.to_i64() else { bail!(Domain, "2^{e} is not representable") };
            (Interval::pow2(prec, e), 0)
        }
        Magnitude::Pow2(e) => (Interval::from_integer(prec, e), s - 1),
    };
    while left > 0 {
        if *v.lo() <= 0 {
            if *v.hi() <= 0 || v.is_point() {
                bail!(Domain, "iterated logarithm reached a nonpositive value");
            }
            bail!(Domain, "iterated logarithm is not certifiably positive");
        }
        v = v.log2();
        left -= 1;
    }
    Ok(v)
}

pub fn iterated_log(m: &Magnitude, s: u32) -> Result<f64> {
    Ok(iterated_log_enclosure(m, s, 128)?.midpoint_f64())
}

/// `⌈log2 x⌉` for a positive integer.
pub fn ceil_log2(x: &Integer) -> u32 {
    assert!(*x > 0, "ceil_log2 of nonpositive value");
    Integer::from(x - 1u32).significant_bits()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_star_examples() {
        assert_eq!(log_star(&Magnitude::Value(Integer::from(1))).unwrap(), 0);
        assert_eq!(log_star(&Magnitude::Value(Integer::from(2))).unwrap(), 1);
        assert_eq!(log_star(&Magnitude::Value(Integer::from(65536))).unwrap(), 4);
        assert_eq!(log_star(&Magnitude::Value(Integer::from(65537))).unwrap(), 5);
        assert_eq!(log_star(&Magnitude::pow2(1024)).unwrap(), 5);
        assert_eq!(log_star(&Magnitude::pow2(16)).unwrap(), 4);
        assert!(log_star(&Magnitude::Value(Integer::new())).is_err());
    }

    #[test]
    fn log_star_matches_float_unrolling() {
        for n in 1u64..5000 {
            let mut x = n as f64;
            let mut r = 0;
            while x > 1.0 {
                x = x.log2();
                r += 1;
            }
            assert_eq!(log_star(&Magnitude::Value(Integer::from(n))).unwrap(), r, "n = {n}");
        }
    }

    #[test]
    fn iterated_log_examples() {
        assert_eq!(iterated_log(&Magnitude::pow2(16), 2).unwrap(), 4.0);
        assert_eq!(iterated_log(&Magnitude::Value(Integer::from(12345)), 0).unwrap(), 12345.0);
        let v = iterated_log(&Magnitude::pow2(1024), 3).unwrap();
        assert!((v - 10f64.log2()).abs() < 1e-14);
        assert!(iterated_log(&Magnitude::Value(Integer::from(1)), 2).is_err());
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(&Integer::from(1)), 0);
        assert_eq!(ceil_log2(&Integer::from(2)), 1);
        assert_eq!(ceil_log2(&Integer::from(3)), 2);
        assert_eq!(ceil_log2(&Integer::from(1024 * 1024 * 64)), 26);
    }
}
