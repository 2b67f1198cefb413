//! Outward-rounded intervals over MPFR floats.
//!
//! Every operation returns an enclosure of the exact result: lower endpoints
//! are rounded toward −∞ and upper endpoints toward +∞. Elementary functions
//! are evaluated on endpoints where they are monotone on the admitted domain.

use std::cmp::Ordering;
use std::fmt;

use rug::float::{Constant, Round};
use rug::{Float, Integer, Rational};

#[derive(Clone, PartialEq)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.20e}, {:.20e}]@{}", self.lo.to_f64(), self.hi.to_f64(), self.prec())
    }
}

impl Interval {
    /// Encloses an exact rational at `prec` bits.
    pub fn from_rational(prec: u32, r: &Rational) -> Self {
        let lo = Float::with_val_round(prec, r, Round::Down).0;
        let hi = Float::with_val_round(prec, r, Round::Up).0;
        Interval { lo, hi }
    }

    pub fn from_integer(prec: u32, n: &Integer) -> Self {
        let lo = Float::with_val_round(prec, n, Round::Down).0;
        let hi = Float::with_val_round(prec, n, Round::Up).0;
        Interval { lo, hi }
    }

    pub fn from_u64(prec: u32, n: u64) -> Self {
        Self::from_integer(prec, &Integer::from(n))
    }

    /// Exact power of two `2^exp`.
    pub fn pow2(prec: u32, exp: i64) -> Self {
        let mut one = Float::with_val(prec, 1);
        // MPFR exponent range is ±(2^30 - 1) by default.
        let e = i32::try_from(exp).expect("exponent out of MPFR range");
        one <<= e;
        Interval { lo: one.clone(), hi: one }
    }

    pub fn from_bounds(lo: Float, hi: Float) -> Self {
        debug_assert!(lo <= hi, "interval bounds out of order");
        Interval { lo, hi }
    }

    pub fn pi(prec: u32) -> Self {
        let lo = Float::with_val_round(prec, Constant::Pi, Round::Down).0;
        let hi = Float::with_val_round(prec, Constant::Pi, Round::Up).0;
        Interval { lo, hi }
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec()
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Float {
        Float::with_val_round(self.prec(), &self.hi - &self.lo, Round::Up).0
    }

    pub fn midpoint_f64(&self) -> f64 {
        let mid = Float::with_val(self.prec() + 1, &self.lo + &self.hi);
        (mid / 2u32).to_f64()
    }

    pub fn contains_rational(&self, r: &Rational) -> bool {
        self.lo <= *r && self.hi >= *r
    }

    pub fn is_nonneg(&self) -> bool {
        self.lo >= 0
    }

    /// Lowest integer `j` with `j >= x` for every `x` in the interval, if unique.
    pub fn certified_ceil(&self) -> Option<Integer> {
        let j = self.hi.to_integer_round(Round::Up)?.0;
        let below = Integer::from(&j - 1u32);
        if self.lo > below {
            Some(j)
        } else {
            None
        }
    }

    /// Decides `self < other` or `self > other` when the enclosures are disjoint.
    pub fn certified_cmp(&self, other: &Interval) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.is_point() && other.is_point() && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn add(&self, o: &Interval) -> Interval {
        let p = self.prec().max(o.prec());
        Interval {
            lo: Float::with_val_round(p, &self.lo + &o.lo, Round::Down).0,
            hi: Float::with_val_round(p, &self.hi + &o.hi, Round::Up).0,
        }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        let p = self.prec().max(o.prec());
        Interval {
            lo: Float::with_val_round(p, &self.lo - &o.hi, Round::Down).0,
            hi: Float::with_val_round(p, &self.hi - &o.lo, Round::Up).0,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: Float::with_val(self.prec(), -&self.hi), hi: Float::with_val(self.prec(), -&self.lo) }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let p = self.prec().max(o.prec());
        if self.lo >= 0 && o.lo >= 0 {
            return Interval {
                lo: Float::with_val_round(p, &self.lo * &o.lo, Round::Down).0,
                hi: Float::with_val_round(p, &self.hi * &o.hi, Round::Up).0,
            };
        }
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let lo = pairs
            .iter()
            .map(|(a, b)| Float::with_val_round(p, *a * *b, Round::Down).0)
            .min_by(|a, b| a.partial_cmp(b).expect("NaN in interval product"))
            .unwrap();
        let hi = pairs
            .iter()
            .map(|(a, b)| Float::with_val_round(p, *a * *b, Round::Up).0)
            .max_by(|a, b| a.partial_cmp(b).expect("NaN in interval product"))
            .unwrap();
        Interval { lo, hi }
    }

    /// Division by an interval that excludes zero.
    pub fn div(&self, o: &Interval) -> Interval {
        assert!(o.lo > 0 || o.hi < 0, "interval division by an enclosure of zero");
        let p = self.prec().max(o.prec());
        if self.lo >= 0 && o.lo > 0 {
            return Interval {
                lo: Float::with_val_round(p, &self.lo / &o.hi, Round::Down).0,
                hi: Float::with_val_round(p, &self.hi / &o.lo, Round::Up).0,
            };
        }
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let lo =
            pairs.iter().map(|(a, b)| Float::with_val_round(p, *a / *b, Round::Down).0).min_by(|a, b| a.partial_cmp(b).unwrap()).unwrap();
        let hi =
            pairs.iter().map(|(a, b)| Float::with_val_round(p, *a / *b, Round::Up).0).max_by(|a, b| a.partial_cmp(b).unwrap()).unwrap();
        Interval { lo, hi }
    }

    pub fn mul_rational(&self, r: &Rational) -> Interval {
        self.mul(&Interval::from_rational(self.prec(), r))
    }

    /// Multiplication by `2^e` is exact.
    pub fn mul_pow2(&self, e: i64) -> Interval {
        let e = i32::try_from(e).expect("exponent out of MPFR range");
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        lo <<= e;
        hi <<= e;
        Interval { lo, hi }
    }

    pub fn powi(&self, n: u32) -> Interval {
        let mut acc = Interval::from_u64(self.prec(), 1);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Restricts the enclosure to `[lo_bound, hi_bound]`, which the caller knows
    /// contains the exact value.
    pub fn clamp(&self, lo_bound: f64, hi_bound: f64) -> Interval {
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        if lo < lo_bound {
            lo = Float::with_val(self.prec(), lo_bound);
        }
        if hi > hi_bound {
            hi = Float::with_val(self.prec(), hi_bound);
        }
        if lo > hi {
            lo = hi.clone();
        }
        Interval { lo, hi }
    }

    /// Square root of a value known to be nonnegative.
    pub fn sqrt(&self) -> Interval {
        let c = self.clamp(0.0, f64::INFINITY);
        let p = self.prec();
        let lo = Float::with_val_round(p, c.lo.sqrt_ref(), Round::Down).0;
        let hi = if c.is_point() {
            let mut h = Float::with_val_round(p, c.hi.sqrt_ref(), Round::Up).0;
            if h < lo {
                h = lo.clone();
            }
            h
        } else {
            Float::with_val_round(p, c.hi.sqrt_ref(), Round::Up).0
        };
        Interval { lo, hi }
    }

    /// `arcsin(sqrt(x))` for an enclosure of `x ∈ [0, 1]`.
    pub fn asin_sqrt(&self) -> Interval {
        let c = self.clamp(0.0, 1.0);
        let s = c.sqrt();
        let p = self.prec();
        let lo = Float::with_val_round(p, s.lo.asin_ref(), Round::Down).0;
        let hi = if s.is_point() {
            let mut h = lo.clone();
            h.next_up();
            h
        } else {
            // Mean value bound: asin' is increasing, so on [s_lo, s_hi] the slope
            // is at most 1/sqrt(1 - s_hi^2). Saves a second full-precision asin.
            let s_hi_sq = Float::with_val_round(64, &s.hi * &s.hi, Round::Up).0;
            if s_hi_sq < 0.75 {
                let one_minus = Float::with_val_round(64, 1 - &s_hi_sq, Round::Down).0;
                let slope = Float::with_val_round(64, one_minus.sqrt_ref(), Round::Down).0;
                let ds = Float::with_val_round(p, &s.hi - &s.lo, Round::Up).0;
                let dv = Float::with_val_round(p, &ds / &slope, Round::Up).0;
                let mut base = lo.clone();
                base.next_up();
                Float::with_val_round(p, &base + &dv, Round::Up).0
            } else {
                Float::with_val_round(p, s.hi.asin_ref(), Round::Up).0
            }
        };
        Interval { lo, hi }
    }

    /// `sin(x)` for an enclosure of `x ∈ [0, π/2]`, where sine is increasing.
    pub fn sin_increasing(&self) -> Interval {
        let p = self.prec();
        if self.is_point() {
            let lo = Float::with_val_round(p, self.lo.sin_ref(), Round::Down).0;
            let mut hi = lo.clone();
            hi.next_up();
            return Interval { lo, hi }.clamp(-1.0, 1.0);
        }
        // One evaluation at the midpoint; |sin'| <= 1 bounds the spread.
        let mid = Float::with_val(p + 1, &self.lo + &self.hi) / 2u32;
        let rad_a = Float::with_val_round(p, &self.hi - &mid, Round::Up).0;
        let rad_b = Float::with_val_round(p, &mid - &self.lo, Round::Up).0;
        let rad = if rad_a > rad_b { rad_a } else { rad_b };
        let s = Float::with_val_round(p, mid.sin_ref(), Round::Down).0;
        let mut s_up = s.clone();
        s_up.next_up();
        let lo = Float::with_val_round(p, &s - &rad, Round::Down).0;
        let hi = Float::with_val_round(p, &s_up + &rad, Round::Up).0;
        Interval { lo, hi }.clamp(-1.0, 1.0)
    }

    /// Natural logarithm of a positive enclosure.
    pub fn ln(&self) -> Interval {
        assert!(self.lo > 0, "logarithm of a nonpositive enclosure");
        let p = self.prec();
        Interval {
            lo: Float::with_val_round(p, self.lo.ln_ref(), Round::Down).0,
            hi: Float::with_val_round(p, self.hi.ln_ref(), Round::Up).0,
        }
    }

    /// Binary logarithm of a positive enclosure.
    pub fn log2(&self) -> Interval {
        assert!(self.lo > 0, "logarithm of a nonpositive enclosure");
        let p = self.prec();
        Interval {
            lo: Float::with_val_round(p, self.lo.log2_ref(), Round::Down).0,
            hi: Float::with_val_round(p, self.hi.log2_ref(), Round::Up).0,
        }
    }

    /// Least upper bound as f64 (rounded up).
    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64_round(Round::Up)
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64_round(Round::Down)
    }

    /// Decimal rendering with `digits` significant digits of the midpoint.
    pub fn to_decimal(&self, digits: usize) -> String {
        let mid = Float::with_val(self.prec() + 1, &self.lo + &self.hi) / 2u32;
        mid.to_string_radix(10, Some(digits))
    }
}
