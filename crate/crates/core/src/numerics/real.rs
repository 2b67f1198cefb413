use std::fmt;

use rug::{Integer, Rational};

use super::interval::Interval;
use crate::error::{bail, Result};

/// Something that can be enclosed in an interval at any requested precision.
pub trait Enclose {
    fn enclose(&self, prec: u32, cache: &mut EvalCache) -> Interval;

    /// The exact rational value, when there is one and it is known.
    fn exact(&self) -> Option<Rational> {
        None
    }

    /// An exact rational known to be at most the value.
    fn exact_lower_bound(&self) -> Option<Rational> {
        self.exact()
    }
}

/// Exactly specified real parameter: a rational, or a rational multiple of
/// `log2(arg)` or of `1/log2(arg)` (the iterated-logarithm parameters).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Real {
    Exact(Rational),
    LogTerm { coeff: Rational, arg: Integer, power: i8 },
}

fn power_of_two_exponent(n: &Integer) -> Option<u32> {
    if *n > 0 && n.is_power_of_two() {
        Some(n.significant_bits() - 1)
    } else {
        None
    }
}

impl Real {
    pub fn ratio(num: i64, den: i64) -> Real {
        Real::Exact(Rational::from((num, den)))
    }

    pub fn one() -> Real {
        Real::ratio(1, 1)
    }

    pub fn from_rational(r: Rational) -> Real {
        Real::Exact(r)
    }

    /// Exact value of a finite binary64.
    pub fn from_f64(x: f64) -> Result<Real> {
        match Rational::from_f64(x) {
            Some(r) => Ok(Real::Exact(r)),
            None => bail!(Domain, "non-finite value {x}"),
        }
    }

    /// `2^-n`.
    pub fn pow2_neg(n: u32) -> Real {
        Real::Exact(Rational::from((Integer::from(1), Integer::from(1) << n)))
    }

    /// `log2(arg)`, kept symbolic unless `arg` is a power of two.
    pub fn log2_of(arg: &Integer) -> Result<Real> {
        if *arg <= 0 {
            bail!(Domain, "log2 of nonpositive {arg}");
        }
        Ok(match power_of_two_exponent(arg) {
            Some(e) => Real::Exact(Rational::from(e)),
            None => Real::LogTerm { coeff: Rational::from(1), arg: arg.clone(), power: 1 },
        })
    }

    pub fn recip(&self) -> Result<Real> {
        Ok(match self {
            Real::Exact(r) => {
                if *r == 0 {
                    bail!(Domain, "reciprocal of zero");
                }
                Real::Exact(Rational::from(r.recip_ref()))
            }
            Real::LogTerm { coeff, arg, power } => {
                Real::LogTerm { coeff: Rational::from(coeff.recip_ref()), arg: arg.clone(), power: -power }
            }
        })
    }

    pub fn scale(&self, by: &Rational) -> Real {
        match self {
            Real::Exact(r) => Real::Exact(Rational::from(r * by)),
            Real::LogTerm { coeff, arg, power } => Real::LogTerm { coeff: Rational::from(coeff * by), arg: arg.clone(), power: *power },
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Real::Exact(r) => Some(r),
            Real::LogTerm { .. } => None,
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Real::Exact(r) if *r == 1)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(r) => r.to_f64(),
            _ => self.enclose(128, &mut EvalCache::default()).midpoint_f64(),
        }
    }

    /// Decimal rendering: exact when the expansion terminates, else `digits`
    /// significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        if let Real::Exact(r) = self {
            if let Some(s) = terminating_decimal(r) {
                return s;
            }
        }
        let prec = (digits as f64 * 3.33) as u32 + 64;
        self.enclose(prec, &mut EvalCache::default()).to_decimal(digits)
    }
}

fn terminating_decimal(r: &Rational) -> Option<String> {
    let mut den = r.denom().clone();
    let twos = den.find_one(0).unwrap_or(0);
    den >>= twos;
    let mut fives = 0u32;
    while den.is_divisible_u(5) {
        den /= 5u32;
        fives += 1;
    }
    if den != 1 {
        return None;
    }
    let places = twos.max(fives);
    let scaled = (r.numer() * Integer::from(Integer::u_pow_u(10, places))) / r.denom();
    let neg = scaled < 0;
    let mut digits = Integer::from(scaled.abs_ref()).to_string();
    if places == 0 {
        return Some(format!("{}{}", if neg { "-" } else { "" }, digits));
    }
    while digits.len() <= places as usize {
        digits.insert(0, '0');
    }
    let split = digits.len() - places as usize;
    Some(format!("{}{}.{}", if neg { "-" } else { "" }, &digits[..split], &digits[split..]))
}

impl Enclose for Real {
    fn enclose(&self, prec: u32, _cache: &mut EvalCache) -> Interval {
        match self {
            Real::Exact(r) => Interval::from_rational(prec, r),
            Real::LogTerm { coeff, arg, power } => {
                let l = Interval::from_integer(prec, arg).log2();
                let l = if *power < 0 { Interval::from_u64(prec, 1).div(&l) } else { l };
                l.mul_rational(coeff)
            }
        }
    }

    fn exact(&self) -> Option<Rational> {
        self.as_exact().cloned()
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(r) => write!(f, "{r}"),
            Real::LogTerm { coeff, arg, power } if *power > 0 => write!(f, "{coeff}*log2({arg})"),
            Real::LogTerm { coeff, arg, .. } => write!(f, "{coeff}/log2({arg})"),
        }
    }
}

/// Memo of full-precision arcsin evaluations, owned by one computation.
#[derive(Default)]
pub struct EvalCache {
    asin: Vec<(Real, u32, Interval)>,
    a_tilde: Vec<(Real, Integer, u32, Interval)>,
}

impl EvalCache {
    /// `arcsin(sqrt(value))` at `prec` bits, computed once per (value, prec).
    pub fn asin_sqrt(&mut self, value: &Real, prec: u32) -> Interval {
        if let Some((_, _, iv)) = self.asin.iter().find(|(v, p, _)| *p == prec && v == value) {
            return iv.clone();
        }
        let iv = value.enclose(prec, self).asin_sqrt();
        // Only a handful of targets occur per computation.
        if self.asin.len() >= 16 {
            self.asin.remove(0);
        }
        self.asin.push((value.clone(), prec, iv.clone()));
        iv
    }

    /// `sin²(arcsin(√target) / (2·rounds + 1))` at `prec` bits.
    pub fn a_tilde(&mut self, target: &Real, rounds: &Integer, prec: u32) -> Interval {
        if let Some((.., iv)) = self.a_tilde.iter().find(|(t, w, p, _)| *p == prec && w == rounds && t == target) {
            return iv.clone();
        }
        let odd = Interval::from_integer(prec, &(Integer::from(rounds * 2u32) + 1u32));
        let s = self.asin_sqrt(target, prec).div(&odd).sin_increasing();
        let iv = s.mul(&s);
        if self.a_tilde.len() >= 64 {
            self.a_tilde.remove(0);
        }
        self.a_tilde.push((target.clone(), rounds.clone(), prec, iv.clone()));
        iv
    }
}
