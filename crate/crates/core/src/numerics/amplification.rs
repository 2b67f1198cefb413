use std::cmp::Ordering;

use rug::{Integer, Rational};

use super::interval::Interval;
use super::real::{Enclose, EvalCache, Real};
use crate::error::{bail, Error, Result};

/// Precision ceiling for the certified ceiling (bits).
const MAX_PREC: u32 = 1 << 26;
/// Largest round count tried by the exact polynomial tie check.
const TIE_CHECK_LIMIT: u32 = 4096;
const PREC_STEP: u32 = 4096;

#[derive(Clone, Debug)]
pub struct AmplificationSchedule {
    pub a: f64,
    pub a_prime: f64,
    pub w: Integer,
    pub theta: f64,
    pub a_tilde: f64,
    /// `ã/a`, the rotation parameter of `R`, evaluated at high precision.
    pub ratio: f64,
}

impl AmplificationSchedule {
    pub fn rounds_u64(&self) -> Option<u64> {
        self.w.to_u64()
    }
}

/// Exact `⌈arcsin(√a')/(2 arcsin(√a)) − 1/2⌉`.
pub fn compute_w(a: &dyn Enclose, a_prime: &dyn Enclose) -> Result<Integer> {
    compute_w_cached(a, a_prime, &mut EvalCache::default())
}

pub fn compute_w_f64(a: f64, a_prime: f64) -> Result<Integer> {
    compute_w(&Real::from_f64(a)?, &Real::from_f64(a_prime)?)
}

fn check_domain(a: &dyn Enclose, a_prime: &dyn Enclose, cache: &mut EvalCache) -> Result<()> {
    if let (Some(x), Some(y)) = (a.exact(), a_prime.exact()) {
        if x <= 0 {
            bail!(Domain, "success probability a = {x} must be positive");
        }
        if y > 1 {
            bail!(Domain, "target probability a' = {y} exceeds 1");
        }
        if x > y {
            bail!(Domain, "a = {x} exceeds target a' = {y}");
        }
        return Ok(());
    }
    let x = a.enclose(128, cache);
    let y = a_prime.enclose(128, cache);
    if *x.hi() <= 0 {
        bail!(Domain, "success probability a must be positive");
    }
    if *y.lo() > 1 {
        bail!(Domain, "target probability a' exceeds 1");
    }
    if x.certified_cmp(&y) == Some(Ordering::Greater) {
        bail!(Domain, "a exceeds target a'");
    }
    Ok(())
}

/// As [`compute_w`], reusing arcsin evaluations held in `cache`.
pub fn compute_w_cached(a: &dyn Enclose, a_prime: &dyn Enclose, cache: &mut EvalCache) -> Result<Integer> {
    check_domain(a, a_prime, cache)?;
    let exact = (a.exact(), a_prime.exact());
    if let (Some(x), Some(y)) = &exact {
        if x == y {
            return Ok(Integer::new());
        }
    }

    // arcsin(√a) ≈ 2^(e/2) when a ≈ 2^e, so the ratio needs about -e/2 bits
    // before the fractional part shows.
    let probe = a.enclose(64, cache);
    let exp = probe.lo().get_exp().unwrap_or(0).min(0);
    let mut prec = (96 + (-(exp as i64)) / 2).clamp(96, MAX_PREC as i64) as u32;
    // Coarse steps let sweeps over nearby sizes share cached evaluations.
    if prec > PREC_STEP {
        prec = prec.div_ceil(PREC_STEP) * PREC_STEP;
    }
    let target_key = a_prime_key(a_prime);
    let mut tried_bound = false;

    loop {
        let big = match &target_key {
            Some(r) => cache.asin_sqrt(r, prec),
            None => a_prime.enclose(prec, cache).asin_sqrt(),
        };
        let small = a.enclose(prec, cache).asin_sqrt();
        if *small.lo() > 0 {
            let x = big.div(&small.mul_pow2(1)).sub(&Interval::pow2(prec, -1));
            if let Some(j) = x.certified_ceil() {
                return Ok(j.max(Integer::new()));
            }
            if let (Some(ea), Some(ep)) = &exact {
                let below = x.lo().to_integer_round(rug::float::Round::Up).map(|v| v.0);
                if let Some(j) = below {
                    let above = Integer::from(&j + 1u32);
                    if *x.hi() < above && (0..=TIE_CHECK_LIMIT).contains(&j) && lands_exactly(ea, ep, j.to_u32().unwrap()) {
                        return Ok(j);
                    }
                }
            }
        }
        if !tried_bound && *small.lo() > 0 {
            tried_bound = true;
            if let Some(j) = via_lower_bound(a, a_prime, &big, &small, cache)? {
                return Ok(j);
            }
        }
        if prec >= MAX_PREC {
            return Err(Error::Resource(format!("round count not certified within {MAX_PREC} bits")));
        }
        prec = prec.saturating_mul(2).min(MAX_PREC);
    }
}

/// `w` is nonincreasing in `a`. If the enclosure puts the ratio above
/// `j − 1` and an exact lower bound `b ≤ a` has `w(b) = j`, then `w(a) = j`.
/// Settles values that sit just below an integer, where escalation would
/// need precision proportional to the gap.
fn via_lower_bound(
    a: &dyn Enclose,
    a_prime: &dyn Enclose,
    big: &Interval,
    small: &Interval,
    cache: &mut EvalCache,
) -> Result<Option<Integer>> {
    let (Some(lb), Some(_)) = (a.exact_lower_bound(), a_prime.exact()) else { return Ok(None) };
    if a.exact().is_some() || lb <= 0 {
        return Ok(None);
    }
    let prec = big.prec();
    let x = big.div(&small.mul_pow2(1)).sub(&Interval::pow2(prec, -1));
    if x.lo().is_integer() {
        return Ok(None);
    }
    let Some((below, _)) = x.lo().to_integer_round(rug::float::Round::Down) else { return Ok(None) };
    let j = (below + 1u32).max(Integer::new());
    let w_lb = compute_w_cached(&Real::Exact(lb), a_prime, cache)?;
    Ok((w_lb == j).then_some(j))
}

fn a_prime_key(a_prime: &dyn Enclose) -> Option<Real> {
    a_prime.exact().map(Real::Exact)
}

/// Whether `a' = sin²((2j+1)·arcsin(√a))` holds exactly, i.e. `a' = a·P(a)²`
/// with `sin((2j+1)φ) = sin φ · P(sin²φ)`.
fn lands_exactly(a: &Rational, a_prime: &Rational, j: u32) -> bool {
    let c = Rational::from(1) - Rational::from(a * 2u32);
    let two_c = Rational::from(&c * 2u32);
    // P_{-1} = -1, P_1 = 1, P_{m+2} = 2(1-2a)P_m - P_{m-2}.
    let mut prev = Rational::from(-1);
    let mut cur = Rational::from(1);
    for _ in 0..j {
        let next = Rational::from(&two_c * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    (a * Rational::from(cur.square_ref())) == *a_prime
}

/// `w`, `θ = arcsin(√a')/(2w+1)` and `ã = sin²θ`.
pub fn amplification_schedule(a: &dyn Enclose, a_prime: &dyn Enclose) -> Result<AmplificationSchedule> {
    let mut cache = EvalCache::default();
    let w = compute_w_cached(a, a_prime, &mut cache)?;
    amplification_schedule_with(a, a_prime, w, &mut cache)
}

pub fn amplification_schedule_f64(a: f64, a_prime: f64) -> Result<AmplificationSchedule> {
    amplification_schedule(&Real::from_f64(a)?, &Real::from_f64(a_prime)?)
}

pub(crate) fn amplification_schedule_with(
    a: &dyn Enclose,
    a_prime: &dyn Enclose,
    w: Integer,
    cache: &mut EvalCache,
) -> Result<AmplificationSchedule> {
    let probe = a.enclose(64, cache);
    let exp = probe.lo().get_exp().unwrap_or(0).min(0);
    let prec = 160 + (-(exp as i64)).min(1 << 20) as u32;
    let av = a.enclose(prec, cache);
    let ap = a_prime.enclose(prec, cache);
    let odd = Interval::from_integer(prec, &(Integer::from(&w * 2u32) + 1u32));
    let theta = ap.asin_sqrt().div(&odd);
    let (a_tilde, ratio) = if w == 0 {
        (ap.clone(), Interval::from_u64(prec, 1))
    } else {
        let s = theta.sin_increasing();
        let t = s.mul(&s);
        let r = t.div(&av).clamp(0.0, 1.0);
        (t, r)
    };
    Ok(AmplificationSchedule {
        a: av.midpoint_f64(),
        a_prime: ap.midpoint_f64(),
        w,
        theta: theta.midpoint_f64(),
        a_tilde: a_tilde.midpoint_f64(),
        ratio: ratio.midpoint_f64().min(1.0),
    })
}
