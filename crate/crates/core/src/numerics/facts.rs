use rug::{Integer, Rational};
use serde::Serialize;

use crate::error::{bail, Result};

/// `⌈(α/2)(1+1/k) − 1/2⌉ ≤ (α/2)(1+2/k)` for `k ≥ 2`, `α ≥ k`.
#[derive(Clone, Debug, Serialize)]
pub struct CeilingFact {
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

/// `(2i+8)·log k < k^(i+1)` for `k ≥ 3`, `i ≥ 2`.
#[derive(Clone, Debug, Serialize)]
pub struct IterlogFact {
    pub lhs: f64,
    pub rhs: String,
    pub holds: bool,
}

fn ceil_rational(x: &Rational) -> Integer {
    let (q, r) = x.numer().clone().div_rem_ceil(x.denom().clone());
    debug_assert!(r <= 0);
    q
}

pub fn check_fact_ceiling(k: u64, alpha: &Rational) -> Result<CeilingFact> {
    if k < 2 {
        bail!(Domain, "ceiling fact needs k >= 2, got {k}");
    }
    if *alpha < k {
        bail!(Domain, "ceiling fact needs alpha >= k, got alpha = {alpha}, k = {k}");
    }
    let half = Rational::from(alpha / 2u32);
    let kq = Rational::from(k);
    let inner = (&half * (Rational::from(1) + Rational::from(kq.recip_ref()))) - Rational::from((1, 2));
    let lhs = ceil_rational(&inner);
    let rhs = half * (Rational::from(1) + Rational::from(2u32) / kq);
    let holds = lhs <= rhs;
    Ok(CeilingFact { lhs: lhs.to_string(), rhs: rhs.to_string(), holds })
}

pub fn check_fact_iterlog(k: u64, i: u64) -> Result<IterlogFact> {
    if k < 3 {
        bail!(Domain, "iterated-log fact needs k >= 3, got {k}");
    }
    if i < 2 {
        bail!(Domain, "iterated-log fact needs i >= 2, got {i}");
    }
    let (Ok(kk), Ok(e)) = (u32::try_from(k), u32::try_from(i + 1)) else { bail!(Domain, "k = {k}, i = {i} out of range") };
    let rhs = Integer::from(Integer::u_pow_u(kk, e));
    // (2i+8)·log k < k^(i+1)  ⟺  k^(2i+8) < 2^(k^(i+1))  ⟺  bitlen(k^(2i+8)) ≤ k^(i+1).
    let Ok(e2) = u32::try_from(2 * i + 8) else { bail!(Domain, "i = {i} too large") };
    let power = Integer::from(Integer::u_pow_u(kk, e2));
    let holds = rhs >= power.significant_bits();
    let lhs = (2 * i + 8) as f64 * (k as f64).log2();
    Ok(IterlogFact { lhs, rhs: rhs.to_string(), holds })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceiling_examples() {
        let f = check_fact_ceiling(2, &Rational::from(2)).unwrap();
        assert_eq!((f.lhs.as_str(), f.rhs.as_str(), f.holds), ("1", "2", true));
        // C1 ceiling at n1 = 20, k = 4: α = √(N/k) = 512.
        let f = check_fact_ceiling(4, &Rational::from(512)).unwrap();
        assert_eq!(f.lhs, "320");
        assert!(f.holds);
        assert!(check_fact_ceiling(2, &Rational::from(1)).is_err());
    }

    #[test]
    fn iterlog_examples() {
        let f = check_fact_iterlog(3, 2).unwrap();
        assert!((f.lhs - 12.0 * 3f64.log2()).abs() < 1e-12);
        assert_eq!(f.rhs, "27");
        assert!(f.holds);
        assert!(check_fact_iterlog(3, 10).unwrap().holds);
        assert!(check_fact_iterlog(2, 2).is_err());
        assert!(check_fact_iterlog(3, 1).is_err());
    }

    #[test]
    fn sweeps_hold() {
        for k in 3..=64u64 {
            for i in 2..=32u64 {
                assert!(check_fact_iterlog(k, i).unwrap().holds, "k={k} i={i}");
            }
        }
        for k in 2..=64u64 {
            for a in [k, k + 1, 2 * k + 1, 1000, 999_999, 1_000_000] {
                if a >= k {
                    assert!(check_fact_ceiling(k, &Rational::from(a)).unwrap().holds);
                }
            }
        }
    }
}
