use rug::{Integer, Rational};
use serde::Serialize;

use super::interval::Interval;
use super::iterlog::{log_star, Magnitude};
use crate::error::{bail, Result};

/// A choice `k = (c·L)²` with `c·L` a power of two.
#[derive(Clone, Debug, Serialize)]
pub struct KChoice {
    /// `k`, a power of four.
    pub k: u64,
    /// `√k`.
    pub sqrt_k: u64,
    /// The constant `c₁` or `c₂` as a reduced fraction.
    pub c: String,
    pub c_f64: f64,
    pub log_star: u32,
}

fn choose(scale: u32, min_c: &Rational, log_star: u32) -> Result<KChoice> {
    // Smallest power of two P with P ≥ min_c·scale; then c = P/scale.
    let need = Rational::from(min_c * scale);
    let mut p = Integer::from(1);
    while p < need {
        p <<= 1;
    }
    let Some(sqrt_k) = p.to_u64().filter(|&s| s <= 1 << 31) else {
        bail!(Config, "k = ({p})^2 is out of range");
    };
    let c = Rational::from((p, Integer::from(scale)));
    Ok(KChoice { k: sqrt_k * sqrt_k, sqrt_k, c_f64: c.to_f64(), c: c.to_string(), log_star })
}

fn log_log_bound(log_n: &Integer, k: u64) -> Result<()> {
    // k ≤ log log N  ⟺  2^k ≤ n.
    let fits = k < u64::from(u32::MAX) && Integer::from(1) << (k as u32) <= *log_n;
    if !fits {
        bail!(Config, "k = {k} exceeds log log N for N = 2^{log_n}");
    }
    Ok(())
}

/// `k = (c₁·log* N)²`, smallest rational `c₁ ∈ [1,2]` making `k` a power of two.
pub fn pick_k_fixed_r_unchecked(log_n: &Integer) -> Result<KChoice> {
    let l = log_star(&Magnitude::Pow2(log_n.clone()))?;
    if l == 0 {
        bail!(Config, "log* N = 0: N too small");
    }
    choose(l, &Rational::from(1), l)
}

/// As [`pick_k_fixed_r_unchecked`], additionally requiring `k ≤ log log N`.
pub fn pick_k_fixed_r(log_n: &Integer) -> Result<KChoice> {
    let choice = pick_k_fixed_r_unchecked(log_n)?;
    log_log_bound(log_n, choice.k)?;
    Ok(choice)
}

/// `k = (c₂(log* N + 2))²` with `c₂` the smallest rational at least `min_c`
/// making `k` a power of two.
pub fn pick_k_for_threshold(log_n: &Integer, min_c: &Rational) -> Result<KChoice> {
    if *min_c <= 0 {
        bail!(Domain, "threshold must be positive");
    }
    let l = log_star(&Magnitude::Pow2(log_n.clone()))?;
    choose(l + 2, min_c, l)
}

/// Rational upper bound on `4/ln(1+ε)`.
pub fn eps_threshold(eps: f64) -> Result<Rational> {
    if !(eps > 0.0 && eps.is_finite()) {
        bail!(Domain, "epsilon must be positive and finite, got {eps}");
    }
    let one_plus = Rational::from(1) + Rational::from_f64(eps).unwrap();
    let ln = Interval::from_rational(256, &one_plus).ln();
    let t = Interval::from_u64(256, 4).div(&ln);
    Ok(t.hi().to_rational().unwrap())
}

pub fn pick_k_eps_unchecked(log_n: &Integer, eps: f64) -> Result<KChoice> {
    pick_k_for_threshold(log_n, &eps_threshold(eps)?)
}

pub fn pick_k_eps(log_n: &Integer, eps: f64) -> Result<KChoice> {
    let choice = pick_k_eps_unchecked(log_n, eps)?;
    log_log_bound(log_n, choice.k)?;
    Ok(choice)
}

/// Exact check of `(1 + 4/√k)^(r+2) ≤ 1 + ε`.
pub fn eps_bound_holds(sqrt_k: u64, r: u32, eps: f64) -> Result<bool> {
    let Some(e) = Rational::from_f64(eps) else { bail!(Domain, "epsilon must be finite") };
    let base = Rational::from(1) + Rational::from((4u64, sqrt_k));
    let lhs = base.pow_ref(r as i32 + 2);
    Ok(lhs <= Rational::from(1) + e)
}

trait PowRef {
    fn pow_ref(&self, e: i32) -> Rational;
}

impl PowRef for Rational {
    fn pow_ref(&self, e: i32) -> Rational {
        use rug::ops::Pow;
        self.clone().pow(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_r_choices() {
        // log*(2^65536) = 5 and log*(2^16) = 4.
        let c = pick_k_fixed_r_unchecked(&Integer::from(16)).unwrap();
        assert_eq!((c.k, c.c.as_str()), (16, "1"));
        let c = pick_k_fixed_r_unchecked(&Integer::from(1024)).unwrap();
        assert_eq!(c.log_star, 5);
        assert_eq!((c.k, c.c.as_str()), (64, "8/5"));
        assert!(pick_k_fixed_r(&Integer::from(1024)).is_err());
    }

    #[test]
    fn threshold_choices() {
        // log*(2^4) = 3 ... we need log* N = 2: N = 4 (n = 2).
        let c = pick_k_for_threshold(&Integer::from(2), &Rational::from(1)).unwrap();
        assert_eq!(c.log_star, 2);
        assert_eq!((c.k, c.c.as_str()), (16, "1"));
        let c = pick_k_eps_unchecked(&Integer::from(1024), 1.0).unwrap();
        assert!(c.c_f64 >= 4.0 / 2f64.ln());
        assert!(c.sqrt_k.is_power_of_two());
        assert!(eps_bound_holds(c.sqrt_k, c.log_star, 1.0).unwrap());
        assert!(pick_k_eps(&Integer::from(1024), 1.0).is_err());
    }

    #[test]
    fn tiny_epsilon_is_a_configuration_error() {
        assert!(pick_k_eps(&Integer::from(1u32 << 20), 1e-6).is_err());
    }
}
