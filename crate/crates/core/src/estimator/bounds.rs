//! Exact checks of the explicit count inequalities.
//!
//! Right-hand sides of the form `c·√R` with rational `c` and `R` are decided
//! by squaring. Anything involving `π` or an irrational `k` is enclosed at
//! [`BOUND_PREC`] bits and compared against the unfavourable endpoint.

use rug::{Integer, Rational};
use serde::Serialize;

use crate::numerics::surd::{ge_surd, le_surd};
use crate::numerics::{Enclose, EvalCache, Interval, Real};

pub const BOUND_PREC: u32 = 320;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    /// Exact left-hand side.
    pub lhs: String,
    /// The right-hand side as a formula.
    pub rhs: String,
    /// Decimal approximation of the right-hand side.
    pub rhs_approx: String,
    pub holds: bool,
    /// Whether the hypotheses of the inequality are met; when false the
    /// result is informational only.
    pub preconditions: bool,
}

impl BoundCheck {
    /// False only when the hypotheses hold but the inequality does not.
    pub fn ok(&self) -> bool {
        !self.preconditions || self.holds
    }
}

fn approx_surd(coeff: &Rational, radicand: &Rational) -> String {
    let prec = 64;
    let v = Interval::from_rational(prec, radicand).sqrt().mul_rational(coeff);
    v.to_decimal(12)
}

fn surd_check(name: &str, lhs: &Integer, le: bool, coeff: &Rational, radicand: &Rational, formula: String, pre: bool) -> BoundCheck {
    let l = Rational::from(lhs);
    let holds = if le { le_surd(&l, coeff, radicand) } else { ge_surd(&l, coeff, radicand) };
    BoundCheck {
        name: name.into(),
        lhs: lhs.to_string(),
        rhs: formula,
        rhs_approx: approx_surd(coeff, radicand),
        holds,
        preconditions: pre,
    }
}

/// `lhs ≤ rhs` (or `≥`) decided against the adverse end of `rhs`.
fn interval_check(name: &str, lhs: &Integer, le: bool, rhs: &Interval, formula: String, pre: bool) -> BoundCheck {
    let holds = if le { *rhs.lo() >= *lhs } else { *rhs.hi() <= *lhs };
    BoundCheck { name: name.into(), lhs: lhs.to_string(), rhs: formula, rhs_approx: rhs.to_decimal(12), holds, preconditions: pre }
}

fn pow2(e: u32) -> Rational {
    Rational::from(Integer::from(1) << e)
}

fn q(n: u64, d: u64) -> Rational {
    Rational::from((n, d))
}

/// `(1 + c/k)^e` for rational `k`.
fn one_plus_pow(c: u64, k: &Rational, e: u32) -> Rational {
    use rug::ops::Pow;
    let base = Rational::from(1) + Rational::from(c) / k.clone();
    base.pow(e as i32)
}

/// Gate total of one exact amplification: `E' ≤ w(4n + 2E + 8) + E`, for `w ≥ 1`.
pub fn amplification_gates(w: &Integer, n_tot: u64, e_in: &Integer, e_out: &Integer) -> BoundCheck {
    let rhs = (w * (Integer::from(4 * n_tot + 8) + Integer::from(e_in * 2u32))) + e_in;
    BoundCheck {
        name: "amplify.gates".into(),
        lhs: e_out.to_string(),
        rhs: format!("w(4n+2E+8)+E with w={w}, n={n_tot}, E={e_in}"),
        rhs_approx: rhs.to_string(),
        holds: *e_out <= rhs,
        preconditions: *w >= 1,
    }
}

/// Inputs of one lift from `m` to `n` address bits.
pub struct LiftInstance<'a> {
    pub q_in: &'a Integer,
    pub e_in: &'a Integer,
    pub q_out: &'a Integer,
    pub e_out: &'a Integer,
    pub m: u32,
    pub n: u32,
    pub k: &'a Real,
    pub preconditions: bool,
}

/// `Q' ≤ Q√(N/M)(1+4/k)` and `E√(N/M) ≤ E' ≤ (3n+E)√(N/M)(1+3/k)`.
pub fn lift(inst: &LiftInstance<'_>, cache: &mut EvalCache) -> Vec<BoundCheck> {
    let d = inst.n - inst.m;
    let ratio = pow2(d);
    let pre = inst.preconditions;
    let lower =
        surd_check("lift.gates_lower", inst.e_out, false, &Rational::from(inst.e_in), &ratio, format!("{}*sqrt(2^{d})", inst.e_in), pre);
    match inst.k.as_exact() {
        Some(k) => vec![
            surd_check(
                "lift.queries",
                inst.q_out,
                true,
                &(Rational::from(inst.q_in) * (Rational::from(1) + Rational::from(4u32) / k.clone())),
                &ratio,
                format!("{}*sqrt(2^{d})*(1+4/{k})", inst.q_in),
                pre,
            ),
            lower,
            surd_check(
                "lift.gates_upper",
                inst.e_out,
                true,
                &(Rational::from(Integer::from(inst.e_in + 3 * inst.n)) * (Rational::from(1) + Rational::from(3u32) / k.clone())),
                &ratio,
                format!("({}+3*{})*sqrt(2^{d})*(1+3/{k})", inst.e_in, inst.n),
                pre,
            ),
        ],
        None => {
            let p = BOUND_PREC;
            let kv = inst.k.enclose(p, cache);
            let one = Interval::from_u64(p, 1);
            let root = Interval::pow2(p, 0).mul_pow2(i64::from(d)).sqrt();
            let qr = root.mul(&one.add(&Interval::from_u64(p, 4).div(&kv))).mul(&Interval::from_integer(p, inst.q_in));
            let e_up = Interval::from_integer(p, &Integer::from(inst.e_in + 3 * inst.n));
            let er = root.mul(&one.add(&Interval::from_u64(p, 3).div(&kv))).mul(&e_up);
            vec![
                interval_check("lift.queries", inst.q_out, true, &qr, format!("{}*sqrt(2^{d})*(1+4/k), k={}", inst.q_in, inst.k), pre),
                lower,
                interval_check(
                    "lift.gates_upper",
                    inst.e_out,
                    true,
                    &er,
                    format!("({}+3*{})*sqrt(2^{d})*(1+3/k), k={}", inst.e_in, inst.n, inst.k),
                    pre,
                ),
            ]
        }
    }
}

/// Boost from `1/k` to certainty: `w' ≤ (π/4)(√k+1)` and, when `Q ≥ √k`,
/// total queries `≤ (π/2)·Q·√k·(1+2/√k)²`.
pub fn boost(w: &Integer, q_in: &Integer, q_out: &Integer, k: &Real, cache: &mut EvalCache) -> Vec<BoundCheck> {
    let p = BOUND_PREC;
    let pi = Interval::pi(p);
    let kv = k.enclose(p, cache);
    let rk = kv.sqrt();
    let one = Interval::from_u64(p, 1);
    let w_rhs = pi.mul_pow2(-2).mul(&rk.add(&one));
    let factor = one.add(&Interval::from_u64(p, 2).div(&rk));
    let q_rhs = pi.mul_pow2(-1).mul(&Interval::from_integer(p, q_in)).mul(&rk).mul(&factor.mul(&factor));
    // Q ≥ √k ⟺ Q² ≥ k.
    let q_sq = Interval::from_integer(p, &Integer::from(q_in.square_ref()));
    let pre = q_sq.certified_cmp(&kv).is_some_and(|o| o != std::cmp::Ordering::Less);
    vec![
        interval_check("boost.rounds", w, true, &w_rhs, format!("(pi/4)(sqrt(k)+1), k={k}"), true),
        interval_check("boost.queries", q_out, true, &q_rhs, format!("(pi/2)*{q_in}*sqrt(k)*(1+2/sqrt(k))^2, k={k}"), pre),
    ]
}

/// One-level amplification ceiling: `Q₁ ≤ ⌈√N₁(1+1/k)/(2√k) − 1/2⌉`.
pub fn c1_ceiling(q1: &Integer, n1: u32, k: u64) -> BoundCheck {
    let coeff = q(k + 1, 2 * k);
    let radicand = pow2(n1) / Rational::from(k);
    let c = crate::numerics::surd::ceil_surd_minus_half(&coeff, &radicand);
    BoundCheck {
        name: "c1.ceiling".into(),
        lhs: q1.to_string(),
        rhs: format!("ceil(sqrt(2^{n1})(1+1/{k})/(2*sqrt({k})) - 1/2)"),
        rhs_approx: c.to_string(),
        holds: *q1 <= c,
        preconditions: k >= 2 && Integer::from(1) << n1 >= k,
    }
}

/// First-level checks: `E₁ ≤ 4√N₁(1+3/k)n₁/√k` and `Q₁ ≥ k+2`, both for `N₁ ≥ k¹⁰`.
pub fn c1_level(q1: &Integer, e1: &Integer, n1: u32, k: u64) -> Vec<BoundCheck> {
    let log_k = k.trailing_zeros();
    let pre = k.is_power_of_two() && k >= 2 && n1 >= 10 * log_k;
    let kq = Rational::from(k);
    let coeff = Rational::from(4u32) * (Rational::from(1) + Rational::from(3u32) / kq.clone()) * Rational::from(n1);
    let e = surd_check("c1.gates", e1, true, &coeff, &(pow2(n1) / kq), format!("4*sqrt(2^{n1})(1+3/{k})*{n1}/sqrt({k})"), pre);
    let q = BoundCheck {
        name: "c1.queries_lower".into(),
        lhs: q1.to_string(),
        rhs: format!("{k}+2"),
        rhs_approx: (k + 2).to_string(),
        holds: *q1 >= k + 2,
        preconditions: pre,
    };
    vec![e, q]
}

/// Recursion totals: `Q_r ≤ √(N/4k)(1+4/k)^r` and `E_r ≤ 4√(N/k)(1+6/k)^(2r−1)·n₁`.
pub fn recursion(q_r: &Integer, e_r: &Integer, n: u32, n1: u32, k: u64, r: u32, pre: bool) -> Vec<BoundCheck> {
    let kq = Rational::from(k);
    let qc = one_plus_pow(4, &kq, r);
    let ec = one_plus_pow(6, &kq, 2 * r - 1) * Rational::from(4 * u64::from(n1));
    vec![
        surd_check(
            "recursion.queries",
            q_r,
            true,
            &qc,
            &(pow2(n) / Rational::from(4 * k)),
            format!("sqrt(2^{n}/(4*{k}))(1+4/{k})^{r}"),
            pre,
        ),
        surd_check("recursion.gates", e_r, true, &ec, &(pow2(n) / kq), format!("4*sqrt(2^{n}/{k})(1+6/{k})^{}*{n1}", 2 * r - 1), pre),
    ]
}

/// Per-level lower bound `E_i ≥ √(N_i/4k)`.
pub fn level_gates_lower(level: usize, e_i: &Integer, n_i: u32, k: u64, pre: bool) -> BoundCheck {
    surd_check(
        &format!("level{level}.gates_lower"),
        e_i,
        false,
        &Rational::from(1),
        &(pow2(n_i) / Rational::from(4 * k)),
        format!("sqrt(2^{n_i}/(4*{k}))"),
        pre,
    )
}

/// Final query count against `(π/4)√N(1+4/√k)^e`.
pub fn final_queries(name: &str, q: &Integer, n: u32, k: &Real, e: u32, pre: bool, cache: &mut EvalCache) -> BoundCheck {
    let p = BOUND_PREC;
    let kv = k.enclose(p, cache);
    let one = Interval::from_u64(p, 1);
    let f = one.add(&Interval::from_u64(p, 4).div(&kv.sqrt())).powi(e);
    let rhs = Interval::pi(p).mul_pow2(-2).mul(&Interval::pow2(p, 0).mul_pow2(i64::from(n)).sqrt()).mul(&f);
    interval_check(name, q, true, &rhs, format!("(pi/4)*sqrt(2^{n})*(1+4/sqrt(k))^{e}, k={k}"), pre)
}

/// `(1+4/√k)^(r+2) ≤ 1+ε`, exact.
pub fn epsilon(sqrt_k: u64, r: u32, eps: f64) -> crate::Result<BoundCheck> {
    let holds = crate::numerics::params::eps_bound_holds(sqrt_k, r, eps)?;
    let lhs = (1.0 + 4.0 / sqrt_k as f64).powi(r as i32 + 2);
    Ok(BoundCheck {
        name: "epsilon".into(),
        lhs: format!("(1+4/{sqrt_k})^{}", r + 2),
        rhs: format!("1+{eps}"),
        rhs_approx: format!("{lhs:.12e}"),
        holds,
        preconditions: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c1_examples_at_twenty_bits() {
        let q1 = Integer::from(268);
        let c = c1_ceiling(&q1, 20, 4);
        assert_eq!(c.rhs_approx, "320");
        assert!(c.holds && c.preconditions);
        // E₁ from the build formula with w = 268, n = 20.
        let e1 = Integer::from(537 * 21 + 2 * 268 + 268 * 83);
        let v = c1_level(&q1, &e1, 20, 4);
        assert!(v.iter().all(|b| b.holds && b.preconditions));
        // 4·2^10·(7/4)·20/2 = 71680
        assert!(e1 < 71680);
    }

    #[test]
    fn gate_total_needs_a_round() {
        let b = amplification_gates(&Integer::new(), 3, &Integer::from(3), &Integer::from(4));
        assert!(!b.holds && !b.preconditions && b.ok());
        let b = amplification_gates(&Integer::from(1), 3, &Integer::from(2), &Integer::from(3 * 3 + 2 + 15));
        assert!(b.holds);
    }

    #[test]
    fn surd_bounds_are_tight_at_equality() {
        // 16 ≤ 1·√256 holds with equality, 17 does not.
        let r = pow2(8);
        assert!(surd_check("t", &Integer::from(16), true, &Rational::from(1), &r, String::new(), true).holds);
        assert!(!surd_check("t", &Integer::from(17), true, &Rational::from(1), &r, String::new(), true).holds);
    }

    #[test]
    fn boost_guard_without_enough_queries() {
        let mut cache = EvalCache::default();
        let v = boost(&Integer::from(1), &Integer::from(1), &Integer::from(4), &Real::ratio(4, 1), &mut cache);
        assert!(v[0].holds);
        assert!(!v[1].preconditions);
    }

    #[test]
    fn epsilon_check_uses_exact_arithmetic() {
        assert!(epsilon(64, 5, 1.0).unwrap().holds);
        assert!(!epsilon(4, 1, 1.0).unwrap().holds);
    }
}
