//! Address-marginal success probability of a stack of amplification levels.
//!
//! After exact amplification of an algorithm whose address register hits the
//! solution with probability `a`, the new level's good set (solution address
//! and fresh flag clear) has probability exactly `a'`. The address alone hits
//! the solution with probability
//!
//! ```text
//! g = a' + (1 - a') (a - ã) / (1 - ã),      ã = sin²(arcsin(√a') / (2w + 1)),
//! ```
//!
//! because the rotation never leaves span{|G>, |B>} and the flag-set solution
//! component `a - ã` of the start state lives inside |B>. That value feeds the
//! next level, so it is tracked here exactly (as a recipe re-evaluable at any
//! precision) rather than measured.

use rug::{Integer, Rational};

use super::interval::Interval;
use super::real::{Enclose, EvalCache, Real};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainStep {
    /// Uniform prefix of `bits` address wires: probability scales by `2^-bits`.
    Dilute { bits: u32 },
    /// Exact amplification to `target` with `rounds` iterations.
    Amplify { target: Real, rounds: Integer },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuccessChain {
    base: Real,
    steps: Vec<ChainStep>,
}

impl SuccessChain {
    pub fn new(base: Real) -> Self {
        SuccessChain { base, steps: Vec::new() }
    }

    pub fn base(&self) -> &Real {
        &self.base
    }

    pub fn steps(&self) -> &[ChainStep] {
        &self.steps
    }

    pub fn diluted(&self, bits: u32) -> Self {
        let mut next = self.clone();
        if bits > 0 {
            next.steps.push(ChainStep::Dilute { bits });
        }
        next
    }

    pub fn amplified(&self, target: Real, rounds: Integer) -> Self {
        let mut next = self.clone();
        next.steps.push(ChainStep::Amplify { target, rounds });
        next
    }

    pub fn to_f64(&self) -> f64 {
        self.enclose(160, &mut EvalCache::default()).midpoint_f64()
    }
}

impl Enclose for SuccessChain {
    fn enclose(&self, prec: u32, cache: &mut EvalCache) -> Interval {
        let mut g = self.base.enclose(prec, cache);
        for step in &self.steps {
            g = match step {
                ChainStep::Dilute { bits } => g.mul_pow2(-i64::from(*bits)),
                ChainStep::Amplify { target, rounds } => {
                    if target.is_one() {
                        Interval::from_u64(prec, 1)
                    } else if *rounds == 0 {
                        // w = 0 only when a = a'; the state is untouched.
                        g
                    } else {
                        let t = target.enclose(prec, cache);
                        let a_tilde = cache.a_tilde(target, rounds, prec);
                        let one = Interval::from_u64(prec, 1);
                        let leak = g.sub(&a_tilde).div(&one.sub(&a_tilde));
                        t.add(&one.sub(&t).mul(&leak)).clamp(0.0, 1.0)
                    }
                }
            };
        }
        g
    }

    fn exact(&self) -> Option<Rational> {
        let mut cur = self.base.exact();
        for step in &self.steps {
            cur = match step {
                ChainStep::Dilute { bits } => cur.map(|c| c / (Integer::from(1) << *bits)),
                ChainStep::Amplify { target, .. } if target.is_one() => Some(Rational::from(1)),
                ChainStep::Amplify { rounds, .. } if *rounds == 0 => cur,
                ChainStep::Amplify { .. } => None,
            };
        }
        cur
    }

    /// Amplification never lands below its target, so the newest exact
    /// target (diluted by later prefixes) bounds the value from below.
    fn exact_lower_bound(&self) -> Option<Rational> {
        let mut cur = self.base.exact();
        for step in &self.steps {
            cur = match step {
                ChainStep::Dilute { bits } => cur.map(|c| c / (Integer::from(1) << *bits)),
                ChainStep::Amplify { rounds, .. } if *rounds == 0 => cur,
                ChainStep::Amplify { target, .. } => target.exact(),
            };
        }
        cur
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct two-dimensional rotation model used as an oracle for the leak term.
    fn rotation_model(a: f64, a_prime: f64, w: u32) -> f64 {
        let theta = a_prime.sqrt().asin() / f64::from(2 * w + 1);
        let a_tilde = theta.sin().powi(2);
        // Start: good (x=1, flag 0) weight ã; x=1 with flag 1 weight a-ã; x=0 weight 1-a.
        let b_x1 = (a - a_tilde) / (1.0 - a_tilde);
        let final_g = ((2 * w + 1) as f64 * theta).sin().powi(2);
        final_g + (1.0 - final_g) * b_x1
    }

    #[test]
    fn matches_rotation_model() {
        let chain = SuccessChain::new(Real::pow2_neg(4)).amplified(Real::ratio(1, 4), Integer::from(1));
        let expect = rotation_model(1.0 / 16.0, 0.25, 1);
        assert!((chain.to_f64() - expect).abs() < 1e-14, "{} vs {}", chain.to_f64(), expect);
        assert!(chain.to_f64() > 0.25);
        assert!(chain.exact().is_none());
    }

    #[test]
    fn boost_to_one_is_exact() {
        let chain =
            SuccessChain::new(Real::pow2_neg(4)).amplified(Real::ratio(1, 4), Integer::from(1)).amplified(Real::one(), Integer::from(1));
        assert_eq!(chain.exact(), Some(Rational::from(1)));
    }

    #[test]
    fn dilution_is_exact_on_exact_bases() {
        let chain = SuccessChain::new(Real::ratio(1, 4)).diluted(3);
        assert_eq!(chain.exact(), Some(Rational::from((1, 32))));
    }
}
