//! Property suites behind `gatesearch verify`.
//!
//! Each suite re-derives a result by an independent route and records every
//! disagreement together with its inputs. Randomized cases draw from a ChaCha
//! stream seeded by [`VerifyConfig::seed`], so identical configs produce
//! identical reports.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Integer, Rational};

use crate::circuit::{read_jsonl, rotation, write_jsonl, zero_reflection_cost, Circuit, QueryStyle};
use crate::constructions::{amplify_exact, build_c1, build_recursive, build_schedule, hadamard_base, BuildMode, RecursionSchedule};
use crate::error::{bail, Error, Result};
use crate::estimator::{check_bounds, BoundKind, Instance};
use crate::numerics::surd::{ceil_surd_minus_half, cmp_surd};
use crate::numerics::{check_fact_ceiling, check_fact_iterlog, compute_w, log_star, EvalCache, Magnitude, Real};
use crate::oracle::{make_unique_database, Database};
use crate::simulator::{good_probability, run, verify_reflection_equivalence, SimConfig, StateVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Numerics,
    Circuit,
    Oracle,
    Simulator,
    Constructions,
    Estimator,
    Facts,
}

impl Suite {
    pub const ALL: [Suite; 7] =
        [Suite::Numerics, Suite::Circuit, Suite::Oracle, Suite::Simulator, Suite::Constructions, Suite::Estimator, Suite::Facts];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Numerics => "numerics",
            Suite::Circuit => "circuit",
            Suite::Oracle => "oracle",
            Suite::Simulator => "simulator",
            Suite::Constructions => "constructions",
            Suite::Estimator => "estimator",
            Suite::Facts => "facts",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match Suite::ALL.iter().find(|x| x.name() == s) {
            Some(x) => Ok(*x),
            None => bail!(Config, "unknown suite '{s}'"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Suites to run; empty means all.
    pub only: Vec<Suite>,
    pub seed: u64,
    /// Shifts the expected gate count of every amplification by one, to prove
    /// the harness notices.
    pub inject_fault: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { only: vec![], seed: 1, inject_fault: false }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub suite: Suite,
    pub cases: usize,
    pub failures: Vec<String>,
    pub seconds: f64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Collects case outcomes for one suite.
struct Tally {
    cases: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn check_result(&mut self, r: Result<bool>, what: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.check(ok, what),
            Err(e) => {
                self.cases += 1;
                self.failures.push(format!("{}: {e}", what()));
            }
        }
    }
}

pub fn run_suites(cfg: &VerifyConfig) -> Vec<SuiteResult> {
    let selected: Vec<Suite> = if cfg.only.is_empty() { Suite::ALL.to_vec() } else { cfg.only.clone() };
    selected
        .into_iter()
        .map(|suite| {
            let start = Instant::now();
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (suite as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let mut t = Tally { cases: 0, failures: vec![] };
            match suite {
                Suite::Numerics => numerics(&mut t),
                Suite::Circuit => circuit(&mut t, &mut rng),
                Suite::Oracle => oracle(&mut t, &mut rng),
                Suite::Simulator => simulator(&mut t, &mut rng),
                Suite::Constructions => constructions(&mut t, &mut rng, cfg.inject_fault),
                Suite::Estimator => estimator(&mut t),
                Suite::Facts => facts(&mut t, &mut rng),
            }
            SuiteResult { suite, cases: t.cases, failures: t.failures, seconds: start.elapsed().as_secs_f64() }
        })
        .collect()
}

/// Round counts against their closed-form bound, exact landing in `f64`,
/// and the surd comparison against a brute-force integer check.
fn numerics(t: &mut Tally) {
    for n in 1..=24u32 {
        for k in [2u64, 3, 4, 8, 16, 64] {
            if k > 1 << n {
                continue;
            }
            let w = compute_w(&Real::pow2_neg(n), &Real::ratio(1, k as i64));
            let bound = ceil_surd_minus_half(&Rational::from((k + 1, 2 * k)), &Rational::from((Integer::from(1) << n, Integer::from(k))));
            t.check_result(w.map(|w| w <= bound), || format!("round bound n={n} k={k}"));
        }
    }
    // ã = sin²(asin√a′/(2w+1)) ≤ a, and (2w+1) rounds land on a′.
    for n in 1..=16u32 {
        for den in [1i64, 2, 4, 8, 3] {
            let a = (-(n as f64)).exp2();
            let a_prime = 1.0 / den as f64;
            if a_prime < a {
                continue;
            }
            let w = compute_w(&Real::pow2_neg(n), &Real::ratio(1, den));
            t.check_result(
                w.map(|w| {
                    let odd = 2.0 * w.to_f64() + 1.0;
                    let theta = a_prime.sqrt().asin() / odd;
                    let a_tilde = theta.sin().powi(2);
                    let fewer = (a.sqrt().asin() * (odd - 2.0)).sin().powi(2);
                    a_tilde <= a * (1.0 + 1e-12) && ((odd * theta).sin().powi(2) - a_prime).abs() < 1e-12 && (w == 0 || fewer < a_prime)
                }),
                || format!("landing n={n} a'=1/{den}"),
            );
        }
    }
    for lhs in -6i64..=6 {
        for c in -3i64..=3 {
            for d in 0u32..=12 {
                let exact = Rational::from(lhs * lhs).cmp(&Rational::from(c * c * i64::from(d)));
                let rhs_sign = c.signum() * i64::from(d > 0);
                let expect = match (lhs.signum(), rhs_sign) {
                    (l, r) if l != r || l == 0 => lhs.signum().cmp(&rhs_sign).then(std::cmp::Ordering::Equal),
                    (1, _) => exact,
                    _ => exact.reverse(),
                };
                let got = cmp_surd(&Rational::from(lhs), &Rational::from(c), &Rational::from(d));
                t.check(got == expect, || format!("cmp_surd {lhs} vs {c}*sqrt({d}): {got:?}, expected {expect:?}"));
            }
        }
    }
    for (m, want) in [(Magnitude::pow2(1), 1u32), (Magnitude::pow2(2), 2), (Magnitude::pow2(16), 4), (Magnitude::pow2(65536), 5)] {
        t.check_result(log_star(&m).map(|v| v == want), || format!("log_star {m:?} = {want}"));
    }
}

fn random_circuit(rng: &mut ChaCha8Rng, wires: usize, len: usize) -> Result<Circuit> {
    let mut b = Circuit::builder(wires);
    for _ in 0..len {
        match rng.gen_range(0..5) {
            0 => {
                b.h(rng.gen_range(0..wires))?;
            }
            1 => {
                let m = rotation(rng.gen_range(0.0..1.0));
                b.append_one_qubit(m, rng.gen_range(0..wires))?;
            }
            2 if wires >= 3 => {
                let mut w: Vec<usize> = (0..wires).collect();
                for i in 0..3 {
                    let j = rng.gen_range(i..wires);
                    w.swap(i, j);
                }
                b.append_toffoli(w[0], w[1], w[2])?;
            }
            3 if wires >= 3 => {
                let style = if rng.gen() { QueryStyle::Standard } else { QueryStyle::Signed };
                b.append_query(&[0, 1], 2, style)?;
            }
            _ => {
                let k = rng.gen_range(1..=wires);
                b.append_zero_reflection(&(0..k).collect::<Vec<_>>())?;
            }
        }
    }
    Ok(b.build())
}

/// Inversion, count additivity and the JSON round trip on random circuits.
fn circuit(t: &mut Tally, rng: &mut ChaCha8Rng) {
    let db = Database::new(2, vec![1]).expect("valid database");
    for case in 0..40 {
        let wires = rng.gen_range(3..=6);
        let len = rng.gen_range(1..=30);
        let c = match random_circuit(rng, wires, len) {
            Ok(c) => c,
            Err(e) => {
                t.check(false, || format!("case {case}: build failed: {e}"));
                continue;
            }
        };
        let inv = c.invert();
        t.check(inv.counts() == c.counts() && inv.invert() == c, || format!("case {case}: inverse counts/involution"));
        let res = (|| -> Result<bool> {
            let input = StateVector::basis(wires, rng.gen_range(0..1 << wires), &SimConfig::default())?;
            let mut s = input.clone();
            s.apply(&c, &db)?;
            s.apply(&inv, &db)?;
            Ok(s.max_distance(&input) < 1e-10)
        })();
        t.check_result(res, || format!("case {case}: C⁻¹C ≠ I (wires={wires}, len={len})"));
        let res = (|| -> Result<bool> {
            let mut buf = Vec::new();
            write_jsonl(&c, None, &mut buf)?;
            let (back, _) = read_jsonl(&buf[..])?;
            let mut again = Vec::new();
            write_jsonl(&back, None, &mut again)?;
            Ok(back == c && back.counts() == c.counts() && again == buf)
        })();
        t.check_result(res, || format!("case {case}: export round trip"));
    }
    for m in 2..=12usize {
        t.check(zero_reflection_cost(m) == 4 * m as u64 - 1, || format!("reflection cost m={m}"));
    }
}

/// Hex round trip and the self-inverse query.
fn oracle(t: &mut Tally, rng: &mut ChaCha8Rng) {
    for case in 0..50 {
        let n = rng.gen_range(1..=12u32);
        let sol = rng.gen_range(0..1u64 << n);
        let res = (|| -> Result<bool> {
            let db = make_unique_database(n, sol)?;
            let back = Database::from_hex(&db.to_hex(), Some(n))?;
            Ok(back == db && back.solution() == Some(sol) && (0..db.size()).filter(|&i| db.bit(i)).count() == 1)
        })();
        t.check_result(res, || format!("case {case}: n={n} t={sol}"));
    }
    for case in 0..20 {
        let n = rng.gen_range(2..=6u32);
        let sol = rng.gen_range(0..1u64 << n);
        let res = (|| -> Result<bool> {
            let db = make_unique_database(n, sol)?;
            let wires = n as usize + 1;
            let address: Vec<usize> = (0..n as usize).collect();
            let mut b = Circuit::builder(wires);
            for w in 0..wires {
                b.h(w)?;
            }
            let prep = b.build();
            let mut q = Circuit::builder(wires);
            q.append_query(&address, n as usize, QueryStyle::Standard)?;
            let q = q.build();
            let s0 = run(&prep, &db, &SimConfig::default())?;
            let mut s = s0.clone();
            s.apply(&q, &db)?;
            s.apply(&q, &db)?;
            Ok(s.max_distance(&s0) < 1e-12)
        })();
        t.check_result(res, || format!("case {case}: query twice n={n} t={sol}"));
    }
}

/// Norm preservation and the Toffoli-ladder equivalence.
fn simulator(t: &mut Tally, rng: &mut ChaCha8Rng) {
    let db = Database::new(2, vec![2]).expect("valid database");
    for case in 0..30 {
        let wires = rng.gen_range(3..=8);
        let res = (|| -> Result<bool> {
            let c = random_circuit(rng, wires, 40)?;
            let amps: Vec<Complex64> =
                (0..1usize << wires).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            let mut s = StateVector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect())?;
            s.apply(&c, &db)?;
            Ok((s.norm_sqr() - 1.0).abs() < 1e-10)
        })();
        t.check_result(res, || format!("case {case}: norm drift on {wires} wires"));
    }
    for m in 1..=8 {
        t.check_result(verify_reflection_equivalence(m), || format!("ladder equivalence m={m}"));
    }
}

/// Built counts against the closed-form model, and simulated success against `a_known`.
fn constructions(t: &mut Tally, rng: &mut ChaCha8Rng, inject_fault: bool) {
    let mut cache = EvalCache::default();
    let shift = i32::from(inject_fault);
    for n in 2..=8u32 {
        for den in [1i64, 2, 4, 8] {
            if den > 1 << n {
                continue;
            }
            let res = (|| -> Result<bool> {
                let base = hadamard_base(n, BuildMode::Circuit)?;
                let alg = amplify_exact(&base, &Real::ratio(1, den), &mut cache)?;
                let w = alg.rounds().cloned().unwrap_or_default();
                let e_in = base.gates().clone();
                let n_tot = Integer::from(base.total_wires());
                let odd = Integer::from(2 * &w) + 1u32;
                let gates = (&odd * (e_in + 1u32)) + Integer::from(2 * &w) + w.clone() * (4 * n_tot + 3u32) + shift;
                let queries = odd * base.queries() + &w;
                let mut ok = alg.gates() == &gates && alg.queries() == &queries;
                for _ in 0..3 {
                    let sol = rng.gen_range(0..1u64 << n);
                    let db = make_unique_database(n, sol)?;
                    let st = run(alg.require_circuit()?, &db, &SimConfig::default())?;
                    ok &= (good_probability(&st, &alg.good_set(&db))? - 1.0 / den as f64).abs() < 1e-9;
                }
                Ok(ok)
            })();
            t.check_result(res, || format!("amplify n={n} a'=1/{den}{}", if inject_fault { " (fault injected)" } else { "" }));
        }
    }
    let res = (|| -> Result<bool> {
        let s = RecursionSchedule::with_widths(vec![4, 8], 4)?;
        let p = build_recursive(&s, true, BuildMode::Circuit, &mut cache)?;
        let c = build_recursive(&s, true, BuildMode::CountOnly, &mut cache)?;
        let db = make_unique_database(8, rng.gen_range(0..256))?;
        let b = p.last();
        let st = run(b.require_circuit()?, &db, &SimConfig::default())?;
        Ok(b.queries() == &22 && c.last().counts() == b.counts() && (good_probability(&st, &b.good_set(&db))? - 1.0).abs() < 1e-9)
    })();
    t.check_result(res, || "desk pipeline [4, 8], k=4, boosted".into());
}

/// Count-only against built counts, and the bound suites on the standard instances.
fn estimator(t: &mut Tally) {
    let mut cache = EvalCache::default();
    for (n, k) in [(6u32, 4i64), (8, 4), (10, 16)] {
        let res = (|| -> Result<bool> {
            let built = build_c1(n, &Real::ratio(k, 1), BuildMode::Circuit, &mut cache)?;
            let counted = build_c1(n, &Real::ratio(k, 1), BuildMode::CountOnly, &mut cache)?;
            Ok(built.counts() == counted.counts() && &built.require_circuit()?.counts() == built.counts())
        })();
        t.check_result(res, || format!("c1 agreement n={n} k={k}"));
    }
    for n in [1024u32, 4096] {
        for k in [4u64, 8, 16] {
            let Ok(r_max) = log_star(&Magnitude::pow2(u64::from(n))) else { continue };
            for r in 1..=r_max.min(3) {
                if !build_schedule(n, k, r, false).is_ok_and(|s| s.preconditions_hold()) {
                    continue;
                }
                let inst = Instance { n, k, r, eps: None, relaxed: false };
                for kind in [BoundKind::Amplification, BoundKind::Boost, BoundKind::Lift, BoundKind::Recursion] {
                    let res = check_bounds(kind, &inst, &mut cache).map(|v| v.iter().all(|b| b.ok()));
                    t.check_result(res, || format!("{kind:?} n={n} k={k} r={r}"));
                }
            }
        }
    }
}

/// Both numeric facts over `k ≤ 64`, with sampled `α` up to 10⁶.
fn facts(t: &mut Tally, rng: &mut ChaCha8Rng) {
    for k in 2..=64u64 {
        let mut alphas: Vec<Rational> = (k..k + 20).map(Rational::from).collect();
        alphas.extend((0..40).map(|_| Rational::from((rng.gen_range(2 * k..=2_000_000), 2u64))));
        for a in alphas {
            t.check_result(check_fact_ceiling(k, &a).map(|f| f.holds), || format!("ceiling fact k={k} alpha={a}"));
        }
    }
    for k in 3..=64u64 {
        for i in 2..=32u64 {
            t.check_result(check_fact_iterlog(k, i).map(|f| f.holds), || format!("iterated-log fact k={k} i={i}"));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_and_fault_is_caught() {
        let only = vec![Suite::Constructions];
        let ok = run_suites(&VerifyConfig { only: only.clone(), ..Default::default() });
        assert!(ok[0].passed(), "{:?}", ok[0].failures);
        let bad = run_suites(&VerifyConfig { only, inject_fault: true, ..Default::default() });
        assert!(!bad[0].passed());
    }

    #[test]
    fn quick_suites_pass() {
        let cfg = VerifyConfig { only: vec![Suite::Numerics, Suite::Circuit, Suite::Oracle, Suite::Facts], seed: 7, inject_fault: false };
        for r in run_suites(&cfg) {
            assert!(r.passed(), "{}: {:?}", r.suite, r.failures);
            assert!(r.cases > 0);
        }
        assert_eq!("facts".parse::<Suite>().unwrap(), Suite::Facts);
        assert!("nope".parse::<Suite>().is_err());
    }
}
