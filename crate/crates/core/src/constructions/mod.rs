//! Search algorithms as circuits, with exactly tracked counts and success
//! probabilities.
//!
//! Every builder works in two modes. [`BuildMode::CountOnly`] runs the count
//! recurrences alone and scales to any database size; [`BuildMode::Circuit`]
//! also materializes gates and checks that the circuit's own tally matches.
//!
//! Wire layout: address wires `[0, n)` (wire 0 is the most significant bit),
//! then one flag wire per amplification level in construction order.

mod pipelines;
mod schedule;

use std::cmp::Ordering;

use rug::{Integer, Rational};
use serde::Serialize;

use crate::circuit::Extension;
use crate::circuit::{dagger, rotation, Circuit, CountReport, Gate, QueryStyle};
use crate::error::{bail, Error, Result};
use crate::estimator::bounds::{self, BoundCheck, LiftInstance};
use crate::numerics::amplification::amplification_schedule_with;
use crate::numerics::{compute_w_cached, BigCount, Enclose, EvalCache, Real, SuccessChain};
use crate::oracle::Database;
use crate::simulator::GoodSet;

pub use pipelines::{build_recursive, build_recursive_levels, loglog_recipe, main_result, MainMode, Pipeline};
pub use schedule::{build_schedule, RecursionSchedule};

/// Largest circuit (in gates) the builders will materialize.
pub const MAX_BUILD_GATES: u64 = 1 << 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuildMode {
    Circuit,
    CountOnly,
}

/// A named hypothesis and whether the instance meets it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

impl Claim {
    pub fn new(name: &str, holds: bool, detail: impl Into<String>) -> Self {
        Claim { name: name.into(), holds, detail: detail.into() }
    }
}

#[derive(Clone, Debug)]
pub struct SearchAlgorithm {
    n: u32,
    flags: u32,
    a_known: Real,
    success: SuccessChain,
    counts: CountReport,
    rounds: Option<Integer>,
    circuit: Option<Circuit>,
    /// Hypotheses of the statements whose bounds were checked on this instance.
    pub claims: Vec<Claim>,
    pub bounds: Vec<BoundCheck>,
}

impl SearchAlgorithm {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn num_flags(&self) -> u32 {
        self.flags
    }

    pub fn total_wires(&self) -> u64 {
        u64::from(self.n) + u64::from(self.flags)
    }

    pub fn address_wires(&self) -> Vec<usize> {
        (0..self.n as usize).collect()
    }

    pub fn flag_wires(&self) -> Vec<usize> {
        let n = self.n as usize;
        (n..n + self.flags as usize).collect()
    }

    /// Good-set probability of the newest level.
    pub fn a_known(&self) -> &Real {
        &self.a_known
    }

    /// Probability that the address register alone holds the solution.
    pub fn success(&self) -> &SuccessChain {
        &self.success
    }

    pub fn counts(&self) -> &CountReport {
        &self.counts
    }

    pub fn queries(&self) -> &Integer {
        self.counts.queries.as_integer()
    }

    pub fn gates(&self) -> &Integer {
        self.counts.elementary_gates.as_integer()
    }

    /// Rounds of the most recent amplification.
    pub fn rounds(&self) -> Option<&Integer> {
        self.rounds.as_ref()
    }

    pub fn circuit(&self) -> Option<&Circuit> {
        self.circuit.as_ref()
    }

    pub fn require_circuit(&self) -> Result<&Circuit> {
        self.circuit.as_ref().ok_or_else(|| Error::Config("algorithm was built in count-only mode".into()))
    }

    pub fn preconditions_hold(&self) -> bool {
        self.claims.iter().all(|c| c.holds)
    }

    /// True unless some bound fails on an instance meeting its hypotheses.
    pub fn bounds_ok(&self) -> bool {
        self.bounds.iter().all(BoundCheck::ok)
    }

    /// Address equals a solution and the newest flag reads 0.
    pub fn good_set<'a>(&self, db: &'a Database) -> GoodSet<'a> {
        let flag_wires = if self.flags == 0 { vec![] } else { vec![(self.n + self.flags - 1) as usize] };
        GoodSet { address_wires: self.address_wires(), flag_wires, database: db }
    }

    pub fn extension(&self) -> Extension {
        Extension { a_known: self.a_known.to_decimal(40), address_wires: self.address_wires(), flag_wires: self.flag_wires() }
    }

    fn verify_counts(self) -> Result<Self> {
        if let Some(c) = &self.circuit {
            let tally = c.counts();
            if tally != self.counts {
                bail!(
                    Validation,
                    "count model {} queries / {} gates disagrees with circuit {} / {}",
                    self.counts.queries,
                    self.counts.elementary_gates,
                    tally.queries,
                    tally.elementary_gates
                );
            }
        }
        Ok(self)
    }
}

fn check_build_size(gates: &Integer) -> Result<u64> {
    match gates.to_u64() {
        Some(g) if g <= MAX_BUILD_GATES => Ok(g),
        _ => bail!(Resource, "circuit would have {gates} gates (limit {MAX_BUILD_GATES}); use count-only mode"),
    }
}

/// Certified comparison of a parameter with a rational.
pub(crate) fn cmp_real(x: &Real, y: &Rational, cache: &mut EvalCache) -> Option<Ordering> {
    if let Some(v) = x.as_exact() {
        return Some(v.cmp(y));
    }
    let iv = x.enclose(256, cache);
    iv.certified_cmp(&crate::numerics::Interval::from_rational(256, y))
}

/// `H^⊗n`: success probability `2^-n`, no flags.
pub fn hadamard_base(n: u32, mode: BuildMode) -> Result<SearchAlgorithm> {
    if n == 0 {
        bail!(Config, "address width must be at least 1");
    }
    let circuit = match mode {
        BuildMode::CountOnly => None,
        BuildMode::Circuit => {
            check_build_size(&Integer::from(n))?;
            let mut b = Circuit::builder(n as usize);
            for w in 0..n as usize {
                b.h(w)?;
            }
            Some(b.build())
        }
    };
    let a = Real::pow2_neg(n);
    Ok(SearchAlgorithm {
        n,
        flags: 0,
        a_known: a.clone(),
        success: SuccessChain::new(a),
        counts: CountReport::new(0u64, u64::from(n)),
        rounds: None,
        circuit,
        claims: vec![],
        bounds: vec![],
    })
}

/// Exact amplification of `alg` to good-set probability exactly `a_prime`,
/// adding one flag wire.
///
/// The input success probability is the address-marginal one of `alg`
/// (inner flags unconstrained), which is at least `alg.a_known()`.
pub fn amplify_exact(alg: &SearchAlgorithm, a_prime: &Real, cache: &mut EvalCache) -> Result<SearchAlgorithm> {
    if let Some(Ordering::Greater) = cmp_real(a_prime, &Rational::from(1), cache) {
        bail!(Domain, "target probability {a_prime} exceeds 1");
    }
    if let Some(a) = alg.a_known.as_exact() {
        if let Some(Ordering::Less) = cmp_real(a_prime, a, cache) {
            bail!(Domain, "known probability {a} exceeds target {a_prime}");
        }
    }
    let w = compute_w_cached(&alg.success, a_prime, cache)?;
    let n_tot = alg.total_wires();
    let odd = Integer::from(&w * 2u32) + 1u32;
    let q_in = alg.queries();
    let e_in = alg.gates();
    let queries = Integer::from(&odd * q_in) + &w;
    let gates = (&odd * Integer::from(e_in + 1u32)) + Integer::from(&w * 2u32) + (&w * Integer::from(4 * n_tot + 3));

    let circuit = match &alg.circuit {
        None => None,
        Some(a) => {
            check_build_size(&(Integer::from(&queries) + &gates))?;
            let rounds = w.to_usize().expect("checked by the size limit");
            let sched = amplification_schedule_with(&alg.success, a_prime, w.clone(), cache)?;
            let r = rotation(sched.ratio);
            let flag = n_tot as usize;
            let address = alg.address_wires();
            let all: Vec<usize> = (0..=flag).collect();
            let inv = a.invert();
            let mut b = Circuit::builder(flag + 1);
            b.append_circuit(a)?.append_one_qubit(r, flag)?;
            for _ in 0..rounds {
                b.append_query(&address, flag, QueryStyle::Signed)?;
                b.append_one_qubit(dagger(&r), flag)?.append_circuit(&inv)?;
                b.append_zero_reflection(&all)?;
                b.append_circuit(a)?.append_one_qubit(r, flag)?;
            }
            Some(b.build())
        }
    };

    let mut out = SearchAlgorithm {
        n: alg.n,
        flags: alg.flags + 1,
        a_known: a_prime.clone(),
        success: alg.success.amplified(a_prime.clone(), w.clone()),
        counts: CountReport::new(queries, gates.clone()),
        rounds: Some(w.clone()),
        circuit,
        claims: vec![],
        bounds: vec![bounds::amplification_gates(&w, n_tot, e_in, &gates)],
    };
    out = out.verify_counts()?;
    Ok(out)
}

/// `H^⊗n1` amplified to exactly `1/k`.
pub fn build_c1(n1: u32, k: &Real, mode: BuildMode, cache: &mut EvalCache) -> Result<SearchAlgorithm> {
    let base = hadamard_base(n1, mode)?;
    let target = k.recip()?;
    if let Some(Ordering::Less) = cmp_real(&target, base.a_known.as_exact().unwrap(), cache) {
        bail!(Domain, "1/k = {target} is below the base probability 2^-{n1}");
    }
    amplify_exact(&base, &target, cache)
}

/// Widens `g` from `m = g.n()` to `n` address bits with a uniform prefix and
/// amplifies back to exactly `1/k`.
pub fn lift(g: &SearchAlgorithm, n: u32, k: &Real, cache: &mut EvalCache) -> Result<SearchAlgorithm> {
    let m = g.n;
    if n <= m {
        bail!(Config, "lift needs n > m, got n = {n}, m = {m}");
    }
    let d = n - m;
    let target = k.recip()?;

    let claims = lift_claims(g, n, k, cache);

    let circuit = match &g.circuit {
        None => None,
        Some(c) => {
            let du = d as usize;
            let mut b = Circuit::builder(c.num_wires() + du);
            for w in 0..du {
                b.h(w)?;
            }
            for gate in c.gates() {
                let moved = match gate {
                    Gate::Query { address, target, style } => Gate::Query {
                        address: (0..du).chain(address.iter().map(|&w| w + du)).collect(),
                        target: target + du,
                        style: *style,
                    },
                    other => other.remap(|w| w + du),
                };
                b.push(moved)?;
            }
            let anc: Vec<usize> = c.ancilla().iter().map(|&w| w + du).collect();
            b.mark_ancilla(&anc)?;
            Some(b.build())
        }
    };
    let a = SearchAlgorithm {
        n,
        flags: g.flags,
        a_known: g.a_known.scale(&Rational::from((Integer::from(1), Integer::from(1) << d))),
        success: g.success.diluted(d),
        counts: CountReport::new(g.counts.queries.clone(), g.counts.elementary_gates.clone() + BigCount::from(u64::from(d))),
        rounds: None,
        circuit,
        claims: vec![],
        bounds: vec![],
    }
    .verify_counts()?;

    let mut out = amplify_exact(&a, &target, cache)?;
    let pre = claims.iter().all(|c| c.holds);
    out.bounds.extend(bounds::lift(
        &LiftInstance { q_in: g.queries(), e_in: g.gates(), q_out: out.queries(), e_out: out.gates(), m, n, k, preconditions: pre },
        cache,
    ));
    out.claims = claims;
    Ok(out)
}

fn lift_claims(g: &SearchAlgorithm, n: u32, k: &Real, cache: &mut EvalCache) -> Vec<Claim> {
    let m = g.n;
    let d = n - m;
    let k_ge_4 = cmp_real(k, &Rational::from(4), cache).is_some_and(|o| o != Ordering::Less);
    // n ≥ m + 2 log k  ⟺  2^(n−m) ≥ k².
    let room = {
        let kk = k.as_exact().map(|v| Rational::from(v.square_ref()));
        match kk {
            Some(k2) => Integer::from(1) << d >= k2,
            None => {
                let p = 256;
                let kv = k.enclose(p, cache);
                crate::numerics::Interval::pow2(p, i64::from(d)).certified_cmp(&kv.mul(&kv)).is_some_and(|o| o != Ordering::Less)
            }
        }
    };
    let q_big = cmp_real(k, &Rational::from(Integer::from(g.queries() - 2u32)), cache).is_some_and(|o| o != Ordering::Greater);
    let g_known = match k.recip() {
        Ok(t) => match (g.a_known.as_exact(), t.as_exact()) {
            (Some(a), Some(t)) => a >= t,
            _ => g.a_known == t,
        },
        Err(_) => false,
    };
    vec![
        Claim::new("k>=4", k_ge_4, format!("k = {k}")),
        Claim::new("n>=m+2logk", room, format!("n = {n}, m = {m}, k = {k}")),
        Claim::new("Q>=k+2", q_big, format!("Q = {}, k = {k}", g.queries())),
        Claim::new("a>=1/k", g_known, format!("a = {}", g.a_known)),
    ]
}

/// Amplifies an algorithm with known probability `1/k` to certainty.
pub fn boost_to_one(alg: &SearchAlgorithm, k: &Real, cache: &mut EvalCache) -> Result<SearchAlgorithm> {
    if alg.a_known != k.recip()? {
        bail!(Domain, "boost needs known probability exactly 1/k = 1/{k}, got {}", alg.a_known);
    }
    let mut out = amplify_exact(alg, &Real::one(), cache)?;
    let w = out.rounds.clone().unwrap_or_default();
    let (q_in, q_out) = (alg.queries().clone(), out.queries().clone());
    out.bounds.extend(bounds::boost(&w, &q_in, &q_out, k, cache));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::make_unique_database;
    use crate::simulator::{good_probability, run, SimConfig};

    fn measure(alg: &SearchAlgorithm, n: u32, t: u64) -> f64 {
        let db = make_unique_database(n, t).unwrap();
        let s = run(alg.circuit().unwrap(), &db, &SimConfig::default()).unwrap();
        good_probability(&s, &alg.good_set(&db)).unwrap()
    }

    fn k4() -> Real {
        Real::ratio(4, 1)
    }

    #[test]
    fn hadamard_base_counts() {
        let a = hadamard_base(2, BuildMode::Circuit).unwrap();
        assert_eq!(a.a_known(), &Real::ratio(1, 4));
        assert_eq!(a.counts(), &CountReport::new(0u64, 2u64));
        assert!((measure(&a, 2, 3) - 0.25).abs() < 1e-15);
        let a = hadamard_base(10, BuildMode::CountOnly).unwrap();
        assert_eq!(a.a_known(), &Real::pow2_neg(10));
        assert!(hadamard_base(0, BuildMode::CountOnly).is_err());
    }

    #[test]
    fn grover_on_four_items() {
        let mut cache = EvalCache::default();
        let base = hadamard_base(2, BuildMode::Circuit).unwrap();
        let g = amplify_exact(&base, &Real::one(), &mut cache).unwrap();
        assert_eq!(g.rounds().unwrap(), &1);
        assert_eq!(g.queries(), &1);
        for t in 0..4 {
            assert!((measure(&g, 2, t) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn half_to_one_uses_a_real_rotation() {
        let mut cache = EvalCache::default();
        let base = hadamard_base(1, BuildMode::Circuit).unwrap();
        let g = amplify_exact(&base, &Real::one(), &mut cache).unwrap();
        assert_eq!(g.rounds().unwrap(), &1);
        assert!((measure(&g, 1, 1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_rounds_when_already_there() {
        let mut cache = EvalCache::default();
        let base = hadamard_base(2, BuildMode::Circuit).unwrap();
        let g = amplify_exact(&base, &Real::ratio(1, 4), &mut cache).unwrap();
        assert_eq!(g.rounds().unwrap(), &0);
        assert_eq!(g.counts(), &CountReport::new(0u64, 3u64));
        assert!((measure(&g, 2, 1) - 0.25).abs() < 1e-12);
        assert!(!g.bounds[0].preconditions);
    }

    #[test]
    fn amplify_rejects_lower_target() {
        let mut cache = EvalCache::default();
        let base = hadamard_base(1, BuildMode::CountOnly).unwrap();
        assert!(matches!(amplify_exact(&base, &Real::ratio(1, 4), &mut cache), Err(Error::Domain(_))));
        assert!(matches!(build_c1(1, &k4(), BuildMode::CountOnly, &mut cache), Err(Error::Domain(_))));
    }

    #[test]
    fn c1_examples() {
        let mut cache = EvalCache::default();
        let c = build_c1(20, &k4(), BuildMode::CountOnly, &mut cache).unwrap();
        assert_eq!(c.queries(), &268);
        let c = build_c1(4, &k4(), BuildMode::Circuit, &mut cache).unwrap();
        assert_eq!(c.queries(), &1);
        for t in 0..16 {
            assert!((measure(&c, 4, t) - 0.25).abs() < 1e-9);
        }
    }

    #[test]
    fn lift_of_small_c1() {
        let mut cache = EvalCache::default();
        let g = build_c1(4, &k4(), BuildMode::Circuit, &mut cache).unwrap();
        let l = lift(&g, 8, &k4(), &mut cache).unwrap();
        assert_eq!(l.rounds().unwrap(), &2);
        assert_eq!(l.queries(), &7);
        assert_eq!(l.num_flags(), 2);
        let q = l.claims.iter().find(|c| c.name == "Q>=k+2").unwrap();
        assert!(!q.holds);
        assert!(l.claims.iter().filter(|c| c.name != "Q>=k+2").all(|c| c.holds));
        for t in [0, 37, 200, 255] {
            assert!((measure(&l, 8, t) - 0.25).abs() < 1e-9, "t = {t}");
        }
        // All queries of the lifted circuit read the full address.
        assert!(l.circuit().unwrap().query_widths().iter().all(|&w| w == 8));
    }

    #[test]
    fn boost_after_lift() {
        let mut cache = EvalCache::default();
        let g = build_c1(4, &k4(), BuildMode::Circuit, &mut cache).unwrap();
        let l = lift(&g, 8, &k4(), &mut cache).unwrap();
        let b = boost_to_one(&l, &k4(), &mut cache).unwrap();
        assert_eq!(b.queries(), &22);
        assert!((measure(&b, 8, 37) - 1.0).abs() < 1e-9);
        assert!(b.bounds_ok());
        assert!(boost_to_one(&g.clone(), &Real::ratio(8, 1), &mut cache).is_err());
    }

    #[test]
    fn count_only_matches_built_counts() {
        let mut cache = EvalCache::default();
        for mode in [BuildMode::Circuit, BuildMode::CountOnly] {
            let g = build_c1(5, &k4(), mode, &mut cache).unwrap();
            let l = lift(&g, 9, &k4(), &mut cache).unwrap();
            let b = boost_to_one(&l, &k4(), &mut cache).unwrap();
            assert_eq!(b.counts(), &CountReport::new(b.queries().clone(), b.gates().clone()));
            if mode == BuildMode::Circuit {
                assert_eq!(&b.circuit().unwrap().counts(), b.counts());
            }
        }
    }

    #[test]
    fn size_limit_is_a_resource_error() {
        let mut cache = EvalCache::default();
        let err = build_c1(40, &k4(), BuildMode::Circuit, &mut cache).unwrap_err();
        assert!(matches!(err, Error::Resource(_)));
    }
}
