use rug::Integer;

use super::schedule::{build_schedule, RecursionSchedule};
use super::{boost_to_one, build_c1, lift, BuildMode, Claim, SearchAlgorithm};
use crate::error::{bail, Error, Result};
use crate::estimator::bounds::{self, BoundCheck};
use crate::numerics::params::{pick_k_eps_unchecked, pick_k_fixed_r_unchecked};
use crate::numerics::{ceil_log2, log_star, pick_k_eps, pick_k_fixed_r, Enclose, EvalCache, Interval, KChoice, Magnitude, Real};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MainMode {
    /// Fixed recursion depth `r`, `k = (c₁ log* N)²`.
    FixedR(u32),
    /// `r = log* N`, `k` chosen so the query overhead is at most `1 + ε`.
    FixedEps(f64),
}

/// The levels of a recursive search, optionally boosted to certainty.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub k: Real,
    pub k_choice: Option<KChoice>,
    pub schedule: Option<RecursionSchedule>,
    /// `C⁽¹⁾ … C⁽ʳ⁾`.
    pub levels: Vec<SearchAlgorithm>,
    pub boosted: Option<SearchAlgorithm>,
    /// Whole-pipeline inequalities; per-step checks live on each algorithm.
    pub bounds: Vec<BoundCheck>,
    pub claims: Vec<Claim>,
}

impl Pipeline {
    pub fn last(&self) -> &SearchAlgorithm {
        self.boosted.as_ref().unwrap_or_else(|| self.levels.last().expect("pipeline has a level"))
    }

    pub fn all_bounds(&self) -> impl Iterator<Item = &BoundCheck> {
        self.levels.iter().chain(&self.boosted).flat_map(|a| &a.bounds).chain(&self.bounds)
    }

    pub fn bounds_ok(&self) -> bool {
        self.all_bounds().all(BoundCheck::ok)
    }

    /// Every unmet hypothesis, from the schedule, the parameter choice and each lift.
    pub fn unmet(&self) -> Vec<&Claim> {
        let sched = self.schedule.iter().flat_map(|s| &s.preconditions);
        let lifts = self.levels.iter().chain(&self.boosted).flat_map(|a| &a.claims);
        sched.chain(lifts).chain(&self.claims).filter(|c| !c.holds).collect()
    }
}

/// `C⁽¹⁾ = build_c1(n₁, k)`, then `C⁽ⁱ⁾ = lift(C⁽ⁱ⁻¹⁾, n_i, k)`.
pub fn build_recursive_levels(s: &RecursionSchedule, mode: BuildMode, cache: &mut EvalCache) -> Result<Vec<SearchAlgorithm>> {
    let k = Real::ratio(s.k as i64, 1);
    let mut levels = vec![build_c1(s.n1(), &k, mode, cache)?];
    for &n in &s.n_seq[1..] {
        let next = lift(levels.last().unwrap(), n, &k, cache)?;
        levels.push(next);
    }
    Ok(levels)
}

/// The recursion of `s`, plus the boost to certainty when `boost` is set.
pub fn build_recursive(s: &RecursionSchedule, boost: bool, mode: BuildMode, cache: &mut EvalCache) -> Result<Pipeline> {
    let k = Real::ratio(s.k as i64, 1);
    let levels = build_recursive_levels(s, mode, cache)?;
    let pre = s.preconditions_hold();
    let mut checks = Vec::new();
    let c1 = &levels[0];
    checks.push(bounds::c1_ceiling(c1.queries(), s.n1(), s.k));
    checks.extend(bounds::c1_level(c1.queries(), c1.gates(), s.n1(), s.k));
    for (i, (lvl, &n_i)) in levels.iter().zip(&s.n_seq).enumerate() {
        checks.push(bounds::level_gates_lower(i + 1, lvl.gates(), n_i, s.k, pre));
    }
    let top = levels.last().unwrap();
    checks.extend(bounds::recursion(top.queries(), top.gates(), s.n(), s.n1(), s.k, s.r, pre));
    let boosted = if boost { Some(boost_to_one(top, &k, cache)?) } else { None };
    Ok(Pipeline { k, k_choice: None, schedule: Some(s.clone()), levels, boosted, bounds: checks, claims: vec![] })
}

/// `m = ⌈log(n²k³)⌉` with `k = log n`.
fn loglog_width(n: u32, k: &Real, cache: &mut EvalCache) -> Result<u32> {
    if let Some(kq) = k.as_exact() {
        let ki = kq.numer();
        debug_assert_eq!(*kq.denom(), 1);
        let v = Integer::from(n).square() * Integer::from(ki.square_ref()) * ki;
        return Ok(ceil_log2(&v));
    }
    let mut prec = 128;
    while prec <= 8192 {
        let nv = Interval::from_u64(prec, u64::from(n)).log2();
        let kv = k.enclose(prec, cache).log2();
        let x = nv.mul_pow2(1).add(&kv.mul(&Interval::from_u64(prec, 3)));
        if let Some(m) = x.certified_ceil() {
            return m.to_u32().ok_or_else(|| Error::Config(format!("width {m} out of range")));
        }
        prec *= 2;
    }
    bail!(Resource, "could not certify the first-level width")
}

/// Single lift at `k = log log N` from `m = ⌈log(n²k³)⌉` bits, then a boost.
pub fn loglog_recipe(n: u32, mode: BuildMode, cache: &mut EvalCache) -> Result<Pipeline> {
    if n < 25 {
        bail!(Config, "this recipe needs log N >= 25, got {n}");
    }
    let k = Real::log2_of(&Integer::from(n))?;
    let m = loglog_width(n, &k, cache)?;
    if m >= n {
        bail!(Config, "first-level width {m} does not fit below {n}");
    }
    let c1 = build_c1(m, &k, mode, cache)?;
    let lifted = lift(&c1, n, &k, cache)?;
    let boosted = boost_to_one(&lifted, &k, cache)?;
    let q = bounds::final_queries("loglog.queries", boosted.queries(), n, &k, 4, true, cache);
    Ok(Pipeline { k, k_choice: None, schedule: None, levels: vec![c1, lifted], boosted: Some(boosted), bounds: vec![q], claims: vec![] })
}

/// The top-level recipes. With `relaxed`, parameter choices that break
/// `k ≤ log log N` are allowed and reported instead of rejected.
pub fn main_result(n: u32, mode: MainMode, relaxed: bool, build: BuildMode, cache: &mut EvalCache) -> Result<Pipeline> {
    let log_n = Integer::from(n);
    let (choice, r, eps) = match mode {
        MainMode::FixedR(r) => {
            let c = if relaxed { pick_k_fixed_r_unchecked(&log_n)? } else { pick_k_fixed_r(&log_n)? };
            (c, r, None)
        }
        MainMode::FixedEps(eps) => {
            let r = log_star(&Magnitude::pow2(u64::from(n)))?;
            let c = if relaxed { pick_k_eps_unchecked(&log_n, eps)? } else { pick_k_eps(&log_n, eps)? };
            (c, r, Some(eps))
        }
    };
    let schedule = build_schedule(n, choice.k, r, relaxed)?;
    let mut p = build_recursive(&schedule, true, build, cache)?;
    let q = p.boosted.as_ref().unwrap().queries().clone();
    p.bounds.push(bounds::final_queries("main.queries", &q, n, &p.k, r + 2, schedule.preconditions_hold(), cache));
    if let Some(eps) = eps {
        p.bounds.push(bounds::epsilon(choice.sqrt_k, r, eps)?);
    }
    p.claims.push(Claim::new("k<=loglogN", (choice.k < 32) && (1u64 << choice.k) <= u64::from(n), format!("k = {}", choice.k)));
    p.k_choice = Some(choice);
    Ok(p)
}
