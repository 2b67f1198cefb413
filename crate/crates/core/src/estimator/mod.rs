//! Count-only resource estimates and the inequality checks behind them.
//!
//! Estimates run the same builders as the circuit constructions in
//! [`BuildMode::CountOnly`], so built and estimated counts share one
//! recurrence and agree exactly wherever both are computed.

pub mod bounds;

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::constructions::{
    build_c1, build_recursive, build_schedule, loglog_recipe, main_result, BuildMode, MainMode, Pipeline, SearchAlgorithm,
};
use crate::error::{bail, Error, Result};
use crate::numerics::{BigCount, EvalCache, Real};
pub use bounds::BoundCheck;

#[derive(Clone, Debug, Serialize)]
pub struct ResourceEstimate {
    /// 1-based recursion level; the boost is reported as level `r + 1`.
    pub level: usize,
    pub n_i: u32,
    pub queries: BigCount,
    pub gates: BigCount,
    pub rounds: BigCount,
    pub preconditions: bool,
}

impl ResourceEstimate {
    fn from_alg(level: usize, alg: &SearchAlgorithm) -> Self {
        ResourceEstimate {
            level,
            n_i: alg.n(),
            queries: alg.counts().queries.clone(),
            gates: alg.counts().elementary_gates.clone(),
            rounds: alg.rounds().cloned().unwrap_or_default().into(),
            preconditions: alg.preconditions_hold(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub level: String,
    pub n_i: u32,
    pub queries: BigCount,
    pub gates: BigCount,
    pub bound: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
    pub preconditions: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EstimateReport {
    pub k: String,
    pub n_seq: Vec<u32>,
    pub levels: Vec<ResourceEstimate>,
    pub rows: Vec<Row>,
    pub unmet: Vec<String>,
}

impl EstimateReport {
    pub fn from_pipeline(p: &Pipeline) -> Self {
        let stages: Vec<(String, &SearchAlgorithm)> = p
            .levels
            .iter()
            .enumerate()
            .map(|(i, a)| ((i + 1).to_string(), a))
            .chain(p.boosted.iter().map(|b| ("boost".to_string(), b)))
            .collect();
        let mut levels = Vec::new();
        let mut rows = Vec::new();
        for (i, (label, alg)) in stages.iter().enumerate() {
            levels.push(ResourceEstimate::from_alg(i + 1, alg));
            for b in &alg.bounds {
                rows.push(row(label, alg, b));
            }
        }
        let top = p.last();
        for b in &p.bounds {
            rows.push(row("all", top, b));
        }
        EstimateReport {
            k: p.k.to_string(),
            n_seq: p.levels.iter().map(|a| a.n()).collect(),
            levels,
            rows,
            unmet: p.unmet().iter().map(|c| format!("{}: {}", c.name, c.detail)).collect(),
        }
    }

    pub fn bounds_ok(&self) -> bool {
        self.rows.iter().all(|r| !r.preconditions || r.holds)
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::from("level\tn_i\tQ_i\tE_i\tbound\tholds\tpreconditions\n");
        for r in &self.rows {
            writeln!(s, "{}\t{}\t{}\t{}\t{}\t{}\t{}", r.level, r.n_i, r.queries, r.gates, r.bound, r.holds, r.preconditions).unwrap();
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn row(level: &str, alg: &SearchAlgorithm, b: &BoundCheck) -> Row {
    Row {
        level: level.into(),
        n_i: alg.n(),
        queries: alg.counts().queries.clone(),
        gates: alg.counts().elementary_gates.clone(),
        bound: b.name.clone(),
        lhs: b.lhs.clone(),
        rhs: b.rhs_approx.clone(),
        holds: b.holds,
        preconditions: b.preconditions,
    }
}

/// First level alone: `H^⊗n₁` amplified to `1/k`.
pub fn estimate_c1(n1: u32, k: u64, cache: &mut EvalCache) -> Result<(ResourceEstimate, Vec<BoundCheck>)> {
    if k < 2 {
        bail!(Config, "k must be at least 2");
    }
    let alg = build_c1(n1, &Real::ratio(k as i64, 1), BuildMode::CountOnly, cache)?;
    let mut checks = vec![bounds::c1_ceiling(alg.queries(), n1, k)];
    checks.extend(bounds::c1_level(alg.queries(), alg.gates(), n1, k));
    checks.extend(alg.bounds.iter().cloned());
    Ok((ResourceEstimate::from_alg(1, &alg), checks))
}

/// Per-level counts of the recursion for `N = 2^n`.
pub fn estimate_recursive(n: u32, k: u64, r: u32, relaxed: bool, boost: bool, cache: &mut EvalCache) -> Result<Pipeline> {
    let s = build_schedule(n, k, r, relaxed)?;
    build_recursive(&s, boost, BuildMode::CountOnly, cache)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// Gate total of one exact amplification.
    Amplification,
    /// Boost from `1/k` to certainty.
    Boost,
    /// One lift.
    Lift,
    /// Single lift at `k = log log N`.
    LogLog,
    /// Recursion totals.
    Recursion,
    /// Top-level recipes.
    Main,
}

impl FromStr for BoundKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "amplify" | "thm21" => BoundKind::Amplification,
            "boost" | "cor22" => BoundKind::Boost,
            "lift" | "thm31" => BoundKind::Lift,
            "loglog" | "cor32" => BoundKind::LogLog,
            "recursion" | "thm33" => BoundKind::Recursion,
            "main" | "cor34" => BoundKind::Main,
            other => bail!(Config, "unknown bound kind '{other}' (expected amplify, boost, lift, loglog, recursion or main)"),
        })
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub n: u32,
    pub k: u64,
    pub r: u32,
    pub eps: Option<f64>,
    pub relaxed: bool,
}

/// Runs the count-only construction for `inst` and returns the checks of `kind`.
pub fn check_bounds(kind: BoundKind, inst: &Instance, cache: &mut EvalCache) -> Result<Vec<BoundCheck>> {
    let pick = |p: &Pipeline, prefix: &[&str]| -> Vec<BoundCheck> {
        p.all_bounds().filter(|b| prefix.iter().any(|x| b.name.starts_with(x))).cloned().collect()
    };
    Ok(match kind {
        BoundKind::Amplification => pick(&estimate_recursive(inst.n, inst.k, inst.r, inst.relaxed, true, cache)?, &["amplify."]),
        BoundKind::Boost => pick(&estimate_recursive(inst.n, inst.k, inst.r, inst.relaxed, true, cache)?, &["boost."]),
        BoundKind::Lift => pick(&estimate_recursive(inst.n, inst.k, inst.r, inst.relaxed, false, cache)?, &["lift."]),
        BoundKind::Recursion => {
            pick(&estimate_recursive(inst.n, inst.k, inst.r, inst.relaxed, false, cache)?, &["recursion.", "level", "c1."])
        }
        BoundKind::LogLog => pick(&loglog_recipe(inst.n, BuildMode::CountOnly, cache)?, &["loglog."]),
        BoundKind::Main => {
            let mode = match inst.eps {
                Some(e) => MainMode::FixedEps(e),
                None => MainMode::FixedR(inst.r),
            };
            pick(&main_result(inst.n, mode, inst.relaxed, BuildMode::CountOnly, cache)?, &["main.", "epsilon"])
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c1_estimate_at_twenty_bits() {
        let mut cache = EvalCache::default();
        let (e, checks) = estimate_c1(20, 4, &mut cache).unwrap();
        assert_eq!(e.queries.to_u64(), Some(268));
        assert_eq!(e.rounds.to_u64(), Some(268));
        assert!(checks.iter().all(|b| b.holds && b.preconditions), "{checks:?}");
    }

    #[test]
    fn recursion_estimates_at_1024() {
        let mut cache = EvalCache::default();
        let p = estimate_recursive(1024, 4, 2, false, false, &mut cache).unwrap();
        assert_eq!(p.levels.iter().map(|a| a.n()).collect::<Vec<_>>(), vec![26, 1024]);
        let rep = EstimateReport::from_pipeline(&p);
        assert!(rep.bounds_ok());
        assert!(rep.rows.iter().any(|r| r.bound == "recursion.queries" && r.holds && r.preconditions));
        let tsv = rep.to_tsv();
        assert!(tsv.starts_with("level\tn_i\tQ_i\tE_i\tbound\tholds\tpreconditions\n"));
        let json: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
        assert_eq!(json["n_seq"], serde_json::json!([26, 1024]));
    }

    #[test]
    fn check_bounds_by_kind() {
        let mut cache = EvalCache::default();
        let inst = Instance { n: 1024, k: 4, r: 2, eps: None, relaxed: false };
        for kind in ["amplify", "boost", "lift", "thm33"] {
            let v = check_bounds(kind.parse().unwrap(), &inst, &mut cache).unwrap();
            assert!(!v.is_empty(), "{kind}");
            assert!(v.iter().all(BoundCheck::ok), "{kind}: {v:?}");
        }
        let v = check_bounds(BoundKind::Lift, &inst, &mut cache).unwrap();
        assert!(v.iter().all(|b| b.holds && b.preconditions));
        let v = check_bounds(BoundKind::LogLog, &Instance { n: 64, ..inst.clone() }, &mut cache).unwrap();
        assert!(v[0].holds);
        let v = check_bounds(BoundKind::Main, &Instance { eps: Some(1.0), relaxed: true, ..inst }, &mut cache).unwrap();
        assert!(v.iter().any(|b| b.name == "epsilon" && b.holds));
        assert!("thm99".parse::<BoundKind>().is_err());
    }
}
