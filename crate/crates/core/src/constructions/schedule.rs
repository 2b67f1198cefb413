use rug::Integer;
use serde::Serialize;

use super::Claim;
use crate::error::{bail, Result};
use crate::numerics::{ceil_log2, log_star, Magnitude};

/// Address widths `n₁ < … < n_r` of the recursion, with the hypotheses the
/// count bounds rely on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecursionSchedule {
    pub k: u64,
    pub r: u32,
    pub n_seq: Vec<u32>,
    /// Built with parameters outside the stated ranges (widths given by hand
    /// or `k` above `log log N`).
    pub relaxed: bool,
    pub preconditions: Vec<Claim>,
}

fn log_k(k: u64) -> Result<u32> {
    if !k.is_power_of_two() || k < 2 {
        bail!(Config, "k = {k} is not a power of 2 (>= 2)");
    }
    Ok(k.trailing_zeros())
}

/// `⌈log(n²k³)⌉`.
fn width_term(n: u32, lk: u32) -> u32 {
    3 * lk + ceil_log2(&Integer::from(n).square())
}

fn recurrence(n: u32, lk: u32, r: u32) -> Vec<u32> {
    let mut seq = vec![n];
    for i in (2..=r).rev() {
        let next = *seq.last().unwrap();
        seq.push(((2 * i + 6) * lk).max(width_term(next, lk)));
    }
    seq.reverse();
    seq
}

impl RecursionSchedule {
    pub fn n(&self) -> u32 {
        *self.n_seq.last().unwrap()
    }

    pub fn n1(&self) -> u32 {
        self.n_seq[0]
    }

    pub fn log_k(&self) -> u32 {
        self.k.trailing_zeros()
    }

    pub fn preconditions_hold(&self) -> bool {
        self.preconditions.iter().all(|c| c.holds)
    }

    /// A hand-picked width sequence; the recurrence and range hypotheses are
    /// reported but not enforced.
    pub fn with_widths(n_seq: Vec<u32>, k: u64) -> Result<Self> {
        let lk = log_k(k)?;
        if n_seq.is_empty() {
            bail!(Config, "empty width sequence");
        }
        if n_seq[0] == 0 || n_seq.windows(2).any(|w| w[0] >= w[1]) {
            bail!(Config, "widths must be positive and strictly increasing: {n_seq:?}");
        }
        let n = *n_seq.last().unwrap();
        let r = n_seq.len() as u32;
        let mut pre = claims(&n_seq, k, lk);
        let expected = recurrence(n, lk, r);
        pre.push(Claim::new("recurrence", expected == n_seq, format!("recurrence gives {expected:?}")));
        Ok(RecursionSchedule { k, r, n_seq, relaxed: true, preconditions: pre })
    }
}

fn claims(n_seq: &[u32], k: u64, lk: u32) -> Vec<Claim> {
    let n = *n_seq.last().unwrap();
    let r = n_seq.len() as u32;
    let mut out = Vec::new();
    // k ≤ log log N  ⟺  2^k ≤ n.
    let fits = k < 32 && (1u64 << k) <= u64::from(n);
    out.push(Claim::new("k<=loglogN", fits, format!("k = {k}, log N = {n}")));
    out.push(Claim::new("k>=4", k >= 4, format!("k = {k}")));
    for i in 1..n_seq.len() {
        let (a, b) = (n_seq[i - 1], n_seq[i]);
        out.push(Claim::new(&format!("increasing[{}]", i + 1), a + 2 * lk <= b, format!("{a} + 2*{lk} <= {b}")));
    }
    out.push(Claim::new("n1>=10logk", n_seq[0] >= 10 * lk, format!("n1 = {}, log k = {lk}", n_seq[0])));
    if r >= 2 {
        let depth = (2 * r + 6) * lk <= width_term(n, lk);
        out.push(Claim::new("largeN.depth", depth, format!("(2r+6)log k = {} vs {}", (2 * r + 6) * lk, width_term(n, lk))));
        // 2·n²·k⁵ ≤ 2^n
        let lhs = (Integer::from(n).square() * 2u32) << (5 * lk);
        let size = lhs <= (Integer::from(1) << n);
        out.push(Claim::new("largeN.size", size, format!("log(2n^2k^5) <= {n}")));
    }
    out
}

/// `n_r = n`, `n_{i−1} = max{(2i+6)·log k, ⌈log(n_i²k³)⌉}`.
///
/// `k > log log N` is a configuration error unless `relaxed`, in which case it
/// is only reported.
pub fn build_schedule(n: u32, k: u64, r: u32, relaxed: bool) -> Result<RecursionSchedule> {
    let lk = log_k(k)?;
    if k < 4 {
        bail!(Config, "k = {k} must be at least 4");
    }
    if n == 0 {
        bail!(Config, "log N must be positive");
    }
    if r == 0 {
        bail!(Config, "r must be at least 1");
    }
    let ls = log_star(&Magnitude::pow2(u64::from(n)))?;
    if r > ls {
        bail!(Config, "r = {r} exceeds log* N = {ls}");
    }
    let n_seq = recurrence(n, lk, r);
    let pre = claims(&n_seq, k, lk);
    if !relaxed && !pre[0].holds {
        bail!(Config, "k = {k} exceeds log log N = log {n}");
    }
    if n_seq.windows(2).any(|w| w[0] >= w[1]) {
        bail!(Config, "widths {n_seq:?} are not increasing; N is too small for k = {k}, r = {r}");
    }
    Ok(RecursionSchedule { k, r, n_seq, relaxed, preconditions: pre })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples_at_1024() {
        assert_eq!(build_schedule(1024, 4, 2, false).unwrap().n_seq, vec![26, 1024]);
        let s = build_schedule(1024, 4, 3, false).unwrap();
        assert_eq!(s.n_seq, vec![20, 26, 1024]);
        assert!(s.preconditions_hold(), "{:?}", s.preconditions);
        assert_eq!(build_schedule(1024, 4, 1, false).unwrap().n_seq, vec![1024]);
    }

    #[test]
    fn parameter_errors() {
        assert!(build_schedule(1024, 6, 2, false).is_err());
        assert!(build_schedule(20, 4, 9, false).is_err());
        assert!(build_schedule(1024, 64, 2, false).is_err());
        let s = build_schedule(1024, 64, 2, true).unwrap();
        assert_eq!(s.n_seq, vec![60, 1024]);
        assert!(!s.preconditions_hold());
    }

    #[test]
    fn hand_picked_widths() {
        let s = RecursionSchedule::with_widths(vec![4, 8], 4).unwrap();
        assert!(s.relaxed && !s.preconditions_hold());
        assert!(RecursionSchedule::with_widths(vec![8, 8], 4).is_err());
        assert!(RecursionSchedule::with_widths(vec![26, 1024], 4).unwrap().preconditions_hold());
    }

    #[test]
    fn size_claim_boundary() {
        // 2·n²·k⁵ ≤ 2^n at k = 4: n = 26 gives 2·676·1024 ≈ 2^20.4 ≤ 2^26.
        let c = claims(&[20, 26], 4, 2);
        assert!(c.iter().find(|c| c.name == "largeN.size").unwrap().holds);
        let c = claims(&[8, 16], 4, 2);
        assert!(!c.iter().find(|c| c.name == "largeN.size").unwrap().holds);
    }

    proptest! {
        #[test]
        fn claims_hold_when_schedule_is_valid(e in 10u32..=20, lk in 2u32..=10, r in 1u32..=6) {
            let n = 1u32 << e;
            if let Ok(s) = build_schedule(n, 1 << lk, r, true) {
                let expect = recurrence(n, lk, r);
                prop_assert_eq!(&s.n_seq, &expect);
                if s.preconditions_hold() {
                    for w in s.n_seq.windows(2) {
                        prop_assert!(w[0] + 2 * lk <= w[1]);
                    }
                }
            }
        }
    }
}
