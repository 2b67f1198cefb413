//! The nine acceptance criteria. Each test prints one PASS/FAIL line; run with
//! `cargo test --test acceptance -- --nocapture --test-threads 1` to see them
//! with undisturbed timings.

use std::time::{Duration, Instant};

use gatesearch::circuit::{expand_zero_reflection, zero_reflection_cost};
use gatesearch::constructions::{
    amplify_exact, build_recursive, build_schedule, hadamard_base, loglog_recipe, main_result, BuildMode, MainMode, RecursionSchedule,
};
use gatesearch::estimator::estimate_recursive;
use gatesearch::numerics::surd::ceil_surd_minus_half;
use gatesearch::numerics::{check_fact_ceiling, check_fact_iterlog, compute_w, log_star, EvalCache, Magnitude, Real};
use gatesearch::oracle::make_unique_database;
use gatesearch::simulator::{good_probability, run, verify_reflection_equivalence, SimConfig};
use rand::{Rng, SeedableRng};
use rug::{Integer, Rational};

fn finish(id: u32, what: &str, start: Instant, limit_secs: f64, failures: &[String]) {
    let elapsed = start.elapsed();
    let in_time = elapsed <= Duration::from_secs_f64(limit_secs);
    let ok = failures.is_empty() && in_time;
    println!(
        "criterion {id} {}: {what} ({:.2}s, limit {limit_secs}s){}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        if failures.is_empty() { String::new() } else { format!(" first failure: {}", failures[0]) }
    );
    assert!(failures.is_empty(), "criterion {id}: {} failures, e.g. {}", failures.len(), failures[0]);
    assert!(in_time, "criterion {id}: took {elapsed:?}, limit {limit_secs}s");
}

fn measured(alg: &gatesearch::constructions::SearchAlgorithm, n: u32, t: u64) -> f64 {
    let db = make_unique_database(n, t).unwrap();
    let state = run(alg.circuit().unwrap(), &db, &SimConfig::default()).unwrap();
    good_probability(&state, &alg.good_set(&db)).unwrap()
}

#[test]
fn criterion_1_exact_amplification() {
    let start = Instant::now();
    let mut cache = EvalCache::default();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let mut failures = Vec::new();
    let mut cases = 0;
    for n in 2..=10u32 {
        let base = hadamard_base(n, BuildMode::Circuit).unwrap();
        let positions: Vec<u64> = if n <= 6 { (0..1 << n).collect() } else { (0..16).map(|_| rng.gen_range(0..1u64 << n)).collect() };
        for den in [2i64, 4, 8, 1] {
            // Targets below the starting probability 2^-n are outside the domain.
            if (den as u64) > (1 << n) {
                continue;
            }
            let target = Real::ratio(1, den);
            let alg = amplify_exact(&base, &target, &mut cache).unwrap();
            for &t in &positions {
                let p = measured(&alg, n, t);
                cases += 1;
                if (p - 1.0 / den as f64).abs() > 1e-9 {
                    failures.push(format!("n={n} a'=1/{den} t={t}: {p}"));
                }
            }
        }
    }
    finish(1, &format!("{cases} amplified runs land on a' within 1e-9"), start, 60.0, &failures);
}

#[test]
fn criterion_2_grover_four() {
    let start = Instant::now();
    let mut cache = EvalCache::default();
    let alg = amplify_exact(&hadamard_base(2, BuildMode::Circuit).unwrap(), &Real::one(), &mut cache).unwrap();
    let mut failures = Vec::new();
    if *alg.queries() != 1 {
        failures.push(format!("queries {}", alg.queries()));
    }
    for t in 0..4 {
        let p = measured(&alg, 2, t);
        if (p - 1.0).abs() > 1e-12 {
            failures.push(format!("t={t}: {p}"));
        }
    }
    finish(2, "N=4 search, 1 query, success 1 within 1e-12", start, 1.0, &failures);
}

#[test]
fn criterion_3_desk_pipeline() {
    let start = Instant::now();
    let mut cache = EvalCache::default();
    let s = RecursionSchedule::with_widths(vec![4, 8], 4).unwrap();
    let built = build_recursive(&s, true, BuildMode::Circuit, &mut cache).unwrap();
    let counted = build_recursive(&s, true, BuildMode::CountOnly, &mut cache).unwrap();
    let mut failures = Vec::new();
    let lifted = &built.levels[1];
    let boosted = built.boosted.as_ref().unwrap();
    if *lifted.queries() != 7 {
        failures.push(format!("lift queries {}", lifted.queries()));
    }
    if *boosted.queries() != 22 {
        failures.push(format!("boost queries {}", boosted.queries()));
    }
    for (b, c) in built.levels.iter().chain(&built.boosted).zip(counted.levels.iter().chain(&counted.boosted)) {
        if b.circuit().unwrap().counts() != *c.counts() {
            failures.push(format!("built {:?} vs estimated {:?}", b.counts(), c.counts()));
        }
    }
    for t in 0..256 {
        let p = measured(lifted, 8, t);
        if (p - 0.25).abs() > 1e-9 {
            failures.push(format!("lift t={t}: {p}"));
        }
        let p = measured(boosted, 8, t);
        if (p - 1.0).abs() > 1e-9 {
            failures.push(format!("boost t={t}: {p}"));
        }
    }
    finish(3, "widths [4,8], k=4: 0.25 with 7 queries, 1.0 with 22", start, 5.0, &failures);
}

/// `(1 + c/k)^e` as an exact rational.
fn one_plus(c: u64, k: u64, e: u32) -> Rational {
    let mut v = Rational::from(1);
    for _ in 0..e {
        v *= Rational::from((k + c, k));
    }
    v
}

/// `lhs ≤ coeff·√(2^e)` by squaring; all operands nonnegative.
fn le_root_pow2(lhs: &Integer, coeff: &Rational, e: u32) -> bool {
    let l2 = Rational::from(Integer::from(lhs.square_ref()));
    let r2 = Rational::from(coeff.square_ref()) * Rational::from(Integer::from(1) << e);
    l2 <= r2
}

#[test]
fn criterion_4_full_scale_counts() {
    let start = Instant::now();
    let mut cache = EvalCache::default();
    let mut failures = Vec::new();
    for (r, widths) in [(2u32, vec![26u32, 1024]), (3, vec![20, 26, 1024])] {
        let p = estimate_recursive(1024, 4, r, false, false, &mut cache).unwrap();
        let got: Vec<u32> = p.levels.iter().map(|a| a.n()).collect();
        if got != widths {
            failures.push(format!("r={r}: widths {got:?}"));
        }
        if !p.schedule.as_ref().unwrap().preconditions_hold() {
            failures.push(format!("r={r}: preconditions unmet"));
        }
        let top = p.levels.last().unwrap();
        // Q_r ≤ √(N/4k)(1+4/k)^r with N/4k = 2^1020.
        if !le_root_pow2(top.queries(), &one_plus(4, 4, r), 1020) {
            failures.push(format!("r={r}: Q_r = {}", top.queries()));
        }
        // E_r ≤ 4√(N/k)(1+6/k)^(2r−1)·n₁ with N/k = 2^1022.
        let coeff = one_plus(6, 4, 2 * r - 1) * Rational::from(4 * widths[0]);
        if !le_root_pow2(top.gates(), &coeff, 1022) {
            failures.push(format!("r={r}: E_r = {}", top.gates()));
        }
    }
    finish(4, "N=2^1024, k=4, r=2,3: query and gate bounds hold exactly", start, 5.0, &failures);
}

#[test]
fn criterion_5_schedule_claims() {
    let start = Instant::now();
    let mut cache = EvalCache::default();
    let mut failures = Vec::new();
    let mut instances = 0;
    for n in [1u32 << 10, 1 << 12, 1 << 16, 1 << 20] {
        let ls = log_star(&Magnitude::pow2(u64::from(n))).unwrap();
        for lk in 2..=10u32 {
            let k = 1u64 << lk;
            for r in 1..=ls {
                let Ok(s) = build_schedule(n, k, r, true) else { continue };
                if !s.preconditions_hold() {
                    continue;
                }
                instances += 1;
                for w in s.n_seq.windows(2) {
                    if w[0] + 2 * lk > w[1] {
                        failures.push(format!("n={n} k={k} r={r}: {} + 2 log k > {}", w[0], w[1]));
                    }
                }
                let p = build_recursive(&s, false, BuildMode::CountOnly, &mut cache).unwrap();
                for (lvl, &n_i) in p.levels.iter().zip(&s.n_seq) {
                    // E_i ≥ √(N_i/4k)  ⟺  E_i²·4k ≥ 2^(n_i)
                    let e2 = Integer::from(lvl.gates().square_ref()) * (4 * k);
                    if e2 < (Integer::from(1) << n_i) {
                        failures.push(format!("n={n} k={k} r={r}: E at width {n_i} too small"));
                    }
                }
            }
        }
    }
    finish(5, &format!("{instances} schedules meet both claims"), start, 30.0, &failures);
}

#[test]
fn criterion_6_reflection_ladder() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for m in 2..=8usize {
        if !verify_reflection_equivalence(m).unwrap() {
            failures.push(format!("m={m}: ladder differs"));
        }
        let c = expand_zero_reflection(m).unwrap();
        let gates = c.counts().elementary_gates.to_u64().unwrap();
        if gates != 4 * m as u64 - 1 || zero_reflection_cost(m) != gates {
            failures.push(format!("m={m}: {gates} gates"));
        }
    }
    finish(6, "ladder equals zero reflection up to phase, 4m-1 gates, m=2..8", start, 30.0, &failures);
}

#[test]
fn criterion_7_round_bound_and_facts() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for n in 1..=40u32 {
        for k in 2..=64u64 {
            if k > 1 << n {
                continue;
            }
            let w = compute_w(&Real::pow2_neg(n), &Real::ratio(1, k as i64)).unwrap();
            // ⌈√N(1+1/k)/(2√k) − 1/2⌉ = ⌈((k+1)/2k)·√(N/k) − 1/2⌉
            let bound = ceil_surd_minus_half(&Rational::from((k + 1, 2 * k)), &Rational::from((Integer::from(1) << n, Integer::from(k))));
            if w > bound {
                failures.push(format!("n={n} k={k}: w={w} > {bound}"));
            }
        }
    }
    for k in 2..=64u64 {
        let mut alphas: Vec<u64> = (k..k + 50).collect();
        alphas.extend((1..=200).map(|i| k + i * (1_000_000 - k) / 200));
        for a in alphas {
            if !check_fact_ceiling(k, &Rational::from(a)).unwrap().holds {
                failures.push(format!("ceiling fact k={k} alpha={a}"));
            }
        }
        // Non-integer alphas too.
        for num in [2 * k + 1, 7 * k + 3, 1_999_999] {
            if !check_fact_ceiling(k, &Rational::from((num, 2))).unwrap().holds {
                failures.push(format!("ceiling fact k={k} alpha={num}/2"));
            }
        }
    }
    for k in 3..=64u64 {
        for i in 2..=32u64 {
            if !check_fact_iterlog(k, i).unwrap().holds {
                failures.push(format!("iterlog fact k={k} i={i}"));
            }
        }
    }
    finish(7, "round-count bound over n<=40, k<=64 and both fact sweeps", start, 30.0, &failures);
}

#[test]
fn criterion_8_loglog_recipe() {
    let start = Instant::now();
    let mut cache = EvalCache::default();
    let p = loglog_recipe(64, BuildMode::CountOnly, &mut cache).unwrap();
    let mut failures = Vec::new();
    if p.k != Real::ratio(6, 1) {
        failures.push(format!("k = {}", p.k));
    }
    if p.levels[0].n() != 20 {
        failures.push(format!("m = {}", p.levels[0].n()));
    }
    // Independent check: Q ≤ (π/4)·2^32·(1+4/√6)^4 using a lower bound on the
    // right side (π > 3.14159265, √6 < 2.4494898).
    let q = p.last().queries().clone();
    let rhs_low = Rational::from((314159265u64, 400000000u64)) * Rational::from(Integer::from(1) << 32u32) * {
        let f = Rational::from(1) + Rational::from((40000000u64, 24494898u64)) / 10u32;
        Rational::from(f.square_ref()) * Rational::from(f.square_ref())
    };
    if q > rhs_low {
        failures.push(format!("queries {q} above the bound"));
    }
    let lib = p.bounds.iter().find(|b| b.name == "loglog.queries").unwrap();
    if !lib.holds {
        failures.push("library bound check failed".into());
    }
    finish(8, "N=2^64: k=6, m=20, queries under (pi/4)2^32(1+4/sqrt6)^4", start, 5.0, &failures);
}

#[test]
fn criterion_9_fixed_epsilon() {
    let start = Instant::now();
    let mut cache = EvalCache::default();
    let n = 1u32 << 16;
    let p = main_result(n, MainMode::FixedEps(1.0), true, BuildMode::CountOnly, &mut cache).unwrap();
    let choice = p.k_choice.clone().unwrap();
    let r = p.schedule.as_ref().unwrap().r;
    let mut failures = Vec::new();
    // Independent: (1 + 4/√k)^(r+2) ≤ 2 with √k an integer.
    let f = one_plus(4, choice.sqrt_k, r + 2);
    if f > 2 {
        failures.push(format!("(1+4/{})^{} = {}", choice.sqrt_k, r + 2, f.to_f64()));
    }
    if !p.bounds.iter().any(|b| b.name == "epsilon" && b.holds) {
        failures.push("library epsilon check failed".into());
    }
    if p.last().a_known() != &Real::one() {
        failures.push("final probability is not 1".into());
    }
    finish(9, &format!("eps=1, log N={n}: k={}, r={r}, overhead certified", choice.k), start, 5.0, &failures);
}
