//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bsc4_core::analytic::{lambda_analytic, spectrum_analytic, WeightTuple};
use bsc4_core::classi::{
    binomial_dominance, class_i_spectra, in_w3_prime, in_w5, theorem1_sign, y3_membership,
    y5_membership,
};
use bsc4_core::code::{ClassIProfile, CodeProfile, Row, NUM_TYPES};
use bsc4_core::oracle::{
    audit_partition, lambda_bruteforce, ml_distance, partition_spectra, spectrum_bruteforce,
    PartitionLabel, Scenario,
};
use bsc4_core::prob::RationalProb;
use bsc4_core::reductions::{even_replace, reduce_to_linear_or_class_i, two_bit_flip, ReductionStep};
use bsc4_core::verifier::{exhaustive_optimal, verify_linear_optimal, Verdict, VerifyOptions};

type Outcome = Result<String, String>;

fn eps(s: &str) -> RationalProb {
    s.parse().expect("valid probability")
}

fn compositions(n: u64, types: &[u8], out: &mut Vec<CodeProfile>) {
    fn go(n: u64, types: &[u8], cur: &mut [u64; NUM_TYPES], out: &mut Vec<CodeProfile>) {
        let (head, rest) = types.split_first().expect("nonempty");
        if rest.is_empty() {
            cur[*head as usize] = n;
            out.push(CodeProfile::new(*cur).expect("n >= 1"));
            cur[*head as usize] = 0;
            return;
        }
        for c in 0..=n {
            cur[*head as usize] = c;
            go(n - c, rest, cur, out);
        }
        cur[*head as usize] = 0;
    }
    go(n, types, &mut [0; NUM_TYPES], out);
}

fn class_i_profiles(n: u64) -> Vec<ClassIProfile> {
    let mut out = Vec::new();
    for n1 in (1..=n).step_by(2) {
        for n3 in 0..=n - n1 {
            for n5 in 0..=n - n1 - n3 {
                if let Ok(p) = ClassIProfile::new(n1, n3, n5, n - n1 - n3 - n5) {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// `fixed` columns plus `extra` columns of types drawn uniformly from `types`.
fn random_with(rng: &mut ChaCha8Rng, fixed: &[u8], extra: u64, types: &[u8]) -> CodeProfile {
    let mut counts = [0u64; NUM_TYPES];
    for &t in fixed {
        counts[t as usize] += 1;
    }
    for _ in 0..extra {
        counts[types[rng.gen_range(0..types.len())] as usize] += 1;
    }
    CodeProfile::new(counts).expect("n >= 1")
}

fn c1_oracle_analytic() -> Outcome {
    let mut checked = 0usize;
    for n in 1..=12 {
        let mut all = Vec::new();
        compositions(n, &[1, 2, 3, 4, 5, 6, 7], &mut all);
        let canon: BTreeSet<CodeProfile> = all.iter().map(CodeProfile::canonicalize).collect();
        for p in &canon {
            let brute = spectrum_bruteforce(&p.materialize()).map_err(|e| e.to_string())?;
            if spectrum_analytic(p) != brute {
                return Err(format!("spectra differ for {p}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} canonical profiles, n <= 12"))
}

fn c2_class_i_exactness() -> Outcome {
    let mut checked = 0usize;
    for n in 1..=12 {
        for p in class_i_profiles(n) {
            let prof = p.to_profile();
            let book = prof.materialize();
            let s = class_i_spectra(&p);
            let nn = n as usize;
            // partition labels from the group-distance predicates
            let parts = partition_spectra(&book, Scenario::OneColumn { from: 1, to: 3 })
                .map_err(|e| e.to_string())?;
            // membership by the closed-form distance conditions
            let mut m3 = vec![BigUint::zero(); nn + 1];
            let mut m5 = vec![BigUint::zero(); nn + 1];
            let types: Vec<u8> = (0..nn).map(|j| book.column_type(j)).collect();
            for y in 0u64..(1 << n) {
                let bits: Vec<bool> = (0..nn).map(|k| (y >> (nn - 1 - k)) & 1 == 1).collect();
                let mut w = [0u64; NUM_TYPES];
                for (j, &b) in bits.iter().enumerate() {
                    w[types[j] as usize] += b as u64;
                }
                let t = WeightTuple::new(w);
                let d = ml_distance(&book, &bits).map_err(|e| e.to_string())?;
                if y3_membership(&prof, bits[0], &t).map_err(|e| e.to_string())? {
                    m3[d] += 1u32;
                }
                if y5_membership(&prof, bits[0], &t).map_err(|e| e.to_string())? {
                    m5[d] += 1u32;
                }
            }
            let conv = |v: &[u64]| v.iter().map(|&x| BigUint::from(x)).collect::<Vec<_>>();
            if s.alpha3 != m3 || s.alpha3 != conv(&parts[PartitionLabel::Y3.index()]) {
                return Err(format!("alpha3 mismatch for {p}"));
            }
            if s.alpha5 != m5 || s.alpha5 != conv(&parts[PartitionLabel::Y5.index()]) {
                return Err(format!("alpha5 mismatch for {p}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} Class-I profiles, n <= 12"))
}

fn c3_short_lengths() -> Outcome {
    let list = [eps("1/10"), eps("1/4"), eps("49/100")];
    for n in 1..=8 {
        let r = exhaustive_optimal(n, &list).map_err(|e| e.to_string())?;
        for o in &r.per_eps {
            if !o.linear_attains {
                return Err(format!("n = {n}, eps = {}: no linear maximizer", o.eps));
            }
        }
    }
    Ok("n = 1..8 at eps 1/10, 1/4, 49/100".into())
}

fn c4_lattice_sweep() -> Outcome {
    let mut total = 0;
    for n in 1..=60 {
        let r = verify_linear_optimal(n, &VerifyOptions::default()).map_err(|e| e.to_string())?;
        if r.verdict != Verdict::LinearOptimal {
            return Err(format!("n = {n}: {}", r.verdict.as_str()));
        }
        total += r.profiles_checked;
    }
    Ok(format!("n = 1..60 linear-optimal, {total} lattice profiles"))
}

fn applicable_steps(p: &CodeProfile) -> Vec<ReductionStep> {
    let mut out = Vec::new();
    for s in Row::ALL {
        for t in Row::ALL {
            if let Ok(step) = even_replace(p, s, t) {
                out.push(step);
            }
        }
    }
    for src in [1, 2, 4] {
        if let Ok(step) = two_bit_flip(p, src) {
            out.push(step);
        }
    }
    out
}

fn c5_monotone() -> Outcome {
    let list = [eps("1/10"), eps("1/4")];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let all: Vec<u8> = (0..16).collect();
    let (mut sampled, mut steps) = (0, 0);
    while sampled < 500 {
        let n = rng.gen_range(2..=10);
        let p = random_with(&mut rng, &[], n, &all);
        let mut cands = applicable_steps(&p.fold_complements());
        if cands.is_empty() {
            continue;
        }
        sampled += 1;
        let pick = cands.swap_remove(rng.gen_range(0..cands.len()));
        let (_, pipeline) = reduce_to_linear_or_class_i(&p);
        for step in std::iter::once(&pick).chain(&pipeline) {
            for e in &list {
                let before = lambda_bruteforce(&step.before.materialize(), e).map_err(|x| x.to_string())?;
                let after = lambda_bruteforce(&step.after.materialize(), e).map_err(|x| x.to_string())?;
                if after < before {
                    return Err(format!("{} {} -> {} at {e}", step.rule, step.before, step.after));
                }
            }
            steps += 1;
        }
    }
    Ok(format!("{sampled} profiles, {steps} steps, 0 violations"))
}

fn c6_partitions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let all: Vec<u8> = (0..16).collect();
    for k in 0..200 {
        let from = rng.gen_range(0..16u8);
        let to = loop {
            let t = rng.gen_range(0..16u8);
            if t != from && t != 15 - from {
                break t;
            }
        };
        let n = rng.gen_range(1..=10);
        let p = random_with(&mut rng, &[from], n - 1, &all);
        let sc = Scenario::OneColumn { from, to };
        let book = p.materialize_with_leading(&sc.leading_types()).map_err(|e| e.to_string())?;
        let a = audit_partition(&book, sc).map_err(|e| e.to_string())?;
        if !a.is_clean() {
            return Err(format!("one-column case {k}: {p} {from}->{to}: {a:?}"));
        }
    }
    for k in 0..200 {
        let source = [1u8, 2, 4][rng.gen_range(0..3)];
        let n = rng.gen_range(2..=10);
        let p = random_with(&mut rng, &[source, 7], n - 2, &all);
        let sc = Scenario::TwoBit { source };
        let book = p.materialize_with_leading(&sc.leading_types()).map_err(|e| e.to_string())?;
        let a = audit_partition(&book, sc).map_err(|e| e.to_string())?;
        if !a.is_clean() {
            return Err(format!("two-bit case {k}: {p} source {source}: {a:?}"));
        }
    }
    Ok("200 one-column and 200 two-bit scenarios".into())
}

fn c7_sign_soundness() -> Outcome {
    let list = [eps("1/10"), eps("1/4"), eps("2/5")];
    let mut checked = 0;
    for n in 1..=10 {
        for p in class_i_profiles(n) {
            let c = p.to_profile();
            let c2 = p.replaced(3);
            for e in &list {
                let diff = lambda_analytic(&c2, e).cmp(&lambda_analytic(&c, e));
                if theorem1_sign(&p, e) != diff {
                    return Err(format!("{p} at {e}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (profile, eps) pairs, n <= 10"))
}

fn c8_binomial_lemma() -> Outcome {
    let mut points = 0u64;
    for n3 in 0..=60i64 {
        for n6 in (n3..=60 - n3).step_by(2) {
            for w3 in 0..=n3 {
                for w6 in 0..=n6 {
                    if !in_w5(n3, n6, w3, w6) {
                        continue;
                    }
                    points += 1;
                    if !binomial_dominance(n3 as u64, n6 as u64, w3, w6) {
                        return Err(format!("inequality fails at ({n3},{n6},{w3},{w6})"));
                    }
                    if !in_w3_prime(n3, n6, w3, w6) {
                        return Err(format!("containment fails at ({n3},{n6},{w3},{w6})"));
                    }
                }
            }
        }
    }
    Ok(format!("{points} points, n3 + n6 <= 60"))
}

fn c9_determinism() -> Outcome {
    let mut reports = Vec::new();
    for workers in [1, 2, 8, 1] {
        let opts = VerifyOptions {
            workers,
            ..VerifyOptions::default()
        };
        let r = verify_linear_optimal(40, &opts).map_err(|e| e.to_string())?;
        reports.push(serde_json::to_string(&r.to_json()).expect("json"));
    }
    if reports.iter().any(|r| r != &reports[0]) {
        return Err("reports differ across worker counts".into());
    }
    Ok(format!("{} bytes, workers 1, 2, 8 and a repeat", reports[0].len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("oracle-analytic spectrum equivalence", c1_oracle_analytic),
        ("Class-I alpha3/alpha5 exactness", c2_class_i_exactness),
        ("linear optimal for n <= 8", c3_short_lengths),
        ("lattice sweep linear-optimal for n <= 60", c4_lattice_sweep),
        ("reduction steps never lower lambda", c5_monotone),
        ("partition suites", c6_partitions),
        ("comparison polynomial sign soundness", c7_sign_soundness),
        ("binomial dominance lemma", c8_binomial_lemma),
        ("verifier report determinism", c9_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
