//! Optimality certification for linear codes, exhaustive search for small
//! block lengths, and the best linear code of a given length.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::analytic::spectrum_analytic;
use crate::classi::{dominance_check, DominanceCertificate};
use crate::code::{ClassIProfile, CodeProfile, NUM_TYPES};
use crate::error::{Error, Result};
use crate::prob::{format_fraction, RationalProb};
use crate::spectrum::DistanceSpectrum;

/// Outcome of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    LinearOptimal,
    CounterexampleFound,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::LinearOptimal => "linear-optimal",
            Verdict::CounterexampleFound => "counterexample-found",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Worker threads; `0` lets the pool choose.
    pub workers: usize,
    /// Scan every lattice point instead of stopping a task at its first failure.
    pub full: bool,
    /// Crossover probabilities at which to report the best linear code.
    pub eps: Vec<RationalProb>,
}

/// Result of [`verify_linear_optimal`].
#[derive(Debug, Clone)]
pub struct OptimalityReport {
    pub n: u64,
    pub verdict: Verdict,
    pub profiles_checked: u64,
    /// Lattice points whose certificate was not universal, in lattice
    /// order; only the first is kept unless the sweep ran in full mode.
    pub counterexamples: Vec<DominanceCertificate>,
    /// Profiles with `|1| = 1` or `min(|3|,|5|,|6|) <= 1` that were checked.
    pub theorem_instances_checked: u64,
    pub theorem_failures: Vec<ClassIProfile>,
    pub full: bool,
    /// Best linear code at each requested crossover probability.
    pub lambda: Vec<(RationalProb, BigRational)>,
    pub elapsed: Duration,
}

impl OptimalityReport {
    pub fn counterexample(&self) -> Option<&DominanceCertificate> {
        self.counterexamples.first()
    }

    /// Everything except the elapsed time, so equal sweeps serialize equally.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Out<'a> {
            verdict: &'a str,
            n: u64,
            profiles_checked: u64,
            counterexample: serde_json::Value,
            counterexamples_found: usize,
            theorem_instances_checked: u64,
            theorem_failures: Vec<String>,
            full: bool,
            lambda: BTreeMap<String, String>,
        }
        let out = Out {
            verdict: self.verdict.as_str(),
            n: self.n,
            profiles_checked: self.profiles_checked,
            counterexample: self
                .counterexample()
                .map(|c| c.to_json())
                .unwrap_or(serde_json::Value::Null),
            counterexamples_found: self.counterexamples.len(),
            theorem_instances_checked: self.theorem_instances_checked,
            theorem_failures: self.theorem_failures.iter().map(ToString::to_string).collect(),
            full: self.full,
            lambda: self
                .lambda
                .iter()
                .map(|(e, l)| (e.to_string(), format_fraction(l)))
                .collect(),
        };
        serde_json::to_value(out).expect("plain data")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "n = {}: {}", self.n, self.verdict.as_str());
        let _ = writeln!(s, "  lattice profiles checked: {}", self.profiles_checked);
        let _ = writeln!(
            s,
            "  theorem instances checked: {} ({} failed)",
            self.theorem_instances_checked,
            self.theorem_failures.len()
        );
        if let Some(c) = self.counterexample() {
            let (d, m) = c.first_failure.clone().expect("non-universal certificate");
            let _ = writeln!(s, "  counterexample {}: margin at d = {d} is {m}", c.profile);
        }
        for (e, l) in &self.lambda {
            let _ = writeln!(s, "  best linear lambda at eps = {e}: {}", format_fraction(l));
        }
        let _ = writeln!(s, "  elapsed: {:.3}s", self.elapsed.as_secs_f64());
        s
    }
}

/// Sorted `(n1, n3, n5, n6)` visited by the sweep: `n1 >= 3` odd,
/// `2 <= n3 <= n5 <= n6` of one parity, summing to `n`.
pub fn algorithm1_lattice(n: u64) -> Vec<ClassIProfile> {
    lattice_tasks(n)
        .into_iter()
        .flat_map(|(n1, n3)| task_points(n, n1, n3))
        .collect()
}

fn lattice_tasks(n: u64) -> Vec<(u64, u64)> {
    let mut tasks = Vec::new();
    let mut n1 = 3;
    while n1 <= n {
        for n3 in 2..=(n - n1) / 3 {
            // n6 - n5 = n - n1 - n3 - 2 n5 must be even
            if (n - n1 - n3) % 2 == 0 {
                tasks.push((n1, n3));
            }
        }
        n1 += 2;
    }
    tasks
}

fn task_points(n: u64, n1: u64, n3: u64) -> impl Iterator<Item = ClassIProfile> {
    let top = (n - n1 - n3) / 2;
    (n3..=top).step_by(2).map(move |n5| {
        ClassIProfile::new(n1, n3, n5, n - n1 - n3 - n5).expect("lattice parity")
    })
}

/// Class-I profiles of length `n` with `n3 <= n5 <= n6` and either `n1 = 1`
/// or `n3 <= 1`; these lie outside the sweep lattice.
pub fn theorem_instances(n: u64) -> Vec<ClassIProfile> {
    let mut out = Vec::new();
    let mut n1 = 1;
    while n1 <= n {
        let rest = n - n1;
        for n3 in 0..=rest / 3 {
            if n1 != 1 && n3 > 1 {
                break;
            }
            let mut n5 = n3;
            while n3 + 2 * n5 <= rest {
                let n6 = rest - n3 - n5;
                if let Ok(p) = ClassIProfile::new(n1, n3, n5, n6) {
                    out.push(p);
                }
                n5 += 2;
            }
        }
        n1 += 2;
    }
    out
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::WorkerPool(e.to_string()))
}

/// Sweeps the lattice with partial-sum certificates and checks the profiles
/// covered instead by the `|1| = 1` and `min <= 1` cases.
///
/// Tasks are `(n1, n3)` pairs; each visits its `n5` values in ascending
/// order and, unless `full` is set, stops at its own first failure.
/// Results are merged in lattice order, so the report does not depend on the
/// worker count.
pub fn verify_linear_optimal(n: u64, opts: &VerifyOptions) -> Result<OptimalityReport> {
    if n == 0 {
        return Err(Error::InvalidProfile("block length must be at least 1".into()));
    }
    let start = Instant::now();
    let full = opts.full;
    let (tasks, theorem): (Vec<(u64, Vec<DominanceCertificate>)>, Vec<ClassIProfile>) =
        pool(opts.workers)?.install(|| {
            let tasks = lattice_tasks(n)
                .into_par_iter()
                .map(|(n1, n3)| {
                    let mut checked = 0;
                    let mut bad = Vec::new();
                    for p in task_points(n, n1, n3) {
                        checked += 1;
                        let cert = dominance_check(&p);
                        if !cert.is_universal() {
                            bad.push(cert);
                            if !full {
                                break;
                            }
                        }
                    }
                    (checked, bad)
                })
                .collect();
            let theorem = theorem_instances(n)
                .into_par_iter()
                .filter(|p| !dominance_check(p).is_universal())
                .collect();
            (tasks, theorem)
        });

    let profiles_checked = tasks.iter().map(|t| t.0).sum();
    let mut counterexamples: Vec<DominanceCertificate> =
        tasks.into_iter().flat_map(|t| t.1).collect();
    if !full {
        counterexamples.truncate(1);
    }
    let verdict = if !counterexamples.is_empty() {
        Verdict::CounterexampleFound
    } else if !theorem.is_empty() {
        Verdict::Inconclusive
    } else {
        Verdict::LinearOptimal
    };
    let lambda = if opts.eps.is_empty() {
        Vec::new()
    } else {
        let best = best_linear(n, &opts.eps)?;
        best.per_eps
            .into_iter()
            .map(|r| (r.eps, r.lambda))
            .collect()
    };
    Ok(OptimalityReport {
        n,
        verdict,
        profiles_checked,
        counterexamples,
        theorem_instances_checked: theorem_instances(n).len() as u64,
        theorem_failures: theorem,
        full,
        lambda,
        elapsed: start.elapsed(),
    })
}

/// Largest block length for [`exhaustive_optimal`].
pub const MAX_SEARCH_N: u64 = 12;

/// Maximizers at one crossover probability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsOptimum {
    pub eps: RationalProb,
    pub lambda: BigRational,
    /// All maximizing profiles, ascending.
    pub maximizers: Vec<CodeProfile>,
    pub linear_attains: bool,
}

impl EpsOptimum {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "eps": self.eps.to_string(),
            "lambda": format_fraction(&self.lambda),
            "maximizers": self.maximizers.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "linear_attains": self.linear_attains,
        })
    }
}

/// Result of [`exhaustive_optimal`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub n: u64,
    /// Inequivalent profiles compared.
    pub classes: usize,
    pub per_eps: Vec<EpsOptimum>,
}

impl SearchResult {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "classes": self.classes,
            "optima": self.per_eps.iter().map(EpsOptimum::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Every way to spread `n` columns over `types`, as `(type, count)` lists.
fn compositions(n: u64, types: &[u8]) -> Vec<[u64; NUM_TYPES]> {
    fn go(n: u64, types: &[u8], cur: &mut [u64; NUM_TYPES], out: &mut Vec<[u64; NUM_TYPES]>) {
        match types {
            [] => {}
            [last] => {
                cur[*last as usize] = n;
                out.push(*cur);
                cur[*last as usize] = 0;
            }
            [head, rest @ ..] => {
                for c in 0..=n {
                    cur[*head as usize] = c;
                    go(n - c, rest, cur, out);
                }
                cur[*head as usize] = 0;
            }
        }
    }
    let mut out = Vec::new();
    go(n, types, &mut [0; NUM_TYPES], &mut out);
    out
}

/// All profiles of length `n` on types 1 to 7, one per row-permutation and
/// column-flip class, ascending.
pub fn inequivalent_profiles(n: u64) -> Vec<CodeProfile> {
    let mut reps: Vec<CodeProfile> = compositions(n, &[1, 2, 3, 4, 5, 6, 7])
        .into_iter()
        .map(|c| CodeProfile::new(c).expect("n >= 1").orbit_representative())
        .collect();
    reps.sort();
    reps.dedup();
    reps
}

fn optimum<'a>(
    eps: &RationalProb,
    candidates: impl Iterator<Item = (&'a CodeProfile, &'a DistanceSpectrum)>,
) -> EpsOptimum {
    let mut best: Option<BigRational> = None;
    let mut maximizers = Vec::new();
    for (p, s) in candidates {
        let l = s.lambda(eps, 4);
        match best.as_ref().map(|b| l.cmp(b)) {
            Some(std::cmp::Ordering::Less) => {}
            Some(std::cmp::Ordering::Equal) => maximizers.push(*p),
            _ => {
                best = Some(l);
                maximizers = vec![*p];
            }
        }
    }
    maximizers.sort();
    EpsOptimum {
        eps: eps.clone(),
        lambda: best.expect("at least one candidate"),
        linear_attains: maximizers.iter().any(CodeProfile::is_linear),
        maximizers,
    }
}

/// Exact comparison of every inequivalent profile of length `n <= 12`.
pub fn exhaustive_optimal(n: u64, eps_list: &[RationalProb]) -> Result<SearchResult> {
    if n == 0 {
        return Err(Error::InvalidProfile("block length must be at least 1".into()));
    }
    if n > MAX_SEARCH_N {
        return Err(Error::SearchTooLarge {
            n: n as usize,
            max: MAX_SEARCH_N as usize,
        });
    }
    let profiles = inequivalent_profiles(n);
    let spectra: Vec<DistanceSpectrum> = profiles.par_iter().map(spectrum_analytic).collect();
    let per_eps = eps_list
        .iter()
        .map(|e| optimum(e, profiles.iter().zip(&spectra)))
        .collect();
    Ok(SearchResult {
        n,
        classes: profiles.len(),
        per_eps,
    })
}

/// Result of [`best_linear`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCodeResult {
    pub n: u64,
    /// Smallest profile maximizing at every requested crossover, if one
    /// exists; otherwise the smallest maximizer at the first.
    pub best: CodeProfile,
    pub alpha: DistanceSpectrum,
    pub per_eps: Vec<EpsOptimum>,
    /// Linear profiles compared.
    pub candidates: usize,
}

impl LinearCodeResult {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "best": self.best.to_string(),
            "alpha": self.alpha.to_json()["alpha"],
            "candidates": self.candidates,
            "optima": self.per_eps.iter().map(EpsOptimum::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Exhaustive search over `|3| + |5| + |6| = n`, reporting all ties.
pub fn best_linear(n: u64, eps_list: &[RationalProb]) -> Result<LinearCodeResult> {
    if n == 0 {
        return Err(Error::InvalidProfile("block length must be at least 1".into()));
    }
    if eps_list.is_empty() {
        return Err(Error::InvalidProbability("no crossover probability given".into()));
    }
    let profiles: Vec<CodeProfile> = compositions(n, &[3, 5, 6])
        .into_iter()
        .map(|c| CodeProfile::new(c).expect("n >= 1"))
        .collect();
    let spectra: Vec<DistanceSpectrum> = profiles.par_iter().map(spectrum_analytic).collect();
    let per_eps: Vec<EpsOptimum> = eps_list
        .iter()
        .map(|e| optimum(e, profiles.iter().zip(&spectra)))
        .collect();
    let common = per_eps[0]
        .maximizers
        .iter()
        .find(|p| per_eps.iter().all(|o| o.maximizers.contains(p)));
    let best = *common.unwrap_or(&per_eps[0].maximizers[0]);
    let idx = profiles.iter().position(|p| *p == best).expect("candidate");
    Ok(LinearCodeResult {
        n,
        best,
        alpha: spectra[idx].clone(),
        per_eps,
        candidates: profiles.len(),
    })
}
