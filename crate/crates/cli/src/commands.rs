use std::cmp::Ordering;
use std::fs;

use anyhow::{bail, Context, Result};
use num_rational::BigRational;
use serde_json::{json, Value};

use bsc4_core::analytic::{compare_at_eps, lambda_analytic, spectrum_analytic};
use bsc4_core::classi::class_i_spectra;
use bsc4_core::prob::format_fraction;
use bsc4_core::reductions::{
    argmin_type, class_i_replace, even_replace, steps_to_json, symmetry_map, two_bit_flip,
    StepParams,
};
use bsc4_core::verifier::{best_linear, exhaustive_optimal};
use bsc4_core::{
    dominance_check, reduce_to_linear_or_class_i, spectrum_bruteforce, verify_linear_optimal,
    ClassIProfile, CodeProfile, Codebook, DistanceSpectrum, Error, RationalProb, ReductionStep,
    Row, Rule, VerifyOptions,
};

use crate::render::Output;
use crate::{Check, Cli, CodeInput, Command, Engine, RuleArg};

/// Oracle cross-checks stay below this length under `--engine auto`.
const AUTO_ORACLE_MAX_N: usize = 16;

pub fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Spectrum { input, engine } => spectrum(&Code::load(input)?, *engine),
        Command::Lambda { input, eps, engine } => lambda(&Code::load(input)?, &eps.eps, *engine),
        Command::Compare {
            input,
            against,
            eps,
            engine,
        } => compare(&Code::load(input)?, against, &eps.eps, *engine),
        Command::Classify { input } => classify(&Code::load(input)?.profile()?),
        Command::Reduce {
            input,
            rule,
            s,
            t,
            source,
            target,
            eps,
        } => {
            let p = Code::load(input)?.profile()?;
            let steps = match rule {
                RuleArg::Pipeline => reduce_to_linear_or_class_i(&p).1,
                RuleArg::EvenReplace => {
                    let (Some(s), Some(t)) = (s, t) else {
                        bail!("--rule even-replace needs --s and --t");
                    };
                    vec![even_replace(&p, Row::new(*s)?, Row::new(*t)?)?]
                }
                RuleArg::TwoBitFlip => {
                    let Some(source) = source else {
                        bail!("--rule two-bit-flip needs --source");
                    };
                    vec![two_bit_flip(&p, *source)?]
                }
                RuleArg::ClassI => vec![class_i_replace(&p)?],
                RuleArg::Symmetry => {
                    let Some(target) = target else {
                        bail!("--rule symmetry needs --target");
                    };
                    let (after, rec) = symmetry_map(&p, *target)?;
                    vec![ReductionStep {
                        rule: Rule::Symmetry,
                        before: p,
                        after,
                        universal: true,
                        params: StepParams::Symmetry(rec),
                    }]
                }
            };
            reduce(&p, &steps, &eps.eps)
        }
        Command::Class1 { input, check } => class1(&Code::load(input)?.profile()?, *check),
        Command::VerifyLinear { n, full, eps } => {
            let opts = VerifyOptions {
                workers: cli.workers,
                full: *full,
                eps: eps.eps.clone(),
            };
            let report = verify_linear_optimal(*n, &opts)?;
            let json = report.to_json();
            let mut rows = vec![
                kv("n", report.n),
                kv("verdict", report.verdict.as_str()),
                kv("profiles_checked", report.profiles_checked),
                kv("counterexamples_found", report.counterexamples.len()),
                kv("theorem_instances_checked", report.theorem_instances_checked),
                kv("theorem_failures", report.theorem_failures.len()),
            ];
            if let Some(c) = report.counterexample() {
                rows.push(kv("counterexample", c.profile.to_profile()));
            }
            for (e, l) in &report.lambda {
                rows.push(kv(&format!("lambda at {e}"), format_fraction(l)));
            }
            Ok(Output::new(json, "", &["key", "value"], rows).with_text(report.to_text()))
        }
        Command::Search { n, eps } => {
            require_eps(&eps.eps)?;
            let r = exhaustive_optimal(*n, &eps.eps)?;
            let rows = r
                .per_eps
                .iter()
                .map(|o| {
                    vec![
                        o.eps.to_string(),
                        format_fraction(&o.lambda),
                        o.linear_attains.to_string(),
                        joined(&o.maximizers),
                    ]
                })
                .collect();
            let title = format!("n = {}, {} inequivalent codes", r.n, r.classes);
            Ok(Output::new(
                r.to_json(),
                &title,
                &["eps", "lambda", "linear_attains", "maximizers"],
                rows,
            )
            .with_fraction_cols(&[1]))
        }
        Command::BestLinear { n, eps } => {
            require_eps(&eps.eps)?;
            let r = best_linear(*n, &eps.eps)?;
            let rows = r
                .per_eps
                .iter()
                .map(|o| vec![o.eps.to_string(), format_fraction(&o.lambda), joined(&o.maximizers)])
                .collect();
            let title = format!("n = {}: best {} of {} linear codes", r.n, r.best, r.candidates);
            Ok(Output::new(r.to_json(), &title, &["eps", "lambda", "maximizers"], rows)
                .with_fraction_cols(&[1]))
        }
    }
}

/// A code given either as a profile or as an explicit codebook.
enum Code {
    Profile(CodeProfile),
    Book(Codebook),
}

impl Code {
    fn load(input: &CodeInput) -> Result<Self> {
        match (&input.profile, &input.codebook_file) {
            (Some(p), _) => Ok(Code::Profile(*p)),
            (None, Some(path)) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("cannot read {}", path.display()))?;
                Ok(Code::Book(Codebook::parse_lines(&text)?))
            }
            (None, None) => bail!("give --profile or --codebook-file"),
        }
    }

    fn n(&self) -> usize {
        match self {
            Code::Profile(p) => p.n() as usize,
            Code::Book(b) => b.n(),
        }
    }

    fn size(&self) -> usize {
        match self {
            Code::Profile(_) => 4,
            Code::Book(b) => b.len(),
        }
    }

    fn label(&self) -> String {
        match self {
            Code::Profile(p) => p.to_string(),
            Code::Book(b) => b.to_lines().join(","),
        }
    }

    fn profile(&self) -> Result<CodeProfile> {
        match self {
            Code::Profile(p) => Ok(*p),
            Code::Book(b) => Ok(b.profile()?),
        }
    }

    fn book(&self) -> Codebook {
        match self {
            Code::Profile(p) => p.materialize(),
            Code::Book(b) => b.clone(),
        }
    }

    fn spectrum(&self, engine: Engine) -> Result<DistanceSpectrum> {
        Ok(match resolve(engine, self.n()) {
            Engine::Oracle => spectrum_bruteforce(&self.book())?,
            _ => spectrum_analytic(&self.profile()?),
        })
    }
}

fn resolve(engine: Engine, n: usize) -> Engine {
    match engine {
        Engine::Auto if n <= AUTO_ORACLE_MAX_N => Engine::Oracle,
        Engine::Auto => Engine::Analytic,
        e => e,
    }
}

fn require_eps(eps: &[RationalProb]) -> Result<()> {
    if eps.is_empty() {
        bail!("give at least one --eps");
    }
    Ok(())
}

fn kv(key: &str, value: impl ToString) -> Vec<String> {
    vec![key.to_string(), value.to_string()]
}

fn joined(ps: &[CodeProfile]) -> String {
    ps.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn strs<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn spectrum(code: &Code, engine: Engine) -> Result<Output> {
    let s = code.spectrum(engine)?;
    let json = json!({
        "code": code.label(),
        "n": s.n(),
        "alpha": strs(s.alpha()),
    });
    let rows = s
        .alpha()
        .iter()
        .enumerate()
        .map(|(d, a)| vec![d.to_string(), a.to_string()])
        .collect();
    let title = format!("distance spectrum of {} (n = {})", code.label(), s.n());
    Ok(Output::new(json, &title, &["d", "alpha_d"], rows))
}

fn lambda(code: &Code, eps: &[RationalProb], engine: Engine) -> Result<Output> {
    require_eps(eps)?;
    let s = code.spectrum(engine)?;
    let values: Vec<(String, String)> = eps
        .iter()
        .map(|e| (e.to_string(), format_fraction(&s.lambda(e, code.size()))))
        .collect();
    let json = json!({
        "code": code.label(),
        "n": s.n(),
        "codewords": code.size(),
        "values": values.iter().map(|(e, l)| json!({"eps": e, "lambda": l})).collect::<Vec<_>>(),
    });
    let rows = values.into_iter().map(|(e, l)| vec![e, l]).collect();
    let title = format!("probability of correct decoding for {}", code.label());
    Ok(Output::new(json, &title, &["eps", "lambda"], rows).with_fraction_cols(&[1]))
}

fn order_text(o: Ordering) -> &'static str {
    match o {
        Ordering::Greater => "first",
        Ordering::Less => "second",
        Ordering::Equal => "tie",
    }
}

/// Certificate for `b` when it is `a` with one type-1 column moved to type 3,
/// 5 or 6, up to column flips.
fn replacement_certificate(a: &CodeProfile, b: &CodeProfile) -> Option<Value> {
    let a = a.fold_complements();
    let ci = ClassIProfile::try_from(&a).ok()?;
    let b = b.fold_complements();
    let target = [3u8, 5, 6].into_iter().find(|&t| ci.replaced(t) == b)?;
    let (mapped, _) = symmetry_map(&a, target).ok()?;
    let cert = dominance_check(&ClassIProfile::try_from(&mapped).ok()?);
    Some(json!({"replaced_type": target, "certificate": cert.to_json()}))
}

fn compare(a: &Code, b: &CodeProfile, eps: &[RationalProb], engine: Engine) -> Result<Output> {
    if a.n() != b.n() as usize {
        return Err(Error::LengthMismatch {
            left: a.n(),
            right: b.n() as usize,
        }
        .into());
    }
    let other = Code::Profile(*b);
    let (sa, sb) = (a.spectrum(engine)?, other.spectrum(engine)?);
    let mut values = Vec::new();
    let mut rows = Vec::new();
    for e in eps {
        let (la, lb): (BigRational, BigRational) = (sa.lambda(e, a.size()), sb.lambda(e, 4));
        let order = match (resolve(engine, a.n()), a) {
            (Engine::Analytic, Code::Profile(p)) => compare_at_eps(p, b, e)?,
            _ => la.cmp(&lb),
        };
        let diff = format_fraction(&(&la - &lb));
        let (la, lb) = (format_fraction(&la), format_fraction(&lb));
        values.push(json!({
            "eps": e.to_string(),
            "lambda_a": la,
            "lambda_b": lb,
            "difference": diff,
            "better": order_text(order),
        }));
        rows.push(vec![e.to_string(), la, lb, diff, order_text(order).to_string()]);
    }
    let dominance = match a.profile() {
        Ok(p) => replacement_certificate(&p, b).or_else(|| replacement_certificate(b, &p)),
        Err(_) => None,
    };
    let json = json!({
        "first": a.label(),
        "second": b.to_string(),
        "n": a.n(),
        "values": values,
        "dominance": dominance,
    });
    let mut title = format!("{} vs {}", a.label(), b);
    if let Some(d) = &dominance {
        title.push_str(&format!(
            "\ntype-{} replacement certificate: {}",
            d["replaced_type"], d["certificate"]["kind"].as_str().unwrap_or("?")
        ));
    }
    Ok(Output::new(
        json,
        &title,
        &["eps", "lambda_a", "lambda_b", "difference", "better"],
        rows,
    )
    .with_fraction_cols(&[1, 2, 3]))
}

fn classify(p: &CodeProfile) -> Result<Output> {
    let folded = p.fold_complements();
    let core = folded.without_zero_columns();
    let ci = core.as_ref().and_then(|q| ClassIProfile::try_from(q).ok());
    let weights: Vec<u64> = Row::ALL.iter().map(|r| p.row_weight(*r)).collect();
    let mut pairs = serde_json::Map::new();
    for (i, s) in Row::ALL.iter().enumerate() {
        for t in &Row::ALL[i + 1..] {
            pairs.insert(
                format!("{}-{}", s.number(), t.number()),
                json!(p.pair_distance(*s, *t)),
            );
        }
    }
    let json = json!({
        "profile": p.to_string(),
        "n": p.n(),
        "folded": folded.to_string(),
        "canonical": p.canonicalize().to_string(),
        "orbit_representative": p.orbit_representative().to_string(),
        "linear": p.is_linear(),
        "class_i": ci.is_some(),
        "class_i_counts": ci.map(|c| json!([c.n1, c.n3, c.n5, c.n6])),
        "least_frequent_type": ci.map(|c| argmin_type(&c)),
        "zero_columns": folded.count(0),
        "row_weights": weights,
        "pair_distances": pairs,
    });
    let rows = json
        .as_object()
        .expect("object")
        .iter()
        .map(|(k, v)| kv(k, v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string())))
        .collect();
    Ok(Output::new(json, "", &["key", "value"], rows))
}

fn is_linear_or_class_i(p: &CodeProfile) -> &'static str {
    if p.support_within(&[0, 3, 5, 6]) {
        return "linear";
    }
    match p.without_zero_columns() {
        Some(q) if q.is_class_i() => "class-i",
        _ => "other",
    }
}

fn reduce(input: &CodeProfile, steps: &[ReductionStep], eps: &[RationalProb]) -> Result<Output> {
    let mut cur = *input;
    for (k, s) in steps.iter().enumerate() {
        let replayed = s.replay()?;
        if s.before != cur || replayed != s.after || s.after.n() != input.n() {
            bail!("step {} ({}) failed its replay audit", k + 1, s.rule.as_str());
        }
        cur = s.after;
    }
    let chain: Vec<CodeProfile> = std::iter::once(*input).chain(steps.iter().map(|s| s.after)).collect();
    let trace: Vec<Value> = eps
        .iter()
        .map(|e| {
            let ls: Vec<BigRational> = chain.iter().map(|p| lambda_analytic(p, e)).collect();
            json!({
                "eps": e.to_string(),
                "lambda": ls.iter().map(format_fraction).collect::<Vec<_>>(),
                "monotone": ls.windows(2).all(|w| w[1] >= w[0]),
            })
        })
        .collect();
    let rule_steps = steps.iter().filter(|s| s.rule != Rule::Symmetry).count();
    let json = json!({
        "input": input.to_string(),
        "output": cur.to_string(),
        "terminal": is_linear_or_class_i(&cur),
        "rule_steps": rule_steps,
        "steps": steps_to_json(steps),
        "audit": {"replayed": steps.len(), "ok": true},
        "lambda_trace": trace,
    });
    let rows = steps
        .iter()
        .enumerate()
        .map(|(k, s)| {
            vec![
                (k + 1).to_string(),
                s.rule.as_str().to_string(),
                s.before.to_string(),
                s.after.to_string(),
                s.universal.to_string(),
            ]
        })
        .collect();
    let title = format!(
        "{} -> {} ({}, {} rule steps, all replays ok)",
        input,
        cur,
        is_linear_or_class_i(&cur),
        rule_steps
    );
    Ok(Output::new(json, &title, &["step", "rule", "before", "after", "universal"], rows))
}

fn class1(p: &CodeProfile, check: Check) -> Result<Output> {
    let ci = ClassIProfile::try_from(&p.fold_complements())?;
    match check {
        Check::Spectra => {
            let sp = class_i_spectra(&ci);
            let json = json!({
                "class_i": [ci.n1, ci.n3, ci.n5, ci.n6],
                "profile": ci.to_profile().to_string(),
                "replacement": ci.replaced(3).to_string(),
                "alpha3": strs(&sp.alpha3),
                "alpha5": strs(&sp.alpha5),
            });
            let rows = (0..sp.alpha3.len())
                .map(|i| vec![i.to_string(), sp.alpha3[i].to_string(), sp.alpha5[i].to_string()])
                .collect();
            let title = format!("Class-I spectra of {ci}");
            Ok(Output::new(json, &title, &["i", "alpha3", "alpha5"], rows))
        }
        Check::Dominance => {
            let cert = dominance_check(&ci);
            let rows = cert
                .margins
                .iter()
                .zip(&cert.coefficients)
                .enumerate()
                .map(|(k, (m, c))| vec![(k + 1).to_string(), m.to_string(), c.to_string()])
                .collect();
            let mut title = format!("{ci} -> {}: {}", ci.replaced(3), cert.kind.as_str());
            if let Some((d, m)) = &cert.first_failure {
                title.push_str(&format!(", first negative margin at d = {d}: {m}"));
            }
            Ok(Output::new(cert.to_json(), &title, &["d", "margin", "coefficient"], rows))
        }
    }
}
