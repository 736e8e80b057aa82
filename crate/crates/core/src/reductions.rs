//! Column rewrites that never lower the decoding probability, and the
//! pipeline that drives any profile to a linear or Class-I form.

use std::fmt;

use serde_json::json;

use crate::classi::dominance_check;
use crate::code::{ClassIProfile, CodeProfile, Row};
use crate::error::{Error, Result};

/// Name of a rewrite rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    EvenReplace,
    TwoBitFlip,
    ClassIOne,
    ClassIMin01,
    Symmetry,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::EvenReplace => "even-replace",
            Rule::TwoBitFlip => "two-bit-flip",
            Rule::ClassIOne => "classI-|1|=1",
            Rule::ClassIMin01 => "classI-min01",
            Rule::Symmetry => "symmetry",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A row rearrangement followed by folding types above 7. New row `r` holds
/// old row `perm[r]` (zero-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymmetryRecord {
    pub perm: [usize; 4],
}

impl SymmetryRecord {
    pub const IDENTITY: SymmetryRecord = SymmetryRecord { perm: [0, 1, 2, 3] };

    fn swap(a: usize, b: usize) -> Self {
        let mut perm = [0, 1, 2, 3];
        perm.swap(a, b);
        SymmetryRecord { perm }
    }

    pub fn apply(&self, profile: &CodeProfile) -> CodeProfile {
        profile.permute_rows(self.perm).fold_complements()
    }

    pub fn inverse(&self) -> Self {
        let mut perm = [0; 4];
        for (r, &src) in self.perm.iter().enumerate() {
            perm[src] = r;
        }
        SymmetryRecord { perm }
    }
}

/// Parameters needed to replay a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepParams {
    EvenReplace { s: Row, t: Row },
    TwoBitFlip { source: u8 },
    ClassI { target: u8 },
    Symmetry(SymmetryRecord),
}

/// One rewrite with its input and output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub rule: Rule,
    pub before: CodeProfile,
    pub after: CodeProfile,
    /// The rewrite is no worse at every crossover probability.
    pub universal: bool,
    pub params: StepParams,
}

impl ReductionStep {
    /// Recomputes `after` from `before` and the recorded parameters.
    pub fn replay(&self) -> Result<CodeProfile> {
        let step = match self.params {
            StepParams::EvenReplace { s, t } => even_replace(&self.before, s, t)?,
            StepParams::TwoBitFlip { source } => two_bit_flip(&self.before, source)?,
            StepParams::ClassI { .. } => class_i_replace(&self.before)?,
            StepParams::Symmetry(rec) => return Ok(rec.apply(&self.before)),
        };
        Ok(step.after)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let params = match self.params {
            StepParams::EvenReplace { s, t } => json!({"s": s.number(), "t": t.number()}),
            StepParams::TwoBitFlip { source } => json!({"source": source}),
            StepParams::ClassI { target } => json!({"target": target}),
            StepParams::Symmetry(rec) => json!({"perm": rec.perm}),
        };
        json!({
            "rule": self.rule.as_str(),
            "before": self.before.to_string(),
            "after": self.after.to_string(),
            "universal": self.universal,
            "params": params,
        })
    }
}

/// Serializes a step list as a JSON array.
pub fn steps_to_json(steps: &[ReductionStep]) -> serde_json::Value {
    serde_json::Value::Array(steps.iter().map(ReductionStep::to_json).collect())
}

fn not_applicable(rule: &'static str, reason: String) -> Error {
    Error::RuleNotApplicable { rule, reason }
}

/// Replaces one column of type `2^(4-s)` by `2^(4-s) + 2^(4-t)`; requires
/// `w(c_s xor c_t)` even.
pub fn even_replace(profile: &CodeProfile, s: Row, t: Row) -> Result<ReductionStep> {
    const RULE: &str = "even-replace";
    if s == t {
        return Err(not_applicable(RULE, format!("rows s = t = {s}")));
    }
    let from = s.unit_type();
    if profile.count(from) == 0 {
        return Err(not_applicable(RULE, format!("no column of type {from}")));
    }
    let w = profile.pair_distance(s, t);
    if w % 2 == 1 {
        return Err(not_applicable(
            RULE,
            format!("w(c{s} xor c{t}) = {w} is odd"),
        ));
    }
    let to = from + t.unit_type();
    Ok(ReductionStep {
        rule: Rule::EvenReplace,
        before: *profile,
        after: profile.adjusted(&[(from, -1), (to, 1)])?,
        universal: true,
        params: StepParams::EvenReplace { s, t },
    })
}

/// Types replacing a `(source, 7)` column pair.
pub fn two_bit_targets(source: u8) -> Option<(u8, u8)> {
    match source {
        1 => Some((3, 5)),
        2 => Some((3, 6)),
        4 => Some((5, 6)),
        _ => None,
    }
}

/// Replaces one column of type `source` and one of type 7 by the pair
/// `(3,5)`, `(3,6)` or `(5,6)` for `source = 1, 2, 4`.
pub fn two_bit_flip(profile: &CodeProfile, source: u8) -> Result<ReductionStep> {
    const RULE: &str = "two-bit-flip";
    let (a, b) = two_bit_targets(source)
        .ok_or_else(|| not_applicable(RULE, format!("source type {source} not in {{1,2,4}}")))?;
    if profile.count(source) == 0 || profile.count(7) == 0 {
        return Err(not_applicable(
            RULE,
            format!("needs columns of types {source} and 7"),
        ));
    }
    Ok(ReductionStep {
        rule: Rule::TwoBitFlip,
        before: *profile,
        after: profile.adjusted(&[(source, -1), (7, -1), (a, 1), (b, 1)])?,
        universal: true,
        params: StepParams::TwoBitFlip { source },
    })
}

/// Moves type `target` into the type-3 slot of a profile on `{0,1,3,5,6}`.
///
/// Target 5 swaps rows 2 and 3 (3 and 5 exchange); target 6 swaps rows 1
/// and 3, which after folding exchanges 3 and 6. Both are involutions.
pub fn symmetry_map(profile: &CodeProfile, target: u8) -> Result<(CodeProfile, SymmetryRecord)> {
    if !profile.support_within(&[0, 1, 3, 5, 6]) {
        return Err(Error::UnsupportedSupport(format!(
            "{profile} has types outside {{1,3,5,6}}"
        )));
    }
    let rec = match target {
        3 => SymmetryRecord::IDENTITY,
        5 => SymmetryRecord::swap(1, 2),
        6 => SymmetryRecord::swap(0, 2),
        _ => {
            return Err(Error::UnsupportedSupport(format!(
                "target type {target} not in {{3,5,6}}"
            )))
        }
    };
    Ok((rec.apply(profile), rec))
}

fn symmetry_step(profile: &CodeProfile, rec: SymmetryRecord) -> ReductionStep {
    ReductionStep {
        rule: Rule::Symmetry,
        before: *profile,
        after: rec.apply(profile),
        universal: true,
        params: StepParams::Symmetry(rec),
    }
}

/// Type among 3, 5, 6 with the smallest count; ties go to the smaller type.
pub fn argmin_type(p: &ClassIProfile) -> u8 {
    let mut best = (p.n3, 3u8);
    for (c, t) in [(p.n5, 5u8), (p.n6, 6u8)] {
        if c < best.0 {
            best = (c, t);
        }
    }
    best.1
}

/// Replaces one type-1 column of a Class-I code by the least frequent of
/// types 3, 5, 6 when `|1| = 1` or that count is at most 1.
///
/// `universal` is taken from the partial-sum certificate of the mapped
/// profile.
pub fn class_i_replace(profile: &CodeProfile) -> Result<ReductionStep> {
    const RULE: &str = "classI";
    let ci = ClassIProfile::try_from(profile)
        .map_err(|e| not_applicable(RULE, e.to_string()))?;
    let target = argmin_type(&ci);
    let min = ci.n3.min(ci.n5).min(ci.n6);
    let rule = if ci.n1 == 1 {
        Rule::ClassIOne
    } else if min <= 1 {
        Rule::ClassIMin01
    } else {
        return Err(not_applicable(
            RULE,
            format!("|1| = {} and min(|3|,|5|,|6|) = {min}", ci.n1),
        ));
    };
    let (mapped, _) = symmetry_map(profile, target)?;
    let cert = dominance_check(&ClassIProfile::try_from(&mapped)?);
    Ok(ReductionStep {
        rule,
        before: *profile,
        after: profile.adjusted(&[(1, -1), (target, 1)])?,
        universal: cert.is_universal(),
        params: StepParams::ClassI { target },
    })
}

fn is_linear_or_class_i(p: &CodeProfile) -> bool {
    if p.support_within(&[0, 3, 5, 6]) {
        return true;
    }
    match p.without_zero_columns() {
        Some(q) => q.is_class_i(),
        None => true,
    }
}

fn push_fold(steps: &mut Vec<ReductionStep>, cur: &mut CodeProfile) {
    if cur.support().any(|t| t > 7) {
        let s = symmetry_step(cur, SymmetryRecord::IDENTITY);
        *cur = s.after;
        steps.push(s);
    }
}

fn push(steps: &mut Vec<ReductionStep>, cur: &mut CodeProfile, step: ReductionStep) {
    *cur = step.after;
    steps.push(step);
    push_fold(steps, cur);
}

/// Even replacement over rows `rows` minimizing the resulting `|1|`, ties to
/// the smallest `(s, t)`.
fn best_even_replace(p: &CodeProfile, rows: &[usize]) -> Option<ReductionStep> {
    let mut best: Option<ReductionStep> = None;
    for &s in rows {
        for &t in rows {
            let (Ok(rs), Ok(rt)) = (Row::new(s), Row::new(t)) else { continue };
            if let Ok(step) = even_replace(p, rs, rt) {
                let better = best
                    .as_ref()
                    .is_none_or(|b| step.after.fold_complements().count(1) < b.after.fold_complements().count(1));
                if better {
                    best = Some(step);
                }
            }
        }
    }
    best
}

/// Drives `profile` to a linear or Class-I profile by universal steps.
///
/// All-zero columns are carried along unchanged; the Class-I test is made on
/// the remaining columns.
pub fn reduce_to_linear_or_class_i(profile: &CodeProfile) -> (CodeProfile, Vec<ReductionStep>) {
    let mut steps = Vec::new();
    let mut cur = *profile;
    push_fold(&mut steps, &mut cur);

    let light = |p: &CodeProfile| p.count(1) + p.count(2) + p.count(4);
    if cur.count(7) > 0 && cur.count(7) <= light(&cur) {
        while cur.count(7) > 0 {
            let src = [1u8, 2, 4].into_iter().find(|&s| cur.count(s) > 0).expect("enough light columns");
            let step = two_bit_flip(&cur, src).expect("checked counts");
            push(&mut steps, &mut cur, step);
        }
    } else if cur.count(7) > light(&cur) {
        for src in [1u8, 2, 4] {
            while cur.count(src) > 0 {
                let step = two_bit_flip(&cur, src).expect("checked counts");
                push(&mut steps, &mut cur, step);
            }
        }
        // 7 -> 8 by complement, then rows 1 and 4 swap: 8 -> 1, 3 <-> 5
        let step = symmetry_step(&cur, SymmetryRecord::swap(0, 3));
        push(&mut steps, &mut cur, step);
    }

    // at most one of |1|, |2|, |4| may stay positive
    while [1u8, 2, 4].iter().filter(|&&t| cur.count(t) > 0).count() >= 2 {
        let step = best_even_replace(&cur, &[2, 3, 4]).expect("a pair of rows 2-4 has even distance");
        push(&mut steps, &mut cur, step);
    }
    if cur.count(2) > 0 {
        let step = symmetry_step(&cur, SymmetryRecord::swap(2, 3));
        push(&mut steps, &mut cur, step);
    } else if cur.count(4) > 0 {
        let step = symmetry_step(&cur, SymmetryRecord::swap(1, 3));
        push(&mut steps, &mut cur, step);
    }

    while !is_linear_or_class_i(&cur) {
        let step = best_even_replace(&cur, &[1, 2, 3, 4]).expect("some row pair with row 4 is even");
        push(&mut steps, &mut cur, step);
    }
    (cur, steps)
}
