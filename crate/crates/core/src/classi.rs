//! Class-I codes: closed-form `alpha^3`/`alpha^5` sums and dominance tests.
//!
//! The compared code `C'` replaces one type-1 column of `C` by type 3. All
//! half-integer bounds are handled on doubled integers; Class-I parity makes
//! every asserted equality integral.

use std::cmp::Ordering;
use std::ops::{AddAssign, Mul};

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde_json::json;

use crate::analytic::{codeword_distances, WeightTuple};
use crate::binomial::{binomial, BinomialRow};
use crate::code::{ClassIProfile, CodeProfile};
use crate::error::{Error, Result};
use crate::prob::RationalProb;

/// The output's distances to the four rows, with the bit on the replaced
/// column pulled out.
fn distances(profile: &CodeProfile, y1: bool, tuple: &WeightTuple) -> Result<[u64; 4]> {
    let p = ClassIProfile::try_from(profile)?;
    let w1 = tuple.get(1);
    if (y1 && w1 == 0) || (!y1 && w1 >= p.n1) {
        return Err(Error::InvalidProfile(format!(
            "w1 = {w1} inconsistent with y1 = {} and |1| = {}",
            y1 as u8, p.n1
        )));
    }
    codeword_distances(profile, tuple)
}

/// `y1 = 1` and `d4 >= min(d1, d2) = d3`.
pub fn y3_membership(profile: &CodeProfile, y1: bool, tuple: &WeightTuple) -> Result<bool> {
    let d = distances(profile, y1, tuple)?;
    Ok(y1 && d[0].min(d[1]) == d[2] && d[3] >= d[2])
}

/// `y1 = 1` and `min(d1, d2) >= d4 + 2 = d3 + 1`.
pub fn y5_membership(profile: &CodeProfile, y1: bool, tuple: &WeightTuple) -> Result<bool> {
    let d = distances(profile, y1, tuple)?;
    Ok(y1 && d[3] + 1 == d[2] && d[0].min(d[1]) >= d[3] + 2)
}

/// `alpha_i^3` and `alpha_i^5` for `i = 0..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassISpectra {
    pub profile: ClassIProfile,
    pub alpha3: Vec<BigUint>,
    pub alpha5: Vec<BigUint>,
}

trait Acc: Clone + Zero + for<'a> AddAssign<&'a Self> + for<'a> Mul<&'a Self, Output = Self> {}
impl<T> Acc for T where T: Clone + Zero + for<'a> AddAssign<&'a T> + for<'a> Mul<&'a T, Output = T> {}

/// Products of the four binomials are bounded by `2^(n-1)` and the sums by
/// `2^n`, so `u128` is exact below this length.
const NATIVE_LIMIT: u64 = 127;

fn kernel<T: Acc>(p: &ClassIProfile, rows: [Vec<T>; 4]) -> (Vec<T>, Vec<T>) {
    let [c1, c3, c5, c6] = rows;
    let (n1, n3, n5, n6) = (p.n1 as i64, p.n3 as i64, p.n5 as i64, p.n6 as i64);
    let n = n1 + n3 + n5 + n6;
    let mut a3 = vec![T::zero(); n as usize + 1];
    let mut a5 = vec![T::zero(); n as usize + 1];

    // Y3 split by w5 + w6 < (|5| + |6|)/2 (part A) or not (part B)
    for w1 in 1..=n1 {
        let ineq = n1 + n5 - n6 - 2 * w1;
        for w5 in 0..=n5 {
            let base = c1[(w1 - 1) as usize].clone() * &c5[w5 as usize];
            for w6 in 0..=n6 {
                if 2 * (w5 - w6) > ineq {
                    continue;
                }
                let (w3, i) = if 2 * (w5 + w6) < n5 + n6 {
                    ((n3 + n6) / 2 - w6, w1 + w5 + (n3 + n6) / 2)
                } else {
                    (w5 + (n3 - n5) / 2, w1 + n6 - w6 + (n3 + n5) / 2)
                };
                if !(0..=n3).contains(&w3) || !(0..=n).contains(&i) {
                    continue;
                }
                let term = base.clone() * &c6[w6 as usize] * &c3[w3 as usize];
                a3[i as usize] += &term;
            }
        }
    }

    // Y5: w3 fixes i, and w5 is determined by w1 and w6
    let w5_offset = (n1 + n5 - n6 + 1) / 2;
    for w1 in 1..=n1 {
        for w3 in 0..=n3 {
            let i = (n + n3 - 1) / 2 - w3;
            if !(0..=n).contains(&i) {
                continue;
            }
            let base = c1[(w1 - 1) as usize].clone() * &c3[w3 as usize];
            for w6 in 0..=n6 {
                let w5 = w5_offset - w1 + w6;
                if !(0..=n5).contains(&w5)
                    || 2 * (w3 + w6) < n3 + n6 + 1
                    || 2 * (w3 - w5) < n3 - n5 + 1
                {
                    continue;
                }
                let term = base.clone() * &c5[w5 as usize] * &c6[w6 as usize];
                a5[i as usize] += &term;
            }
        }
    }
    (a3, a5)
}

fn big_rows(p: &ClassIProfile) -> [Vec<BigUint>; 4] {
    let row = |a: u64| {
        let r = BinomialRow::new(a);
        (0..=a as i64).map(|k| r.get(k).clone()).collect::<Vec<_>>()
    };
    [row(p.n1 - 1), row(p.n3), row(p.n5), row(p.n6)]
}

/// Exact `alpha^3`/`alpha^5` vectors of a Class-I profile.
pub fn class_i_spectra(profile: &ClassIProfile) -> ClassISpectra {
    let rows = big_rows(profile);
    let (alpha3, alpha5) = if profile.n() < NATIVE_LIMIT {
        let native = rows.map(|r| {
            r.iter()
                .map(|v| v.to_u128().expect("below 2^127"))
                .collect::<Vec<u128>>()
        });
        let (a3, a5) = kernel(profile, native);
        (
            a3.into_iter().map(BigUint::from).collect(),
            a5.into_iter().map(BigUint::from).collect(),
        )
    } else {
        kernel(profile, rows)
    };
    ClassISpectra {
        profile: *profile,
        alpha3,
        alpha5,
    }
}

/// `alpha_i^3`; zero for `i > n`.
pub fn alpha3(profile: &ClassIProfile, i: usize) -> BigUint {
    class_i_spectra(profile)
        .alpha3
        .get(i)
        .cloned()
        .unwrap_or_default()
}

/// `alpha_i^5`; zero for `i > n`.
pub fn alpha5(profile: &ClassIProfile, i: usize) -> BigUint {
    class_i_spectra(profile)
        .alpha5
        .get(i)
        .cloned()
        .unwrap_or_default()
}

/// Outcome of the partial-sum test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CertificateKind {
    /// Every margin is nonnegative: `C'` is no worse at every crossover.
    Universal,
    /// Some margin is negative but the lowest-order nonzero coefficient of
    /// the comparison polynomial is positive, so the order depends on `eps`.
    EpsDependent,
    /// The lowest-order nonzero coefficient is negative: `C'` is strictly
    /// worse for all small enough `eps`.
    Refuted,
}

impl CertificateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CertificateKind::Universal => "universal",
            CertificateKind::EpsDependent => "eps-dependent",
            CertificateKind::Refuted => "refuted",
        }
    }
}

/// Partial-sum margins `Psi_d = sum_{i=1}^d (alpha_i^3 - alpha_{i-1}^5)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominanceCertificate {
    pub kind: CertificateKind,
    pub profile: ClassIProfile,
    /// Column type that replaces one type-1 column.
    pub replacement: u8,
    /// `Psi_1 ..= Psi_n`.
    pub margins: Vec<BigInt>,
    /// First `d` with `Psi_d < 0`, and that margin.
    pub first_failure: Option<(usize, BigInt)>,
    /// `c_1 ..= c_n` of the comparison polynomial.
    pub coefficients: Vec<BigInt>,
}

impl DominanceCertificate {
    pub fn is_universal(&self) -> bool {
        self.kind == CertificateKind::Universal
    }

    pub fn to_json(&self) -> serde_json::Value {
        let strs = |v: &[BigInt]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
        json!({
            "kind": self.kind.as_str(),
            "profile": self.profile.to_profile().to_string(),
            "class_i": [self.profile.n1, self.profile.n3, self.profile.n5, self.profile.n6],
            "replacement": self.replacement,
            "margins": strs(&self.margins),
            "first_failure": self.first_failure.as_ref().map(|(d, m)| json!({
                "d": d,
                "margin": m.to_string(),
            })),
            "coefficients": if self.kind == CertificateKind::EpsDependent {
                json!(strs(&self.coefficients))
            } else {
                serde_json::Value::Null
            },
        })
    }
}

/// `c_d = alpha_d^3 - alpha_{d-1}^5` for `d = 1..=n` (entry `d - 1`).
pub fn theorem1_polynomial(profile: &ClassIProfile) -> Vec<BigInt> {
    polynomial_of(&class_i_spectra(profile))
}

fn polynomial_of(s: &ClassISpectra) -> Vec<BigInt> {
    (1..s.alpha3.len())
        .map(|d| BigInt::from(s.alpha3[d].clone()) - BigInt::from(s.alpha5[d - 1].clone()))
        .collect()
}

/// Sign of `sum_d c_d t^(d-1)` at `t = eps/(1-eps)`.
///
/// `lambda_C' - lambda_C` equals this polynomial times the positive factor
/// `(1-eps)^n (1-t) / 4`, so the two share a sign.
pub fn polynomial_sign(coeffs: &[BigInt], eps: &RationalProb) -> Ordering {
    if coeffs.is_empty() {
        return Ordering::Equal;
    }
    // scaled by (q-p)^(len-1): sum_d c_d p^(d-1) (q-p)^(len-d)
    let p = BigInt::from(eps.numer().clone());
    let qp = BigInt::from(eps.complement_numer());
    let mut acc = BigInt::zero();
    let mut qp_pow = BigInt::from(1);
    for c in coeffs.iter().rev() {
        acc = acc * &p + c * &qp_pow;
        qp_pow *= &qp;
    }
    acc.cmp(&BigInt::zero())
}

/// Sign of `lambda_C' - lambda_C` from the comparison polynomial.
pub fn theorem1_sign(profile: &ClassIProfile, eps: &RationalProb) -> Ordering {
    polynomial_sign(&theorem1_polynomial(profile), eps)
}

/// Partial-sum certificate for replacing one type-1 column by type 3.
pub fn dominance_check(profile: &ClassIProfile) -> DominanceCertificate {
    let coefficients = polynomial_of(&class_i_spectra(profile));
    let mut margins = Vec::with_capacity(coefficients.len());
    let mut run = BigInt::zero();
    let mut first_failure = None;
    for (k, c) in coefficients.iter().enumerate() {
        run += c;
        if first_failure.is_none() && run < BigInt::zero() {
            first_failure = Some((k + 1, run.clone()));
        }
        margins.push(run.clone());
    }
    let kind = if first_failure.is_none() {
        CertificateKind::Universal
    } else if coefficients.iter().find(|c| !c.is_zero()).is_some_and(|c| c < &BigInt::zero()) {
        CertificateKind::Refuted
    } else {
        CertificateKind::EpsDependent
    };
    DominanceCertificate {
        kind,
        profile: *profile,
        replacement: 3,
        margins,
        first_failure,
        coefficients,
    }
}

/// `(w3, w6)` with `w3 + w6 >= (|3|+|6|)/2 + 1`, `w3 - w6 >= (|3|-|6|)/2 + 1`
/// and both weights within their counts.
pub fn in_w5(n3: i64, n6: i64, w3: i64, w6: i64) -> bool {
    (0..=n3).contains(&w3)
        && (0..=n6).contains(&w6)
        && 2 * (w3 + w6) >= n3 + n6 + 2
        && 2 * (w3 - w6) >= n3 - n6 + 2
}

/// Image set of the `Y_3^B` weights after exchanging the roles of `w3`, `w6`.
pub fn in_w3_prime(n3: i64, n6: i64, w3: i64, w6: i64) -> bool {
    2 * (w3 + w6) >= n3 + n6
        && 2 * (w3 - w6) >= n3 - n6 + 1
        && n3 - n6 <= 2 * w3
        && 2 * w3 <= n3 + n6
        && n6 - n3 <= 2 * w6
        && 2 * w6 <= n3 + n6
}

/// `C(n3, w3) C(n6, w6) <= C(n3, (n3-n6)/2 + w6) C(n6, (n6-n3)/2 + w3)`.
pub fn binomial_dominance(n3: u64, n6: u64, w3: i64, w6: i64) -> bool {
    let half = (n3 as i64 - n6 as i64) / 2;
    binomial(n3, w3) * binomial(n6, w6) <= binomial(n3, half + w6) * binomial(n6, w3 - half)
}
