//! Distance spectra and the correct-decoding probability they determine.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::RationalProb;

/// `alpha[d]` is the number of channel outputs at ML distance `d` from the code.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DistanceSpectrum {
    alpha: Vec<BigUint>,
}

impl DistanceSpectrum {
    pub fn from_counts(alpha: Vec<BigUint>) -> Result<Self> {
        if alpha.len() < 2 {
            return Err(Error::InvalidProfile("spectrum needs n >= 1".into()));
        }
        Ok(DistanceSpectrum { alpha })
    }

    pub fn zeros(n: usize) -> Self {
        DistanceSpectrum {
            alpha: vec![BigUint::zero(); n + 1],
        }
    }

    pub fn n(&self) -> usize {
        self.alpha.len() - 1
    }

    pub fn alpha(&self) -> &[BigUint] {
        &self.alpha
    }

    pub fn total(&self) -> BigUint {
        self.alpha.iter().sum()
    }

    /// `sum_d alpha_d (1-eps)^(n-d) eps^d` scaled by `1/codebook_size`.
    pub fn lambda(&self, eps: &RationalProb, codebook_size: usize) -> BigRational {
        let n = self.n();
        let p = eps.numer();
        let qp = eps.complement_numer();
        // numerator over q^n: sum_d alpha_d p^d (q-p)^(n-d)
        let mut num = BigUint::zero();
        let mut p_pow = BigUint::one();
        let mut qp_pows = Vec::with_capacity(n + 1);
        let mut acc = BigUint::one();
        for _ in 0..=n {
            qp_pows.push(acc.clone());
            acc *= &qp;
        }
        for (d, a) in self.alpha.iter().enumerate() {
            if !a.is_zero() {
                num += a * &p_pow * &qp_pows[n - d];
            }
            p_pow *= p;
        }
        let den = eps.denom().pow(n as u32) * BigUint::from(codebook_size);
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SpectrumJson::from(self)).expect("plain data")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let parsed: SpectrumJson = serde_json::from_value(value.clone()).map_err(|e| Error::Parse {
            what: "spectrum",
            input: value.to_string(),
            reason: e.to_string(),
        })?;
        parsed.try_into()
    }

    /// `d,alpha_d` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("d,alpha_d\n");
        for (d, a) in self.alpha.iter().enumerate() {
            out.push_str(&format!("{d},{a}\n"));
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct SpectrumJson {
    n: usize,
    alpha: Vec<String>,
}

impl From<&DistanceSpectrum> for SpectrumJson {
    fn from(s: &DistanceSpectrum) -> Self {
        SpectrumJson {
            n: s.n(),
            alpha: s.alpha.iter().map(ToString::to_string).collect(),
        }
    }
}

impl TryFrom<SpectrumJson> for DistanceSpectrum {
    type Error = Error;

    fn try_from(j: SpectrumJson) -> Result<Self> {
        let alpha = j
            .alpha
            .iter()
            .map(|s| {
                s.parse::<BigUint>().map_err(|e| Error::Parse {
                    what: "spectrum entry",
                    input: s.clone(),
                    reason: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if alpha.len() != j.n + 1 {
            return Err(Error::LengthMismatch {
                left: j.n + 1,
                right: alpha.len(),
            });
        }
        DistanceSpectrum::from_counts(alpha)
    }
}
