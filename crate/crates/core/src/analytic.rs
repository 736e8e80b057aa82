//! Spectra and decoding probabilities from column-type counts.
//!
//! Outputs are grouped by how many ones they carry inside each column class,
//! so the work is polynomial in `n` for a fixed number of present types.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::binomial::BinomialRow;
use crate::code::{type_bit, CodeProfile, NUM_TYPES};
use crate::error::{Error, Result};
use crate::prob::RationalProb;
use crate::spectrum::DistanceSpectrum;

/// `w[i]`: number of ones an output carries on the columns of type `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct WeightTuple {
    w: [u64; NUM_TYPES],
}

impl WeightTuple {
    pub fn new(w: [u64; NUM_TYPES]) -> Self {
        WeightTuple { w }
    }

    pub fn from_pairs(pairs: &[(u8, u64)]) -> Self {
        let mut w = [0u64; NUM_TYPES];
        for &(t, v) in pairs {
            w[t as usize] = v;
        }
        WeightTuple { w }
    }

    pub fn get(&self, ty: u8) -> u64 {
        self.w[ty as usize]
    }

    pub fn weights(&self) -> &[u64; NUM_TYPES] {
        &self.w
    }

    /// Checks `0 <= w[i] <= |i|` for every type.
    pub fn check(&self, profile: &CodeProfile) -> Result<()> {
        for t in 0..NUM_TYPES as u8 {
            if self.get(t) > profile.count(t) {
                return Err(Error::InvalidProfile(format!(
                    "weight {} on type {t} exceeds its count {}",
                    self.get(t),
                    profile.count(t)
                )));
            }
        }
        Ok(())
    }
}

/// `(d_1, d_2, d_3, d_4)`: distances from any output with weights `tuple` to
/// the four codewords.
pub fn codeword_distances(profile: &CodeProfile, tuple: &WeightTuple) -> Result<[u64; 4]> {
    tuple.check(profile)?;
    let mut d = [0u64; 4];
    for t in profile.support() {
        let (m, w) = (profile.count(t), tuple.get(t));
        for (j, dj) in d.iter_mut().enumerate() {
            *dj += if type_bit(t, j) == 1 { m - w } else { w };
        }
    }
    Ok(d)
}

struct Class {
    count: u64,
    bits: [bool; 4],
    binom: BinomialRow,
}

fn accumulate(classes: &[Class], dist: [u64; 4], weight: BigUint, alpha: &mut [BigUint]) {
    let Some((head, rest)) = classes.split_first() else {
        let d = *dist.iter().min().expect("four rows");
        alpha[d as usize] += weight;
        return;
    };
    for w in 0..=head.count {
        let mut next = dist;
        for j in 0..4 {
            next[j] += if head.bits[j] { head.count - w } else { w };
        }
        accumulate(rest, next, &weight * head.binom.get(w as i64), alpha);
    }
}

/// `alpha_d(C)` by enumerating weight tuples after folding types above 7.
pub fn spectrum_analytic(profile: &CodeProfile) -> DistanceSpectrum {
    let folded = profile.fold_complements();
    let n = folded.n() as usize;
    let mut classes: Vec<Class> = folded
        .support()
        .map(|t| Class {
            count: folded.count(t),
            bits: std::array::from_fn(|j| type_bit(t, j) == 1),
            binom: BinomialRow::new(folded.count(t)),
        })
        .collect();
    // widest class on the outside gives the most parallel slack
    classes.sort_by_key(|c| std::cmp::Reverse(c.count));
    let (head, rest) = classes.split_first().expect("n >= 1");
    let alpha = (0..=head.count)
        .into_par_iter()
        .map(|w| {
            let mut local = vec![BigUint::zero(); n + 1];
            let dist = std::array::from_fn(|j| if head.bits[j] { head.count - w } else { w });
            accumulate(rest, dist, head.binom.get(w as i64).clone(), &mut local);
            local
        })
        .reduce(
            || vec![BigUint::zero(); n + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    DistanceSpectrum::from_counts(alpha).expect("n >= 1")
}

/// `sum_d alpha_d (1-eps)^(n-d) eps^d`; four times the decoding probability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReliabilityPolynomial {
    spectrum: DistanceSpectrum,
}

impl ReliabilityPolynomial {
    pub fn new(spectrum: DistanceSpectrum) -> Self {
        ReliabilityPolynomial { spectrum }
    }

    pub fn of(profile: &CodeProfile) -> Self {
        Self::new(spectrum_analytic(profile))
    }

    pub fn n(&self) -> usize {
        self.spectrum.n()
    }

    pub fn coeffs(&self) -> &[BigUint] {
        self.spectrum.alpha()
    }

    pub fn evaluate(&self, eps: &RationalProb) -> BigRational {
        self.spectrum.lambda(eps, 1)
    }
}

/// Average correct-decoding probability of a four-codeword code.
pub fn lambda_analytic(profile: &CodeProfile, eps: &RationalProb) -> BigRational {
    spectrum_analytic(profile).lambda(eps, 4)
}

/// Three-way comparison of `lambda_a` against `lambda_b`.
pub fn compare_at_eps(a: &CodeProfile, b: &CodeProfile, eps: &RationalProb) -> Result<Ordering> {
    if a.n() != b.n() {
        return Err(Error::LengthMismatch {
            left: a.n() as usize,
            right: b.n() as usize,
        });
    }
    Ok(lambda_analytic(a, eps).cmp(&lambda_analytic(b, eps)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::row_permutations;
    use crate::oracle::spectrum_bruteforce;
    use crate::prob::format_fraction;
    use num_traits::One;

    fn p(s: &str) -> CodeProfile {
        s.parse().unwrap()
    }

    fn eps(s: &str) -> RationalProb {
        s.parse().unwrap()
    }

    #[test]
    fn distances_follow_row_weights() {
        // rows of {3:2,5:2}: 0000, 0011, 1100, 1111
        let prof = p("3:2,5:2");
        assert_eq!(
            codeword_distances(&prof, &WeightTuple::default()).unwrap(),
            [0, 2, 2, 4]
        );
        assert_eq!(
            codeword_distances(&p("1:1"), &WeightTuple::from_pairs(&[(1, 1)])).unwrap(),
            [1, 1, 1, 0]
        );
        let prof = p("1:2,6:3,13:1");
        let d = codeword_distances(&prof, &WeightTuple::default()).unwrap();
        for (j, row) in crate::code::Row::ALL.iter().enumerate() {
            assert_eq!(d[j], prof.row_weight(*row));
        }
        assert!(codeword_distances(&prof, &WeightTuple::from_pairs(&[(1, 3)])).is_err());
    }

    #[test]
    fn small_spectra_match_oracle() {
        for s in ["3:1,5:1", "1:1,3:1,5:1,6:1", "3:2,5:2,6:2", "1:2,2:1,7:3,0:1", "9:2,4:1"] {
            let prof = p(s);
            assert_eq!(
                spectrum_analytic(&prof),
                spectrum_bruteforce(&prof.materialize()).unwrap(),
                "{s}"
            );
        }
    }

    #[test]
    fn large_linear_without_enumeration() {
        let s = spectrum_analytic(&p("3:10,5:10,6:10"));
        assert_eq!(s.total(), BigUint::one() << 30usize);
        let small = p("3:3,5:3,6:3");
        assert_eq!(
            spectrum_analytic(&small),
            spectrum_bruteforce(&small.materialize()).unwrap()
        );
    }

    #[test]
    fn totals_at_n_64() {
        for s in ["1:10,2:10,3:9,4:9,5:9,6:9,7:8", "3:21,5:21,6:22", "0:64"] {
            assert_eq!(spectrum_analytic(&p(s)).total(), BigUint::one() << 64usize, "{s}");
        }
    }

    #[test]
    fn lambda_values() {
        assert_eq!(format_fraction(&lambda_analytic(&p("3:1,5:1"), &eps("1/10"))), "81/100");
        let prof = p("3:2,5:2,6:2");
        let e = eps("1/10");
        assert_eq!(
            lambda_analytic(&prof, &e),
            spectrum_bruteforce(&prof.materialize()).unwrap().lambda(&e, 4)
        );
        assert!(lambda_analytic(&prof, &eps("1/10")) > lambda_analytic(&prof, &eps("1/4")));
    }

    #[test]
    fn comparisons() {
        let e = eps("1/10");
        assert_eq!(compare_at_eps(&p("3:1,5:1"), &p("1:2"), &e).unwrap(), Ordering::Greater);
        assert_eq!(compare_at_eps(&p("1:2"), &p("1:2"), &e).unwrap(), Ordering::Equal);
        assert!(compare_at_eps(&p("1:2"), &p("1:3"), &e).is_err());
        let c = p("1:1,3:1,5:1,6:1");
        let c2 = p("3:2,5:1,6:1");
        assert_ne!(compare_at_eps(&c2, &c, &e).unwrap(), Ordering::Less);
    }

    #[test]
    fn permutation_and_flip_invariance() {
        let prof = p("1:1,2:2,3:1,4:1,6:2,7:1");
        let base = spectrum_analytic(&prof);
        for perm in row_permutations() {
            assert_eq!(spectrum_analytic(&prof.permute_rows(perm)), base);
        }
        let flipped = p("14:1,2:2,3:1,4:1,6:2,7:1");
        assert_eq!(spectrum_analytic(&flipped), base);
    }

    #[test]
    fn polynomial_scales_lambda() {
        let prof = p("1:3,3:2,5:2,6:2");
        let poly = ReliabilityPolynomial::of(&prof);
        let e = eps("1/4");
        assert_eq!(
            poly.evaluate(&e) / BigRational::from_integer(4.into()),
            lambda_analytic(&prof, &e)
        );
        assert_eq!(poly.n(), 9);
        assert_eq!(poly.coeffs().len(), 10);
    }
}
