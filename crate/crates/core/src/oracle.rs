//! Brute-force ground truth over all `2^n` channel outputs.
//!
//! Outputs are visited in the integer order of `y` read as an `n`-bit number
//! whose first position is the most significant bit.

use num_bigint::BigUint;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::{type_bit, Codebook};
use crate::error::{Error, Result};
use crate::prob::RationalProb;
use crate::spectrum::DistanceSpectrum;

/// Largest block length the brute-force engine will enumerate.
pub const MAX_ORACLE_N: usize = 24;

const CHUNK: u64 = 1 << 12;

fn guard(n: usize) -> Result<()> {
    if n > MAX_ORACLE_N {
        return Err(Error::OracleTooLarge {
            n,
            max: MAX_ORACLE_N,
        });
    }
    Ok(())
}

/// Bit mask of a word; position `k` maps to bit `n - 1 - k`.
fn to_mask(word: &[bool]) -> u64 {
    word.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
}

fn row_masks(book: &Codebook) -> Vec<u64> {
    book.rows().iter().map(|r| to_mask(r)).collect()
}

#[inline]
fn nearest(rows: &[u64], y: u64) -> u32 {
    rows.iter().map(|&c| (c ^ y).count_ones()).min().unwrap_or(0)
}

/// `d_C(y)`: distance from `y` to the nearest codeword.
pub fn ml_distance(book: &Codebook, y: &[bool]) -> Result<usize> {
    if y.len() != book.n() {
        return Err(Error::LengthMismatch {
            left: book.n(),
            right: y.len(),
        });
    }
    Ok(book
        .rows()
        .iter()
        .map(|c| c.iter().zip(y).filter(|(a, b)| a != b).count())
        .min()
        .unwrap_or(0))
}

fn count_spectrum(n: usize, rows: &[u64]) -> Vec<u64> {
    let total = 1u64 << n;
    let chunks = total.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut local = vec![0u64; n + 1];
            let end = ((c + 1) * CHUNK).min(total);
            for y in c * CHUNK..end {
                local[nearest(rows, y) as usize] += 1;
            }
            local
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

/// `alpha_d(C)` by enumeration; any codebook with 2 to 32 rows.
pub fn spectrum_bruteforce(book: &Codebook) -> Result<DistanceSpectrum> {
    guard(book.n())?;
    let counts = count_spectrum(book.n(), &row_masks(book));
    DistanceSpectrum::from_counts(counts.into_iter().map(BigUint::from).collect())
}

/// Average correct-decoding probability, averaging over the codebook's rows.
pub fn lambda_bruteforce(book: &Codebook, eps: &RationalProb) -> Result<BigRational> {
    Ok(spectrum_bruteforce(book)?.lambda(eps, book.len()))
}

/// Label of a channel output in one of the five-set decompositions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PartitionLabel {
    Y1,
    Y2,
    Y3,
    Y4,
    Y5,
}

impl PartitionLabel {
    pub const ALL: [PartitionLabel; 5] = [
        PartitionLabel::Y1,
        PartitionLabel::Y2,
        PartitionLabel::Y3,
        PartitionLabel::Y4,
        PartitionLabel::Y5,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// How the compared code `C'` is obtained from `C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    /// The first column, of type `from`, becomes type `to`.
    OneColumn { from: u8, to: u8 },
    /// The first two columns are of types `source` (1, 2 or 4) and 7; one
    /// codeword has both bits flipped, giving the pairs {3,5}, {3,6}, {5,6}.
    TwoBit { source: u8 },
}

impl Scenario {
    /// Number of leading positions in which `C'` differs from `C`.
    pub fn width(&self) -> usize {
        match self {
            Scenario::OneColumn { .. } => 1,
            Scenario::TwoBit { .. } => 2,
        }
    }

    /// Rows whose leading bits are flipped (the set `P`), zero-based.
    fn flipped_rows(&self) -> Result<Vec<usize>> {
        match *self {
            Scenario::OneColumn { from, to } => {
                if from > 15 || to > 15 || to == from || to == 15 - from {
                    return Err(Error::InconsistentScenario(format!(
                        "cannot replace type {from} by type {to}"
                    )));
                }
                Ok((0..4)
                    .filter(|&r| type_bit(from, r) != type_bit(to, r))
                    .collect())
            }
            Scenario::TwoBit { source } => match source {
                1 => Ok(vec![2]),
                2 | 4 => Ok(vec![3]),
                _ => Err(Error::InconsistentScenario(format!(
                    "two-bit source type must be 1, 2 or 4, got {source}"
                ))),
            },
        }
    }

    pub fn leading_types(&self) -> Vec<u8> {
        match *self {
            Scenario::OneColumn { from, .. } => vec![from],
            Scenario::TwoBit { source } => vec![source, 7],
        }
    }
}

/// `d_O, d_P, d'_O, d'_P` for one output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDistances {
    pub d_o: u32,
    pub d_p: u32,
    pub d_o_prime: u32,
    pub d_p_prime: u32,
}

/// Precomputed masks for classifying outputs under a scenario.
#[derive(Debug, Clone)]
pub struct ScenarioAnalyzer {
    n: usize,
    scenario: Scenario,
    rows: Vec<u64>,
    flipped: Vec<u64>,
    in_p: [bool; 4],
    lead_mask: u64,
}

impl ScenarioAnalyzer {
    pub fn new(book: &Codebook, scenario: Scenario) -> Result<Self> {
        if book.len() != 4 {
            return Err(Error::InconsistentScenario(
                "partition analysis needs exactly 4 codewords".into(),
            ));
        }
        guard(book.n())?;
        let lead = scenario.leading_types();
        if book.n() < lead.len() {
            return Err(Error::InconsistentScenario(format!(
                "block length {} shorter than the {} modified columns",
                book.n(),
                lead.len()
            )));
        }
        for (j, &ty) in lead.iter().enumerate() {
            let actual = book.column_type(j);
            if actual != ty {
                return Err(Error::InconsistentScenario(format!(
                    "column {} has type {actual}, expected {ty}",
                    j + 1
                )));
            }
        }
        let p_rows = scenario.flipped_rows()?;
        let n = book.n();
        let t = scenario.width();
        let lead_mask = ((1u64 << t) - 1) << (n - t);
        let rows = row_masks(book);
        let mut in_p = [false; 4];
        for &r in &p_rows {
            in_p[r] = true;
        }
        let flipped = rows.iter().map(|&c| c ^ lead_mask).collect();
        Ok(ScenarioAnalyzer {
            n,
            scenario,
            rows,
            flipped,
            in_p,
            lead_mask,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    /// `f_t(y)`: flips the leading `t` positions.
    pub fn flip(&self, y: u64) -> u64 {
        y ^ self.lead_mask
    }

    /// The modified code `C'` as rows.
    pub fn modified_rows(&self) -> Vec<u64> {
        (0..4)
            .map(|r| if self.in_p[r] { self.flipped[r] } else { self.rows[r] })
            .collect()
    }

    /// `C'` as an explicit codebook.
    pub fn modified_codebook(&self) -> Codebook {
        let rows = self
            .modified_rows()
            .into_iter()
            .map(|m| (0..self.n).map(|k| (m >> (self.n - 1 - k)) & 1 == 1).collect())
            .collect();
        Codebook::new(rows).expect("same shape as C")
    }

    pub fn group_distances(&self, y: u64) -> GroupDistances {
        let mut g = GroupDistances {
            d_o: u32::MAX,
            d_p: u32::MAX,
            d_o_prime: u32::MAX,
            d_p_prime: u32::MAX,
        };
        for r in 0..4 {
            let d = (self.rows[r] ^ y).count_ones();
            let dp = (self.flipped[r] ^ y).count_ones();
            if self.in_p[r] {
                g.d_p = g.d_p.min(d);
                g.d_p_prime = g.d_p_prime.min(dp);
            } else {
                g.d_o = g.d_o.min(d);
                g.d_o_prime = g.d_o_prime.min(dp);
            }
        }
        g
    }

    /// Which of the five defining predicates hold at `y`.
    pub fn memberships(&self, y: u64) -> [bool; 5] {
        let g = self.group_distances(y);
        let (o, p, o2, p2) = (g.d_o, g.d_p, g.d_o_prime, g.d_p_prime);
        match self.scenario {
            Scenario::OneColumn { .. } => [
                (o <= p && p < p2) || (o <= p2 && p2 <= p && o2 <= p2),
                (p <= p2 && p < o) || (p2 < p && p <= o && p <= o2),
                p2 == o2 && o2 < p && p == o,
                p == p2 && p2 == o && o < o2,
                p2 == o && o < o2 && o2 == p,
            ],
            Scenario::TwoBit { .. } => {
                let y1 = (y >> (self.n - 1)) & 1;
                let y2 = (y >> (self.n - 2)) & 1;
                let split = y1 != y2;
                [
                    !split,
                    split && o <= p.min(p2),
                    split && o > p.min(p2) && p <= o.min(o2),
                    split && p2 < o.min(o2) && o.min(o2) < p,
                    split && o2 <= p.min(p2) && p.min(p2) < o && o2 < p,
                ]
            }
        }
    }

    pub fn classify(&self, y: u64) -> Result<PartitionLabel> {
        let m = self.memberships(y);
        let hits: Vec<usize> = (0..5).filter(|&i| m[i]).collect();
        if hits.len() != 1 {
            return Err(Error::PartitionViolation {
                y,
                count: hits.len(),
            });
        }
        Ok(PartitionLabel::ALL[hits[0]])
    }
}

/// Label of `y` when `book` is compared against its modification under `scenario`.
pub fn classify_partition(
    book: &Codebook,
    scenario: Scenario,
    y: &[bool],
) -> Result<PartitionLabel> {
    if y.len() != book.n() {
        return Err(Error::LengthMismatch {
            left: book.n(),
            right: y.len(),
        });
    }
    ScenarioAnalyzer::new(book, scenario)?.classify(to_mask(y))
}

/// `alpha_d^i(C) = |{y in Y_i : d_C(y) = d}|` for every label `i`.
pub fn partition_spectra(book: &Codebook, scenario: Scenario) -> Result<[Vec<u64>; 5]> {
    let an = ScenarioAnalyzer::new(book, scenario)?;
    let mut out: [Vec<u64>; 5] = std::array::from_fn(|_| vec![0u64; an.n + 1]);
    for y in 0..(1u64 << an.n) {
        let label = an.classify(y)?;
        out[label.index()][nearest(&an.rows, y) as usize] += 1;
    }
    Ok(out)
}

/// Pointwise audit of a five-set decomposition against both codes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionAudit {
    pub scenario: Scenario,
    /// Sizes of `Y_1..Y_5`.
    pub sizes: [u64; 5],
    /// Outputs not covered exactly once by the first family.
    pub first_family_faults: u64,
    /// Outputs not covered exactly once by the family with images `Y_i'`.
    pub second_family_faults: u64,
    /// Outputs violating the distance relation attached to their label.
    pub relation_faults: u64,
    /// Indices `d` where the spectrum shift identities fail (one-column only).
    pub shift_faults: Vec<usize>,
}

impl PartitionAudit {
    pub fn is_clean(&self) -> bool {
        self.first_family_faults == 0
            && self.second_family_faults == 0
            && self.relation_faults == 0
            && self.shift_faults.is_empty()
    }
}

/// Checks both partition families and the per-label distance relations.
///
/// `d_C'` is evaluated on an independently built `C'`, not through the
/// flipped-distance shortcut used for classification.
pub fn audit_partition(book: &Codebook, scenario: Scenario) -> Result<PartitionAudit> {
    use PartitionLabel::*;
    let an = ScenarioAnalyzer::new(book, scenario)?;
    let n = an.n;
    let total = 1usize << n;
    let c_rows = an.rows.clone();
    let c2_rows = row_masks(&an.modified_codebook());
    let d_c = |y: u64| nearest(&c_rows, y);
    let d_c2 = |y: u64| nearest(&c2_rows, y);

    let mut labels: Vec<Option<PartitionLabel>> = vec![None; total];
    let mut audit = PartitionAudit {
        scenario,
        sizes: [0; 5],
        first_family_faults: 0,
        second_family_faults: 0,
        relation_faults: 0,
        shift_faults: Vec::new(),
    };
    for y in 0..total as u64 {
        match an.classify(y) {
            Ok(l) => {
                labels[y as usize] = Some(l);
                audit.sizes[l.index()] += 1;
            }
            Err(_) => audit.first_family_faults += 1,
        }
    }

    // second family: images under f_t of the labels that move
    let moved: &[PartitionLabel] = match scenario {
        Scenario::OneColumn { .. } => &[Y2, Y4, Y5],
        Scenario::TwoBit { .. } => &[Y3, Y4],
    };
    let mut cover = vec![0u8; total];
    for y in 0..total as u64 {
        if let Some(l) = labels[y as usize] {
            let img = if moved.contains(&l) { an.flip(y) } else { y };
            cover[img as usize] += 1;
        }
    }
    audit.second_family_faults = cover.iter().filter(|&&c| c != 1).count() as u64;

    let mut a3 = vec![0u64; n + 2];
    let mut a5 = vec![0u64; n + 2];
    let mut a3_mod = vec![0u64; n + 1];
    let mut a5_mod = vec![0u64; n + 1];
    for y in 0..total as u64 {
        let Some(l) = labels[y as usize] else { continue };
        let g = an.group_distances(y);
        let (dc, dc2, dc2f) = (d_c(y), d_c2(y), d_c2(an.flip(y)));
        let ok = match (scenario, l) {
            (Scenario::OneColumn { .. }, Y1) => dc == dc2 && dc == g.d_o,
            (Scenario::OneColumn { .. }, Y2) => dc == dc2f && dc == g.d_p,
            (Scenario::OneColumn { .. }, Y3) => {
                dc == g.d_p && dc == dc2 + 1 && dc == g.d_p_prime + 1
            }
            (Scenario::OneColumn { .. }, Y4) => dc == g.d_o && dc == dc2f && dc == g.d_p,
            (Scenario::OneColumn { .. }, Y5) => {
                dc + 1 == g.d_o + 1 && dc + 1 == dc2f && dc2f == g.d_p
            }
            (Scenario::TwoBit { .. }, Y1) => dc == dc2,
            (Scenario::TwoBit { .. }, Y2) => dc == dc2 && dc == g.d_o,
            (Scenario::TwoBit { .. }, Y3) => dc == dc2f && dc == g.d_p,
            (Scenario::TwoBit { .. }, Y4) => {
                dc == g.d_o.min(g.d_p) && dc >= dc2f && dc2f == g.d_o_prime
            }
            (Scenario::TwoBit { .. }, Y5) => {
                dc == g.d_o.min(g.d_p) && dc >= dc2 && dc2 == g.d_p_prime
            }
        };
        if !ok {
            audit.relation_faults += 1;
        }
        if let Scenario::OneColumn { .. } = scenario {
            match l {
                Y3 => {
                    a3[dc as usize] += 1;
                    a3_mod[dc2 as usize] += 1;
                }
                Y5 => {
                    a5[dc as usize] += 1;
                    a5_mod[dc2f as usize] += 1;
                }
                _ => {}
            }
        }
    }
    if let Scenario::OneColumn { .. } = scenario {
        if a3[0] != 0 {
            audit.shift_faults.push(0);
        }
        if a5[n] != 0 {
            audit.shift_faults.push(n);
        }
        for d in 0..=n {
            let expect5 = if d == 0 { 0 } else { a5[d - 1] };
            if a3_mod[d] != a3[d + 1] || a5_mod[d] != expect5 {
                audit.shift_faults.push(d);
            }
        }
        audit.shift_faults.dedup();
    }
    Ok(audit)
}
