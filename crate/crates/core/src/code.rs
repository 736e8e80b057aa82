//! Column-type representation of four-codeword binary codes.
//!
//! A code with four codewords is a `4 x n` binary matrix. Column type `i`
//! (`0..16`) is the column whose entries, read from row 1 down to row 4, are
//! the binary digits of `i`; row 1 carries the most significant bit, so type
//! 1 is the column `[0 0 0 1]^T`. Decoding performance depends only on how
//! many columns of each type occur, which is what [`CodeProfile`] stores.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of distinct length-4 columns.
pub const NUM_TYPES: usize = 16;

/// A codeword row, numbered `1..=4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Row(u8);

impl Row {
    pub const ALL: [Row; 4] = [Row(1), Row(2), Row(3), Row(4)];

    pub fn new(row: usize) -> Result<Row> {
        if (1..=4).contains(&row) {
            Ok(Row(row as u8))
        } else {
            Err(Error::InvalidProfile(format!("row {row} outside 1..=4")))
        }
    }

    pub fn number(self) -> usize {
        self.0 as usize
    }

    /// Zero-based index.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    /// The column type with a single one in this row, `2^(4 - row)`.
    pub fn unit_type(self) -> u8 {
        1 << (4 - self.0)
    }
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Entry of column type `ty` in zero-based row `row`.
#[inline]
pub fn type_bit(ty: u8, row: usize) -> u8 {
    (ty >> (3 - row)) & 1
}

/// Column type obtained by complementing every entry.
#[inline]
pub fn flip_type(ty: u8) -> u8 {
    15 - ty
}

/// Representative of `{ty, 15 - ty}` in `0..8`.
#[inline]
pub fn fold_type(ty: u8) -> u8 {
    if ty > 7 {
        15 - ty
    } else {
        ty
    }
}

/// Image of column type `ty` when the rows are rearranged so that new row `r`
/// holds old row `perm[r]` (zero-based).
pub fn permute_type(ty: u8, perm: [usize; 4]) -> u8 {
    (0..4).fold(0u8, |acc, r| acc | (type_bit(ty, perm[r]) << (3 - r)))
}

/// All 24 rearrangements of four rows.
pub fn row_permutations() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    if p.iter().all(|&x| !std::mem::replace(&mut seen[x], true)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Number of positions in which `x` and `y` differ.
pub fn hamming_distance(x: &[bool], y: &[bool]) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(x.iter().zip(y).filter(|(a, b)| a != b).count())
}

/// Multiplicities `|i|` of the sixteen column types of a four-codeword code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CodeProfile {
    counts: [u64; NUM_TYPES],
}

impl CodeProfile {
    pub fn new(counts: [u64; NUM_TYPES]) -> Result<Self> {
        if counts.iter().sum::<u64>() == 0 {
            return Err(Error::InvalidProfile(
                "block length must be at least 1".into(),
            ));
        }
        Ok(CodeProfile { counts })
    }

    /// Builds a profile from `(type, count)` pairs; repeated types accumulate.
    pub fn from_pairs(pairs: &[(u8, u64)]) -> Result<Self> {
        let mut counts = [0u64; NUM_TYPES];
        for &(ty, c) in pairs {
            if ty as usize >= NUM_TYPES {
                return Err(Error::InvalidProfile(format!("column type {ty} outside 0..=15")));
            }
            counts[ty as usize] += c;
        }
        Self::new(counts)
    }

    pub fn counts(&self) -> &[u64; NUM_TYPES] {
        &self.counts
    }

    pub fn count(&self, ty: u8) -> u64 {
        self.counts[ty as usize]
    }

    /// Block length.
    pub fn n(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Column types with nonzero multiplicity, ascending.
    pub fn support(&self) -> impl Iterator<Item = u8> + '_ {
        (0..NUM_TYPES as u8).filter(move |&t| self.counts[t as usize] > 0)
    }

    pub fn support_within(&self, allowed: &[u8]) -> bool {
        self.support().all(|t| allowed.contains(&t))
    }

    /// Same profile with `delta` applied to one type's count.
    pub(crate) fn adjusted(&self, changes: &[(u8, i64)]) -> Result<Self> {
        let mut counts = self.counts;
        for &(ty, delta) in changes {
            let c = counts[ty as usize] as i64 + delta;
            if c < 0 {
                return Err(Error::InvalidProfile(format!(
                    "count of type {ty} would become negative"
                )));
            }
            counts[ty as usize] = c as u64;
        }
        Self::new(counts)
    }

    /// Weight of codeword `row`.
    pub fn row_weight(&self, row: Row) -> u64 {
        self.support()
            .filter(|&t| type_bit(t, row.index()) == 1)
            .map(|t| self.count(t))
            .sum()
    }

    /// `w(c_s xor c_t)`.
    pub fn pair_distance(&self, s: Row, t: Row) -> u64 {
        self.support()
            .filter(|&ty| type_bit(ty, s.index()) != type_bit(ty, t.index()))
            .map(|ty| self.count(ty))
            .sum()
    }

    /// Number of all-zero columns. They never help decoding.
    pub fn removable_columns(&self) -> u64 {
        self.counts[0]
    }

    /// Profile with the all-zero columns dropped, if any other column remains.
    pub fn without_zero_columns(&self) -> Option<Self> {
        let mut counts = self.counts;
        counts[0] = 0;
        Self::new(counts).ok()
    }

    /// Folds every type above 7 onto its complement `15 - i`.
    pub fn fold_complements(&self) -> Self {
        let mut counts = [0u64; NUM_TYPES];
        for (t, &c) in self.counts.iter().enumerate() {
            counts[fold_type(t as u8) as usize] += c;
        }
        CodeProfile { counts }
    }

    /// Rearranges rows; new row `r` holds old row `perm[r]` (zero-based).
    pub fn permute_rows(&self, perm: [usize; 4]) -> Self {
        let mut counts = [0u64; NUM_TYPES];
        for (t, &c) in self.counts.iter().enumerate() {
            counts[permute_type(t as u8, perm) as usize] += c;
        }
        CodeProfile { counts }
    }

    /// Equivalent profile under column flips and row interchanges.
    ///
    /// Types above 7 are folded onto their complements. When the remaining
    /// support lies in `{0, 1, 3, 5, 6}`, rows 1-3 are interchanged so that
    /// `|3| <= |5| <= |6|`; all-zero columns are kept.
    pub fn canonicalize(&self) -> Self {
        let mut folded = self.fold_complements();
        if folded.support_within(&[0, 1, 3, 5, 6]) {
            let mut trio = [folded.counts[3], folded.counts[5], folded.counts[6]];
            trio.sort_unstable();
            folded.counts[3] = trio[0];
            folded.counts[5] = trio[1];
            folded.counts[6] = trio[2];
        }
        folded
    }

    /// Lexicographically least folded count vector over all 24 row
    /// rearrangements. Two profiles are equivalent iff their representatives
    /// coincide.
    pub fn orbit_representative(&self) -> Self {
        row_permutations()
            .into_iter()
            .map(|p| self.permute_rows(p).fold_complements())
            .min_by(|a, b| a.counts.cmp(&b.counts))
            .expect("24 permutations")
    }

    /// Every column has even weight, i.e. the four codewords sum to zero.
    /// Up to column flips such codes have support in `{0, 3, 5, 6}`.
    pub fn is_linear(&self) -> bool {
        self.support().all(|t| t.count_ones() % 2 == 0)
    }

    /// `|1|` odd, `|3|, |5|, |6|` of one parity and `|1|+|3|+|5|+|6| = n`.
    pub fn is_class_i(&self) -> bool {
        ClassIProfile::try_from(self).is_ok()
    }

    /// Explicit `4 x n` codebook; columns are emitted in ascending type order.
    pub fn materialize(&self) -> Codebook {
        self.materialize_with_leading(&[])
            .expect("no leading columns requested")
    }

    /// Like [`materialize`](Self::materialize), but the first columns have
    /// the types in `leading`, in that order.
    pub fn materialize_with_leading(&self, leading: &[u8]) -> Result<Codebook> {
        let mut rest = self.counts;
        let mut order = Vec::with_capacity(self.n() as usize);
        for &t in leading {
            let slot = rest.get_mut(t as usize).filter(|c| **c > 0).ok_or_else(|| {
                Error::InvalidProfile(format!("{self} has no spare column of type {t}"))
            })?;
            *slot -= 1;
            order.push(t);
        }
        for t in 0..NUM_TYPES as u8 {
            order.extend(std::iter::repeat_n(t, rest[t as usize] as usize));
        }
        let mut rows: Vec<Vec<bool>> = (0..4).map(|_| Vec::with_capacity(order.len())).collect();
        for &t in &order {
            for (r, row) in rows.iter_mut().enumerate() {
                row.push(type_bit(t, r) == 1);
            }
        }
        Ok(Codebook {
            n: order.len(),
            rows,
        })
    }
}

impl fmt::Display for CodeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for t in self.support() {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{}:{}", t, self.count(t))?;
        }
        Ok(())
    }
}

impl FromStr for CodeProfile {
    type Err = Error;

    /// Parses comma-separated `type:count` pairs such as `1:3,3:2,5:5,6:7`.
    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: String| Error::Parse {
            what: "profile",
            input: s.to_string(),
            reason,
        };
        let mut pairs = Vec::new();
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (ty, count) = item
                .split_once(':')
                .ok_or_else(|| err(format!("expected type:count, got {item:?}")))?;
            let ty: u8 = ty
                .trim()
                .parse()
                .map_err(|e| err(format!("bad type {ty:?}: {e}")))?;
            if ty as usize >= NUM_TYPES {
                return Err(err(format!("type {ty} outside 0..=15")));
            }
            let count: u64 = count
                .trim()
                .parse()
                .map_err(|e| err(format!("bad count {count:?}: {e}")))?;
            pairs.push((ty, count));
        }
        Self::from_pairs(&pairs).map_err(|e| err(e.to_string()))
    }
}

impl Serialize for CodeProfile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CodeProfile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Maximum number of rows the brute-force engine accepts.
pub const MAX_ROWS: usize = 32;

/// Explicit codewords as rows of equal length.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Codebook {
    n: usize,
    rows: Vec<Vec<bool>>,
}

impl Codebook {
    /// Accepts 2 to 32 rows of one common, nonzero length.
    pub fn new(rows: Vec<Vec<bool>>) -> Result<Self> {
        if !(2..=MAX_ROWS).contains(&rows.len()) {
            return Err(Error::InvalidCodebook(format!(
                "expected 2..={MAX_ROWS} codewords, got {}",
                rows.len()
            )));
        }
        let n = rows[0].len();
        if n == 0 {
            return Err(Error::InvalidCodebook("empty codewords".into()));
        }
        for r in &rows {
            if r.len() != n {
                return Err(Error::LengthMismatch {
                    left: n,
                    right: r.len(),
                });
            }
        }
        Ok(Codebook { n, rows })
    }

    /// One codeword per line, characters `0` and `1`; blank lines and lines
    /// starting with `#` are skipped.
    pub fn parse_lines(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(Error::Parse {
                        what: "codeword",
                        input: line.to_string(),
                        reason: format!("line {}: unexpected character {other:?}", lineno + 1),
                    }),
                })
                .collect::<Result<Vec<bool>>>()?;
            rows.push(row);
        }
        Self::new(rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Column counts of a four-row codebook.
    pub fn profile(&self) -> Result<CodeProfile> {
        if self.rows.len() != 4 {
            return Err(Error::InvalidCodebook(format!(
                "column profiles need exactly 4 codewords, got {}",
                self.rows.len()
            )));
        }
        let mut counts = [0u64; NUM_TYPES];
        for j in 0..self.n {
            counts[self.column_type(j) as usize] += 1;
        }
        CodeProfile::new(counts)
    }

    /// Type of column `j` (zero-based) of a four-row codebook.
    pub fn column_type(&self, j: usize) -> u8 {
        (0..4).fold(0u8, |acc, r| acc | ((self.rows[r][j] as u8) << (3 - r)))
    }

    /// Rows rendered as `0`/`1` strings.
    pub fn to_lines(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&b| if b { '1' } else { '0' }).collect())
            .collect()
    }
}

/// `(|1|, |3|, |5|, |6|)` of a Class-I code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClassIProfile {
    pub n1: u64,
    pub n3: u64,
    pub n5: u64,
    pub n6: u64,
}

impl ClassIProfile {
    pub fn new(n1: u64, n3: u64, n5: u64, n6: u64) -> Result<Self> {
        if n1 % 2 == 0 {
            return Err(Error::NotClassI(format!("|1| = {n1} is even")));
        }
        if n3 % 2 != n5 % 2 || n5 % 2 != n6 % 2 {
            return Err(Error::NotClassI(format!(
                "|3|, |5|, |6| = {n3}, {n5}, {n6} differ in parity"
            )));
        }
        Ok(ClassIProfile { n1, n3, n5, n6 })
    }

    pub fn n(&self) -> u64 {
        self.n1 + self.n3 + self.n5 + self.n6
    }

    pub fn to_profile(&self) -> CodeProfile {
        CodeProfile::from_pairs(&[(1, self.n1), (3, self.n3), (5, self.n5), (6, self.n6)])
            .expect("n1 is odd, hence n >= 1")
    }

    /// Profile after one type-1 column is replaced by type `target`.
    pub fn replaced(&self, target: u8) -> CodeProfile {
        self.to_profile()
            .adjusted(&[(1, -1), (target, 1)])
            .expect("n1 >= 1")
    }
}

impl TryFrom<&CodeProfile> for ClassIProfile {
    type Error = Error;

    fn try_from(p: &CodeProfile) -> Result<Self> {
        if !p.support_within(&[1, 3, 5, 6]) {
            return Err(Error::NotClassI(format!(
                "support of {p} is not within types 1, 3, 5, 6"
            )));
        }
        ClassIProfile::new(p.count(1), p.count(3), p.count(5), p.count(6))
    }
}

impl fmt::Display for ClassIProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.n1, self.n3, self.n5, self.n6)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> CodeProfile {
        s.parse().unwrap()
    }

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn materialize_small_linear() {
        let book = p("3:1,5:1").materialize();
        assert_eq!(book.to_lines(), vec!["00", "01", "10", "11"]);
    }

    #[test]
    fn materialize_seven_types() {
        let book = p("1:1,2:1,3:1,4:1,5:1,6:1,7:1").materialize();
        assert_eq!(
            book.to_lines(),
            vec!["0000000", "0001111", "0110011", "1010101"]
        );
    }

    #[test]
    fn materialize_leading_columns() {
        let book = p("1:1,3:1,7:1").materialize_with_leading(&[1, 7]).unwrap();
        assert_eq!(
            (0..3).map(|j| book.column_type(j)).collect::<Vec<_>>(),
            vec![1, 7, 3]
        );
        assert!(p("1:1,3:1").materialize_with_leading(&[7]).is_err());
        assert!(p("1:1,3:1").materialize_with_leading(&[1, 1]).is_err());
    }

    #[test]
    fn materialize_degenerate() {
        let book = p("0:2").materialize();
        assert_eq!(book.to_lines(), vec!["00"; 4]);
    }

    #[test]
    fn profile_round_trip() {
        let prof = p("1:2,3:1,6:4,9:1,15:2");
        assert_eq!(prof.materialize().profile().unwrap(), prof);
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(p("14:3").canonicalize(), p("1:3"));
        assert_eq!(p("1:1,6:2,5:4,3:3").canonicalize(), p("1:1,3:2,5:3,6:4"));
        assert_eq!(p("9:2,7:1").canonicalize(), p("6:2,7:1"));
        // support {0, 3} is sorted into the (3, 5, 6) slots as well
        assert_eq!(p("15:2,3:1").canonicalize(), p("0:2,6:1"));
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming_distance(&bits("0000"), &bits("0000")).unwrap(), 0);
        assert_eq!(hamming_distance(&bits("0011"), &bits("0101")).unwrap(), 2);
        assert_eq!(hamming_distance(&bits("1111111"), &bits("0000000")).unwrap(), 7);
        assert!(matches!(
            hamming_distance(&bits("01"), &bits("011")),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn pair_distances() {
        let prof = p("1:1,3:1,5:1,6:2");
        let r = |i| Row::new(i).unwrap();
        assert_eq!(prof.pair_distance(r(3), r(4)), 4);
        assert_eq!(prof.pair_distance(r(1), r(4)), 3);
        assert_eq!(prof.row_weight(r(4)), 3);
    }

    #[test]
    fn parse_errors() {
        assert!("1:3,16:1".parse::<CodeProfile>().is_err());
        assert!("1-3".parse::<CodeProfile>().is_err());
        assert!("0:0".parse::<CodeProfile>().is_err());
        assert!("".parse::<CodeProfile>().is_err());
        assert_eq!(p(" 3:1 , 5:2 ").to_string(), "3:1,5:2");
    }

    #[test]
    fn codebook_parsing() {
        let book = Codebook::parse_lines("# code\n000\n011\n\n101\n110\n").unwrap();
        assert_eq!(book.profile().unwrap(), p("3:1,5:1,6:1"));
        assert!(Codebook::parse_lines("01\n012\n").is_err());
        assert!(Codebook::parse_lines("01\n011\n").is_err());
        assert!(Codebook::parse_lines("01\n").is_err());
    }

    #[test]
    fn class_i_validation() {
        assert!(ClassIProfile::new(1, 1, 1, 1).is_ok());
        assert!(ClassIProfile::new(2, 1, 1, 1).is_err());
        assert!(ClassIProfile::new(3, 0, 1, 2).is_err());
        assert!(p("1:3,3:2,5:2,6:2").is_class_i());
        assert!(!p("1:3,3:2,5:2,6:2,7:1").is_class_i());
    }

    #[test]
    fn linear_detection() {
        assert!(p("3:2,5:1,6:4").is_linear());
        assert!(p("9:1,10:1,12:1").is_linear());
        assert!(!p("1:1,3:1").is_linear());
    }

    #[test]
    fn orbit_representative_is_invariant() {
        let prof = p("1:1,2:2,4:3,7:1");
        let rep = prof.orbit_representative();
        for perm in row_permutations() {
            assert_eq!(prof.permute_rows(perm).orbit_representative(), rep);
        }
        assert_eq!(row_permutations().len(), 24);
    }
}
