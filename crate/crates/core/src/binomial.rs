//! Exact binomial coefficients.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// `C(a, b)`, with the convention that the value is zero when `b < 0` or `b > a`.
pub fn binomial(a: u64, b: i64) -> BigUint {
    if b < 0 || b as u64 > a {
        return BigUint::zero();
    }
    let k = (b as u64).min(a - b as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc * (a - i) is divisible by (i + 1) at every step
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// One full row `C(a, 0), ..., C(a, a)` of Pascal's triangle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialRow {
    a: u64,
    values: Vec<BigUint>,
}

impl BinomialRow {
    pub fn new(a: u64) -> Self {
        let mut values = Vec::with_capacity(a as usize + 1);
        let mut cur = BigUint::one();
        values.push(cur.clone());
        for i in 0..a {
            cur *= a - i;
            cur /= i + 1;
            values.push(cur.clone());
        }
        BinomialRow { a, values }
    }

    pub fn order(&self) -> u64 {
        self.a
    }

    /// `C(a, k)` with zero outside `0..=a`.
    pub fn get(&self, k: i64) -> &BigUint {
        static ZERO: std::sync::OnceLock<BigUint> = std::sync::OnceLock::new();
        if k < 0 || k as u64 > self.a {
            return ZERO.get_or_init(BigUint::zero);
        }
        &self.values[k as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal(rows: usize) -> Vec<Vec<BigUint>> {
        let mut tri: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
        for a in 1..=rows {
            let prev = &tri[a - 1];
            let mut row = vec![BigUint::one(); a + 1];
            for b in 1..a {
                row[b] = &prev[b - 1] + &prev[b];
            }
            tri.push(row);
        }
        tri
    }

    #[test]
    fn small_values() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(binomial(7, 7), BigUint::one());
    }

    #[test]
    fn out_of_range_is_zero() {
        assert!(binomial(7, -1).is_zero());
        assert!(binomial(7, 8).is_zero());
        assert!(BinomialRow::new(4).get(-2).is_zero());
        assert!(BinomialRow::new(4).get(5).is_zero());
    }

    #[test]
    fn matches_pascal_triangle_at_300() {
        let tri = pascal(300);
        assert_eq!(binomial(300, 150), tri[300][150]);
        let row = BinomialRow::new(300);
        for (b, v) in tri[300].iter().enumerate() {
            assert_eq!(row.get(b as i64), v);
        }
    }

    #[test]
    fn pascal_identity_exhaustive_to_64() {
        for a in 2..=64u64 {
            for b in 1..a as i64 {
                assert_eq!(
                    binomial(a, b),
                    binomial(a - 1, b - 1) + binomial(a - 1, b),
                    "C({a},{b})"
                );
            }
        }
    }

    #[test]
    fn large_order_is_exact() {
        let v = binomial(1024, 512);
        // C(1024,512) has 307 decimal digits
        assert_eq!(v.to_string().len(), 307);
        assert_eq!(v, binomial(1024, 512 - 1) * 513u32 / 512u32);
    }
}
