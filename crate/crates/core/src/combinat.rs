//! Binomials and multinomials over arbitrary precision integers.
//!
//! Both are total functions: any negative or infeasible argument yields zero,
//! which lets the inclusion-exclusion sums range over boxes instead of
//! carefully clipped index sets.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::Count;

/// `C(a, b)`, zero when `a < 0`, `b < 0` or `b > a`.
pub fn binomial(a: i64, b: i64) -> Count {
    if a < 0 || b < 0 || b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b) as u64;
    let a = a as u64;
    let mut acc = BigUint::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// Multinomial coefficient `(p_1 + ... + p_r)! / (p_1! ... p_r!)`, zero if any
/// part is negative.
pub fn multinomial(parts: &[i64]) -> Count {
    if parts.iter().any(|&p| p < 0) {
        return BigUint::zero();
    }
    let mut remaining: i64 = parts.iter().sum();
    let mut acc = BigUint::one();
    for &p in parts {
        acc *= binomial(remaining, p);
        remaining -= p;
    }
    acc
}

/// `n!` for small `n`.
pub fn factorial(n: u64) -> Count {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// The `m`-th Catalan number.
pub fn catalan(m: u64) -> Count {
    binomial(2 * m as i64, m as i64) / (m + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: u64) -> Count {
        BigUint::from(v)
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(5, 2), c(10));
        assert_eq!(binomial(0, 0), c(1));
        assert_eq!(binomial(10, 10), c(1));
        assert_eq!(binomial(60, 30), c(118264581564861424));
    }

    #[test]
    fn binomial_zero_conventions() {
        assert_eq!(binomial(-1, 0), c(0));
        assert_eq!(binomial(3, -1), c(0));
        assert_eq!(binomial(3, 4), c(0));
    }

    #[test]
    fn multinomial_matches_factorials() {
        // 7! / (2! 3! 2!) = 210
        assert_eq!(multinomial(&[2, 3, 2]), c(210));
        assert_eq!(multinomial(&[0, 0, 0]), c(1));
        assert_eq!(multinomial(&[1, -1, 2]), c(0));
        let direct = factorial(9) / (factorial(2) * factorial(4) * factorial(3));
        assert_eq!(multinomial(&[2, 4, 3]), direct);
    }

    #[test]
    fn catalan_numbers() {
        let got: Vec<_> = (0..8).map(catalan).collect();
        let want: Vec<_> = [1u64, 1, 2, 5, 14, 42, 132, 429]
            .iter()
            .map(|&v| c(v))
            .collect();
        assert_eq!(got, want);
    }
}
