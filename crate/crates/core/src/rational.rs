//! Exact rational numbers and the integer combinatorics built on them.

use alloc::string::String;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `numer / denom` reduced to lowest terms. Panics on a zero denominator.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn from_biguint(n: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n.clone()))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal {literal:?}: expected \"p\" or \"p/q\" with integer p and positive integer q")]
pub struct ParseRationalError {
    pub literal: String,
}

/// Parses the strict textual form `p` or `p/q`: an optional leading minus
/// sign, decimal digits, and a positive decimal denominator. No whitespace,
/// no plus sign, no decimal point.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError { literal: s.into() };
    let (numer, denom) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits = numer.strip_prefix('-').unwrap_or(numer);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let numer = BigInt::from_str(numer).map_err(|_| err())?;
    let denom = match denom {
        None => BigInt::one(),
        Some(d) => {
            if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err());
            }
            let d = BigInt::from_str(d).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            d
        }
    };
    Ok(Rational::new(numer, denom))
}

pub fn factorial(n: usize) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// Multinomial coefficient `(Σ counts)! / Π counts_i!`, built as a product of
/// binomials so no intermediate exceeds the result by much.
pub fn multinomial(counts: &[usize]) -> BigUint {
    let mut result = BigUint::one();
    let mut running = 0usize;
    for &c in counts {
        for j in 1..=c {
            running += 1;
            result = result * BigUint::from(running) / BigUint::from(j);
        }
    }
    result
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    multinomial(&[k, n - k])
}
