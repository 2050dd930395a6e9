//! Generalised base `<x_n ... x_1> = x_1 + x_2 b_1 + x_3 b_1 b_2 + ...`
//! with radices `b_i = q^i - 1` (i odd) and `b_i = p` (i even).

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A radix schedule `b_1, b_2, ...`, 1-indexed.
pub trait RadixSchedule {
    fn radix(&self, i: usize) -> BigUint;

    /// `b_1 b_2 ... b_n`.
    fn radix_product(&self, n: usize) -> BigUint {
        (1..=n).map(|i| self.radix(i)).product()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedRadix {
    q: u64,
    p: u64,
}

impl MixedRadix {
    /// `q >= 3` keeps `b_1 = q - 1 >= 2`.
    pub fn new(q: u64, p: u64) -> Result<Self> {
        if q < 3 {
            return Err(Error::Precondition(format!("generalised base needs q >= 3, got {q}")));
        }
        if p < 2 {
            return Err(Error::Precondition(format!("generalised base needs p >= 2, got {p}")));
        }
        Ok(MixedRadix { q, p })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `q^{2i-1} - 1`, the radix of the `i`-th exponent digit.
    pub fn odd_radix(&self, i: usize) -> BigUint {
        self.radix(2 * i - 1)
    }
}

impl RadixSchedule for MixedRadix {
    fn radix(&self, i: usize) -> BigUint {
        assert!(i >= 1, "radices are 1-indexed");
        if i % 2 == 1 {
            BigUint::from(self.q).pow(i as u32) - 1u32
        } else {
            BigUint::from(self.p)
        }
    }
}

/// An explicit finite schedule; positions past the end repeat the last
/// radix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CustomRadix(pub Vec<u64>);

impl RadixSchedule for CustomRadix {
    fn radix(&self, i: usize) -> BigUint {
        assert!(i >= 1 && !self.0.is_empty());
        BigUint::from(self.0[(i - 1).min(self.0.len() - 1)])
    }
}

/// Digits `x_1, x_2, ..., x_n`, least significant first. Digits may
/// exceed their radix.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DigitVector {
    #[serde(with = "crate::serde_big::vec")]
    pub digits: Vec<BigUint>,
}

impl DigitVector {
    pub fn new(digits: Vec<BigUint>) -> Self {
        DigitVector { digits }
    }

    pub fn from_u64s(digits: &[u64]) -> Self {
        DigitVector { digits: digits.iter().map(|&d| BigUint::from(d)).collect() }
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// 1-indexed digit access, zero past the end.
    pub fn digit(&self, i: usize) -> BigUint {
        self.digits.get(i - 1).cloned().unwrap_or_default()
    }

    /// True when every digit except the top one lies in `[0, b_i)`.
    pub fn is_canonical<R: RadixSchedule>(&self, base: &R) -> bool {
        let n = self.digits.len();
        self.digits.iter().enumerate().take(n.saturating_sub(1)).all(|(i, d)| *d < base.radix(i + 1))
    }
}

/// Representative of `a mod b` in `[0, b)`.
pub fn fmod(a: &BigInt, b: &BigInt) -> Result<BigInt> {
    if b.sign() != Sign::Plus {
        return Err(Error::Precondition(format!("fmod modulus must be >= 1, got {b}")));
    }
    Ok(a.mod_floor(b))
}

/// `fmod` on machine integers.
pub fn fmod_i128(a: i128, b: i128) -> Result<i128> {
    if b <= 0 {
        return Err(Error::Precondition(format!("fmod modulus must be >= 1, got {b}")));
    }
    Ok(a.rem_euclid(b))
}

/// `<x_n ... x_1>`, evaluated by Horner's rule from the top digit.
pub fn encode<R: RadixSchedule>(base: &R, digits: &DigitVector) -> BigUint {
    let n = digits.digits.len();
    if n == 0 {
        return BigUint::zero();
    }
    let mut acc = digits.digits[n - 1].clone();
    for i in (1..n).rev() {
        acc = acc * base.radix(i) + &digits.digits[i - 1];
    }
    acc
}

/// Canonical digits for the first `num_digits - 1` positions; the top
/// digit absorbs the remaining quotient.
pub fn decode<R: RadixSchedule>(base: &R, n: &BigUint, num_digits: usize) -> DigitVector {
    assert!(num_digits >= 1, "decode needs at least one digit");
    let mut rest = n.clone();
    let mut digits = Vec::with_capacity(num_digits);
    for i in 1..num_digits {
        let (quo, rem) = rest.div_rem(&base.radix(i));
        digits.push(rem);
        rest = quo;
    }
    digits.push(rest);
    DigitVector { digits }
}

/// `p^k prod_{i<=k} (q^{2i-1} - 1)`, the value of `b_1 ... b_{2k}`
/// computed from the closed form.
pub fn paired_radix_product(base: &MixedRadix, k: usize) -> BigUint {
    let q = BigUint::from(base.q);
    let mut acc = BigUint::from(base.p).pow(k as u32);
    for i in 1..=k {
        acc *= q.pow(2 * i as u32 - 1) - BigUint::one();
    }
    acc
}
