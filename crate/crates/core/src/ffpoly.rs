//! Dense polynomials over a prime field `F_q`.
//!
//! Coefficients are stored least-significant first and kept in canonical
//! form: every coefficient lies in `[0, q)` and the vector carries no
//! trailing zeros, so the zero polynomial is the empty vector.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `q^d` that [`enumerate_irreducibles`] will walk.
pub const ENUMERATION_CAP: u64 = 10_000_000;

/// A prime `q`, checked by trial division.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(q: u64) -> Result<Self> {
        if is_prime_u64(q) {
            Ok(PrimeModulus(q))
        } else {
            Err(Error::NotPrime(q))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero field element (Fermat).
    fn inv(self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.0));
        self.pow(a, self.0 - 2)
    }
}

impl TryFrom<u64> for PrimeModulus {
    type Error = Error;
    fn try_from(q: u64) -> Result<Self> {
        PrimeModulus::new(q)
    }
}

impl From<PrimeModulus> for u64 {
    fn from(q: PrimeModulus) -> u64 {
        q.0
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Deterministic primality by trial division; fine for the small moduli
/// used here.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of `F_q[t]` in canonical dense form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    q: PrimeModulus,
    coeffs: Vec<u64>,
}

impl Poly {
    /// Builds a polynomial from coefficients (least significant first),
    /// reducing each one modulo `q`.
    pub fn new(q: PrimeModulus, coeffs: Vec<u64>) -> Self {
        let mut coeffs = coeffs;
        for c in coeffs.iter_mut() {
            *c %= q.get();
        }
        let mut p = Poly { q, coeffs };
        p.normalize();
        p
    }

    /// Like [`Poly::new`] but rejects coefficients outside `[0, q)`.
    pub fn from_canonical(q: PrimeModulus, coeffs: Vec<u64>) -> Result<Self> {
        if let Some(&c) = coeffs.iter().find(|&&c| c >= q.get()) {
            return Err(Error::CoefficientOutOfRange { coeff: c, q: q.get() });
        }
        let mut p = Poly { q, coeffs };
        p.normalize();
        Ok(p)
    }

    pub fn zero(q: PrimeModulus) -> Self {
        Poly { q, coeffs: Vec::new() }
    }

    pub fn one(q: PrimeModulus) -> Self {
        Poly::constant(q, 1)
    }

    pub fn constant(q: PrimeModulus, c: u64) -> Self {
        Poly::new(q, vec![c])
    }

    /// The indeterminate `t`.
    pub fn t(q: PrimeModulus) -> Self {
        Poly { q, coeffs: vec![0, 1] }
    }

    /// `t^n`.
    pub fn monomial(q: PrimeModulus, n: usize) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[n] = 1;
        Poly { q, coeffs }
    }

    /// The polynomial whose coefficients are the base-`q` digits of
    /// `index`, constant coefficient least significant. This is the
    /// enumeration order used throughout the crate.
    pub fn from_index(q: PrimeModulus, mut index: u64) -> Self {
        let mut coeffs = Vec::new();
        while index > 0 {
            coeffs.push(index % q.get());
            index /= q.get();
        }
        Poly { q, coeffs }
    }

    /// Inverse of [`Poly::from_index`]; `None` on overflow.
    pub fn to_index(&self) -> Option<u64> {
        let mut acc: u64 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = acc.checked_mul(self.q.get())?.checked_add(c)?;
        }
        Some(acc)
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    #[inline]
    pub fn modulus(&self) -> PrimeModulus {
        self.q
    }

    #[inline]
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Degree, with `None` standing in for minus infinity.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn leading_coeff(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    fn check_same_field(&self, other: &Poly) -> Result<()> {
        if self.q != other.q {
            return Err(Error::ModulusMismatch(self.q.get(), other.q.get()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_same_field(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.check_same_field(other)?;
        Ok(self.sub_unchecked(other))
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check_same_field(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &Poly) -> Poly {
        let q = self.q;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| q.add(self.coeff(i), other.coeff(i))).collect();
        let mut p = Poly { q, coeffs };
        p.normalize();
        p
    }

    pub(crate) fn sub_unchecked(&self, other: &Poly) -> Poly {
        let q = self.q;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| q.sub(self.coeff(i), other.coeff(i))).collect();
        let mut p = Poly { q, coeffs };
        p.normalize();
        p
    }

    pub(crate) fn mul_unchecked(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.q);
        }
        let q = self.q;
        let mut acc = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        // Accumulate in u128 and reduce once per output slot.
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] += a as u128 * b as u128;
                if acc[i + j] >= (1u128 << 120) {
                    acc[i + j] %= q.get() as u128;
                }
            }
        }
        let coeffs = acc.into_iter().map(|c| (c % q.get() as u128) as u64).collect();
        let mut p = Poly { q, coeffs };
        p.normalize();
        p
    }

    pub fn scale(&self, c: u64) -> Poly {
        let q = self.q;
        let c = c % q.get();
        let coeffs = self.coeffs.iter().map(|&a| q.mul(a, c)).collect();
        let mut p = Poly { q, coeffs };
        p.normalize();
        p
    }

    /// Scales to leading coefficient 1; zero stays zero.
    pub fn make_monic(&self) -> Poly {
        match self.coeffs.last() {
            None | Some(1) => self.clone(),
            Some(&lc) => self.scale(self.q.inv(lc)),
        }
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Poly {
        let q = self.q;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| q.mul(c, i as u64 % q.get()))
            .collect();
        let mut p = Poly { q, coeffs };
        p.normalize();
        p
    }

    /// Euclidean division: `self = quotient * divisor + remainder`.
    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check_same_field(divisor)?;
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let q = self.q;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(q), self.clone()));
        }
        let inv_lc = q.inv(divisor.leading_coeff());
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let factor = q.mul(c, inv_lc);
            quot[i - dd] = factor;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = q.sub(rem[idx], q.mul(factor, dc));
            }
        }
        rem.truncate(dd);
        let mut quotient = Poly { q, coeffs: quot };
        quotient.normalize();
        let mut remainder = Poly { q, coeffs: rem };
        remainder.normalize();
        Ok((quotient, remainder))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.divmod(divisor)?.1)
    }

    /// `self^exp mod modulus` by square-and-multiply.
    pub fn powmod(&self, exp: &BigUint, modulus: &Poly) -> Result<Poly> {
        self.check_same_field(modulus)?;
        match modulus.degree() {
            None => return Err(Error::DivisionByZero),
            Some(0) => return Err(Error::Precondition("powmod modulus must have degree >= 1".into())),
            Some(_) => {}
        }
        let base = self.rem(modulus)?;
        let mut acc = Poly::one(self.q).rem(modulus)?;
        let bits = exp.bits();
        for i in (0..bits).rev() {
            acc = acc.mul_unchecked(&acc).rem(modulus)?;
            if exp.bit(i) {
                acc = acc.mul_unchecked(&base).rem(modulus)?;
            }
        }
        Ok(acc)
    }

    pub fn powmod_u64(&self, exp: u64, modulus: &Poly) -> Result<Poly> {
        self.powmod(&BigUint::from(exp), modulus)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.check_same_field(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.make_monic())
    }

    /// Extended Euclid: returns `(g, s, t)` with `s*self + t*other = g`,
    /// `g` monic.
    pub fn xgcd(&self, other: &Poly) -> Result<(Poly, Poly, Poly)> {
        self.check_same_field(other)?;
        let q = self.q;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(q), Poly::zero(q));
        let (mut t0, mut t1) = (Poly::zero(q), Poly::one(q));
        while !r1.is_zero() {
            let (quo, rem) = r0.divmod(&r1)?;
            let s2 = s0.sub_unchecked(&quo.mul_unchecked(&s1));
            let t2 = t0.sub_unchecked(&quo.mul_unchecked(&t1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return Ok((r0, s0, t0));
        }
        let inv = q.inv(r0.leading_coeff());
        Ok((r0.scale(inv), s0.scale(inv), t0.scale(inv)))
    }

    /// Inverse of `self` modulo `modulus`, if it exists.
    pub fn inverse_mod(&self, modulus: &Poly) -> Result<Option<Poly>> {
        let (g, s, _) = self.rem(modulus)?.xgcd(modulus)?;
        if g.is_one() {
            Ok(Some(s.rem(modulus)?))
        } else {
            Ok(None)
        }
    }

    /// Canonical bytes: `q` then the coefficients, little-endian `u64`s.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 * (self.coeffs.len() + 1));
        out.extend_from_slice(&self.q.get().to_le_bytes());
        for c in &self.coeffs {
            out.extend_from_slice(&c.to_le_bytes());
        }
        out
    }

    /// Parses the `c0+c1*t+c2*t^2` text format.
    pub fn parse(q: PrimeModulus, text: &str) -> Result<Poly> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse(format!("empty polynomial {text:?}")));
        }
        let bad = || Error::Parse(format!("malformed polynomial {text:?}"));
        let mut coeffs: Vec<u64> = Vec::new();
        for term in s.split('+') {
            if term.is_empty() {
                return Err(bad());
            }
            let (coef, power) = match term.find('t') {
                None => (term.parse::<u64>().map_err(|_| bad())?, 0usize),
                Some(pos) => {
                    let (head, tail) = term.split_at(pos);
                    let coef = if head.is_empty() {
                        1
                    } else {
                        head.strip_suffix('*').ok_or_else(bad)?.parse::<u64>().map_err(|_| bad())?
                    };
                    let power = match &tail[1..] {
                        "" => 1,
                        rest => rest.strip_prefix('^').ok_or_else(bad)?.parse::<usize>().map_err(|_| bad())?,
                    };
                    (coef, power)
                }
            };
            if coef >= q.get() {
                return Err(Error::CoefficientOutOfRange { coeff: coef, q: q.get() });
            }
            if coeffs.len() <= power {
                coeffs.resize(power + 1, 0);
            }
            coeffs[power] = q.add(coeffs[power], coef);
        }
        let mut p = Poly { q, coeffs };
        p.normalize();
        Ok(p)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, c) => write!(f, "{c}*t")?,
                (i, 1) => write!(f, "t^{i}")?,
                (i, c) => write!(f, "{c}*t^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[F_{}]({})", self.q, self)
    }
}

/// Degree first, then the enumeration order of [`Poly::from_index`].
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.q
            .cmp(&other.q)
            .then(self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn poly_add(a: &Poly, b: &Poly) -> Result<Poly> {
    a.add(b)
}

pub fn poly_sub(a: &Poly, b: &Poly) -> Result<Poly> {
    a.sub(b)
}

pub fn poly_mul(a: &Poly, b: &Poly) -> Result<Poly> {
    a.mul(b)
}

pub fn poly_divmod(a: &Poly, g: &Poly) -> Result<(Poly, Poly)> {
    a.divmod(g)
}

pub fn poly_powmod(f: &Poly, e: &BigUint, g: &Poly) -> Result<Poly> {
    f.powmod(e, g)
}

/// Distinct prime divisors of `n` (trial division).
pub(crate) fn distinct_prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Möbius function by trial-division factoring.
pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1);
    let mut n = n;
    let mut sign = 1i64;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// `t^(q^times) mod f`, by repeated Frobenius.
fn frobenius_power(t_mod_f: &Poly, times: usize, f: &Poly) -> Result<Poly> {
    let q = BigUint::from(f.modulus().get());
    let mut h = t_mod_f.clone();
    for _ in 0..times {
        h = h.powmod(&q, f)?;
    }
    Ok(h)
}

/// Rabin's test: `t^(q^d) = t (mod f)` and `gcd(t^(q^(d/l)) - t, f) = 1`
/// for each prime `l | d`.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    if !f.is_monic() {
        return Err(Error::NotMonic(f.to_string()));
    }
    let d = match f.degree() {
        Some(0) | None => return Err(Error::Precondition("irreducibility needs degree >= 1".into())),
        Some(d) => d,
    };
    if d == 1 {
        return Ok(true);
    }
    let q = f.modulus();
    let t = Poly::t(q).rem(f)?;
    if frobenius_power(&t, d, f)? != t {
        return Ok(false);
    }
    for l in distinct_prime_divisors(d as u64) {
        let h = frobenius_power(&t, d / l as usize, f)?;
        if !h.sub_unchecked(&t).gcd(f)?.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn checked_power(q: u64, d: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..d {
        acc = acc.checked_mul(q)?;
    }
    Some(acc)
}

/// All monic degree-`d` polynomials in enumeration order, as a lazy
/// iterator. `d >= 1`.
pub(crate) fn monic_polys(q: PrimeModulus, d: usize) -> Result<impl Iterator<Item = Poly>> {
    let count = checked_power(q.get(), d)
        .filter(|&n| n <= ENUMERATION_CAP)
        .ok_or_else(|| Error::CapExceeded(format!("q^d = {}^{} exceeds enumeration cap {}", q, d, ENUMERATION_CAP)))?;
    Ok((0..count).map(move |idx| {
        let mut p = Poly::from_index(q, idx);
        p.coeffs.resize(d, 0);
        p.coeffs.push(1);
        p
    }))
}

/// All monic irreducibles of degree `d`, constant coefficient varying
/// fastest.
pub fn enumerate_irreducibles(q: PrimeModulus, d: usize) -> Result<Vec<Poly>> {
    use rayon::prelude::*;
    if d == 0 {
        return Err(Error::Precondition("degree must be >= 1".into()));
    }
    let candidates: Vec<Poly> = monic_polys(q, d)?.collect();
    let flags: Vec<bool> = candidates
        .par_iter()
        .map(|f| is_irreducible(f).expect("monic of positive degree"))
        .collect();
    Ok(candidates.into_iter().zip(flags).filter_map(|(f, ok)| ok.then_some(f)).collect())
}

/// First monic irreducible of degree `d` in enumeration order.
pub fn first_irreducible(q: PrimeModulus, d: usize) -> Result<Poly> {
    if d == 0 {
        return Err(Error::Precondition("degree must be >= 1".into()));
    }
    for f in monic_polys(q, d)? {
        if is_irreducible(&f)? {
            return Ok(f);
        }
    }
    unreachable!("every degree has an irreducible polynomial")
}

/// Number of monic irreducibles of degree `d`: `(1/d) sum_{e|d} mu(d/e) q^e`.
pub fn count_irreducibles(q: PrimeModulus, d: usize) -> BigUint {
    assert!(d >= 1, "degree must be >= 1");
    let qb = BigUint::from(q.get());
    let mut pos = BigUint::zero();
    let mut neg = BigUint::zero();
    for e in 1..=d {
        if !d.is_multiple_of(e) {
            continue;
        }
        let term = qb.pow(e as u32);
        match mobius((d / e) as u64) {
            1 => pos += term,
            -1 => neg += term,
            _ => {}
        }
    }
    (pos - neg) / BigUint::from(d)
}

/// `count_irreducibles` as a `u64`, if it fits.
pub fn count_irreducibles_u64(q: PrimeModulus, d: usize) -> Option<u64> {
    count_irreducibles(q, d).to_u64()
}

/// Polynomial Chinese remainder theorem. Returns the unique `f` with
/// `deg f < sum deg moduli` and `f = residues[i] (mod moduli[i])`.
pub fn crt(residues: &[Poly], moduli: &[Poly]) -> Result<Poly> {
    if residues.len() != moduli.len() || moduli.is_empty() {
        return Err(Error::Precondition("crt needs equally many residues and moduli (at least one)".into()));
    }
    let q = moduli[0].modulus();
    let mut acc = residues[0].rem(&moduli[0])?;
    let mut modulus = moduli[0].clone();
    for (r, m) in residues.iter().zip(moduli).skip(1) {
        let inv = modulus
            .inverse_mod(m)?
            .ok_or_else(|| Error::NotCoprime(modulus.to_string(), m.to_string()))?;
        // acc + modulus * ((r - acc) * inv mod m)
        let delta = r.sub(&acc)?.mul_unchecked(&inv).rem(m)?;
        acc = acc.add_unchecked(&modulus.mul_unchecked(&delta));
        modulus = modulus.mul_unchecked(m);
    }
    debug_assert_eq!(acc.modulus(), q);
    acc.rem(&modulus)
}

/// Product of a nonempty list of polynomials.
pub fn product(polys: &[Poly]) -> Option<Poly> {
    let first = polys.first()?;
    Some(polys[1..].iter().fold(first.clone(), |acc, p| acc.mul_unchecked(p)))
}

/// `q^d` as a big integer.
pub fn field_power(q: PrimeModulus, d: usize) -> BigUint {
    BigUint::from(q.get()).pow(d as u32)
}

/// `q^d - 1`, the unit-group order of `F_q[t]/(g)` for irreducible `g`
/// of degree `d`.
pub fn unit_count_field(q: PrimeModulus, d: usize) -> BigUint {
    field_power(q, d) - BigUint::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> PrimeModulus {
        PrimeModulus::new(q).unwrap()
    }

    fn p(q: u64, s: &str) -> Poly {
        Poly::parse(f(q), s).unwrap()
    }

    #[test]
    fn modulus_must_be_prime() {
        assert!(PrimeModulus::new(4).is_err());
        assert!(PrimeModulus::new(1).is_err());
        assert!(PrimeModulus::new(7).is_ok());
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(p(3, "1+t").mul(&p(3, "2+t")).unwrap(), p(3, "2+t^2"));
        let a = p(5, "3+4*t^3");
        assert_eq!(a.add(&Poly::zero(f(5))).unwrap(), a);
        assert_eq!(p(2, "t").mul(&p(2, "t")).unwrap(), p(2, "t^2"));
        assert!(matches!(p(2, "t").add(&p(3, "t")), Err(Error::ModulusMismatch(2, 3))));
    }

    #[test]
    fn divmod_examples() {
        let (_, r) = p(3, "2+t^2").divmod(&p(3, "1+t^2")).unwrap();
        assert_eq!(r, Poly::one(f(3)));
        let a = p(3, "1+2*t+t^4");
        assert!(a.rem(&a).unwrap().is_zero());
        assert_eq!(p(3, "2").rem(&p(3, "t")).unwrap(), p(3, "2"));
        assert!(matches!(a.divmod(&Poly::zero(f(3))), Err(Error::DivisionByZero)));
    }

    #[test]
    fn powmod_examples() {
        let g = p(3, "1+t^2");
        let w = p(3, "1+t");
        assert!(w.powmod_u64(0, &g).unwrap().is_one());
        assert_eq!(w.powmod_u64(2, &g).unwrap(), p(3, "2*t"));
        assert!(w.powmod_u64(8, &g).unwrap().is_one());
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible(&p(3, "1+t^2")).unwrap());
        assert!(!is_irreducible(&p(2, "t^2")).unwrap());
        assert!(!is_irreducible(&p(2, "1+t^2")).unwrap());
        assert!(matches!(is_irreducible(&p(3, "2*t^2")), Err(Error::NotMonic(_))));
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_irreducibles(f(2), 1).unwrap(), vec![p(2, "t"), p(2, "1+t")]);
        assert_eq!(enumerate_irreducibles(f(3), 2).unwrap().len(), 3);
        assert_eq!(enumerate_irreducibles(f(2), 4).unwrap().len(), 3);
        assert!(matches!(enumerate_irreducibles(f(2), 40), Err(Error::CapExceeded(_))));
        assert_eq!(first_irreducible(f(3), 3).unwrap(), enumerate_irreducibles(f(3), 3).unwrap()[0]);
    }

    #[test]
    fn gauss_count_examples() {
        assert_eq!(count_irreducibles(f(3), 2), BigUint::from(3u32));
        assert_eq!(count_irreducibles(f(5), 1), BigUint::from(5u32));
        assert_eq!(count_irreducibles(f(3), 3), BigUint::from(8u32));
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(30), -1);
    }

    #[test]
    fn crt_examples() {
        let r = crt(&[p(3, "1"), p(3, "2")], &[p(3, "t"), p(3, "1+t")]).unwrap();
        assert_eq!(r, p(3, "1+2*t"));
        let single = crt(&[p(3, "2+t")], &[p(3, "1+t^2")]).unwrap();
        assert_eq!(single, p(3, "2+t"));
        let c = crt(&[p(5, "3"), p(5, "3"), p(5, "3")], &[p(5, "t"), p(5, "1+t"), p(5, "2+t^2")]).unwrap();
        assert_eq!(c, p(5, "3"));
        assert!(matches!(
            crt(&[p(3, "1"), p(3, "2")], &[p(3, "t"), p(3, "t+t^2")]),
            Err(Error::NotCoprime(_, _))
        ));
    }

    #[test]
    fn text_format() {
        assert_eq!(p(3, "1+t^2").to_string(), "1+t^2");
        assert_eq!(Poly::zero(f(3)).to_string(), "0");
        assert_eq!(p(5, " 4 + 3*t + t^3 ").to_string(), "4+3*t+t^3");
        assert_eq!(p(5, "t^2+2*t^2").to_string(), "3*t^2");
        assert!(Poly::parse(f(3), "3*t").is_err());
        assert!(Poly::parse(f(3), "1++t").is_err());
        assert!(Poly::parse(f(3), "2t").is_err());
    }

    #[test]
    fn index_order_roundtrip() {
        let q = f(3);
        for i in 0..200 {
            assert_eq!(Poly::from_index(q, i).to_index(), Some(i));
        }
        let mut v: Vec<Poly> = (0..50).map(|i| Poly::from_index(q, i)).collect();
        let sorted = v.clone();
        v.reverse();
        v.sort();
        assert_eq!(v, sorted);
    }

    #[test]
    fn xgcd_identity() {
        let a = p(7, "3+t+5*t^4");
        let b = p(7, "1+t^2");
        let (g, s, t) = a.xgcd(&b).unwrap();
        assert_eq!(s.mul(&a).unwrap().add(&t.mul(&b).unwrap()).unwrap(), g);
    }
}
