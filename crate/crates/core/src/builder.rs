//! Assembles the sequence `S = {n_f}`.
//!
//! For each `k`, `F_k` collects the monic irreducibles of every even
//! degree `2i` with `c k^2 <= 2i < c (k+1)^2`. An element `f` of `F_k`
//! becomes the integer
//!
//! ```text
//! n_f = <s r_k e_k ... r_1 e_1>
//! ```
//!
//! in the base `b_{2i-1} = q^{2i-1} - 1`, `b_{2i} = p`, where
//! `e_i = log_{omega_i}(f mod g_i)`, each `r_i` is drawn uniformly from
//! `A` and `s` uniformly from `{1, ..., q^{3k}}`. The random digits are
//! keyed on `(seed, f, i)` so each one is independent and reproducible.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigUint, RandBigInt};
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::auxset::AuxSet;
use crate::error::{Error, Result};
use crate::ffpoly::{crt, enumerate_irreducibles, first_irreducible, is_irreducible, Poly, PrimeModulus};
use crate::gbase::{decode, encode, paired_radix_product, DigitVector, MixedRadix, RadixSchedule};
use crate::rng::keyed_rng;
use crate::unitgroup::{dlog, find_generator, Generator};

/// A positive rational parameter, written `num/den` or as a decimal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Density(Ratio<u64>);

impl Density {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num == 0 {
            return Err(Error::Precondition(format!("density {num}/{den} must be positive")));
        }
        Ok(Density(Ratio::new(num, den)))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    /// `1/3 < c < (3 - √5)/2`, decided exactly.
    pub fn in_admissible_range(&self) -> bool {
        let (a, b) = (self.numer() as u128, self.denom() as u128);
        // c > 1/3  <=>  3a > b
        // c < (3-√5)/2  <=>  3b - 2a > 0 and (3b - 2a)^2 > 5 b^2
        3 * a > b && 3 * b > 2 * a && (3 * b - 2 * a).pow(2) > 5 * b * b
    }
}

impl Default for Density {
    fn default() -> Self {
        Density(Ratio::new(35, 100))
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for Density {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad density {s:?}"));
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            return Density::new(n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 12 || (int.is_empty() && frac.is_empty()) {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac_v: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        Density::new(int * den + frac_v, den)
    }
}

impl Serialize for Density {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Density {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub q: PrimeModulus,
    pub aux: AuxSet,
    pub c: Density,
    pub k_min: usize,
    pub k_max: usize,
    pub seed: u64,
    #[serde(default)]
    pub strict: bool,
}

impl Params {
    pub fn new(q: PrimeModulus, aux: AuxSet, k_min: usize, k_max: usize, seed: u64) -> Self {
        Params { q, aux, c: Density::default(), k_min, k_max, seed, strict: false }
    }

    pub fn base(&self) -> Result<MixedRadix> {
        MixedRadix::new(self.q.get(), self.aux.p())
    }

    /// Checks the hard preconditions, returning the scaled-mode warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        self.base()?;
        if self.k_min == 0 {
            return Err(Error::Precondition("k_min must be >= 1".into()));
        }
        let mut warnings = Vec::new();
        let q = self.q.get();
        let p = self.aux.p();
        let c0_floor = 100 * p;
        let mut gaps = Vec::new();
        if !self.c.in_admissible_range() {
            gaps.push(format!("c = {} lies outside (1/3, (3-sqrt 5)/2)", self.c));
        }
        if q <= c0_floor {
            gaps.push(format!("q = {q} does not exceed 100p = {c0_floor}"));
        }
        if (self.k_min as u64) <= c0_floor {
            gaps.push(format!("k_min = {} does not exceed 100p = {c0_floor}", self.k_min));
        }
        if self.strict && !gaps.is_empty() {
            return Err(Error::Strict(gaps.join("; ")));
        }
        if !self.strict {
            warnings.push(
                "scaled mode: parameters are far below the asymptotic regime and its guarantees are not in force; \
                 see the precondition audit for the margins that do hold"
                    .to_string(),
            );
            warnings.extend(gaps);
        }
        Ok(warnings)
    }
}

/// One modulus `g_i` (degree `2i - 1`) with its generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuliTable {
    generators: Vec<Generator>,
}

impl ModuliTable {
    /// `g_i` for `i = 1..=k`.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// 1-indexed.
    pub fn generator(&self, i: usize) -> &Generator {
        &self.generators[i - 1]
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn from_generators(generators: Vec<Generator>) -> Result<Self> {
        for (idx, g) in generators.iter().enumerate() {
            if g.modulus().degree() != Some(2 * idx + 1) {
                return Err(Error::Malformed(format!("modulus {} should have degree {}", idx + 1, 2 * idx + 1)));
            }
        }
        Ok(ModuliTable { generators })
    }
}

/// `g_i` is the first monic irreducible of degree `2i - 1` in enumeration
/// order; `omega_i` the first generator found by the scan.
pub fn build_moduli(q: PrimeModulus, k_max: usize) -> Result<ModuliTable> {
    let generators = (1..=k_max)
        .into_par_iter()
        .map(|i| {
            let g = first_irreducible(q, 2 * i - 1)?;
            find_generator(&g)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ModuliTable { generators })
}

/// Even degrees `2i` with `c k^2 <= 2i < c (k+1)^2`.
pub fn fk_degrees(c: Density, k: usize) -> Vec<usize> {
    let (a, b) = (c.numer() as u128, c.denom() as u128);
    let lo = a * (k as u128).pow(2);
    let hi = a * (k as u128 + 1).pow(2);
    // 2i * b >= lo  and  2i * b < hi
    (1..)
        .map(|i: u128| 2 * i)
        .skip_while(|&d| d * b < lo)
        .take_while(|&d| d * b < hi)
        .map(|d| d as usize)
        .collect()
}

/// `F_k` in degree-then-enumeration order.
pub fn build_fk(q: PrimeModulus, c: Density, k: usize) -> Result<Vec<Poly>> {
    let mut out = Vec::new();
    for d in fk_degrees(c, k) {
        out.extend(enumerate_irreducibles(q, d)?);
    }
    Ok(out)
}

/// A member of the sequence together with every digit that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceEntry {
    pub f: Poly,
    pub k: usize,
    pub e: Vec<u64>,
    pub r: Vec<u64>,
    pub s: BigUint,
    pub n: BigUint,
}

impl SequenceEntry {
    /// `e_1, r_1, ..., e_k, r_k, s`.
    pub fn digit_vector(&self) -> DigitVector {
        let mut digits = Vec::with_capacity(2 * self.k + 1);
        for (e, r) in self.e.iter().zip(&self.r) {
            digits.push(BigUint::from(*e));
            digits.push(BigUint::from(*r));
        }
        digits.push(self.s.clone());
        DigitVector::new(digits)
    }
}

/// `q^{3k}`, the top of the range of `s`.
pub fn s_upper(q: PrimeModulus, k: usize) -> BigUint {
    BigUint::from(q.get()).pow(3 * k as u32)
}

/// Exponent digits `e_i(f)` for `i = 1..=k`.
pub fn exponent_digits(moduli: &ModuliTable, f: &Poly, k: usize) -> Result<Vec<u64>> {
    if moduli.len() < k {
        return Err(Error::Precondition(format!("moduli table has {} entries, need {k}", moduli.len())));
    }
    (1..=k).map(|i| dlog(moduli.generator(i), f)).collect()
}

/// Random digits `(r_1..r_k, s)` for `f`, keyed on `(seed, f, i)`; `s`
/// uses index `0`.
pub fn random_digits(params: &Params, f: &Poly, k: usize, seed: u64) -> (Vec<u64>, BigUint) {
    let bytes = f.canonical_bytes();
    let a = params.aux.elements();
    let r = (1..=k)
        .map(|i| {
            let mut rng = keyed_rng("builder/r", &[seed, i as u64], &bytes);
            a[rng.gen_range(0..a.len())]
        })
        .collect();
    let mut rng = keyed_rng("builder/s", &[seed, 0], &bytes);
    let s = rng.gen_biguint_range(&BigUint::one(), &(s_upper(params.q, k) + 1u32));
    (r, s)
}

fn assemble(base: &MixedRadix, f: Poly, k: usize, e: Vec<u64>, r: Vec<u64>, s: BigUint) -> SequenceEntry {
    let mut entry = SequenceEntry { f, k, e, r, s, n: BigUint::zero() };
    entry.n = encode(base, &entry.digit_vector());
    entry
}

pub fn compute_entry(params: &Params, moduli: &ModuliTable, f: &Poly, k: usize) -> Result<SequenceEntry> {
    let base = params.base()?;
    let e = exponent_digits(moduli, f, k)?;
    let (r, s) = random_digits(params, f, k, params.seed);
    Ok(assemble(&base, f.clone(), k, e, r, s))
}

/// Same `f` and exponent digits, fresh `r` and `s` under `seed`.
pub fn rerandomize(params: &Params, entry: &SequenceEntry, seed: u64) -> Result<SequenceEntry> {
    let base = params.base()?;
    let (r, s) = random_digits(params, &entry.f, entry.k, seed);
    Ok(assemble(&base, entry.f.clone(), entry.k, entry.e.clone(), r, s))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SidonSequence {
    pub params: Params,
    pub moduli: ModuliTable,
    /// Sorted by `n`.
    pub entries: Vec<SequenceEntry>,
    pub warnings: Vec<String>,
}

impl SidonSequence {
    pub fn values(&self) -> Vec<BigUint> {
        self.entries.iter().map(|e| e.n.clone()).collect()
    }

    pub fn find(&self, n: &BigUint) -> Option<&SequenceEntry> {
        self.entries.binary_search_by(|e| e.n.cmp(n)).ok().map(|i| &self.entries[i])
    }

    /// Sorts by `n` and rejects repeated values.
    pub(crate) fn sort_and_check(entries: &mut [SequenceEntry]) -> Result<()> {
        entries.par_sort_by(|a, b| a.n.cmp(&b.n));
        if let Some(w) = entries.windows(2).find(|w| w[0].n == w[1].n) {
            return Err(Error::DuplicateValue {
                n: w[0].n.to_string(),
                first: w[0].f.to_string(),
                second: w[1].f.to_string(),
            });
        }
        Ok(())
    }

    /// Same polynomials and exponent digits, fresh random digits.
    pub fn rerandomized(&self, seed: u64) -> Result<SidonSequence> {
        let mut entries = self
            .entries
            .par_iter()
            .map(|e| rerandomize(&self.params, e, seed))
            .collect::<Result<Vec<_>>>()?;
        Self::sort_and_check(&mut entries)?;
        let mut params = self.params.clone();
        params.seed = seed;
        Ok(SidonSequence { params, moduli: self.moduli.clone(), entries, warnings: self.warnings.clone() })
    }
}

pub fn build_sequence(params: &Params) -> Result<SidonSequence> {
    let mut warnings = params.validate()?;
    let moduli = build_moduli(params.q, params.k_max)?;
    let mut entries = Vec::new();
    for k in params.k_min..=params.k_max {
        let fk = build_fk(params.q, params.c, k)?;
        if fk.is_empty() {
            warnings.push(format!("F_{k} is empty for c = {}", params.c));
        }
        let built = fk
            .par_iter()
            .map(|f| compute_entry(params, &moduli, f, k))
            .collect::<Result<Vec<_>>>()?;
        entries.extend(built);
    }
    SidonSequence::sort_and_check(&mut entries)?;
    Ok(SidonSequence { params: params.clone(), moduli, entries, warnings })
}

/// Recovers `(f, k)` from `n`.
///
/// Every `k` in the parameter range with `1 <= n / b_1...b_{2k} <= q^{3k}`
/// is tried; a candidate is accepted when its digits are in range, its
/// `r` digits lie in `A`, and the CRT lift of the exponent digits is a
/// member of `F_k`.
pub fn decode_entry(n: &BigUint, params: &Params, moduli: &ModuliTable) -> Result<(Poly, usize)> {
    let base = params.base()?;
    let mut found: Option<(Poly, usize)> = None;
    for k in params.k_min..=params.k_max.min(moduli.len()) {
        let Some(f) = try_decode_at(n, params, moduli, &base, k)? else {
            continue;
        };
        if let Some((prev, _)) = &found {
            if prev != &f {
                return Err(Error::ForeignValue(format!("{n} decodes ambiguously ({prev} and {f})")));
            }
        } else {
            found = Some((f, k));
        }
    }
    found.ok_or_else(|| Error::ForeignValue(n.to_string()))
}

fn try_decode_at(
    n: &BigUint,
    params: &Params,
    moduli: &ModuliTable,
    base: &MixedRadix,
    k: usize,
) -> Result<Option<Poly>> {
    let s = n / paired_radix_product(base, k);
    if s.is_zero() || s > s_upper(params.q, k) {
        return Ok(None);
    }
    let digits = decode(base, n, 2 * k + 1);
    let mut residues = Vec::with_capacity(k);
    let mut mods = Vec::with_capacity(k);
    for i in 1..=k {
        let r = digits.digit(2 * i).to_u64().unwrap_or(u64::MAX);
        if !params.aux.contains(r) {
            return Ok(None);
        }
        let e = digits.digit(2 * i - 1).to_u64().expect("below the odd radix");
        let gen = moduli.generator(i);
        residues.push(gen.pow(e));
        mods.push(gen.modulus().clone());
    }
    let f = crt(&residues, &mods)?;
    let degrees = fk_degrees(params.c, k);
    let in_fk = f.is_monic() && f.degree().is_some_and(|d| degrees.contains(&d)) && is_irreducible(&f)?;
    Ok(in_fk.then_some(f))
}

/// Per-`k` margins the injectivity and Sidon arguments depend on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KAudit {
    pub k: usize,
    pub degrees: Vec<usize>,
    pub fk_size: usize,
    pub max_degree: Option<usize>,
    /// `deg(g_1 ... g_k) = k^2`.
    pub modulus_degree: usize,
    /// `max deg f < k^2`.
    pub injectivity_margin: bool,
    /// `2 max deg f < k^2`.
    pub product_margin: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreconditionAudit {
    pub c: Density,
    /// `1/3 < c < (3 - √5)/2`.
    pub c_in_range: bool,
    pub per_k: Vec<KAudit>,
}

impl PreconditionAudit {
    pub fn all_margins_hold(&self) -> bool {
        self.c_in_range && self.per_k.iter().all(|k| k.injectivity_margin && k.product_margin)
    }

    pub fn for_k(&self, k: usize) -> Option<&KAudit> {
        self.per_k.iter().find(|a| a.k == k)
    }
}

pub fn audit_preconditions(params: &Params) -> PreconditionAudit {
    let per_k = (params.k_min..=params.k_max)
        .map(|k| {
            let degrees = fk_degrees(params.c, k);
            let fk_size = degrees
                .iter()
                .map(|&d| crate::ffpoly::count_irreducibles_u64(params.q, d).unwrap_or(u64::MAX) as usize)
                .sum();
            let max_degree = degrees.iter().copied().max();
            let modulus_degree = k * k;
            KAudit {
                k,
                injectivity_margin: max_degree.is_none_or(|d| d < modulus_degree),
                product_margin: max_degree.is_none_or(|d| 2 * d < modulus_degree),
                degrees,
                fk_size,
                max_degree,
                modulus_degree,
            }
        })
        .collect();
    PreconditionAudit { c: params.c, c_in_range: params.c.in_admissible_range(), per_k }
}

/// Index from `n` to entry position, for attribution of many witnesses.
pub fn index_by_value(seq: &SidonSequence) -> HashMap<&BigUint, usize> {
    seq.entries.iter().enumerate().map(|(i, e)| (&e.n, i)).collect()
}

/// `b_1 ... b_{2k}` for the sequence's base.
pub fn lower_digit_span(params: &Params, k: usize) -> Result<BigUint> {
    Ok(params.base()?.radix_product(2 * k))
}
