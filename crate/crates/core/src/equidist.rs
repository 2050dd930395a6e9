//! Exact counts of 3-subsets `{f_1, f_2, f_3}` of degree-`d` monic
//! irreducibles by the class of `f_1 f_2 f_3` modulo a squarefree `g`,
//! against the main term `binom(|I_d|, 3) / phi(g)`.
//!
//! Subsets are unordered; the ordered count of distinct triples is six
//! times the subset count.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffpoly::{enumerate_irreducibles, Poly, PrimeModulus};
use crate::unitgroup::{check_squarefree, euler_phi_poly};

/// Largest `|I_d|` accepted by [`triple_histogram`].
pub const IRREDUCIBLE_COUNT_CAP: usize = 1000;

/// Largest `q^{deg g}` accepted (the histogram is dense over residues).
pub const RESIDUE_CAP: u64 = 1 << 22;

/// Dense histogram over all residues mod `g`, indexed by
/// [`Poly::to_index`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleHistogram {
    pub q: PrimeModulus,
    pub d: usize,
    pub g: Poly,
    pub irreducible_count: usize,
    pub counts: Vec<u64>,
}

impl TripleHistogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn count(&self, residue: &Poly) -> u64 {
        residue.to_index().and_then(|i| self.counts.get(i as usize).copied()).unwrap_or(0)
    }

    /// Nonzero classes as `(residue, count)`.
    pub fn nonzero(&self) -> Vec<(Poly, u64)> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (Poly::from_index(self.q, i as u64), c))
            .collect()
    }
}

fn check_modulus(d: usize, g: &Poly) -> Result<usize> {
    check_squarefree(g)?;
    let deg = g.degree().unwrap_or(0);
    if deg < 2 {
        return Err(Error::Precondition(format!("modulus degree must be >= 2, got {deg}")));
    }
    if deg >= 3 * d {
        return Err(Error::Precondition(format!("need deg g < 3d (theta < 1), got deg g = {deg}, d = {d}")));
    }
    Ok(deg)
}

fn binom3(n: u64) -> u64 {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

pub fn triple_histogram(q: PrimeModulus, d: usize, g: &Poly) -> Result<TripleHistogram> {
    triple_histogram_with(q, d, g, None)
}

/// As [`triple_histogram`], with the irreducibles permuted by `order`
/// (used to confirm the counts do not depend on enumeration order).
pub fn triple_histogram_with(q: PrimeModulus, d: usize, g: &Poly, order: Option<&[usize]>) -> Result<TripleHistogram> {
    if g.modulus() != q {
        return Err(Error::ModulusMismatch(q.get(), g.modulus().get()));
    }
    let deg = check_modulus(d, g)?;
    let size = crate::unitgroup::field_unit_order(q, deg)
        .ok()
        .map(|n| n + 1)
        .filter(|&n| n <= RESIDUE_CAP)
        .ok_or_else(|| Error::CapExceeded(format!("q^deg g exceeds {RESIDUE_CAP}")))?;
    let cap = crate::ffpoly::count_irreducibles(q, d);
    if cap > BigUint::from(IRREDUCIBLE_COUNT_CAP) {
        return Err(Error::CapExceeded(format!("|I_{d}| = {cap} exceeds {IRREDUCIBLE_COUNT_CAP}")));
    }
    let mut irr = enumerate_irreducibles(q, d)?;
    if let Some(order) = order {
        irr = order.iter().map(|&i| irr[i].clone()).collect();
    }
    let reduced: Vec<Poly> = irr.iter().map(|f| f.rem(g)).collect::<Result<_>>()?;
    let n = reduced.len();
    let counts = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut local = vec![0u64; size as usize];
            for j in i + 1..n {
                let ij = reduced[i].mul_unchecked(&reduced[j]).rem(g).expect("nonzero modulus");
                for red in &reduced[j + 1..] {
                    let prod = ij.mul_unchecked(red).rem(g).expect("nonzero modulus");
                    local[prod.to_index().unwrap() as usize] += 1;
                }
            }
            local
        })
        .reduce(
            || vec![0u64; size as usize],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(TripleHistogram { q, d, g: g.clone(), irreducible_count: n, counts })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassRow {
    pub a: String,
    pub count: u64,
    pub expected: f64,
    pub deviation: f64,
    pub normalized_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleCountReport {
    pub q: u64,
    pub d: usize,
    pub g: String,
    pub theta: f64,
    pub phi_g: u64,
    pub irreducible_count: usize,
    pub binom: u64,
    pub main_term: f64,
    /// `q^{(3d - deg g)/2}`.
    pub normalizer: f64,
    /// Unit classes only.
    pub rows: Vec<ClassRow>,
    /// Subsets whose product shares a factor with `g`.
    pub non_unit_total: u64,
    pub total: u64,
    pub conservation_holds: bool,
    pub max_deviation: f64,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    /// `sum (count - expected)^2 / expected` over unit classes.
    pub chi_square: f64,
}

pub fn deviation_report(hist: &TripleHistogram) -> Result<TripleCountReport> {
    let g = &hist.g;
    let deg = check_modulus(hist.d, g)?;
    let phi = euler_phi_poly(g)?
        .to_u64()
        .ok_or_else(|| Error::CapExceeded("phi(g) exceeds u64".into()))?;
    let binom = binom3(hist.irreducible_count as u64);
    let main_term = binom as f64 / phi as f64;
    let normalizer = (hist.q.get() as f64).powf((3 * hist.d) as f64 / 2.0 - deg as f64 / 2.0);
    let mut rows = Vec::with_capacity(phi as usize);
    let mut non_unit_total = 0;
    for (idx, &count) in hist.counts.iter().enumerate() {
        let a = Poly::from_index(hist.q, idx as u64);
        if a.is_zero() || !a.gcd(g)?.is_one() {
            non_unit_total += count;
            continue;
        }
        let deviation = (count as f64 - main_term).abs();
        rows.push(ClassRow { a: a.to_string(), count, expected: main_term, deviation, normalized_ratio: deviation / normalizer });
    }
    debug_assert_eq!(rows.len() as u64, phi);
    let total = hist.total();
    let max_deviation = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    let max_ratio = max_deviation / normalizer;
    let mean_ratio = rows.iter().map(|r| r.normalized_ratio).sum::<f64>() / rows.len().max(1) as f64;
    let chi_square = if main_term > 0.0 {
        rows.iter().map(|r| (r.count as f64 - main_term).powi(2) / main_term).sum()
    } else {
        0.0
    };
    Ok(TripleCountReport {
        q: hist.q.get(),
        d: hist.d,
        g: g.to_string(),
        theta: deg as f64 / (3 * hist.d) as f64,
        phi_g: phi,
        irreducible_count: hist.irreducible_count,
        binom,
        main_term,
        normalizer,
        rows,
        non_unit_total,
        total,
        conservation_holds: total == binom,
        max_deviation,
        max_ratio,
        mean_ratio,
        chi_square,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> PrimeModulus {
        PrimeModulus::new(3).unwrap()
    }

    fn p(s: &str) -> Poly {
        Poly::parse(f3(), s).unwrap()
    }

    #[test]
    fn single_subset_for_degree_two() {
        let h = triple_histogram(f3(), 2, &p("1+t^2")).unwrap();
        assert_eq!(h.total(), 1);
        // I_2 contains t^2+1 itself, so its only subset lands on zero.
        assert_eq!(h.count(&Poly::zero(f3())), 1);
    }

    #[test]
    fn cubic_totals() {
        let h = triple_histogram(f3(), 3, &p("1+t^2")).unwrap();
        assert_eq!(h.total(), 56);
        let report = deviation_report(&h).unwrap();
        assert!(report.conservation_holds);
        assert_eq!(report.non_unit_total, 0);
        assert_eq!(report.phi_g, 8);
        assert_eq!(report.rows.len(), 8);
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(matches!(triple_histogram(f3(), 3, &p("t^2")), Err(Error::NotSquarefree(_))));
        assert!(triple_histogram(f3(), 3, &p("1+t")).is_err());
        assert!(triple_histogram(f3(), 1, &p("1+t^2")).is_ok());
        assert!(triple_histogram(f3(), 1, &p("2*t+t^3")).is_err());
    }
}
