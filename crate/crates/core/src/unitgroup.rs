//! Unit groups `(F_q[t]/(g))^x` for irreducible and squarefree `g`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::ffpoly::{enumerate_irreducibles, is_irreducible, Poly, PrimeModulus};

/// Integers above this are refused by [`factor_integer`].
pub const FACTORING_CAP: u64 = u64::MAX;

/// Group orders at or below this get a full logarithm table, built once
/// with the generator; [`dlog`] is then a lookup.
pub const EXHAUSTIVE_DLOG_LIMIT: u64 = 1 << 16;

const TRIAL_DIVISION_BOUND: u64 = 10_000;

/// Prime factors of `n` with multiplicity, ascending. Trial division
/// followed by Pollard's rho.
pub fn factor_integer(n: &BigUint) -> Result<Vec<u64>> {
    let n = n
        .to_u64()
        .ok_or_else(|| Error::CapExceeded(format!("{n} exceeds the factoring cap")))?;
    if n == 0 {
        return Err(Error::Precondition("cannot factor 0".into()));
    }
    Ok(factor_u64(n))
}

pub(crate) fn factor_u64(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d <= TRIAL_DIVISION_BOUND && d * d <= n {
        while n.is_multiple_of(d) {
            out.push(d);
            n /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_probable_prime(m) {
            out.push(m);
            continue;
        }
        let f = pollard_rho(m);
        stack.push(f);
        stack.push(m / f);
    }
    out.sort_unstable();
    out
}

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Miller-Rabin with the bases that are deterministic below 2^64.
fn is_probable_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A nontrivial factor of composite odd `n` (Brent's variant).
fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    for c in 1u64.. {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!()
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `q^d - 1` as `u64`, refusing anything beyond the factoring cap.
pub(crate) fn field_unit_order(q: PrimeModulus, d: usize) -> Result<u64> {
    let mut acc: u64 = 1;
    for _ in 0..d {
        acc = acc
            .checked_mul(q.get())
            .ok_or_else(|| Error::CapExceeded(format!("{q}^{d} - 1 exceeds the factoring cap")))?;
    }
    Ok(acc - 1)
}

/// A generator of `(F_q[t]/(g))^x` for irreducible `g`.
#[derive(Clone)]
pub struct Generator {
    g: Poly,
    omega: Poly,
    order: u64,
    order_factors: Vec<(u64, u32)>,
    /// `log[index(omega^e)] = e`, for small groups.
    log_table: Option<Arc<[u32]>>,
}

impl PartialEq for Generator {
    fn eq(&self, other: &Self) -> bool {
        self.g == other.g && self.omega == other.omega
    }
}

impl Eq for Generator {}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Generator")
            .field("g", &self.g.to_string())
            .field("omega", &self.omega.to_string())
            .field("order", &self.order)
            .finish()
    }
}

impl Generator {
    pub fn modulus(&self) -> &Poly {
        &self.g
    }

    pub fn omega(&self) -> &Poly {
        &self.omega
    }

    /// `q^{deg g} - 1`.
    pub fn group_order(&self) -> u64 {
        self.order
    }

    /// `omega^e mod g`.
    pub fn pow(&self, e: u64) -> Poly {
        self.omega.powmod_u64(e, &self.g).expect("modulus has positive degree")
    }

    /// Rebuilds a generator from stored data, re-running the order test.
    pub fn from_parts(g: Poly, omega: Poly) -> Result<Generator> {
        let order = group_order_for(&g)?;
        let order_factors = prime_power_factors(order);
        let omega = omega.rem(&g)?;
        if !has_full_order(&omega, &g, order, &order_factors)? {
            return Err(Error::Precondition(format!("{omega} does not generate the units modulo {g}")));
        }
        Ok(Generator::assemble(g, omega, order, order_factors))
    }

    fn assemble(g: Poly, omega: Poly, order: u64, order_factors: Vec<(u64, u32)>) -> Generator {
        let log_table = (order <= EXHAUSTIVE_DLOG_LIMIT).then(|| {
            let mut table = vec![u32::MAX; order as usize + 1];
            let mut acc = Poly::one(g.modulus());
            for e in 0..order {
                table[acc.to_index().expect("residue index fits") as usize] = e as u32;
                acc = acc.mul_unchecked(&omega).rem(&g).expect("nonzero modulus");
            }
            Arc::from(table)
        });
        Generator { g, omega, order, order_factors, log_table }
    }
}

fn group_order_for(g: &Poly) -> Result<u64> {
    if !g.is_monic() {
        return Err(Error::NotMonic(g.to_string()));
    }
    let d = g.degree().filter(|&d| d >= 1).ok_or_else(|| Error::Precondition("modulus needs degree >= 1".into()))?;
    if !is_irreducible(g)? {
        return Err(Error::Reducible(g.to_string()));
    }
    field_unit_order(g.modulus(), d)
}

fn prime_power_factors(n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in factor_u64(n) {
        match out.last_mut() {
            Some((last, e)) if *last == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

fn has_full_order(omega: &Poly, g: &Poly, order: u64, factors: &[(u64, u32)]) -> Result<bool> {
    if omega.is_zero() || !omega.powmod_u64(order, g)?.is_one() {
        return Ok(false);
    }
    for &(l, _) in factors {
        if omega.powmod_u64(order / l, g)?.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The first constant or monic residue (in enumeration order) whose
/// multiplicative order is `q^{deg g} - 1`.
pub fn find_generator(g: &Poly) -> Result<Generator> {
    let order = group_order_for(g)?;
    let factors = prime_power_factors(order);
    let q = g.modulus();
    let d = g.degree().expect("checked");
    let total = order + 1;
    for idx in 1..total {
        let cand = Poly::from_index(q, idx);
        let monic_or_constant = cand.degree() == Some(0) || cand.is_monic();
        if monic_or_constant && has_full_order(&cand, g, order, &factors)? {
            debug_assert!(cand.degree().unwrap() < d);
            return Ok(Generator::assemble(g.clone(), cand, order, factors));
        }
    }
    unreachable!("the unit group of a finite field is cyclic")
}

/// The unique `e` in `[0, q^{deg g} - 1)` with `omega^e = f (mod g)`.
pub fn dlog(gen: &Generator, f: &Poly) -> Result<u64> {
    let target = f.rem(&gen.g)?;
    if target.is_zero() {
        return Err(Error::NotAUnit(f.to_string()));
    }
    if let Some(table) = &gen.log_table {
        return Ok(table[target.to_index().expect("residue index fits") as usize] as u64);
    }
    dlog_pohlig_hellman_reduced(gen, &target)
}

/// [`dlog`] through Pohlig-Hellman regardless of group size.
pub fn dlog_pohlig_hellman(gen: &Generator, f: &Poly) -> Result<u64> {
    let target = f.rem(&gen.g)?;
    if target.is_zero() {
        return Err(Error::NotAUnit(f.to_string()));
    }
    dlog_pohlig_hellman_reduced(gen, &target)
}

fn dlog_pohlig_hellman_reduced(gen: &Generator, target: &Poly) -> Result<u64> {
    let mut residues = Vec::with_capacity(gen.order_factors.len());
    for &(l, a) in &gen.order_factors {
        let la = l.pow(a);
        residues.push((dlog_prime_power(gen, target, l, a)?, la));
    }
    Ok(crt_u64(&residues))
}

/// Discrete log of `target` restricted to the subgroup of order `l^a`.
fn dlog_prime_power(gen: &Generator, target: &Poly, l: u64, a: u32) -> Result<u64> {
    let n = gen.order;
    let g = &gen.g;
    // gamma has order l.
    let gamma = gen.omega.powmod_u64(n / l, g)?;
    let mut x: u64 = 0;
    let mut l_pow: u64 = 1;
    let omega_inv = gen.omega.powmod_u64(n - 1, g)?;
    for _ in 0..a {
        // (omega^{-x} * target)^{n / l^{j+1}}
        let shifted = omega_inv.powmod_u64(x, g)?.mul_unchecked(target).rem(g)?;
        let h = shifted.powmod_u64(n / (l_pow * l), g)?;
        let digit = bsgs(&gamma, &h, g, l)?;
        x += digit * l_pow;
        l_pow *= l;
    }
    Ok(x)
}

/// Baby-step giant-step in a cyclic group of order `l` generated by `base`.
fn bsgs(base: &Poly, target: &Poly, g: &Poly, l: u64) -> Result<u64> {
    let m = (l as f64).sqrt().ceil() as u64;
    let m = m.max(1);
    let mut table: HashMap<Poly, u64> = HashMap::with_capacity(m as usize);
    let mut acc = Poly::one(g.modulus());
    for j in 0..m {
        table.entry(acc.clone()).or_insert(j);
        acc = acc.mul_unchecked(base).rem(g)?;
    }
    // factor = base^{-m}
    let factor = base.powmod_u64((l - m % l) % l, g)?;
    let mut gamma = target.clone();
    for i in 0..=m {
        if let Some(&j) = table.get(&gamma) {
            return Ok((i * m + j) % l);
        }
        gamma = gamma.mul_unchecked(&factor).rem(g)?;
    }
    Err(Error::Precondition(format!("{target} is not in the subgroup generated by {base}")))
}

fn crt_u64(residues: &[(u64, u64)]) -> u64 {
    let mut x: u128 = 0;
    let mut m: u128 = 1;
    for &(r, mi) in residues {
        let mi128 = mi as u128;
        // find t with x + m t = r (mod mi)
        let diff = ((r as u128 + mi128) - x % mi128) % mi128;
        let inv = modinv((m % mi128) as u64, mi) as u128;
        let t = diff * inv % mi128;
        x += m * t;
        m *= mi128;
    }
    (x % m) as u64
}

fn modinv(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(m as i128) as u64
}

/// `(F_q[t]/(g))^x` for monic squarefree `g`.
#[derive(Debug, Clone)]
pub struct ResidueSystem {
    g: Poly,
    factors: Vec<Poly>,
    order: BigUint,
}

impl ResidueSystem {
    /// Factors `g` into distinct irreducibles: distinct-degree split, then
    /// trial division by the enumerated irreducibles of each degree.
    pub fn new(g: &Poly) -> Result<Self> {
        check_squarefree(g)?;
        let q = g.modulus();
        let mut factors = Vec::new();
        for (d, part) in distinct_degree_factorization(g)? {
            if part.degree() == Some(d) {
                factors.push(part);
                continue;
            }
            let mut rest = part;
            for cand in enumerate_irreducibles(q, d)? {
                let (quo, rem) = rest.divmod(&cand)?;
                if rem.is_zero() {
                    factors.push(cand);
                    rest = quo;
                    if rest.is_one() {
                        break;
                    }
                }
            }
        }
        factors.sort();
        let order = factors
            .iter()
            .map(|f| crate::ffpoly::unit_count_field(q, f.degree().unwrap()))
            .product();
        Ok(ResidueSystem { g: g.clone(), factors, order })
    }

    pub fn modulus(&self) -> &Poly {
        &self.g
    }

    pub fn factors(&self) -> &[Poly] {
        &self.factors
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn is_unit(&self, a: &Poly) -> Result<bool> {
        Ok(a.rem(&self.g)?.gcd(&self.g)?.is_one())
    }
}

/// Errors unless `g` is monic, of positive degree and squarefree.
pub fn check_squarefree(g: &Poly) -> Result<()> {
    if !g.is_monic() {
        return Err(Error::NotMonic(g.to_string()));
    }
    if g.degree() == Some(0) {
        return Ok(());
    }
    let dg = g.derivative();
    if dg.is_zero() || !g.gcd(&dg)?.is_one() {
        return Err(Error::NotSquarefree(g.to_string()));
    }
    Ok(())
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// pairs `(d, product of all degree-d irreducible factors)`.
pub fn distinct_degree_factorization(g: &Poly) -> Result<Vec<(usize, Poly)>> {
    let q = g.modulus();
    let qb = BigUint::from(q.get());
    let mut out = Vec::new();
    let mut rest = g.clone();
    let t = Poly::t(q);
    let mut h = t.clone();
    let mut d = 0usize;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = h.powmod(&qb, &rest)?;
        let part = h.sub_unchecked(&t).gcd(&rest)?;
        if !part.is_one() {
            rest = rest.divmod(&part)?.0;
            h = h.rem(&rest)?;
            out.push((d, part));
        }
    }
    if let Some(deg) = rest.degree().filter(|&deg| deg >= 1) {
        out.push((deg, rest));
    }
    Ok(out)
}

/// `|(F_q[t]/(g))^x|` for monic squarefree `g`: the product of
/// `q^{deg h} - 1` over the irreducible factors `h`.
pub fn euler_phi_poly(g: &Poly) -> Result<BigUint> {
    check_squarefree(g)?;
    let q = g.modulus();
    let mut acc = BigUint::one();
    for (d, part) in distinct_degree_factorization(g)? {
        let count = part.degree().unwrap() / d;
        let units = crate::ffpoly::unit_count_field(q, d);
        for _ in 0..count {
            acc *= &units;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fq(q: u64) -> PrimeModulus {
        PrimeModulus::new(q).unwrap()
    }

    fn p(q: u64, s: &str) -> Poly {
        Poly::parse(fq(q), s).unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn factoring_examples() {
        assert_eq!(factor_integer(&big(8)).unwrap(), vec![2, 2, 2]);
        assert_eq!(factor_integer(&big(242)).unwrap(), vec![2, 11, 11]);
        assert!(factor_integer(&big(1)).unwrap().is_empty());
        // 2^64 - 1 is refused; a big semiprime goes through rho.
        assert!(factor_integer(&(BigUint::from(u64::MAX) + 1u32)).is_err());
        assert_eq!(factor_u64(1_000_003 * 998_244_353), vec![1_000_003, 998_244_353]);
        assert_eq!(factor_u64(3u64.pow(40) - 1).iter().product::<u64>(), 3u64.pow(40) - 1);
    }

    #[test]
    fn generator_examples() {
        assert_eq!(find_generator(&p(3, "t")).unwrap().omega(), &p(3, "2"));
        let gen = find_generator(&p(3, "1+t^2")).unwrap();
        assert_eq!(gen.omega(), &p(3, "1+t"));
        assert_eq!(p(3, "t").powmod_u64(4, &p(3, "1+t^2")).unwrap(), Poly::one(fq(3)));
        assert_eq!(find_generator(&p(2, "1+t")).unwrap().omega(), &p(2, "1"));
        assert!(matches!(find_generator(&p(3, "2+t^2")), Err(Error::Reducible(_))));
    }

    #[test]
    fn dlog_examples() {
        let gen = find_generator(&p(3, "1+t^2")).unwrap();
        assert_eq!(dlog(&gen, &Poly::one(fq(3))).unwrap(), 0);
        assert_eq!(dlog(&gen, &p(3, "2")).unwrap(), 4);
        assert_eq!(dlog(&gen, gen.omega()).unwrap(), 1);
        assert!(matches!(dlog(&gen, &p(3, "1+t^2")), Err(Error::NotAUnit(_))));
        let trivial = find_generator(&p(2, "1+t")).unwrap();
        assert_eq!(dlog(&trivial, &p(2, "1")).unwrap(), 0);
    }

    #[test]
    fn pohlig_hellman_matches_scan() {
        // Group order 5^7 - 1 = 78124 = 2^2 * 19531 exceeds the scan limit.
        let q = fq(5);
        let g = crate::ffpoly::first_irreducible(q, 7).unwrap();
        let gen = find_generator(&g).unwrap();
        assert!(gen.group_order() > EXHAUSTIVE_DLOG_LIMIT);
        for e in [0u64, 1, 2, 17, 4096, 78_123, 55_555] {
            let f = gen.pow(e);
            assert_eq!(dlog(&gen, &f).unwrap(), e);
        }
    }

    #[test]
    fn pohlig_hellman_matches_table() {
        let q = fq(3);
        let g = crate::ffpoly::first_irreducible(q, 6).unwrap();
        let gen = find_generator(&g).unwrap();
        for idx in 1..729 {
            let f = Poly::from_index(q, idx);
            assert_eq!(dlog_pohlig_hellman(&gen, &f).unwrap(), dlog(&gen, &f).unwrap());
        }
    }

    #[test]
    fn phi_examples() {
        assert_eq!(euler_phi_poly(&p(3, "t+t^2")).unwrap(), big(4));
        assert_eq!(euler_phi_poly(&p(3, "1+t^2")).unwrap(), big(8));
        assert_eq!(euler_phi_poly(&p(2, "t")).unwrap(), big(1));
        assert!(matches!(euler_phi_poly(&p(3, "t^2")), Err(Error::NotSquarefree(_))));
        // t^3 - t over F_3 splits into three linear factors
        assert_eq!(euler_phi_poly(&p(3, "2*t+t^3")).unwrap(), big(8));
    }

    #[test]
    fn residue_system_factorization() {
        let g = p(3, "2*t+t^3");
        let rs = ResidueSystem::new(&g).unwrap();
        assert_eq!(rs.factors(), &[p(3, "t"), p(3, "1+t"), p(3, "2+t")]);
        assert_eq!(rs.order(), &big(8));
        // (1+t^2)(t)(1+t+2t^3...) style mixed-degree product
        let h = p(3, "1+t^2").mul(&p(3, "t")).unwrap().mul(&p(3, "1+2*t+t^3")).unwrap();
        let rs = ResidueSystem::new(&h).unwrap();
        assert_eq!(crate::ffpoly::product(rs.factors()).unwrap(), h);
        assert_eq!(rs.order(), &euler_phi_poly(&h).unwrap());
    }
}
