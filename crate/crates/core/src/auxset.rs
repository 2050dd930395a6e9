//! Auxiliary pairs `(p, A)` with `A ⊂ {1, ..., ⌊p/2⌋ - 1}`, `A` disjoint
//! from `A+A+{0,1}`, and `A+A+A` containing `p+2` consecutive integers.
//!
//! Two constructions are tried for each prime, in order:
//!
//! * random alteration: keep each element of the interval independently
//!   with probability `min(1, K p^{-2/3})`, `K = ⌈ln p⌉`, then delete
//!   `X = R ∩ (R+R+{0,1})`;
//! * greedy: walk the interval in a seeded random order and keep every
//!   element that does not break disjointness.
//!
//! Whichever construction produced the set, it is accepted only after
//! both deterministic verifiers pass.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffpoly::is_prime_u64;
use crate::rng::keyed_rng;

pub const LOG_CONVENTION: &str = "natural";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    RandomAlteration,
    Greedy,
    /// Supplied from outside the search (tests, hand-built sets).
    External,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Construction::RandomAlteration => "random-alteration",
            Construction::Greedy => "greedy",
            Construction::External => "external",
        })
    }
}

/// A verified auxiliary pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AuxSetFile", into = "AuxSetFile")]
pub struct AuxSet {
    p: u64,
    elements: Vec<u64>,
    window_start: u64,
    seed: u64,
    attempt: u64,
    method: Construction,
}

/// On-disk form of an [`AuxSet`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuxSetFile {
    pub p: u64,
    #[serde(rename = "A")]
    pub a: Vec<u64>,
    pub seed: u64,
    pub attempt: u64,
    pub window_start: u64,
    pub log_convention: String,
    #[serde(default = "default_method")]
    pub method: Construction,
}

fn default_method() -> Construction {
    Construction::External
}

impl TryFrom<AuxSetFile> for AuxSet {
    type Error = Error;
    fn try_from(file: AuxSetFile) -> Result<Self> {
        if file.log_convention != LOG_CONVENTION {
            return Err(Error::InvalidAuxSet(format!("unsupported log convention {:?}", file.log_convention)));
        }
        let mut aux = AuxSet::verified(file.p, file.a)?;
        if aux.window_start != file.window_start {
            return Err(Error::InvalidAuxSet(format!(
                "recorded window start {} but the first window starts at {}",
                file.window_start, aux.window_start
            )));
        }
        aux.seed = file.seed;
        aux.attempt = file.attempt;
        aux.method = file.method;
        Ok(aux)
    }
}

impl From<AuxSet> for AuxSetFile {
    fn from(aux: AuxSet) -> Self {
        AuxSetFile {
            p: aux.p,
            a: aux.elements,
            seed: aux.seed,
            attempt: aux.attempt,
            window_start: aux.window_start,
            log_convention: LOG_CONVENTION.to_string(),
            method: aux.method,
        }
    }
}

impl AuxSet {
    /// Checks both properties and wraps the pair.
    pub fn verified(p: u64, mut elements: Vec<u64>) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::InvalidAuxSet(format!("{p} is not prime")));
        }
        elements.sort_unstable();
        elements.dedup();
        let upper = interval_end(p);
        if let Some(&bad) = elements.iter().find(|&&a| a == 0 || a > upper) {
            return Err(Error::InvalidAuxSet(format!("{bad} lies outside [1, {upper}]")));
        }
        if let Err(w) = verify_disjoint(&elements) {
            return Err(Error::InvalidAuxSet(format!("disjointness fails: {w}")));
        }
        let window_start = verify_coverage(&elements, p)
            .ok_or_else(|| Error::InvalidAuxSet(format!("A+A+A has no run of {} consecutive integers", p + 2)))?;
        Ok(AuxSet { p, elements, window_start, seed: 0, attempt: 0, method: Construction::External })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn window_start(&self) -> u64 {
        self.window_start
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn attempt(&self) -> u64 {
        self.attempt
    }

    pub fn method(&self) -> Construction {
        self.method
    }

    pub fn contains(&self, a: u64) -> bool {
        self.elements.binary_search(&a).is_ok()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// `⌊p/2⌋ - 1`.
pub fn interval_end(p: u64) -> u64 {
    (p / 2).saturating_sub(1)
}

/// `min(1, ⌈ln p⌉ p^{-2/3})`.
pub fn inclusion_probability(p: u64) -> f64 {
    let pf = p as f64;
    let k = pf.ln().ceil();
    (k * pf.powf(-2.0 / 3.0)).min(1.0)
}

/// Each element of `{1, ..., ⌊p/2⌋ - 1}` kept independently with
/// [`inclusion_probability`].
pub fn sample_candidate(p: u64, seed: u64) -> Result<Vec<u64>> {
    if p < 11 {
        return Err(Error::Precondition(format!("sampling needs p >= 11, got {p}")));
    }
    let prob = inclusion_probability(p);
    let mut rng = keyed_rng("auxset/sample", &[p, seed], &[]);
    Ok((1..=interval_end(p)).filter(|_| prob >= 1.0 || rng.gen_bool(prob)).collect())
}

fn indicator(set: &[u64]) -> Vec<bool> {
    let top = set.iter().copied().max().unwrap_or(0) as usize;
    let mut ind = vec![false; top + 1];
    for &a in set {
        ind[a as usize] = true;
    }
    ind
}

/// `X = R ∩ (R+R+{0,1})` and `A = R \ X`, both sorted.
pub fn alteration(r: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let mut r = r.to_vec();
    r.sort_unstable();
    r.dedup();
    let in_r = indicator(&r);
    let top = in_r.len();
    let mut bad = vec![false; top];
    for (i, &a) in r.iter().enumerate() {
        for &b in &r[i..] {
            for s in [a + b, a + b + 1] {
                if (s as usize) < top && in_r[s as usize] {
                    bad[s as usize] = true;
                }
            }
        }
    }
    r.into_iter().partition(|&a| bad[a as usize])
}

/// `a = a1 + a2 + delta` with all of `a, a1, a2` in `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumWitness {
    pub a: u64,
    pub a1: u64,
    pub a2: u64,
    pub delta: u64,
}

impl fmt::Display for SumWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {} + {} + {}", self.a, self.a1, self.a2, self.delta)
    }
}

/// `Ok` iff `A ∩ (A+A+{0,1}) = ∅`; otherwise the smallest violating sum.
pub fn verify_disjoint(a: &[u64]) -> std::result::Result<(), SumWitness> {
    let mut a = a.to_vec();
    a.sort_unstable();
    a.dedup();
    let in_a = indicator(&a);
    let mut best: Option<SumWitness> = None;
    for (i, &a1) in a.iter().enumerate() {
        for &a2 in &a[i..] {
            for delta in [0, 1] {
                let s = a1 + a2 + delta;
                if (s as usize) < in_a.len() && in_a[s as usize] {
                    let w = SumWitness { a: s, a1, a2, delta };
                    if best.is_none_or(|b| (w.a, w.a1, w.delta) < (b.a, b.a1, b.delta)) {
                        best = Some(w);
                    }
                }
            }
        }
    }
    best.map_or(Ok(()), Err)
}

/// Indicator of `A+A+A` over `[0, 3 max A]`, by repeated direct
/// convolution.
pub fn triple_sumset(a: &[u64]) -> Vec<bool> {
    let top = a.iter().copied().max().unwrap_or(0) as usize;
    let mut two = vec![false; 2 * top + 1];
    for &x in a {
        for &y in a {
            two[(x + y) as usize] = true;
        }
    }
    let mut three = vec![false; 3 * top + 1];
    for (s, &hit) in two.iter().enumerate() {
        if hit {
            for &z in a {
                three[s + z as usize] = true;
            }
        }
    }
    three
}

/// Start of the first run of at least `p + 2` consecutive members of
/// `A+A+A`, if any.
pub fn verify_coverage(a: &[u64], p: u64) -> Option<u64> {
    if a.is_empty() {
        return None;
    }
    let three = triple_sumset(a);
    let need = p as usize + 2;
    let mut run = 0usize;
    for (n, &hit) in three.iter().enumerate() {
        run = if hit { run + 1 } else { 0 };
        if run >= need {
            return Some((n + 1 - need) as u64);
        }
    }
    None
}

/// `max_n 1_R * 1_R (n)`, counting ordered pairs.
pub fn convolution_sup_norm(r: &[u64]) -> u64 {
    let top = r.iter().copied().max().unwrap_or(0) as usize;
    let mut conv = vec![0u64; 2 * top + 1];
    for &x in r {
        for &y in r {
            conv[(x + y) as usize] += 1;
        }
    }
    conv.into_iter().max().unwrap_or(0)
}

/// Greedy maximal set: scan the interval in seeded random order, keep an
/// element when it neither lies in `A+A+{0,1}` nor creates a sum that
/// lands in `A`.
pub fn greedy_candidate(p: u64, seed: u64) -> Vec<u64> {
    let upper = interval_end(p) as usize;
    let mut order: Vec<u64> = (1..=upper as u64).collect();
    let mut rng = keyed_rng("auxset/greedy", &[p, seed], &[]);
    order.shuffle(&mut rng);
    let mut in_a = vec![false; upper + 1];
    // sums[s]: s ∈ A+A+{0,1}, clipped to the interval
    let mut sums = vec![false; upper + 1];
    let mut chosen: Vec<u64> = Vec::new();
    for x in order {
        let xu = x as usize;
        if sums[xu] {
            continue;
        }
        let clash = chosen
            .iter()
            .chain(std::iter::once(&x))
            .any(|&b| [x + b, x + b + 1].iter().any(|&s| (s as usize) <= upper && in_a[s as usize]));
        if clash {
            continue;
        }
        in_a[xu] = true;
        chosen.push(x);
        for &b in &chosen {
            for s in [x + b, x + b + 1] {
                if (s as usize) <= upper {
                    sums[s as usize] = true;
                }
            }
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Diagnostics recorded alongside a successful search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchReport {
    pub aux: AuxSet,
    pub primes_scanned: u64,
    pub attempts_total: u64,
    pub random_attempts: u64,
    pub greedy_attempts: u64,
    /// Longest run found by the randomized construction at the accepted p.
    pub best_random_run: u64,
    /// `||1_R * 1_R||_∞` for the candidate the accepted set came from.
    pub sup_norm: u64,
    pub inclusion_probability: f64,
}

fn longest_run(a: &[u64]) -> u64 {
    let three = triple_sumset(a);
    let (mut run, mut best) = (0u64, 0u64);
    for hit in three {
        run = if hit { run + 1 } else { 0 };
        best = best.max(run);
    }
    best
}

/// Scans primes in `[p_min, p_max]` upward and returns the first
/// verified pair. Per prime: `max_attempts` randomized tries, then
/// `max_attempts` greedy tries (attempt numbers continue across both).
pub fn search(p_min: u64, p_max: u64, seed: u64, max_attempts: u64) -> Result<SearchReport> {
    let mut attempts_total = 0u64;
    let mut primes_scanned = 0u64;
    let lo = p_min.max(11);
    for p in lo..=p_max {
        if !is_prime_u64(p) {
            continue;
        }
        primes_scanned += 1;
        let mut best_random_run = 0;
        for attempt in 0..2 * max_attempts {
            attempts_total += 1;
            let (method, candidate, sup_norm) = if attempt < max_attempts {
                let r = sample_candidate(p, seed.wrapping_add(attempt))?;
                let norm = convolution_sup_norm(&r);
                let (_, a) = alteration(&r);
                (Construction::RandomAlteration, a, norm)
            } else {
                let a = greedy_candidate(p, seed.wrapping_add(attempt));
                let norm = convolution_sup_norm(&a);
                (Construction::Greedy, a, norm)
            };
            if method == Construction::RandomAlteration {
                best_random_run = best_random_run.max(longest_run(&candidate));
            }
            debug_assert!(verify_disjoint(&candidate).is_ok());
            if verify_coverage(&candidate, p).is_some() {
                let mut aux = AuxSet::verified(p, candidate)?;
                aux.seed = seed;
                aux.attempt = attempt;
                aux.method = method;
                return Ok(SearchReport {
                    aux,
                    primes_scanned,
                    attempts_total,
                    random_attempts: max_attempts.min(attempt + 1),
                    greedy_attempts: (attempt + 1).saturating_sub(max_attempts),
                    best_random_run,
                    sup_norm,
                    inclusion_probability: inclusion_probability(p),
                });
            }
        }
    }
    Err(Error::SearchExhausted { p_min, p_max, attempts: attempts_total })
}

/// For each residue `ρ mod p`, the smallest `y ∈ [0, 2p)` with `y ≡ ρ` and
/// `{y-2, y-1, y} ⊂ A+A+A`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct YTable {
    p: u64,
    entries: Vec<u64>,
}

impl YTable {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn get(&self, residue: u64) -> u64 {
        self.entries[residue as usize]
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }
}

pub fn build_y_table(aux: &AuxSet) -> Result<YTable> {
    y_table_for(aux.p, &aux.elements)
}

/// [`build_y_table`] for an arbitrary (possibly invalid) set.
pub fn y_table_for(p: u64, a: &[u64]) -> Result<YTable> {
    let three = triple_sumset(a);
    let member = |y: u64| (y as usize) < three.len() && three[y as usize];
    let mut entries: Vec<Option<u64>> = vec![None; p as usize];
    for y in 2..2 * p {
        let slot = &mut entries[(y % p) as usize];
        if slot.is_none() && member(y - 2) && member(y - 1) && member(y) {
            *slot = Some(y);
        }
    }
    let missing = entries.iter().filter(|e| e.is_none()).count();
    if missing > 0 {
        return Err(Error::InvalidAuxSet(format!("{missing} residue classes mod {p} have no admissible y")));
    }
    Ok(YTable { p, entries: entries.into_iter().map(Option::unwrap).collect() })
}
