#![allow(dead_code)]

use std::sync::OnceLock;

use sidon3_core::auxset::{search, AuxSet};
use sidon3_core::builder::{build_sequence, Params, SidonSequence};
use sidon3_core::PrimeModulus;

pub fn f(q: u64) -> PrimeModulus {
    PrimeModulus::new(q).unwrap()
}

/// First pair found from seed 0 with 200 attempts per construction.
pub fn aux() -> &'static AuxSet {
    static AUX: OnceLock<AuxSet> = OnceLock::new();
    AUX.get_or_init(|| search(11, 100_000, 0, 200).unwrap().aux)
}

pub fn params34(seed: u64) -> Params {
    Params::new(f(3), aux().clone(), 3, 4, seed)
}

/// `q = 3`, `c = 0.35`, `k = 3..=4`, seed 0.
pub fn build34() -> &'static SidonSequence {
    static SEQ: OnceLock<SidonSequence> = OnceLock::new();
    SEQ.get_or_init(|| build_sequence(&params34(0)).unwrap())
}
