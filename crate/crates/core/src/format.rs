//! JSON sequence files. Polynomials use the `c0+c1*t+...` text form and
//! every big integer is a decimal string.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::builder::{audit_preconditions, ModuliTable, Params, PreconditionAudit, SequenceEntry, SidonSequence};
use crate::error::{Error, Result};
use crate::ffpoly::Poly;
use crate::gbase::encode;
use crate::unitgroup::Generator;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModulusRecord {
    pub g: String,
    pub omega: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryRecord {
    pub f: String,
    pub k: usize,
    pub e: Vec<u64>,
    pub r: Vec<u64>,
    #[serde(with = "crate::serde_big")]
    pub s: BigUint,
    #[serde(with = "crate::serde_big")]
    pub n: BigUint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceFile {
    pub params: Params,
    pub moduli: Vec<ModulusRecord>,
    pub entries: Vec<EntryRecord>,
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit: Option<PreconditionAudit>,
    /// Free-form run metadata attached by the caller.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<serde_json::Value>,
}

impl SequenceFile {
    pub fn from_sequence(seq: &SidonSequence) -> Self {
        SequenceFile {
            params: seq.params.clone(),
            moduli: seq
                .moduli
                .generators()
                .iter()
                .map(|g| ModulusRecord { g: g.modulus().to_string(), omega: g.omega().to_string() })
                .collect(),
            entries: seq
                .entries
                .iter()
                .map(|e| EntryRecord {
                    f: e.f.to_string(),
                    k: e.k,
                    e: e.e.clone(),
                    r: e.r.clone(),
                    s: e.s.clone(),
                    n: e.n.clone(),
                })
                .collect(),
            warnings: seq.warnings.clone(),
            audit: Some(audit_preconditions(&seq.params)),
            manifest: None,
        }
    }

    /// Parses and re-checks: generators pass the order test, every `n`
    /// re-encodes from its digits, `r` digits lie in `A`, and the entries
    /// are strictly increasing.
    pub fn into_sequence(self) -> Result<SidonSequence> {
        let q = self.params.q;
        let base = self.params.base()?;
        let generators = self
            .moduli
            .iter()
            .map(|m| Generator::from_parts(Poly::parse(q, &m.g)?, Poly::parse(q, &m.omega)?))
            .collect::<Result<Vec<_>>>()?;
        let moduli = ModuliTable::from_generators(generators)?;
        let mut entries = Vec::with_capacity(self.entries.len());
        for rec in self.entries {
            if rec.e.len() != rec.k || rec.r.len() != rec.k {
                return Err(Error::Malformed(format!("entry {} has digit lists of the wrong length", rec.f)));
            }
            if rec.k > moduli.len() {
                return Err(Error::Malformed(format!("entry {} needs more moduli than the file lists", rec.f)));
            }
            if let Some(r) = rec.r.iter().find(|r| !self.params.aux.contains(**r)) {
                return Err(Error::Malformed(format!("entry {} has r digit {r} outside A", rec.f)));
            }
            let entry = SequenceEntry { f: Poly::parse(q, &rec.f)?, k: rec.k, e: rec.e, r: rec.r, s: rec.s, n: rec.n };
            if encode(&base, &entry.digit_vector()) != entry.n {
                return Err(Error::Malformed(format!("entry {} does not re-encode to its n", entry.f)));
            }
            entries.push(entry);
        }
        if entries.windows(2).any(|w| w[0].n >= w[1].n) {
            return Err(Error::Malformed("entries are not strictly increasing in n".into()));
        }
        Ok(SidonSequence { params: self.params, moduli, entries, warnings: self.warnings })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
