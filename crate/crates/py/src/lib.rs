//! Python bindings: polynomials, the auxiliary set search, the mixed-radix
//! base, sequence builds and the verifiers. Big integers cross as Python
//! `int`; structured reports cross as JSON strings.

use num_bigint::BigUint;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use sidon3_core::analyzer::{self, monte_carlo_coverage};
use sidon3_core::auxset::{self, build_y_table};
use sidon3_core::builder::{self, Density};
use sidon3_core::equidist::{deviation_report, triple_histogram};
use sidon3_core::ffpoly;
use sidon3_core::format::SequenceFile;
use sidon3_core::gbase::{self, DigitVector, MixedRadix};
use sidon3_core::unitgroup;
use sidon3_core::PrimeModulus;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn field(q: u64) -> PyResult<PrimeModulus> {
    PrimeModulus::new(q).map_err(err)
}

/// A polynomial over `F_q`, coefficients listed constant term first.
#[pyclass(name = "Poly", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyPoly(ffpoly::Poly);

#[pymethods]
impl PyPoly {
    #[new]
    fn new(q: u64, coeffs: Vec<u64>) -> PyResult<Self> {
        Ok(PyPoly(ffpoly::Poly::new(field(q)?, coeffs)))
    }

    /// Parses `"c0+c1*t+c2*t^2"`.
    #[staticmethod]
    fn parse(q: u64, text: &str) -> PyResult<Self> {
        ffpoly::Poly::parse(field(q)?, text).map(PyPoly).map_err(err)
    }

    #[getter]
    fn q(&self) -> u64 {
        self.0.modulus().get()
    }

    #[getter]
    fn coeffs(&self) -> Vec<u64> {
        self.0.coeffs().to_vec()
    }

    /// `None` for the zero polynomial.
    fn degree(&self) -> Option<usize> {
        self.0.degree()
    }

    fn __add__(&self, other: &PyPoly) -> PyResult<Self> {
        self.0.add(&other.0).map(PyPoly).map_err(err)
    }

    fn __sub__(&self, other: &PyPoly) -> PyResult<Self> {
        self.0.sub(&other.0).map(PyPoly).map_err(err)
    }

    fn __mul__(&self, other: &PyPoly) -> PyResult<Self> {
        self.0.mul(&other.0).map(PyPoly).map_err(err)
    }

    fn divmod(&self, divisor: &PyPoly) -> PyResult<(Self, Self)> {
        let (q, r) = self.0.divmod(&divisor.0).map_err(err)?;
        Ok((PyPoly(q), PyPoly(r)))
    }

    fn __mod__(&self, divisor: &PyPoly) -> PyResult<Self> {
        self.0.rem(&divisor.0).map(PyPoly).map_err(err)
    }

    fn powmod(&self, exp: BigUint, modulus: &PyPoly) -> PyResult<Self> {
        self.0.powmod(&exp, &modulus.0).map(PyPoly).map_err(err)
    }

    fn gcd(&self, other: &PyPoly) -> PyResult<Self> {
        self.0.gcd(&other.0).map(PyPoly).map_err(err)
    }

    fn is_irreducible(&self) -> PyResult<bool> {
        ffpoly::is_irreducible(&self.0).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly({}, \"{}\")", self.q(), self.0)
    }
}

#[pyfunction]
fn count_irreducibles(q: u64, d: usize) -> PyResult<BigUint> {
    Ok(ffpoly::count_irreducibles(field(q)?, d))
}

#[pyfunction]
fn enumerate_irreducibles(q: u64, d: usize) -> PyResult<Vec<PyPoly>> {
    Ok(ffpoly::enumerate_irreducibles(field(q)?, d).map_err(err)?.into_iter().map(PyPoly).collect())
}

#[pyfunction]
fn crt(residues: Vec<PyPoly>, moduli: Vec<PyPoly>) -> PyResult<PyPoly> {
    let r: Vec<_> = residues.into_iter().map(|p| p.0).collect();
    let m: Vec<_> = moduli.into_iter().map(|p| p.0).collect();
    ffpoly::crt(&r, &m).map(PyPoly).map_err(err)
}

/// The first generator of the units modulo an irreducible `g`.
#[pyfunction]
fn find_generator(g: &PyPoly) -> PyResult<PyPoly> {
    Ok(PyPoly(unitgroup::find_generator(&g.0).map_err(err)?.omega().clone()))
}

/// `e` with `omega^e = f (mod g)` for the generator `find_generator(g)`.
#[pyfunction]
fn dlog(g: &PyPoly, f: &PyPoly) -> PyResult<u64> {
    let gen = unitgroup::find_generator(&g.0).map_err(err)?;
    unitgroup::dlog(&gen, &f.0).map_err(err)
}

/// A verified auxiliary pair `(p, A)`.
#[pyclass(name = "AuxSet", frozen, from_py_object)]
#[derive(Clone)]
struct PyAuxSet(auxset::AuxSet);

#[pymethods]
impl PyAuxSet {
    /// Re-verifies both properties.
    #[new]
    fn new(p: u64, elements: Vec<u64>) -> PyResult<Self> {
        auxset::AuxSet::verified(p, elements).map(PyAuxSet).map_err(err)
    }

    #[getter]
    fn p(&self) -> u64 {
        self.0.p()
    }

    #[getter]
    fn elements(&self) -> Vec<u64> {
        self.0.elements().to_vec()
    }

    #[getter]
    fn window_start(&self) -> u64 {
        self.0.window_start()
    }

    #[getter]
    fn method(&self) -> String {
        self.0.method().to_string()
    }

    /// Smallest admissible `y` for each residue mod `p`.
    fn y_table(&self) -> PyResult<Vec<u64>> {
        Ok(build_y_table(&self.0).map_err(err)?.entries().to_vec())
    }

    fn to_json(&self) -> PyResult<String> {
        self.0.to_json().map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        auxset::AuxSet::from_json(text).map(PyAuxSet).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("AuxSet(p={}, |A|={}, method={})", self.0.p(), self.0.elements().len(), self.0.method())
    }
}

#[pyfunction]
#[pyo3(signature = (p_min=11, p_max=100_000, seed=0, attempts=200))]
fn find_aux(py: Python<'_>, p_min: u64, p_max: u64, seed: u64, attempts: u64) -> PyResult<PyAuxSet> {
    py.detach(|| auxset::search(p_min, p_max, seed, attempts)).map(|r| PyAuxSet(r.aux)).map_err(err)
}

#[pyfunction]
fn encode(q: u64, p: u64, digits: Vec<BigUint>) -> PyResult<BigUint> {
    let base = MixedRadix::new(q, p).map_err(err)?;
    Ok(gbase::encode(&base, &DigitVector::new(digits)))
}

#[pyfunction]
fn decode(q: u64, p: u64, n: BigUint, num_digits: usize) -> PyResult<Vec<BigUint>> {
    if num_digits == 0 {
        return Err(err("num_digits must be >= 1"));
    }
    let base = MixedRadix::new(q, p).map_err(err)?;
    Ok(gbase::decode(&base, &n, num_digits).digits)
}

/// Pairs `(i, j, k, l)` of positions with `v_i + v_j = v_k + v_l`.
#[pyfunction]
fn verify_sidon(values: Vec<BigUint>) -> PyResult<Vec<(usize, usize, usize, usize)>> {
    let w = analyzer::verify_sidon(&values).map_err(err)?;
    Ok(w.into_iter().map(|w| (w.indices[0], w.indices[1], w.indices[2], w.indices[3])).collect())
}

/// `(k, x, y, z)` with `m = <z y_k x_k ... y_1 x_1>`.
#[pyfunction]
fn decompose(q: u64, aux: &PyAuxSet, m: BigUint) -> PyResult<(usize, Vec<BigUint>, Vec<u64>, BigUint)> {
    let base = MixedRadix::new(q, aux.0.p()).map_err(err)?;
    let table = build_y_table(&aux.0).map_err(err)?;
    let d = analyzer::decompose(&m, &base, &table).map_err(err)?;
    d.verify(&base, &aux.0).map_err(err)?;
    Ok((d.k, d.x, d.y, d.z))
}

/// Counts of 3-subsets of `I_d` by product class mod `g`, keyed by the
/// residue's text form (nonzero classes only).
#[pyfunction]
fn triple_counts(q: u64, d: usize, g: &PyPoly) -> PyResult<Vec<(String, u64)>> {
    let h = triple_histogram(field(q)?, d, &g.0).map_err(err)?;
    Ok(h.nonzero().into_iter().map(|(a, c)| (a.to_string(), c)).collect())
}

/// Deviation summary as JSON.
#[pyfunction]
fn triple_report(q: u64, d: usize, g: &PyPoly) -> PyResult<String> {
    let h = triple_histogram(field(q)?, d, &g.0).map_err(err)?;
    let report = deviation_report(&h).map_err(err)?;
    serde_json::to_string(&report).map_err(err)
}

/// A built sequence.
#[pyclass(name = "Sequence", frozen)]
struct PySequence(builder::SidonSequence);

#[pymethods]
impl PySequence {
    #[staticmethod]
    #[pyo3(signature = (q, aux, k_min, k_max, seed=0, c="7/20"))]
    fn build(py: Python<'_>, q: u64, aux: &PyAuxSet, k_min: usize, k_max: usize, seed: u64, c: &str) -> PyResult<Self> {
        let mut params = builder::Params::new(field(q)?, aux.0.clone(), k_min, k_max, seed);
        params.c = c.parse::<Density>().map_err(err)?;
        py.detach(|| builder::build_sequence(&params)).map(PySequence).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        SequenceFile::from_json(text).and_then(SequenceFile::into_sequence).map(PySequence).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        SequenceFile::from_sequence(&self.0).to_json().map_err(err)
    }

    fn values(&self) -> Vec<BigUint> {
        self.0.values()
    }

    /// `(f, k, n)` per entry, increasing in `n`.
    fn entries(&self) -> Vec<(PyPoly, usize, BigUint)> {
        self.0.entries.iter().map(|e| (PyPoly(e.f.clone()), e.k, e.n.clone())).collect()
    }

    fn __len__(&self) -> usize {
        self.0.entries.len()
    }

    /// Recovers `(f, k)` from a member value.
    fn decode(&self, n: BigUint) -> PyResult<(PyPoly, usize)> {
        let (f, k) = builder::decode_entry(&n, &self.0.params, &self.0.moduli).map_err(err)?;
        Ok((PyPoly(f), k))
    }

    fn verify_sidon(&self, py: Python<'_>) -> PyResult<usize> {
        let values = self.0.values();
        py.detach(|| analyzer::verify_sidon(&values)).map(|w| w.len()).map_err(err)
    }

    /// Precondition audit as JSON.
    fn audit(&self) -> PyResult<String> {
        serde_json::to_string(&builder::audit_preconditions(&self.0.params)).map_err(err)
    }

    /// Monte Carlo coverage report as JSON.
    fn coverage(&self, py: Python<'_>, start: BigUint, len: u64, trials: u64, seed: u64) -> PyResult<String> {
        let report = py.detach(|| monte_carlo_coverage(&self.0, &start, len, trials, seed)).map_err(err)?;
        serde_json::to_string(&report).map_err(err)
    }
}

#[pymodule]
fn sidon3(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPoly>()?;
    m.add_class::<PyAuxSet>()?;
    m.add_class::<PySequence>()?;
    m.add_function(wrap_pyfunction!(count_irreducibles, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_irreducibles, m)?)?;
    m.add_function(wrap_pyfunction!(crt, m)?)?;
    m.add_function(wrap_pyfunction!(find_generator, m)?)?;
    m.add_function(wrap_pyfunction!(dlog, m)?)?;
    m.add_function(wrap_pyfunction!(find_aux, m)?)?;
    m.add_function(wrap_pyfunction!(encode, m)?)?;
    m.add_function(wrap_pyfunction!(decode, m)?)?;
    m.add_function(wrap_pyfunction!(verify_sidon, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(triple_counts, m)?)?;
    m.add_function(wrap_pyfunction!(triple_report, m)?)?;
    Ok(())
}
