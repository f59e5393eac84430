//! Python bindings: `pydeltaidx.Index`.

use deltaidx::compressor::HeightMode;
use deltaidx::error::Error;
use deltaidx::index::{Index as CoreIndex, IndexConfig};
use deltaidx::pattern::CutMode;
use deltaidx::query::QueryOptions;
use deltaidx::stats::Stats;
use deltaidx::verify::{verify, VerifyConfig};
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// `str` is taken as UTF-8, anything else must convert to bytes.
fn bytes_arg(v: &Bound<'_, PyAny>) -> PyResult<Vec<u8>> {
    match v.extract::<String>() {
        Ok(s) => Ok(s.into_bytes()),
        Err(_) => v.extract(),
    }
}

fn opts(cuts: &str) -> PyResult<QueryOptions> {
    let cuts: CutMode = cuts.parse().map_err(PyValueError::new_err)?;
    Ok(QueryOptions {
        cuts,
        ..Default::default()
    })
}

#[pyclass(name = "Index", module = "pydeltaidx", frozen)]
struct PyIndex {
    inner: CoreIndex,
}

#[pymethods]
impl PyIndex {
    /// Builds an index over `text` (bytes or str). With `tokens=True` the
    /// alphabet is the set of whitespace-separated words.
    #[staticmethod]
    #[pyo3(signature = (text, seed=0, capped=true, retries=4, trie_len=None, tokens=false))]
    fn build(
        text: &Bound<'_, PyAny>,
        seed: u64,
        capped: bool,
        retries: u32,
        trie_len: Option<usize>,
        tokens: bool,
    ) -> PyResult<Self> {
        let bytes = bytes_arg(text)?;
        let cfg = IndexConfig {
            seed,
            height: if capped { HeightMode::Capped } else { HeightMode::Uncapped },
            attempts: retries + 1,
            trie_len,
            ..Default::default()
        };
        let inner = if tokens {
            let s = String::from_utf8(bytes).map_err(|_| PyValueError::new_err("token input is not UTF-8"))?;
            CoreIndex::build_tokens(&s, &cfg)
        } else {
            CoreIndex::build_bytes(&bytes, &cfg)
        };
        Ok(PyIndex { inner: inner.map_err(py_err)? })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(PyIndex {
            inner: CoreIndex::load(path).map_err(py_err)?,
        })
    }

    #[staticmethod]
    fn from_bytes(data: &[u8]) -> PyResult<Self> {
        Ok(PyIndex {
            inner: CoreIndex::from_bytes(data).map_err(py_err)?,
        })
    }

    fn save(&self, path: &str) -> PyResult<()> {
        self.inner.save(path).map_err(py_err)
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &self.inner.to_bytes())
    }

    /// Sorted 1-based starting positions of `pattern`.
    #[pyo3(signature = (pattern, cuts="mcut"))]
    fn locate(&self, py: Python<'_>, pattern: &Bound<'_, PyAny>, cuts: &str) -> PyResult<Vec<u64>> {
        let o = opts(cuts)?;
        let pattern = bytes_arg(pattern)?;
        py.detach(|| self.inner.locate_bytes(&pattern, &o)).map_err(py_err)
    }

    #[pyo3(signature = (pattern, cuts="mcut"))]
    fn count(&self, py: Python<'_>, pattern: &Bound<'_, PyAny>, cuts: &str) -> PyResult<u64> {
        let o = opts(cuts)?;
        let pattern = bytes_arg(pattern)?;
        py.detach(|| self.inner.count_bytes(&pattern, &o)).map_err(py_err)
    }

    /// Decoded substring `S[i..=j]`, 1-based inclusive, as bytes.
    fn extract<'py>(&self, py: Python<'py>, i: u64, j: u64) -> PyResult<Bound<'py, PyBytes>> {
        let codes = self.inner.extract(i, j).map_err(py_err)?;
        Ok(PyBytes::new(py, &self.inner.alphabet().decode(&codes)))
    }

    /// Metrics as a JSON string.
    fn stats(&self, py: Python<'_>) -> String {
        py.detach(|| Stats::from_index(&self.inner).to_json())
    }

    /// Returns `(mismatches, duplicates)` against the reconstructed text.
    #[pyo3(signature = (patterns=1000, max_m=64, seed=0))]
    fn verify(&self, py: Python<'_>, patterns: usize, max_m: usize, seed: u64) -> (usize, u64) {
        py.detach(|| {
            let text = self.inner.text();
            let r = verify(&self.inner, &text, &VerifyConfig { patterns, max_m, seed });
            (r.mismatches(), r.duplicates)
        })
    }

    #[getter]
    fn n(&self) -> u64 {
        self.inner.text_len()
    }

    #[getter]
    fn sigma(&self) -> u32 {
        self.inner.header().sigma
    }

    #[getter]
    fn delta(&self) -> f64 {
        self.inner.header().delta.as_f64()
    }

    #[getter]
    fn grammar_size(&self) -> u64 {
        self.inner.header().grammar_size
    }

    fn __len__(&self) -> usize {
        self.inner.text_len() as usize
    }

    fn __repr__(&self) -> String {
        let h = self.inner.header();
        format!("Index(n={}, sigma={}, g={})", h.n, h.sigma, h.grammar_size)
    }
}

#[pymodule]
fn pydeltaidx(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyIndex>()?;
    Ok(())
}
