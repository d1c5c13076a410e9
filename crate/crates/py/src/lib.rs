//! Python bindings for the `onepass` compression toolkit.

use pyo3::create_exception;
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use ::onepass::debruijn::{self, DeBruijnSpec};
use ::onepass::stream;
use ::onepass::{AlphabetSpec, Error};

create_exception!(
    onepass,
    OnepassError,
    PyValueError,
    "Base class for onepass errors."
);
create_exception!(
    onepass,
    ValidationError,
    OnepassError,
    "Invalid parameters or input symbols."
);
create_exception!(
    onepass,
    CorruptStreamError,
    OnepassError,
    "Malformed or truncated encoded stream."
);
create_exception!(
    onepass,
    StreamLengthError,
    OnepassError,
    "Input length differs from the declared n."
);

fn to_py(err: Error) -> PyErr {
    let msg = err.to_string();
    match err {
        Error::Validation(_) => ValidationError::new_err(msg),
        Error::Corrupt { .. } => CorruptStreamError::new_err(msg),
        Error::StreamLength { .. } => StreamLengthError::new_err(msg),
        Error::Io(_) => PyOSError::new_err(msg),
    }
}

fn alphabet(sigma: Option<usize>, data: &[u8]) -> PyResult<AlphabetSpec> {
    match sigma {
        Some(s) => AlphabetSpec::new(s).map_err(to_py),
        None => Ok(AlphabetSpec::covering(data)),
    }
}

/// Block-sizing parameters: memory exponent `c`, slack `eps`, and the input
/// length when it is known in advance.
#[pyclass(name = "TradeoffParams", module = "onepass", frozen, from_py_object)]
#[derive(Clone)]
struct PyTradeoffParams {
    inner: stream::TradeoffParams,
}

#[pymethods]
impl PyTradeoffParams {
    #[new]
    #[pyo3(signature = (c, eps, n=None))]
    fn new(c: f64, eps: f64, n: Option<u64>) -> PyResult<Self> {
        let inner = match n {
            Some(n) => stream::TradeoffParams::known(c, eps, n),
            None => stream::TradeoffParams::unknown(c, eps),
        }
        .map_err(to_py)?;
        Ok(PyTradeoffParams { inner })
    }

    #[getter]
    fn c(&self) -> f64 {
        self.inner.c
    }

    #[getter]
    fn eps(&self) -> f64 {
        self.inner.eps
    }

    #[getter]
    fn n(&self) -> Option<u64> {
        self.inner.n_hint
    }

    #[getter]
    fn known_n(&self) -> bool {
        self.inner.known_n
    }

    /// Block length for an input of `n` symbols.
    fn block_length(&self, n: u64) -> usize {
        stream::block_length(n, &self.inner)
    }

    fn __repr__(&self) -> String {
        match self.inner.n_hint {
            Some(n) => format!(
                "TradeoffParams(c={}, eps={}, n={n})",
                self.inner.c, self.inner.eps
            ),
            None => format!("TradeoffParams(c={}, eps={})", self.inner.c, self.inner.eps),
        }
    }
}

/// Accounting for one encode run.
#[pyclass(name = "MemoryReport", module = "onepass", frozen, get_all)]
struct PyMemoryReport {
    peak_buffer_bytes: usize,
    block_count: usize,
    largest_block_len: usize,
    regimes: usize,
    input_len: u64,
    encoded_bytes: u64,
    wall_time_ms: f64,
}

impl From<stream::MemoryReport> for PyMemoryReport {
    fn from(r: stream::MemoryReport) -> Self {
        PyMemoryReport {
            peak_buffer_bytes: r.peak_buffer_bytes,
            block_count: r.block_count,
            largest_block_len: r.largest_block_len,
            regimes: r.regimes,
            input_len: r.input_len,
            encoded_bytes: r.encoded_bytes,
            wall_time_ms: r.wall_time_ms,
        }
    }
}

#[pymethods]
impl PyMemoryReport {
    #[getter]
    fn peak_buffer_bits(&self) -> u64 {
        8 * self.peak_buffer_bytes as u64
    }

    #[getter]
    fn encoded_bits(&self) -> u64 {
        8 * self.encoded_bytes
    }

    fn __repr__(&self) -> String {
        format!(
            "MemoryReport(peak_buffer_bytes={}, block_count={}, regimes={}, input_len={}, encoded_bytes={})",
            self.peak_buffer_bytes, self.block_count, self.regimes, self.input_len, self.encoded_bytes
        )
    }
}

/// k-th order empirical entropy of `data`, in bits per symbol.
#[pyfunction]
#[pyo3(signature = (data, k, sigma=None))]
fn empirical_entropy(data: &[u8], k: usize, sigma: Option<usize>) -> PyResult<f64> {
    ::onepass::empirical_entropy(data, k, alphabet(sigma, data)?).map_err(to_py)
}

/// `[H_0, ..., H_kmax]` of `data`.
#[pyfunction]
#[pyo3(signature = (data, kmax, sigma=None))]
fn entropy_profile(data: &[u8], kmax: usize, sigma: Option<usize>) -> PyResult<Vec<f64>> {
    let profile = ::onepass::entropy_profile(data, kmax, alphabet(sigma, data)?).map_err(to_py)?;
    Ok(profile.values)
}

/// Compresses `data`; returns `(stream_bytes, MemoryReport)`. With
/// `known_n=False` the doubling schedule is used as for a stream of unknown
/// length.
#[pyfunction]
#[pyo3(signature = (data, c, eps, sigma=256, known_n=true))]
fn compress<'py>(
    py: Python<'py>,
    data: &[u8],
    c: f64,
    eps: f64,
    sigma: usize,
    known_n: bool,
) -> PyResult<(Bound<'py, PyBytes>, PyMemoryReport)> {
    let a = AlphabetSpec::new(sigma).map_err(to_py)?;
    let mut out = Vec::new();
    let report = if known_n && !data.is_empty() {
        let params = stream::TradeoffParams::known(c, eps, data.len() as u64).map_err(to_py)?;
        stream::encode_known_n_to(data, &params, a, &mut out)
    } else {
        let params = stream::TradeoffParams::unknown(c, eps).map_err(to_py)?;
        stream::encode_unknown_n_to(data, &params, a, &mut out)
    }
    .map_err(to_py)?;
    Ok((PyBytes::new(py, &out), report.into()))
}

/// Decodes a stream produced by [`compress`].
#[pyfunction]
fn decompress<'py>(py: Python<'py>, data: &[u8]) -> PyResult<Bound<'py, PyBytes>> {
    let out = stream::decode_bytes(data).map_err(to_py)?;
    Ok(PyBytes::new(py, &out))
}

/// Peak working-buffer bytes of a known-length encode, without the output.
#[pyfunction]
#[pyo3(signature = (data, params, sigma=256))]
fn measure_memory(
    data: &[u8],
    params: &PyTradeoffParams,
    sigma: usize,
) -> PyResult<PyMemoryReport> {
    let a = AlphabetSpec::new(sigma).map_err(to_py)?;
    Ok(stream::measure_memory(data, &params.inner, a)
        .map_err(to_py)?
        .into())
}

/// `max(1, ceil(n^(c - eps/2)))`.
#[pyfunction]
fn block_length(n: u64, c: f64, eps: f64) -> PyResult<usize> {
    let params = stream::TradeoffParams::unknown(c, eps).map_err(to_py)?;
    Ok(stream::block_length(n, &params))
}

/// The canonical de Bruijn sequence of order `k` over `0..sigma`.
#[pyfunction]
fn debruijn_sequence<'py>(
    py: Python<'py>,
    sigma: usize,
    k: usize,
) -> PyResult<Bound<'py, PyBytes>> {
    let spec = DeBruijnSpec::new(sigma, k).map_err(to_py)?;
    Ok(PyBytes::new(py, &debruijn::generate(spec)))
}

/// Number of de Bruijn sequences, counted by exhaustive search.
#[pyfunction]
fn debruijn_count(sigma: usize, k: usize) -> PyResult<u64> {
    let spec = DeBruijnSpec::new(sigma, k).map_err(to_py)?;
    debruijn::enumerate_count(spec).map_err(to_py)
}

/// Repetitions of a random de Bruijn period filling at most `n` symbols.
#[pyfunction]
#[pyo3(signature = (sigma, k, n, seed=0))]
fn adversarial_corpus<'py>(
    py: Python<'py>,
    sigma: usize,
    k: usize,
    n: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyBytes>> {
    let spec = DeBruijnSpec::new(sigma, k).map_err(to_py)?;
    let corpus = debruijn::adversarial_corpus(spec, n, seed).map_err(to_py)?;
    Ok(PyBytes::new(py, &corpus))
}

#[pyfunction]
fn theorem3_order(n: u64, sigma: usize, c: f64, eps: f64) -> usize {
    debruijn::theorem3_order(n, sigma, c, eps)
}

#[pymodule(name = "onepass")]
fn onepass_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("OnepassError", py.get_type::<OnepassError>())?;
    m.add("ValidationError", py.get_type::<ValidationError>())?;
    m.add("CorruptStreamError", py.get_type::<CorruptStreamError>())?;
    m.add("StreamLengthError", py.get_type::<StreamLengthError>())?;
    m.add_class::<PyTradeoffParams>()?;
    m.add_class::<PyMemoryReport>()?;
    m.add_function(wrap_pyfunction!(empirical_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(entropy_profile, m)?)?;
    m.add_function(wrap_pyfunction!(compress, m)?)?;
    m.add_function(wrap_pyfunction!(decompress, m)?)?;
    m.add_function(wrap_pyfunction!(measure_memory, m)?)?;
    m.add_function(wrap_pyfunction!(block_length, m)?)?;
    m.add_function(wrap_pyfunction!(debruijn_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(debruijn_count, m)?)?;
    m.add_function(wrap_pyfunction!(adversarial_corpus, m)?)?;
    m.add_function(wrap_pyfunction!(theorem3_order, m)?)?;
    Ok(())
}
