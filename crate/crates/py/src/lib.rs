use std::path::PathBuf;

use goldbach_core::admissible::{enumerate_w, is_admissible, size_w, size_w_d};
use goldbach_core::counting::{parse_point, Counter, Point};
use goldbach_core::density::{self, omega};
use goldbach_core::modulus::{goldbach_modulus, primorial_upto, ProblemInstance, SquareFreeModulus};
use goldbach_core::scanner::{self, ScanConfig, ScanKind, UbhOptions, UbhVerdict, WitnessRecord};
use goldbach_core::spectra::{slice_spectrum_product, spectrum_direct, spectrum_product};
use goldbach_core::verify::{run_suite, Suite, VerifyConfig};
use goldbach_core::Error;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

fn err(e: Error) -> PyErr {
    match e {
        Error::Io(io) => PyOSError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, r: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((r.numer().clone(), r.denom().clone()))
}

fn point_fraction<'py>(py: Python<'py>, x: &Point) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom())))
}

/// Any of `"20.5"`, `"41/2"`, `Fraction(41, 2)` or `20.5`.
fn point(x: &Bound<'_, PyAny>) -> PyResult<Point> {
    parse_point(x.str()?.to_str()?).map_err(err)
}

/// A problem instance `(N, P)` with `P` squarefree.
#[pyclass(name = "Instance", module = "goldbach_sieve", frozen)]
struct PyInstance {
    inner: ProblemInstance,
}

#[pymethods]
impl PyInstance {
    /// `p` defaults to the product of the primes up to `sqrt(2N)`.
    #[new]
    #[pyo3(signature = (n, p=None, z=None))]
    fn new(n: u64, p: Option<u64>, z: Option<u64>) -> PyResult<Self> {
        let modulus = match (p, z) {
            (Some(_), Some(_)) => return Err(PyValueError::new_err("give p or z, not both")),
            (Some(p), None) => SquareFreeModulus::from_u64(p).map_err(err)?,
            (None, Some(z)) => primorial_upto(z),
            (None, None) => goldbach_modulus(n),
        };
        let inner = ProblemInstance::new(n, modulus).map_err(err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n(&self) -> u64 {
        self.inner.n()
    }

    #[getter]
    fn p(&self) -> BigUint {
        self.inner.modulus().value().clone()
    }

    #[getter]
    fn primes(&self) -> Vec<u64> {
        self.inner.modulus().factors().to_vec()
    }

    #[getter]
    fn index(&self) -> u64 {
        self.inner.index()
    }

    #[getter]
    fn n_p(&self) -> u64 {
        self.inner.n_p()
    }

    #[getter]
    fn p_6n(&self) -> BigUint {
        self.inner.p_6n().value().clone()
    }

    /// Divisors `d` of `P_6N`, the slice labels.
    fn slices(&self) -> Vec<u64> {
        self.inner.p_6n().divisors()
    }

    #[pyo3(signature = (d=None))]
    fn size(&self, d: Option<u64>) -> PyResult<BigUint> {
        match d {
            None => Ok(size_w(&self.inner)),
            Some(d) => size_w_d(&self.inner, d).map_err(err),
        }
    }

    #[pyo3(signature = (d=None))]
    fn members(&self, d: Option<u64>) -> PyResult<Vec<u64>> {
        let w = enumerate_w(&self.inner).map_err(err)?;
        Ok(match d {
            None => w.members,
            Some(d) => {
                self.inner.slice_primes(d).map_err(err)?;
                w.slice(d).to_vec()
            }
        })
    }

    #[pyo3(signature = (n, d=None))]
    fn is_admissible(&self, n: BigUint, d: Option<u64>) -> PyResult<bool> {
        is_admissible(&self.inner, &n, d).map_err(err)
    }

    /// `S_P(N, x)`, or its slice `S_P^d(N, x)`.
    #[pyo3(signature = (x, d=None))]
    fn count(&self, x: &Bound<'_, PyAny>, d: Option<u64>) -> PyResult<u64> {
        let c = Counter::new(&self.inner).map_err(err)?;
        c.count_s(&point(x)?, d).map_err(err)
    }

    /// The exact error term `T_P(N, x)` at a non-integer `x`.
    #[pyo3(signature = (x, d=None))]
    fn error<'py>(&self, py: Python<'py>, x: &Bound<'py, PyAny>, d: Option<u64>) -> PyResult<Bound<'py, PyAny>> {
        let c = Counter::new(&self.inner).map_err(err)?;
        point_fraction(py, &c.t_fracsum(&point(x)?, d).map_err(err)?)
    }

    #[pyo3(signature = (k, d=None, direct=false))]
    fn spectrum(&self, k: i64, d: Option<u64>, direct: bool) -> PyResult<f64> {
        match (d, direct) {
            (None, false) => Ok(spectrum_product(&self.inner, k)),
            (None, true) => spectrum_direct(&self.inner, k).map_err(err),
            (Some(d), _) => slice_spectrum_product(&self.inner, d, k).map_err(err),
        }
    }

    /// The density `ω = |W|/P` (or `ω^d`) as a `Fraction`.
    #[pyo3(signature = (d=None))]
    fn density<'py>(&self, py: Python<'py>, d: Option<u64>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &omega(&self.inner, d).map_err(err)?.exact)
    }

    fn __repr__(&self) -> String {
        format!("Instance(n={}, p={})", self.inner.n(), self.inner.modulus().value())
    }
}

/// One `(N, p)` verdict of an upper-bound check.
#[pyclass(name = "Verdict", module = "goldbach_sieve", frozen)]
struct PyVerdict {
    #[pyo3(get)]
    n: u64,
    #[pyo3(get)]
    p: Option<u64>,
    #[pyo3(get)]
    status: String,
    #[pyo3(get)]
    lhs: u64,
    #[pyo3(get)]
    violated: bool,
    inner: UbhVerdict,
}

impl From<UbhVerdict> for PyVerdict {
    fn from(v: UbhVerdict) -> Self {
        Self {
            n: v.big_n,
            p: v.p,
            status: v.status.to_string(),
            lhs: v.lhs,
            violated: v.status == scanner::Status::Violated,
            inner: v,
        }
    }
}

#[pymethods]
impl PyVerdict {
    #[getter]
    fn worst_x<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.worst_x)
    }

    #[getter]
    fn margin<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.margin)
    }

    #[getter]
    fn rhs<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let r = density::big_ratio(self.inner.rhs_num.clone(), self.inner.rhs_den.clone());
        fraction(py, &r)
    }

    fn __repr__(&self) -> String {
        let p = self.p.map_or("-".to_string(), |p| p.to_string());
        format!("Verdict(n={}, p={p}, status={}, margin={})", self.n, self.status, self.inner.margin)
    }
}

fn verdicts(v: Vec<UbhVerdict>) -> Vec<PyVerdict> {
    v.into_iter().map(PyVerdict::from).collect()
}

/// Sweep every slice `p | P_6N` for the Goldbach hypothesis at `n`.
#[pyfunction]
#[pyo3(signature = (n, theta=false))]
fn check_ubh(py: Python<'_>, n: u64, theta: bool) -> PyResult<Vec<PyVerdict>> {
    let v = py.detach(|| scanner::check_ubh(n, UbhOptions { theta })).map_err(err)?;
    Ok(verdicts(v))
}

/// The twin-prime form with `P` = product of primes up to `m`.
#[pyfunction]
#[pyo3(signature = (n, m, theta=false))]
fn check_twin(py: Python<'_>, n: u64, m: u64, theta: bool) -> PyResult<Vec<PyVerdict>> {
    let v = py
        .detach(|| scanner::check_ubh_prime(n, m, UbhOptions { theta }))
        .map_err(err)?;
    Ok(verdicts(v))
}

/// Scan a range of `N` and return the report as JSON text.
#[pyfunction]
#[pyo3(signature = (kind, start, stop, m=None, workers=None, full=false, checkpoint=None))]
#[allow(clippy::too_many_arguments)]
fn scan(
    py: Python<'_>,
    kind: &str,
    start: u64,
    stop: u64,
    m: Option<u64>,
    workers: Option<usize>,
    full: bool,
    checkpoint: Option<PathBuf>,
) -> PyResult<String> {
    let kind = match kind {
        "ubh" => ScanKind::Ubh,
        "ubh-theta" => ScanKind::UbhTheta,
        "twin" => ScanKind::Twin,
        "twin-theta" => ScanKind::TwinTheta,
        other => return Err(PyValueError::new_err(format!("unknown scan kind {other:?}"))),
    };
    let mut config = ScanConfig::new(kind, start, stop);
    config.m = m;
    config.full |= full;
    let report = py
        .detach(|| scanner::scan_ubh_range(&config, workers, checkpoint.as_deref()))
        .map_err(err)?;
    report.to_json().map_err(err)
}

fn witness(r: WitnessRecord) -> Option<(u64, u64, u64, bool)> {
    r.pair.map(|w| (w.n, w.p_small, w.p_large, r.admissible))
}

/// Smallest `k` with `n - k` and `n + k` prime, as `(k, n-k, n+k, admissible)`.
#[pyfunction]
fn goldbach_witness(n: u64) -> PyResult<Option<(u64, u64, u64, bool)>> {
    scanner::goldbach_witness(n).map(witness).map_err(err)
}

/// Smallest `k > m + n` with `k - n` and `k + n` prime.
#[pyfunction]
fn twin_witness(n: u64, m: u64) -> PyResult<Option<(u64, u64, u64, bool)>> {
    scanner::twin_witness(n, m).map(witness).map_err(err)
}

/// `(C1, C2, C3, tail_bound)` from primes up to `z`.
#[pyfunction]
fn constants(z: u64) -> PyResult<(f64, f64, f64, f64)> {
    let c = density::constants(z, None).map_err(err)?;
    Ok((c.c1, c.c2, c.c3, c.tail_bound))
}

#[pyfunction]
fn hl_ratio() -> f64 {
    density::hl_ratio()
}

#[pyfunction]
fn hl_ratio_empirical(n: u64) -> PyResult<f64> {
    Ok(density::hl_ratio_empirical(n).map_err(err)?.approx)
}

#[pyfunction]
fn threshold_check(n: u64) -> PyResult<(bool, bool)> {
    density::threshold_check(n).map_err(err)
}

/// Run one identity suite; returns `(check, passed, failed)` rows.
#[pyfunction]
#[pyo3(signature = (suite, max_p=2310, samples=40, seed=42))]
fn verify(suite: &str, max_p: u64, samples: usize, seed: u64) -> PyResult<Vec<(String, u64, u64)>> {
    let suite: Suite = suite.parse().map_err(err)?;
    let cfg = VerifyConfig { max_p, samples, seed };
    let rows = run_suite(suite, &cfg).map_err(err)?;
    Ok(rows.into_iter().map(|c| (c.name, c.passed, c.failed)).collect())
}

#[pymodule]
fn goldbach_sieve(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PyVerdict>()?;
    m.add_function(wrap_pyfunction!(check_ubh, m)?)?;
    m.add_function(wrap_pyfunction!(check_twin, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    m.add_function(wrap_pyfunction!(goldbach_witness, m)?)?;
    m.add_function(wrap_pyfunction!(twin_witness, m)?)?;
    m.add_function(wrap_pyfunction!(constants, m)?)?;
    m.add_function(wrap_pyfunction!(hl_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(hl_ratio_empirical, m)?)?;
    m.add_function(wrap_pyfunction!(threshold_check, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
