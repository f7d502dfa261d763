//! Python bindings for the `stability_anneal` crate.

use std::collections::HashMap;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use stability_anneal::dominating::{self, DominatingConfig, TailProfile, WRecursion};
use stability_anneal::engine::{self, Algorithm, BoxSet, EngineConfig, GridSet, TauSchedule};
use stability_anneal::experiment::{self, ExperimentConfig, RunOptions};
use stability_anneal::models::{self, ModelSpec, MODEL_IDS};
use stability_anneal::rng::{open_unit, substream};
use stability_anneal::{with_model, ConfigError, Error};

fn to_py(e: Error) -> PyErr {
    if e.is_config() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn config_err(e: ConfigError) -> PyErr {
    to_py(e.into())
}

fn recursion(paired: bool) -> WRecursion {
    if paired {
        WRecursion::Paired
    } else {
        WRecursion::Single
    }
}

fn parse_algorithm(name: &str) -> PyResult<Algorithm> {
    match name {
        "global" => Ok(Algorithm::Global),
        "local" => Ok(Algorithm::Local),
        other => Err(PyValueError::new_err(format!(
            "algorithm must be \"global\" or \"local\", got {other:?}"
        ))),
    }
}

/// A model parameter override: an integer, a float or a list of floats.
#[derive(FromPyObject, Debug, Clone)]
pub enum ParamValue {
    Int(i64),
    Float(f64),
    List(Vec<f64>),
}

impl From<&ParamValue> for toml::Value {
    fn from(v: &ParamValue) -> Self {
        match v {
            ParamValue::Int(i) => toml::Value::Integer(*i),
            ParamValue::Float(f) => toml::Value::Float(*f),
            ParamValue::List(xs) => toml::Value::Array(xs.iter().map(|&x| toml::Value::Float(x)).collect()),
        }
    }
}

/// A gallery model with optional parameter overrides.
#[pyclass(name = "Model", frozen, skip_from_py_object, module = "stability_anneal_py")]
#[derive(Clone)]
pub struct PyModel {
    inner: ModelSpec,
}

#[pymethods]
impl PyModel {
    #[new]
    #[pyo3(signature = (id, params = None))]
    pub fn new(id: &str, params: Option<HashMap<String, ParamValue>>) -> PyResult<Self> {
        let table: Option<toml::Table> =
            params.map(|p| p.iter().map(|(k, v)| (k.clone(), toml::Value::from(v))).collect());
        let inner = ModelSpec::from_id(id, table.as_ref()).map_err(config_err)?;
        Ok(Self { inner })
    }

    #[getter]
    pub fn id(&self) -> &'static str {
        self.inner.id()
    }

    #[getter]
    pub fn param_names(&self) -> Vec<&'static str> {
        self.inner.param_names().to_vec()
    }

    #[getter]
    pub fn param_range(&self) -> Vec<(f64, f64)> {
        self.inner.param_range()
    }

    #[getter]
    pub fn increment_bound(&self) -> f64 {
        self.inner.increment_bound()
    }

    #[getter]
    pub fn description(&self) -> &'static str {
        self.inner.describe()
    }

    /// Lyapunov value of the empty starting state.
    pub fn initial_lyapunov(&self) -> f64 {
        self.inner.initial_lyapunov()
    }

    /// Recorded annealer run, starting with the `k = 0` row.
    #[pyo3(signature = (set, k_star, seed = 0, eta = 0.01, c = 0.5, d = 1.0, algorithm = "global"))]
    #[allow(clippy::too_many_arguments)]
    pub fn run_annealer(
        &self,
        set: &PySet,
        k_star: u64,
        seed: u64,
        eta: f64,
        c: f64,
        d: f64,
        algorithm: &str,
    ) -> PyResult<PyTrajectory> {
        let engine = engine_config(eta, c, d, algorithm, seed, k_star)?;
        let t = with_model!(&self.inner, m => engine::run_annealer(m, &set.inner, &engine, None, None))
            .map_err(to_py)?;
        Ok(PyTrajectory {
            k: t.k().to_vec(),
            t: t.t().to_vec(),
            f: t.f().to_vec(),
            lambda_: (0..t.len()).map(|row| t.lambda(row).to_vec()).collect(),
            accepted: t.accepted().to_vec(),
            simulated_steps: t.simulated_steps,
        })
    }

    /// Runs the annealer and tests its final value against the dominating
    /// chain. The budget schedule is taken from `dominating`.
    #[pyo3(signature = (set, dominating, k_star, seed = 0, eta = 0.01, algorithm = "global", n_reps = 10_000))]
    #[allow(clippy::too_many_arguments)]
    pub fn instability_test(
        &self,
        set: &PySet,
        dominating: &PyDominating,
        k_star: u64,
        seed: u64,
        eta: f64,
        algorithm: &str,
        n_reps: usize,
    ) -> PyResult<PyVerdict> {
        let tau = dominating.inner.tau;
        let engine = engine_config(eta, tau.c(), tau.d(), algorithm, seed, k_star)?;
        let v = with_model!(&self.inner, m => dominating::instability_test(
            m,
            &set.inner,
            &engine,
            &dominating.inner,
            n_reps
        ))
        .map_err(to_py)?;
        Ok(PyVerdict::from(v))
    }

    fn __repr__(&self) -> String {
        format!("Model({:?})", self.inner.id())
    }
}

fn engine_config(eta: f64, c: f64, d: f64, algorithm: &str, seed: u64, k_star: u64) -> PyResult<EngineConfig> {
    let tau = TauSchedule::new(c, d).map_err(config_err)?;
    EngineConfig::new(eta, tau, parse_algorithm(algorithm)?, seed, k_star).map_err(config_err)
}

/// A box of parameters, or a grid with spacing `h` when `h` is given.
#[pyclass(name = "ParameterSet", frozen, skip_from_py_object, module = "stability_anneal_py")]
#[derive(Clone)]
pub struct PySet {
    inner: engine::ParameterSet,
}

#[pymethods]
impl PySet {
    #[new]
    #[pyo3(signature = (lower, upper, h = None, radius = 1))]
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, h: Option<f64>, radius: usize) -> PyResult<Self> {
        let bounds = BoxSet::new(lower, upper).map_err(config_err)?;
        let inner = match h {
            None => engine::ParameterSet::Box(bounds),
            Some(h) => engine::ParameterSet::Grid(GridSet::new(bounds, h, radius).map_err(config_err)?),
        };
        Ok(Self { inner })
    }

    #[getter]
    pub fn lower(&self) -> Vec<f64> {
        self.inner.bounds().lower().to_vec()
    }

    #[getter]
    pub fn upper(&self) -> Vec<f64> {
        self.inner.bounds().upper().to_vec()
    }

    #[getter]
    pub fn is_grid(&self) -> bool {
        self.inner.as_grid().is_some()
    }

    pub fn contains(&self, point: Vec<f64>) -> bool {
        self.inner.contains(&point)
    }
}

/// Parameters of the dominating chain `W` and its increment bound `Z(w)`.
#[pyclass(name = "DominatingConfig", frozen, skip_from_py_object, module = "stability_anneal_py")]
#[derive(Clone)]
pub struct PyDominating {
    inner: DominatingConfig,
}

#[pymethods]
impl PyDominating {
    #[new]
    #[pyo3(signature = (delta, kappa, phi, c = 0.5, d = 1.0, sigma = 1, alpha = 0.05))]
    pub fn new(delta: f64, kappa: f64, phi: f64, c: f64, d: f64, sigma: u32, alpha: f64) -> PyResult<Self> {
        let tau = TauSchedule::new(c, d).map_err(config_err)?;
        let inner = DominatingConfig::new(delta, sigma, kappa, phi, tau, alpha).map_err(config_err)?;
        Ok(Self { inner })
    }

    #[getter]
    pub fn delta(&self) -> f64 {
        self.inner.delta
    }

    #[getter]
    pub fn kappa(&self) -> f64 {
        self.inner.kappa
    }

    #[getter]
    pub fn phi(&self) -> f64 {
        self.inner.phi
    }

    #[getter]
    pub fn sigma(&self) -> u32 {
        self.inner.sigma
    }

    #[getter]
    pub fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    /// `(w_star, monotone_kernel)`.
    pub fn diagnostics(&self) -> (f64, bool) {
        let d = self.inner.diagnostics();
        (d.w_star, d.monotone_kernel)
    }

    /// `(n, a1, a2, a3, a4)` of the tail bound at level `w`.
    pub fn coefficients(&self, w: f64) -> (u64, f64, f64, f64, f64) {
        let c = dominating::z_coefficients(w, &self.inner);
        (c.n, c.a1, c.a2, c.a3, c.a4)
    }

    /// `P(Z(w) > z)` bound, clipped to 1.
    pub fn tail(&self, w: f64, z: f64) -> f64 {
        dominating::z_tail(w, z, &self.inner)
    }

    /// Nonincreasing envelope of `tail`, the survival function sampled from.
    pub fn tail_monotone(&self, w: f64, z: f64) -> f64 {
        dominating::z_tail_monotone(w, z, &self.inner)
    }

    pub fn sample_z(&self, w: f64, n: usize, seed: u64) -> Vec<f64> {
        let profile = TailProfile::new(w, &self.inner);
        let mut rng = substream(seed, &[]);
        (0..n).map(|_| profile.inverse(open_unit(&mut rng))).collect()
    }

    /// One path `W_0..W_{k_max}`.
    #[pyo3(signature = (w0, k_max, seed, paired = false))]
    pub fn simulate_w(&self, w0: f64, k_max: u64, seed: u64, paired: bool) -> PyResult<Vec<f64>> {
        check_level(w0)?;
        let mut rng = substream(seed, &[]);
        Ok(dominating::simulate_w(w0, k_max, &self.inner, recursion(paired), &mut rng).values)
    }

    /// `n` independent draws of `W_k`.
    #[pyo3(signature = (w0, k, n, seed, paired = false))]
    pub fn sample_w(&self, w0: f64, k: u64, n: usize, seed: u64, paired: bool) -> PyResult<Vec<f64>> {
        check_level(w0)?;
        let mut rng = substream(seed, &[]);
        Ok((0..n)
            .map(|_| dominating::sample_w_at(w0, k, &self.inner, recursion(paired), &mut rng))
            .collect())
    }

    /// Monte Carlo `(1−α)`-quantiles `q_0..q_{k_max}` of `W_k`.
    #[pyo3(signature = (w0, k_max, n_reps = 10_000, seed = 0, paired = false))]
    pub fn quantiles(&self, w0: f64, k_max: u64, n_reps: usize, seed: u64, paired: bool) -> PyResult<Vec<f64>> {
        check_level(w0)?;
        dominating::estimate_quantiles(w0, k_max, &self.inner, recursion(paired), n_reps, seed)
            .map(|t| t.values)
            .map_err(to_py)
    }
}

fn check_level(w0: f64) -> PyResult<()> {
    if w0 >= 0.0 && w0.is_finite() {
        Ok(())
    } else {
        Err(PyValueError::new_err(format!("w0 must be finite and nonnegative, got {w0}")))
    }
}

#[pyclass(name = "Trajectory", frozen, skip_from_py_object, get_all, module = "stability_anneal_py")]
#[derive(Clone)]
pub struct PyTrajectory {
    pub k: Vec<u64>,
    pub t: Vec<u64>,
    pub f: Vec<f64>,
    #[pyo3(name = "lambda_")]
    pub lambda_: Vec<Vec<f64>>,
    pub accepted: Vec<bool>,
    pub simulated_steps: u64,
}

#[pymethods]
impl PyTrajectory {
    fn __len__(&self) -> usize {
        self.k.len()
    }
}

#[pyclass(name = "Verdict", frozen, skip_from_py_object, get_all, module = "stability_anneal_py")]
#[derive(Clone)]
pub struct PyVerdict {
    pub decision: String,
    pub unstable: bool,
    pub k_compare: u64,
    pub f_value: f64,
    pub quantile: f64,
    pub alpha: f64,
    pub k_star: u64,
    pub seed: u64,
}

impl From<dominating::Verdict> for PyVerdict {
    fn from(v: dominating::Verdict) -> Self {
        Self {
            decision: v.decision.to_string(),
            unstable: v.is_unstable(),
            k_compare: v.k_compare,
            f_value: v.f_value,
            quantile: v.quantile,
            alpha: v.alpha,
            k_star: v.k_star,
            seed: v.seed,
        }
    }
}

#[pymethods]
impl PyVerdict {
    fn __repr__(&self) -> String {
        format!(
            "Verdict(decision={:?}, k={}, f={}, q={})",
            self.decision, self.k_compare, self.f_value, self.quantile
        )
    }
}

/// One row of an experiment summary.
#[pyclass(name = "Summary", frozen, skip_from_py_object, get_all, module = "stability_anneal_py")]
#[derive(Clone)]
pub struct PySummary {
    pub sweep_value: Option<f64>,
    pub replications: usize,
    pub n_unstable: usize,
    pub proportion: f64,
    pub mean_drift_ratio: f64,
    pub failures: usize,
}

/// `τ(f) = ceil(c·f + d)`.
#[pyfunction]
#[pyo3(signature = (f, c = 0.5, d = 1.0))]
pub fn tau_of(f: f64, c: f64, d: f64) -> PyResult<u64> {
    let tau = TauSchedule::new(c, d).map_err(config_err)?;
    Ok(engine::tau_of(&tau, f))
}

/// Metropolis rule with an explicit uniform draw `u`.
#[pyfunction]
pub fn metropolis_accept(f_candidate: f64, f_incumbent: f64, eta: f64, u: f64) -> bool {
    engine::metropolis_accept(f_candidate, f_incumbent, eta, u)
}

/// Critical arrival rate of `n` parallel queues.
#[pyfunction]
pub fn parallel_critical_rate(n: usize) -> PyResult<f64> {
    models::parallel_critical_rate(n).map_err(|e| to_py(e.into()))
}

#[pyfunction]
pub fn model_ids() -> Vec<&'static str> {
    MODEL_IDS.to_vec()
}

/// Runs every replication of a TOML experiment and returns its summary.
#[pyfunction]
#[pyo3(signature = (config, workers = 0))]
pub fn run_experiment(config: &str, workers: usize) -> PyResult<Vec<PySummary>> {
    let cfg = ExperimentConfig::parse(config).map_err(to_py)?;
    let options = RunOptions {
        workers,
        trajectory_dir: None,
    };
    let report = experiment::run_replications(&cfg, &options).map_err(to_py)?;
    Ok(report
        .summary
        .into_iter()
        .map(|s| PySummary {
            sweep_value: s.sweep_value,
            replications: s.replications,
            n_unstable: s.n_unstable,
            proportion: s.proportion,
            mean_drift_ratio: s.mean_drift_ratio,
            failures: s.failures,
        })
        .collect())
}

#[pymodule]
fn stability_anneal_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModel>()?;
    m.add_class::<PySet>()?;
    m.add_class::<PyDominating>()?;
    m.add_class::<PyTrajectory>()?;
    m.add_class::<PyVerdict>()?;
    m.add_class::<PySummary>()?;
    m.add_function(wrap_pyfunction!(tau_of, m)?)?;
    m.add_function(wrap_pyfunction!(metropolis_accept, m)?)?;
    m.add_function(wrap_pyfunction!(parallel_critical_rate, m)?)?;
    m.add_function(wrap_pyfunction!(model_ids, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
