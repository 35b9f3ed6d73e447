//! Python bindings for `secwipt`.
//!
//! Enumerations cross the boundary as their string labels
//! (`"type_i"`, `"an_type_ii"`, `"af"`, `"coherent"`, ...).

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use secwipt::cli::{ScenarioConfig, Violation};
use secwipt::relay::{self, RelayProtocol};
use secwipt::swipt_miso::{self, BeamStrategy};
use secwipt::wpcn::{self, JammingMode};
use secwipt::{beamforming, channel, swipt_siso, ReceiverType};

fn err(e: secwipt::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn receiver(label: &str) -> PyResult<ReceiverType> {
    match label {
        "type_i" => Ok(ReceiverType::TypeI),
        "type_ii" => Ok(ReceiverType::TypeII),
        _ => Err(PyValueError::new_err(format!("receiver must be 'type_i' or 'type_ii', got {label:?}"))),
    }
}

fn strategy(label: &str) -> PyResult<BeamStrategy> {
    BeamStrategy::ALL
        .into_iter()
        .find(|s| s.label() == label)
        .ok_or_else(|| PyValueError::new_err(format!("unknown beam strategy {label:?}")))
}

fn protocol(label: &str) -> PyResult<RelayProtocol> {
    match label {
        "af" => Ok(RelayProtocol::AmplifyForward),
        "df" => Ok(RelayProtocol::DecodeForward),
        "none" => Ok(RelayProtocol::None),
        _ => Err(PyValueError::new_err(format!("protocol must be 'af', 'df' or 'none', got {label:?}"))),
    }
}

fn jamming(label: &str) -> PyResult<JammingMode> {
    JammingMode::ALL
        .into_iter()
        .find(|m| m.label() == label)
        .ok_or_else(|| PyValueError::new_err(format!("unknown jamming mode {label:?}")))
}

#[pyclass(name = "SystemParams", frozen, from_py_object)]
#[derive(Clone)]
struct PySystemParams(swipt_siso::SystemParams);

#[pymethods]
impl PySystemParams {
    #[new]
    #[pyo3(signature = (power_w, efficiency = 0.5, noise_w = 1e-11, alpha = 0.0))]
    fn new(power_w: f64, efficiency: f64, noise_w: f64, alpha: f64) -> PyResult<Self> {
        swipt_siso::SystemParams::new(power_w, efficiency, noise_w, alpha)
            .map(Self)
            .map_err(err)
    }

    fn with_alpha(&self, alpha: f64) -> PyResult<Self> {
        self.0.with_alpha(alpha).map(Self).map_err(err)
    }

    #[getter]
    fn power_w(&self) -> f64 {
        self.0.power()
    }

    #[getter]
    fn efficiency(&self) -> f64 {
        self.0.efficiency()
    }

    #[getter]
    fn noise_w(&self) -> f64 {
        self.0.noise()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha()
    }

    fn __repr__(&self) -> String {
        format!(
            "SystemParams(power_w={}, efficiency={}, noise_w={}, alpha={})",
            self.0.power(),
            self.0.efficiency(),
            self.0.noise(),
            self.0.alpha()
        )
    }
}

#[pyclass(name = "ChannelVector", frozen, from_py_object)]
#[derive(Clone)]
struct PyChannelVector(channel::ChannelVector);

#[pymethods]
impl PyChannelVector {
    #[new]
    fn new(coefficients: Vec<Complex64>) -> PyResult<Self> {
        channel::ChannelVector::new(coefficients).map(Self).map_err(err)
    }

    /// Single-antenna channel with power gain `gain`.
    #[staticmethod]
    fn from_power_gain(gain: f64) -> PyResult<Self> {
        channel::ChannelVector::from_power_gain(gain).map(Self).map_err(err)
    }

    #[getter]
    fn coefficients(&self) -> Vec<Complex64> {
        self.0.coefficients().to_vec()
    }

    #[getter]
    fn power_gain(&self) -> f64 {
        self.0.power_gain()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

#[pyfunction]
fn dbm_to_watts(dbm: f64) -> f64 {
    channel::dbm_to_watts(dbm)
}

#[pyfunction]
fn watts_to_dbm(watts: f64) -> PyResult<f64> {
    channel::watts_to_dbm(watts).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (distance_m, exponent = 3.0, reference_gain = 1.0))]
fn path_loss_gain(distance_m: f64, exponent: f64, reference_gain: f64) -> PyResult<f64> {
    let model = channel::PathLossModel::new(exponent, reference_gain).map_err(err)?;
    channel::path_loss_gain(distance_m, &model).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (distance_m, angle_deg, antennas, exponent = 3.0, reference_gain = 1.0))]
fn los_channel(
    distance_m: f64,
    angle_deg: f64,
    antennas: usize,
    exponent: f64,
    reference_gain: f64,
) -> PyResult<PyChannelVector> {
    let model = channel::PathLossModel::new(exponent, reference_gain).map_err(err)?;
    let placement = channel::NodePlacement::new(distance_m, angle_deg).map_err(err)?;
    channel::los_channel(&placement, antennas, &model)
        .map(PyChannelVector)
        .map_err(err)
}

#[pyfunction]
fn rayleigh_channel(seed: u64, antennas: usize, avg_gain: f64) -> PyResult<PyChannelVector> {
    channel::rayleigh_channel(seed, antennas, avg_gain)
        .map(PyChannelVector)
        .map_err(err)
}

#[pyfunction]
fn mrt_beam(h: &PyChannelVector) -> PyResult<Vec<Complex64>> {
    beamforming::mrt_beam(&h.0).map(|b| b.weights().to_vec()).map_err(err)
}

#[pyfunction]
fn zf_beam(target: &PyChannelVector, avoid: &PyChannelVector) -> PyResult<Vec<Complex64>> {
    beamforming::zf_beam(&target.0, &avoid.0)
        .map(|b| b.weights().to_vec())
        .map_err(err)
}

#[pyfunction]
fn secrecy_rate(sinr_legit: f64, sinr_eve: f64) -> f64 {
    swipt_siso::secrecy_rate(sinr_legit, sinr_eve)
}

#[pyfunction]
fn harvested_power(params: &PySystemParams, h_e: f64) -> f64 {
    swipt_siso::harvested_power(&params.0, h_e)
}

#[pyfunction]
#[pyo3(signature = (params, h_i, h_e, receiver_type = "type_i"))]
fn siso_secrecy_rate(params: &PySystemParams, h_i: f64, h_e: f64, receiver_type: &str) -> PyResult<f64> {
    Ok(swipt_siso::siso_secrecy_rate(&params.0, h_i, h_e, receiver(receiver_type)?))
}

/// Returns `(alpha, rate)`.
#[pyfunction]
#[pyo3(signature = (params, h_i, h_e, receiver_type = "type_i"))]
fn optimize_alpha(params: &PySystemParams, h_i: f64, h_e: f64, receiver_type: &str) -> PyResult<(f64, f64)> {
    let best = swipt_siso::optimize_alpha(&params.0, h_i, h_e, receiver(receiver_type)?).map_err(err)?;
    Ok((best.alpha, best.rate))
}

/// `(energy, rate)` pairs of the strategy's region, ascending in energy.
#[pyfunction]
#[pyo3(signature = (params, h_i, h_e, strategy_label, samples = swipt_miso::DEFAULT_ALPHA_SAMPLES))]
fn rate_energy_region(
    params: &PySystemParams,
    h_i: &PyChannelVector,
    h_e: &PyChannelVector,
    strategy_label: &str,
    samples: usize,
) -> PyResult<Vec<(f64, f64)>> {
    let s = strategy(strategy_label)?;
    let grid = swipt_miso::uniform_grid(samples);
    let region = swipt_miso::rate_energy_region(&params.0, &h_i.0, &h_e.0, s, s.receiver(), &grid).map_err(err)?;
    Ok(region.iter().map(|p| (p.energy, p.rate)).collect())
}

#[pyclass(name = "RelayTopology", frozen, from_py_object)]
#[derive(Clone)]
struct PyRelayTopology(relay::RelayTopology);

#[pymethods]
impl PyRelayTopology {
    #[new]
    fn new(g_ah: f64, g_hi: f64, g_he: f64, g_ai: f64, g_ae: f64) -> PyResult<Self> {
        relay::RelayTopology::new(g_ah, g_hi, g_he, g_ai, g_ae)
            .map(Self)
            .map_err(err)
    }
}

#[pyfunction]
fn schedule_secrecy_rate(
    params: &PySystemParams,
    topo: &PyRelayTopology,
    gamma: f64,
    beta: f64,
    protocol_label: &str,
) -> PyResult<f64> {
    let s = relay::HelperSchedule::new(gamma, beta, protocol(protocol_label)?).map_err(err)?;
    Ok(relay::schedule_secrecy_rate(&params.0, &topo.0, &s))
}

#[pyfunction]
fn classify_mode(gamma: f64, beta: f64) -> PyResult<&'static str> {
    let p = if beta == 1.0 { RelayProtocol::None } else { RelayProtocol::DecodeForward };
    let s = relay::HelperSchedule::new(gamma, beta, p).map_err(err)?;
    relay::classify_mode(&s).map(|m| m.label()).map_err(err)
}

/// Returns `(gamma, beta, rate)`.
#[pyfunction]
#[pyo3(signature = (params, topo, protocol_label, step = 0.01))]
fn optimize_schedule(
    params: &PySystemParams,
    topo: &PyRelayTopology,
    protocol_label: &str,
    step: f64,
) -> PyResult<(f64, f64, f64)> {
    let best = relay::optimize_schedule(&params.0, &topo.0, protocol(protocol_label)?, step).map_err(err)?;
    Ok((best.schedule.gamma(), best.schedule.beta(), best.rate))
}

#[pyclass(name = "WpcnTopology", frozen, from_py_object)]
#[derive(Clone)]
struct PyWpcnTopology(wpcn::WpcnTopology);

#[pymethods]
impl PyWpcnTopology {
    #[new]
    fn new(g_ai: f64, g_ie: f64, g_ah: Vec<f64>, g_he: Vec<f64>) -> PyResult<Self> {
        wpcn::WpcnTopology::new(g_ai, g_ie, g_ah, g_he).map(Self).map_err(err)
    }
}

#[pyfunction]
fn jamming_power_at(tau: f64, params: &PySystemParams, topo: &PyWpcnTopology, mode: &str) -> PyResult<f64> {
    wpcn::jamming_power_at(tau, &params.0, &topo.0.g_ah, &topo.0.g_he, jamming(mode)?).map_err(err)
}

#[pyfunction]
fn uplink_secrecy_rate(tau: f64, params: &PySystemParams, topo: &PyWpcnTopology, mode: &str) -> PyResult<f64> {
    let s = wpcn::WpcnSchedule::new(tau, jamming(mode)?).map_err(err)?;
    wpcn::uplink_secrecy_rate(&s, &params.0, &topo.0).map_err(err)
}

/// Returns `(tau, rate)`.
#[pyfunction]
#[pyo3(signature = (params, topo, mode, step = wpcn::DEFAULT_TAU_STEP))]
fn optimize_tau(params: &PySystemParams, topo: &PyWpcnTopology, mode: &str, step: f64) -> PyResult<(f64, f64)> {
    let grid = wpcn::tau_grid(step).map_err(err)?;
    let best = wpcn::optimize_tau(&params.0, &topo.0, jamming(mode)?, &grid).map_err(err)?;
    Ok((best.tau, best.rate))
}

fn parse(config_toml: &str) -> PyResult<ScenarioConfig> {
    ScenarioConfig::from_toml(config_toml).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Violations of a TOML scenario as `"field: message"` strings.
#[pyfunction]
fn validate_config(config_toml: &str) -> PyResult<Vec<String>> {
    Ok(parse(config_toml)?.validate().iter().map(Violation::to_string).collect())
}

/// Runs a TOML scenario and returns the CSV text.
#[pyfunction]
fn run_config(py: Python<'_>, config_toml: &str) -> PyResult<String> {
    let config = parse(config_toml)?;
    py.detach(|| secwipt::cli::run(&config))
        .map(|t| t.to_csv())
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
#[pyo3(name = "secwipt")]
fn secwipt_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PySystemParams>()?;
    m.add_class::<PyChannelVector>()?;
    m.add_class::<PyRelayTopology>()?;
    m.add_class::<PyWpcnTopology>()?;
    m.add_function(wrap_pyfunction!(dbm_to_watts, m)?)?;
    m.add_function(wrap_pyfunction!(watts_to_dbm, m)?)?;
    m.add_function(wrap_pyfunction!(path_loss_gain, m)?)?;
    m.add_function(wrap_pyfunction!(los_channel, m)?)?;
    m.add_function(wrap_pyfunction!(rayleigh_channel, m)?)?;
    m.add_function(wrap_pyfunction!(mrt_beam, m)?)?;
    m.add_function(wrap_pyfunction!(zf_beam, m)?)?;
    m.add_function(wrap_pyfunction!(secrecy_rate, m)?)?;
    m.add_function(wrap_pyfunction!(harvested_power, m)?)?;
    m.add_function(wrap_pyfunction!(siso_secrecy_rate, m)?)?;
    m.add_function(wrap_pyfunction!(optimize_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(rate_energy_region, m)?)?;
    m.add_function(wrap_pyfunction!(schedule_secrecy_rate, m)?)?;
    m.add_function(wrap_pyfunction!(classify_mode, m)?)?;
    m.add_function(wrap_pyfunction!(optimize_schedule, m)?)?;
    m.add_function(wrap_pyfunction!(jamming_power_at, m)?)?;
    m.add_function(wrap_pyfunction!(uplink_secrecy_rate, m)?)?;
    m.add_function(wrap_pyfunction!(optimize_tau, m)?)?;
    m.add_function(wrap_pyfunction!(validate_config, m)?)?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    Ok(())
}
