//! Secrecy in a wireless powered communication network.
//!
//! Harvest-then-transmit: the H-AP charges the IN and the helping nodes
//! (HNs) for a fraction τ of the frame. The IN then sends its message uplink
//! for `1 - τ`, while the HNs spend their harvest jamming the ER. All HNs
//! share one AN key, so the H-AP removes their jamming completely.
//! Channels are reciprocal and the ER has the same noise power as the H-AP.
//!
//! The three-slot variant adds a relaying slot: the HN harvests (slot 1),
//! decodes the IN (slot 2), then splits its power between forwarding to the
//! H-AP and jamming the ER (slot 3). The ER's leakage in slots 2 and 3 is
//! summed. The IN does not harvest in slot 3.

use rayon::prelude::*;

use crate::error::{ensure_non_negative, ensure_unit_interval, Error, Result};
use crate::optim;
use crate::swipt_siso::{secrecy_rate, SystemParams};

/// Default τ grid spacing.
pub const DEFAULT_TAU_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JammingMode {
    Off,
    /// HN jamming powers add at the ER.
    Incoherent,
    /// HNs phase-align their AN so amplitudes add at the ER.
    Coherent,
}

impl JammingMode {
    pub const ALL: [JammingMode; 3] = [JammingMode::Off, JammingMode::Incoherent, JammingMode::Coherent];

    pub fn label(&self) -> &'static str {
        match self {
            JammingMode::Off => "off",
            JammingMode::Incoherent => "incoherent",
            JammingMode::Coherent => "coherent",
        }
    }
}

/// Power gains. `g_ai`: H-AP to IN, `g_ie`: IN to ER, and per HN `g_ah[k]`:
/// H-AP to HN k (reciprocal), `g_he[k]`: HN k to ER.
#[derive(Debug, Clone, PartialEq)]
pub struct WpcnTopology {
    pub g_ai: f64,
    pub g_ie: f64,
    pub g_ah: Vec<f64>,
    pub g_he: Vec<f64>,
}

impl WpcnTopology {
    pub fn new(g_ai: f64, g_ie: f64, g_ah: Vec<f64>, g_he: Vec<f64>) -> Result<Self> {
        ensure_non_negative("WpcnTopology::new", "g_ai", g_ai)?;
        ensure_non_negative("WpcnTopology::new", "g_ie", g_ie)?;
        if g_ah.len() != g_he.len() {
            return Err(Error::Dimension {
                op: "WpcnTopology::new",
                expected: g_ah.len(),
                found: g_he.len(),
            });
        }
        for &g in g_ah.iter().chain(&g_he) {
            ensure_non_negative("WpcnTopology::new", "HN gain", g)?;
        }
        Ok(Self { g_ai, g_ie, g_ah, g_he })
    }

    pub fn helpers(&self) -> usize {
        self.g_ah.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WpcnSchedule {
    tau: f64,
    jamming: JammingMode,
}

impl WpcnSchedule {
    pub fn new(tau: f64, jamming: JammingMode) -> Result<Self> {
        ensure_open_unit("WpcnSchedule::new", tau)?;
        Ok(Self { tau, jamming })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn jamming(&self) -> JammingMode {
        self.jamming
    }
}

fn ensure_open_unit(op: &'static str, tau: f64) -> Result<()> {
    if tau > 0.0 && tau < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(op, format!("tau = {tau} must lie in the open interval (0, 1)")))
    }
}

/// Uplink power of a node that harvests for τ and transmits for `1 - τ`.
fn uplink_power(params: &SystemParams, gain: f64, tau: f64) -> f64 {
    params.efficiency() * params.power() * gain * tau / (1.0 - tau)
}

/// `eta * P * g_ai * tau / (1 - tau)`.
pub fn in_uplink_power(tau: f64, params: &SystemParams, g_ai: f64) -> Result<f64> {
    ensure_open_unit("in_uplink_power", tau)?;
    Ok(uplink_power(params, g_ai, tau))
}

/// Aggregate AN power at the ER during the uplink slot.
pub fn jamming_power_at(
    tau: f64,
    params: &SystemParams,
    g_ah: &[f64],
    g_he: &[f64],
    mode: JammingMode,
) -> Result<f64> {
    ensure_open_unit("jamming_power_at", tau)?;
    if g_ah.len() != g_he.len() {
        return Err(Error::Dimension {
            op: "jamming_power_at",
            expected: g_ah.len(),
            found: g_he.len(),
        });
    }
    let received: Vec<f64> = g_ah
        .iter()
        .zip(g_he)
        .map(|(&ah, &he)| uplink_power(params, ah, tau) * he)
        .collect();
    let incoherent: f64 = received.iter().sum();
    Ok(match mode {
        JammingMode::Off => 0.0,
        JammingMode::Incoherent => incoherent,
        // (sum sqrt x_k)^2 expanded, so equal helpers give exactly K times
        // the incoherent power for K = 2 and coherent never falls below it
        JammingMode::Coherent => {
            let mut cross = 0.0;
            for (k, &x) in received.iter().enumerate() {
                for &y in &received[k + 1..] {
                    cross += (x * y).sqrt();
                }
            }
            incoherent + 2.0 * cross
        }
    })
}

/// `(1 - tau) [log2(1 + SNR_AP) - log2(1 + SINR_ER)]^+`.
pub fn uplink_secrecy_rate(schedule: &WpcnSchedule, params: &SystemParams, topo: &WpcnTopology) -> Result<f64> {
    let tau = schedule.tau;
    let p_in = in_uplink_power(tau, params, topo.g_ai)?;
    let jam = jamming_power_at(tau, params, &topo.g_ah, &topo.g_he, schedule.jamming)?;
    let n = params.noise();
    let snr_ap = p_in * topo.g_ai / n;
    let sinr_er = p_in * topo.g_ie / (jam + n);
    Ok((1.0 - tau) * secrecy_rate(snr_ap, sinr_er))
}

/// `(harvested, spent)` energy per unit frame for a node with downlink gain `gain`.
pub fn uplink_energy_balance(tau: f64, params: &SystemParams, gain: f64) -> Result<(f64, f64)> {
    let power = in_uplink_power(tau, params, gain)?;
    let harvested = params.efficiency() * params.power() * gain * tau;
    Ok((harvested, power * (1.0 - tau)))
}

/// `step, 2 step, ...` strictly inside (0, 1).
pub fn tau_grid(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step < 0.5) {
        return Err(Error::domain("tau_grid", format!("step = {step} must lie in (0, 0.5)")));
    }
    let mut grid = optim::grid_points(0.0, 1.0, step)?;
    grid.retain(|&t| t > 0.0 && t < 1.0);
    Ok(grid)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauOptimum {
    pub tau: f64,
    pub rate: f64,
}

/// Pure grid search over τ; ties go to the smaller τ.
pub fn optimize_tau(
    params: &SystemParams,
    topo: &WpcnTopology,
    mode: JammingMode,
    grid: &[f64],
) -> Result<TauOptimum> {
    if grid.is_empty() {
        return Err(Error::domain("optimize_tau", "empty tau grid"));
    }
    for &t in grid {
        ensure_open_unit("optimize_tau", t)?;
    }
    let mut sorted = grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rates: Vec<f64> = sorted
        .par_iter()
        .map(|&tau| {
            let s = WpcnSchedule { tau, jamming: mode };
            uplink_secrecy_rate(&s, params, topo)
        })
        .collect::<Result<_>>()?;
    let best = optim::best_of(
        |t| rates[sorted.binary_search_by(|x| x.total_cmp(&t)).expect("grid point")],
        &sorted,
    )?;
    Ok(TauOptimum {
        tau: best.argmax,
        rate: best.value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearFarReport {
    pub near: TauOptimum,
    pub far: TauOptimum,
}

/// Optimizes τ for a near and a far IN.
pub fn doubly_near_far_report(
    params: &SystemParams,
    near: &WpcnTopology,
    far: &WpcnTopology,
    mode: JammingMode,
    grid: &[f64],
) -> Result<NearFarReport> {
    if far.g_ai > near.g_ai {
        return Err(Error::domain(
            "doubly_near_far_report",
            format!("far IN gain {} exceeds near IN gain {}", far.g_ai, near.g_ai),
        ));
    }
    Ok(NearFarReport {
        near: optimize_tau(params, near, mode, grid)?,
        far: optimize_tau(params, far, mode, grid)?,
    })
}

/// Slot lengths τ1 (harvest), τ2 (IN to HN), τ3 (HN forwards and jams) and
/// the HN's jamming fraction in slot 3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeSlotSchedule {
    tau1: f64,
    tau2: f64,
    tau3: f64,
    beta: f64,
}

impl ThreeSlotSchedule {
    pub fn new(tau1: f64, tau2: f64, tau3: f64, beta: f64) -> Result<Self> {
        if !(tau1 > 0.0 && tau2 > 0.0 && tau3 > 0.0) || (tau1 + tau2 + tau3 - 1.0).abs() > 1e-12 {
            return Err(Error::domain(
                "ThreeSlotSchedule::new",
                format!("slots ({tau1}, {tau2}, {tau3}) must be positive and sum to 1"),
            ));
        }
        ensure_unit_interval("ThreeSlotSchedule::new", "beta", beta)?;
        Ok(Self { tau1, tau2, tau3, beta })
    }

    pub fn slots(&self) -> (f64, f64, f64) {
        (self.tau1, self.tau2, self.tau3)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Gains for the three-slot relay. `g_ai`, `g_ah`: H-AP to IN/HN (downlink
/// charging), `g_ih`: IN to HN, `g_ie`: IN to ER, `g_ha`: HN to H-AP,
/// `g_he`: HN to ER.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeSlotTopology {
    pub g_ai: f64,
    pub g_ah: f64,
    pub g_ih: f64,
    pub g_ie: f64,
    pub g_ha: f64,
    pub g_he: f64,
}

impl ThreeSlotTopology {
    pub fn new(g_ai: f64, g_ah: f64, g_ih: f64, g_ie: f64, g_ha: f64, g_he: f64) -> Result<Self> {
        for (name, g) in [
            ("g_ai", g_ai),
            ("g_ah", g_ah),
            ("g_ih", g_ih),
            ("g_ie", g_ie),
            ("g_ha", g_ha),
            ("g_he", g_he),
        ] {
            ensure_non_negative("ThreeSlotTopology::new", name, g)?;
        }
        Ok(Self { g_ai, g_ah, g_ih, g_ie, g_ha, g_he })
    }
}

/// Per-slot energy use of the three-slot schedule, in units of frame energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeSlotEnergy {
    pub in_harvested: f64,
    pub in_spent: f64,
    pub hn_harvested: f64,
    pub hn_spent: f64,
}

pub fn three_slot_energy(s: &ThreeSlotSchedule, params: &SystemParams, topo: &ThreeSlotTopology) -> ThreeSlotEnergy {
    let charge = params.efficiency() * params.power() * s.tau1;
    let in_harvested = charge * topo.g_ai;
    let hn_harvested = charge * topo.g_ah;
    // transmit powers as used by the rate, times their slot lengths
    let p_in = in_harvested / s.tau2;
    let p_hn = hn_harvested / s.tau3;
    ThreeSlotEnergy {
        in_harvested,
        in_spent: p_in * s.tau2,
        hn_harvested,
        hn_spent: (1.0 - s.beta) * p_hn * s.tau3 + s.beta * p_hn * s.tau3,
    }
}

pub fn three_slot_relay_secrecy_rate(
    s: &ThreeSlotSchedule,
    params: &SystemParams,
    topo: &ThreeSlotTopology,
) -> f64 {
    let n = params.noise();
    let charge = params.efficiency() * params.power() * s.tau1;
    let p_in = charge * topo.g_ai / s.tau2;
    let p_hn = charge * topo.g_ah / s.tau3;
    let log2_1p = |x: f64| x.ln_1p() / std::f64::consts::LN_2;

    let snr_hn = p_in * topo.g_ih / n;
    let sinr_e2 = p_in * topo.g_ie / n;
    let forward = (1.0 - s.beta) * p_hn;
    let jam = s.beta * p_hn;
    let snr_fwd = forward * topo.g_ha / n;
    let sinr_e3 = forward * topo.g_he / (jam * topo.g_he + n);

    let delivered = (s.tau2 * log2_1p(snr_hn)).min(s.tau3 * log2_1p(snr_fwd));
    let leaked = s.tau2 * log2_1p(sinr_e2) + s.tau3 * log2_1p(sinr_e3);
    (delivered - leaked).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeSlotOptimum {
    pub schedule: ThreeSlotSchedule,
    pub rate: f64,
    pub evaluations: usize,
}

fn simplex_betas(op: &'static str, step: f64, beta_step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step < 1.0 / 3.0) {
        return Err(Error::domain(op, format!("simplex step = {step} must lie in (0, 1/3)")));
    }
    optim::grid_points(0.0, 1.0, beta_step)
        .map_err(|_| Error::domain(op, format!("beta step = {beta_step} must be > 0")))
}

/// Best `(tau2, tau3, beta)` for every `tau1 = step, 2 step, ...` on the
/// simplex grid, in increasing `tau1`.
pub fn three_slot_profile(
    params: &SystemParams,
    topo: &ThreeSlotTopology,
    step: f64,
    beta_step: f64,
) -> Result<Vec<ThreeSlotOptimum>> {
    let betas = simplex_betas("three_slot_profile", step, beta_step)?;
    let points = optim::grid_points(0.0, 1.0, step)?;
    let rows: Vec<Option<ThreeSlotOptimum>> = points[1..]
        .par_iter()
        .map(|&tau1| {
            let mut best: Option<(f64, ThreeSlotSchedule)> = None;
            let mut evaluations = 0;
            for &tau2 in &points[1..] {
                let tau3 = 1.0 - tau1 - tau2;
                if tau3 < step * (1.0 - 1e-9) {
                    break;
                }
                for &beta in &betas {
                    let s = ThreeSlotSchedule { tau1, tau2, tau3, beta };
                    let rate = three_slot_relay_secrecy_rate(&s, params, topo);
                    evaluations += 1;
                    if best.is_none_or(|(r, _)| rate > r) {
                        best = Some((rate, s));
                    }
                }
            }
            best.map(|(rate, schedule)| ThreeSlotOptimum {
                schedule,
                rate,
                evaluations,
            })
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

/// Exhaustive search over the simplex interior at spacing `step` and over β
/// at spacing `beta_step` (0 and 1 included). Ties go to the
/// lexicographically smaller `(tau1, tau2, beta)`.
pub fn optimize_three_slot(
    params: &SystemParams,
    topo: &ThreeSlotTopology,
    step: f64,
    beta_step: f64,
) -> Result<ThreeSlotOptimum> {
    simplex_betas("optimize_three_slot", step, beta_step)?;
    let profile = three_slot_profile(params, topo, step, beta_step)?;
    let evaluations = profile.iter().map(|o| o.evaluations).sum();
    let mut best: Option<ThreeSlotOptimum> = None;
    for row in profile {
        if best.is_none_or(|b| row.rate > b.rate) {
            best = Some(row);
        }
    }
    let best = best.ok_or_else(|| Error::domain("optimize_three_slot", "simplex grid is empty"))?;
    Ok(ThreeSlotOptimum { evaluations, ..best })
}
