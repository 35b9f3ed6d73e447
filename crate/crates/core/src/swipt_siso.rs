//! Single-antenna secrecy SWIPT with artificial noise.
//!
//! The H-AP sends the information signal with power `P(1 - alpha)` and an
//! energy signal, which is also artificial noise, with power `P alpha`. A
//! Type-I IN receiver cancels the AN before decoding, and a Type-II receiver
//! cannot. The ER always sees the AN as interference.

use crate::error::{ensure_non_negative, ensure_positive, ensure_unit_interval, Result};
use crate::optim::{self, SearchResult};

/// Coarse α grid step.
pub const ALPHA_COARSE_STEP: f64 = 1e-3;
/// α grid step used when the clamped rate has a zero plateau.
pub const ALPHA_PLATEAU_STEP: f64 = 1e-4;
/// Golden-section tolerance for the final α refinement.
pub const ALPHA_TOLERANCE: f64 = 1e-10;

/// H-AP transmit power, energy conversion efficiency, receiver noise power
/// and AN power-splitting ratio α.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    power: f64,
    efficiency: f64,
    noise: f64,
    alpha: f64,
}

impl SystemParams {
    pub fn new(power_w: f64, efficiency: f64, noise_w: f64, alpha: f64) -> Result<Self> {
        ensure_positive("SystemParams::new", "power", power_w)?;
        ensure_positive("SystemParams::new", "noise", noise_w)?;
        if !(efficiency > 0.0 && efficiency <= 1.0) {
            return Err(crate::Error::domain(
                "SystemParams::new",
                format!("efficiency = {efficiency} must lie in (0, 1]"),
            ));
        }
        ensure_unit_interval("SystemParams::new", "alpha", alpha)?;
        Ok(Self {
            power: power_w,
            efficiency,
            noise: noise_w,
            alpha,
        })
    }

    pub fn with_alpha(self, alpha: f64) -> Result<Self> {
        ensure_unit_interval("SystemParams::with_alpha", "alpha", alpha)?;
        Ok(Self { alpha, ..self })
    }

    pub fn with_power(self, power_w: f64) -> Result<Self> {
        ensure_positive("SystemParams::with_power", "power", power_w)?;
        Ok(Self {
            power: power_w,
            ..self
        })
    }

    /// Unchecked α update for search loops whose grid is already within [0, 1].
    pub(crate) fn at_alpha(self, alpha: f64) -> Self {
        debug_assert!((0.0..=1.0).contains(&alpha));
        Self { alpha, ..self }
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn efficiency(&self) -> f64 {
        self.efficiency
    }

    pub fn noise(&self) -> f64 {
        self.noise
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReceiverType {
    /// Cancels the AN before decoding.
    TypeI,
    /// Sees the AN as interference.
    TypeII,
}

pub fn sinr_in(params: &SystemParams, h_i: f64, rx: ReceiverType) -> f64 {
    match rx {
        ReceiverType::TypeI => params.power * (1.0 - params.alpha) * h_i / params.noise,
        ReceiverType::TypeII => an_limited_sinr(params, h_i),
    }
}

pub fn sinr_eve(params: &SystemParams, h_e: f64) -> f64 {
    an_limited_sinr(params, h_e)
}

/// `P(1-a)h / (Pah + noise)` written as `(1-a) / (a + noise/(Ph))`: every
/// step is monotone under rounding, so a weaker channel never gets a larger
/// SINR even when AN swamps the noise.
fn an_limited_sinr(params: &SystemParams, h: f64) -> f64 {
    (1.0 - params.alpha) / (params.alpha + params.noise / (params.power * h))
}

/// `[log2(1 + sinr_legit) - log2(1 + sinr_eve)]^+`.
pub fn secrecy_rate(sinr_legit: f64, sinr_eve: f64) -> f64 {
    if sinr_legit <= sinr_eve {
        return 0.0;
    }
    // ln_1p keeps precision when both SINRs are tiny
    ((sinr_legit.ln_1p() - sinr_eve.ln_1p()) / std::f64::consts::LN_2).max(0.0)
}

/// `eta * P * h_E`; the AN and information signals both charge the ER, so α drops out.
pub fn harvested_power(params: &SystemParams, h_e: f64) -> f64 {
    params.efficiency * params.power * h_e
}

/// Secrecy rate at `params.alpha()`.
pub fn siso_secrecy_rate(params: &SystemParams, h_i: f64, h_e: f64, rx: ReceiverType) -> f64 {
    secrecy_rate(sinr_in(params, h_i, rx), sinr_eve(params, h_e))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaOptimum {
    pub alpha: f64,
    pub rate: f64,
    pub evaluations: usize,
}

/// Maximizes the secrecy rate over α in [0, 1]; `params.alpha()` is ignored.
///
/// A coarse grid (step 1e-3) locates the optimum. If the clamp is active at
/// any coarse point the grid is redone at step 1e-4. The best grid point is
/// then refined by golden section inside its neighbouring cells. Before the
/// clamp the Type-I rate is concave in α and the Type-II rate is monotone,
/// so the positive part of the objective is a single interval on which the
/// refinement is valid. When every rate is zero the result is α = 0.
pub fn optimize_alpha(
    params: &SystemParams,
    h_i: f64,
    h_e: f64,
    rx: ReceiverType,
) -> Result<AlphaOptimum> {
    ensure_non_negative("optimize_alpha", "h_I", h_i)?;
    ensure_non_negative("optimize_alpha", "h_E", h_e)?;
    let objective = |alpha: f64| siso_secrecy_rate(&params.at_alpha(alpha), h_i, h_e, rx);

    let coarse_points = optim::grid_points(0.0, 1.0, ALPHA_COARSE_STEP)?;
    let coarse_values: Vec<f64> = coarse_points.iter().map(|&a| objective(a)).collect();
    let plateau = coarse_values.iter().any(|&v| v == 0.0);

    let (grid, step) = if plateau {
        let fine = optim::grid_search(objective, 0.0, 1.0, ALPHA_PLATEAU_STEP)?;
        let evaluations = fine.evaluations + coarse_points.len();
        (
            SearchResult {
                evaluations,
                ..fine
            },
            ALPHA_PLATEAU_STEP,
        )
    } else {
        let best = optim::best_of(objective, &coarse_points)?;
        (best, ALPHA_COARSE_STEP)
    };

    if grid.value <= 0.0 {
        return Ok(AlphaOptimum {
            alpha: 0.0,
            rate: 0.0,
            evaluations: grid.evaluations,
        });
    }
    let refined = optim::refine_around(&objective, grid, 0.0, 1.0, step, ALPHA_TOLERANCE)?;
    Ok(AlphaOptimum {
        alpha: refined.argmax,
        rate: refined.value,
        evaluations: refined.evaluations,
    })
}
