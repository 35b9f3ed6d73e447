use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    /// Single-antenna secrecy rate versus transmit power.
    FigSiso,
    /// Multi-antenna rate-energy region per beam strategy.
    MisoRegion,
    /// Helper schedule grid with AF and DF rates.
    RelaySweep,
    /// Uplink secrecy rate versus τ for each jamming mode.
    WpcnSweep,
    /// Best three-slot relaying schedule per harvesting time.
    WpcnThreeSlot,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::FigSiso => "fig-siso",
            Experiment::MisoRegion => "miso-region",
            Experiment::RelaySweep => "relay-sweep",
            Experiment::WpcnSweep => "wpcn-sweep",
            Experiment::WpcnThreeSlot => "wpcn-three-slot",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelKind {
    /// Deterministic path loss with a half-wavelength ULA steering vector.
    #[default]
    Los,
    /// Seeded Rayleigh fading around the path-loss gain.
    Rayleigh,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Params {
    pub power_dbm: f64,
    pub efficiency: f64,
    pub noise_dbm: f64,
    pub path_loss_exponent: f64,
    pub reference_gain: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            power_dbm: 30.0,
            efficiency: 0.5,
            noise_dbm: -80.0,
            path_loss_exponent: 3.0,
            reference_gain: 1.0,
        }
    }
}

/// H-AP to IN/ER placements for the downlink experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Geometry {
    pub in_distance_m: f64,
    pub in_angle_deg: f64,
    pub er_distance_m: f64,
    pub er_angle_deg: f64,
    pub antennas: usize,
    pub channel: ChannelKind,
}

impl Default for Geometry {
    fn default() -> Self {
        Self {
            in_distance_m: 20.0,
            in_angle_deg: 0.0,
            er_distance_m: 2.0,
            er_angle_deg: 60.0,
            antennas: 4,
            channel: ChannelKind::Los,
        }
    }
}

/// Transmit power sweep of `fig-siso`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub power_min_dbm: f64,
    pub power_max_dbm: f64,
    pub points: usize,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            power_min_dbm: 0.0,
            power_max_dbm: 30.0,
            points: 31,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MisoSection {
    pub alpha_samples: usize,
}

impl Default for MisoSection {
    fn default() -> Self {
        Self {
            alpha_samples: crate::swipt_miso::DEFAULT_ALPHA_SAMPLES,
        }
    }
}

/// Planar positions in metres with the H-AP at the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RelaySection {
    pub alpha: f64,
    pub in_position_m: [f64; 2],
    pub er_position_m: [f64; 2],
    pub hn_position_m: [f64; 2],
    pub step: f64,
}

impl Default for RelaySection {
    fn default() -> Self {
        Self {
            alpha: 0.0,
            in_position_m: [20.0, 0.0],
            er_position_m: [-2.0, 0.0],
            hn_position_m: [-3.0, 0.0],
            step: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WpcnSection {
    pub in_position_m: [f64; 2],
    pub er_position_m: [f64; 2],
    pub hn_positions_m: Vec<[f64; 2]>,
    pub tau_step: f64,
    /// Explicit τ values; overrides `tau_step` when present.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub taus: Option<Vec<f64>>,
    pub simplex_step: f64,
    pub beta_step: f64,
}

impl Default for WpcnSection {
    fn default() -> Self {
        Self {
            in_position_m: [10.0, 0.0],
            er_position_m: [7.0, 0.0],
            hn_positions_m: vec![[7.0, 1.5], [7.0, -1.5]],
            tau_step: crate::wpcn::DEFAULT_TAU_STEP,
            taus: None,
            simplex_step: 0.01,
            beta_step: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub geometry: Geometry,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub miso: MisoSection,
    #[serde(default)]
    pub relay: RelaySection,
    #[serde(default)]
    pub wpcn: WpcnSection,
}

/// A config field and the bound it breaks.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

struct Checker(Vec<Violation>);

impl Checker {
    fn fail(&mut self, field: impl Into<String>, message: impl Into<String>) {
        self.0.push(Violation {
            field: field.into(),
            message: message.into(),
        });
    }

    fn finite(&mut self, field: &str, x: f64) -> bool {
        if !x.is_finite() {
            self.fail(field, format!("{x} must be finite"));
            return false;
        }
        true
    }

    fn positive(&mut self, field: &str, x: f64) {
        if !(x.is_finite() && x > 0.0) {
            self.fail(field, format!("{x} must be finite and > 0"));
        }
    }

    fn closed_unit(&mut self, field: &str, x: f64) {
        if !(0.0..=1.0).contains(&x) {
            self.fail(field, format!("{x} must lie in [0, 1]"));
        }
    }

    fn open_interval(&mut self, field: &str, x: f64, lo: f64, hi: f64) {
        if !(x > lo && x < hi) {
            self.fail(field, format!("{x} must lie in the open interval ({lo}, {hi})"));
        }
    }

    fn position(&mut self, field: &str, p: [f64; 2]) {
        if !(p[0].is_finite() && p[1].is_finite()) {
            self.fail(field, "coordinates must be finite");
        } else if p[0].hypot(p[1]) == 0.0 {
            self.fail(field, "must differ from the H-AP position (0, 0)");
        }
    }

    fn apart(&mut self, field: &str, p: [f64; 2], other: &str, q: [f64; 2]) {
        if p == q {
            self.fail(field, format!("must differ from {other}"));
        }
    }
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario configs always serialize")
    }

    /// Config text that identifies the results: everything except the
    /// output path and the seed, which is reported on its own.
    pub fn canonical(&self) -> String {
        Self {
            seed: 0,
            output: None,
            ..self.clone()
        }
        .to_toml()
    }

    /// Every precondition `run` would trip over, with field paths.
    pub fn validate(&self) -> Vec<Violation> {
        let mut c = Checker(Vec::new());
        let p = &self.params;
        for (field, dbm) in [("params.power_dbm", p.power_dbm), ("params.noise_dbm", p.noise_dbm)] {
            let watts = crate::channel::dbm_to_watts(dbm);
            if !(watts.is_finite() && watts > 0.0) {
                c.fail(field, format!("{dbm} dBm is {watts} W; must be finite and > 0 W"));
            }
        }
        if !(p.efficiency > 0.0 && p.efficiency <= 1.0) {
            c.fail("params.efficiency", format!("{} must lie in (0, 1]", p.efficiency));
        }
        c.positive("params.path_loss_exponent", p.path_loss_exponent);
        c.positive("params.reference_gain", p.reference_gain);

        match self.experiment {
            Experiment::FigSiso => {
                self.check_geometry(&mut c, 1);
                let s = &self.sweep;
                let ends = c.finite("sweep.power_min_dbm", s.power_min_dbm)
                    & c.finite("sweep.power_max_dbm", s.power_max_dbm);
                if ends && s.power_min_dbm > s.power_max_dbm {
                    c.fail("sweep.power_max_dbm", "must be >= sweep.power_min_dbm");
                }
                if s.points == 0 {
                    c.fail("sweep.points", "must be >= 1");
                } else if s.points == 1 && s.power_min_dbm != s.power_max_dbm {
                    c.fail("sweep.points", "a single point needs power_min_dbm = power_max_dbm");
                }
            }
            Experiment::MisoRegion => {
                self.check_geometry(&mut c, 2);
                if self.miso.alpha_samples < 2 {
                    c.fail("miso.alpha_samples", "must be >= 2");
                }
                if c.0.is_empty() && self.geometry.channel == ChannelKind::Los && !self.zero_forcing_feasible() {
                    c.fail(
                        "geometry.er_angle_deg",
                        "IN and ER steering vectors are parallel, so zero forcing is impossible",
                    );
                }
            }
            Experiment::RelaySweep => {
                let r = &self.relay;
                c.closed_unit("relay.alpha", r.alpha);
                c.position("relay.in_position_m", r.in_position_m);
                c.position("relay.er_position_m", r.er_position_m);
                c.position("relay.hn_position_m", r.hn_position_m);
                c.apart("relay.hn_position_m", r.hn_position_m, "relay.in_position_m", r.in_position_m);
                c.apart("relay.hn_position_m", r.hn_position_m, "relay.er_position_m", r.er_position_m);
                if !(r.step > 0.0 && r.step <= 1.0) {
                    c.fail("relay.step", format!("{} must lie in (0, 1]", r.step));
                }
            }
            Experiment::WpcnSweep => {
                self.check_wpcn_nodes(&mut c);
                match &self.wpcn.taus {
                    Some(taus) if taus.is_empty() => c.fail("wpcn.taus", "must not be empty"),
                    Some(taus) => {
                        for (i, &t) in taus.iter().enumerate() {
                            c.open_interval(&format!("wpcn.taus[{i}]"), t, 0.0, 1.0);
                        }
                    }
                    None => c.open_interval("wpcn.tau_step", self.wpcn.tau_step, 0.0, 0.5),
                }
            }
            Experiment::WpcnThreeSlot => {
                self.check_wpcn_nodes(&mut c);
                if self.wpcn.hn_positions_m.len() != 1 {
                    c.fail(
                        "wpcn.hn_positions_m",
                        format!("three-slot relaying needs exactly 1 HN, got {}", self.wpcn.hn_positions_m.len()),
                    );
                }
                c.open_interval("wpcn.simplex_step", self.wpcn.simplex_step, 0.0, 1.0 / 3.0);
                if !(self.wpcn.beta_step > 0.0 && self.wpcn.beta_step <= 1.0) {
                    c.fail("wpcn.beta_step", format!("{} must lie in (0, 1]", self.wpcn.beta_step));
                }
            }
        }
        c.0
    }

    fn zero_forcing_feasible(&self) -> bool {
        use crate::beamforming::zf_beam;
        use crate::channel::{los_channel, NodePlacement, PathLossModel};
        let g = &self.geometry;
        let channels = PathLossModel::new(self.params.path_loss_exponent, self.params.reference_gain)
            .and_then(|m| {
                let h_i = los_channel(&NodePlacement::new(g.in_distance_m, g.in_angle_deg)?, g.antennas, &m)?;
                let h_e = los_channel(&NodePlacement::new(g.er_distance_m, g.er_angle_deg)?, g.antennas, &m)?;
                Ok((h_i, h_e))
            });
        matches!(channels, Ok((h_i, h_e)) if zf_beam(&h_i, &h_e).is_ok() && zf_beam(&h_e, &h_i).is_ok())
    }

    fn check_geometry(&self, c: &mut Checker, min_antennas: usize) {
        let g = &self.geometry;
        c.positive("geometry.in_distance_m", g.in_distance_m);
        c.positive("geometry.er_distance_m", g.er_distance_m);
        c.finite("geometry.in_angle_deg", g.in_angle_deg);
        c.finite("geometry.er_angle_deg", g.er_angle_deg);
        if g.antennas < min_antennas {
            c.fail("geometry.antennas", format!("{} must be >= {min_antennas}", g.antennas));
        }
    }

    fn check_wpcn_nodes(&self, c: &mut Checker) {
        let w = &self.wpcn;
        c.position("wpcn.in_position_m", w.in_position_m);
        c.position("wpcn.er_position_m", w.er_position_m);
        c.apart("wpcn.er_position_m", w.er_position_m, "wpcn.in_position_m", w.in_position_m);
        for (i, &hn) in w.hn_positions_m.iter().enumerate() {
            let field = format!("wpcn.hn_positions_m[{i}]");
            c.position(&field, hn);
            c.apart(&field, hn, "wpcn.er_position_m", w.er_position_m);
            c.apart(&field, hn, "wpcn.in_position_m", w.in_position_m);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> ScenarioConfig {
        ScenarioConfig::from_toml(text).unwrap()
    }

    #[test]
    fn defaults_are_valid_for_every_experiment() {
        for name in ["fig-siso", "miso-region", "relay-sweep", "wpcn-sweep"] {
            let c = cfg(&format!("experiment = \"{name}\""));
            assert_eq!(c.validate(), vec![], "{name}");
        }
        let c = cfg("experiment = \"wpcn-three-slot\"\n[wpcn]\nhn_positions_m = [[5.0, 1.0]]");
        assert_eq!(c.validate(), vec![]);
    }

    #[test]
    fn alpha_outside_unit_interval() {
        let v = cfg("experiment = \"relay-sweep\"\n[relay]\nalpha = 1.2").validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].field, "relay.alpha");
        assert!(v[0].message.contains("[0, 1]"));
    }

    #[test]
    fn tau_zero_names_open_interval() {
        let v = cfg("experiment = \"wpcn-sweep\"\n[wpcn]\ntaus = [0.5, 0.0]").validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].field, "wpcn.taus[1]");
        assert!(v[0].message.contains("open interval (0, 1)"));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(ScenarioConfig::from_toml("experiment = \"fig-siso\"\nbogus = 1").is_err());
        assert!(ScenarioConfig::from_toml("experiment = \"fig-siso\"\n[params]\npower_w = 1").is_err());
        assert!(ScenarioConfig::from_toml("experiment = \"fig-3\"").is_err());
    }

    #[test]
    fn parallel_steering_vectors_flagged() {
        let v = cfg("experiment = \"miso-region\"\n[geometry]\ner_angle_deg = 180.0").validate();
        assert_eq!(v[0].field, "geometry.er_angle_deg");
    }

    #[test]
    fn canonical_ignores_seed_and_output() {
        let a = cfg("experiment = \"fig-siso\"\nseed = 3\noutput = \"a.csv\"");
        let b = cfg("experiment = \"fig-siso\"\nseed = 9");
        assert_eq!(a.canonical(), b.canonical());
        assert_eq!(cfg(&a.to_toml()), a);
    }
}
