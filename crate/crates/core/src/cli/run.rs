use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::config::{ChannelKind, Experiment, ScenarioConfig};
use super::table::{Cell, ResultTable};
use super::CliError;
use crate::channel::{dbm_to_watts, los_channel, rayleigh_channel, ChannelVector, NodePlacement, PathLossModel};
use crate::optim::grid_points;
use crate::relay::{classify_mode, schedule_secrecy_rate, HelperSchedule, RelayProtocol, RelayTopology};
use crate::swipt_miso::{rate_energy_region, uniform_grid, BeamStrategy};
use crate::swipt_siso::{optimize_alpha, siso_secrecy_rate, ReceiverType, SystemParams};
use crate::wpcn::{
    tau_grid, three_slot_profile, uplink_secrecy_rate, JammingMode, ThreeSlotTopology, WpcnSchedule, WpcnTopology,
};
use crate::Result;

/// Runs `config` on a dedicated pool of `threads` workers (rayon's default
/// when `None`). Output does not depend on the thread count.
pub fn run_with_threads(config: &ScenarioConfig, threads: Option<usize>) -> std::result::Result<ResultTable, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Io(std::io::Error::other(e)))?;
    pool.install(|| run(config))
}

/// Validates `config` and runs its experiment on the current rayon pool.
pub fn run(config: &ScenarioConfig) -> std::result::Result<ResultTable, CliError> {
    let violations = config.validate();
    if !violations.is_empty() {
        return Err(CliError::Invalid(violations));
    }
    let digest = hex::encode(Sha256::digest(config.canonical().as_bytes()));
    let header = |columns: &[&str]| {
        ResultTable::new(columns)
            .with_meta("secwipt_version", env!("CARGO_PKG_VERSION"))
            .with_meta("experiment", config.experiment.name())
            .with_meta("seed", config.seed)
            .with_meta("config_sha256", &digest)
    };
    let table = match config.experiment {
        Experiment::FigSiso => fig_siso(config, header(&["P_dBm", "R_noAN", "R_typeII", "R_typeI", "alpha_star"])),
        Experiment::MisoRegion => miso_region(config, header(&["strategy", "Q_watts", "R_s"])),
        Experiment::RelaySweep => relay_sweep(config, header(&["gamma", "beta", "mode", "R_AF", "R_DF"])),
        Experiment::WpcnSweep => wpcn_sweep(config, header(&["tau", "R_off", "R_incoherent", "R_coherent"])),
        Experiment::WpcnThreeSlot => three_slot(config, header(&["tau1", "tau2", "tau3", "beta_hn", "R_s"])),
    }?;
    Ok(table)
}

fn system_params(config: &ScenarioConfig, alpha: f64) -> Result<SystemParams> {
    let p = &config.params;
    SystemParams::new(dbm_to_watts(p.power_dbm), p.efficiency, dbm_to_watts(p.noise_dbm), alpha)
}

fn path_loss(config: &ScenarioConfig) -> Result<PathLossModel> {
    PathLossModel::new(config.params.path_loss_exponent, config.params.reference_gain)
}

fn downlink_channels(config: &ScenarioConfig, antennas: usize) -> Result<(ChannelVector, ChannelVector)> {
    let g = &config.geometry;
    let model = path_loss(config)?;
    match g.channel {
        ChannelKind::Los => Ok((
            los_channel(&NodePlacement::new(g.in_distance_m, g.in_angle_deg)?, antennas, &model)?,
            los_channel(&NodePlacement::new(g.er_distance_m, g.er_angle_deg)?, antennas, &model)?,
        )),
        ChannelKind::Rayleigh => Ok((
            rayleigh_channel(config.seed, antennas, model.gain(g.in_distance_m)?)?,
            rayleigh_channel(config.seed.wrapping_add(1), antennas, model.gain(g.er_distance_m)?)?,
        )),
    }
}

fn fig_siso(config: &ScenarioConfig, mut table: ResultTable) -> Result<ResultTable> {
    let (h_i, h_e) = downlink_channels(config, 1)?;
    let (h_i, h_e) = (h_i.power_gain(), h_e.power_gain());
    let base = system_params(config, 0.0)?;
    let s = &config.sweep;
    let powers: Vec<f64> = (0..s.points)
        .map(|i| match s.points {
            1 => s.power_min_dbm,
            n => s.power_min_dbm + (s.power_max_dbm - s.power_min_dbm) * i as f64 / (n - 1) as f64,
        })
        .collect();
    let rows: Vec<Vec<Cell>> = powers
        .par_iter()
        .map(|&dbm| {
            let p = base.with_power(dbm_to_watts(dbm))?;
            let no_an = siso_secrecy_rate(&p, h_i, h_e, ReceiverType::TypeI);
            let type_ii = optimize_alpha(&p, h_i, h_e, ReceiverType::TypeII)?;
            let type_i = optimize_alpha(&p, h_i, h_e, ReceiverType::TypeI)?;
            Ok(vec![
                dbm.into(),
                no_an.into(),
                type_ii.rate.into(),
                type_i.rate.into(),
                type_i.alpha.into(),
            ])
        })
        .collect::<Result<_>>()?;
    for row in rows {
        table.push(row)?;
    }
    Ok(table)
}

fn miso_region(config: &ScenarioConfig, mut table: ResultTable) -> Result<ResultTable> {
    let (h_i, h_e) = downlink_channels(config, config.geometry.antennas)?;
    let params = system_params(config, 0.0)?;
    let grid = uniform_grid(config.miso.alpha_samples);
    for strategy in BeamStrategy::ALL {
        let region = rate_energy_region(&params, &h_i, &h_e, strategy, strategy.receiver(), &grid)?;
        for point in region {
            table.push(vec![strategy.label().into(), point.energy.into(), point.rate.into()])?;
        }
    }
    Ok(table)
}

fn distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

const ORIGIN: [f64; 2] = [0.0, 0.0];

fn relay_sweep(config: &ScenarioConfig, mut table: ResultTable) -> Result<ResultTable> {
    let r = &config.relay;
    let model = path_loss(config)?;
    let g = |a, b| model.gain(distance(a, b));
    let topo = RelayTopology::new(
        g(ORIGIN, r.hn_position_m)?,
        g(r.hn_position_m, r.in_position_m)?,
        g(r.hn_position_m, r.er_position_m)?,
        g(ORIGIN, r.in_position_m)?,
        g(ORIGIN, r.er_position_m)?,
    )?;
    let params = system_params(config, r.alpha)?;
    let grid = grid_points(0.0, 1.0, r.step)?;
    let rows: Vec<Vec<Vec<Cell>>> = grid
        .par_iter()
        .map(|&gamma| {
            grid.iter()
                .map(|&beta| {
                    let af = HelperSchedule::new(gamma, beta, RelayProtocol::AmplifyForward)?;
                    let df = HelperSchedule::new(gamma, beta, RelayProtocol::DecodeForward)?;
                    let mode = classify_mode(&af).map_or("none", |m| m.label());
                    Ok(vec![
                        gamma.into(),
                        beta.into(),
                        mode.into(),
                        schedule_secrecy_rate(&params, &topo, &af).into(),
                        schedule_secrecy_rate(&params, &topo, &df).into(),
                    ])
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    for row in rows.into_iter().flatten() {
        table.push(row)?;
    }
    Ok(table)
}

fn wpcn_topology(config: &ScenarioConfig) -> Result<WpcnTopology> {
    let w = &config.wpcn;
    let model = path_loss(config)?;
    let g = |a, b| model.gain(distance(a, b));
    WpcnTopology::new(
        g(ORIGIN, w.in_position_m)?,
        g(w.in_position_m, w.er_position_m)?,
        w.hn_positions_m.iter().map(|&hn| g(ORIGIN, hn)).collect::<Result<_>>()?,
        w.hn_positions_m.iter().map(|&hn| g(hn, w.er_position_m)).collect::<Result<_>>()?,
    )
}

fn wpcn_sweep(config: &ScenarioConfig, mut table: ResultTable) -> Result<ResultTable> {
    let topo = wpcn_topology(config)?;
    let params = system_params(config, 0.0)?;
    let taus = match &config.wpcn.taus {
        Some(taus) => taus.clone(),
        None => tau_grid(config.wpcn.tau_step)?,
    };
    let rows: Vec<Vec<Cell>> = taus
        .par_iter()
        .map(|&tau| {
            let mut row = vec![Cell::Num(tau)];
            for mode in JammingMode::ALL {
                let rate = uplink_secrecy_rate(&WpcnSchedule::new(tau, mode)?, &params, &topo)?;
                row.push(rate.into());
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    for row in rows {
        table.push(row)?;
    }
    Ok(table)
}

fn three_slot(config: &ScenarioConfig, mut table: ResultTable) -> Result<ResultTable> {
    let w = &config.wpcn;
    let model = path_loss(config)?;
    let g = |a, b| model.gain(distance(a, b));
    let hn = w.hn_positions_m[0];
    let topo = ThreeSlotTopology::new(
        g(ORIGIN, w.in_position_m)?,
        g(ORIGIN, hn)?,
        g(w.in_position_m, hn)?,
        g(w.in_position_m, w.er_position_m)?,
        g(hn, ORIGIN)?,
        g(hn, w.er_position_m)?,
    )?;
    let params = system_params(config, 0.0)?;
    for best in three_slot_profile(&params, &topo, w.simplex_step, w.beta_step)? {
        let (t1, t2, t3) = best.schedule.slots();
        table.push(vec![
            t1.into(),
            t2.into(),
            t3.into(),
            best.schedule.beta().into(),
            best.rate.into(),
        ])?;
    }
    Ok(table)
}
