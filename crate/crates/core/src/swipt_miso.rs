//! Multi-antenna secrecy SWIPT.
//!
//! The information beam and the energy/AN beam are fixed heuristics: MRT and
//! rank-one zero forcing. The power split α is swept to trace a rate-energy
//! region.

use crate::beamforming::{coupling_power, mrt_beam, zf_beam, BeamPair};
use crate::channel::ChannelVector;
use crate::error::{Error, Result};
use crate::optim::{pareto_front, RateEnergyPoint};
use crate::swipt_siso::{secrecy_rate, ReceiverType, SystemParams};

/// Default number of α samples for region construction.
pub const DEFAULT_ALPHA_SAMPLES: usize = 201;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BeamStrategy {
    /// `w_I = MRT(h_I)`, `w_E = MRT(h_E)`. Intended for Type-I INs.
    AnTypeI,
    /// `w_I = MRT(h_I)`, `w_E` zero-forced away from `h_I`. Intended for Type-II INs.
    AnTypeII,
    /// No AN. Time-shares between a secrecy-only corner (`w_I` zero-forced
    /// away from `h_E`, α = 0) and an energy-only corner (MRT to `h_E`, α = 1).
    NoAnTimeSharing,
}

impl BeamStrategy {
    pub const ALL: [BeamStrategy; 3] = [
        BeamStrategy::AnTypeI,
        BeamStrategy::AnTypeII,
        BeamStrategy::NoAnTimeSharing,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            BeamStrategy::AnTypeI => "an_type_i",
            BeamStrategy::AnTypeII => "an_type_ii",
            BeamStrategy::NoAnTimeSharing => "no_an_time_sharing",
        }
    }

    /// Receiver type the strategy is designed for.
    pub fn receiver(&self) -> ReceiverType {
        match self {
            BeamStrategy::AnTypeI => ReceiverType::TypeI,
            _ => ReceiverType::TypeII,
        }
    }
}

/// The four beam/channel couplings that determine every SINR and the harvested power.
#[derive(Debug, Clone, Copy)]
struct Couplings {
    in_info: f64,
    in_energy: f64,
    er_info: f64,
    er_energy: f64,
}

fn couplings(h_i: &ChannelVector, h_e: &ChannelVector, beams: &BeamPair) -> Result<Couplings> {
    if h_i.len() != h_e.len() {
        return Err(Error::Dimension {
            op: "miso_sinrs",
            expected: h_i.len(),
            found: h_e.len(),
        });
    }
    Ok(Couplings {
        in_info: coupling_power(h_i, &beams.info)?,
        in_energy: coupling_power(h_i, &beams.energy)?,
        er_info: coupling_power(h_e, &beams.info)?,
        er_energy: coupling_power(h_e, &beams.energy)?,
    })
}

fn sinrs_from(params: &SystemParams, c: &Couplings, rx: ReceiverType) -> (f64, f64) {
    let (p, a, n) = (params.power(), params.alpha(), params.noise());
    let info = p * (1.0 - a);
    let legit = match rx {
        ReceiverType::TypeI => info * c.in_info / n,
        ReceiverType::TypeII => info * c.in_info / (p * a * c.in_energy + n),
    };
    let eve = info * c.er_info / (p * a * c.er_energy + n);
    (legit, eve)
}

fn point_from(params: &SystemParams, c: &Couplings, rx: ReceiverType) -> RateEnergyPoint {
    let (legit, eve) = sinrs_from(params, c, rx);
    let (p, a) = (params.power(), params.alpha());
    let energy = params.efficiency() * (p * (1.0 - a) * c.er_info + p * a * c.er_energy);
    RateEnergyPoint::new(secrecy_rate(legit, eve), energy)
}

/// `(gamma_I, gamma_E)` for the given beams and `params.alpha()`.
pub fn miso_sinrs(
    params: &SystemParams,
    h_i: &ChannelVector,
    h_e: &ChannelVector,
    beams: &BeamPair,
    rx: ReceiverType,
) -> Result<(f64, f64)> {
    Ok(sinrs_from(params, &couplings(h_i, h_e, beams)?, rx))
}

/// Beam pair for `strategy`.
///
/// For [`BeamStrategy::NoAnTimeSharing`] the pair is `(ZF(h_I avoiding h_E),
/// MRT(h_E))`: evaluated at α = 0 it is the secrecy-only corner, and at α = 1
/// the energy-only corner.
pub fn design_beams(
    h_i: &ChannelVector,
    h_e: &ChannelVector,
    strategy: BeamStrategy,
) -> Result<BeamPair> {
    match strategy {
        BeamStrategy::AnTypeI => BeamPair::new(mrt_beam(h_i)?, mrt_beam(h_e)?),
        BeamStrategy::AnTypeII => BeamPair::new(mrt_beam(h_i)?, zf_beam(h_e, h_i)?),
        BeamStrategy::NoAnTimeSharing => BeamPair::new(zf_beam(h_i, h_e)?, mrt_beam(h_e)?),
    }
}

pub fn rate_energy_point(
    params: &SystemParams,
    h_i: &ChannelVector,
    h_e: &ChannelVector,
    beams: &BeamPair,
    rx: ReceiverType,
) -> Result<RateEnergyPoint> {
    Ok(point_from(params, &couplings(h_i, h_e, beams)?, rx))
}

/// Secrecy-only corner (A) and energy-only corner (B) of the no-AN baseline.
pub fn time_sharing_corners(
    params: &SystemParams,
    h_i: &ChannelVector,
    h_e: &ChannelVector,
) -> Result<(RateEnergyPoint, RateEnergyPoint)> {
    let beams = design_beams(h_i, h_e, BeamStrategy::NoAnTimeSharing)?;
    let c = couplings(h_i, h_e, &beams)?;
    let secrecy = point_from(&params.with_alpha(0.0)?, &c, ReceiverType::TypeI);
    let energy = point_from(&params.with_alpha(1.0)?, &c, ReceiverType::TypeI);
    Ok((secrecy, energy))
}

/// `n` evenly spaced samples of [0, 1], both ends included.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    }
}

/// Rate-energy region for `strategy`; `params.alpha()` is ignored.
///
/// AN strategies sweep α over `grid` and return the Pareto front. The no-AN
/// baseline returns `theta * A + (1 - theta) * B` for each `theta` in `grid`,
/// in grid order, where A and B are the [`time_sharing_corners`].
pub fn rate_energy_region(
    params: &SystemParams,
    h_i: &ChannelVector,
    h_e: &ChannelVector,
    strategy: BeamStrategy,
    rx: ReceiverType,
    grid: &[f64],
) -> Result<Vec<RateEnergyPoint>> {
    if let Some(&bad) = grid.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::domain(
            "rate_energy_region",
            format!("grid value {bad} outside [0, 1]"),
        ));
    }
    if strategy == BeamStrategy::NoAnTimeSharing {
        let (a, b) = time_sharing_corners(params, h_i, h_e)?;
        return Ok(grid
            .iter()
            .map(|&theta| {
                RateEnergyPoint::new(
                    theta * a.rate + (1.0 - theta) * b.rate,
                    theta * a.energy + (1.0 - theta) * b.energy,
                )
            })
            .collect());
    }
    let beams = design_beams(h_i, h_e, strategy)?;
    let c = couplings(h_i, h_e, &beams)?;
    let mut alphas = grid.to_vec();
    alphas.sort_by(f64::total_cmp);
    let points: Vec<RateEnergyPoint> = alphas
        .iter()
        .map(|&alpha| point_from(&params.at_alpha(alpha), &c, rx))
        .collect();
    Ok(pareto_front(&points))
}

/// Best rate reachable with harvested power at least `energy`, time-sharing
/// between adjacent points of `front` (a Pareto front sorted by energy).
///
/// Returns `None` when `energy` exceeds every point of the front.
pub fn frontier_rate_at(front: &[RateEnergyPoint], energy: f64) -> Option<f64> {
    let first = front.first()?;
    if energy <= first.energy {
        return Some(first.rate);
    }
    front.windows(2).find_map(|w| {
        let (lo, hi) = (w[0], w[1]);
        (energy > lo.energy && energy <= hi.energy).then(|| {
            let t = (energy - lo.energy) / (hi.energy - lo.energy);
            lo.rate + t * (hi.rate - lo.rate)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beamforming::inner;
    use crate::channel::{los_channel, rayleigh_channel, NodePlacement, PathLossModel};
    use crate::Complex64;
    use proptest::prelude::*;

    fn fig5_channels() -> (ChannelVector, ChannelVector) {
        let m = PathLossModel::default();
        let h_i = los_channel(&NodePlacement::new(20.0, 0.0).unwrap(), 4, &m).unwrap();
        let h_e = los_channel(&NodePlacement::new(2.0, 60.0).unwrap(), 4, &m).unwrap();
        (h_i, h_e)
    }

    fn params(p: f64, alpha: f64) -> SystemParams {
        SystemParams::new(p, 0.5, 1e-11, alpha).unwrap()
    }

    fn cv(v: &[(f64, f64)]) -> ChannelVector {
        ChannelVector::new(v.iter().map(|&(r, i)| Complex64::new(r, i)).collect()).unwrap()
    }

    #[test]
    fn orthogonal_channels_decouple() {
        let h_i = cv(&[(1.0, 0.0), (0.0, 0.0)]);
        let h_e = cv(&[(0.0, 0.0), (0.5, 0.0)]);
        let beams = design_beams(&h_i, &h_e, BeamStrategy::AnTypeI).unwrap();
        let prm = params(1.0, 0.4);
        let (g1, ge) = miso_sinrs(&prm, &h_i, &h_e, &beams, ReceiverType::TypeI).unwrap();
        let (g2, _) = miso_sinrs(&prm, &h_i, &h_e, &beams, ReceiverType::TypeII).unwrap();
        assert_eq!(ge, 0.0);
        assert_eq!(g1, g2);
    }

    #[test]
    fn receiver_types_coincide_without_an() {
        let (h_i, h_e) = fig5_channels();
        let beams = design_beams(&h_i, &h_e, BeamStrategy::AnTypeII).unwrap();
        let prm = params(1.0, 0.0);
        let a = miso_sinrs(&prm, &h_i, &h_e, &beams, ReceiverType::TypeI).unwrap();
        let b = miso_sinrs(&prm, &h_i, &h_e, &beams, ReceiverType::TypeII).unwrap();
        assert_eq!(a, b);
    }

    /// Independent oracle for the reference MISO geometry (N = 4, IN at 20 m
    /// broadside, ER at 2 m and 60 degrees) with AN Type-I beams, written with
    /// explicit trigonometry. Returns `(gamma_I, gamma_E, rate, harvested)`.
    fn reference_oracle(p: f64, alpha: f64) -> (f64, f64, f64, f64) {
        let x = std::f64::consts::PI * 60f64.to_radians().sin();
        let (gi, ge) = (20f64.powi(-3), 2f64.powi(-3));
        // MRT couplings are the channel gains; the cross coupling
        // |h_E^H w_I|^2 is g_E |sum_n e^{j x n}|^2 / 16
        let (mut re, mut im) = (0.0, 0.0);
        for n in 0..4 {
            re += (x * n as f64).cos();
            im += (x * n as f64).sin();
        }
        let rho2 = (re * re + im * im) / 16.0;
        let noise = 1e-11;
        let legit = p * (1.0 - alpha) * gi / noise;
        let eve = p * (1.0 - alpha) * ge * rho2 / (p * alpha * ge + noise);
        let rate = ((1.0 + legit).log2() - (1.0 + eve).log2()).max(0.0);
        let q = 0.5 * (p * (1.0 - alpha) * ge * rho2 + p * alpha * ge);
        (legit, eve, rate, q)
    }

    #[test]
    fn fig5_geometry_matches_oracle() {
        let (h_i, h_e) = fig5_channels();
        let beams = design_beams(&h_i, &h_e, BeamStrategy::AnTypeI).unwrap();
        for (p, alpha) in [(1.0, 0.5), (1e-2, 0.2), (1e-3, 0.9)] {
            let prm = params(p, alpha);
            let (gi, ge) = miso_sinrs(&prm, &h_i, &h_e, &beams, ReceiverType::TypeI).unwrap();
            let (oi, oe, orate, oq) = reference_oracle(p, alpha);
            assert!((gi - oi).abs() <= 1e-12 * oi);
            assert!((ge - oe).abs() <= 1e-12 * oe.max(1e-300));
            let pt = rate_energy_point(&prm, &h_i, &h_e, &beams, ReceiverType::TypeI).unwrap();
            assert!((pt.rate - orate).abs() < 1e-9);
            assert!((pt.energy - oq).abs() <= 1e-12 * oq);
        }
    }

    #[test]
    fn type_two_beam_is_zero_forced() {
        let (h_i, h_e) = fig5_channels();
        let beams = design_beams(&h_i, &h_e, BeamStrategy::AnTypeII).unwrap();
        assert!(coupling_power(&h_i, &beams.energy).unwrap() <= 1e-12 * h_i.power_gain());
    }

    #[test]
    fn time_sharing_secrecy_corner_leaks_nothing() {
        let (h_i, h_e) = fig5_channels();
        let beams = design_beams(&h_i, &h_e, BeamStrategy::NoAnTimeSharing).unwrap();
        assert!(coupling_power(&h_e, &beams.info).unwrap() <= 1e-12 * h_e.power_gain());
        let prm = params(1.0, 0.0);
        let (a, b) = time_sharing_corners(&prm, &h_i, &h_e).unwrap();
        assert!(a.energy <= 1e-12 * 0.5 * h_e.power_gain());
        assert!(a.rate > 0.0);
        assert_eq!(b.rate, 0.0);
        assert!((b.energy - 0.5 * h_e.power_gain()).abs() <= 1e-15);
    }

    #[test]
    fn orthogonal_channels_give_same_an_beams() {
        let h_i = cv(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        let h_e = cv(&[(0.0, 0.0), (0.3, 0.4), (0.0, -0.2)]);
        let a = design_beams(&h_i, &h_e, BeamStrategy::AnTypeI).unwrap();
        let b = design_beams(&h_i, &h_e, BeamStrategy::AnTypeII).unwrap();
        assert!((inner(a.info.weights(), b.info.weights()).norm() - 1.0).abs() < 1e-12);
        assert!((inner(a.energy.weights(), b.energy.weights()).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn all_energy_point() {
        let (h_i, h_e) = fig5_channels();
        let beams = design_beams(&h_i, &h_e, BeamStrategy::AnTypeI).unwrap();
        let pt = rate_energy_point(&params(2.0, 1.0), &h_i, &h_e, &beams, ReceiverType::TypeI)
            .unwrap();
        assert_eq!(pt.rate, 0.0);
        assert!((pt.energy - 0.5 * 2.0 * h_e.power_gain()).abs() <= 1e-15);
    }

    #[test]
    fn two_point_region_is_boundary_alphas() {
        let (h_i, h_e) = fig5_channels();
        let prm = params(1.0, 0.0);
        let region = rate_energy_region(
            &prm,
            &h_i,
            &h_e,
            BeamStrategy::AnTypeII,
            ReceiverType::TypeII,
            &[0.0, 1.0],
        )
        .unwrap();
        let beams = design_beams(&h_i, &h_e, BeamStrategy::AnTypeII).unwrap();
        let at0 = rate_energy_point(&prm, &h_i, &h_e, &beams, ReceiverType::TypeII).unwrap();
        let at1 = rate_energy_point(&prm.with_alpha(1.0).unwrap(), &h_i, &h_e, &beams, ReceiverType::TypeII)
            .unwrap();
        // without AN the MRT leak to the much stronger ER wins
        assert_eq!(at0.rate, 0.0);
        assert_eq!(at1.rate, 0.0);
        assert!(at1.energy > at0.energy);
        assert_eq!(region, vec![at1]);
    }

    #[test]
    fn time_sharing_segment_endpoints() {
        let (h_i, h_e) = fig5_channels();
        let prm = params(1.0, 0.0);
        let (a, b) = time_sharing_corners(&prm, &h_i, &h_e).unwrap();
        let seg = rate_energy_region(
            &prm,
            &h_i,
            &h_e,
            BeamStrategy::NoAnTimeSharing,
            ReceiverType::TypeII,
            &[0.0, 0.5, 1.0],
        )
        .unwrap();
        assert_eq!(seg[0], b);
        assert_eq!(seg[2], a);
        assert!((seg[1].rate - 0.5 * a.rate).abs() < 1e-12);
    }

    #[test]
    fn type_one_front_dominates_type_two_front() {
        let (h_i, h_e) = fig5_channels();
        let prm = params(1.0, 0.0);
        let grid = uniform_grid(DEFAULT_ALPHA_SAMPLES);
        let one = rate_energy_region(&prm, &h_i, &h_e, BeamStrategy::AnTypeI, ReceiverType::TypeI, &grid)
            .unwrap();
        let two = rate_energy_region(&prm, &h_i, &h_e, BeamStrategy::AnTypeII, ReceiverType::TypeII, &grid)
            .unwrap();
        assert!(two.iter().any(|p| p.rate > 0.0));
        for p in &two {
            let r = frontier_rate_at(&one, p.energy).expect("type-I front reaches every energy");
            assert!(r >= p.rate - 1e-9, "Q = {}: {} < {}", p.energy, r, p.rate);
        }
    }

    #[test]
    fn frontier_interpolation() {
        let f = [RateEnergyPoint::new(4.0, 1.0), RateEnergyPoint::new(0.0, 3.0)];
        assert_eq!(frontier_rate_at(&f, 0.5), Some(4.0));
        assert_eq!(frontier_rate_at(&f, 2.0), Some(2.0));
        assert_eq!(frontier_rate_at(&f, 3.0), Some(0.0));
        assert_eq!(frontier_rate_at(&f, 3.5), None);
        assert_eq!(frontier_rate_at(&[], 0.0), None);
    }

    #[test]
    fn region_rejects_bad_grid() {
        let (h_i, h_e) = fig5_channels();
        let r = rate_energy_region(&params(1.0, 0.0), &h_i, &h_e, BeamStrategy::AnTypeI,
                                   ReceiverType::TypeI, &[0.5, 1.2]);
        assert!(r.is_err());
    }

    #[test]
    fn zf_strategies_reject_single_antenna() {
        let h = ChannelVector::from_power_gain(1.0).unwrap();
        let g = ChannelVector::from_power_gain(0.5).unwrap();
        assert!(design_beams(&h, &g, BeamStrategy::AnTypeII).is_err());
        assert!(design_beams(&h, &g, BeamStrategy::AnTypeI).is_ok());
    }

    proptest! {
        #[test]
        fn harvest_bounded_and_type_one_dominates(seed in any::<u64>(), alpha in 0f64..=1.0,
                                                  p in 1e-4f64..10.0) {
            let h_i = rayleigh_channel(seed, 4, 1e-4).unwrap();
            let h_e = rayleigh_channel(seed ^ 0xabcd, 4, 1e-1).unwrap();
            let prm = params(p, alpha);
            for s in BeamStrategy::ALL {
                let beams = design_beams(&h_i, &h_e, s).unwrap();
                let pt = rate_energy_point(&prm, &h_i, &h_e, &beams, s.receiver()).unwrap();
                prop_assert!(pt.energy <= 0.5 * p * h_e.power_gain() * (1.0 + 1e-12));
                let (g1, _) = miso_sinrs(&prm, &h_i, &h_e, &beams, ReceiverType::TypeI).unwrap();
                let (g2, _) = miso_sinrs(&prm, &h_i, &h_e, &beams, ReceiverType::TypeII).unwrap();
                prop_assert!(g1 >= g2);
            }
        }

        #[test]
        fn global_phase_invariance(seed in any::<u64>(), t1 in 0f64..6.3, t2 in 0f64..6.3) {
            let h_i = rayleigh_channel(seed, 4, 1e-4).unwrap();
            let h_e = rayleigh_channel(seed ^ 0x77, 4, 1e-1).unwrap();
            let prm = params(1.0, 0.0);
            let grid = uniform_grid(11);
            let ri = h_i.scaled(Complex64::from_polar(1.0, t1));
            let re = h_e.scaled(Complex64::from_polar(1.0, t2));
            for s in BeamStrategy::ALL {
                let a = rate_energy_region(&prm, &h_i, &h_e, s, s.receiver(), &grid).unwrap();
                let b = rate_energy_region(&prm, &ri, &re, s, s.receiver(), &grid).unwrap();
                prop_assert_eq!(a.len(), b.len());
                for (x, y) in a.iter().zip(&b) {
                    prop_assert!((x.rate - y.rate).abs() <= 1e-12 * x.rate.max(1.0));
                    prop_assert!((x.energy - y.energy).abs() <= 1e-12 * h_e.power_gain());
                }
            }
        }
    }
}
