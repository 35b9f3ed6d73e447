//! Geometry-based channel generation.
//!
//! Gains are linear power gains. Line-of-sight vectors model a uniform linear
//! array with half-wavelength spacing; the squared norm of every generated
//! vector equals the path-loss gain, so the array adds no aggregate gain by
//! itself.
//!
//! Random draws use ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded through
//! `SeedableRng::seed_from_u64`, with Gaussian samples from
//! `rand_distr::StandardNormal`. Both are platform independent, so a seed
//! reproduces the same vector bit for bit.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{ensure_positive, Error, Result};

/// Position of a node relative to the transmit array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodePlacement {
    distance_m: f64,
    angle_deg: f64,
}

impl NodePlacement {
    /// `angle_deg` is the azimuth from array broadside; it is normalized to `[0, 360)`.
    pub fn new(distance_m: f64, angle_deg: f64) -> Result<Self> {
        ensure_positive("NodePlacement::new", "distance", distance_m)?;
        if !angle_deg.is_finite() {
            return Err(Error::domain("NodePlacement::new", "angle must be finite"));
        }
        let mut angle = angle_deg.rem_euclid(360.0);
        // rem_euclid can round up to exactly 360 for tiny negative inputs
        if angle >= 360.0 {
            angle = 0.0;
        }
        Ok(Self {
            distance_m,
            angle_deg: angle,
        })
    }

    pub fn distance_m(&self) -> f64 {
        self.distance_m
    }

    pub fn angle_deg(&self) -> f64 {
        self.angle_deg
    }
}

/// Distance path loss `reference_gain * d^(-exponent)`, referenced at 1 m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossModel {
    exponent: f64,
    reference_gain: f64,
}

impl Default for PathLossModel {
    /// Exponent 3 with unit gain at 1 m.
    fn default() -> Self {
        Self {
            exponent: 3.0,
            reference_gain: 1.0,
        }
    }
}

impl PathLossModel {
    pub fn new(exponent: f64, reference_gain: f64) -> Result<Self> {
        if !exponent.is_finite() || exponent < 0.0 {
            return Err(Error::domain(
                "PathLossModel::new",
                format!("exponent = {exponent} must be finite and >= 0"),
            ));
        }
        ensure_positive("PathLossModel::new", "reference_gain", reference_gain)?;
        Ok(Self {
            exponent,
            reference_gain,
        })
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn reference_gain(&self) -> f64 {
        self.reference_gain
    }

    pub fn gain(&self, distance_m: f64) -> Result<f64> {
        path_loss_gain(distance_m, self)
    }
}

pub fn path_loss_gain(distance_m: f64, model: &PathLossModel) -> Result<f64> {
    ensure_positive("path_loss_gain", "distance", distance_m)?;
    Ok(model.reference_gain * distance_m.powf(-model.exponent))
}

/// Baseband channel from an N-antenna transmitter to a single-antenna node.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelVector(Vec<Complex64>);

impl ChannelVector {
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::domain("ChannelVector::new", "need at least one coefficient"));
        }
        if coefficients.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::domain("ChannelVector::new", "coefficients must be finite"));
        }
        Ok(Self(coefficients))
    }

    /// Single-antenna channel with the given power gain and zero phase.
    pub fn from_power_gain(gain: f64) -> Result<Self> {
        if !gain.is_finite() || gain < 0.0 {
            return Err(Error::domain(
                "ChannelVector::from_power_gain",
                format!("gain = {gain} must be finite and >= 0"),
            ));
        }
        Ok(Self(vec![Complex64::new(gain.sqrt(), 0.0)]))
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Squared Euclidean norm.
    pub fn power_gain(&self) -> f64 {
        self.0.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self(self.0.iter().map(|c| c * factor).collect())
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }
}

/// Line-of-sight channel to `placement` from a half-wavelength uniform linear
/// array of `antennas` elements.
///
/// Coefficient `n` has phase `pi * n * sin(angle)` and magnitude
/// `sqrt(gain / N)`.
pub fn los_channel(
    placement: &NodePlacement,
    antennas: usize,
    model: &PathLossModel,
) -> Result<ChannelVector> {
    if antennas == 0 {
        return Err(Error::domain("los_channel", "antenna count must be >= 1"));
    }
    let gain = path_loss_gain(placement.distance_m, model)?;
    let amplitude = (gain / antennas as f64).sqrt();
    let spatial_freq = PI * placement.angle_deg.to_radians().sin();
    let coefficients = (0..antennas)
        .map(|n| Complex64::from_polar(amplitude, spatial_freq * n as f64))
        .collect();
    Ok(ChannelVector(coefficients))
}

/// I.i.d. circularly-symmetric complex Gaussian coefficients with variance
/// `avg_gain` each.
pub fn rayleigh_channel(seed: u64, antennas: usize, avg_gain: f64) -> Result<ChannelVector> {
    if antennas == 0 {
        return Err(Error::domain("rayleigh_channel", "antenna count must be >= 1"));
    }
    ensure_positive("rayleigh_channel", "avg_gain", avg_gain)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = (avg_gain / 2.0).sqrt();
    let coefficients = (0..antennas)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(scale * re, scale * im)
        })
        .collect();
    Ok(ChannelVector(coefficients))
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> Result<f64> {
    ensure_positive("watts_to_dbm", "power", watts)?;
    Ok(10.0 * watts.log10() + 30.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs())
    }

    #[test]
    fn path_loss_examples() {
        let m = PathLossModel::default();
        assert_eq!(path_loss_gain(1.0, &m).unwrap(), 1.0);
        assert_eq!(path_loss_gain(2.0, &m).unwrap(), 0.125);
        assert!(rel_close(path_loss_gain(20.0, &m).unwrap(), 1.25e-4, 1e-15));
    }

    #[test]
    fn path_loss_rejects_non_positive_distance() {
        let m = PathLossModel::default();
        assert!(matches!(path_loss_gain(0.0, &m), Err(Error::Domain { .. })));
        assert!(path_loss_gain(-3.0, &m).is_err());
    }

    #[test]
    fn placement_normalizes_angle() {
        assert_eq!(NodePlacement::new(1.0, 420.0).unwrap().angle_deg(), 60.0);
        assert_eq!(NodePlacement::new(1.0, -90.0).unwrap().angle_deg(), 270.0);
        assert!(NodePlacement::new(0.0, 0.0).is_err());
    }

    #[test]
    fn broadside_channel_is_flat() {
        let m = PathLossModel::default();
        let h = los_channel(&NodePlacement::new(1.0, 0.0).unwrap(), 4, &m).unwrap();
        let c0 = h.coefficients()[0];
        assert!(h.coefficients().iter().all(|c| (c - c0).norm() < 1e-15));
        assert!(rel_close(h.power_gain(), 1.0, 1e-12));
    }

    #[test]
    fn single_antenna_los_is_scalar_path_loss() {
        let m = PathLossModel::default();
        let h = los_channel(&NodePlacement::new(2.0, 33.0).unwrap(), 1, &m).unwrap();
        assert_eq!(h.len(), 1);
        assert!(rel_close(h.coefficients()[0].norm_sqr(), 0.125, 1e-12));
    }

    #[test]
    fn steering_at_sixty_degrees_is_not_parallel_to_broadside() {
        let m = PathLossModel::default();
        let a = los_channel(&NodePlacement::new(2.0, 60.0).unwrap(), 4, &m).unwrap();
        let b = los_channel(&NodePlacement::new(2.0, 0.0).unwrap(), 4, &m).unwrap();
        assert!(rel_close(a.power_gain(), 0.125, 1e-12));
        // oracle: explicit sum of conj(b_n) a_n with the phases written out
        let amp2 = 0.125 / 4.0;
        let x = PI * (60f64).to_radians().sin();
        let (mut re, mut im) = (0.0, 0.0);
        for n in 0..4 {
            re += amp2 * (x * n as f64).cos();
            im += amp2 * (x * n as f64).sin();
        }
        let inner = (re * re + im * im).sqrt();
        let lib: Complex64 = a
            .coefficients()
            .iter()
            .zip(b.coefficients())
            .map(|(ai, bi)| bi.conj() * ai)
            .sum();
        assert!((lib.norm() - inner).abs() < 1e-15);
        assert!(inner < a.power_gain().sqrt() * b.power_gain().sqrt());
    }

    #[test]
    fn los_rejects_zero_antennas() {
        let m = PathLossModel::default();
        assert!(los_channel(&NodePlacement::new(2.0, 0.0).unwrap(), 0, &m).is_err());
    }

    #[test]
    fn rayleigh_is_reproducible_and_seed_sensitive() {
        let a = rayleigh_channel(42, 4, 1.0).unwrap();
        let b = rayleigh_channel(42, 4, 1.0).unwrap();
        let c = rayleigh_channel(43, 4, 1.0).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn rayleigh_mean_power() {
        let n = 100_000u64;
        let mean = (0..n)
            .map(|s| rayleigh_channel(s, 1, 1.0).unwrap().power_gain())
            .sum::<f64>()
            / n as f64;
        assert!((mean - 1.0).abs() < 0.02, "mean = {mean}");
    }

    #[test]
    fn dbm_examples() {
        assert!(rel_close(dbm_to_watts(-80.0), 1e-11, 1e-12));
        assert_eq!(dbm_to_watts(30.0), 1.0);
        let back = dbm_to_watts(watts_to_dbm(0.37).unwrap());
        assert!(rel_close(back, 0.37, 1e-12));
        assert!(watts_to_dbm(0.0).is_err());
        assert!(watts_to_dbm(-1.0).is_err());
    }

    proptest! {
        #[test]
        fn path_loss_decreasing(d in 0.01f64..1e3, step in 1e-3f64..10.0, k in 0.5f64..6.0) {
            let m = PathLossModel::new(k, 1.0).unwrap();
            prop_assert!(m.gain(d + step).unwrap() < m.gain(d).unwrap());
        }

        #[test]
        fn los_norm_equals_path_loss(d in 0.1f64..500.0, ang in -720f64..720.0, n in 1usize..16) {
            let m = PathLossModel::new(3.0, 1e-3).unwrap();
            let h = los_channel(&NodePlacement::new(d, ang).unwrap(), n, &m).unwrap();
            prop_assert!(rel_close(h.power_gain(), m.gain(d).unwrap(), 1e-12));
        }

        #[test]
        fn dbm_round_trip(w in 1e-15f64..1e6) {
            prop_assert!(rel_close(dbm_to_watts(watts_to_dbm(w).unwrap()), w, 1e-12));
        }
    }
}
