//! Transmit beams: maximum-ratio transmission, rank-one zero forcing and
//! beam/channel coupling.

use num_complex::Complex64;

use crate::channel::ChannelVector;
use crate::error::{Error, Result};

/// Relative residual below which `zf_beam` treats `target` as parallel to `avoid`.
pub const PARALLEL_TOLERANCE: f64 = 1e-9;

/// Unit-norm complex transmit beam.
#[derive(Debug, Clone, PartialEq)]
pub struct Beam(Vec<Complex64>);

impl Beam {
    /// Normalizes `weights` to unit norm.
    pub fn normalized(weights: Vec<Complex64>) -> Result<Self> {
        let norm = l2_norm(&weights);
        if weights.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(Error::degenerate("Beam::normalized", "zero or non-finite vector"));
        }
        Ok(Self(weights.into_iter().map(|w| w / norm).collect()))
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.0)
    }

    /// Multiplies every weight by `phase`, which should have unit modulus.
    pub fn rotated(&self, phase: Complex64) -> Self {
        Self(self.0.iter().map(|w| w * phase).collect())
    }
}

/// Information beam `w_I` and energy/AN beam `w_E`.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamPair {
    pub info: Beam,
    pub energy: Beam,
}

impl BeamPair {
    pub fn new(info: Beam, energy: Beam) -> Result<Self> {
        if info.len() != energy.len() {
            return Err(Error::Dimension {
                op: "BeamPair::new",
                expected: info.len(),
                found: energy.len(),
            });
        }
        Ok(Self { info, energy })
    }

    pub fn antennas(&self) -> usize {
        self.info.len()
    }
}

fn l2_norm(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

/// Hermitian inner product `a^H b`.
pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `h / |h|`.
pub fn mrt_beam(h: &ChannelVector) -> Result<Beam> {
    if h.power_gain() == 0.0 {
        return Err(Error::degenerate("mrt_beam", "channel has zero norm"));
    }
    Beam::normalized(h.coefficients().to_vec())
}

/// Projects `target` onto the orthogonal complement of `avoid` and normalizes.
pub fn zf_beam(target: &ChannelVector, avoid: &ChannelVector) -> Result<Beam> {
    let n = target.len();
    if avoid.len() != n {
        return Err(Error::Dimension {
            op: "zf_beam",
            expected: n,
            found: avoid.len(),
        });
    }
    if n < 2 {
        return Err(Error::Dimension {
            op: "zf_beam",
            expected: 2,
            found: n,
        });
    }
    let avoid_gain = avoid.power_gain();
    let target_norm = target.power_gain().sqrt();
    if avoid_gain == 0.0 || target_norm == 0.0 {
        return Err(Error::degenerate("zf_beam", "zero-norm channel"));
    }
    let a = avoid.coefficients();
    let project = |v: &mut Vec<Complex64>| {
        let coeff = inner(a, v) / avoid_gain;
        for (vi, ai) in v.iter_mut().zip(a) {
            *vi -= coeff * ai;
        }
    };
    let mut w = target.coefficients().to_vec();
    project(&mut w);
    if l2_norm(&w) < PARALLEL_TOLERANCE * target_norm {
        return Err(Error::degenerate("zf_beam", "target is parallel to avoid"));
    }
    // second Gram-Schmidt pass removes the round-off left by the first
    project(&mut w);
    Beam::normalized(w)
}

/// `|h^H w|^2`.
pub fn coupling_power(h: &ChannelVector, w: &Beam) -> Result<f64> {
    if h.len() != w.len() {
        return Err(Error::Dimension {
            op: "coupling_power",
            expected: h.len(),
            found: w.len(),
        });
    }
    Ok(inner(h.coefficients(), w.weights()).norm_sqr())
}
