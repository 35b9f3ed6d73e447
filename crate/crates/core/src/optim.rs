//! One-dimensional maximization and rate-energy Pareto filtering.
//!
//! Every search breaks ties toward the smaller argument, so results do not
//! depend on evaluation order.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Coarse grid step used by [`maximize`] before refinement.
pub const DEFAULT_COARSE_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchResult {
    pub argmax: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Secrecy rate (bits/s/Hz) and harvested power (W) achieved together.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RateEnergyPoint {
    pub rate: f64,
    pub energy: f64,
}

impl RateEnergyPoint {
    pub fn new(rate: f64, energy: f64) -> Self {
        Self { rate, energy }
    }

    /// True if `self` is at least as good in both coordinates and strictly
    /// better in one.
    pub fn dominates(&self, other: &Self) -> bool {
        self.rate >= other.rate
            && self.energy >= other.energy
            && (self.rate > other.rate || self.energy > other.energy)
    }
}

/// `a, a + step, ..., b`, always ending exactly at `b`.
pub fn grid_points(a: f64, b: f64, step: f64) -> Result<Vec<f64>> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::domain("grid_search", format!("invalid interval [{a}, {b}]")));
    }
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::domain("grid_search", format!("step = {step} must be > 0")));
    }
    // a step that divides the interval gives a lattice `a + (b - a) * i / n`,
    // which keeps points like 0.95 free of accumulated rounding
    let ratio = (b - a) / step;
    let n = ratio.round();
    if n >= 1.0 && (ratio - n).abs() <= 1e-9 * n {
        let n = n as usize;
        return Ok((0..=n).map(|i| a + (b - a) * (i as f64 / n as f64)).collect());
    }
    let intervals = (ratio + 1e-9).floor() as usize;
    let mut points: Vec<f64> = (0..=intervals)
        .map(|i| (a + i as f64 * step).min(b))
        .collect();
    if let Some(&last) = points.last() {
        if last < b {
            points.push(b);
        }
    }
    points.dedup();
    Ok(points)
}

/// Returns `true` when `(x, v)` should replace the incumbent `(bx, bv)`.
fn improves(x: f64, v: f64, bx: f64, bv: f64) -> bool {
    v > bv || (v == bv && x < bx)
}

fn evaluate(op: &'static str, f: &impl Fn(f64) -> f64, x: f64) -> Result<f64> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Evaluation { op, at: x })
    }
}

/// Maximizes `f` over an explicit list of candidate points.
pub fn best_of(f: impl Fn(f64) -> f64, points: &[f64]) -> Result<SearchResult> {
    let mut best: Option<(f64, f64)> = None;
    for &x in points {
        let v = evaluate("grid_search", &f, x)?;
        match best {
            Some((bx, bv)) if !improves(x, v, bx, bv) => {}
            _ => best = Some((x, v)),
        }
    }
    let (argmax, value) =
        best.ok_or_else(|| Error::domain("grid_search", "no candidate points"))?;
    Ok(SearchResult {
        argmax,
        value,
        evaluations: points.len(),
    })
}

pub fn grid_search(f: impl Fn(f64) -> f64, a: f64, b: f64, step: f64) -> Result<SearchResult> {
    best_of(f, &grid_points(a, b, step)?)
}

/// Golden-section maximization on `[lo, hi]`.
///
/// Converges to within `tol` of the maximizer when `f` is unimodal on the
/// bracket. The returned point is the best one evaluated and always lies in
/// the bracket.
pub fn refine_unimodal(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<SearchResult> {
    const MAX_ITERATIONS: usize = 300;
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::domain("refine_unimodal", format!("tol = {tol} must be > 0")));
    }
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(Error::domain("refine_unimodal", format!("invalid bracket [{lo}, {hi}]")));
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = evaluate("refine_unimodal", &f, x1)?;
    let mut f2 = evaluate("refine_unimodal", &f, x2)?;
    let mut evaluations = 2;
    let (mut bx, mut bv) = (x1, f1);
    if improves(x2, f2, bx, bv) {
        (bx, bv) = (x2, f2);
    }
    for _ in 0..MAX_ITERATIONS {
        if b - a <= tol {
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            if !(x1 > a && x1 < x2) {
                break;
            }
            f1 = evaluate("refine_unimodal", &f, x1)?;
            evaluations += 1;
            if improves(x1, f1, bx, bv) {
                (bx, bv) = (x1, f1);
            }
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            if !(x2 > x1 && x2 < b) {
                break;
            }
            f2 = evaluate("refine_unimodal", &f, x2)?;
            evaluations += 1;
            if improves(x2, f2, bx, bv) {
                (bx, bv) = (x2, f2);
            }
        }
    }
    Ok(SearchResult {
        argmax: bx.clamp(lo, hi),
        value: bv,
        evaluations,
    })
}

/// Grid search at `coarse_step`, then golden-section refinement inside the
/// neighbouring grid cells of the best point. Returns whichever of the grid
/// and refined optimum is better.
pub fn grid_then_refine(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    coarse_step: f64,
    tol: f64,
) -> Result<SearchResult> {
    let coarse = grid_search(&f, a, b, coarse_step)?;
    refine_around(&f, coarse, a, b, coarse_step, tol)
}

/// Refines `seed` within `[seed - step, seed + step]` clipped to `[a, b]`.
pub(crate) fn refine_around(
    f: &impl Fn(f64) -> f64,
    seed: SearchResult,
    a: f64,
    b: f64,
    step: f64,
    tol: f64,
) -> Result<SearchResult> {
    let lo = (seed.argmax - step).max(a);
    let hi = (seed.argmax + step).min(b);
    if lo >= hi {
        return Ok(seed);
    }
    let fine = refine_unimodal(f, lo, hi, tol)?;
    let evaluations = seed.evaluations + fine.evaluations;
    let best = if improves(fine.argmax, fine.value, seed.argmax, seed.value) {
        fine
    } else {
        seed
    };
    Ok(SearchResult {
        evaluations,
        ..best
    })
}

/// Coarse grid plus refinement with default step and tolerance `1e-9`.
pub fn maximize(f: impl Fn(f64) -> f64, a: f64, b: f64) -> Result<SearchResult> {
    grid_then_refine(f, a, b, DEFAULT_COARSE_STEP, 1e-9)
}

/// Non-dominated subset of `points`, sorted by harvested power ascending.
///
/// Exact duplicates keep only their first occurrence.
pub fn pareto_front(points: &[RateEnergyPoint]) -> Vec<RateEnergyPoint> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    // energy descending, then rate descending, then input order
    order.sort_by(|&i, &j| {
        let (p, q) = (&points[i], &points[j]);
        q.energy
            .total_cmp(&p.energy)
            .then(q.rate.total_cmp(&p.rate))
            .then(i.cmp(&j))
    });
    let mut front = Vec::new();
    let mut best_rate = f64::NEG_INFINITY;
    for i in order {
        let p = points[i];
        if p.rate.total_cmp(&best_rate) == Ordering::Greater {
            best_rate = p.rate;
            front.push(p);
        }
    }
    front.reverse();
    front
}
