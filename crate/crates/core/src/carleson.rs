//! Sampled estimates of the Kenig–Pipher functional
//! `sup_{q,r} (1/r) ∬_{B(q,r)∩Ω} sup_{Y∈B(X,δ(X)/2)} |∇α(Y)|² δ(Y) dX`
//! on the upper half-plane, where `δ(X)` is the height of `X`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::construction::{AmplitudeSchedule, CoefficientField, LacunaryPair};
use crate::error::{invalid, Error, Result};
use crate::lowdisc::{unit_disk_points, van_der_corput};

/// Grid cells per unit frequency required of the half-disk quadrature.
pub const RESOLUTION_FACTOR: f64 = 16.0;

/// Boundary segment `[x0, x1]` carrying the ball centres, and the largest
/// admissible radius `y1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub x0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Region {
    pub fn new(x0: f64, x1: f64, y1: f64) -> Result<Self> {
        if !(x0 < x1) || !(y1 > 0.0) || !x0.is_finite() || !x1.is_finite() || !y1.is_finite() {
            return Err(invalid(format!("region [{x0}, {x1}] × [0, {y1}] is degenerate")));
        }
        Ok(Self { x0, x1, y1 })
    }

    /// `[0, 1] × [0, 1/2]`.
    pub fn unit() -> Self {
        Self {
            x0: 0.0,
            x1: 1.0,
            y1: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KpSampling {
    /// Leading van der Corput points of `[x0, x1]` used as centres.
    pub ball_centers: usize,
    /// Radii `r_min · 2^m`, `m < radii_per_center`, with `r_min = 1/(2 k_J)`.
    pub radii_per_center: usize,
    /// Quadrature cells across the diameter of the smallest ball.
    pub quad_points: usize,
    /// Points of the Whitney disk over which the inner sup is taken.
    pub sup_samples: usize,
}

impl KpSampling {
    /// Defaults with the coarsest quadrature that resolves the field.
    pub fn for_field(field: &CoefficientField) -> Self {
        let mut s = Self {
            ball_centers: 8,
            radii_per_center: 3,
            quad_points: 32,
            sup_samples: 16,
        };
        s.quad_points = s.quad_points.max(minimal_quad_points(field));
        s
    }

    fn validate(&self) -> Result<()> {
        if self.ball_centers == 0 || self.radii_per_center == 0 || self.sup_samples == 0 {
            return Err(invalid(format!("sampling counts must be positive: {self:?}")));
        }
        if self.quad_points < 2 || self.quad_points % 2 != 0 {
            return Err(invalid(format!(
                "quad_points must be even and ≥ 2, got {}",
                self.quad_points
            )));
        }
        Ok(())
    }
}

fn top_scales(field: &CoefficientField) -> (u64, u64) {
    let j = field.depth();
    (field.pair().h()[j - 1], field.pair().k()[j - 1])
}

/// Smallest even `quad_points` meeting `Δ ≤ 1/(16 h_J)`.
pub fn minimal_quad_points(field: &CoefficientField) -> usize {
    let (h, k) = top_scales(field);
    let n = (RESOLUTION_FACTOR as u64 * h).div_ceil(k) as usize;
    n + n % 2
}

#[derive(Debug, Clone, PartialEq)]
pub struct KpEstimate {
    pub value: f64,
    pub center: f64,
    pub radius: f64,
    pub sampling: KpSampling,
}

fn whitney_sup(field: &CoefficientField, disk: &[(f64, f64)], x: f64, y: f64) -> Result<f64> {
    let half = 0.5 * y;
    let mut best = 0.0f64;
    for &(u, v) in disk {
        let (px, py) = (x + half * u, y + half * v);
        best = best.max(field.gradient_norm_squared(px, py)? * py);
    }
    Ok(best)
}

/// `sup_{Y ∈ B(X, y/2)} |∇α(Y)|² δ(Y)` sampled at `sup_samples` disk points.
pub fn kp_local_density(field: &CoefficientField, x: f64, y: f64, sup_samples: usize) -> Result<f64> {
    if !(y > 0.0) {
        return Err(invalid(format!("density needs a point above the boundary, got y = {y}")));
    }
    if sup_samples == 0 {
        return Err(invalid("sup_samples must be positive"));
    }
    whitney_sup(field, &unit_disk_points(sup_samples), x, y)
}

/// `(1/r) ∬_{B(q,r), y>0}` of the density by the midpoint rule on square cells of side `step`.
fn ball_average(
    field: &CoefficientField,
    disk: &[(f64, f64)],
    q: f64,
    r: f64,
    step: f64,
) -> Result<f64> {
    let across = (2.0 * r / step).round() as usize;
    let up = across / 2;
    let mut total = 0.0;
    for l in 0..up {
        let y = (l as f64 + 0.5) * step;
        for i in 0..across {
            let dx = -r + (i as f64 + 0.5) * step;
            if dx * dx + y * y < r * r {
                total += whitney_sup(field, disk, q + dx, y)?;
            }
        }
    }
    Ok(total * step * step / r)
}

pub fn kp_functional(field: &CoefficientField, region: &Region, sampling: &KpSampling) -> Result<KpEstimate> {
    sampling.validate()?;
    let (h, k) = top_scales(field);
    let r_min = 0.5 / k as f64;
    let step = 2.0 * r_min / sampling.quad_points as f64;
    let required = 1.0 / (RESOLUTION_FACTOR * h as f64);
    if step > required {
        return Err(Error::Resolution {
            what: "Carleson quadrature".into(),
            required,
            actual: step,
        });
    }
    let radii: Vec<f64> = (0..sampling.radii_per_center)
        .map(|m| r_min * (1u64 << m) as f64)
        .filter(|r| *r <= region.y1)
        .collect();
    if radii.is_empty() {
        return Err(invalid(format!(
            "smallest radius {r_min} exceeds the region height {}",
            region.y1
        )));
    }
    let centers: Vec<f64> = van_der_corput(sampling.ball_centers)
        .into_iter()
        .map(|t| region.x0 + t * (region.x1 - region.x0))
        .collect();
    let disk = unit_disk_points(sampling.sup_samples);
    let jobs: Vec<(f64, f64)> = centers
        .iter()
        .flat_map(|&c| radii.iter().map(move |&r| (c, r)))
        .collect();
    let values: Vec<Result<f64>> = jobs
        .par_iter()
        .map(|&(c, r)| ball_average(field, &disk, c, r, step))
        .collect();
    let mut best = KpEstimate {
        value: f64::NEG_INFINITY,
        center: jobs[0].0,
        radius: jobs[0].1,
        sampling: *sampling,
    };
    for (&(c, r), v) in jobs.iter().zip(values) {
        let v = v?;
        if v > best.value {
            best.value = v;
            best.center = c;
            best.radius = r;
        }
    }
    Ok(best)
}

/// Analytic lower bound `c₀ (h_j/k_j)² / j` for the level-`j` field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KpLowerBound {
    pub value: f64,
    pub c0: f64,
}

/// For amplitudes `a_j = A₀/√j` and `h_j ≥ 2k_j`, the half-disk of radius
/// `1/(2k_j)` yields at least `c₀ (h_j/k_j)² / j` with `c₀ = 5π²A₀²/12`.
///
/// On that half-disk `α_j = φ_j(x)`, so `|∇α_j|² = 4π²h_j²a_j² sin²(2πh_jx)`.
/// Every Whitney disk centred at height `y ≥ 1/(2h_j)` has a horizontal chord
/// of length `y` through its centre, which meets a point with `sin² = 1` at
/// height `y`. Integrating `4π²h_j²a_j² y` over the half-disk minus the strip
/// `y < 1/(2h_j)` gives `(4π²A₀²/j)((h_j/k_j)²/6 − 1/4)`, and `k_j/h_j ≤ 1/2`
/// bounds this below by the stated form.
pub fn kp_lower_bound_analytic(j: usize, pair: &LacunaryPair, schedule: AmplitudeSchedule) -> Result<KpLowerBound> {
    let a0 = schedule.sqrt_scale().ok_or_else(|| {
        invalid(format!("lower bound needs amplitudes of the form A/√j, got {schedule}"))
    })?;
    let h = pair.frequency(j)? as f64;
    let k = pair.scale(j)? as f64;
    if h < 2.0 * k {
        return Err(invalid(format!("lower bound needs h_j ≥ 2k_j, got h = {h}, k = {k}")));
    }
    let c0 = 5.0 * PI * PI * a0 * a0 / 12.0;
    let ratio = h / k;
    Ok(KpLowerBound {
        value: c0 * ratio * ratio / j as f64,
        c0,
    })
}
