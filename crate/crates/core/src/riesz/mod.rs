//! Riesz products `ℛ_j(x) = ∏_{i≤j} φ_i(x)`: point values, exact sparse
//! Fourier expansions, Lᵖ norms, the cumulative mass `F_j` and singularity
//! diagnostics on uniform grids.

mod diagnostics;
mod fourier;
mod sampling;

pub use diagnostics::{GridRule, SingularityDiagnostics, MAX_GRID_SAMPLES};
pub use fourier::{FourierExpansion, DEFAULT_MAX_ORDER};
pub use sampling::{alias_free_size, is_alias_free};

use crate::construction::{phi_value, AmplitudeSchedule, LacunaryPair};
use crate::error::{invalid, Error, Result};
use crate::sum::Compensated;

/// Grid points per unit frequency demanded of every quadrature.
pub const RESOLUTION_FACTOR: u64 = 16;

/// Largest number of points a single quadrature pass may visit.
pub const MAX_QUADRATURE_POINTS: u64 = 1 << 31;

#[derive(Debug, Clone)]
pub struct RieszProduct {
    pair: LacunaryPair,
    schedule: AmplitudeSchedule,
    order: usize,
}

impl RieszProduct {
    pub fn new(pair: LacunaryPair, schedule: AmplitudeSchedule, order: usize) -> Result<Self> {
        schedule.validate()?;
        if order == 0 || order > pair.len() {
            return Err(invalid(format!(
                "order {order} outside 1..={} available factors",
                pair.len()
            )));
        }
        Ok(Self {
            pair,
            schedule,
            order,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn schedule(&self) -> AmplitudeSchedule {
        self.schedule
    }

    pub fn pair(&self) -> &LacunaryPair {
        &self.pair
    }

    /// Highest frequency `h_j`.
    pub fn top_frequency(&self) -> u64 {
        self.pair.h()[self.order - 1]
    }

    /// `(h_i, a_i)` for `i ≤ j`.
    pub fn factors(&self) -> Vec<(u64, f64)> {
        (1..=self.order)
            .map(|i| (self.pair.h()[i - 1], self.schedule.amplitude(i)))
            .collect()
    }

    pub fn frequencies(&self) -> &[u64] {
        &self.pair.h()[..self.order]
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.factors()
            .into_iter()
            .map(|(h, a)| phi_value(a, h, x))
            .product()
    }

    /// Smallest grid size obeying the resolution rule `Δx ≤ 1/(16 h_j)`.
    pub fn nyquist_size(&self) -> u64 {
        RESOLUTION_FACTOR * self.top_frequency()
    }

    pub(crate) fn check_resolution(&self, n: u64, what: &str) -> Result<()> {
        let required = 1.0 / self.nyquist_size() as f64;
        let actual = 1.0 / n as f64;
        if n < self.nyquist_size() {
            return Err(Error::Resolution {
                what: what.to_string(),
                required,
                actual,
            });
        }
        Ok(())
    }

    pub fn fourier(&self) -> Result<FourierExpansion> {
        self.fourier_with_budget(DEFAULT_MAX_ORDER)
    }

    /// Builds the `3^j`-term expansion if `j ≤ max_order`.
    pub fn fourier_with_budget(&self, max_order: usize) -> Result<FourierExpansion> {
        if self.order > max_order {
            return Err(Error::ResourceLimit(format!(
                "expansion of order {} exceeds the budget of {max_order} (3^{} terms)",
                self.order, self.order
            )));
        }
        FourierExpansion::from_factors(&self.factors())
    }

    /// `∫₀¹ ℛ_j`, read off the zero-frequency coefficient.
    pub fn l1(&self) -> Result<f64> {
        Ok(self.fourier()?.coefficient(0))
    }

    /// `∫₀¹ ℛ_j` by the midpoint rule on the minimal resolving grid.
    pub fn l1_quadrature(&self) -> Result<f64> {
        self.lp_on_grid(1.0, self.nyquist_size())
    }

    /// `‖ℛ_j‖₂` by Parseval over the expansion.
    pub fn l2(&self) -> Result<f64> {
        Ok(self.fourier()?.l2_squared().sqrt())
    }

    /// `√∏(1 + a_i²/2)`.
    pub fn l2_closed_form(&self) -> f64 {
        self.schedule.l2_squared_product(self.order).sqrt()
    }

    /// `‖ℛ_j‖_p` by the midpoint rule on the minimal resolving grid.
    pub fn lp(&self, p: f64) -> Result<f64> {
        self.lp_on_grid(p, self.nyquist_size())
    }

    /// `‖ℛ_j‖_p` on an `n`-point midpoint grid; `n` must obey the resolution rule.
    pub fn lp_on_grid(&self, p: f64, n: u64) -> Result<f64> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(invalid(format!("Lᵖ exponent must be finite and ≥ 1, got {p}")));
        }
        self.check_resolution(n, "Lᵖ quadrature")?;
        let points = sampling::period_points(&self.factors(), n);
        if points > MAX_QUADRATURE_POINTS {
            return Err(Error::ResourceLimit(format!(
                "quadrature over {points} points exceeds {MAX_QUADRATURE_POINTS}"
            )));
        }
        Ok(self.midpoint_mean(n, p).powf(1.0 / p))
    }

    /// Mean of `ℛ_j^p` over the `n`-point midpoint grid, reduced to one period.
    ///
    /// `ℛ_j` is even, so the midpoints `m` and `P − 1 − m` of a period of `P`
    /// points carry the same value and only the first half is scanned.
    pub(crate) fn midpoint_mean(&self, n: u64, p: f64) -> f64 {
        let factors = self.factors();
        let points = sampling::period_points(&factors, n);
        let half = points / 2;
        let mut total = Compensated::default();
        let mut block = 0.0;
        let mut count = 0u32;
        let mut push = |v: f64| {
            block += v;
            count += 1;
            if count == 1024 {
                total.add(block);
                block = 0.0;
                count = 0;
            }
        };
        let power = |v: f64| {
            if p == 1.0 {
                v
            } else if p == 2.0 {
                v * v
            } else if p == 4.0 {
                let s = v * v;
                s * s
            } else {
                v.powf(p)
            }
        };
        sampling::scan_midpoints(&factors, n, 0, half, |v| push(power(v)));
        total.add(block);
        let mut sum = 2.0 * total.value();
        if points % 2 == 1 {
            sampling::scan_midpoints(&factors, n, half, half + 1, |v| sum += power(v));
        }
        sum / points as f64
    }

    /// `ℛ_j` at the `n` midpoints `(m + ½)/n`.
    pub fn sample_midpoints(&self, n: u64) -> Vec<f64> {
        let mut out = Vec::with_capacity(n as usize);
        sampling::scan_midpoints(&self.factors(), n, 0, n, |v| out.push(v));
        out
    }

    /// `F_j(x) = ∫₀ˣ ℛ_j` by term-wise integration of the expansion.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        let expansion = self.fourier()?;
        cdf_from(&expansion, x)
    }

    /// `F_j` at many points from a single expansion.
    pub fn cdf_many(&self, xs: &[f64]) -> Result<Vec<f64>> {
        let expansion = self.fourier()?;
        xs.iter().map(|&x| cdf_from(&expansion, x)).collect()
    }
}

fn cdf_from(expansion: &FourierExpansion, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(invalid(format!("cdf argument {x} outside [0, 1]")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(expansion.antiderivative(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{make_lacunary, Variant};
    use std::f64::consts::PI;

    fn rp(order: usize, schedule: AmplitudeSchedule) -> RieszProduct {
        RieszProduct::new(make_lacunary(16, Variant::Standard).unwrap(), schedule, order).unwrap()
    }

    #[test]
    fn point_values() {
        assert!((rp(1, AmplitudeSchedule::Sqrt).eval(0.0) - 1.0795775).abs() < 1e-7);
        let expected = (1.0 + 1.0 / (4.0 * PI)) * (1.0 + 1.0 / (4.0 * PI * 2f64.sqrt()));
        assert!((rp(2, AmplitudeSchedule::Sqrt).eval(0.0) - expected).abs() < 1e-15);
        assert!((expected - 1.1403250).abs() < 1e-7);
        assert!(RieszProduct::new(make_lacunary(3, Variant::Standard).unwrap(), AmplitudeSchedule::Sqrt, 4).is_err());
    }

    #[test]
    fn small_expansions() {
        let e = rp(1, AmplitudeSchedule::Sqrt).fourier().unwrap();
        assert_eq!(e.frequencies(), &[-4, 0, 4]);
        assert_eq!(e.coefficient(0), 1.0);
        assert!((e.coefficient(4) - 1.0 / (8.0 * PI)).abs() < 1e-16);
        assert!((e.coefficient(4) - 0.0397887).abs() < 1e-7);

        let e = rp(2, AmplitudeSchedule::Sqrt).fourier().unwrap();
        assert_eq!(e.frequencies(), &[-20, -16, -12, -4, 0, 4, 12, 16, 20]);
        let (a1, a2) = (1.0 / (4.0 * PI), 1.0 / (4.0 * PI * 2f64.sqrt()));
        assert!((e.coefficient(20) - a1 * a2 / 4.0).abs() < 1e-17);
        assert!((e.coefficient(20) - 0.0011194).abs() < 1e-7);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            rp(10, AmplitudeSchedule::Sqrt).fourier_with_budget(9),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn zero_schedule_is_constant() {
        let r = rp(1, AmplitudeSchedule::Zero);
        assert_eq!(r.l1().unwrap(), 1.0);
        assert_eq!(r.l1_quadrature().unwrap(), 1.0);
        for p in [1.5, 2.0, 3.0, 7.5] {
            assert_eq!(r.lp(p).unwrap(), 1.0);
        }
    }

    #[test]
    fn lp_rejects_bad_exponent_and_coarse_grid() {
        let r = rp(3, AmplitudeSchedule::Sqrt);
        assert!(matches!(r.lp(0.5), Err(Error::InvalidArgument(_))));
        assert!(matches!(r.lp_on_grid(2.0, 16 * 64 - 1), Err(Error::Resolution { .. })));
    }

    #[test]
    fn first_order_l2_and_cdf() {
        let r = rp(1, AmplitudeSchedule::Sqrt);
        let expected = (1.0 + 1.0 / (32.0 * PI * PI)).sqrt();
        assert!((r.l2().unwrap() - expected).abs() < 1e-15);
        assert!((expected - 1.0015819).abs() < 1e-7);
        assert_eq!(r.cdf(0.0).unwrap(), 0.0);
        assert!((r.cdf(0.125).unwrap() - 0.125).abs() < 1e-15);
        assert!((r.cdf(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(r.cdf(1.5).is_err());
        assert!(r.cdf(-0.1).is_err());
    }
}
