use super::{is_alias_free, RieszProduct};
use crate::error::{invalid, Error, Result};
use crate::sum::compensated_sum;

/// Largest grid that diagnostics will hold in memory.
pub const MAX_GRID_SAMPLES: u64 = 1 << 25;

/// Admissibility rule for a diagnostics grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridRule {
    /// `n ≥ 16 h_j`.
    Nyquist,
    /// No nonzero frequency of `ℛ_j` is a multiple of `n`, so the grid mean is
    /// exact even though the oscillations are not resolved.
    AliasFree,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularityDiagnostics {
    pub order: usize,
    pub grid_size: u64,
    pub rule: GridRule,
    pub mean: f64,
    pub median: f64,
    /// `(p, fraction of [0, 1] carrying p of the mass)`.
    pub mass_fractions: Vec<(f64, f64)>,
}

impl SingularityDiagnostics {
    pub fn mass_support_fraction(&self, p: f64) -> Option<f64> {
        self.mass_fractions
            .iter()
            .find(|(q, _)| *q == p)
            .map(|(_, f)| *f)
    }
}

impl RieszProduct {
    /// Mean, median and mass concentration of `ℛ_j` on a resolving grid.
    pub fn diagnostics(&self, grid_size: u64, fractions: &[f64]) -> Result<SingularityDiagnostics> {
        self.diagnostics_with(grid_size, fractions, GridRule::Nyquist)
    }

    pub fn diagnostics_with(
        &self,
        grid_size: u64,
        fractions: &[f64],
        rule: GridRule,
    ) -> Result<SingularityDiagnostics> {
        match rule {
            GridRule::Nyquist => self.check_resolution(grid_size, "diagnostics grid")?,
            GridRule::AliasFree => {
                if !is_alias_free(self.frequencies(), grid_size, 1) {
                    return Err(invalid(format!(
                        "grid of {grid_size} points aliases a nonzero frequency onto the mean"
                    )));
                }
            }
        }
        if grid_size > MAX_GRID_SAMPLES {
            return Err(Error::ResourceLimit(format!(
                "diagnostics grid of {grid_size} points exceeds {MAX_GRID_SAMPLES}"
            )));
        }
        if let Some(p) = fractions.iter().find(|p| !(**p > 0.0 && **p <= 1.0)) {
            return Err(invalid(format!("mass fraction {p} outside (0, 1]")));
        }
        let mut values = self.sample_midpoints(grid_size);
        let n = values.len();
        let total = compensated_sum(values.iter().copied());
        let mean = total / n as f64;
        values.sort_unstable_by(|a, b| b.total_cmp(a));

        let median = if n % 2 == 1 {
            values[n / 2]
        } else {
            0.5 * (values[n / 2 - 1] + values[n / 2])
        };

        let mut order: Vec<usize> = (0..fractions.len()).collect();
        order.sort_by(|&a, &b| fractions[a].total_cmp(&fractions[b]));
        let mut counts = vec![n; fractions.len()];
        let mut acc = 0.0;
        let mut next = 0;
        for (i, v) in values.iter().enumerate() {
            acc += v;
            while next < order.len() && acc >= fractions[order[next]] * total {
                counts[order[next]] = i + 1;
                next += 1;
            }
            if next == order.len() {
                break;
            }
        }
        let mass_fractions = fractions
            .iter()
            .zip(&counts)
            .map(|(&p, &c)| (p, c as f64 / n as f64))
            .collect();

        Ok(SingularityDiagnostics {
            order: self.order(),
            grid_size,
            rule,
            mean,
            median,
            mass_fractions,
        })
    }
}
