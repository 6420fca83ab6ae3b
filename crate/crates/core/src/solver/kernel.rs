use super::grid::{Grid, Side};
use super::measure::{elliptic_measure, pole_at, EllipticMeasure};
use super::operator::{assemble, FaceAverage};
use super::pcg::{SolveStats, DEFAULT_TOL};
use crate::construction::{AmplitudeSchedule, CoefficientField, LacunaryPair};
use crate::error::{invalid, Error, Result};
use crate::riesz::RieszProduct;

/// Bottom-edge mass densities over the cells whose centres lie in `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonKernelProfile {
    /// Bottom cell index of the first entry.
    pub first_cell: usize,
    pub x: Vec<f64>,
    pub density: Vec<f64>,
    pub cell_width: f64,
}

impl PoissonKernelProfile {
    pub fn mass(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.cell_width
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

pub fn poisson_kernel_profile(measure: &EllipticMeasure) -> Result<PoissonKernelProfile> {
    let grid = measure.grid();
    if grid.x0 > -1.0 || grid.x1 < 1.0 {
        return Err(invalid(format!(
            "bottom edge [{}, {}] does not cover [-1, 1]",
            grid.x0, grid.x1
        )));
    }
    let hx = grid.hx();
    let bottom = measure.side(Side::Bottom);
    let cells: Vec<usize> = (0..grid.nx)
        .filter(|&i| {
            let x = grid.center(i, 0).0;
            (-1.0..=1.0).contains(&x)
        })
        .collect();
    Ok(PoissonKernelProfile {
        first_cell: cells[0],
        x: cells.iter().map(|&i| grid.center(i, 0).0).collect(),
        density: cells.iter().map(|&i| bottom[i] / hx).collect(),
        cell_width: hx,
    })
}

/// Setup of one kernel-versus-Riesz comparison.
#[derive(Debug, Clone)]
pub struct KernelConfig {
    pub pair: LacunaryPair,
    pub schedule: AmplitudeSchedule,
    pub j: usize,
    /// `(x0, x1, y1)` of the rectangle.
    pub domain: (f64, f64, f64),
    pub pole: (f64, f64),
    /// Cell counts; `None` picks the coarsest resolving grid.
    pub grid: Option<(usize, usize)>,
    pub tol: f64,
    pub average: FaceAverage,
}

/// Largest `j` compared unless the caller raises it.
pub const DEFAULT_KERNEL_CAP: usize = 3;

impl KernelConfig {
    pub fn new(pair: LacunaryPair, schedule: AmplitudeSchedule, j: usize) -> Self {
        Self {
            pair,
            schedule,
            j,
            domain: (-2.0, 3.0, 3.0),
            pole: (0.5, 2.0),
            grid: None,
            tol: DEFAULT_TOL,
            average: FaceAverage::Arithmetic,
        }
    }

    pub fn field(&self) -> Result<CoefficientField> {
        CoefficientField::level(self.pair.clone(), self.schedule, self.j)
    }

    pub fn build_grid(&self) -> Result<Grid> {
        let (x0, x1, y1) = self.domain;
        match self.grid {
            Some((nx, ny)) => Grid::new(x0, x1, y1, nx, ny),
            None => Grid::resolving(&self.field()?, x0, x1, y1),
        }
    }

    /// Same setup with both cell counts multiplied by `factor`.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        let g = self.build_grid()?;
        Ok(Self {
            grid: Some((g.nx * factor, g.ny * factor)),
            ..self.clone()
        })
    }
}

#[derive(Debug, Clone)]
pub struct KernelComparison {
    pub grid: Grid,
    pub stats: SolveStats,
    pub measure: EllipticMeasure,
    pub profile: PoissonKernelProfile,
    pub riesz: Vec<f64>,
    /// `𝒦̂ / (c ℛ_j)` with `c = mean 𝒦̂ / mean ℛ_j`.
    pub ratio: Vec<f64>,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Pearson correlation of `log 𝒦̂` and `log ℛ_j`; `None` when `ℛ_j` is constant.
    pub correlation: Option<f64>,
}

impl KernelComparison {
    pub fn spread(&self) -> f64 {
        self.max_ratio / self.min_ratio
    }
}

pub fn compare_kernel_to_riesz(cfg: &KernelConfig, cap: usize) -> Result<KernelComparison> {
    if cfg.j == 0 || cfg.j > cap {
        return Err(invalid(format!("kernel comparison supports 1 ≤ j ≤ {cap}, got {}", cfg.j)));
    }
    let field = cfg.field()?;
    let grid = cfg.build_grid()?;
    let op = assemble(&field, &grid, cfg.average)?;
    let pole = pole_at(&grid, cfg.pole.0, cfg.pole.1)?;
    let (measure, stats) = elliptic_measure(&op, pole, cfg.tol)?;
    let profile = poisson_kernel_profile(&measure)?;
    if let Some(k) = profile.density.iter().position(|d| !(*d > 0.0)) {
        return Err(Error::DegenerateCell {
            index: profile.first_cell + k,
            x: profile.x[k],
        });
    }
    let rp = RieszProduct::new(cfg.pair.clone(), cfg.schedule, cfg.j)?;
    let riesz: Vec<f64> = profile.x.iter().map(|&x| rp.eval(x)).collect();
    let n = riesz.len() as f64;
    let c = (profile.density.iter().sum::<f64>() / n) / (riesz.iter().sum::<f64>() / n);
    let ratio: Vec<f64> = profile.density.iter().zip(&riesz).map(|(k, r)| k / (c * r)).collect();
    let min_ratio = ratio.iter().copied().fold(f64::INFINITY, f64::min);
    let max_ratio = ratio.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let log_k: Vec<f64> = profile.density.iter().map(|v| v.ln()).collect();
    let log_r: Vec<f64> = riesz.iter().map(|v| v.ln()).collect();
    let correlation = pearson(&log_k, &log_r);
    Ok(KernelComparison {
        grid,
        stats,
        measure,
        profile,
        riesz,
        ratio,
        min_ratio,
        max_ratio,
        correlation,
    })
}

/// `None` if either series is constant.
pub fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    let scale = 1e-24 * n;
    if saa <= scale * ma.abs().max(1.0) || sbb <= scale * mb.abs().max(1.0) {
        return None;
    }
    Some(sab / (saa * sbb).sqrt())
}

/// Largest `ω(2I)/ω(I)` over concentric bottom intervals with `2I ⊂ [−1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoublingReport {
    pub max_ratio: f64,
    pub center: f64,
    pub length: f64,
    pub intervals: usize,
}

/// Intervals `I` have lengths `2^{−m}` down to `min_cells` bottom cells and
/// centres on the lattice `ℓ/2 ℤ`.
pub fn doubling_report(measure: &EllipticMeasure, min_cells: usize) -> Result<DoublingReport> {
    let grid = measure.grid();
    if grid.x0 > -1.0 || grid.x1 < 1.0 {
        return Err(invalid("doubling report needs the bottom edge to cover [-1, 1]"));
    }
    let bottom = measure.side(Side::Bottom);
    let hx = grid.hx();
    let mut prefix = vec![0.0; bottom.len() + 1];
    for (i, m) in bottom.iter().enumerate() {
        prefix[i + 1] = prefix[i] + m;
    }
    let mass = |a: f64, b: f64| {
        // cells whose centres lie in [a, b)
        let lo = ((a - grid.x0) / hx - 0.5).ceil().max(0.0) as usize;
        let hi = (((b - grid.x0) / hx - 0.5).ceil().max(0.0) as usize).min(bottom.len());
        prefix[hi.max(lo)] - prefix[lo]
    };
    let mut best = DoublingReport {
        max_ratio: 0.0,
        center: 0.0,
        length: 0.0,
        intervals: 0,
    };
    let mut len = 1.0f64;
    while len >= min_cells.max(1) as f64 * hx {
        let step = len / 2.0;
        let count = (2.0 / step).round() as i64;
        for s in 0..=count {
            let c = -1.0 + s as f64 * step;
            if c - len < -1.0 - 1e-12 || c + len > 1.0 + 1e-12 {
                continue;
            }
            let inner = mass(c - len / 2.0, c + len / 2.0);
            let outer = mass(c - len, c + len);
            if inner > 0.0 {
                best.intervals += 1;
                let r = outer / inner;
                if r > best.max_ratio {
                    best.max_ratio = r;
                    best.center = c;
                    best.length = len;
                }
            }
        }
        len /= 2.0;
    }
    if best.intervals == 0 {
        return Err(invalid("no admissible intervals for the doubling report"));
    }
    Ok(best)
}
