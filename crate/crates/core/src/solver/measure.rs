use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::grid::{Grid, Side};
use super::operator::DiscreteOperator;
use super::pcg::{pcg, SolveStats};
use crate::error::{invalid, Result};

/// Discrete harmonic extension of Dirichlet data given in boundary order.
#[derive(Debug, Clone)]
pub struct DirichletSolution {
    pub values: Vec<f64>,
    pub stats: SolveStats,
}

impl DirichletSolution {
    pub fn at(&self, grid: &Grid, cell: (usize, usize)) -> f64 {
        self.values[grid.index(cell.0, cell.1)]
    }
}

pub fn solve_dirichlet(op: &DiscreteOperator, data: &[f64], tol: f64) -> Result<DirichletSolution> {
    let rhs = op.boundary_rhs(data)?;
    let (values, stats) = pcg(op, &rhs, tol)?;
    Ok(DirichletSolution { values, stats })
}

/// Masses of the boundary faces seen from a pole, in boundary order.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipticMeasure {
    grid: Grid,
    pole: (usize, usize),
    masses: Vec<f64>,
}

impl EllipticMeasure {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn pole(&self) -> (usize, usize) {
        self.pole
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn side(&self, side: Side) -> &[f64] {
        let off = self.grid.side_offset(side);
        &self.masses[off..off + self.grid.side_len(side)]
    }

    pub fn side_total(&self, side: Side) -> f64 {
        self.side(side).iter().sum()
    }

    pub fn total(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn min(&self) -> f64 {
        self.masses.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `Σ_b ω_b χ_b`.
    pub fn integrate(&self, data: &[f64]) -> f64 {
        self.masses.iter().zip(data).map(|(m, d)| m * d).sum()
    }
}

fn check_pole(grid: &Grid, pole: (usize, usize)) -> Result<()> {
    if pole.0 >= grid.nx || pole.1 >= grid.ny {
        return Err(invalid(format!(
            "pole cell {pole:?} outside the {}×{} grid",
            grid.nx, grid.ny
        )));
    }
    Ok(())
}

/// Solves `A g = e_P` and returns `ω_b = w_b g(c(b))`, the weights for which
/// `u(P) = Σ_b ω_b χ_b` holds for every data vector `χ`.
pub fn elliptic_measure(op: &DiscreteOperator, pole: (usize, usize), tol: f64) -> Result<(EllipticMeasure, SolveStats)> {
    let grid = *op.grid();
    check_pole(&grid, pole)?;
    let mut load = vec![0.0; grid.cells()];
    load[grid.index(pole.0, pole.1)] = 1.0;
    let (green, stats) = pcg(op, &load, tol)?;
    Ok((from_green(op, pole, &green), stats))
}

pub(crate) fn from_green(op: &DiscreteOperator, pole: (usize, usize), green: &[f64]) -> EllipticMeasure {
    let grid = *op.grid();
    let masses = op
        .boundary_weights()
        .iter()
        .enumerate()
        .map(|(b, w)| w * green[grid.boundary_neighbor(b)])
        .collect();
    EllipticMeasure { grid, pole, masses }
}

/// Pole cell at a point of the open rectangle.
pub fn pole_at(grid: &Grid, x: f64, y: f64) -> Result<(usize, usize)> {
    grid.cell_at(x, y)
}

/// Hitting frequencies of the random walk whose step probabilities are
/// proportional to the face conductivities. Walker `w` draws from the
/// ChaCha8 stream `w` of the master seed.
pub fn measure_mc_oracle(op: &DiscreteOperator, pole: (usize, usize), walkers: usize, seed: u64) -> Result<EllipticMeasure> {
    let grid = *op.grid();
    check_pole(&grid, pole)?;
    if walkers == 0 {
        return Err(invalid("at least one walker is required"));
    }
    // cumulative step probabilities west, east, south per cell
    let mut table = Vec::with_capacity(grid.cells());
    for l in 0..grid.ny {
        for i in 0..grid.nx {
            let nb = op.neighbors(i, l);
            let total: f64 = nb.iter().map(|(w, _)| w).sum();
            let c0 = nb[0].0 / total;
            let c1 = c0 + nb[1].0 / total;
            let c2 = c1 + nb[2].0 / total;
            table.push([c0, c1, c2]);
        }
    }
    let walk = |w: usize| -> usize {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(w as u64);
        let (mut i, mut l) = pole;
        loop {
            let t = &table[grid.index(i, l)];
            let u: f64 = rng.gen();
            let dir = if u < t[0] {
                0
            } else if u < t[1] {
                1
            } else if u < t[2] {
                2
            } else {
                3
            };
            match dir {
                0 if i == 0 => return grid.side_offset(Side::Left) + l,
                0 => i -= 1,
                1 if i + 1 == grid.nx => return grid.side_offset(Side::Right) + l,
                1 => i += 1,
                2 if l == 0 => return grid.side_offset(Side::Bottom) + i,
                2 => l -= 1,
                _ if l + 1 == grid.ny => return grid.side_offset(Side::Top) + i,
                _ => l += 1,
            }
        }
    };
    let nb = grid.boundary_len();
    let counts = (0..walkers)
        .into_par_iter()
        .fold(
            || vec![0u64; nb],
            |mut acc, w| {
                acc[walk(w)] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; nb],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let masses = counts.iter().map(|&c| c as f64 / walkers as f64).collect();
    Ok(EllipticMeasure { grid, pole, masses })
}
