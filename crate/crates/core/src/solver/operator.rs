use super::grid::{Grid, Side};
use crate::construction::CoefficientField;
use crate::error::{invalid, Result};

/// How the y-conductivity of a face is formed from the two adjacent values of `α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FaceAverage {
    #[default]
    Arithmetic,
    Harmonic,
}

impl FaceAverage {
    fn combine(self, a: f64, b: f64) -> f64 {
        match self {
            FaceAverage::Arithmetic => 0.5 * (a + b),
            FaceAverage::Harmonic => 2.0 * a * b / (a + b),
        }
    }
}

impl std::str::FromStr for FaceAverage {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "arithmetic" => Ok(Self::Arithmetic),
            "harmonic" => Ok(Self::Harmonic),
            _ => Err(invalid(format!("unknown face average `{s}`"))),
        }
    }
}

/// Symmetric operator `y = A x` with a Jacobi diagonal.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
    fn diagonal(&self) -> Vec<f64>;
}

/// Two-point flux discretisation of `−div diag(1, α) ∇` on a cell-centred grid,
/// with the Dirichlet values eliminated onto the right-hand side.
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    grid: Grid,
    /// Face between `(i, l)` and `(i+1, l)`, stored at `l (nx−1) + i`.
    wx: Vec<f64>,
    /// Face between `(i, l)` and `(i, l+1)`, stored at `l nx + i`.
    wy: Vec<f64>,
    /// Boundary face conductivities in boundary order.
    wb: Vec<f64>,
    diag: Vec<f64>,
}

/// Assembles the operator of a level field; the grid must resolve it.
pub fn assemble(field: &CoefficientField, grid: &Grid, average: FaceAverage) -> Result<DiscreteOperator> {
    grid.check_resolution(field)?;
    let (nx, ny) = (grid.nx, grid.ny);
    let (hx, hy) = (grid.hx(), grid.hy());
    let ratio_x = hy / hx;
    let ratio_y = hx / hy;

    let mut alpha = vec![0.0; grid.cells()];
    for l in 0..ny {
        for i in 0..nx {
            let (x, y) = grid.center(i, l);
            alpha[grid.index(i, l)] = field.eval(x, y)?;
        }
    }

    let wx = vec![ratio_x; (nx - 1) * ny];
    let mut wy = vec![0.0; nx * (ny - 1)];
    for l in 0..ny - 1 {
        for i in 0..nx {
            let k = average.combine(alpha[grid.index(i, l)], alpha[grid.index(i, l + 1)]);
            wy[l * nx + i] = k * ratio_y;
        }
    }

    // boundary faces sit half a cell from the adjacent centre
    let mut wb = vec![0.0; grid.boundary_len()];
    for (b, w) in wb.iter_mut().enumerate() {
        let (side, _) = grid.boundary_face(b);
        *w = match side {
            Side::Left | Side::Right => 2.0 * ratio_x,
            Side::Bottom | Side::Top => {
                let (px, py) = grid.boundary_point(b);
                let k = average.combine(alpha[grid.boundary_neighbor(b)], field.eval(px, py)?);
                2.0 * k * ratio_y
            }
        };
    }

    let mut op = DiscreteOperator {
        grid: *grid,
        wx,
        wy,
        wb,
        diag: Vec::new(),
    };
    op.diag = op.compute_diagonal();
    Ok(op)
}

impl DiscreteOperator {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn boundary_weights(&self) -> &[f64] {
        &self.wb
    }

    pub fn x_face(&self, i: usize, l: usize) -> f64 {
        self.wx[l * (self.grid.nx - 1) + i]
    }

    pub fn y_face(&self, i: usize, l: usize) -> f64 {
        self.wy[l * self.grid.nx + i]
    }

    fn compute_diagonal(&self) -> Vec<f64> {
        let g = &self.grid;
        let mut d = vec![0.0; g.cells()];
        for l in 0..g.ny {
            for i in 0..g.nx {
                let c = g.index(i, l);
                if i + 1 < g.nx {
                    let w = self.x_face(i, l);
                    d[c] += w;
                    d[c + 1] += w;
                }
                if l + 1 < g.ny {
                    let w = self.y_face(i, l);
                    d[c] += w;
                    d[c + g.nx] += w;
                }
            }
        }
        for (b, w) in self.wb.iter().enumerate() {
            d[g.boundary_neighbor(b)] += w;
        }
        d
    }

    /// Right-hand side contributed by Dirichlet data in boundary order.
    pub fn boundary_rhs(&self, data: &[f64]) -> Result<Vec<f64>> {
        if data.len() != self.wb.len() {
            return Err(invalid(format!(
                "boundary data has {} values, the grid has {} boundary faces",
                data.len(),
                self.wb.len()
            )));
        }
        let mut rhs = vec![0.0; self.grid.cells()];
        for (b, (w, v)) in self.wb.iter().zip(data).enumerate() {
            rhs[self.grid.boundary_neighbor(b)] += w * v;
        }
        Ok(rhs)
    }

    /// Row sums of the full stencil, boundary couplings included.
    pub fn full_row_sums(&self) -> Vec<f64> {
        let csr = self.to_csr();
        let mut sums: Vec<f64> = (0..csr.dim())
            .map(|r| csr.values[csr.row_ptr[r]..csr.row_ptr[r + 1]].iter().sum())
            .collect();
        for (b, w) in self.wb.iter().enumerate() {
            sums[self.grid.boundary_neighbor(b)] -= w;
        }
        sums
    }

    /// Explicit sparse form of the interior system.
    pub fn to_csr(&self) -> CsrMatrix {
        let g = &self.grid;
        let n = g.cells();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::with_capacity(5 * n);
        let mut values = Vec::with_capacity(5 * n);
        row_ptr.push(0);
        for l in 0..g.ny {
            for i in 0..g.nx {
                let c = g.index(i, l);
                if l > 0 {
                    cols.push(c - g.nx);
                    values.push(-self.y_face(i, l - 1));
                }
                if i > 0 {
                    cols.push(c - 1);
                    values.push(-self.x_face(i - 1, l));
                }
                cols.push(c);
                values.push(self.diag[c]);
                if i + 1 < g.nx {
                    cols.push(c + 1);
                    values.push(-self.x_face(i, l));
                }
                if l + 1 < g.ny {
                    cols.push(c + g.nx);
                    values.push(-self.y_face(i, l));
                }
                row_ptr.push(cols.len());
            }
        }
        CsrMatrix {
            n,
            row_ptr,
            cols,
            values,
        }
    }

    /// Neighbour conductivities of cell `c` in the order west, east, south,
    /// north; a boundary face is reported as `Err(b)` with its boundary index.
    pub(crate) fn neighbors(&self, i: usize, l: usize) -> [(f64, std::result::Result<usize, usize>); 4] {
        let g = &self.grid;
        let c = g.index(i, l);
        let west = if i > 0 {
            (self.x_face(i - 1, l), Ok(c - 1))
        } else {
            let b = g.side_offset(Side::Left) + l;
            (self.wb[b], Err(b))
        };
        let east = if i + 1 < g.nx {
            (self.x_face(i, l), Ok(c + 1))
        } else {
            let b = g.side_offset(Side::Right) + l;
            (self.wb[b], Err(b))
        };
        let south = if l > 0 {
            (self.y_face(i, l - 1), Ok(c - g.nx))
        } else {
            let b = g.side_offset(Side::Bottom) + i;
            (self.wb[b], Err(b))
        };
        let north = if l + 1 < g.ny {
            (self.y_face(i, l), Ok(c + g.nx))
        } else {
            let b = g.side_offset(Side::Top) + i;
            (self.wb[b], Err(b))
        };
        [west, east, south, north]
    }
}

impl LinearOperator for DiscreteOperator {
    fn dim(&self) -> usize {
        self.grid.cells()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        for l in 0..ny {
            let row = l * nx;
            let xs = &x[row..row + nx];
            let ys = &mut y[row..row + nx];
            let d = &self.diag[row..row + nx];
            let wx = &self.wx[l * (nx - 1)..(l + 1) * (nx - 1)];
            ys[0] = d[0] * xs[0] - wx[0] * xs[1];
            for i in 1..nx - 1 {
                ys[i] = d[i] * xs[i] - wx[i - 1] * xs[i - 1] - wx[i] * xs[i + 1];
            }
            ys[nx - 1] = d[nx - 1] * xs[nx - 1] - wx[nx - 2] * xs[nx - 2];
            if l > 0 {
                let below = &x[row - nx..row];
                let w = &self.wy[row - nx..row];
                for i in 0..nx {
                    ys[i] -= w[i] * below[i];
                }
            }
            if l + 1 < ny {
                let above = &x[row + nx..row + 2 * nx];
                let w = &self.wy[row..row + nx];
                for i in 0..nx {
                    ys[i] -= w[i] * above[i];
                }
            }
        }
    }

    fn diagonal(&self) -> Vec<f64> {
        self.diag.clone()
    }
}

/// Compressed sparse rows.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    pub fn transpose(&self) -> CsrMatrix {
        let mut counts = vec![0usize; self.n + 1];
        for &c in &self.cols {
            counts[c + 1] += 1;
        }
        for r in 0..self.n {
            counts[r + 1] += counts[r];
        }
        let mut next = counts.clone();
        let mut cols = vec![0; self.cols.len()];
        let mut values = vec![0.0; self.values.len()];
        for r in 0..self.n {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.cols[k];
                cols[next[c]] = r;
                values[next[c]] = self.values[k];
                next[c] += 1;
            }
        }
        CsrMatrix {
            n: self.n,
            row_ptr: counts,
            cols,
            values,
        }
    }

    pub fn entry(&self, r: usize, c: usize) -> f64 {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.cols[range.clone()].binary_search(&c) {
            Ok(k) => self.values[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[range.clone()].iter().copied().zip(self.values[range].iter().copied())
    }
}

impl LinearOperator for CsrMatrix {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (r, out) in y.iter_mut().enumerate() {
            *out = self.row(r).map(|(c, v)| v * x[c]).sum();
        }
    }

    fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|r| self.entry(r, r)).collect()
    }
}
