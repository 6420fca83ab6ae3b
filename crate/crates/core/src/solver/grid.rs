use crate::construction::CoefficientField;
use crate::error::{invalid, Error, Result};

/// Grid cells per unit frequency (and per unit layer scale) demanded by the solver.
pub const RESOLUTION_FACTOR: f64 = 16.0;

/// Minimum cell count in either direction.
pub const MIN_CELLS: usize = 8;

/// Side of the rectangle a boundary face lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Bottom,
    Top,
    Left,
    Right,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Bottom, Side::Top, Side::Left, Side::Right];

    pub fn name(self) -> &'static str {
        match self {
            Side::Bottom => "bottom",
            Side::Top => "top",
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Cell-centred grid on `[x0, x1] × [0, y1]`. Unknowns sit at cell centres;
/// Dirichlet data sit at the midpoints of the boundary faces, ordered bottom,
/// top (both left to right), left, right (both bottom to top).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x0: f64,
    pub x1: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub fn new(x0: f64, x1: f64, y1: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(x0 < x1) || !(y1 > 0.0) || !x0.is_finite() || !x1.is_finite() || !y1.is_finite() {
            return Err(invalid(format!("rectangle [{x0}, {x1}] × [0, {y1}] is degenerate")));
        }
        if nx < MIN_CELLS || ny < MIN_CELLS {
            return Err(invalid(format!("grid {nx}×{ny} has fewer than {MIN_CELLS} cells per side")));
        }
        if nx.checked_mul(ny).is_none_or(|n| n > 1 << 28) {
            return Err(Error::ResourceLimit(format!("grid {nx}×{ny} is too large")));
        }
        Ok(Self { x0, x1, y1, nx, ny })
    }

    /// Coarsest grid on the rectangle that resolves a level field.
    pub fn resolving(field: &CoefficientField, x0: f64, x1: f64, y1: f64) -> Result<Self> {
        let (fx, fy) = required_spacing(field);
        let nx = ((x1 - x0) / fx - 1e-9).ceil().max(MIN_CELLS as f64) as usize;
        let ny = (y1 / fy - 1e-9).ceil().max(MIN_CELLS as f64) as usize;
        Self::new(x0, x1, y1, nx, ny)
    }

    pub fn hx(&self) -> f64 {
        (self.x1 - self.x0) / self.nx as f64
    }

    pub fn hy(&self) -> f64 {
        self.y1 / self.ny as f64
    }

    pub fn cells(&self) -> usize {
        self.nx * self.ny
    }

    pub fn index(&self, i: usize, l: usize) -> usize {
        l * self.nx + i
    }

    pub fn center(&self, i: usize, l: usize) -> (f64, f64) {
        (
            self.x0 + (i as f64 + 0.5) * self.hx(),
            (l as f64 + 0.5) * self.hy(),
        )
    }

    /// Cell containing a point of the open rectangle.
    pub fn cell_at(&self, x: f64, y: f64) -> Result<(usize, usize)> {
        if !(x > self.x0 && x < self.x1 && y > 0.0 && y < self.y1) {
            return Err(invalid(format!("pole ({x}, {y}) is not inside the open rectangle")));
        }
        let i = (((x - self.x0) / self.hx()) as usize).min(self.nx - 1);
        let l = ((y / self.hy()) as usize).min(self.ny - 1);
        Ok((i, l))
    }

    pub fn boundary_len(&self) -> usize {
        2 * (self.nx + self.ny)
    }

    pub fn side_len(&self, side: Side) -> usize {
        match side {
            Side::Bottom | Side::Top => self.nx,
            Side::Left | Side::Right => self.ny,
        }
    }

    /// Offset of a side's first face in the boundary ordering.
    pub fn side_offset(&self, side: Side) -> usize {
        match side {
            Side::Bottom => 0,
            Side::Top => self.nx,
            Side::Left => 2 * self.nx,
            Side::Right => 2 * self.nx + self.ny,
        }
    }

    pub fn boundary_face(&self, b: usize) -> (Side, usize) {
        for side in Side::ALL {
            let off = self.side_offset(side);
            if b < off + self.side_len(side) {
                return (side, b - off);
            }
        }
        panic!("boundary index {b} out of range");
    }

    /// Midpoint of a boundary face.
    pub fn boundary_point(&self, b: usize) -> (f64, f64) {
        let (side, m) = self.boundary_face(b);
        match side {
            Side::Bottom => (self.center(m, 0).0, 0.0),
            Side::Top => (self.center(m, 0).0, self.y1),
            Side::Left => (self.x0, self.center(0, m).1),
            Side::Right => (self.x1, self.center(0, m).1),
        }
    }

    /// Interior cell adjacent to a boundary face.
    pub fn boundary_neighbor(&self, b: usize) -> usize {
        let (side, m) = self.boundary_face(b);
        match side {
            Side::Bottom => self.index(m, 0),
            Side::Top => self.index(m, self.ny - 1),
            Side::Left => self.index(0, m),
            Side::Right => self.index(self.nx - 1, m),
        }
    }

    /// Checks `hx ≤ 1/(16 h_j)` and `hy ≤ 1/(16 k_{j+1})` for the field.
    pub fn check_resolution(&self, field: &CoefficientField) -> Result<()> {
        if field.schedule().is_zero() {
            return Ok(());
        }
        let (fx, fy) = required_spacing(field);
        let tol = 1.0 + 1e-12;
        if self.hx() > fx * tol {
            return Err(Error::Resolution {
                what: "solver grid spacing in x".into(),
                required: fx,
                actual: self.hx(),
            });
        }
        if self.hy() > fy * tol {
            return Err(Error::Resolution {
                what: "solver grid spacing in y".into(),
                required: fy,
                actual: self.hy(),
            });
        }
        Ok(())
    }
}

/// `(1/(16 h_j), 1/(16 k_{j+1}))`, with `k_{j+1}` replaced by `2 k_j` past the end of the pair.
pub fn required_spacing(field: &CoefficientField) -> (f64, f64) {
    let j = field.depth();
    let pair = field.pair();
    let h = pair.h()[j - 1] as f64;
    let k_next = pair.k().get(j).map_or(2 * pair.k()[j - 1], |k| *k) as f64;
    (1.0 / (RESOLUTION_FACTOR * h), 1.0 / (RESOLUTION_FACTOR * k_next))
}
