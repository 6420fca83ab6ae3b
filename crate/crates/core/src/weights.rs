//! Reverse Hölder, A∞ and L log L constants of piecewise-constant weights,
//! measured as suprema over dyadic interval families.

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::riesz::{GridRule, RieszProduct};
use crate::sum::compensated_sum;

/// A nonnegative density given by its averages on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSample {
    left: f64,
    right: f64,
    values: Vec<f64>,
}

impl WeightSample {
    pub fn new(interval: (f64, f64), values: Vec<f64>) -> Result<Self> {
        let (left, right) = interval;
        if !(left < right) || !left.is_finite() || !right.is_finite() {
            return Err(invalid(format!("weight interval [{left}, {right}] is empty")));
        }
        if values.is_empty() {
            return Err(invalid("weight sample has no cells"));
        }
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(invalid(format!("weight cell {i} has value {}", values[i])));
        }
        if values.iter().all(|v| *v == 0.0) {
            return Err(invalid("weight vanishes identically"));
        }
        Ok(Self { left, right, values })
    }

    /// Sample on `[0, 1]`.
    pub fn unit(values: Vec<f64>) -> Result<Self> {
        Self::new((0.0, 1.0), values)
    }

    /// `ℛ_j` at the midpoints of an `n`-cell grid on `[0, 1]`.
    pub fn riesz(rp: &RieszProduct, n: u64, rule: GridRule) -> Result<Self> {
        match rule {
            GridRule::Nyquist => {
                if n < rp.nyquist_size() {
                    return Err(Error::Resolution {
                        what: "Riesz weight grid".into(),
                        required: 1.0 / rp.nyquist_size() as f64,
                        actual: 1.0 / n as f64,
                    });
                }
            }
            GridRule::AliasFree => {
                if !crate::riesz::is_alias_free(rp.frequencies(), n, 1) {
                    return Err(invalid(format!("grid of {n} points aliases the mean")));
                }
            }
        }
        if n > crate::riesz::MAX_GRID_SAMPLES {
            return Err(Error::ResourceLimit(format!("weight grid of {n} cells")));
        }
        Self::unit(rp.sample_midpoints(n))
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.left, self.right)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(
            (self.left, self.right),
            self.values.iter().map(|v| v * c).collect(),
        )
    }
}

/// One dyadic subinterval, addressed as `index`-th of `2^depth`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Member {
    pub depth: u32,
    pub index: u64,
    pub cells: (usize, usize),
}

impl std::fmt::Display for Member {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "dyadic interval {}/{} at depth {} (cells {}..{})",
            self.index,
            1u64 << self.depth,
            self.depth,
            self.cells.0,
            self.cells.1
        )
    }
}

/// All dyadic subintervals of the base interval down to `max_depth`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntervalFamily {
    max_depth: u32,
}

impl IntervalFamily {
    pub fn new(max_depth: u32) -> Result<Self> {
        if max_depth > 40 {
            return Err(invalid(format!("family depth {max_depth} is too large")));
        }
        Ok(Self { max_depth })
    }

    /// The base interval alone.
    pub fn full() -> Self {
        Self { max_depth: 0 }
    }

    pub fn max_depth(&self) -> u32 {
        self.max_depth
    }

    pub fn member_count(&self) -> u64 {
        (1u64 << (self.max_depth + 1)) - 1
    }

    /// Members aligned to a grid of `cells` cells, coarsest first.
    pub fn members(&self, cells: usize) -> Result<Vec<Member>> {
        let finest = 1usize << self.max_depth;
        if cells % finest != 0 {
            return Err(invalid(format!(
                "{cells} cells cannot be split into {finest} aligned dyadic pieces"
            )));
        }
        let mut out = Vec::with_capacity(self.member_count() as usize);
        for depth in 0..=self.max_depth {
            let pieces = 1usize << depth;
            let width = cells / pieces;
            out.extend((0..pieces).map(|i| Member {
                depth,
                index: i as u64,
                cells: (i * width, (i + 1) * width),
            }));
        }
        Ok(out)
    }
}

fn mean(v: &[f64]) -> f64 {
    compensated_sum(v.iter().copied()) / v.len() as f64
}

fn checked_mean(v: &[f64], member: &Member) -> Result<f64> {
    let m = mean(v);
    if m <= 0.0 {
        return Err(Error::ZeroAverage(member.to_string()));
    }
    Ok(m)
}

/// Evaluates `per_member` on every member and returns the largest value, or
/// the error of the coarsest failing member.
fn sup_over<F>(w: &WeightSample, fam: &IntervalFamily, per_member: F) -> Result<f64>
where
    F: Fn(&[f64], &Member) -> Result<f64> + Sync,
{
    let members = fam.members(w.len())?;
    let values: Vec<Result<f64>> = members
        .par_iter()
        .map(|m| per_member(&w.values[m.cells.0..m.cells.1], m))
        .collect();
    let mut best = f64::NEG_INFINITY;
    for v in values {
        best = best.max(v?);
    }
    Ok(best)
}

/// `sup_Δ (⨍_Δ w^q)^{1/q} / ⨍_Δ w`.
pub fn rh_constant(w: &WeightSample, q: f64, fam: &IntervalFamily) -> Result<f64> {
    if !(q > 1.0) || !q.is_finite() {
        return Err(invalid(format!("reverse Hölder exponent must exceed 1, got {q}")));
    }
    sup_over(w, fam, |v, m| {
        let avg = checked_mean(v, m)?;
        // normalising by the average keeps w^q in range for large q
        let moment = compensated_sum(v.iter().map(|x| (x / avg).powf(q))) / v.len() as f64;
        Ok(moment.powf(1.0 / q))
    })
}

/// `sup_Δ (⨍_Δ w) · exp(⨍_Δ log w⁻¹)`.
pub fn a_inf_constant(w: &WeightSample, fam: &IntervalFamily) -> Result<f64> {
    if let Some(i) = w.values.iter().position(|v| *v == 0.0) {
        return Err(invalid(format!("weight vanishes on cell {i}; log w is undefined")));
    }
    sup_over(w, fam, |v, m| {
        let avg = checked_mean(v, m)?;
        let log_gap = compensated_sum(v.iter().map(|x| (x / avg).ln())) / v.len() as f64;
        Ok((-log_gap).exp())
    })
}

/// Young function `Φ(t) = t log(e + t)`.
pub fn young(t: f64) -> f64 {
    t * (std::f64::consts::E + t).ln()
}

/// The root `t*` of `Φ(t) = 1`.
pub fn young_unit_root() -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if young(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Relative bisection tolerance of the Luxemburg norm.
pub const LUXEMBURG_TOL: f64 = 1e-12;

/// Luxemburg norm of `v` (with respect to normalised counting measure)
/// divided by its average.
fn luxemburg_ratio(v: &[f64], avg: f64, t_star: f64) -> f64 {
    let peak = v.iter().fold(0.0f64, |a, &b| a.max(b)) / avg;
    let (mut lo, mut hi) = (1.0 / t_star, peak / t_star);
    if hi <= lo * (1.0 + LUXEMBURG_TOL) {
        return lo;
    }
    let modular = |lambda: f64| compensated_sum(v.iter().map(|x| young(x / (avg * lambda)))) / v.len() as f64;
    while hi - lo > LUXEMBURG_TOL * hi {
        let mid = 0.5 * (lo + hi);
        if modular(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `sup_Δ ‖w‖_{L log L(Δ)} / ⨍_Δ w` with the Luxemburg norm of `Φ`.
/// For constant weights this equals `1/t*`, not 1.
pub fn llogl_constant(w: &WeightSample, fam: &IntervalFamily) -> Result<f64> {
    let t_star = young_unit_root();
    sup_over(w, fam, |v, m| {
        let avg = checked_mean(v, m)?;
        Ok(luxemburg_ratio(v, avg, t_star))
    })
}

/// All three constants of one weight over one family.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightConstants {
    /// `(q, RH_q)` in increasing `q`.
    pub rh: Vec<(f64, f64)>,
    pub a_inf: f64,
    pub llogl: f64,
}

impl WeightConstants {
    pub fn compute(w: &WeightSample, qs: &[f64], fam: &IntervalFamily) -> Result<Self> {
        let mut qs = qs.to_vec();
        qs.sort_by(f64::total_cmp);
        qs.dedup();
        let rh = qs
            .iter()
            .map(|&q| rh_constant(w, q, fam).map(|c| (q, c)))
            .collect::<Result<_>>()?;
        Ok(Self {
            rh,
            a_inf: a_inf_constant(w, fam)?,
            llogl: llogl_constant(w, fam)?,
        })
    }

    pub fn rh_q(&self, q: f64) -> Option<f64> {
        self.rh.iter().find(|(p, _)| *p == q).map(|(_, c)| *c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_step() -> WeightSample {
        WeightSample::unit(vec![1.0, 1.0, 3.0, 3.0]).unwrap()
    }

    #[test]
    fn family_layout() {
        let fam = IntervalFamily::new(2).unwrap();
        assert_eq!(fam.member_count(), 7);
        let m = fam.members(8).unwrap();
        assert_eq!(m.len(), 7);
        assert_eq!(m[0].cells, (0, 8));
        assert_eq!(m[6].cells, (6, 8));
        assert!(fam.members(6).is_err());
    }

    #[test]
    fn sample_validation() {
        assert!(WeightSample::unit(vec![]).is_err());
        assert!(WeightSample::unit(vec![0.0, 0.0]).is_err());
        assert!(WeightSample::unit(vec![1.0, -1.0]).is_err());
        assert!(WeightSample::unit(vec![1.0, f64::NAN]).is_err());
        assert!(WeightSample::new((1.0, 1.0), vec![1.0]).is_err());
    }

    #[test]
    fn two_step_values() {
        let w = two_step();
        let full = IntervalFamily::full();
        assert!((rh_constant(&w, 2.0, &full).unwrap() - 5f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((a_inf_constant(&w, &full).unwrap() - 2.0 / 3f64.sqrt()).abs() < 1e-15);
        let deep = IntervalFamily::new(1).unwrap();
        assert!((a_inf_constant(&w, &deep).unwrap() - 2.0 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn errors_are_reported() {
        let w = WeightSample::unit(vec![0.0, 0.0, 1.0, 2.0]).unwrap();
        assert!(matches!(rh_constant(&w, 1.0, &IntervalFamily::full()), Err(Error::InvalidArgument(_))));
        let deep = IntervalFamily::new(1).unwrap();
        match rh_constant(&w, 2.0, &deep) {
            Err(Error::ZeroAverage(m)) => assert!(m.contains("0/2")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(a_inf_constant(&w, &IntervalFamily::full()), Err(Error::InvalidArgument(_))));
        assert!(matches!(llogl_constant(&w, &deep), Err(Error::ZeroAverage(_))));
    }

    #[test]
    fn unit_root() {
        let t = young_unit_root();
        assert!((young(t) - 1.0).abs() < 1e-15);
        assert!((t - 0.795703).abs() < 1e-6);
    }
}
