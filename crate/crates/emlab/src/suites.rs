use emlab_core::carleson::{kp_functional, kp_lower_bound_analytic, KpSampling, Region};
use emlab_core::construction::{make_lacunary, AmplitudeSchedule, CoefficientField};
use emlab_core::riesz::{alias_free_size, GridRule, RieszProduct, MAX_GRID_SAMPLES};
use emlab_core::solver::{
    assemble, compare_kernel_to_riesz, doubling_report, elliptic_measure, measure_mc_oracle, pearson, pole_at,
    solve_dirichlet, FaceAverage, Grid, KernelConfig, Side, DEFAULT_KERNEL_CAP,
};
use emlab_core::weights::{young_unit_root, IntervalFamily, WeightConstants, WeightSample};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{RunConfig, Suite};
use crate::error::{CliError, Context};
use crate::svg::PlotSpec;
use crate::table::{Table, Value};

/// Exponent of the `lp(p)` column of the Riesz table.
pub const RIESZ_P: f64 = 4.0;

/// Mass fraction reported in the `mass90` column.
pub const MASS_FRACTION: f64 = 0.9;

/// Exponents of the reverse Hölder rows.
pub const WEIGHT_QS: [f64; 2] = [2.0, 4.0];

/// Deepest dyadic family of the weights suite.
pub const WEIGHT_DEPTH: u32 = 4;

/// Grids at most this large are used at full Nyquist resolution by the weights suite.
pub const WEIGHT_GRID_CAP: u64 = 1 << 22;

/// Rectangle `(x0, x1, y1)` and pole of the solver suites.
pub const DOMAIN: (f64, f64, f64) = (-2.0, 3.0, 3.0);
pub const POLE: (f64, f64) = (0.5, 2.0);

/// Random data vectors of the duality check.
pub const DUALITY_SAMPLES: usize = 20;

/// Walkers of the Monte Carlo oracle, run on grids up to `MC_CELL_CAP` cells.
pub const MC_WALKERS: usize = 10_000;
pub const MC_CELL_CAP: usize = 70_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub hard: bool,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct Plot {
    pub table: usize,
    pub file: String,
    pub spec: PlotSpec,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub config: RunConfig,
    pub tables: Vec<Table>,
    pub plots: Vec<Plot>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(config: &RunConfig) -> Self {
        Self {
            config: config.clone(),
            tables: Vec::new(),
            plots: Vec::new(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn hard(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            hard: true,
            passed,
            detail: detail.into(),
        });
    }

    fn soft(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            hard: false,
            passed,
            detail: detail.into(),
        });
    }

    fn plot(&mut self, table: usize, file: &str, title: &str, x: &str, ys: &[&str], log_y: bool) {
        let spec = PlotSpec {
            title: title.to_string(),
            x: x.to_string(),
            ys: ys.iter().map(|s| s.to_string()).collect(),
            log_y,
            caption: self.config.stamp(),
        };
        self.plots.push(Plot {
            table,
            file: file.to_string(),
            spec,
        });
    }

    pub fn all_hard_passed(&self) -> bool {
        self.checks.iter().filter(|c| c.hard).all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    /// Hard checks, then soft metrics, then notes.
    pub fn render(&self) -> String {
        let mut out = format!("# {}\n", self.config.stamp());
        for (title, hard) in [("hard checks", true), ("soft metrics", false)] {
            out.push_str(&format!("## {title}\n"));
            for c in self.checks.iter().filter(|c| c.hard == hard) {
                let status = if c.passed { "PASS" } else { "FAIL" };
                out.push_str(&format!("{status} {}: {}\n", c.name, c.detail));
            }
        }
        if !self.notes.is_empty() {
            out.push_str("## notes\n");
            for n in &self.notes {
                out.push_str(&format!("{n}\n"));
            }
        }
        out
    }
}

pub fn run_suite(cfg: &RunConfig) -> Result<SuiteReport, CliError> {
    cfg.schedule
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    match cfg.suite {
        Suite::Riesz => riesz_suite(cfg),
        Suite::Weights => weights_suite(cfg),
        Suite::Kp => kp_suite(cfg),
        Suite::Solve => solve_suite(cfg),
        Suite::KernelCompare => kernel_suite(cfg),
    }
}

fn sci(v: f64) -> String {
    format!("{v:.6e}")
}

/// Diagnostics grid: Nyquist when it fits in memory, otherwise the first
/// alias-free size from `2^24`.
fn diagnostics_grid(rp: &RieszProduct, cap: u64, step: u64) -> Result<(u64, GridRule), CliError> {
    let nyquist = rp.nyquist_size();
    if nyquist <= cap {
        return Ok((nyquist, GridRule::Nyquist));
    }
    let start = cap.next_power_of_two().min(MAX_GRID_SAMPLES / 2);
    alias_free_size(rp.frequencies(), 1, start, step, 100_000)
        .map(|n| (n, GridRule::AliasFree))
        .ok_or_else(|| CliError::Core {
            context: format!("order {}", rp.order()),
            source: emlab_core::Error::ResourceLimit("no alias-free grid found".into()),
        })
}

fn riesz_suite(cfg: &RunConfig) -> Result<SuiteReport, CliError> {
    let mut report = SuiteReport::new(cfg);
    let pair = make_lacunary(cfg.j_max, cfg.variant).context(|| "lacunary pair".into())?;
    let mut table = Table::new("riesz", &["j", "schedule", "l1", "l2", "l2_closed_form", "lp(p)", "median", "mass90"]);
    let fractions = [MASS_FRACTION];
    let mut l1_err = 0.0f64;
    let mut l1_quad_err = 0.0f64;
    let mut parseval_err = 0.0f64;
    let mut route_err = 0.0f64;
    let mut mean_err = 0.0f64;
    let mut median_above = Vec::new();
    let mut l2s = Vec::new();
    let mut cdf_ok = true;
    let mut cdf_checked = 0;
    for j in 1..=cfg.j_max {
        let ctx = || format!("riesz suite, j = {j}");
        let rp = RieszProduct::new(pair.clone(), cfg.schedule, j).context(ctx)?;
        let l1 = rp.l1().context(ctx)?;
        let l2 = rp.l2().context(ctx)?;
        let closed = rp.l2_closed_form();
        let lp = rp.lp(RIESZ_P).context(ctx)?;
        let l2_quad = rp.lp(2.0).context(ctx)?;
        let (n, rule) = diagnostics_grid(&rp, MAX_GRID_SAMPLES, 1)?;
        let d = rp.diagnostics_with(n, &fractions, rule).context(ctx)?;
        if rule == GridRule::AliasFree {
            report.notes.push(format!(
                "j={j}: median and mass90 from an alias-free grid of {n} points (Nyquist would need {})",
                rp.nyquist_size()
            ));
        } else {
            l1_quad_err = l1_quad_err.max((d.mean - 1.0).abs());
        }
        l1_err = l1_err.max((l1 - 1.0).abs());
        parseval_err = parseval_err.max((l2 * l2 - closed * closed).abs());
        route_err = route_err.max((l2 - l2_quad).abs());
        mean_err = mean_err.max((d.mean - 1.0).abs());
        if d.median > d.mean {
            median_above.push(j);
        }
        l2s.push(l2);
        if j <= 8 {
            let xs: Vec<f64> = (0..=256).map(|i| i as f64 / 256.0).collect();
            let f = rp.cdf_many(&xs).context(ctx)?;
            cdf_ok &= f[0] == 0.0 && (f[256] - 1.0).abs() < 1e-10 && f.windows(2).all(|w| w[1] >= w[0]);
            cdf_checked = j;
        }
        table.push(vec![
            j.into(),
            cfg.schedule.to_string().into(),
            l1.into(),
            l2.into(),
            closed.into(),
            lp.into(),
            d.median.into(),
            d.mass_support_fraction(MASS_FRACTION).into(),
        ]);
    }
    report.notes.push(format!("lp(p) column uses p = {RIESZ_P}"));
    report.hard("l1 identity (Fourier)", l1_err < 1e-10, format!("max |l1 - 1| = {}", sci(l1_err)));
    report.hard("l1 identity (quadrature)", l1_quad_err < 1e-10, format!("max |mean - 1| = {}", sci(l1_quad_err)));
    report.hard("Parseval closed form", parseval_err < 1e-10, format!("max |l2^2 - prod| = {}", sci(parseval_err)));
    report.hard("l2 Fourier vs quadrature", route_err < 1e-8, format!("max diff = {}", sci(route_err)));
    report.hard("grid mean", mean_err <= 1e-6, format!("max |mean - 1| = {}", sci(mean_err)));
    report.soft(
        "median <= mean",
        median_above.is_empty(),
        format!("orders with median above mean: {median_above:?}"),
    );
    if cdf_checked > 0 {
        report.hard("cdf monotone with unit mass", cdf_ok, format!("orders 1..={cdf_checked}, 257 points"));
    }
    if !cfg.schedule.is_zero() {
        let increasing = l2s.windows(2).all(|w| w[1] > w[0]);
        report.hard("l2 strictly increasing", increasing, format!("{} orders", l2s.len()));
    }
    let sqrt: Vec<f64> = (1..=cfg.j_max).map(|j| AmplitudeSchedule::Sqrt.l2_squared_product(j)).collect();
    let linear: Vec<f64> = (1..=cfg.j_max).map(|j| AmplitudeSchedule::Linear.l2_squared_product(j)).collect();
    let first_equal = sqrt[0] == linear[0];
    let dominate = sqrt.iter().zip(&linear).skip(1).all(|(s, l)| s > l);
    report.hard(
        "Sqrt products dominate Linear",
        first_equal && dominate,
        "equal at j = 1 (same first amplitude), strictly larger for j >= 2",
    );
    if cfg.j_max >= 2 {
        let last = linear[cfg.j_max - 1] - linear[cfg.j_max - 2];
        report.soft(
            "Linear product increments below 1e-6",
            last < 1e-6,
            format!("increment at j = {} is {}", cfg.j_max, sci(last)),
        );
    }
    report.tables.push(table);
    report.plot(0, "riesz", "Riesz product norms", "j", &["l2", "l2_closed_form", "lp(p)", "median", "mass90"], false);
    Ok(report)
}

fn weights_suite(cfg: &RunConfig) -> Result<SuiteReport, CliError> {
    let mut report = SuiteReport::new(cfg);
    let pair = make_lacunary(cfg.j_max, cfg.variant).context(|| "lacunary pair".into())?;
    let mut table = Table::new("weights", &["j", "schedule", "depth", "q", "rh_q", "a_inf", "llogl"]);
    let mut below_one = 0usize;
    let mut depth_ok = true;
    let mut q_ok = true;
    let mut parseval_err = 0.0f64;
    let mut rh2_full = Vec::new();
    let mut summary = Table::new("weights_rh2", &["j", "rh2_full", "rh2_closed_form"]);
    for j in 1..=cfg.j_max {
        let ctx = || format!("weights suite, j = {j}");
        let rp = RieszProduct::new(pair.clone(), cfg.schedule, j).context(ctx)?;
        let (n, rule) = diagnostics_grid(&rp, WEIGHT_GRID_CAP, 1 << WEIGHT_DEPTH)?;
        let w = WeightSample::riesz(&rp, n, rule).context(ctx)?;
        let mut last: Option<WeightConstants> = None;
        for depth in 0..=WEIGHT_DEPTH {
            let fam = IntervalFamily::new(depth).context(ctx)?;
            let c = WeightConstants::compute(&w, &WEIGHT_QS, &fam).context(ctx)?;
            let values = c.rh.iter().map(|r| r.1).chain([c.a_inf, c.llogl]);
            below_one += values.filter(|v| *v < 1.0 - 1e-12).count();
            q_ok &= c.rh.windows(2).all(|p| p[1].1 >= p[0].1);
            if let Some(prev) = &last {
                depth_ok &= c.a_inf >= prev.a_inf && c.llogl >= prev.llogl;
                depth_ok &= c.rh.iter().zip(&prev.rh).all(|(a, b)| a.1 >= b.1);
            }
            if depth == 0 {
                let rh2 = c.rh_q(2.0).unwrap_or(f64::NAN);
                if rule == GridRule::Nyquist {
                    parseval_err = parseval_err.max((rh2 - rp.l2_closed_form()).abs());
                } else {
                    report.notes.push(format!(
                        "j={j}: weight sampled on an alias-free grid of {n} cells; reverse Hölder values are grid estimates"
                    ));
                }
                rh2_full.push(rh2);
                summary.push(vec![j.into(), rh2.into(), rp.l2_closed_form().into()]);
            }
            for &(q, rh) in &c.rh {
                table.push(vec![
                    j.into(),
                    cfg.schedule.to_string().into(),
                    (depth as usize).into(),
                    q.into(),
                    rh.into(),
                    c.a_inf.into(),
                    c.llogl.into(),
                ]);
            }
            last = Some(c);
        }
    }

    let fixture = WeightSample::unit(vec![3.0; 64]).context(|| "constant fixture".into())?;
    let fc = WeightConstants::compute(&fixture, &WEIGHT_QS, &IntervalFamily::new(WEIGHT_DEPTH).unwrap())
        .context(|| "constant fixture".into())?;
    let fixture_err = fc.rh.iter().map(|r| (r.1 - 1.0).abs()).fold((fc.a_inf - 1.0).abs(), f64::max);
    let llogl_unit = 1.0 / young_unit_root();
    report.hard(
        "constant weight: RH_q = A_inf = 1",
        fixture_err < 1e-12,
        format!("max deviation {}", sci(fixture_err)),
    );
    report.hard(
        "constant weight: L log L = 1/t*",
        (fc.llogl - llogl_unit).abs() < 1e-10,
        format!("{} vs {}", sci(fc.llogl), sci(llogl_unit)),
    );
    report.hard("constants >= 1", below_one == 0, format!("{below_one} values below 1 - 1e-12"));
    report.hard("monotone in family depth", depth_ok, format!("depths 0..={WEIGHT_DEPTH}"));
    report.hard("RH monotone in q", q_ok, format!("q in {WEIGHT_QS:?}"));
    report.hard(
        "RH_2 on [0,1] equals closed-form L2 norm",
        parseval_err < 1e-8,
        format!("max diff {} over Nyquist grids", sci(parseval_err)),
    );
    if !cfg.schedule.is_zero() && rh2_full.len() >= 2 {
        let increasing = rh2_full.windows(2).all(|w| w[1] > w[0]);
        let growth = rh2_full[rh2_full.len() - 1] / rh2_full[0];
        report.soft("RH_2 strictly increasing in j", increasing, format!("RH_2(jmax)/RH_2(1) = {growth:.6}"));
    }
    report.tables.push(table);
    report.tables.push(summary);
    report.plot(1, "weights", "Reverse Hölder constant on [0,1]", "j", &["rh2_full", "rh2_closed_form"], false);
    Ok(report)
}

fn kp_suite(cfg: &RunConfig) -> Result<SuiteReport, CliError> {
    let mut report = SuiteReport::new(cfg);
    let pair = make_lacunary(cfg.j_max, cfg.variant).context(|| "lacunary pair".into())?;
    let region = Region::unit();
    let mut table = Table::new(
        "kp",
        &["j", "variant", "schedule", "kp_value", "kp_lower_bound", "center", "radius", "quad_points", "sup_samples"],
    );
    let mut values = Vec::new();
    let mut dominance = Vec::new();
    let mut c0 = None;
    for j in 1..=cfg.j_max {
        let ctx = || format!("kp suite, j = {j}");
        let field = CoefficientField::level(pair.clone(), cfg.schedule, j).context(ctx)?;
        let sampling = KpSampling::for_field(&field);
        let est = kp_functional(&field, &region, &sampling).context(ctx)?;
        let lb = match kp_lower_bound_analytic(j, &pair, cfg.schedule) {
            Ok(lb) => {
                c0 = Some(lb.c0);
                dominance.push((j, est.value >= lb.value));
                Some(lb.value)
            }
            Err(emlab_core::Error::InvalidArgument(_)) => None,
            Err(e) => return Err(e).context(ctx),
        };
        values.push(est.value);
        table.push(vec![
            j.into(),
            cfg.variant.to_string().into(),
            cfg.schedule.to_string().into(),
            est.value.into(),
            lb.into(),
            est.center.into(),
            est.radius.into(),
            sampling.quad_points.into(),
            sampling.sup_samples.into(),
        ]);
    }
    let flat = CoefficientField::level(pair.clone(), AmplitudeSchedule::Zero, 1).context(|| "constant field".into())?;
    let flat_value = kp_functional(&flat, &region, &KpSampling::for_field(&flat))
        .context(|| "constant field".into())?
        .value;
    report.hard("constant field functional is 0", flat_value == 0.0, format!("value {flat_value}"));
    match c0 {
        Some(c0) => {
            let failing: Vec<usize> = dominance.iter().filter(|d| !d.1).map(|d| d.0).collect();
            report.hard(
                "value >= analytic lower bound",
                failing.is_empty(),
                format!("c0 = {c0:.9}; failing j: {failing:?}"),
            );
        }
        None => report.notes.push(format!("no analytic lower bound for schedule {}", cfg.schedule)),
    }
    if !cfg.schedule.is_zero() {
        let increasing = values.windows(2).all(|w| w[1] > w[0]);
        report.soft("value strictly increasing in j", increasing, format!("{} orders", values.len()));
        let slope = values
            .iter()
            .enumerate()
            .map(|(i, v)| v / (i + 1) as f64)
            .fold(f64::INFINITY, f64::min);
        report.soft("value/j bounded below", slope > 0.0, format!("min value/j = {slope:.9}"));
    }
    report.tables.push(table);
    report.plot(0, "kp", "Kenig-Pipher functional", "j", &["kp_value", "kp_lower_bound"], true);
    Ok(report)
}

fn solver_pair(cfg: &RunConfig, j: usize) -> Result<emlab_core::construction::LacunaryPair, CliError> {
    make_lacunary(j + 1, cfg.variant).context(|| "lacunary pair".into())
}

fn solve_suite(cfg: &RunConfig) -> Result<SuiteReport, CliError> {
    let mut report = SuiteReport::new(cfg);
    let j = cfg.j_max;
    let ctx = || format!("solve suite, j = {j}");
    let pair = solver_pair(cfg, j)?;
    let field = CoefficientField::level(pair.clone(), cfg.schedule, j).context(ctx)?;
    let (x0, x1, y1) = DOMAIN;
    let grid = match cfg.grid {
        Some((nx, ny)) => Grid::new(x0, x1, y1, nx, ny),
        None => Grid::resolving(&field, x0, x1, y1),
    }
    .context(ctx)?;
    let op = assemble(&field, &grid, FaceAverage::Arithmetic).context(ctx)?;
    let pole = pole_at(&grid, POLE.0, POLE.1).context(ctx)?;
    let (measure, stats) = elliptic_measure(&op, pole, cfg.tol).context(ctx)?;
    report.notes.push(format!(
        "grid {}x{} on [{x0}, {x1}] x [0, {y1}], pole cell {pole:?}, Green solve {} iterations, residual {}",
        grid.nx,
        grid.ny,
        stats.iterations,
        sci(stats.relative_residual)
    ));

    let mut table = Table::new("measure", &["side", "cell_index", "mass"]);
    for side in Side::ALL {
        for (i, m) in measure.side(side).iter().enumerate() {
            table.push(vec![side.name().into(), i.into(), (*m).into()]);
        }
    }
    let mut sides = Table::new("measure_sides", &["side", "mass"]);
    for side in Side::ALL {
        sides.push(vec![side.name().into(), measure.side_total(side).into()]);
    }

    let mass_tol = (10.0 * cfg.tol).max(1e-9);
    let total = measure.total();
    report.hard("probability", (total - 1.0).abs() <= mass_tol, format!("sum = {total:.15}, tolerance {}", sci(mass_tol)));
    report.hard("nonnegativity", measure.min() >= -1e-12, format!("min mass {}", sci(measure.min())));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut duality = 0.0f64;
    for _ in 0..DUALITY_SAMPLES {
        let data: Vec<f64> = (0..grid.boundary_len()).map(|_| rng.gen()).collect();
        let u = solve_dirichlet(&op, &data, cfg.tol).context(ctx)?;
        duality = duality.max((u.at(&grid, pole) - measure.integrate(&data)).abs());
    }
    report.hard(
        "duality with Dirichlet solves",
        duality <= mass_tol,
        format!("max diff {} over {DUALITY_SAMPLES} data vectors", sci(duality)),
    );

    if grid.cells() <= MC_CELL_CAP {
        let mc = measure_mc_oracle(&op, pole, MC_WALKERS, cfg.seed).context(ctx)?;
        let mut worst = 0.0f64;
        for side in Side::ALL {
            let p = measure.side_total(side);
            let se = (p * (1.0 - p) / MC_WALKERS as f64).sqrt().max(1e-300);
            worst = worst.max((mc.side_total(side) - p).abs() / se);
        }
        report.hard(
            "Monte Carlo side masses",
            worst <= 4.0,
            format!("{MC_WALKERS} walkers, worst deviation {worst:.3} standard errors"),
        );
    } else {
        report.notes.push(format!("Monte Carlo oracle skipped on {} cells", grid.cells()));
    }

    let min_cells = 4;
    let doubling = doubling_report(&measure, min_cells).context(ctx)?;
    let flat = CoefficientField::level(pair, AmplitudeSchedule::Zero, j).context(ctx)?;
    let flat_op = assemble(&flat, &grid, FaceAverage::Arithmetic).context(ctx)?;
    let (flat_measure, _) = elliptic_measure(&flat_op, pole, cfg.tol).context(ctx)?;
    let baseline = doubling_report(&flat_measure, min_cells).context(ctx)?;
    let threshold = 1.5 * baseline.max_ratio;
    report.soft(
        "doubling ratio",
        doubling.max_ratio <= threshold,
        format!(
            "max w(2I)/w(I) = {:.6} at centre {:.6}, length {:.6}; Laplacian baseline {:.6}, threshold {:.6}",
            doubling.max_ratio, doubling.center, doubling.length, baseline.max_ratio, threshold
        ),
    );
    report.tables.push(table);
    report.tables.push(sides);
    report.plot(0, "measure", "Elliptic measure per boundary face", "cell_index", &["mass"], true);
    Ok(report)
}

fn kernel_suite(cfg: &RunConfig) -> Result<SuiteReport, CliError> {
    let mut report = SuiteReport::new(cfg);
    let top = cfg.j_max.min(DEFAULT_KERNEL_CAP);
    if cfg.j_max > DEFAULT_KERNEL_CAP {
        return Err(CliError::Usage(format!(
            "kernel-compare supports --jmax up to {DEFAULT_KERNEL_CAP}"
        )));
    }
    let mut summary = Table::new(
        "kernel",
        &[
            "j",
            "nx",
            "ny",
            "min_ratio",
            "max_ratio",
            "spread",
            "correlation",
            "envelope_correlation",
            "refined_min_ratio",
            "refined_max_ratio",
            "refinement_change",
        ],
    );
    let mass_tol = (10.0 * cfg.tol).max(1e-9);
    for j in 1..=top {
        let ctx = || format!("kernel-compare suite, j = {j}");
        let pair = solver_pair(cfg, j)?;
        let mut kc = KernelConfig::new(pair.clone(), cfg.schedule, j);
        kc.tol = cfg.tol;
        kc.grid = cfg.grid;
        let base = compare_kernel_to_riesz(&kc, DEFAULT_KERNEL_CAP).context(ctx)?;
        let refined = compare_kernel_to_riesz(&kc.refined(2).context(ctx)?, DEFAULT_KERNEL_CAP).context(ctx)?;
        let flat_cfg = KernelConfig {
            schedule: AmplitudeSchedule::Zero,
            grid: Some((base.grid.nx, base.grid.ny)),
            ..kc.clone()
        };
        let flat = compare_kernel_to_riesz(&flat_cfg, DEFAULT_KERNEL_CAP).context(ctx)?;
        let shape: Vec<f64> = base
            .profile
            .density
            .iter()
            .zip(&flat.profile.density)
            .map(|(k, k0)| (k / k0).ln())
            .collect();
        let log_r: Vec<f64> = base.riesz.iter().map(|r| r.ln()).collect();
        let envelope = pearson(&shape, &log_r);

        let change = ((refined.min_ratio - base.min_ratio) / base.min_ratio)
            .abs()
            .max(((refined.max_ratio - base.max_ratio) / base.max_ratio).abs());
        for (label, run) in [("base", &base), ("refined", &refined)] {
            let total = run.measure.total();
            report.hard(
                format!("j={j} {label} probability"),
                (total - 1.0).abs() <= mass_tol,
                format!("sum = {total:.15} on {}x{}", run.grid.nx, run.grid.ny),
            );
        }
        report.hard(
            format!("j={j} ratios finite and kernel positive"),
            base.min_ratio > 0.0 && base.max_ratio.is_finite(),
            format!("min {:.9}, max {:.9}", base.min_ratio, base.max_ratio),
        );
        report.hard(
            format!("j={j} refinement stability"),
            change < 0.2,
            format!("relative change of min/max ratio {change:.6} under 2x refinement"),
        );
        let corr_text = |c: Option<f64>| c.map_or("not applicable".to_string(), |c| format!("{c:.6}"));
        report.soft(
            format!("j={j} log-log correlation"),
            base.correlation.is_some_and(|c| c > 0.9),
            format!("{} (target > 0.9)", corr_text(base.correlation)),
        );
        report.soft(
            format!("j={j} envelope-corrected correlation"),
            envelope.is_some_and(|c| c > 0.9),
            format!("{} (kernel divided by the Laplacian kernel)", corr_text(envelope)),
        );

        let mut profile = Table::new(&format!("profile_j{j}"), &["x", "kernel_density", "riesz_value", "ratio"]);
        for k in 0..base.profile.len() {
            profile.push(vec![
                base.profile.x[k].into(),
                base.profile.density[k].into(),
                base.riesz[k].into(),
                base.ratio[k].into(),
            ]);
        }
        let opt = |c: Option<f64>| c.map_or(Value::Text("not applicable".into()), Value::Float);
        summary.push(vec![
            j.into(),
            base.grid.nx.into(),
            base.grid.ny.into(),
            base.min_ratio.into(),
            base.max_ratio.into(),
            base.spread().into(),
            opt(base.correlation),
            opt(envelope),
            refined.min_ratio.into(),
            refined.max_ratio.into(),
            change.into(),
        ]);
        report.notes.push(format!(
            "j={j}: Green solves {} / {} iterations on {}x{} / {}x{}",
            base.stats.iterations,
            refined.stats.iterations,
            base.grid.nx,
            base.grid.ny,
            refined.grid.nx,
            refined.grid.ny
        ));
        let index = report.tables.len();
        report.tables.push(profile);
        report.plot(
            index,
            &format!("profile_j{j}"),
            &format!("Boundary kernel ratio, j = {j}"),
            "x",
            &["ratio", "riesz_value"],
            false,
        );
    }
    report.tables.push(summary);
    Ok(report)
}
