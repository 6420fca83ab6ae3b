use emlab_core::construction::{make_lacunary, AmplitudeSchedule, CoefficientField, Variant};
use emlab_core::solver::{
    assemble, compare_kernel_to_riesz, doubling_report, elliptic_measure, measure_mc_oracle, pcg, pcg_capped,
    poisson_kernel_profile, solve_dirichlet, FaceAverage, Grid, KernelConfig, LinearOperator, Side,
};
use emlab_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn laplacian_field() -> CoefficientField {
    CoefficientField::level(make_lacunary(2, Variant::Standard).unwrap(), AmplitudeSchedule::Zero, 1).unwrap()
}

fn level(j: usize) -> CoefficientField {
    CoefficientField::level(make_lacunary(j + 1, Variant::Standard).unwrap(), AmplitudeSchedule::Sqrt, j).unwrap()
}

fn unit_square(n: usize) -> Grid {
    Grid::new(0.0, 1.0, 1.0, n, n).unwrap()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[test]
fn laplacian_stencil() {
    let g = Grid::new(0.0, 2.0, 1.0, 16, 10).unwrap();
    let op = assemble(&laplacian_field(), &g, FaceAverage::Arithmetic).unwrap();
    let (hx, hy) = (g.hx(), g.hy());
    for l in 0..g.ny {
        for i in 0..g.nx - 1 {
            assert_eq!(op.x_face(i, l), hy / hx);
        }
    }
    for l in 0..g.ny - 1 {
        for i in 0..g.nx {
            assert!((op.y_face(i, l) - hx / hy).abs() < 1e-15);
        }
    }
}

#[test]
fn operator_is_symmetric_and_conservative() {
    let f = level(2);
    let g = Grid::resolving(&f, 0.0, 0.5, 0.25).unwrap();
    for average in [FaceAverage::Arithmetic, FaceAverage::Harmonic] {
        let op = assemble(&f, &g, average).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = op.dim();
        let (mut au, mut av) = (vec![0.0; n], vec![0.0; n]);
        for _ in 0..100 {
            let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            op.apply(&u, &mut au);
            op.apply(&v, &mut av);
            let (a, b) = (dot(&au, &v), dot(&u, &av));
            assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()));
        }
        let scale = op.diagonal().iter().copied().fold(0.0, f64::max);
        assert!(op.full_row_sums().iter().all(|s| s.abs() <= 1e-13 * scale));
        let csr = op.to_csr();
        for r in 0..n {
            let mut off = 0.0;
            for (c, v) in csr.row(r) {
                if c == r {
                    assert!(v > 0.0);
                } else {
                    assert!(v < 0.0);
                    off += v;
                }
            }
            assert!(csr.entry(r, r) + off >= -1e-12 * scale);
        }
        let mut x = vec![0.0; n];
        let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        csr.apply(&u, &mut x);
        op.apply(&u, &mut au);
        assert!(x.iter().zip(&au).all(|(a, b)| (a - b).abs() < 1e-12 * scale));
    }
}

#[test]
fn under_resolved_grid_is_rejected() {
    let f = level(2);
    let g = Grid::new(0.0, 1.0, 1.0, 200, 200).unwrap();
    assert!(matches!(assemble(&f, &g, FaceAverage::Arithmetic), Err(Error::Resolution { .. })));
}

#[test]
fn constants_and_linear_data_are_exact() {
    let g = unit_square(33);
    let op = assemble(&laplacian_field(), &g, FaceAverage::Arithmetic).unwrap();
    let ones = vec![1.0; g.boundary_len()];
    let u = solve_dirichlet(&op, &ones, 1e-12).unwrap();
    assert!(u.values.iter().all(|v| (v - 1.0).abs() < 1e-10));

    let data: Vec<f64> = (0..g.boundary_len()).map(|b| g.boundary_point(b).0).collect();
    let u = solve_dirichlet(&op, &data, 1e-12).unwrap();
    for l in 0..g.ny {
        for i in 0..g.nx {
            assert!((u.at(&g, (i, l)) - g.center(i, l).0).abs() < 1e-8);
        }
    }

    let f = level(1);
    let g = Grid::resolving(&f, 0.0, 1.0, 0.5).unwrap();
    let op = assemble(&f, &g, FaceAverage::Arithmetic).unwrap();
    let u = solve_dirichlet(&op, &vec![1.0; g.boundary_len()], 1e-12).unwrap();
    assert!(u.values.iter().all(|v| (v - 1.0).abs() < 1e-10));
}

#[test]
fn maximum_principle() {
    let f = level(2);
    let g = Grid::resolving(&f, 0.0, 0.5, 0.25).unwrap();
    let op = assemble(&f, &g, FaceAverage::Arithmetic).unwrap();
    let tol = 1e-10;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let data: Vec<f64> = (0..g.boundary_len()).map(|_| rng.gen()).collect();
        let (lo, hi) = data.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        let eps = 10.0 * tol * (hi - lo);
        let u = solve_dirichlet(&op, &data, tol).unwrap();
        assert!(u.values.iter().all(|&v| v >= lo - eps && v <= hi + eps));
    }
}

#[test]
fn tolerance_is_validated() {
    let g = unit_square(8);
    let op = assemble(&laplacian_field(), &g, FaceAverage::Arithmetic).unwrap();
    assert!(solve_dirichlet(&op, &vec![0.0; g.boundary_len()], 0.1).is_err());
    assert!(solve_dirichlet(&op, &vec![0.0; 3], 1e-8).is_err());
}

#[test]
fn convergence_failure_carries_history() {
    let g = unit_square(64);
    let op = assemble(&laplacian_field(), &g, FaceAverage::Arithmetic).unwrap();
    let rhs = op.boundary_rhs(&(0..g.boundary_len()).map(|b| (b % 7) as f64).collect::<Vec<_>>()).unwrap();
    match pcg_capped(&op, &rhs, 1e-10, 3) {
        Err(Error::Convergence { history, iterations, .. }) => {
            assert_eq!(iterations, 3);
            assert_eq!(history.len(), 3);
            assert!(history.windows(2).all(|h| h[1] > 0.0));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn center_of_square_sees_quarter_per_side() {
    let g = unit_square(129);
    let op = assemble(&laplacian_field(), &g, FaceAverage::Arithmetic).unwrap();
    let pole = g.cell_at(0.5, 0.5).unwrap();
    let (w, _) = elliptic_measure(&op, pole, 1e-12).unwrap();
    assert!((w.total() - 1.0).abs() < 1e-9);
    assert!(w.min() >= -1e-12);
    for side in Side::ALL {
        assert!((w.side_total(side) - 0.25).abs() < 1e-6, "{side}");
    }
}

#[test]
fn measure_is_dual_to_dirichlet_solves() {
    let f = level(2);
    let g = Grid::resolving(&f, 0.0, 0.5, 0.25).unwrap();
    let op = assemble(&f, &g, FaceAverage::Arithmetic).unwrap();
    let pole = g.cell_at(0.3, 0.1).unwrap();
    let (w, _) = elliptic_measure(&op, pole, 1e-12).unwrap();
    assert!((w.total() - 1.0).abs() < 1e-9);
    assert!(w.min() >= -1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..20 {
        let data: Vec<f64> = (0..g.boundary_len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let u = solve_dirichlet(&op, &data, 1e-12).unwrap();
        assert!((u.at(&g, pole) - w.integrate(&data)).abs() < 1e-9);
    }
}

#[test]
fn transposed_system_gives_same_measure() {
    let f = level(2);
    let g = Grid::resolving(&f, 0.0, 0.5, 0.25).unwrap();
    let op = assemble(&f, &g, FaceAverage::Arithmetic).unwrap();
    let pole = g.cell_at(0.2, 0.15).unwrap();
    let (w, _) = elliptic_measure(&op, pole, 1e-12).unwrap();
    let t = op.to_csr().transpose();
    let mut load = vec![0.0; g.cells()];
    load[g.index(pole.0, pole.1)] = 1.0;
    let (green, _) = pcg(&t, &load, 1e-12).unwrap();
    for (b, m) in w.masses().iter().enumerate() {
        let other = op.boundary_weights()[b] * green[g.boundary_neighbor(b)];
        assert!((m - other).abs() < 1e-10);
    }
}

#[test]
fn monte_carlo_agrees_with_green_flux() {
    let f = level(2);
    let g = Grid::resolving(&f, 0.0, 1.0, 0.5).unwrap();
    let op = assemble(&f, &g, FaceAverage::Arithmetic).unwrap();
    let pole = g.cell_at(0.4, 0.2).unwrap();
    let (w, _) = elliptic_measure(&op, pole, 1e-12).unwrap();
    let walkers = 20_000;
    let mc = measure_mc_oracle(&op, pole, walkers, 99).unwrap();
    assert!((mc.total() - 1.0).abs() < 1e-12);
    for side in Side::ALL {
        let p = w.side_total(side);
        let se = (p * (1.0 - p) / walkers as f64).sqrt();
        assert!((mc.side_total(side) - p).abs() <= 4.0 * se, "{side}: {} vs {p}", mc.side_total(side));
    }
    assert_eq!(mc, measure_mc_oracle(&op, pole, walkers, 99).unwrap());
}

#[test]
fn single_walker_is_a_unit_mass() {
    let g = unit_square(16);
    let op = assemble(&laplacian_field(), &g, FaceAverage::Arithmetic).unwrap();
    let mc = measure_mc_oracle(&op, (8, 8), 1, 5).unwrap();
    assert_eq!(mc.masses().iter().filter(|m| **m == 1.0).count(), 1);
    assert_eq!(mc.masses().iter().filter(|m| **m == 0.0).count(), g.boundary_len() - 1);
}

#[test]
fn laplacian_profile_is_positive_and_unimodal() {
    let g = Grid::new(-2.0, 3.0, 3.0, 200, 120).unwrap();
    let op = assemble(&laplacian_field(), &g, FaceAverage::Arithmetic).unwrap();
    let pole = g.cell_at(0.5, 2.0).unwrap();
    let (w, _) = elliptic_measure(&op, pole, 1e-12).unwrap();
    let p = poisson_kernel_profile(&w).unwrap();
    assert!(p.density.iter().all(|d| *d > 0.0));
    assert!(p.mass() <= 1.0);
    let peak = p.density.iter().enumerate().fold(0, |b, (i, d)| if *d > p.density[b] { i } else { b });
    assert!((p.x[peak] - 0.5).abs() < 0.1);
    assert!(p.density[..=peak].windows(2).all(|v| v[1] >= v[0]));
    assert!(p.density[peak..].windows(2).all(|v| v[1] <= v[0]));
    assert!(doubling_report(&w, 4).unwrap().max_ratio >= 1.0);

    let narrow = Grid::new(-0.5, 1.0, 1.0, 16, 16).unwrap();
    let op = assemble(&laplacian_field(), &narrow, FaceAverage::Arithmetic).unwrap();
    let (w, _) = elliptic_measure(&op, (8, 8), 1e-10).unwrap();
    assert!(poisson_kernel_profile(&w).is_err());
}

#[test]
fn level_one_profile_is_modulated_at_its_frequency() {
    let pair = make_lacunary(2, Variant::Standard).unwrap();
    let flat = compare_kernel_to_riesz(&KernelConfig::new(pair.clone(), AmplitudeSchedule::Zero, 1), 3).unwrap();
    let level1 = compare_kernel_to_riesz(&KernelConfig::new(pair, AmplitudeSchedule::Sqrt, 1), 3).unwrap();
    assert_eq!(flat.grid, level1.grid);
    assert!(flat.correlation.is_none());
    let rel: Vec<f64> = level1.profile.density.iter().zip(&flat.profile.density).map(|(a, b)| a / b - 1.0).collect();
    // projection of the relative change onto frequencies 1..=8 on [-1, 1]
    let power = |freq: f64| {
        let (mut c, mut s) = (0.0, 0.0);
        for (x, v) in level1.profile.x.iter().zip(&rel) {
            c += v * (std::f64::consts::TAU * freq * x).cos();
            s += v * (std::f64::consts::TAU * freq * x).sin();
        }
        c * c + s * s
    };
    let best = (1..=8).max_by(|a, b| power(*a as f64).total_cmp(&power(*b as f64))).unwrap();
    assert_eq!(best, 4);
    assert!(level1.correlation.unwrap() > 0.0);
}

#[test]
fn kernel_comparison_validates_inputs() {
    let pair = make_lacunary(5, Variant::Standard).unwrap();
    assert!(compare_kernel_to_riesz(&KernelConfig::new(pair.clone(), AmplitudeSchedule::Sqrt, 4), 3).is_err());
    let coarse = KernelConfig { grid: Some((64, 64)), ..KernelConfig::new(pair, AmplitudeSchedule::Sqrt, 2) };
    assert!(matches!(compare_kernel_to_riesz(&coarse, 3), Err(Error::Resolution { .. })));
}
