use emlab_core::carleson::{kp_functional, kp_local_density, kp_lower_bound_analytic, KpSampling, Region};
use emlab_core::construction::{make_lacunary, AmplitudeSchedule, CoefficientField, Variant};

fn level(j: usize, schedule: AmplitudeSchedule, variant: Variant) -> CoefficientField {
    CoefficientField::level(make_lacunary(j, variant).unwrap(), schedule, j).unwrap()
}

/// Maximum of `|∇α|² y` over a fine polar grid of the closed Whitney disk.
fn dense_oracle(f: &CoefficientField, x: f64, y: f64) -> f64 {
    let mut best = 0.0f64;
    let (nr, nt) = (1000, 1000);
    for a in 0..=nr {
        let rho = 0.5 * y * a as f64 / nr as f64 * (1.0 - 1e-12);
        for b in 0..nt {
            let t = std::f64::consts::TAU * b as f64 / nt as f64;
            let (px, py) = (x + rho * t.cos(), y + rho * t.sin());
            best = best.max(f.gradient_norm_squared(px, py).unwrap() * py);
        }
    }
    best
}

#[test]
fn local_density_approaches_dense_oracle() {
    let f = level(2, AmplitudeSchedule::Sqrt, Variant::Standard);
    let (x, y) = (0.37, 0.11);
    let oracle = dense_oracle(&f, x, y);
    let mut last = 0.0;
    for n in [1, 4, 16, 64, 256, 1024, 4096, 16384] {
        let v = kp_local_density(&f, x, y, n).unwrap();
        assert!(v >= last);
        assert!(v <= oracle * (1.0 + 1e-6));
        last = v;
    }
    assert!(last >= 0.995 * oracle, "{last} vs {oracle}");
}

#[test]
fn constant_field_vanishes() {
    let f = level(3, AmplitudeSchedule::Zero, Variant::Standard);
    assert_eq!(kp_local_density(&f, 0.2, 0.05, 64).unwrap(), 0.0);
    let est = kp_functional(&f, &Region::unit(), &KpSampling::for_field(&f)).unwrap();
    assert_eq!(est.value, 0.0);
}

#[test]
fn density_scales_quadratically_in_amplitude() {
    let (s, t) = (0.3, 1.7);
    let a = level(3, AmplitudeSchedule::Scaled(s), Variant::Standard);
    let b = level(3, AmplitudeSchedule::Scaled(s * t), Variant::Standard);
    for (x, y) in [(0.1, 0.01), (0.52, 0.04), (0.77, 0.07)] {
        let da = kp_local_density(&a, x, y, 32).unwrap();
        let db = kp_local_density(&b, x, y, 32).unwrap();
        assert!((db - t * t * da).abs() <= 1e-12 * db);
    }
}

#[test]
fn standard_growth_dominates_lower_bound() {
    let mut last = 0.0;
    for j in 1..=4 {
        let f = level(j, AmplitudeSchedule::Sqrt, Variant::Standard);
        let est = kp_functional(&f, &Region::unit(), &KpSampling::for_field(&f)).unwrap();
        let lb = kp_lower_bound_analytic(j, f.pair(), AmplitudeSchedule::Sqrt).unwrap();
        assert!(est.value >= lb.value, "j={j}: {} < {}", est.value, lb.value);
        assert!(est.value > last);
        assert!(est.value / j as f64 >= lb.c0);
        last = est.value;
    }
}

#[test]
fn strong_lower_bound_grows_like_fifth_power() {
    let pair = make_lacunary(5, Variant::Strong).unwrap();
    for j in 1..=5 {
        let lb = kp_lower_bound_analytic(j, &pair, AmplitudeSchedule::Sqrt).unwrap();
        assert!(lb.value >= lb.c0 * (j as f64).powi(5) * (1.0 - 1e-12));
    }
}

#[test]
fn nested_refinement_never_decreases() {
    let f = level(2, AmplitudeSchedule::Sqrt, Variant::Standard);
    let base = KpSampling {
        ball_centers: 2,
        radii_per_center: 1,
        quad_points: 64,
        sup_samples: 4,
    };
    let v0 = kp_functional(&f, &Region::unit(), &base).unwrap().value;
    for refined in [
        KpSampling { ball_centers: 4, ..base },
        KpSampling { radii_per_center: 2, ..base },
        KpSampling { sup_samples: 8, ..base },
    ] {
        assert!(kp_functional(&f, &Region::unit(), &refined).unwrap().value >= v0);
    }
}
