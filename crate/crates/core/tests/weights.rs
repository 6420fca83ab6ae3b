use emlab_core::construction::{make_lacunary, AmplitudeSchedule, Variant};
use emlab_core::riesz::{GridRule, RieszProduct};
use emlab_core::weights::{
    a_inf_constant, llogl_constant, rh_constant, IntervalFamily, WeightConstants, WeightSample,
};
use proptest::prelude::*;

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    // f decreasing with a sign change on [lo, hi]
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn phi(t: f64) -> f64 {
    t * (std::f64::consts::E + t).ln()
}

#[test]
fn constant_weight() {
    let w = WeightSample::unit(vec![2.5; 64]).unwrap();
    let fam = IntervalFamily::new(6).unwrap();
    let c = WeightConstants::compute(&w, &[1.5, 2.0, 4.0], &fam).unwrap();
    for (_, r) in &c.rh {
        assert!((r - 1.0).abs() < 1e-12);
    }
    assert!((c.a_inf - 1.0).abs() < 1e-12);
    let t_star = bisect(|t| 1.0 - phi(t), 0.0, 1.0);
    assert!((c.llogl - 1.0 / t_star).abs() < 1e-10);
    assert!((c.llogl - 1.256751).abs() < 1e-6);
}

#[test]
fn two_step_llogl_matches_oracle() {
    let w = WeightSample::unit(vec![1.0, 3.0]).unwrap();
    let lambda = bisect(|l| 0.5 * phi(1.0 / l) + 0.5 * phi(3.0 / l) - 1.0, 0.1, 100.0);
    let got = llogl_constant(&w, &IntervalFamily::full()).unwrap();
    assert!((got - lambda / 2.0).abs() < 1e-9);
    let constant = llogl_constant(&WeightSample::unit(vec![1.0, 1.0]).unwrap(), &IntervalFamily::full()).unwrap();
    assert!(got > constant);
}

#[test]
fn riesz_weight_reverse_holder_is_parseval() {
    for schedule in [AmplitudeSchedule::Sqrt, AmplitudeSchedule::Scaled(0.9)] {
        for j in [1, 3, 6, 9] {
            let rp = RieszProduct::new(make_lacunary(j, Variant::Standard).unwrap(), schedule, j).unwrap();
            let w = WeightSample::riesz(&rp, rp.nyquist_size(), GridRule::Nyquist).unwrap();
            let rh = rh_constant(&w, 2.0, &IntervalFamily::full()).unwrap();
            assert!((rh - rp.l2_closed_form()).abs() < 1e-8, "{schedule} j={j}");
        }
    }
}

#[test]
fn coarse_riesz_weight_is_rejected() {
    let rp = RieszProduct::new(make_lacunary(3, Variant::Standard).unwrap(), AmplitudeSchedule::Sqrt, 3).unwrap();
    assert!(WeightSample::riesz(&rp, 512, GridRule::Nyquist).is_err());
}

fn weight_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..20.0, 32)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn constants_are_scale_invariant(values in weight_strategy(), c in 0.01f64..100.0) {
        let w = WeightSample::unit(values).unwrap();
        let v = w.scaled(c).unwrap();
        let fam = IntervalFamily::new(3).unwrap();
        let a = WeightConstants::compute(&w, &[2.0, 3.0], &fam).unwrap();
        let b = WeightConstants::compute(&v, &[2.0, 3.0], &fam).unwrap();
        for ((_, x), (_, y)) in a.rh.iter().zip(&b.rh) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        prop_assert!((a.a_inf - b.a_inf).abs() < 1e-9);
        prop_assert!((a.llogl - b.llogl).abs() < 1e-9);
    }

    #[test]
    fn constants_grow_with_depth(values in weight_strategy()) {
        let w = WeightSample::unit(values).unwrap();
        let mut last = (0.0, 0.0, 0.0);
        for d in 0..=5 {
            let fam = IntervalFamily::new(d).unwrap();
            let now = (
                rh_constant(&w, 2.0, &fam).unwrap(),
                a_inf_constant(&w, &fam).unwrap(),
                llogl_constant(&w, &fam).unwrap(),
            );
            prop_assert!(now.0 >= last.0 && now.1 >= last.1 && now.2 >= last.2);
            prop_assert!(now.0 >= 1.0 - 1e-12 && now.1 >= 1.0 - 1e-12 && now.2 >= 1.0 - 1e-12);
            last = now;
        }
    }

    #[test]
    fn reverse_holder_grows_with_q(values in weight_strategy()) {
        let w = WeightSample::unit(values).unwrap();
        let fam = IntervalFamily::new(2).unwrap();
        let c = WeightConstants::compute(&w, &[1.25, 1.5, 2.0, 3.0, 5.0, 8.0], &fam).unwrap();
        prop_assert!(c.rh.windows(2).all(|p| p[1].1 >= p[0].1));
    }
}
