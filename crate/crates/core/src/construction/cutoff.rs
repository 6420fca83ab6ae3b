//! Even C^∞ cutoff `ψ` equal to 1 on `[-1, 1]` and 0 outside `(-2, 2)`:
//! `ψ(t) = f(2−|t|) / (f(2−|t|) + f(|t|−1))` with `f(s) = exp(−1/s)` for `s > 0`.

fn bump(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

fn bump_slope(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp() / (s * s)
    } else {
        0.0
    }
}

pub fn cutoff(t: f64) -> f64 {
    let s = t.abs();
    if s <= 1.0 {
        return 1.0;
    }
    if s >= 2.0 {
        return 0.0;
    }
    let u = bump(2.0 - s);
    let v = bump(s - 1.0);
    u / (u + v)
}

pub fn cutoff_derivative(t: f64) -> f64 {
    let s = t.abs();
    if s <= 1.0 || s >= 2.0 {
        return 0.0;
    }
    let (u, du) = (bump(2.0 - s), bump_slope(2.0 - s));
    let (v, dv) = (bump(s - 1.0), bump_slope(s - 1.0));
    let denom = u + v;
    // dψ/ds with du/ds = −f'(2−s), dv/ds = f'(s−1)
    let d_ds = -(du * v + u * dv) / (denom * denom);
    d_ds * t.signum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plateau_support_and_midpoint() {
        assert_eq!(cutoff(0.5), 1.0);
        assert_eq!(cutoff(-1.0), 1.0);
        assert_eq!(cutoff(3.0), 0.0);
        assert_eq!(cutoff(-2.0), 0.0);
        assert!((cutoff(1.5) - 0.5).abs() < 1e-15);
        assert!((cutoff(-1.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn even_bounded_and_monotone_on_transition() {
        let mut prev = 1.0;
        for i in 0..=2000 {
            let t = 1.0 + i as f64 / 2000.0;
            let v = cutoff(t);
            assert_eq!(v, cutoff(-t));
            assert!((0.0..=1.0).contains(&v));
            assert!(v <= prev);
            assert_eq!(v + (1.0 - v), 1.0);
            prev = v;
        }
    }

    #[test]
    fn derivative_matches_central_differences() {
        let step = 1e-6;
        for i in 1..400 {
            let t = -2.2 + 4.4 * i as f64 / 400.0;
            let fd = (cutoff(t + step) - cutoff(t - step)) / (2.0 * step);
            let an = cutoff_derivative(t);
            assert!((fd - an).abs() <= 1e-6 * (1.0 + an.abs()), "t={t}: {fd} vs {an}");
        }
    }
}
