//! Midpoint sampling of Riesz products on uniform grids `x_m = (m + ½)/n`.
//!
//! Factor phases are tracked as exact integer residues `h(2m+1) mod 2n`; a
//! complex rotor advances them between exact resynchronisations.

use std::collections::HashMap;

const RESYNC: u64 = 64;

/// Calls `visit` with `∏ (1 + a_i cos(2π h_i x_m))` for `m` in `start..end`.
pub(crate) fn scan_midpoints(
    factors: &[(u64, f64)],
    n: u64,
    start: u64,
    end: u64,
    mut visit: impl FnMut(f64),
) {
    let factors: Vec<(u64, f64)> = factors.iter().copied().filter(|f| f.1 != 0.0).collect();
    if factors.is_empty() {
        for _ in start..end {
            visit(1.0);
        }
        return;
    }
    let two_n = 2 * n as u128;
    let angle = |r: u128| std::f64::consts::PI * r as f64 / n as f64;
    let steps: Vec<(f64, f64)> = factors
        .iter()
        .map(|&(h, _)| {
            let t = angle((2 * h as u128) % two_n);
            (t.cos(), t.sin())
        })
        .collect();
    let amps: Vec<f64> = factors.iter().map(|f| f.1).collect();
    let mut cos = vec![0.0; factors.len()];
    let mut sin = vec![0.0; factors.len()];
    let mut m = start;
    while m < end {
        for (i, &(h, _)) in factors.iter().enumerate() {
            let r = (h as u128 * (2 * m as u128 + 1)) % two_n;
            let t = angle(r);
            cos[i] = t.cos();
            sin[i] = t.sin();
        }
        let block_end = (m + RESYNC).min(end);
        while m < block_end {
            let mut v = 1.0;
            for i in 0..amps.len() {
                v *= 1.0 + amps[i] * cos[i];
                let (c, s) = (cos[i], sin[i]);
                cos[i] = c * steps[i].0 - s * steps[i].1;
                sin[i] = s * steps[i].0 + c * steps[i].1;
            }
            visit(v);
            m += 1;
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Number of grid points in one period of the product, `n / gcd(h)` when the
/// common divisor of the frequencies also divides `n`.
pub(crate) fn period_points(factors: &[(u64, f64)], n: u64) -> u64 {
    let g = factors
        .iter()
        .filter(|f| f.1 != 0.0)
        .fold(0, |acc, f| gcd(acc, f.0));
    if g == 0 {
        // constant product
        1
    } else if g > 1 && n % g == 0 {
        n / g
    } else {
        n
    }
}

/// All signed sums `Σ ε_i h_i`, `ε_i ∈ {−d, …, d}`.
fn signed_sums(h: &[u64], degree: i128) -> Vec<i128> {
    let mut sums = vec![0i128];
    for &hi in h {
        let mut next = Vec::with_capacity(sums.len() * (2 * degree as usize + 1));
        for e in -degree..=degree {
            next.extend(sums.iter().map(|&s| s + e * hi as i128));
        }
        sums = next;
    }
    sums
}

/// True when no nonzero signed sum `Σ ε_i h_i` with `|ε_i| ≤ degree` is a
/// multiple of `n`. Then the `n`-point midpoint rule integrates every
/// trigonometric polynomial supported on those sums exactly; degree 1 covers
/// the Riesz product itself, degree 2 its square.
///
/// Meet-in-the-middle over the two halves of the frequency list.
pub fn is_alias_free(h: &[u64], n: u64, degree: u32) -> bool {
    if n == 0 {
        return false;
    }
    let n_i = n as i128;
    let d = degree as i128;
    let (lo, hi) = h.split_at(h.len() / 2);
    let mut by_residue: HashMap<i128, Vec<i128>> = HashMap::new();
    for s in signed_sums(lo, d) {
        by_residue.entry(s.rem_euclid(n_i)).or_default().push(s);
    }
    for t in signed_sums(hi, d) {
        let want = (-t).rem_euclid(n_i);
        if let Some(list) = by_residue.get(&want) {
            if list.iter().any(|&s| s + t != 0) {
                return false;
            }
        }
    }
    true
}

/// Smallest `n ≥ min_n` (stepping by `step`) that [`is_alias_free`] accepts,
/// trying at most `max_tries` candidates.
pub fn alias_free_size(h: &[u64], degree: u32, min_n: u64, step: u64, max_tries: usize) -> Option<u64> {
    let step = step.max(1);
    let first = min_n.div_ceil(step) * step;
    (0..max_tries as u64)
        .map(|t| first + t * step)
        .find(|&n| is_alias_free(h, n, degree))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotor_scan_matches_direct_evaluation() {
        let factors = [(4u64, 0.3), (16, 0.2), (64, 0.1), (256, 0.05)];
        let n = 16 * 256 + 7;
        let mut got = Vec::new();
        scan_midpoints(&factors, n, 3, 700, |v| got.push(v));
        for (k, v) in got.iter().enumerate() {
            let x = (k as f64 + 3.5) / n as f64;
            let direct: f64 = factors
                .iter()
                .map(|&(h, a)| 1.0 + a * (std::f64::consts::TAU * h as f64 * x).cos())
                .product();
            assert!((v - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn alias_detection() {
        let h = [4u64, 16, 64];
        // 16 - 4·... : 16 divides h_2 itself
        assert!(!is_alias_free(&h, 16, 1));
        // Nyquist-sized grids are always alias free
        assert!(is_alias_free(&h, 2 * (4 + 16 + 64) + 1, 1));
        assert!(is_alias_free(&h, 4 * (4 + 16 + 64) + 1, 2));
        // 60 = 64 - 4
        assert!(!is_alias_free(&h, 60, 1));
        // brute force over small moduli
        for n in 1..200u64 {
            let mut alias = false;
            for a in -1i64..=1 {
                for b in -1i64..=1 {
                    for c in -1i64..=1 {
                        let s = 4 * a + 16 * b + 64 * c;
                        if s != 0 && s % n as i64 == 0 {
                            alias = true;
                        }
                    }
                }
            }
            assert_eq!(is_alias_free(&h, n, 1), !alias, "n = {n}");
        }
    }

    #[test]
    fn period_reduction() {
        assert_eq!(period_points(&[(4, 0.1), (16, 0.1)], 256), 64);
        assert_eq!(period_points(&[(4, 0.1), (16, 0.1)], 255), 255);
        assert_eq!(period_points(&[(4, 0.0), (6, 0.1)], 12), 2);
    }
}
