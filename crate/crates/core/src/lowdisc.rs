//! Deterministic low-discrepancy point sets.
//!
//! Every generator here is prefix-nested: the first `n` points of a request
//! for `2n` points are exactly the points of a request for `n`. Maxima taken
//! over these sets can therefore only grow when the sample count grows.

/// Radical inverse of `index` in the given base.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut out = 0.0;
    while index > 0 {
        out += (index % base) as f64 * scale;
        index /= base;
        scale *= inv;
    }
    out
}

/// First `n` van der Corput points in `[0, 1)`.
pub fn van_der_corput(n: usize) -> Vec<f64> {
    (0..n as u64).map(|i| radical_inverse(i, 2)).collect()
}

/// First `n` offsets inside the open unit disk.
///
/// Index 0 is the centre; index `i ≥ 1` maps the Halton pair `(u, v)` in bases
/// 2 and 3 to polar coordinates `(√u, 2πv)`, which is area-uniform.
pub fn unit_disk_points(n: usize) -> Vec<(f64, f64)> {
    (0..n as u64)
        .map(|i| {
            if i == 0 {
                return (0.0, 0.0);
            }
            let r = radical_inverse(i, 2).sqrt();
            let theta = std::f64::consts::TAU * radical_inverse(i, 3);
            (r * theta.cos(), r * theta.sin())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_inverse_base_two() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(2, 2), 0.25);
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert_eq!(radical_inverse(5, 3), 2.0 / 3.0 + 1.0 / 9.0);
    }

    #[test]
    fn disk_points_are_nested_and_inside() {
        let small = unit_disk_points(64);
        let large = unit_disk_points(128);
        assert_eq!(&large[..64], &small[..]);
        assert!(large.iter().all(|(x, y)| x * x + y * y < 1.0));
    }
}
