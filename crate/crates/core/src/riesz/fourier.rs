use std::collections::BTreeMap;

use crate::construction::phase;
use crate::error::{Error, Result};
use crate::sum::compensated_sum;

/// Largest order whose `3^j`-term expansion is built by default.
pub const DEFAULT_MAX_ORDER: usize = 16;

/// Exact sparse expansion `Σ c_n e^{2πinx}` of a finite product of
/// `1 + a_i cos(2π h_i x)` factors, stored sorted by frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierExpansion {
    freqs: Vec<i64>,
    coeffs: Vec<f64>,
}

impl FourierExpansion {
    /// Distributes `∏ (1 + (a_i/2)(e^{+} + e^{−}))`. Factors with zero
    /// amplitude contribute nothing and are skipped.
    pub(crate) fn from_factors(factors: &[(u64, f64)]) -> Result<Self> {
        let mut freqs = vec![0i64];
        let mut coeffs = vec![1.0f64];
        let mut reach: i64 = 0;
        for &(h, a) in factors {
            if a == 0.0 {
                continue;
            }
            let h = i64::try_from(h)
                .map_err(|_| Error::ResourceLimit(format!("frequency {h} exceeds i64")))?;
            let half = 0.5 * a;
            if h > 2 * reach {
                // the three shifted copies are disjoint and already ordered
                let n = freqs.len();
                let mut f = Vec::with_capacity(3 * n);
                let mut c = Vec::with_capacity(3 * n);
                f.extend(freqs.iter().map(|&v| v - h));
                c.extend(coeffs.iter().map(|&v| v * half));
                f.extend_from_slice(&freqs);
                c.extend_from_slice(&coeffs);
                f.extend(freqs.iter().map(|&v| v + h));
                c.extend(coeffs.iter().map(|&v| v * half));
                freqs = f;
                coeffs = c;
            } else {
                let mut merged: BTreeMap<i64, f64> = BTreeMap::new();
                for (&v, &cv) in freqs.iter().zip(&coeffs) {
                    *merged.entry(v - h).or_default() += cv * half;
                    *merged.entry(v).or_default() += cv;
                    *merged.entry(v + h).or_default() += cv * half;
                }
                freqs = merged.keys().copied().collect();
                coeffs = merged.values().copied().collect();
            }
            reach += h;
        }
        Ok(Self { freqs, coeffs })
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn frequencies(&self) -> &[i64] {
        &self.freqs
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.freqs.iter().copied().zip(self.coeffs.iter().copied())
    }

    /// Coefficient at frequency `n` (zero off the support).
    pub fn coefficient(&self, n: i64) -> f64 {
        match self.freqs.binary_search(&n) {
            Ok(i) => self.coeffs[i],
            Err(_) => 0.0,
        }
    }

    /// Number of entries with a nonzero coefficient.
    pub fn nonzero_count(&self) -> usize {
        self.coeffs.iter().filter(|c| **c != 0.0).count()
    }

    /// `Σ |c_n|²`, the squared L² norm on `[0, 1]` by Parseval.
    pub fn l2_squared(&self) -> f64 {
        compensated_sum(self.coeffs.iter().map(|c| c * c))
    }

    /// Evaluates the real series at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        compensated_sum(self.iter().map(|(n, c)| {
            c * (std::f64::consts::TAU * signed_phase(n, x)).cos()
        }))
    }

    /// `∫₀ˣ` of the series, integrated term by term. Uses the conjugate
    /// symmetry `c_{−n} = c_n`, so only `n ≥ 0` is visited.
    pub fn antiderivative(&self, x: f64) -> f64 {
        let start = self.freqs.partition_point(|&n| n < 0);
        compensated_sum(self.freqs[start..].iter().zip(&self.coeffs[start..]).map(|(&n, &c)| {
            if n == 0 {
                c * x
            } else {
                let nf = n as f64;
                c * (std::f64::consts::TAU * phase(nf, x)).sin() / (std::f64::consts::PI * nf)
            }
        }))
    }
}

fn signed_phase(n: i64, x: f64) -> f64 {
    if n >= 0 {
        phase(n as f64, x)
    } else {
        -phase(-n as f64, x)
    }
}
