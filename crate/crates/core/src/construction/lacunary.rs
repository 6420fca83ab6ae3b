use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// Growth condition tying frequencies to layer scales.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `h_j ≥ j·k_j`.
    Standard,
    /// `h_j ≥ j³·k_j`.
    Strong,
}

impl Variant {
    /// Multiplier `w(j)` in `h_j ≥ w(j)·k_j`.
    pub fn weight(self, j: usize) -> u64 {
        let j = j as u64;
        match self {
            Variant::Standard => j,
            Variant::Strong => j * j * j,
        }
    }

    fn exponent(self) -> u32 {
        match self {
            Variant::Standard => 1,
            Variant::Strong => 3,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Standard => "standard",
            Variant::Strong => "strong",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "standard" => Ok(Variant::Standard),
            "strong" => Ok(Variant::Strong),
            other => Err(invalid(format!("unknown variant `{other}`"))),
        }
    }
}

/// One violated inequality. Indices are 1-based, as in `h_1, h_2, …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Empty,
    LengthMismatch { h_len: usize, k_len: usize },
    TooSmall { list: char, index: usize, value: u64 },
    /// `h[j+1] ≥ 4·h[j]` fails.
    FrequencyRatio { j: usize },
    /// `k[j+1] ≥ 2·k[j]` fails.
    ScaleRatio { j: usize },
    /// `h[j] ≥ w(j)·k[j]` fails.
    Dominance { j: usize, variant: Variant },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::Empty => f.write_str("sequences are empty"),
            Violation::LengthMismatch { h_len, k_len } => {
                write!(f, "length mismatch: {h_len} frequencies, {k_len} scales")
            }
            Violation::TooSmall { list, index, value } => {
                write!(f, "{list}[{index}] = {value} is below 2")
            }
            Violation::FrequencyRatio { j } => write!(f, "h[{}] ≥ 4·h[{j}] at j={j}", j + 1),
            Violation::ScaleRatio { j } => write!(f, "k[{}] ≥ 2·k[{j}] at j={j}", j + 1),
            Violation::Dominance { j, variant } => match variant.exponent() {
                1 => write!(f, "h[{j}] ≥ {j}·k[{j}] at j={j}"),
                e => write!(f, "h[{j}] ≥ {j}^{e}·k[{j}] at j={j}"),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Frequencies `h_j` and layer scales `k_j` with their declared growth variant.
///
/// The pair may hold data that violates its invariants; [`LacunaryPair::validate`]
/// reports them and [`LacunaryPair::new`] refuses them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LacunaryPair {
    h: Vec<u64>,
    k: Vec<u64>,
    variant: Variant,
}

impl LacunaryPair {
    /// Builds a pair and rejects it unless every invariant holds.
    pub fn new(h: Vec<u64>, k: Vec<u64>, variant: Variant) -> Result<Self> {
        let pair = Self::unchecked(h, k, variant);
        let report = pair.validate();
        if report.is_ok() {
            Ok(pair)
        } else {
            let list: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
            Err(invalid(format!("lacunary pair violates: {}", list.join("; "))))
        }
    }

    pub fn unchecked(h: Vec<u64>, k: Vec<u64>, variant: Variant) -> Self {
        Self { h, k, variant }
    }

    pub fn h(&self) -> &[u64] {
        &self.h
    }

    pub fn k(&self) -> &[u64] {
        &self.k
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn len(&self) -> usize {
        self.h.len().min(self.k.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `h_j` for 1-based `j`.
    pub fn frequency(&self, j: usize) -> Result<u64> {
        self.check_index(j)?;
        Ok(self.h[j - 1])
    }

    /// `k_j` for 1-based `j`.
    pub fn scale(&self, j: usize) -> Result<u64> {
        self.check_index(j)?;
        Ok(self.k[j - 1])
    }

    pub(crate) fn check_index(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.len() {
            return Err(invalid(format!(
                "index {j} outside the pair (length {})",
                self.len()
            )));
        }
        Ok(())
    }

    /// Lists every violated inequality; never fails.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.h.is_empty() && self.k.is_empty() {
            violations.push(Violation::Empty);
        }
        if self.h.len() != self.k.len() {
            violations.push(Violation::LengthMismatch {
                h_len: self.h.len(),
                k_len: self.k.len(),
            });
        }
        for (list, values) in [('h', &self.h), ('k', &self.k)] {
            for (i, &value) in values.iter().enumerate() {
                if value < 2 {
                    violations.push(Violation::TooSmall {
                        list,
                        index: i + 1,
                        value,
                    });
                }
            }
        }
        let n = self.len();
        for j in 1..n {
            if self.h[j] < self.h[j - 1].saturating_mul(4) {
                violations.push(Violation::FrequencyRatio { j });
            }
            if self.k[j] < self.k[j - 1].saturating_mul(2) {
                violations.push(Violation::ScaleRatio { j });
            }
        }
        for j in 1..=n {
            if self.h[j - 1] < self.variant.weight(j).saturating_mul(self.k[j - 1]) {
                violations.push(Violation::Dominance {
                    j,
                    variant: self.variant,
                });
            }
        }
        ValidationReport { violations }
    }

    /// Renders the three-line text form.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for LacunaryPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(f, "h: {}", join(&self.h))?;
        writeln!(f, "k: {}", join(&self.k))?;
        writeln!(f, "variant: {}", self.variant)
    }
}

impl FromStr for LacunaryPair {
    type Err = Error;

    /// Parses the text form and validates the result.
    fn from_str(text: &str) -> Result<Self> {
        let (mut h, mut k, mut variant) = (None, None, None);
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| invalid(format!("malformed line `{line}`")))?;
            let numbers = || -> Result<Vec<u64>> {
                value
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| invalid(format!("bad integer `{t}`"))))
                    .collect()
            };
            match key.trim() {
                "h" => h = Some(numbers()?),
                "k" => k = Some(numbers()?),
                "variant" => variant = Some(value.parse()?),
                other => return Err(invalid(format!("unknown key `{other}`"))),
            }
        }
        let missing = |name: &str| invalid(format!("missing `{name}` line"));
        Self::new(
            h.ok_or_else(|| missing("h"))?,
            k.ok_or_else(|| missing("k"))?,
            variant.ok_or_else(|| missing("variant"))?,
        )
    }
}

/// Minimal deterministic pair: `k_1 = 2`, `k_{j+1} = 2k_j`,
/// `h_1 = max(4, w(1)k_1)`, `h_{j+1} = max(4h_j, w(j+1)k_{j+1})`.
pub fn make_lacunary(j_max: usize, variant: Variant) -> Result<LacunaryPair> {
    if j_max < 1 {
        return Err(invalid("j_max must be at least 1"));
    }
    let mut h: Vec<u64> = Vec::with_capacity(j_max);
    let mut k: Vec<u64> = Vec::with_capacity(j_max);
    for j in 1..=j_max {
        let kj = match k.last() {
            None => 2,
            Some(&prev) => prev
                .checked_mul(2)
                .ok_or_else(|| Error::ResourceLimit(format!("k_{j} overflows u64")))?,
        };
        let floor = variant
            .weight(j)
            .checked_mul(kj)
            .ok_or_else(|| Error::ResourceLimit(format!("h_{j} overflows u64")))?;
        let ratio = match h.last() {
            None => 4,
            Some(&prev) => prev
                .checked_mul(4)
                .ok_or_else(|| Error::ResourceLimit(format!("h_{j} overflows u64")))?,
        };
        k.push(kj);
        h.push(ratio.max(floor));
    }
    LacunaryPair::new(h, k, variant)
}
