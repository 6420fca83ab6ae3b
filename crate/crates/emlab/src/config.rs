use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use emlab_core::construction::{AmplitudeSchedule, Variant};
use emlab_core::solver::MAX_TOL;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Riesz,
    Weights,
    Kp,
    Solve,
    KernelCompare,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Riesz => "riesz",
            Suite::Weights => "weights",
            Suite::Kp => "kp",
            Suite::Solve => "solve",
            Suite::KernelCompare => "kernel-compare",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        [Suite::Riesz, Suite::Weights, Suite::Kp, Suite::Solve, Suite::KernelCompare]
            .into_iter()
            .find(|suite| suite.name() == s)
    }

    pub fn default_jmax(self) -> usize {
        match self {
            Suite::Riesz => 12,
            Suite::Weights => 8,
            Suite::Kp => 5,
            Suite::Solve => 1,
            Suite::KernelCompare => 2,
        }
    }

    /// Kernel runs need the probability identity to 1e-9 on million-cell grids.
    pub fn default_tol(self) -> f64 {
        match self {
            Suite::KernelCompare | Suite::Solve => 1e-12,
            _ => 1e-10,
        }
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Formats {
    pub csv: bool,
    pub svg: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub suite: Suite,
    pub j_max: usize,
    pub schedule: AmplitudeSchedule,
    pub variant: Variant,
    pub grid: Option<(usize, usize)>,
    pub tol: f64,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub formats: Formats,
}

impl RunConfig {
    pub fn defaults(suite: Suite) -> Self {
        Self {
            suite,
            j_max: suite.default_jmax(),
            schedule: AmplitudeSchedule::Sqrt,
            variant: Variant::Standard,
            grid: None,
            tol: suite.default_tol(),
            seed: 0,
            out_dir: PathBuf::from("emlab-out"),
            formats: Formats { csv: true, svg: false },
        }
    }

    /// One-line description stamped into reports and plots.
    pub fn stamp(&self) -> String {
        let grid = self.grid.map_or("auto".to_string(), |(x, y)| format!("{x},{y}"));
        format!(
            "suite={} jmax={} schedule={} variant={} grid={} tol={:e} seed={}",
            self.suite, self.j_max, self.schedule, self.variant, grid, self.tol, self.seed
        )
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let bad = |why: String| CliError::Usage(format!("invalid value `{value}` for `{key}`: {why}"));
        match key {
            "jmax" => {
                let j: usize = value.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?;
                if j == 0 {
                    return Err(bad("must be at least 1".into()));
                }
                self.j_max = j;
            }
            "schedule" => {
                let s: AmplitudeSchedule = value.parse().map_err(|e: emlab_core::Error| bad(e.to_string()))?;
                s.validate().map_err(|e| bad(e.to_string()))?;
                self.schedule = s;
            }
            "variant" => self.variant = value.parse().map_err(|e: emlab_core::Error| bad(e.to_string()))?,
            "grid" => {
                let (x, y) = value
                    .split_once(',')
                    .ok_or_else(|| bad("expected NX,NY".into()))?;
                let nx: usize = x.trim().parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?;
                let ny: usize = y.trim().parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?;
                if nx < 8 || ny < 8 {
                    return Err(bad("both counts must be at least 8".into()));
                }
                self.grid = Some((nx, ny));
            }
            "tol" => {
                let t: f64 = value.parse().map_err(|e: std::num::ParseFloatError| bad(e.to_string()))?;
                if !(t > 0.0 && t <= MAX_TOL) {
                    return Err(bad(format!("must lie in (0, {MAX_TOL:e}]")));
                }
                self.tol = t;
            }
            "seed" => self.seed = value.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
            "out" => {
                if value.is_empty() {
                    return Err(bad("empty path".into()));
                }
                self.out_dir = PathBuf::from(value);
            }
            "format" => {
                let mut f = Formats { csv: false, svg: false };
                for part in value.split(',').map(str::trim) {
                    match part {
                        "csv" => f.csv = true,
                        "svg" => f.svg = true,
                        _ => return Err(bad("formats are csv and svg".into())),
                    }
                }
                // tables are always written
                f.csv = true;
                self.formats = f;
            }
            _ => return Err(CliError::Usage(format!("unknown key `{key}`"))),
        }
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(name = "emlab", version, about = "Oscillatory elliptic coefficient experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Riesz product norms and singularity diagnostics
    Riesz(Flags),
    /// Reverse Hölder, A∞ and L log L constants of Riesz weights
    Weights(Flags),
    /// Kenig–Pipher functional against its analytic lower bound
    Kp(Flags),
    /// Discrete elliptic measure of a level field
    Solve(Flags),
    /// Boundary kernel against the Riesz product
    KernelCompare(Flags),
}

#[derive(Debug, Args)]
struct Flags {
    #[arg(long)]
    jmax: Option<String>,
    /// sqrt | linear | zero | scaled:A
    #[arg(long)]
    schedule: Option<String>,
    /// standard | strong
    #[arg(long)]
    variant: Option<String>,
    /// NX,NY
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Output directory
    #[arg(long = "out", value_name = "DIR")]
    out: Option<String>,
    /// csv,svg
    #[arg(long)]
    format: Option<String>,
    /// File of key=value lines
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

impl Flags {
    fn pairs(&self) -> Vec<(&'static str, &String)> {
        [
            ("jmax", &self.jmax),
            ("schedule", &self.schedule),
            ("variant", &self.variant),
            ("grid", &self.grid),
            ("tol", &self.tol),
            ("seed", &self.seed),
            ("out", &self.out),
            ("format", &self.format),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| (k, v)))
        .collect()
    }
}

/// Parsed command line: either a run, or text clap wants printed (help, version).
#[derive(Debug)]
pub enum Invocation {
    Run(RunConfig),
    Print(String),
}

/// `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_config_file(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", n + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn read_config(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_file(&text)
}

/// Flags override the config file, which overrides the defaults.
pub fn parse_config<I, S>(args: I) -> Result<Invocation, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Ok(Invocation::Print(e.to_string())),
                _ => Err(CliError::Usage(e.to_string())),
            };
        }
    };
    let (suite, flags) = match cli.command {
        Command::Riesz(f) => (Suite::Riesz, f),
        Command::Weights(f) => (Suite::Weights, f),
        Command::Kp(f) => (Suite::Kp, f),
        Command::Solve(f) => (Suite::Solve, f),
        Command::KernelCompare(f) => (Suite::KernelCompare, f),
    };
    let mut cfg = RunConfig::defaults(suite);
    if let Some(path) = &flags.config {
        for (k, v) in read_config(path)? {
            if k == "suite" {
                match Suite::from_name(&v) {
                    Some(s) if s == suite => continue,
                    Some(s) => {
                        return Err(CliError::Usage(format!(
                            "config file selects suite `{s}` but the command is `{suite}`"
                        )))
                    }
                    None => return Err(CliError::Usage(format!("invalid value `{v}` for `suite`"))),
                }
            }
            cfg.set(&k, &v)?;
        }
    }
    for (k, v) in flags.pairs() {
        cfg.set(k, v)?;
    }
    Ok(Invocation::Run(cfg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Result<RunConfig, CliError> {
        match parse_config(std::iter::once("emlab").chain(args.iter().copied()))? {
            Invocation::Run(c) => Ok(c),
            Invocation::Print(_) => panic!("unexpected help"),
        }
    }

    #[test]
    fn direct_mapping() {
        let c = run(&["riesz", "--jmax", "12", "--schedule", "sqrt"]).unwrap();
        assert_eq!(c.suite, Suite::Riesz);
        assert_eq!(c.j_max, 12);
        assert_eq!(c.schedule, AmplitudeSchedule::Sqrt);
        assert_eq!(c.variant, Variant::Standard);
        assert_eq!(c.tol, 1e-10);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(matches!(run(&["riesz", "--tol", "0.1"]), Err(CliError::Usage(_))));
        assert!(matches!(run(&["riesz", "--jmax", "0"]), Err(CliError::Usage(_))));
        assert!(matches!(run(&["riesz", "--schedule", "scaled:1.5"]), Err(CliError::Usage(_))));
        assert!(matches!(run(&["solve", "--grid", "4,4"]), Err(CliError::Usage(_))));
        assert!(matches!(run(&["solve", "--format", "png"]), Err(CliError::Usage(_))));
        assert!(matches!(run(&["bogus"]), Err(CliError::Usage(_))));
    }

    #[test]
    fn config_file_lines() {
        let kv = parse_config_file("# c\nschedule = linear\n\njmax=3\n").unwrap();
        assert_eq!(kv, vec![("schedule".into(), "linear".into()), ("jmax".into(), "3".into())]);
        assert!(parse_config_file("jmax 3").is_err());
    }

    #[test]
    fn grid_and_formats() {
        let c = run(&["solve", "--grid", "64,32", "--format", "svg"]).unwrap();
        assert_eq!(c.grid, Some((64, 32)));
        assert!(c.formats.csv && c.formats.svg);
    }
}
