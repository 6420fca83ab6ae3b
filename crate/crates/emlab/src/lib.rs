//! Experiment runner behind the `emlab` executable.

pub mod config;
pub mod error;
pub mod suites;
pub mod svg;
pub mod table;

use std::path::PathBuf;

pub use config::{parse_config, Invocation, RunConfig, Suite};
pub use error::CliError;
pub use suites::{run_suite, Check, SuiteReport};

/// Writes every table as CSV, the plots as SVG when requested, and
/// `report.txt`. Returns the written paths in order.
pub fn write_outputs(report: &SuiteReport) -> Result<Vec<PathBuf>, CliError> {
    let dir = &report.config.out_dir;
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.clone(), source })?;
    let mut written = Vec::new();
    for t in &report.tables {
        written.push(t.write_csv(dir)?);
    }
    if report.config.formats.svg {
        for p in &report.plots {
            let svg = svg::render_svg(&report.tables[p.table], &p.spec).map_err(|source| CliError::Core {
                context: format!("plot {}", p.file),
                source,
            })?;
            let path = dir.join(format!("{}.svg", p.file));
            std::fs::write(&path, svg).map_err(|source| CliError::Io { path: path.clone(), source })?;
            written.push(path);
        }
    }
    let path = dir.join("report.txt");
    std::fs::write(&path, report.render()).map_err(|source| CliError::Io { path: path.clone(), source })?;
    written.push(path);
    Ok(written)
}
