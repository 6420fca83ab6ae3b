use std::process::ExitCode;

use emlab::{parse_config, run_suite, write_outputs, CliError, Invocation};

fn threads() -> Result<Option<usize>, CliError> {
    match std::env::var("EMLAB_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!("EMLAB_THREADS must be a positive integer, got `{v}`"))),
        },
        Err(_) => Ok(None),
    }
}

fn run() -> Result<bool, CliError> {
    let cfg = match parse_config(std::env::args_os())? {
        Invocation::Run(cfg) => cfg,
        Invocation::Print(text) => {
            print!("{text}");
            return Ok(true);
        }
    };
    if let Some(n) = threads()? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot size thread pool: {e}")))?;
    }
    let started = std::time::Instant::now();
    let report = run_suite(&cfg)?;
    let written = write_outputs(&report)?;
    print!("{}", report.render());
    for p in written {
        eprintln!("wrote {}", p.display());
    }
    eprintln!("elapsed {:.2?}", started.elapsed());
    Ok(report.all_hard_passed())
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("emlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
