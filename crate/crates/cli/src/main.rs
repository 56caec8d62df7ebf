use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use fraclap_cli::{parse_config, run, Cli, CliError, RunConfig};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let mut flags = cli.flags;
    if let Some(path) = flags.config.clone() {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        flags = flags.merge(&parse_config(&text)?);
    }
    let cfg = RunConfig::resolve(cli.command, &flags)?;
    let report = run(&cfg)?;
    let mut out = std::io::stdout().lock();
    out.write_all(report.render(cfg.out).as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::Usage(format!("writing output: {e}")))?;
    match report.failure {
        Some(why) => Err(CliError::Numeric(why)),
        None => Ok(()),
    }
}
