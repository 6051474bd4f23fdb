use std::process::ExitCode;

use clap::Parser;
use spinprobe_cli::cli::{Cli, Command};
use spinprobe_cli::{cmd_plot, cmd_run, cmd_validate, CliError};

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => {
            let config = args.to_config()?;
            let artifacts = cmd_run(&config)?;
            let report = &artifacts.document.report;
            for p in &report.peaks {
                println!("peak ω = {:.6}  amplitude = {:.6}", p.omega_center, p.amplitude);
            }
            let energies: Vec<String> = report.energies_inner.iter().map(|e| format!("{e:.6}")).collect();
            println!("energies (inner): [{}]", energies.join(", "));
            if let Some(c) = &artifacts.document.oracle_comparison {
                println!(
                    "oracle: {} matched, {} missed, {} spurious",
                    c.matched.len(),
                    c.missed.len(),
                    c.spurious.len()
                );
            }
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            println!("wrote {}", config.output_dir.display());
            Ok(())
        }
        Command::Validate(args) => {
            let tau = spinprobe_cli::expr::parse_real(&args.tau)?;
            let v = cmd_validate(&args.model, tau, args.engine)?;
            for line in &v.lines {
                println!("{line}");
            }
            for w in &v.warnings {
                eprintln!("warning: {w}");
            }
            Ok(())
        }
        Command::Plot(args) => cmd_plot(&args.spectrum, &args.peaks, &args.out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
