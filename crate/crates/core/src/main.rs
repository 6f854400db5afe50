use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use holoform::demos;
use holoform::report::{self, Format, Report, Status};
use holoform::scenario::{self, Scenario};

/// Numerical certificates for sectorial forms, their associated operators
/// and the semigroups they generate.
#[derive(Parser)]
#[command(name = "holoform", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a scenario file.
    Verify {
        config: PathBuf,
        /// Directory for report files; nothing is written when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Override the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Multiply every tolerance by this factor.
        #[arg(long)]
        tol_scale: Option<f64>,
    },
    /// Run a built-in demo.
    Demo {
        name: String,
        /// Write the demo scenario to this file.
        #[arg(long)]
        emit_config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// List the built-in demos.
    ListDemos,
}

fn config_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn print_summary(report: &Report) {
    for check in &report.checks {
        let status = match check.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skip => "skip",
        };
        match &check.reason {
            Some(reason) => println!("{:<15} {status}  {reason}", check.name.as_str()),
            None => println!("{:<15} {status}", check.name.as_str()),
        }
    }
}

fn run(scenario: &Scenario, out: Option<PathBuf>, format: Format) -> ExitCode {
    let report = match report::run_scenario(scenario) {
        Ok(r) => r,
        Err(e) => return config_error(e),
    };
    print_summary(&report);
    if let Some(dir) = out {
        if let Err(e) = report::emit_report(&report, &dir, format) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(report.exit_code() as u8)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Verify {
            config,
            out,
            format,
            seed,
            tol_scale,
        } => {
            let mut scenario = match scenario::load_config(&config) {
                Ok(s) => s,
                Err(e) => return config_error(e),
            };
            if let Some(seed) = seed {
                scenario.seed = seed;
            }
            if let Some(x) = tol_scale {
                if !(x > 0.0 && x.is_finite()) {
                    return config_error(format!("--tol-scale must be positive, got {x}"));
                }
                scenario.tolerances = scenario.tolerances.scaled(x);
            }
            run(&scenario, out, format)
        }
        Command::Demo {
            name,
            emit_config,
            out,
            format,
        } => {
            let scenario = match demos::builtin_demo(&name) {
                Ok(s) => s,
                Err(e) => return config_error(e),
            };
            if let Some(path) = emit_config {
                if let Err(e) = scenario.save(&path) {
                    return config_error(e);
                }
            }
            run(&scenario, out, format)
        }
        Command::ListDemos => {
            for d in demos::list_demos() {
                println!("{:<17} {}", d.name, d.summary);
            }
            ExitCode::SUCCESS
        }
    }
}
