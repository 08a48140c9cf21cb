use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use expheat_cli::{list_experiments, run};
use expheat_core::grid::load_gfn;
use expheat_core::orlicz::luxemburg_norm;

#[derive(Parser)]
#[command(name = "expheat", version, about = "Experiments for the heat equation with exponential nonlinearity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run { config: PathBuf },
    /// List the available experiments.
    List,
    /// Luxemburg norm of a saved grid function.
    Norm {
        file: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config } => match run(&config) {
            Ok(report) => {
                for r in &report.records {
                    let verdict = match (r.pass, r.gating) {
                        (true, _) => "PASS",
                        (false, true) => "FAIL",
                        (false, false) => "NOTE",
                    };
                    println!("{verdict}  {:<34} {}", r.name, r.note);
                }
                println!("{}: {} in {:.2}s", report.experiment, if report.pass { "pass" } else { "fail" }, report.timing_s);
                if report.pass {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(2)
                }
            }
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(1)
            }
        },
        Command::List => {
            for (name, description, claim) in list_experiments() {
                println!("{name:<13} {description}  [{claim}]");
            }
            ExitCode::SUCCESS
        }
        Command::Norm { file, p, tol } => {
            let result = load_gfn(&file)
                .with_context(|| format!("reading {}", file.display()))
                .and_then(|u| Ok(luxemburg_norm(&u, p, tol)?));
            match result {
                Ok(n) => {
                    println!("{:.12e}", n.value);
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e:#}");
                    ExitCode::from(1)
                }
            }
        }
    }
}
