//! Configuration-driven experiment runner for the `expheat` binary.

pub mod config;
pub mod experiments;
pub mod report;

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Result;

use config::Config;
use experiments::Experiment;
use report::{write_all, Report};

/// Runs one experiment and writes its outputs; returns the report.
pub fn run(config_path: &Path) -> Result<Report> {
    run_config(&Config::load(config_path)?)
}

pub fn run_config(cfg: &Config) -> Result<Report> {
    let start = Instant::now();
    let (outcome, used) = cfg.experiment.run(cfg)?;
    let pass = outcome.pass();
    let mut files: Vec<(PathBuf, Vec<u8>)> = Vec::new();
    let mut table_names = Vec::new();
    for t in &outcome.tables {
        let name = format!("{}.csv", t.name);
        files.push((PathBuf::from(&name), t.to_csv()?));
        table_names.push(name);
    }
    for (path, bytes) in outcome.files {
        if path.extension().is_some_and(|e| e == "csv") {
            table_names.push(path.display().to_string());
        }
        files.push((path, bytes));
    }
    let report = Report {
        experiment: cfg.experiment.name().into(),
        description: cfg.experiment.description().into(),
        seed: cfg.seed,
        config: used,
        records: outcome.records,
        summary: outcome.summary,
        tables: table_names,
        pass,
        timing_s: start.elapsed().as_secs_f64(),
    };
    let mut json = serde_json::to_vec_pretty(&report)?;
    json.push(b'\n');
    files.push((PathBuf::from("report.json"), json));
    write_all(&cfg.output_dir, &files)?;
    Ok(report)
}

/// `(name, description, claim)` for every experiment, in a fixed order.
pub fn list_experiments() -> Vec<(&'static str, &'static str, &'static str)> {
    Experiment::ALL.iter().map(|e| (e.name(), e.description(), e.claim())).collect()
}
