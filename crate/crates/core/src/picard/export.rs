use std::io::Write;
use std::path::{Path, PathBuf};

use super::solver::Trajectory;
use crate::error::{Error, Result};
use crate::grid::save_gfn;

fn fmt_exp(x: f64) -> String {
    format!("{x}")
}

/// One row per recorded time with every ledger column plus the statistics
/// of the window that produced it (empty on the initial row).
pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string(), "sup".into(), format!("l{}", fmt_exp(traj.f.p))];
    header.extend(traj.ledger_spec.lq.iter().map(|q| format!("l{}", fmt_exp(*q))));
    if let Some(p) = traj.ledger_spec.orlicz_p {
        header.push(format!("exp_l{}", fmt_exp(p)));
    }
    if let Some((a, s)) = traj.ledger_spec.weighted {
        header.push(format!("t^{}*l{}", fmt_exp(s), fmt_exp(a)));
    }
    header.extend(["window", "iterations", "contraction_factor"].map(String::from));
    w.write_record(&header).map_err(csv_err)?;
    for (i, e) in traj.ledger.iter().enumerate() {
        let mut row = vec![e.t.to_string(), e.sup.to_string(), e.lp.to_string()];
        row.extend(e.lq.iter().map(f64::to_string));
        row.extend(e.orlicz.iter().map(f64::to_string));
        row.extend(e.weighted.iter().map(f64::to_string));
        match i.checked_sub(1).and_then(|k| traj.steps.get(k)) {
            Some(s) => {
                row.push(s.window.to_string());
                row.push(s.iterations.to_string());
                row.push(s.contraction_factor.to_string());
            }
            None => row.extend([String::new(), String::new(), String::new()]),
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Saves every `every`-th state (and the last) as `state_NNNNNN.gfn`.
pub fn dump_snapshots(traj: &Trajectory, dir: &Path, every: usize) -> Result<Vec<PathBuf>> {
    if every == 0 {
        return Err(Error::DomainError("snapshot interval must be positive".into()));
    }
    std::fs::create_dir_all(dir)?;
    let last = traj.states.len() - 1;
    let mut paths = Vec::new();
    for (i, state) in traj.states.iter().enumerate() {
        if i % every == 0 || i == last {
            let path = dir.join(format!("state_{i:06}.gfn"));
            save_gfn(state, &path)?;
            paths.push(path);
        }
    }
    Ok(paths)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}
