use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::optimizers::ConvergenceRecord;

use super::RunSummary;

pub const CSV_HEADER: &str = "iteration,energy_ha,abs_error_ha,cumulative_evals,elapsed_s";

const SUMMARY_HEADER: &str =
    "method,final_energy_ha,final_error_ha,total_evals,elapsed_s,evals_to_chem_acc,status";

fn render_csv(records: &[ConvergenceRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        writeln!(
            out,
            "{},{:.16e},{:.16e},{},{:.16e}",
            r.iteration, r.energy, r.abs_error, r.cumulative_evals, r.elapsed
        )
        .unwrap();
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes a convergence log with every real at 17 significant digits.
pub fn write_csv(path: &Path, records: &[ConvergenceRecord]) -> Result<()> {
    write_file(path, &render_csv(records))
}

/// Reads a convergence log written by [`write_csv`].
pub fn read_csv(path: &Path) -> Result<Vec<ConvergenceRecord>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::Config(format!("{}: unexpected CSV header", path.display())));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let bad = || Error::Config(format!("{}: malformed row {}", path.display(), i + 2));
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(bad());
            }
            Ok(ConvergenceRecord {
                iteration: fields[0].parse().map_err(|_| bad())?,
                energy: fields[1].parse().map_err(|_| bad())?,
                abs_error: fields[2].parse().map_err(|_| bad())?,
                cumulative_evals: fields[3].parse().map_err(|_| bad())?,
                elapsed: fields[4].parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

fn evals_cell(s: &RunSummary) -> String {
    s.evals_to_chemical_accuracy
        .map_or_else(|| "N/A".to_string(), |n| n.to_string())
}

pub fn write_summary_csv(path: &Path, rows: &[RunSummary]) -> Result<()> {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for s in rows {
        writeln!(
            out,
            "{},{:.16e},{:.16e},{},{:.16e},{},{}",
            s.method,
            s.final_energy,
            s.final_error,
            s.total_evals,
            s.elapsed,
            evals_cell(s),
            s.status
        )
        .unwrap();
    }
    write_file(path, &out)
}

/// Fixed-width summary table for terminal output.
pub fn format_summary_table(rows: &[RunSummary]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<12} {:>18} {:>12} {:>12} {:>10} {:>20}  status",
        "optimizer", "final energy (Ha)", "error (Ha)", "total evals", "time (s)", "evals to chem. acc."
    )
    .unwrap();
    for s in rows {
        writeln!(
            out,
            "{:<12} {:>18.10} {:>12.4e} {:>12} {:>10.2} {:>20}  {}",
            s.method,
            s.final_energy,
            s.final_error,
            s.total_evals,
            s.elapsed,
            evals_cell(s),
            s.status
        )
        .unwrap();
    }
    out
}
