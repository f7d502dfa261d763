use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use super::runner::{ExperimentReport, SummaryRecord};
use crate::engine::format_float;

pub const SUMMARY_HEADER: &str = "sweep_value,replications,n_unstable,proportion,mean_drift_ratio,failures";

fn write_file(path: &Path, body: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    body(&mut out)?;
    out.flush()
}

pub fn write_summary<W: Write>(rows: &[SummaryRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{SUMMARY_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.sweep_value.map(format_float).unwrap_or_default(),
            r.replications,
            r.n_unstable,
            format_float(r.proportion),
            format_float(r.mean_drift_ratio),
            r.failures
        )?;
    }
    Ok(())
}

/// Writes every artifact of a finished run into `dir`.
///
/// Everything except `timing.csv` is a function of the config alone.
pub fn emit_outputs(report: &ExperimentReport, dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir.join("verdicts"))?;
    fs::write(dir.join("manifest.toml"), report.config.manifest())?;
    write_file(&dir.join("summary.csv"), |out| write_summary(&report.summary, out))?;
    write_file(&dir.join("timing.csv"), |out| {
        writeln!(out, "phase,seconds")?;
        writeln!(out, "annealing,{}", report.timing.annealing.as_secs_f64())?;
        writeln!(out, "quantiles,{}", report.timing.quantiles.as_secs_f64())
    })?;
    write_file(&dir.join("replications.csv"), |out| {
        writeln!(out, "index,sweep_index,replication,seed,status")?;
        for r in &report.replications {
            let status = match (&r.outcome, &r.verdict) {
                (Ok(_), Some(v)) => v.decision.to_string(),
                (Err(e), _) => format!("\"failed: {}\"", e.replace('"', "'")),
                (Ok(_), None) => "failed".to_string(),
            };
            writeln!(out, "{},{},{},{},{}", r.index, r.sweep_index, r.replication, r.seed, status)?;
        }
        Ok(())
    })?;
    for r in &report.replications {
        if let Some(v) = &r.verdict {
            write_file(&dir.join("verdicts").join(format!("verdict_{}.csv", r.index)), |out| v.write_csv(out))?;
        }
    }
    for (s, rows) in report.quantiles.iter().enumerate() {
        write_file(&dir.join(format!("quantiles_{s}.csv")), |out| {
            writeln!(out, "k,q_alpha")?;
            for (k, q) in rows {
                writeln!(out, "{k},{}", format_float(*q))?;
            }
            Ok(())
        })?;
    }
    Ok(())
}
