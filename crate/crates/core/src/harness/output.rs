use std::io::{self, Write};

use super::ExperimentResult;
use crate::model::ProcessParams;

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

fn param_columns(p: &ProcessParams) -> (&'static str, String, String, f64) {
    match p {
        ProcessParams::Csa(c) => ("csa", format!("{}", c.a()), format!("{}", c.b()), c.memory()),
        ProcessParams::Frac(f) => ("frac", String::new(), String::new(), f.d()),
    }
}

/// Long-format CSV: a `#` line echoing the configuration, one header line,
/// then one row per statistic and one row per series point.
pub fn write_csv<W: Write>(result: &ExperimentResult, mut out: W) -> io::Result<()> {
    let cfg = &result.metadata.config;
    writeln!(
        out,
        "# experiment={} sample_size={} replications={} master_seed={} max_lag={} grid_cells={} version={}",
        cfg.experiment.name(),
        cfg.sample_size,
        cfg.replications,
        cfg.master_seed,
        cfg.max_lag,
        cfg.parameter_grid.len(),
        result.metadata.version
    )?;
    writeln!(out, "cell,process,a,b,d,statistic,x,mean,sd,count")?;
    for cell in &result.per_cell {
        let (process, a, b, d) = param_columns(&cell.params);
        for s in &cell.statistics {
            writeln!(
                out,
                "{},{process},{a},{b},{d},{},,{},{},{}",
                cell.cell,
                s.name,
                s.mean,
                fmt_opt(s.sd),
                s.count
            )?;
        }
        for series in &cell.series {
            for (x, y) in series.x.iter().zip(&series.y) {
                writeln!(out, "{},{process},{a},{b},{d},{},{x},{y},,", cell.cell, series.name)?;
            }
        }
    }
    Ok(())
}

pub fn write_json<W: Write>(result: &ExperimentResult, out: W) -> io::Result<()> {
    serde_json::to_writer_pretty(out, result).map_err(io::Error::other)
}
