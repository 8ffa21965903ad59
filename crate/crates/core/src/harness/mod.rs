//! Reproducible experiment runner.
//!
//! Every replication draws from its own ChaCha stream keyed by
//! `(master_seed, cell, replication)`, and results are reduced in index
//! order, so the output does not depend on the number of workers.

mod config;
mod output;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::{gph_estimate, periodogram};
use crate::fitloss::{ar_report, zeta_fractional};
use crate::model::{
    acf_csa_lags, acf_frac_lags, csa_ma_coeffs, frac_ma_coeffs, CsaParams, ProcessParams,
};
use crate::simulate::{
    csa_fast_from_innovations, frac_fast_from_innovations, gaussian_innovations, generate_csa_fast,
    generate_frac_fast, SeedSpec,
};
use crate::stats::{mean, sd};

pub use config::{gph_table_grid, loss_table_grid, ExperimentConfig, ExperimentKind, Scale, DEFAULT_SEED};
pub use output::{write_csv, write_json};

/// Environment variable capping the worker pool.
pub const WORKERS_ENV: &str = "NONFRAC_WORKERS";

/// Replications summed per parallel task when averaging periodograms.
const PERIODOGRAM_BLOCK: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Statistic {
    pub name: String,
    pub mean: f64,
    /// `None` when fewer than two replications contribute.
    pub sd: Option<f64>,
    pub count: usize,
}

impl Statistic {
    fn exact(name: &str, value: f64) -> Self {
        Self { name: name.into(), mean: value, sd: None, count: 1 }
    }

    fn from_sample(name: &str, values: &[f64]) -> Self {
        Self { name: name.into(), mean: mean(values), sd: sd(values), count: values.len() }
    }

    /// Monte Carlo standard error of the mean.
    pub fn std_error(&self) -> Option<f64> {
        self.sd.map(|s| s / (self.count as f64).sqrt())
    }
}

/// A plot-ready curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub cell: usize,
    pub params: ProcessParams,
    pub statistics: Vec<Statistic>,
    pub series: Vec<Series>,
}

impl CellResult {
    pub fn statistic(&self, name: &str) -> Option<&Statistic> {
        self.statistics.iter().find(|s| s.name == name)
    }

    pub fn series(&self, name: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub config: ExperimentConfig,
    pub workers: usize,
    pub wall_time_seconds: f64,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub per_cell: Vec<CellResult>,
    pub metadata: Metadata,
}

/// Worker count: the config value, else `NONFRAC_WORKERS`, else all cores.
pub fn resolve_workers(cfg: &ExperimentConfig) -> Result<usize> {
    if let Some(w) = cfg.workers {
        return Ok(w);
    }
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Error::Config(format!("{WORKERS_ENV} must be a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let workers = resolve_workers(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let start = Instant::now();
    let per_cell = pool.install(|| run_cells(cfg))?;
    Ok(ExperimentResult {
        per_cell,
        metadata: Metadata {
            config: cfg.clone(),
            workers,
            wall_time_seconds: start.elapsed().as_secs_f64(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
    })
}

fn run_cells(cfg: &ExperimentConfig) -> Result<Vec<CellResult>> {
    match cfg.experiment {
        ExperimentKind::Table1 => gph_cells(cfg),
        ExperimentKind::FigMeanPeriodogram => mean_periodogram_cells(cfg),
        ExperimentKind::FigFilterMatch => filter_match_cells(cfg),
        kind => cfg
            .parameter_grid
            .par_iter()
            .enumerate()
            .map(|(cell, &params)| analytic_cell(kind, cell, params, cfg.max_lag))
            .collect(),
    }
}

fn csa_of(params: ProcessParams) -> Result<CsaParams> {
    match params {
        ProcessParams::Csa(p) => Ok(p),
        ProcessParams::Frac(_) => Err(Error::Config("this experiment needs CSA parameters".into())),
    }
}

fn lag_axis(max_lag: usize) -> Vec<f64> {
    (0..=max_lag).map(|k| k as f64).collect()
}

fn acf_series(params: ProcessParams, max_lag: usize) -> Result<Series> {
    let y = match params {
        ProcessParams::Frac(p) => acf_frac_lags(p, max_lag),
        ProcessParams::Csa(p) => acf_csa_lags(p, max_lag)?,
    };
    Ok(Series { name: "acf".into(), x: lag_axis(max_lag), y })
}

fn weights_series(params: ProcessParams, max_lag: usize) -> Result<Series> {
    let y = match params {
        ProcessParams::Frac(p) => frac_ma_coeffs(p, max_lag + 1)?.weights,
        ProcessParams::Csa(p) => csa_ma_coeffs(p, max_lag + 1)?.weights,
    };
    Ok(Series { name: "ma_weights".into(), x: lag_axis(max_lag), y })
}

fn analytic_cell(kind: ExperimentKind, cell: usize, params: ProcessParams, max_lag: usize) -> Result<CellResult> {
    let mut statistics = Vec::new();
    let mut series = Vec::new();
    match kind {
        ExperimentKind::Table2 => {
            let p = csa_of(params)?;
            let ar1 = ar_report(p, 1)?;
            let ar20 = ar_report(p, 20)?;
            statistics.push(Statistic::exact("alpha_1", ar1.fitted_params[0]));
            statistics.push(Statistic::exact("zeta_ar1", ar1.zeta));
            statistics.push(Statistic::exact("zeta_ar20", ar20.zeta));
        }
        ExperimentKind::Table3 => {
            let (pure, arfima) = zeta_fractional(csa_of(params)?)?;
            statistics.push(Statistic::exact("zeta_frac", pure.zeta));
            statistics.push(Statistic::exact("zeta_arfima", arfima.zeta));
            statistics.push(Statistic::exact("alpha_arfima", arfima.fitted_params[0]));
        }
        ExperimentKind::FigAr1Loss => {
            let ar1 = ar_report(csa_of(params)?, 1)?;
            statistics.push(Statistic::exact("alpha_1", ar1.fitted_params[0]));
            statistics.push(Statistic::exact("zeta_ar1", ar1.zeta));
        }
        ExperimentKind::FigAcfShortmem | ExperimentKind::FigAntipersistenceAcf => {
            series.push(acf_series(params, max_lag)?);
        }
        ExperimentKind::Table1 | ExperimentKind::FigMeanPeriodogram | ExperimentKind::FigFilterMatch => {
            unreachable!("simulation experiments are dispatched separately")
        }
    }
    Ok(CellResult { cell, params, statistics, series })
}

fn simulate(params: ProcessParams, t: usize, seed: SeedSpec) -> Result<Vec<f64>> {
    Ok(match params {
        ProcessParams::Csa(p) => generate_csa_fast(p, t, seed)?.values,
        ProcessParams::Frac(p) => generate_frac_fast(p, t, seed)?.values,
    })
}

fn gph_cells(cfg: &ExperimentConfig) -> Result<Vec<CellResult>> {
    let reps = cfg.replications;
    let tasks: Vec<(usize, usize)> =
        (0..cfg.parameter_grid.len()).flat_map(|c| (0..reps).map(move |r| (c, r))).collect();
    let estimates: Vec<f64> = tasks
        .par_iter()
        .map(|&(cell, rep)| {
            let seed = SeedSpec::replication(cfg.master_seed, cell as u32, rep as u32);
            let x = simulate(cfg.parameter_grid[cell], cfg.sample_size, seed)?;
            Ok(gph_estimate(&x, None)?.d_hat)
        })
        .collect::<Result<_>>()?;
    Ok(cfg
        .parameter_grid
        .iter()
        .enumerate()
        .map(|(cell, &params)| CellResult {
            cell,
            params,
            statistics: vec![Statistic::from_sample("d_hat", &estimates[cell * reps..(cell + 1) * reps])],
            series: vec![],
        })
        .collect())
}

fn mean_periodogram_cells(cfg: &ExperimentConfig) -> Result<Vec<CellResult>> {
    let reps = cfg.replications;
    let n_blocks = reps.div_ceil(PERIODOGRAM_BLOCK);
    cfg.parameter_grid
        .iter()
        .enumerate()
        .map(|(cell, &params)| {
            let block_sums: Vec<(Vec<f64>, Vec<f64>)> = (0..n_blocks)
                .into_par_iter()
                .map(|b| {
                    let mut sum: Vec<f64> = Vec::new();
                    let mut freqs = Vec::new();
                    for rep in b * PERIODOGRAM_BLOCK..((b + 1) * PERIODOGRAM_BLOCK).min(reps) {
                        let seed = SeedSpec::replication(cfg.master_seed, cell as u32, rep as u32);
                        let pg = periodogram(&simulate(params, cfg.sample_size, seed)?)?;
                        if sum.is_empty() {
                            sum = pg.ordinates;
                            freqs = pg.frequencies;
                        } else {
                            sum.iter_mut().zip(&pg.ordinates).for_each(|(s, o)| *s += o);
                        }
                    }
                    Ok((freqs, sum))
                })
                .collect::<Result<_>>()?;
            let freqs = block_sums[0].0.clone();
            let mut total = vec![0.0; freqs.len()];
            for (_, s) in &block_sums {
                total.iter_mut().zip(s).for_each(|(t, v)| *t += v);
            }
            total.iter_mut().for_each(|v| *v /= reps as f64);
            Ok(CellResult {
                cell,
                params,
                statistics: vec![],
                series: vec![Series { name: "mean_periodogram".into(), x: freqs, y: total }],
            })
        })
        .collect()
}

/// Each cell filters the same innovation draw, so sample paths are directly
/// comparable across processes.
fn filter_match_cells(cfg: &ExperimentConfig) -> Result<Vec<CellResult>> {
    let t = cfg.sample_size;
    let innovations = gaussian_innovations(&mut SeedSpec::replication(cfg.master_seed, 0, 0).rng(), t, 1.0);
    cfg.parameter_grid
        .par_iter()
        .enumerate()
        .map(|(cell, &params)| {
            let path = match params {
                ProcessParams::Csa(p) => {
                    let scaled: Vec<f64> = innovations.iter().map(|v| v * p.sigma_eps()).collect();
                    csa_fast_from_innovations(p, &scaled)?
                }
                ProcessParams::Frac(p) => frac_fast_from_innovations(p, &innovations)?,
            };
            Ok(CellResult {
                cell,
                params,
                statistics: vec![],
                series: vec![
                    weights_series(params, cfg.max_lag)?,
                    acf_series(params, cfg.max_lag)?,
                    Series { name: "sample_path".into(), x: (0..t).map(|s| s as f64).collect(), y: path },
                ],
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::FracParams;

    fn small_table1(workers: usize) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::defaults(ExperimentKind::Table1, Scale::Desk);
        cfg.sample_size = 256;
        cfg.replications = 20;
        cfg.workers = Some(workers);
        cfg
    }

    #[test]
    fn bitwise_reproducible() {
        let a = run_experiment(&small_table1(2)).unwrap();
        let b = run_experiment(&small_table1(2)).unwrap();
        assert_eq!(a.per_cell, b.per_cell);
        assert_eq!(a.metadata.config, b.metadata.config);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let one = run_experiment(&small_table1(1)).unwrap();
        let four = run_experiment(&small_table1(4)).unwrap();
        assert_eq!(one.per_cell, four.per_cell);
        let mut cfg = ExperimentConfig::defaults(ExperimentKind::FigMeanPeriodogram, Scale::Desk);
        cfg.sample_size = 128;
        cfg.replications = 130;
        cfg.workers = Some(1);
        let one = run_experiment(&cfg).unwrap();
        cfg.workers = Some(3);
        let three = run_experiment(&cfg).unwrap();
        assert_eq!(one.per_cell, three.per_cell);
    }

    #[test]
    fn single_replication_has_undefined_sd() {
        let mut cfg = small_table1(1);
        cfg.replications = 1;
        cfg.parameter_grid = vec![ProcessParams::Frac(FracParams::new(0.1).unwrap())];
        let r = run_experiment(&cfg).unwrap();
        let s = r.per_cell[0].statistic("d_hat").unwrap();
        assert_eq!(s.count, 1);
        assert_eq!(s.sd, None);
        assert!(s.mean.is_finite());
    }

    #[test]
    fn analytic_tables_have_one_cell_per_grid_point() {
        let cfg = ExperimentConfig::defaults(ExperimentKind::Table2, Scale::Desk);
        let r = run_experiment(&cfg).unwrap();
        assert_eq!(r.per_cell.len(), 25);
        let z = r.per_cell[0].statistic("zeta_ar1").unwrap().mean;
        assert!((z - 1.085).abs() < 5e-4);
        let cfg = ExperimentConfig::defaults(ExperimentKind::FigAntipersistenceAcf, Scale::Desk);
        let r = run_experiment(&cfg).unwrap();
        let frac = r.per_cell[0].series("acf").unwrap();
        let csa = r.per_cell[1].series("acf").unwrap();
        assert_eq!(frac.y.len(), 111);
        assert!(frac.y[1..].iter().all(|&v| v < 0.0));
        assert!(csa.y.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn filter_match_shares_innovations() {
        let mut cfg = ExperimentConfig::defaults(ExperimentKind::FigFilterMatch, Scale::Desk);
        cfg.sample_size = 512;
        let r = run_experiment(&cfg).unwrap();
        let a = &r.per_cell[0].series("sample_path").unwrap().y;
        let b = &r.per_cell[1].series("sample_path").unwrap().y;
        assert!((a[0] - b[0]).abs() < 1e-12);
        assert_eq!(a.len(), 512);
    }

    #[test]
    fn invalid_config_is_rejected_before_running() {
        let mut cfg = small_table1(1);
        cfg.replications = 0;
        assert!(matches!(run_experiment(&cfg), Err(Error::Config(_))));
    }
}
