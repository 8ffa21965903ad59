use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CsaParams, FracParams, ProcessParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// GPH estimates of `d` on simulated CSA and `I(d)` series.
    Table1,
    /// AR(1) and AR(20) forecast losses.
    Table2,
    /// Pure fractional and ARFIMA(1, d, 0) forecast losses.
    Table3,
    /// CSA autocorrelations sharing `b` but differing in `a`.
    FigAcfShortmem,
    /// MA weights, autocorrelations and a common-innovation sample path.
    FigFilterMatch,
    /// Autocorrelations at negative memory.
    FigAntipersistenceAcf,
    /// Periodogram averaged over replications.
    FigMeanPeriodogram,
    /// AR(1) coefficient and loss as `a` varies.
    FigAr1Loss,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::Table1,
        ExperimentKind::Table2,
        ExperimentKind::Table3,
        ExperimentKind::FigAcfShortmem,
        ExperimentKind::FigFilterMatch,
        ExperimentKind::FigAntipersistenceAcf,
        ExperimentKind::FigMeanPeriodogram,
        ExperimentKind::FigAr1Loss,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Table1 => "table1",
            ExperimentKind::Table2 => "table2",
            ExperimentKind::Table3 => "table3",
            ExperimentKind::FigAcfShortmem => "fig_acf_shortmem",
            ExperimentKind::FigFilterMatch => "fig_filter_match",
            ExperimentKind::FigAntipersistenceAcf => "fig_antipersistence_acf",
            ExperimentKind::FigMeanPeriodogram => "fig_mean_periodogram",
            ExperimentKind::FigAr1Loss => "fig_ar1_loss",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Whether the experiment draws random numbers.
    pub fn is_monte_carlo(self) -> bool {
        matches!(self, ExperimentKind::Table1 | ExperimentKind::FigMeanPeriodogram | ExperimentKind::FigFilterMatch)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    /// `T = 4096`, 1000 replications.
    #[default]
    Desk,
    /// `T = 10^4`, `10^4` replications.
    Paper,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub sample_size: usize,
    pub replications: usize,
    pub master_seed: u64,
    pub parameter_grid: Vec<ProcessParams>,
    /// Largest lag in autocorrelation and weight series.
    pub max_lag: usize,
    /// Worker threads; falls back to `NONFRAC_WORKERS`, then all cores.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

/// File form of [`ExperimentConfig`]; omitted fields take the defaults of
/// the chosen scale.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    experiment: ExperimentKind,
    #[serde(default)]
    scale: Scale,
    sample_size: Option<usize>,
    replications: Option<usize>,
    master_seed: Option<u64>,
    parameter_grid: Option<Vec<ProcessParams>>,
    max_lag: Option<usize>,
    workers: Option<usize>,
}

pub const DEFAULT_SEED: u64 = 20190101;

fn csa(a: f64, b: f64) -> ProcessParams {
    ProcessParams::Csa(CsaParams::new(a, b).expect("default grid is valid"))
}

fn frac(d: f64) -> ProcessParams {
    ProcessParams::Frac(FracParams::new(d).expect("default grid is valid"))
}

/// The 5×5 `(a, b)` grid of the forecast-loss tables, rows by `a`.
pub fn loss_table_grid() -> Vec<ProcessParams> {
    let mut grid = Vec::with_capacity(25);
    for a in [0.1, 0.5, 0.9, 1.3, 1.7] {
        for b in [1.8, 1.6, 1.4, 1.2, 1.1] {
            grid.push(csa(a, b));
        }
    }
    grid
}

/// `CSA(0.2, 2(1-d))` then `I(d)` for each `d ∈ {0.4, 0.2, -0.2, -0.4}`.
pub fn gph_table_grid() -> Vec<ProcessParams> {
    [0.4, 0.2, -0.2, -0.4].iter().flat_map(|&d| [csa(0.2, 2.0 * (1.0 - d)), frac(d)]).collect()
}

fn default_grid(kind: ExperimentKind) -> Vec<ProcessParams> {
    match kind {
        ExperimentKind::Table1 => gph_table_grid(),
        ExperimentKind::Table2 | ExperimentKind::Table3 => loss_table_grid(),
        ExperimentKind::FigAcfShortmem => [0.1, 0.5, 1.0, 2.0, 5.0].iter().map(|&a| csa(a, 1.6)).collect(),
        ExperimentKind::FigFilterMatch => vec![frac(0.2), csa(0.12, 1.6)],
        ExperimentKind::FigAntipersistenceAcf => vec![frac(-0.2), csa(0.09, 2.4)],
        ExperimentKind::FigMeanPeriodogram => vec![frac(0.4), csa(0.2, 1.2), frac(-0.4), csa(0.2, 2.8)],
        ExperimentKind::FigAr1Loss => {
            let mut grid = Vec::new();
            for b in [1.8, 1.6, 1.4, 1.2] {
                for i in 1..=40 {
                    grid.push(csa(0.05 * i as f64, b));
                }
            }
            grid
        }
    }
}

impl ExperimentConfig {
    pub fn defaults(kind: ExperimentKind, scale: Scale) -> Self {
        let (sample_size, replications) = match (kind.is_monte_carlo(), scale) {
            (false, _) => (1, 1),
            (true, Scale::Desk) => (4096, 1000),
            (true, Scale::Paper) => (10_000, 10_000),
        };
        let (sample_size, replications) = match kind {
            ExperimentKind::FigFilterMatch => (if scale == Scale::Paper { 10_000 } else { 4096 }, 1),
            _ => (sample_size, replications),
        };
        let max_lag = match kind {
            ExperimentKind::FigAntipersistenceAcf => 110,
            _ => 100,
        };
        Self {
            experiment: kind,
            sample_size,
            replications,
            master_seed: DEFAULT_SEED,
            parameter_grid: default_grid(kind),
            max_lag,
            workers: None,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let base = Self::defaults(file.experiment, file.scale);
        let cfg = Self {
            experiment: file.experiment,
            sample_size: file.sample_size.unwrap_or(base.sample_size),
            replications: file.replications.unwrap_or(base.replications),
            master_seed: file.master_seed.unwrap_or(base.master_seed),
            parameter_grid: file.parameter_grid.unwrap_or(base.parameter_grid),
            max_lag: file.max_lag.unwrap_or(base.max_lag),
            workers: file.workers,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.replications == 0 {
            return fail("replications must be at least 1".into());
        }
        if self.parameter_grid.is_empty() {
            return fail("parameter_grid must not be empty".into());
        }
        if self.workers == Some(0) {
            return fail("workers must be at least 1".into());
        }
        if self.replications > u32::MAX as usize || self.parameter_grid.len() > u32::MAX as usize {
            return fail("grid or replication count too large for the seeding scheme".into());
        }
        let needs_series = matches!(self.experiment, ExperimentKind::Table1 | ExperimentKind::FigMeanPeriodogram);
        if needs_series && self.sample_size < 4 {
            return fail(format!("sample_size must be at least 4, got {}", self.sample_size));
        }
        if self.experiment == ExperimentKind::FigFilterMatch && self.sample_size == 0 {
            return fail("sample_size must be at least 1".into());
        }
        for (i, p) in self.parameter_grid.iter().enumerate() {
            let ProcessParams::Csa(c) = p else {
                if matches!(
                    self.experiment,
                    ExperimentKind::Table2 | ExperimentKind::Table3 | ExperimentKind::FigAr1Loss | ExperimentKind::FigAcfShortmem
                ) {
                    return fail(format!("cell {i}: {} needs CSA parameters", self.experiment.name()));
                }
                continue;
            };
            if let Err(e) = c.require_stationary() {
                return fail(format!("cell {i}: {e}"));
            }
            if self.experiment == ExperimentKind::Table3 && !(c.b() < 2.0) {
                return fail(format!("cell {i}: table3 needs b in (1, 2), got {}", c.b()));
            }
        }
        Ok(())
    }
}
