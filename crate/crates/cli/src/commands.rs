use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nonfrac_core::estimate::{gph_estimate, periodogram_with};
use nonfrac_core::fitloss::{ar_report, best_matching_a, zeta_fractional};
use nonfrac_core::forecast::forecast_csa;
use nonfrac_core::harness::{run_experiment, write_csv, write_json, ExperimentResult, Scale};
use nonfrac_core::model::{acf_csa_lags, acf_frac_lags};
use nonfrac_core::simulate::{
    benchmark_generation, default_burn_in, generate_csa_fast, generate_csa_naive, generate_frac_fast,
};
use nonfrac_core::{CsaParams, EfficiencyReport, ExperimentConfig, ExperimentKind, FracParams, ProcessParams};

use crate::io::{emit, read_column, usage, CliError, CliResult, Csv};

#[derive(Debug, Parser)]
#[command(name = "nonfrac", version, about = "Long memory from aggregated AR(1) units versus fractional differencing")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate one series.
    Simulate(SimulateArgs),
    /// Optimal h-step forecasts of a CSA series.
    Forecast(ForecastArgs),
    /// Theoretical autocorrelations.
    Acf(AcfArgs),
    /// Periodogram of a series.
    Spectrum(SeriesInput),
    /// Log-periodogram estimate of the memory parameter.
    Gph(GphArgs),
    /// Forecast loss of a misspecified model fitted to a CSA process.
    Fit(FitArgs),
    /// CSA parameter `a` whose weights best match `I(d)` over `k` lags.
    Match(MatchArgs),
    /// Time fast against naive CSA generation.
    Benchmark(BenchmarkArgs),
    /// Run an experiment from a TOML configuration or by name.
    Experiment(ExperimentArgs),
    /// Regenerate a forecast-loss or estimation table.
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProcessKind {
    Csa,
    Frac,
}

#[derive(Debug, Args)]
struct ProcessArgs {
    #[arg(long, value_enum)]
    process: ProcessKind,
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    d: Option<f64>,
    /// Innovation standard deviation of each AR(1) unit.
    #[arg(long)]
    sigma: Option<f64>,
}

impl ProcessArgs {
    fn resolve(&self) -> CliResult<ProcessParams> {
        match self.process {
            ProcessKind::Csa => {
                if self.d.is_some() {
                    return Err(usage("--d applies to --process frac; CSA memory is set by --b"));
                }
                let p = csa_params(self.a, self.b, self.sigma)?;
                p.require_stationary()?;
                Ok(ProcessParams::Csa(p))
            }
            ProcessKind::Frac => {
                if self.a.is_some() || self.b.is_some() || self.sigma.is_some() {
                    return Err(usage("--a, --b and --sigma apply to --process csa"));
                }
                let d = self.d.ok_or_else(|| usage("--process frac needs --d"))?;
                Ok(ProcessParams::Frac(FracParams::new(d)?))
            }
        }
    }

    fn echo(&self, p: &ProcessParams) -> Vec<(&'static str, String)> {
        match p {
            ProcessParams::Csa(c) => vec![
                ("process", "csa".into()),
                ("a", c.a().to_string()),
                ("b", c.b().to_string()),
                ("sigma", c.sigma_eps().to_string()),
                ("d", c.memory().to_string()),
            ],
            ProcessParams::Frac(f) => vec![("process", "frac".into()), ("d", f.d().to_string())],
        }
    }
}

fn csa_params(a: Option<f64>, b: Option<f64>, sigma: Option<f64>) -> CliResult<CsaParams> {
    let a = a.ok_or_else(|| usage("CSA parameters need --a"))?;
    let b = b.ok_or_else(|| usage("CSA parameters need --b"))?;
    Ok(CsaParams::with_sigma(a, b, sigma.unwrap_or(1.0))?)
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Fast,
    Naive,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    process: ProcessArgs,
    #[arg(long)]
    length: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Method::Fast)]
    method: Method,
    /// Aggregated units for the naive method (default: the length).
    #[arg(long)]
    units: Option<usize>,
    /// Discarded warm-up steps for the naive method (default: max(2000, length)).
    #[arg(long)]
    burnin: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ForecastArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    horizon: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AcfArgs {
    #[command(flatten)]
    process: ProcessArgs,
    #[arg(long, default_value_t = 100)]
    max_lag: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SeriesInput {
    #[arg(long = "in")]
    input: PathBuf,
    /// Keep the sample mean instead of removing it.
    #[arg(long)]
    no_demean: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GphArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Number of Fourier frequencies (default: floor(sqrt(T))).
    #[arg(long)]
    bandwidth: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FitModel {
    Ar,
    Frac,
    Arfima,
}

#[derive(Debug, Args)]
struct FitArgs {
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
    #[arg(long, value_enum, default_value_t = FitModel::Ar)]
    model: FitModel,
    /// Autoregressive order for `--model ar`.
    #[arg(long, default_value_t = 1)]
    order: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MatchArgs {
    #[arg(long)]
    k: usize,
    #[arg(long, allow_negative_numbers = true)]
    d: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchmarkArgs {
    #[arg(long, default_value_t = 0.2)]
    a: f64,
    #[arg(long, default_value_t = 1.6)]
    b: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [100usize, 1000, 10_000])]
    sizes: Vec<usize>,
    /// Aggregated units for the naive method (default: the length).
    #[arg(long)]
    units: Option<usize>,
    #[arg(long, default_value_t = 3)]
    runs: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScaleArg {
    Desk,
    Paper,
}

impl From<ScaleArg> for Scale {
    fn from(s: ScaleArg) -> Self {
        match s {
            ScaleArg::Desk => Scale::Desk,
            ScaleArg::Paper => Scale::Paper,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// TOML configuration file.
    #[arg(long, conflicts_with_all = ["kind", "scale"])]
    config: Option<PathBuf>,
    /// Experiment name, used with scale defaults when no file is given.
    #[arg(long, required_unless_present = "config")]
    kind: Option<String>,
    #[arg(long, value_enum)]
    scale: Option<ScaleArg>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    replications: Option<usize>,
    #[arg(long)]
    length: Option<usize>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    table: u8,
    #[arg(long, value_enum, default_value_t = ScaleArg::Desk)]
    scale: ScaleArg,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Forecast(a) => forecast(a),
        Command::Acf(a) => acf(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Gph(a) => gph(a),
        Command::Fit(a) => fit(a),
        Command::Match(a) => matching(a),
        Command::Benchmark(a) => benchmark(a),
        Command::Experiment(a) => experiment(a),
        Command::Table(a) => table(a),
    }
}

fn simulate(args: SimulateArgs) -> CliResult<()> {
    let params = args.process.resolve()?;
    let naive_only = args.units.is_some() || args.burnin.is_some();
    let sample = match (params, args.method) {
        (ProcessParams::Csa(p), Method::Fast) if !naive_only => generate_csa_fast(p, args.length, args.seed)?,
        (ProcessParams::Frac(p), Method::Fast) if !naive_only => generate_frac_fast(p, args.length, args.seed)?,
        (ProcessParams::Csa(p), Method::Naive) => {
            let units = args.units.unwrap_or(args.length);
            let burn_in = args.burnin.unwrap_or_else(|| default_burn_in(args.length));
            generate_csa_naive(p, args.length, units, burn_in, args.seed)?
        }
        (ProcessParams::Frac(_), Method::Naive) => {
            return Err(usage("--method naive aggregates AR(1) units and needs --process csa"))
        }
        _ => return Err(usage("--units and --burnin apply to --method naive")),
    };
    let mut echo = args.process.echo(&params);
    echo.push(("method", format!("{:?}", args.method).to_lowercase()));
    echo.push(("length", args.length.to_string()));
    echo.push(("seed", args.seed.to_string()));
    if let Some(n) = sample.n_units {
        echo.push(("units", n.to_string()));
        echo.push(("burnin", args.burnin.unwrap_or_else(|| default_burn_in(args.length)).to_string()));
    }
    let mut csv = Csv::new(&echo, &["x"]);
    for v in &sample.values {
        csv.row([v]);
    }
    emit(args.out.as_deref(), &csv.into_bytes())
}

fn forecast(args: ForecastArgs) -> CliResult<()> {
    if args.horizon == 0 {
        return Err(usage("--horizon must be at least 1"));
    }
    let p = csa_params(Some(args.a), Some(args.b), args.sigma)?;
    p.require_stationary()?;
    let x = read_column(&args.input)?;
    let result = forecast_csa(&x, p, args.horizon)?;
    let error = result.reconstruction_error(&x);
    let echo = [
        ("a", p.a().to_string()),
        ("b", p.b().to_string()),
        ("sigma", p.sigma_eps().to_string()),
        ("horizon", args.horizon.to_string()),
        ("length", x.len().to_string()),
        ("reconstruction_error", format!("{error:e}")),
    ];
    let mut csv = Csv::new(&echo, &["horizon", "forecast"]);
    for (h, f) in result.point_forecasts.iter().enumerate() {
        csv.row([(h + 1).to_string(), f.to_string()]);
    }
    emit(args.out.as_deref(), &csv.into_bytes())
}

fn acf(args: AcfArgs) -> CliResult<()> {
    let params = args.process.resolve()?;
    let values = match params {
        ProcessParams::Csa(p) => acf_csa_lags(p, args.max_lag)?,
        ProcessParams::Frac(p) => acf_frac_lags(p, args.max_lag),
    };
    let mut echo = args.process.echo(&params);
    echo.push(("max_lag", args.max_lag.to_string()));
    let mut csv = Csv::new(&echo, &["lag", "acf"]);
    for (k, v) in values.iter().enumerate() {
        csv.row([k.to_string(), v.to_string()]);
    }
    emit(args.out.as_deref(), &csv.into_bytes())
}

fn spectrum(args: SeriesInput) -> CliResult<()> {
    let x = read_column(&args.input)?;
    let pg = periodogram_with(&x, !args.no_demean)?;
    let echo = [("length", x.len().to_string()), ("demean", (!args.no_demean).to_string())];
    let mut csv = Csv::new(&echo, &["frequency", "periodogram"]);
    for (l, i) in pg.frequencies.iter().zip(&pg.ordinates) {
        csv.row([l, i]);
    }
    emit(args.out.as_deref(), &csv.into_bytes())
}

fn gph(args: GphArgs) -> CliResult<()> {
    let x = read_column(&args.input)?;
    let est = gph_estimate(&x, args.bandwidth)?;
    let mut csv = Csv::new(&[("length", x.len().to_string())], &["d_hat", "std_error", "bandwidth"]);
    csv.row([est.d_hat.to_string(), est.std_error.to_string(), est.bandwidth.to_string()]);
    emit(args.out.as_deref(), &csv.into_bytes())
}

fn fit(args: FitArgs) -> CliResult<()> {
    let p = CsaParams::new(args.a, args.b)?;
    let report: EfficiencyReport = match args.model {
        FitModel::Ar => ar_report(p, args.order)?,
        FitModel::Frac => zeta_fractional(p)?.0,
        FitModel::Arfima => zeta_fractional(p)?.1,
    };
    let mut echo = vec![
        ("a", p.a().to_string()),
        ("b", p.b().to_string()),
        ("model", format!("{:?}", args.model).to_lowercase()),
    ];
    if let FitModel::Ar = args.model {
        echo.push(("order", args.order.to_string()));
    }
    let mut csv = Csv::new(&echo, &["parameter", "value"]);
    csv.row(["zeta".to_string(), report.zeta.to_string()]);
    for (i, c) in report.fitted_params.iter().enumerate() {
        csv.row([format!("alpha_{}", i + 1), c.to_string()]);
    }
    emit(args.out.as_deref(), &csv.into_bytes())
}

fn matching(args: MatchArgs) -> CliResult<()> {
    let m = best_matching_a(args.k, args.d)?;
    let mut csv = Csv::new(&[("k", args.k.to_string()), ("d", args.d.to_string())], &["a_star", "loss"]);
    csv.row([m.a_star, m.loss]);
    emit(args.out.as_deref(), &csv.into_bytes())
}

fn benchmark(args: BenchmarkArgs) -> CliResult<()> {
    let p = CsaParams::new(args.a, args.b)?;
    let rows = benchmark_generation(p, &args.sizes, |t| args.units.unwrap_or(t), args.runs)?;
    let echo = [("a", p.a().to_string()), ("b", p.b().to_string()), ("runs", args.runs.to_string())];
    let mut csv = Csv::new(&echo, &["length", "units", "fast_seconds", "naive_seconds", "speedup"]);
    for r in rows {
        csv.row([
            r.length.to_string(),
            r.n_units.to_string(),
            r.fast_seconds.to_string(),
            r.naive_seconds.to_string(),
            r.speedup.to_string(),
        ]);
    }
    emit(args.out.as_deref(), &csv.into_bytes())
}

fn experiment(args: ExperimentArgs) -> CliResult<()> {
    let mut cfg = match (&args.config, &args.kind) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            ExperimentConfig::from_toml_str(&text)?
        }
        (None, Some(name)) => {
            let kind = ExperimentKind::parse(name).ok_or_else(|| {
                let known: Vec<&str> = ExperimentKind::ALL.iter().map(|k| k.name()).collect();
                usage(format!("unknown experiment {name:?}; expected one of {}", known.join(", ")))
            })?;
            ExperimentConfig::defaults(kind, args.scale.map_or(Scale::Desk, Scale::from))
        }
        (None, None) => return Err(usage("give --config or --kind")),
    };
    if let Some(s) = args.seed {
        cfg.master_seed = s;
    }
    if let Some(r) = args.replications {
        cfg.replications = r;
    }
    if let Some(t) = args.length {
        cfg.sample_size = t;
    }
    if args.workers.is_some() {
        cfg.workers = args.workers;
    }
    let result = run_experiment(&cfg)?;
    let mut bytes = Vec::new();
    let written = match args.format {
        Format::Json => write_json(&result, &mut bytes),
        Format::Csv => write_csv(&result, &mut bytes),
    };
    written.map_err(|e| CliError::Runtime(format!("cannot serialise result: {e}")))?;
    emit(args.out.as_deref(), &bytes)
}

fn table(args: TableArgs) -> CliResult<()> {
    let kind = match args.table {
        1 => ExperimentKind::Table1,
        2 => ExperimentKind::Table2,
        _ => ExperimentKind::Table3,
    };
    let mut cfg = ExperimentConfig::defaults(kind, args.scale.into());
    if let Some(s) = args.seed {
        cfg.master_seed = s;
    }
    let result = run_experiment(&cfg)?;
    let echo = [
        ("table", args.table.to_string()),
        ("scale", format!("{:?}", args.scale).to_lowercase()),
        ("sample_size", cfg.sample_size.to_string()),
        ("replications", cfg.replications.to_string()),
        ("master_seed", cfg.master_seed.to_string()),
    ];
    let csv = match kind {
        ExperimentKind::Table1 => estimation_table(&result, &echo)?,
        ExperimentKind::Table2 => loss_table(&result, &echo, &["zeta_ar1", "zeta_ar20"])?,
        _ => loss_table(&result, &echo, &["zeta_frac", "zeta_arfima", "alpha_arfima"])?,
    };
    emit(args.out.as_deref(), &csv.into_bytes())
}

fn statistic(result: &ExperimentResult, cell: usize, name: &str) -> CliResult<(f64, Option<f64>)> {
    result.per_cell[cell]
        .statistic(name)
        .map(|s| (s.mean, s.sd))
        .ok_or_else(|| CliError::Runtime(format!("cell {cell} lacks statistic {name}")))
}

/// Rows by `a`, one column per statistic and `b`.
fn loss_table(result: &ExperimentResult, echo: &[(&str, String)], stats: &[&str]) -> CliResult<Csv> {
    let mut a_values: Vec<f64> = Vec::new();
    let mut b_values: Vec<f64> = Vec::new();
    for cell in &result.per_cell {
        if let ProcessParams::Csa(p) = cell.params {
            if !a_values.contains(&p.a()) {
                a_values.push(p.a());
            }
            if !b_values.contains(&p.b()) {
                b_values.push(p.b());
            }
        }
    }
    let columns: Vec<String> = stats
        .iter()
        .flat_map(|s| b_values.iter().map(move |b| format!("{}_b{b}", s.trim_start_matches("zeta_"))))
        .collect();
    let mut header = vec!["a"];
    header.extend(columns.iter().map(String::as_str));
    let mut csv = Csv::new(echo, &header);
    for (i, a) in a_values.iter().enumerate() {
        let mut row = vec![a.to_string()];
        for s in stats {
            for j in 0..b_values.len() {
                row.push(statistic(result, i * b_values.len() + j, s)?.0.to_string());
            }
        }
        csv.row(row);
    }
    Ok(csv)
}

/// One row per memory parameter, CSA and `I(d)` means and SDs side by side.
fn estimation_table(result: &ExperimentResult, echo: &[(&str, String)]) -> CliResult<Csv> {
    let mut csv = Csv::new(echo, &["d", "csa_mean", "csa_sd", "frac_mean", "frac_sd"]);
    for pair in result.per_cell.chunks(2) {
        let d = pair[pair.len() - 1].params.memory();
        let mut row = vec![d.to_string()];
        for cell in pair {
            let (m, s) = statistic(result, cell.cell, "d_hat")?;
            row.push(m.to_string());
            row.push(s.map(|v| v.to_string()).unwrap_or_default());
        }
        csv.row(row);
    }
    Ok(csv)
}
