//! `driftcast` command-line frontend.
//!
//! Commands return their stdout text so they can be driven from tests; the
//! binary only parses arguments, prints, and maps errors to exit codes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::arff::{parse_arff, write_arff};
use crate::csv_format::{parse_csv_with_header_schema, write_csv};
use crate::dataset::{AttributeSchema, Dataset, MissingPolicy};
use crate::error::{Error, Result};
use crate::evaluation::{evaluate_rows, GroundTruth};
use crate::incremental::{compare_with_refit, insert_stream, InsertionMode};
use crate::kmeans::{lloyd_fit, InitStrategy, LloydConfig, DEFAULT_MAX_ITER};
use crate::labeling::{
    forecast, label_clusters, label_pooled_clusters, parse_attribution, read_forecast_csv, write_forecast_csv,
    CategoryMap, Normalization,
};
use crate::metric::DistanceMetric;
use crate::model::ClusterModel;
use crate::model_file::{load_model, model_to_json};
use crate::synthetic::{generate_synthetic, SyntheticProfile};

#[derive(Debug, Parser)]
#[command(name = "driftcast", version, about = "K-means weather-category forecasting from pollutant readings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a K-means model to a CSV or ARFF dataset.
    Fit(FitArgs),
    /// Attach weather categories to a model's clusters.
    Label(LabelArgs),
    /// Assign new records to a labeled model and emit forecasts.
    Forecast(ForecastArgs),
    /// Score a forecast file against ground truth.
    Evaluate(EvaluateArgs),
    /// Compare incremental insertion with a full refit.
    Compare(CompareArgs),
    /// Generate a synthetic pollutant dataset.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Every present reading is its own 1-D point.
    Pooled,
    /// One 4-D point per day.
    Vector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Missing {
    Drop,
    Mean,
}

impl From<Missing> for MissingPolicy {
    fn from(m: Missing) -> Self {
        match m {
            Missing::Drop => MissingPolicy::DropRecord,
            Missing::Mean => MissingPolicy::ColumnMean,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Arff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormalizeArg {
    None,
    Zscore,
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, value_enum, default_value = "drop")]
    pub missing: Missing,
    #[arg(long, value_enum, default_value = "vector")]
    pub mode: Mode,
}

#[derive(Debug, Clone, Args)]
pub struct FitConfigArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value = "euclidean")]
    pub metric: DistanceMetric,
    /// `explicit:<means>`, `first-k` or `random[:seed]`.
    #[arg(long, default_value = "first-k")]
    pub init: String,
    /// Seed for `--init random` when none is given inline.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
}

impl FitConfigArgs {
    fn config(&self) -> Result<LloydConfig> {
        let init = if self.init.trim().eq_ignore_ascii_case("random") {
            InitStrategy::Random {
                seed: self.seed.unwrap_or(0),
            }
        } else {
            self.init.parse().map_err(Error::Schema)?
        };
        Ok(LloydConfig::new(self.k, self.metric)
            .with_init(init)
            .with_max_iter(self.max_iter))
    }
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    pub data: PathBuf,
    #[command(flatten)]
    pub fit: FitConfigArgs,
    #[command(flatten)]
    pub data_args: DataArgs,
    /// Where to write the model JSON.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct LabelArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Cluster-to-attribute map for pooled models, e.g. `0=RPM,1=NOx,2=CO2,3=SO2`.
    #[arg(long)]
    pub attribution: Option<String>,
    /// Compare z-scored centroid components instead of raw means (extension).
    #[arg(long, value_enum, default_value = "none")]
    pub normalize: NormalizeArg,
    /// Output path; defaults to rewriting `--model`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ForecastArgs {
    pub new_data: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long = "insert", default_value = "static")]
    pub insert: InsertionMode,
    #[arg(long)]
    pub format: Option<Format>,
    #[arg(long, value_enum, default_value = "drop")]
    pub missing: Missing,
    /// Forecast CSV destination; printed to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Optional insertion log CSV with per-centroid distances.
    #[arg(long)]
    pub log: Option<PathBuf>,
    /// Where running-mean mode writes the updated model; defaults to `--model`.
    #[arg(long)]
    pub model_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    pub forecast: PathBuf,
    pub truth: PathBuf,
    /// Print the report as JSON instead of text.
    #[arg(long)]
    pub json: bool,
    /// Also write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    pub base: PathBuf,
    pub new_data: PathBuf,
    #[command(flatten)]
    pub fit: FitConfigArgs,
    #[command(flatten)]
    pub data_args: DataArgs,
    #[arg(long = "insert", default_value = "static")]
    pub insert: InsertionMode,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub days: usize,
    /// Per-attribute `low:high` ranges, comma separated.
    #[arg(long, default_value = "27:270,27:175,5:16,31:120")]
    pub profile: String,
    /// Attribute names matching `--profile`.
    #[arg(long, default_value = "CO2,RPM,SO2,NOx")]
    pub attributes: String,
    /// Written as ARFF for a `.arff` path, CSV otherwise. Stdout gets CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I) -> Result<String>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => Err(Error::Schema(e.to_string())),
    }
}

pub fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Fit(args) => cmd_fit(&args),
        Command::Label(args) => cmd_label(&args),
        Command::Forecast(args) => cmd_forecast(&args),
        Command::Evaluate(args) => cmd_evaluate(&args),
        Command::Compare(args) => cmd_compare(&args),
        Command::Gen(args) => cmd_gen(&args),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Wraps errors from a file's contents with the file name.
fn in_file<T>(path: &Path, result: Result<T>) -> Result<T> {
    result.map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

/// Reads a dataset, dispatching on `format` or the file extension.
pub fn load_dataset(path: &Path, format: Option<Format>) -> Result<Dataset> {
    let format = match format {
        Some(f) => f,
        None => match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("arff") => Format::Arff,
            Some("csv") => Format::Csv,
            _ => {
                return Err(Error::Schema(format!(
                    "{}: cannot infer format from extension; pass --format csv|arff",
                    path.display()
                )))
            }
        },
    };
    let text = read_text(path)?;
    in_file(
        path,
        match format {
            Format::Csv => parse_csv_with_header_schema(&text),
            Format::Arff => parse_arff(&text),
        },
    )
}

/// Dataset ready for clustering under `mode`: pooled data is flattened (missing
/// readings simply contribute no point), vector data has missing values resolved.
fn prepare(ds: &Dataset, mode: Mode, missing: Missing) -> Result<Dataset> {
    match mode {
        Mode::Pooled => Ok(ds.pooled()),
        Mode::Vector => {
            let resolved = ds.resolve_missing(missing.into())?;
            if resolved.len() < ds.len() {
                log::info!("dropped {} records with missing readings", ds.len() - resolved.len());
            }
            Ok(resolved)
        }
    }
}

/// Means at six decimals for daily vectors, two for pooled scalars.
pub fn format_means(model: &ClusterModel) -> String {
    let decimals = if model.is_pooled() { 2 } else { 6 };
    let mut out = String::from("clusterid");
    for name in model.schema().names() {
        let _ = write!(out, "\t{name}mean");
    }
    out.push_str("\tmembers\n");
    for (i, c) in model.centroids().iter().enumerate() {
        let _ = write!(out, "cluster{i}");
        for v in &c.mean {
            let _ = write!(out, "\t{v:.decimals$}");
        }
        let _ = writeln!(out, "\t{}", c.member_count);
    }
    out
}

pub fn cmd_fit(args: &FitArgs) -> Result<String> {
    let raw = load_dataset(&args.data, args.data_args.format)?;
    let ds = prepare(&raw, args.data_args.mode, args.data_args.missing)?;
    let config = args.fit.config()?;
    let fit = lloyd_fit(&ds, &config)?;
    write_text(&args.out, &model_to_json(&fit.model)?)?;

    let mut out = String::new();
    let _ = writeln!(out, "K: {}", fit.model.k());
    let _ = writeln!(out, "metric: {}", fit.model.metric());
    let _ = writeln!(out, "points: {}", ds.len());
    let _ = writeln!(
        out,
        "iterations: {}{}",
        fit.iterations,
        if fit.converged { "" } else { " (max_iter reached)" }
    );
    let _ = writeln!(out, "wcss: {:.6}", fit.assignment.wcss);
    out.push_str(&format_means(&fit.model));
    Ok(out)
}

pub fn cmd_label(args: &LabelArgs) -> Result<String> {
    let model = load_model(&args.model)?;
    let categories = CategoryMap::pollutants();
    let labeled = match (&args.attribution, model.schema().arity()) {
        (Some(map), 1) => {
            let map = parse_attribution(map).map_err(Error::Labeling)?;
            label_pooled_clusters(&model, &map, &categories)?
        }
        (None, 1) => {
            return Err(Error::Labeling(
                "pooled model needs --attribution, e.g. --attribution 0=RPM,1=NOx,2=CO2,3=SO2".into(),
            ))
        }
        (Some(_), _) => {
            return Err(Error::Labeling(
                "--attribution only applies to pooled models; vector models are labeled by their dominant attribute".into(),
            ))
        }
        (None, _) => {
            let normalization = match args.normalize {
                NormalizeArg::None => Normalization::None,
                NormalizeArg::Zscore => Normalization::ZScore,
            };
            label_clusters(&model, &categories, normalization)?
        }
    };
    let out_path = args.out.as_ref().unwrap_or(&args.model);
    write_text(out_path, &model_to_json(&labeled)?)?;

    let mut out = String::from("cluster\tdominant\tcluster maximum\tweather category\n");
    for (i, (label, c)) in labeled.labels().iter().zip(labeled.centroids()).enumerate() {
        let label = label.as_ref().expect("every cluster labeled");
        let max = c.mean.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let _ = writeln!(out, "cluster{i}\t{}\t{max:.6}\t{}", label.dominant, label.description);
    }
    Ok(out)
}

pub fn cmd_forecast(args: &ForecastArgs) -> Result<String> {
    let model = load_model(&args.model)?;
    if let Some(c) = model.labels().iter().position(Option::is_none) {
        return Err(Error::Labeling(format!(
            "cluster {c} has no weather category; run `driftcast label --model {}` first",
            args.model.display()
        )));
    }
    let raw = load_dataset(&args.new_data, args.format)?;
    let mode = if model.is_pooled() { Mode::Pooled } else { Mode::Vector };
    let new_records = prepare(&raw, mode, args.missing)?;
    if mode == Mode::Vector && new_records.schema() != model.schema() {
        return Err(Error::Schema(format!(
            "new data attributes {:?} do not match model attributes {:?}",
            new_records.schema().names(),
            model.schema().names()
        )));
    }

    let k = model.k();
    let (updated, log) = insert_stream(&new_records, model.clone(), args.insert)?;
    let forecasts = forecast(&log, &updated)?;
    let csv = write_forecast_csv(&forecasts)?;

    if let Some(path) = &args.log {
        write_text(path, &log.to_csv(k)?)?;
    }
    if args.insert == InsertionMode::RunningMean {
        let path = args.model_out.as_ref().unwrap_or(&args.model);
        write_text(path, &model_to_json(&updated)?)?;
    }
    match &args.out {
        Some(path) => {
            write_text(path, &csv)?;
            let mut out = String::new();
            for entry in &log.entries {
                let _ = writeln!(
                    out,
                    "{}\tcluster{}\t{:.4}\t{}",
                    crate::dataset::format_date(entry.date),
                    entry.cluster,
                    entry.min_distance(),
                    entry.category.as_deref().unwrap_or("")
                );
            }
            let _ = writeln!(out, "{} records forecast", log.len());
            Ok(out)
        }
        None => Ok(csv),
    }
}

pub fn cmd_evaluate(args: &EvaluateArgs) -> Result<String> {
    let rows = in_file(&args.forecast, read_forecast_csv(&read_text(&args.forecast)?))?;
    let truth = in_file(&args.truth, GroundTruth::from_csv(&read_text(&args.truth)?))?;
    let report = evaluate_rows(&rows, &truth)?;
    let json = report.to_json()?;
    if let Some(path) = &args.out {
        write_text(path, &format!("{json}\n"))?;
    }
    Ok(if args.json { format!("{json}\n") } else { report.to_string() })
}

pub fn cmd_compare(args: &CompareArgs) -> Result<String> {
    let base = prepare(&load_dataset(&args.base, args.data_args.format)?, args.data_args.mode, args.data_args.missing)?;
    let new_records = prepare(
        &load_dataset(&args.new_data, args.data_args.format)?,
        args.data_args.mode,
        args.data_args.missing,
    )?;
    let report = compare_with_refit(&base, &new_records, &args.fit.config()?, args.insert)?;
    Ok(report.to_string())
}

pub fn cmd_gen(args: &GenArgs) -> Result<String> {
    let schema = AttributeSchema::new(args.attributes.split(',').map(|s| s.trim().to_string()))?;
    let ranges = args
        .profile
        .split(',')
        .map(|pair| {
            let (low, high) = pair
                .split_once(':')
                .ok_or_else(|| Error::Schema(format!("expected low:high, got {pair:?}")))?;
            let parse = |t: &str| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Schema(format!("invalid range bound {t:?}")))
            };
            Ok((parse(low)?, parse(high)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let profile = SyntheticProfile::new(schema, ranges)?;
    let ds = generate_synthetic(args.seed, args.days, &profile);
    match &args.out {
        Some(path) => {
            let is_arff = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("arff"));
            let text = if is_arff { write_arff(&ds, "synthetic_pollution") } else { write_csv(&ds) };
            write_text(path, &text)?;
            Ok(format!("wrote {} records to {}\n", args.days, path.display()))
        }
        None => Ok(write_csv(&ds)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_flag_set() {
        let cli = Cli::try_parse_from([
            "driftcast", "fit", "data.csv", "--k", "4", "--metric", "manhattan", "--init", "explicit:8,56,28,72",
            "--max-iter", "10", "--missing", "mean", "--mode", "pooled", "--out", "m.json",
        ])
        .unwrap();
        match cli.command {
            Command::Fit(args) => {
                assert_eq!(args.fit.k, 4);
                assert_eq!(args.fit.metric, DistanceMetric::Manhattan);
                assert_eq!(args.data_args.mode, Mode::Pooled);
                assert_eq!(args.fit.config().unwrap().max_iter, 10);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn seed_flag_feeds_random_init() {
        let cli = Cli::try_parse_from([
            "driftcast", "compare", "a.csv", "b.csv", "--k", "2", "--init", "random", "--seed", "7",
        ])
        .unwrap();
        match cli.command {
            Command::Compare(args) => assert_eq!(args.fit.config().unwrap().init, InitStrategy::Random { seed: 7 }),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_extension_needs_format() {
        assert!(load_dataset(Path::new("readings.txt"), None).is_err());
    }
}
