//! Argument definitions and the four subcommands.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use lfda::{
    discard_labels, fit_klfda_with_data, fit_lfda, fit_self, Bandwidth, EmbeddingModel,
    LabelVector, MethodKind, Metric, SelfConfig, DEFAULT_KNN,
};
use lfda::semi::{DEFAULT_MIN_OBS_PER_LABEL, DEFAULT_SELF_KNN};

use crate::dataset::{CsvTable, Dataset};
use crate::error::{CliError, CliResult};
use crate::model_file::ModelFile;
use crate::plot::{render_svg, Scatter};

/// Mixing weight used by `fit --method self` when `--beta` is absent.
pub const DEFAULT_BETA: f64 = 0.5;

#[derive(Debug, Parser)]
#[command(name = "lfda", version, about = "Local Fisher discriminant analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a model on a labeled CSV file and save it as JSON.
    Fit(FitArgs),
    /// Embed the rows of a CSV file with a saved model.
    Transform(TransformArgs),
    /// Draw two embedding columns as an SVG scatter plot.
    Plot(PlotArgs),
    /// Print a summary of a saved model.
    Inspect(InspectArgs),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaArg {
    Value(f64),
    Auto,
}

fn parse_sigma(s: &str) -> Result<SigmaArg, String> {
    if s == "auto" {
        return Ok(SigmaArg::Auto);
    }
    s.parse::<f64>()
        .map(SigmaArg::Value)
        .map_err(|_| format!("expected a number or 'auto', got '{s}'"))
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected two indices 'i,j', got '{s}'"))?;
    let idx = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("'{t}' is not a column index"))
    };
    Ok((idx(a)?, idx(b)?))
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub label_col: String,
    #[arg(long, default_value = "lfda")]
    pub method: MethodKind,
    #[arg(long)]
    pub r: usize,
    #[arg(long, default_value = "plain")]
    pub metric: Metric,
    /// Neighbour rank for local scaling (7, or 5 for self).
    #[arg(long)]
    pub knn: Option<usize>,
    /// Gaussian bandwidth for klfda, or `auto` for the median pairwise distance.
    #[arg(long, value_parser = parse_sigma)]
    pub sigma: Option<SigmaArg>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub min_obs_per_label: Option<usize>,
    /// Fraction of labels to drop before fitting (self only).
    #[arg(long, requires = "seed")]
    pub discard_fraction: Option<f64>,
    #[arg(long, requires = "discard_fraction")]
    pub seed: Option<u64>,
    /// Keep klfda models small; they can then no longer embed new rows.
    #[arg(long)]
    pub no_store_training: bool,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Embedding CSV with columns Z1, Z2, ...
    #[arg(long)]
    pub input: PathBuf,
    /// Zero-based embedding columns to draw.
    #[arg(long, value_parser = parse_dims, default_value = "0,1")]
    pub dims: (usize, usize),
    /// Column used for colouring; defaults to the first non-embedding column.
    #[arg(long)]
    pub label_col: Option<String>,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    #[arg(long)]
    pub model: PathBuf,
}

pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Fit(a) => cmd_fit(&a, out),
        Command::Transform(a) => cmd_transform(&a, out),
        Command::Plot(a) => cmd_plot(&a, out),
        Command::Inspect(a) => cmd_inspect(&a, out),
    }
}

fn emit(out: &mut dyn Write, line: &str) -> CliResult<()> {
    writeln!(out, "{line}").map_err(|e| CliError::input(format!("cannot write output: {e}")))
}

/// `v` with 6 significant digits.
pub fn sig6(v: f64) -> String {
    format!("{v:.5e}")
}

fn check_fit_flags(a: &FitArgs) -> CliResult<()> {
    let only = |flag: &str, method: &str| {
        Err(CliError::input(format!("{flag} applies only to --method {method}")))
    };
    if a.method != MethodKind::Klfda {
        if a.sigma.is_some() {
            return only("--sigma", "klfda");
        }
        if a.no_store_training {
            return only("--no-store-training", "klfda");
        }
    }
    if a.method != MethodKind::SelfBlend {
        if a.beta.is_some() {
            return only("--beta", "self");
        }
        if a.min_obs_per_label.is_some() {
            return only("--min-obs-per-label", "self");
        }
        if a.discard_fraction.is_some() {
            return only("--discard-fraction", "self");
        }
    }
    if a.r == 0 {
        return Err(CliError::input("r must be at least 1"));
    }
    Ok(())
}

pub fn fit_model(a: &FitArgs, ds: &Dataset) -> CliResult<EmbeddingModel> {
    let (n, d) = (ds.rows.n(), ds.rows.d());
    let labels = ds.labels.as_ref().expect("fit reads a label column");
    let fail = |e| CliError::from_lfda("fit failed", e);
    match a.method {
        MethodKind::Lfda => {
            if a.r > d {
                return Err(CliError::input(format!(
                    "r exceeds feature count (r = {}, features = {d})",
                    a.r
                )));
            }
            fit_lfda(&ds.rows, labels, a.r, a.metric, a.knn.unwrap_or(DEFAULT_KNN)).map_err(fail)
        }
        MethodKind::Klfda => {
            if a.r > n {
                return Err(CliError::input(format!(
                    "r exceeds sample count (r = {}, samples = {n})",
                    a.r
                )));
            }
            let bandwidth = match a.sigma {
                None => Bandwidth::default(),
                Some(SigmaArg::Value(s)) => Bandwidth::Fixed(s),
                Some(SigmaArg::Auto) => Bandwidth::Median,
            };
            let model = fit_klfda_with_data(
                &ds.rows,
                bandwidth,
                labels,
                a.r,
                a.metric,
                a.knn.unwrap_or(DEFAULT_KNN),
            )
            .map_err(fail)?;
            if a.no_store_training {
                let mut parts = model.into_parts();
                parts.training = None;
                return EmbeddingModel::from_parts(parts).map_err(fail);
            }
            Ok(model)
        }
        MethodKind::SelfBlend => {
            if a.r > d {
                return Err(CliError::input(format!(
                    "r exceeds feature count (r = {}, features = {d})",
                    a.r
                )));
            }
            let labels: LabelVector = match a.discard_fraction {
                Some(f) => discard_labels(labels, f, a.seed.unwrap_or_default()).map_err(fail)?,
                None => labels.clone(),
            };
            let cfg = SelfConfig {
                beta: a.beta.unwrap_or(DEFAULT_BETA),
                knn: a.knn.unwrap_or(DEFAULT_SELF_KNN),
                min_obs_per_label: a.min_obs_per_label.unwrap_or(DEFAULT_MIN_OBS_PER_LABEL),
                r: a.r,
                metric: a.metric,
            };
            fit_self(&ds.rows, &labels, &cfg).map_err(fail)
        }
    }
}

pub fn fit_summary(model: &EmbeddingModel, n: usize, d: usize) -> String {
    let eig: Vec<String> = model.eigenvalues().iter().map(|&v| sig6(v)).collect();
    let mut line = format!(
        "{} n={n} d={d} r={} eigenvalues=[{}]",
        model.kind(),
        model.r(),
        eig.join(", ")
    );
    if model.kind() == MethodKind::SelfBlend {
        let p = model.params();
        line.push_str(&format!(" {} labeled / {} unlabeled", p.n_labeled, p.n_unlabeled));
    }
    line
}

fn cmd_fit(a: &FitArgs, out: &mut dyn Write) -> CliResult<()> {
    check_fit_flags(a)?;
    let ds = Dataset::read(&a.input, Some(&a.label_col))?;
    let model = fit_model(a, &ds)?;
    ModelFile::from_model(&model, &ds.feature_names, Some(&a.label_col)).save(&a.output)?;
    emit(out, &fit_summary(&model, ds.rows.n(), ds.rows.d()))
}

fn cmd_transform(a: &TransformArgs, _out: &mut dyn Write) -> CliResult<()> {
    let file = ModelFile::load(&a.model)?;
    let model = file.to_model().map_err(|e| prefix(&a.model, e))?;
    if !model.is_transformable() {
        return Err(CliError::input(format!(
            "{}: model not transformable (klfda model saved without training data)",
            a.model.display()
        )));
    }
    let table = CsvTable::read(&a.input)?;
    let x = table.numeric(&file.feature_names)?;
    let z = model
        .transform(&x)
        .map_err(|e| CliError::from_lfda("transform failed", e))?;
    let labels = match &file.label_column {
        Some(name) if table.headers().iter().any(|h| h == name) => Some((name, table.strings(name)?)),
        _ => None,
    };

    let fail = |e: csv::Error| CliError::input(format!("{}: {e}", a.output.display()));
    let mut w = csv::Writer::from_path(&a.output).map_err(fail)?;
    let mut header: Vec<String> = (1..=model.r()).map(|k| format!("Z{k}")).collect();
    if let Some((name, _)) = &labels {
        header.push(name.to_string());
    }
    w.write_record(&header).map_err(fail)?;
    for (i, row) in z.rows().into_iter().enumerate() {
        let mut rec: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        if let Some((_, values)) = &labels {
            rec.push(values[i].clone());
        }
        w.write_record(&rec).map_err(fail)?;
    }
    w.flush()
        .map_err(|e| CliError::input(format!("{}: {e}", a.output.display())))
}

fn prefix(path: &Path, e: CliError) -> CliError {
    let msg = format!("{}: {e}", path.display());
    match e {
        CliError::Input(_) => CliError::Input(msg),
        CliError::Numerical(_) => CliError::Numerical(msg),
    }
}

fn is_embedding_column(name: &str) -> bool {
    name.strip_prefix('Z')
        .is_some_and(|k| !k.is_empty() && k.bytes().all(|b| b.is_ascii_digit()))
}

fn cmd_plot(a: &PlotArgs, _out: &mut dyn Write) -> CliResult<()> {
    let table = CsvTable::read(&a.input)?;
    let m = (1..)
        .take_while(|k| table.headers().iter().any(|h| *h == format!("Z{k}")))
        .count();
    if m < 2 {
        return Err(CliError::input(format!(
            "{}: need at least two embedding columns Z1, Z2",
            a.input.display()
        )));
    }
    let (i, j) = a.dims;
    if i >= m || j >= m {
        return Err(CliError::input(format!(
            "dims {i},{j} out of range: {} has {m} embedding columns (indices 0..{})",
            a.input.display(),
            m - 1
        )));
    }
    let z = table.numeric(&[format!("Z{}", i + 1), format!("Z{}", j + 1)])?;
    let label_col = match &a.label_col {
        Some(name) => Some(name.clone()),
        None => table.headers().iter().find(|h| !is_embedding_column(h)).cloned(),
    };
    let labels = label_col.map(|c| table.strings(&c)).transpose()?;
    let xs = z.as_array().column(0).to_vec();
    let ys = z.as_array().column(1).to_vec();
    let svg = render_svg(&Scatter {
        xs: &xs,
        ys: &ys,
        labels: labels.as_deref(),
        dims: (i, j),
    });
    std::fs::write(&a.output, svg)
        .map_err(|e| CliError::input(format!("{}: {e}", a.output.display())))
}

fn shape(rows: &[Vec<f64>]) -> String {
    format!("{}x{}", rows.len(), rows.first().map_or(0, Vec::len))
}

fn cmd_inspect(a: &InspectArgs, out: &mut dyn Write) -> CliResult<()> {
    let file = ModelFile::load(&a.model)?;
    let model = file.to_model().map_err(|e| prefix(&a.model, e))?;
    let fp = &file.fit_params;
    let opt = |v: Option<f64>| v.map_or("none".to_string(), sig6);
    let eig: Vec<String> = file.eigenvalues.iter().map(|&v| sig6(v)).collect();
    let lines = [
        format!("format_version: {}", file.format_version),
        format!("kind: {}", file.kind),
        format!("metric: {}", file.metric),
        format!("r: {}", file.r),
        format!("transform: {}", shape(&file.transform)),
        format!("embedded: {}", shape(&file.embedded)),
        format!("eigenvalues: {}", eig.join(", ")),
        format!("knn: {}", fp.knn),
        format!("beta: {}", opt(fp.beta)),
        format!("sigma: {}", opt(fp.sigma)),
        format!(
            "min_obs_per_label: {}",
            fp.min_obs_per_label.map_or("none".to_string(), |v| v.to_string())
        ),
        format!("n_labeled: {}", fp.n_labeled),
        format!("n_unlabeled: {}", fp.n_unlabeled),
        format!("ridge: {}", sig6(file.ridge)),
        format!("features: {}", file.feature_names.join(", ")),
        format!("label_column: {}", file.label_column.as_deref().unwrap_or("none")),
        format!("label_classes: {}", file.label_classes.join(", ")),
        format!(
            "training: {}",
            file.training.as_deref().map_or("none".to_string(), shape)
        ),
        format!("transformable: {}", model.is_transformable()),
        format!("warnings: {}", file.warnings.len()),
    ];
    for line in &lines {
        emit(out, line)?;
    }
    for w in &file.warnings {
        emit(out, &format!("warning: {w}"))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sigma_and_dims() {
        assert_eq!(parse_sigma("auto"), Ok(SigmaArg::Auto));
        assert_eq!(parse_sigma("0.5"), Ok(SigmaArg::Value(0.5)));
        assert!(parse_sigma("wide").is_err());
        assert_eq!(parse_dims("0,2"), Ok((0, 2)));
        assert_eq!(parse_dims(" 1 , 0"), Ok((1, 0)));
        assert!(parse_dims("1").is_err());
        assert!(parse_dims("a,b").is_err());
    }

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(842.356281), "8.42356e2");
        assert_eq!(sig6(0.0), "0.00000e0");
    }

    #[test]
    fn embedding_column_names() {
        assert!(is_embedding_column("Z1"));
        assert!(is_embedding_column("Z12"));
        assert!(!is_embedding_column("Z"));
        assert!(!is_embedding_column("Zeta"));
        assert!(!is_embedding_column("species"));
    }
}
