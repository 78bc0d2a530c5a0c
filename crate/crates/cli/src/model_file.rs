//! JSON persistence of fitted models.
//!
//! Floats are written with 17 significant digits so every `f64` survives a
//! save/load cycle unchanged.

use std::fs;
use std::path::Path;

use lfda::{DataMatrix, EmbeddingModel, FitParams, MethodKind, Metric, ModelParts};
use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::{CliError, CliResult};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitParamsFile {
    pub knn: usize,
    #[serde(serialize_with = "opt_exact")]
    pub beta: Option<f64>,
    #[serde(serialize_with = "opt_exact")]
    pub sigma: Option<f64>,
    pub min_obs_per_label: Option<usize>,
    pub n_labeled: usize,
    pub n_unlabeled: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub kind: String,
    pub metric: String,
    pub r: usize,
    pub fit_params: FitParamsFile,
    pub feature_names: Vec<String>,
    pub label_column: Option<String>,
    pub label_classes: Vec<String>,
    #[serde(serialize_with = "vec_exact")]
    pub eigenvalues: Vec<f64>,
    #[serde(serialize_with = "exact")]
    pub ridge: f64,
    /// Row-major `d × r`, or `n × r` kernel coefficients.
    #[serde(serialize_with = "mat_exact")]
    pub transform: Vec<Vec<f64>>,
    #[serde(serialize_with = "mat_exact")]
    pub embedded: Vec<Vec<f64>>,
    #[serde(serialize_with = "opt_mat_exact")]
    pub training: Option<Vec<Vec<f64>>>,
    pub warnings: Vec<String>,
}

fn raw(v: f64) -> Result<Box<RawValue>, String> {
    if !v.is_finite() {
        return Err(format!("cannot store non-finite value {v}"));
    }
    RawValue::from_string(format!("{v:.16e}")).map_err(|e| e.to_string())
}

fn exact<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    raw(*v).map_err(serde::ser::Error::custom)?.serialize(s)
}

fn opt_exact<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    v.map(raw)
        .transpose()
        .map_err(serde::ser::Error::custom)?
        .serialize(s)
}

fn raw_vec(v: &[f64]) -> Result<Vec<Box<RawValue>>, String> {
    v.iter().map(|&x| raw(x)).collect()
}

fn vec_exact<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
    raw_vec(v).map_err(serde::ser::Error::custom)?.serialize(s)
}

fn mat_exact<S: Serializer>(m: &[Vec<f64>], s: S) -> Result<S::Ok, S::Error> {
    m.iter()
        .map(|row| raw_vec(row))
        .collect::<Result<Vec<_>, _>>()
        .map_err(serde::ser::Error::custom)?
        .serialize(s)
}

fn opt_mat_exact<S: Serializer>(m: &Option<Vec<Vec<f64>>>, s: S) -> Result<S::Ok, S::Error> {
    match m {
        Some(m) => mat_exact(m, s),
        None => s.serialize_none(),
    }
}

fn to_rows(a: &Array2<f64>) -> Vec<Vec<f64>> {
    a.rows().into_iter().map(|r| r.to_vec()).collect()
}

fn from_rows(name: &str, rows: &[Vec<f64>]) -> CliResult<Array2<f64>> {
    let ncols = rows.first().map_or(0, Vec::len);
    if let Some(i) = rows.iter().position(|r| r.len() != ncols) {
        return Err(CliError::input(format!("{name}: row {i} has the wrong length")));
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    Array2::from_shape_vec((rows.len(), ncols), flat)
        .map_err(|e| CliError::input(format!("{name}: {e}")))
}

impl ModelFile {
    pub fn from_model(
        model: &EmbeddingModel,
        feature_names: &[String],
        label_column: Option<&str>,
    ) -> Self {
        let p = model.parts();
        ModelFile {
            format_version: FORMAT_VERSION,
            kind: p.kind.as_str().to_string(),
            metric: p.metric.as_str().to_string(),
            r: model.r(),
            fit_params: FitParamsFile {
                knn: p.params.knn,
                beta: p.params.beta,
                sigma: p.params.sigma,
                min_obs_per_label: p.params.min_obs_per_label,
                n_labeled: p.params.n_labeled,
                n_unlabeled: p.params.n_unlabeled,
            },
            feature_names: feature_names.to_vec(),
            label_column: label_column.map(String::from),
            label_classes: p.classes.clone(),
            eigenvalues: p.eigenvalues.to_vec(),
            ridge: p.ridge,
            transform: to_rows(&p.transform),
            embedded: to_rows(&p.embedded),
            training: p.training.as_ref().map(|t| to_rows(t.as_array())),
            warnings: p.warnings.clone(),
        }
    }

    pub fn to_model(&self) -> CliResult<EmbeddingModel> {
        let kind: MethodKind = self.kind.parse().map_err(CliError::input)?;
        let metric: Metric = self.metric.parse().map_err(CliError::input)?;
        let transform = from_rows("transform", &self.transform)?;
        if transform.ncols() != self.r {
            return Err(CliError::input(format!(
                "r = {} but transform has {} columns",
                self.r,
                transform.ncols()
            )));
        }
        let input_rows = match kind {
            MethodKind::Klfda => self.training.as_ref().map(|t| t.first().map_or(0, Vec::len)),
            _ => Some(transform.nrows()),
        };
        if let Some(d) = input_rows {
            if d != self.feature_names.len() {
                return Err(CliError::input(format!(
                    "{} feature names for {d} model inputs",
                    self.feature_names.len()
                )));
            }
        }
        let training = match &self.training {
            Some(rows) => Some(
                DataMatrix::new(from_rows("training", rows)?)
                    .map_err(|e| CliError::from_lfda("training", e))?,
            ),
            None => None,
        };
        let fp = &self.fit_params;
        EmbeddingModel::from_parts(ModelParts {
            kind,
            metric,
            transform,
            embedded: from_rows("embedded", &self.embedded)?,
            eigenvalues: Array1::from(self.eigenvalues.clone()),
            params: FitParams {
                knn: fp.knn,
                beta: fp.beta,
                sigma: fp.sigma,
                min_obs_per_label: fp.min_obs_per_label,
                n_labeled: fp.n_labeled,
                n_unlabeled: fp.n_unlabeled,
            },
            classes: self.label_classes.clone(),
            training,
            ridge: self.ridge,
            warnings: self.warnings.clone(),
        })
        .map_err(|e| CliError::from_lfda("invalid model", e))
    }

    pub fn to_json(&self) -> CliResult<String> {
        let mut s = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::input(format!("cannot serialize model: {e}")))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| CliError::input(format!("invalid model JSON: {e}")))?;
        match value.get("format_version").and_then(serde_json::Value::as_u64) {
            Some(v) if v == u64::from(FORMAT_VERSION) => {}
            Some(v) => {
                return Err(CliError::input(format!(
                    "unsupported format_version {v}, expected {FORMAT_VERSION}"
                )))
            }
            None => return Err(CliError::input("model file has no format_version")),
        }
        serde_json::from_value(value).map_err(|e| CliError::input(format!("invalid model file: {e}")))
    }

    pub fn save(&self, path: &Path) -> CliResult<()> {
        fs::write(path, self.to_json()?)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
    }
}
