//! Local Fisher discriminant analysis: pairwise weight matrices, local
//! scatters, the fit pipeline and the fitted model.

use std::fmt;
use std::str::FromStr;

use ndarray::{Array1, Array2, Axis};

use crate::affinity::{local_scaling_affinity, AffinityMatrix};
use crate::data::{DataMatrix, LabelVector};
use crate::error::{LfdaError, Result};
use crate::linalg::{canonicalize_signs, gen_sym_eigen, EigenSolution, SymMatrix};

/// Post-processing applied to the generalized eigenvectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Metric {
    /// Eigenvectors as returned by the solver.
    #[default]
    Plain,
    /// Column `i` scaled by `sqrt(λ_i)`.
    Weighted,
    /// Columns orthonormalized in eigenvalue order.
    Orthonormalized,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Plain => "plain",
            Metric::Weighted => "weighted",
            Metric::Orthonormalized => "orthonormalized",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "plain" => Ok(Metric::Plain),
            "weighted" => Ok(Metric::Weighted),
            "orthonormalized" => Ok(Metric::Orthonormalized),
            other => Err(format!(
                "unknown metric '{other}' (expected plain, weighted or orthonormalized)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodKind {
    Lfda,
    Klfda,
    SelfBlend,
}

impl MethodKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MethodKind::Lfda => "lfda",
            MethodKind::Klfda => "klfda",
            MethodKind::SelfBlend => "self",
        }
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MethodKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "lfda" => Ok(MethodKind::Lfda),
            "klfda" => Ok(MethodKind::Klfda),
            "self" => Ok(MethodKind::SelfBlend),
            other => Err(format!(
                "unknown method '{other}' (expected lfda, klfda or self)"
            )),
        }
    }
}

/// Hyper-parameters a model was fit with. Fields that do not apply to the
/// model kind are `None`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FitParams {
    pub knn: usize,
    pub beta: Option<f64>,
    pub sigma: Option<f64>,
    pub min_obs_per_label: Option<usize>,
    pub n_labeled: usize,
    pub n_unlabeled: usize,
}

/// Everything a fitted model holds. Validated into an [`EmbeddingModel`] by
/// [`EmbeddingModel::from_parts`].
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParts {
    pub kind: MethodKind,
    pub metric: Metric,
    /// `d × r` projection, or `n × r` kernel coefficients for kernel LFDA.
    pub transform: Array2<f64>,
    /// Training samples in the embedding, `n × r`.
    pub embedded: Array2<f64>,
    pub eigenvalues: Array1<f64>,
    pub params: FitParams,
    pub classes: Vec<String>,
    /// Training samples retained by kernel models for out-of-sample use.
    pub training: Option<DataMatrix>,
    /// Ridge added to the within-class scatter during the solve.
    pub ridge: f64,
    pub warnings: Vec<String>,
}

/// A fitted LFDA, kernel LFDA or SELF embedding. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingModel(ModelParts);

impl EmbeddingModel {
    pub fn from_parts(parts: ModelParts) -> Result<Self> {
        let (rows, r) = parts.transform.dim();
        if r == 0 || rows == 0 {
            return Err(LfdaError::ShapeMismatch("empty transform".into()));
        }
        if parts.eigenvalues.len() != r {
            return Err(LfdaError::ShapeMismatch(format!(
                "{} eigenvalues for a rank-{r} transform",
                parts.eigenvalues.len()
            )));
        }
        if parts.embedded.ncols() != r {
            return Err(LfdaError::ShapeMismatch(format!(
                "embedding has {} columns, transform has {r}",
                parts.embedded.ncols()
            )));
        }
        if r > rows {
            return Err(LfdaError::BadRank { r, max: rows });
        }
        if parts.kind == MethodKind::Klfda {
            if rows != parts.embedded.nrows() {
                return Err(LfdaError::ShapeMismatch(format!(
                    "kernel coefficients have {rows} rows for {} training samples",
                    parts.embedded.nrows()
                )));
            }
            if let Some(train) = &parts.training {
                if train.n() != rows {
                    return Err(LfdaError::ShapeMismatch(format!(
                        "{} stored training rows for {rows} kernel coefficients",
                        train.n()
                    )));
                }
            }
            if parts.training.is_some() && !parts.params.sigma.is_some_and(|s| s > 0.0) {
                return Err(LfdaError::BadSigma(parts.params.sigma.unwrap_or(f64::NAN)));
            }
        } else if parts.training.is_some() {
            return Err(LfdaError::ShapeMismatch(
                "only kernel models store training data".into(),
            ));
        }
        Ok(EmbeddingModel(parts))
    }

    pub fn parts(&self) -> &ModelParts {
        &self.0
    }

    pub fn into_parts(self) -> ModelParts {
        self.0
    }

    pub fn kind(&self) -> MethodKind {
        self.0.kind
    }

    pub fn metric(&self) -> Metric {
        self.0.metric
    }

    pub fn r(&self) -> usize {
        self.0.transform.ncols()
    }

    pub fn transform_matrix(&self) -> &Array2<f64> {
        &self.0.transform
    }

    pub fn embedded(&self) -> &Array2<f64> {
        &self.0.embedded
    }

    pub fn eigenvalues(&self) -> &Array1<f64> {
        &self.0.eigenvalues
    }

    pub fn params(&self) -> &FitParams {
        &self.0.params
    }

    pub fn warnings(&self) -> &[String] {
        &self.0.warnings
    }

    /// Feature count expected by [`EmbeddingModel::transform`].
    pub fn input_dim(&self) -> Option<usize> {
        match self.0.kind {
            MethodKind::Klfda => self.0.training.as_ref().map(DataMatrix::d),
            _ => Some(self.0.transform.nrows()),
        }
    }

    /// Kernel models fit from a bare kernel matrix cannot embed new samples.
    pub fn is_transformable(&self) -> bool {
        self.0.kind != MethodKind::Klfda || self.0.training.is_some()
    }

    /// Embeds new samples: `Xnew·T`, or `K(Xnew, Xtrain)·α` for kernel models.
    pub fn transform(&self, x_new: &DataMatrix) -> Result<Array2<f64>> {
        match self.0.kind {
            MethodKind::Klfda => crate::kernel::transform_klfda(self, x_new),
            _ => {
                let d = self.0.transform.nrows();
                if x_new.d() != d {
                    return Err(LfdaError::DimMismatch {
                        expected: d,
                        got: x_new.d(),
                    });
                }
                Ok(project(x_new.as_array(), &self.0.transform))
            }
        }
    }
}

pub(crate) fn project(x: &Array2<f64>, t: &Array2<f64>) -> Array2<f64> {
    x.dot(t)
}

/// Pairwise weights `W^(w)` (within) and `W^(b)` (between).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrices {
    pub within: Array2<f64>,
    pub between: Array2<f64>,
}

/// Same-class pairs in class `l` get `A_ij/n_l` (within) and
/// `A_ij·(1/n − 1/n_l)` (between); cross-class pairs get 0 and `1/n`.
pub fn build_weights(a: &AffinityMatrix, y: &LabelVector) -> Result<WeightMatrices> {
    let n = a.n();
    if y.len() != n {
        return Err(LfdaError::DimMismatch {
            expected: n,
            got: y.len(),
        });
    }
    let labels = y.require_complete()?;
    let counts = y.counts();
    let inv_n = 1.0 / n as f64;
    let mut within = Array2::zeros((n, n));
    let mut between = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                let inv_nl = 1.0 / counts[labels[i]] as f64;
                within[[i, j]] = a.get(i, j) * inv_nl;
                between[[i, j]] = a.get(i, j) * (inv_n - inv_nl);
            } else {
                between[[i, j]] = inv_n;
            }
        }
    }
    Ok(WeightMatrices { within, between })
}

/// `½·Σ_ij W_ij·(x_i − x_j)(x_i − x_j)ᵀ`, evaluated as `Xᵀ·(D_W − W)·X` on
/// column-centred data.
pub fn scatter_from_weights(x: &DataMatrix, w: &Array2<f64>) -> Result<SymMatrix> {
    let n = x.n();
    if w.dim() != (n, n) {
        return Err(LfdaError::ShapeMismatch(format!(
            "weights are {}x{}, data has {n} rows",
            w.nrows(),
            w.ncols()
        )));
    }
    let mut lap = w.mapv(|v| -v);
    for i in 0..n {
        lap[[i, i]] += w.row(i).sum();
    }
    let centred = centre_columns(x.as_array());
    let s = centred.t().dot(&lap.dot(&centred));
    SymMatrix::new(s)
}

pub(crate) fn centre_columns(x: &Array2<f64>) -> Array2<f64> {
    let mean = x.mean_axis(Axis(0)).expect("non-empty data");
    x - &mean
}

/// Turns the truncated solver output into the returned transform.
pub fn apply_metric(solution: &EigenSolution, metric: Metric) -> Array2<f64> {
    match metric {
        Metric::Plain => solution.vectors.clone(),
        Metric::Weighted => {
            let mut t = solution.vectors.clone();
            for (mut col, &lambda) in t.axis_iter_mut(Axis(1)).zip(solution.values.iter()) {
                let scale = lambda.max(0.0).sqrt();
                col.mapv_inplace(|v| v * scale);
            }
            t
        }
        Metric::Orthonormalized => orthonormalize(&solution.vectors),
    }
}

/// Modified Gram–Schmidt with one re-orthogonalisation pass, followed by the
/// eigenvector sign convention.
fn orthonormalize(vectors: &Array2<f64>) -> Array2<f64> {
    let mut q = vectors.clone();
    let r = q.ncols();
    for j in 0..r {
        for _pass in 0..2 {
            for i in 0..j {
                let proj = q.column(i).dot(&q.column(j));
                let qi = q.column(i).to_owned();
                q.column_mut(j).scaled_add(-proj, &qi);
            }
        }
        let norm = q.column(j).dot(&q.column(j)).sqrt();
        if norm > 0.0 {
            q.column_mut(j).mapv_inplace(|v| v / norm);
        }
    }
    canonicalize_signs(&mut q);
    q
}

pub(crate) fn singleton_warnings(y: &LabelVector) -> Vec<String> {
    y.classes()
        .iter()
        .zip(y.counts())
        .filter(|(_, &c)| c == 1)
        .map(|(name, _)| format!("class '{name}' has a single sample"))
        .collect()
}

pub(crate) fn ridge_warning(ridge: f64) -> Option<String> {
    (ridge > 0.0).then(|| format!("within-class scatter regularized with ridge {ridge:e}"))
}

/// Fits LFDA: local-scaling affinity, pairwise weights, local scatters, and
/// the top `r` generalized eigenvectors of `S^(b)·φ = λ·S^(w)·φ`.
pub fn fit_lfda(
    x: &DataMatrix,
    y: &LabelVector,
    r: usize,
    metric: Metric,
    k: usize,
) -> Result<EmbeddingModel> {
    if y.len() != x.n() {
        return Err(LfdaError::DimMismatch {
            expected: x.n(),
            got: y.len(),
        });
    }
    y.require_complete()?;
    if r == 0 || r > x.d() {
        return Err(LfdaError::BadRank { r, max: x.d() });
    }
    let (within, between) = local_scatters(x, y, k)?;
    let solution = gen_sym_eigen(&between, &within, r)?;
    let transform = apply_metric(&solution, metric);
    let embedded = project(x.as_array(), &transform);

    let mut warnings = singleton_warnings(y);
    warnings.extend(ridge_warning(solution.ridge));
    EmbeddingModel::from_parts(ModelParts {
        kind: MethodKind::Lfda,
        metric,
        transform,
        embedded,
        eigenvalues: solution.values,
        params: FitParams {
            knn: k,
            n_labeled: x.n(),
            ..FitParams::default()
        },
        classes: y.classes().to_vec(),
        training: None,
        ridge: solution.ridge,
        warnings,
    })
}

/// Local within- and between-class scatter of fully labeled data.
pub fn local_scatters(x: &DataMatrix, y: &LabelVector, k: usize) -> Result<(SymMatrix, SymMatrix)> {
    let a = local_scaling_affinity(x, k)?;
    let w = build_weights(&a, y)?;
    let within = scatter_from_weights(x, &w.within)?;
    let between = scatter_from_weights(x, &w.between)?;
    Ok((within, between))
}
