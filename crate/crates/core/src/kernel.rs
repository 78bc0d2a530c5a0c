//! Gaussian kernel matrices and kernel LFDA.
//!
//! Kernel LFDA works entirely from the kernel matrix: the affinity is built
//! on kernel-induced distances `K_ii + K_jj − 2·K_ij`, the scatters are
//! `K·(D_W − W)·K`, and the solution is an `n × r` coefficient matrix `α`
//! with embedding `Z = K·α`.

use ndarray::Array2;

use crate::affinity::{local_scaling_affinity_from_sqdist, pairwise_sqdist, sqdist};
use crate::data::{DataMatrix, LabelVector};
use crate::error::{LfdaError, Result};
use crate::discriminant::{
    apply_metric, build_weights, project, ridge_warning, singleton_warnings, EmbeddingModel,
    FitParams, MethodKind, Metric, ModelParts,
};
use crate::linalg::{gen_sym_eigen, SymMatrix};

/// Bandwidth used when none is given.
pub const DEFAULT_SIGMA: f64 = 1.0;

/// How to pick the Gaussian bandwidth σ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bandwidth {
    Fixed(f64),
    /// Median pairwise Euclidean distance of the training samples.
    Median,
}

impl Default for Bandwidth {
    fn default() -> Self {
        Bandwidth::Fixed(DEFAULT_SIGMA)
    }
}

impl Bandwidth {
    pub fn resolve(self, x: &DataMatrix) -> Result<f64> {
        let sigma = match self {
            Bandwidth::Fixed(s) => s,
            Bandwidth::Median => median_pairwise_distance(x),
        };
        check_sigma(sigma)?;
        Ok(sigma)
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(LfdaError::BadSigma(sigma))
    }
}

/// Median over the `n(n−1)/2` distinct pairs; 0 for a single sample.
pub fn median_pairwise_distance(x: &DataMatrix) -> f64 {
    let d2 = pairwise_sqdist(x);
    let n = x.n();
    let mut dists: Vec<f64> = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            dists.push(d2[[i, j]].sqrt());
        }
    }
    if dists.is_empty() {
        return 0.0;
    }
    dists.sort_by(f64::total_cmp);
    let mid = dists.len() / 2;
    if dists.len() % 2 == 1 {
        dists[mid]
    } else {
        0.5 * (dists[mid - 1] + dists[mid])
    }
}

/// Symmetric kernel matrix, optionally tagged with the Gaussian bandwidth
/// that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    entries: Array2<f64>,
    sigma: Option<f64>,
}

impl KernelMatrix {
    /// Wraps a precomputed kernel. Must be square, symmetric and finite.
    pub fn precomputed(entries: Array2<f64>) -> Result<Self> {
        let (n, m) = entries.dim();
        if n != m || n == 0 {
            return Err(LfdaError::ShapeMismatch(format!(
                "kernel matrix must be square and non-empty, got {n}x{m}"
            )));
        }
        for ((row, col), v) in entries.indexed_iter() {
            if !v.is_finite() {
                return Err(LfdaError::NonFiniteInput { row, col });
            }
            if *v != entries[[col, row]] {
                return Err(LfdaError::ShapeMismatch(format!(
                    "kernel matrix is not symmetric at ({row}, {col})"
                )));
            }
        }
        Ok(KernelMatrix {
            entries,
            sigma: None,
        })
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.entries
    }

    pub fn sigma(&self) -> Option<f64> {
        self.sigma
    }

    /// Squared feature-space distances `K_ii + K_jj − 2·K_ij`, clamped at 0.
    pub fn induced_sqdist(&self) -> Array2<f64> {
        let k = &self.entries;
        let n = self.n();
        Array2::from_shape_fn((n, n), |(i, j)| {
            if i == j {
                0.0
            } else {
                (k[[i, i]] + k[[j, j]] - 2.0 * k[[i, j]]).max(0.0)
            }
        })
    }
}

fn gauss(sq: f64, sigma: f64) -> f64 {
    (-sq / (2.0 * sigma * sigma)).exp()
}

/// `K_ij = exp(−‖x_i − x_j‖² / (2σ²))`.
pub fn gauss_kernel_matrix(x: &DataMatrix, sigma: f64) -> Result<KernelMatrix> {
    check_sigma(sigma)?;
    let entries = pairwise_sqdist(x).mapv(|d| gauss(d, sigma));
    Ok(KernelMatrix {
        entries,
        sigma: Some(sigma),
    })
}

fn cross_kernel(x_new: &DataMatrix, train: &DataMatrix, sigma: f64) -> Array2<f64> {
    let (a, b) = (x_new.view(), train.view());
    Array2::from_shape_fn((x_new.n(), train.n()), |(i, j)| {
        gauss(sqdist(a.row(i), b.row(j)), sigma)
    })
}

fn laplacian_of(w: &Array2<f64>) -> Array2<f64> {
    let mut lap = w.mapv(|v| -v);
    for i in 0..w.nrows() {
        lap[[i, i]] += w.row(i).sum();
    }
    lap
}

/// Kernel LFDA on a kernel matrix alone. The result cannot embed new samples;
/// use [`fit_klfda_with_data`] for that.
pub fn fit_klfda(
    kernel: &KernelMatrix,
    y: &LabelVector,
    r: usize,
    metric: Metric,
    k: usize,
) -> Result<EmbeddingModel> {
    fit_kernel(kernel, y, r, metric, k, None)
}

/// Kernel LFDA on samples, keeping them (and σ) for out-of-sample embedding.
pub fn fit_klfda_with_data(
    x: &DataMatrix,
    bandwidth: Bandwidth,
    y: &LabelVector,
    r: usize,
    metric: Metric,
    k: usize,
) -> Result<EmbeddingModel> {
    let sigma = bandwidth.resolve(x)?;
    let kernel = gauss_kernel_matrix(x, sigma)?;
    fit_kernel(&kernel, y, r, metric, k, Some(x.clone()))
}

fn fit_kernel(
    kernel: &KernelMatrix,
    y: &LabelVector,
    r: usize,
    metric: Metric,
    k: usize,
    training: Option<DataMatrix>,
) -> Result<EmbeddingModel> {
    let n = kernel.n();
    if y.len() != n {
        return Err(LfdaError::DimMismatch {
            expected: n,
            got: y.len(),
        });
    }
    y.require_complete()?;
    if r == 0 || r > n {
        return Err(LfdaError::BadRank { r, max: n });
    }
    let km = kernel.as_array();
    let affinity = local_scaling_affinity_from_sqdist(&kernel.induced_sqdist(), k)?;
    let weights = build_weights(&affinity, y)?;
    let within = SymMatrix::new(km.dot(&laplacian_of(&weights.within).dot(km)))?;
    let between = SymMatrix::new(km.dot(&laplacian_of(&weights.between).dot(km)))?;
    let solution = gen_sym_eigen(&between, &within, r)?;
    let coefficients = apply_metric(&solution, metric);
    let embedded = project(km, &coefficients);

    let mut warnings = singleton_warnings(y);
    warnings.extend(ridge_warning(solution.ridge));
    EmbeddingModel::from_parts(ModelParts {
        kind: MethodKind::Klfda,
        metric,
        transform: coefficients,
        embedded,
        eigenvalues: solution.values,
        params: FitParams {
            knn: k,
            sigma: kernel.sigma(),
            n_labeled: n,
            ..FitParams::default()
        },
        classes: y.classes().to_vec(),
        training,
        ridge: solution.ridge,
        warnings,
    })
}

/// `K_new·α` with `K_new` the Gaussian kernel between new and training samples.
pub fn transform_klfda(model: &EmbeddingModel, x_new: &DataMatrix) -> Result<Array2<f64>> {
    let parts = model.parts();
    if parts.kind != MethodKind::Klfda {
        return model.transform(x_new);
    }
    let (train, sigma) = match (&parts.training, parts.params.sigma) {
        (Some(train), Some(sigma)) => (train, sigma),
        _ => return Err(LfdaError::KernelModelNotTransformable),
    };
    if x_new.d() != train.d() {
        return Err(LfdaError::DimMismatch {
            expected: train.d(),
            got: x_new.d(),
        });
    }
    Ok(project(&cross_kernel(x_new, train, sigma), &parts.transform))
}
