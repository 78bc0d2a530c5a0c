//! Semi-supervised LFDA (SELF).
//!
//! Local scatters from the labeled rows are blended with the total scatter
//! of all rows:
//!
//! ```text
//! S_rlb = (1 − β)·S_lb + β·S_t
//! S_rlw = (1 − β)·S_lw + β·I
//! ```
//!
//! `β = 0` is plain LFDA on the labeled rows and `β = 1` is PCA.

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::{DataMatrix, LabelVector};
use crate::error::{LfdaError, Result};
use crate::discriminant::{
    apply_metric, centre_columns, local_scatters, project, ridge_warning, singleton_warnings,
    EmbeddingModel, FitParams, MethodKind, Metric, ModelParts,
};
use crate::linalg::{gen_sym_eigen, SymMatrix};

pub const DEFAULT_SELF_KNN: usize = 5;
pub const DEFAULT_MIN_OBS_PER_LABEL: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfConfig {
    /// 0 is fully supervised, 1 ignores the labels.
    pub beta: f64,
    pub knn: usize,
    pub min_obs_per_label: usize,
    pub r: usize,
    pub metric: Metric,
}

impl SelfConfig {
    pub fn new(beta: f64, r: usize) -> Self {
        SelfConfig {
            beta,
            knn: DEFAULT_SELF_KNN,
            min_obs_per_label: DEFAULT_MIN_OBS_PER_LABEL,
            r,
            metric: Metric::Plain,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(LfdaError::BadBeta(self.beta));
        }
        if self.min_obs_per_label == 0 {
            return Err(LfdaError::TooFewLabeledPerClass {
                class: String::new(),
                count: 0,
                min: 1,
            });
        }
        Ok(())
    }
}

/// `Σ_i (x_i − μ)(x_i − μ)ᵀ` over all rows.
pub fn total_scatter(x: &DataMatrix) -> SymMatrix {
    let centred = centre_columns(x.as_array());
    SymMatrix::new(centred.t().dot(&centred)).expect("square by construction")
}

/// Regularized within and between scatters `(S_rlw, S_rlb)`.
pub fn blended_scatters(
    x: &DataMatrix,
    y: &LabelVector,
    cfg: &SelfConfig,
) -> Result<(SymMatrix, SymMatrix)> {
    cfg.validate()?;
    let d = x.d();
    if y.len() != x.n() {
        return Err(LfdaError::DimMismatch {
            expected: x.n(),
            got: y.len(),
        });
    }
    for (class, &count) in y.classes().iter().zip(y.counts()) {
        if count < cfg.min_obs_per_label {
            return Err(LfdaError::TooFewLabeledPerClass {
                class: class.clone(),
                count,
                min: cfg.min_obs_per_label,
            });
        }
    }

    let labeled = y.labeled_indices();
    let (local_within, local_between) = if labeled.is_empty() {
        if cfg.beta < 1.0 {
            return Err(LfdaError::NoLabeledSamples);
        }
        (Array2::zeros((d, d)), Array2::zeros((d, d)))
    } else {
        let (w, b) = local_scatters(&x.select_rows(&labeled), &y.select(&labeled), cfg.knn)?;
        (w.into_inner(), b.into_inner())
    };
    let total = total_scatter(x).into_inner();

    let beta = cfg.beta;
    let keep = 1.0 - beta;
    let within = SymMatrix::new(local_within.mapv(|v| keep * v) + Array2::<f64>::eye(d) * beta)?;
    let between = SymMatrix::new(local_between.mapv(|v| keep * v) + total.mapv(|v| beta * v))?;
    Ok((within, between))
}

pub fn fit_self(x: &DataMatrix, y: &LabelVector, cfg: &SelfConfig) -> Result<EmbeddingModel> {
    cfg.validate()?;
    let (n, d) = (x.n(), x.d());
    if cfg.r == 0 || cfg.r > d {
        return Err(LfdaError::BadRank { r: cfg.r, max: d });
    }
    let (within, between) = blended_scatters(x, y, cfg)?;
    let n_labeled = y.n_labeled();
    let solution = gen_sym_eigen(&between, &within, cfg.r)?;
    let transform = apply_metric(&solution, cfg.metric);
    let embedded = project(x.as_array(), &transform);

    let mut warnings = singleton_warnings(y);
    warnings.extend(ridge_warning(solution.ridge));
    EmbeddingModel::from_parts(ModelParts {
        kind: MethodKind::SelfBlend,
        metric: cfg.metric,
        transform,
        embedded,
        eigenvalues: solution.values,
        params: FitParams {
            knn: cfg.knn,
            beta: Some(cfg.beta),
            sigma: None,
            min_obs_per_label: Some(cfg.min_obs_per_label),
            n_labeled,
            n_unlabeled: n - n_labeled,
        },
        classes: y.classes().to_vec(),
        training: None,
        ridge: solution.ridge,
        warnings,
    })
}

/// Marks `round(fraction·n)` samples as unlabeled, chosen by a permutation
/// seeded with `seed`.
pub fn discard_labels(y: &LabelVector, fraction: f64, seed: u64) -> Result<LabelVector> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(LfdaError::BadFraction(fraction));
    }
    let n = y.len();
    let count = (fraction * n as f64).round() as usize;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Ok(y.with_missing(&order[..count.min(n)]))
}
