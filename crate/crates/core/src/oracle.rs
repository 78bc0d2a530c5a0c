//! Slow, literal reference implementations: the pairwise scatter sum,
//! classical FDA, LPP and PCA, plus a principal-angle measure for comparing
//! subspaces.
//!
//! Nothing here reuses the scatter assembly in [`crate::discriminant`]; only the
//! eigensolver is shared.

use ndarray::{Array1, Array2, Axis};

use crate::data::{DataMatrix, LabelVector};
use crate::error::{LfdaError, Result};
use crate::linalg::{gen_sym_eigen, sym_eigen, EigenSolution, SymMatrix};

/// Class means, global mean and class sizes over the labeled rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassStats {
    pub class_means: Vec<Array1<f64>>,
    pub global_mean: Array1<f64>,
    pub class_counts: Vec<usize>,
}

impl ClassStats {
    pub fn compute(x: &DataMatrix, y: &LabelVector) -> Result<Self> {
        if y.len() != x.n() {
            return Err(LfdaError::DimMismatch {
                expected: x.n(),
                got: y.len(),
            });
        }
        let d = x.d();
        let rows = x.as_array();
        let n_classes = y.classes().len();
        let mut sums = vec![Array1::<f64>::zeros(d); n_classes];
        let mut counts = vec![0usize; n_classes];
        let mut total = Array1::<f64>::zeros(d);
        let mut n_labeled = 0usize;
        for i in 0..x.n() {
            if let Some(c) = y.get(i) {
                for k in 0..d {
                    sums[c][k] += rows[[i, k]];
                    total[k] += rows[[i, k]];
                }
                counts[c] += 1;
                n_labeled += 1;
            }
        }
        if n_labeled == 0 {
            return Err(LfdaError::NoLabeledSamples);
        }
        let class_means = sums
            .into_iter()
            .zip(&counts)
            .map(|(s, &c)| s / c as f64)
            .collect();
        Ok(ClassStats {
            class_means,
            global_mean: total / n_labeled as f64,
            class_counts: counts,
        })
    }
}

/// `½·Σ_i Σ_j W_ij·(x_i − x_j)(x_i − x_j)ᵀ` by explicit loops.
pub fn brute_scatter(x: &DataMatrix, w: &Array2<f64>) -> Result<SymMatrix> {
    let (n, d) = (x.n(), x.d());
    if w.dim() != (n, n) {
        return Err(LfdaError::ShapeMismatch(format!(
            "weights are {}x{}, data has {n} rows",
            w.nrows(),
            w.ncols()
        )));
    }
    let rows = x.as_array();
    let mut s = Array2::<f64>::zeros((d, d));
    let mut diff = vec![0.0; d];
    for i in 0..n {
        for j in 0..n {
            let wij = w[[i, j]];
            if wij == 0.0 {
                continue;
            }
            for k in 0..d {
                diff[k] = rows[[i, k]] - rows[[j, k]];
            }
            for a in 0..d {
                for b in 0..d {
                    s[[a, b]] += 0.5 * wij * diff[a] * diff[b];
                }
            }
        }
    }
    SymMatrix::new(s)
}

/// Classical FDA: class-mean within and between scatters, top `r` pairs of
/// `S_b·φ = λ·S_w·φ`.
pub fn fda_fit(x: &DataMatrix, y: &LabelVector, r: usize) -> Result<EigenSolution> {
    let labels = y.require_complete()?;
    if r == 0 || r > x.d() {
        return Err(LfdaError::BadRank { r, max: x.d() });
    }
    let stats = ClassStats::compute(x, y)?;
    let d = x.d();
    let rows = x.as_array();
    let mut within = Array2::<f64>::zeros((d, d));
    for (i, &c) in labels.iter().enumerate() {
        let mu = &stats.class_means[c];
        for a in 0..d {
            for b in 0..d {
                within[[a, b]] += (rows[[i, a]] - mu[a]) * (rows[[i, b]] - mu[b]);
            }
        }
    }
    let mut between = Array2::<f64>::zeros((d, d));
    for (mu, &count) in stats.class_means.iter().zip(&stats.class_counts) {
        for a in 0..d {
            for b in 0..d {
                between[[a, b]] += count as f64
                    * (mu[a] - stats.global_mean[a])
                    * (mu[b] - stats.global_mean[b]);
            }
        }
    }
    gen_sym_eigen(&SymMatrix::new(between)?, &SymMatrix::new(within)?, r)
}

/// Symmetric binary k-nearest-neighbour graph: `A_ij = 1` when either sample
/// is among the other's `k` nearest (lower index wins distance ties).
pub fn knn_binary_affinity(x: &DataMatrix, k: usize) -> Result<Array2<f64>> {
    let n = x.n();
    if k == 0 || k >= n {
        return Err(LfdaError::BadK {
            k,
            max: n.saturating_sub(1),
        });
    }
    let rows = x.as_array();
    let mut a = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        let mut others: Vec<(f64, usize)> = (0..n)
            .filter(|&j| j != i)
            .map(|j| {
                let d: f64 = (0..x.d()).map(|c| (rows[[i, c]] - rows[[j, c]]).powi(2)).sum();
                (d, j)
            })
            .collect();
        others.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)));
        for &(_, j) in &others[..k] {
            a[[i, j]] = 1.0;
            a[[j, i]] = 1.0;
        }
    }
    Ok(a)
}

/// Locality preserving projection: eigenvectors of
/// `Xᵀ·L·X·φ = λ·Xᵀ·D·X·φ` for the `r` smallest eigenvalues, ordered as
/// `φ_{d−r+1} | … | φ_d` (largest of the kept values first).
pub fn lpp_fit(x: &DataMatrix, k: usize, r: usize) -> Result<EigenSolution> {
    let d = x.d();
    if r == 0 || r > d {
        return Err(LfdaError::BadRank { r, max: d });
    }
    let a = knn_binary_affinity(x, k)?;
    let n = x.n();
    let degree: Vec<f64> = (0..n).map(|i| a.row(i).sum()).collect();
    let rows = x.as_array();
    let mut xlx = Array2::<f64>::zeros((d, d));
    let mut xdx = Array2::<f64>::zeros((d, d));
    for i in 0..n {
        for p in 0..d {
            for q in 0..d {
                xdx[[p, q]] += degree[i] * rows[[i, p]] * rows[[i, q]];
            }
        }
        for j in 0..n {
            let lij = if i == j { degree[i] - a[[i, j]] } else { -a[[i, j]] };
            if lij == 0.0 {
                continue;
            }
            for p in 0..d {
                for q in 0..d {
                    xlx[[p, q]] += lij * rows[[i, p]] * rows[[j, q]];
                }
            }
        }
    }
    let full = gen_sym_eigen(&SymMatrix::new(xlx)?, &SymMatrix::new(xdx)?, d)?;
    Ok(EigenSolution {
        values: full.values.slice(ndarray::s![d - r..]).to_owned(),
        vectors: full.vectors.slice(ndarray::s![.., d - r..]).to_owned(),
        ridge: full.ridge,
    })
}

/// Top `r` principal directions of the covariance computed by definition.
pub fn pca_fit(x: &DataMatrix, r: usize) -> Result<EigenSolution> {
    let d = x.d();
    if r == 0 || r > d {
        return Err(LfdaError::BadRank { r, max: d });
    }
    let rows = x.as_array();
    let n = x.n();
    let mut mean = vec![0.0; d];
    for i in 0..n {
        for k in 0..d {
            mean[k] += rows[[i, k]];
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    let mut cov = Array2::<f64>::zeros((d, d));
    for i in 0..n {
        for a in 0..d {
            for b in 0..d {
                cov[[a, b]] += (rows[[i, a]] - mean[a]) * (rows[[i, b]] - mean[b]);
            }
        }
    }
    Ok(sym_eigen(&SymMatrix::new(cov)?)?.truncate(r))
}

/// Largest principal angle (radians) between the column spans of `a` and
/// `b`, computed from the sine side so that tiny angles stay accurate.
pub fn max_principal_angle(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    assert_eq!(a.nrows(), b.nrows(), "bases live in different spaces");
    let qa = orthonormal_basis(a);
    let qb = orthonormal_basis(b);
    if qa.ncols() != qb.ncols() {
        return std::f64::consts::FRAC_PI_2;
    }
    let residual = &qb - &qa.dot(&qa.t().dot(&qb));
    let gram = residual.t().dot(&residual);
    let top = sym_eigen(&SymMatrix::new(gram).expect("square")).map_or(f64::NAN, |e| e.values[0]);
    top.max(0.0).sqrt().min(1.0).asin()
}

/// Gram–Schmidt basis (two passes); numerically dependent columns are
/// dropped.
fn orthonormal_basis(m: &Array2<f64>) -> Array2<f64> {
    let scale = m.iter().fold(0.0_f64, |s, v| s.max(v.abs()));
    let mut cols: Vec<Array1<f64>> = Vec::new();
    for col in m.axis_iter(Axis(1)) {
        let mut v = col.to_owned();
        for _ in 0..2 {
            for q in &cols {
                let p = q.dot(&v);
                v.scaled_add(-p, q);
            }
        }
        let norm = v.dot(&v).sqrt();
        if norm > 1e-12 * scale.max(f64::MIN_POSITIVE) {
            cols.push(v / norm);
        }
    }
    let mut out = Array2::zeros((m.nrows(), cols.len()));
    for (j, c) in cols.iter().enumerate() {
        out.column_mut(j).assign(c);
    }
    out
}
