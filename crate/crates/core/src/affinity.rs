//! Pairwise distances, local-scaling affinities and the graph Laplacian.
//!
//! The affinity between samples `i` and `j` is
//! `exp(-‖x_i − x_j‖² / (σ_i·σ_j))`, where `σ_i` is the distance from `x_i`
//! to its k-th nearest neighbour. Every pair receives a weight; the matrix
//! is dense.

use ndarray::{Array1, Array2, ArrayView1};

use crate::data::DataMatrix;
use crate::error::{LfdaError, Result};

/// Neighbour count used for the LFDA and kernel LFDA affinity.
pub const DEFAULT_KNN: usize = 7;

/// Symmetric `n × n` affinity with entries in `[0, 1]` and a unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinityMatrix(Array2<f64>);

impl AffinityMatrix {
    pub fn new(entries: Array2<f64>) -> Result<Self> {
        let (n, m) = entries.dim();
        if n != m || n == 0 {
            return Err(LfdaError::ShapeMismatch(format!(
                "affinity must be square and non-empty, got {n}x{m}"
            )));
        }
        for i in 0..n {
            if entries[[i, i]] != 1.0 {
                return Err(LfdaError::ShapeMismatch(format!(
                    "affinity diagonal entry {i} is {}, expected 1",
                    entries[[i, i]]
                )));
            }
            for j in 0..n {
                let v = entries[[i, j]];
                if !(0.0..=1.0).contains(&v) || v != entries[[j, i]] {
                    return Err(LfdaError::ShapeMismatch(format!(
                        "affinity entry ({i}, {j}) = {v} is out of range or asymmetric"
                    )));
                }
            }
        }
        Ok(AffinityMatrix(entries))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[[i, j]]
    }
}

/// Degree vector `D_ii = Σ_j A_ij` and Laplacian `L = D − A`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianPair {
    pub degree: Array1<f64>,
    pub laplacian: Array2<f64>,
}

/// Squared Euclidean distance, summed in coordinate order.
pub fn sqdist(a: ArrayView1<f64>, b: ArrayView1<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn pairwise_sqdist(x: &DataMatrix) -> Array2<f64> {
    let n = x.n();
    let rows = x.view();
    let mut out = Array2::zeros((n, n));
    for i in 0..n {
        for j in (i + 1)..n {
            let d = sqdist(rows.row(i), rows.row(j));
            out[[i, j]] = d;
            out[[j, i]] = d;
        }
    }
    out
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k == 0 || k + 1 > n {
        return Err(LfdaError::BadK {
            k,
            max: n.saturating_sub(1),
        });
    }
    Ok(())
}

/// Distance from each sample to its k-th nearest other sample.
pub fn local_sigmas(x: &DataMatrix, k: usize) -> Result<Array1<f64>> {
    local_sigmas_from_sqdist(&pairwise_sqdist(x), k)
}

/// [`local_sigmas`] over a precomputed squared-distance matrix. Equal
/// distances rank the lower sample index first.
pub fn local_sigmas_from_sqdist(sqdist: &Array2<f64>, k: usize) -> Result<Array1<f64>> {
    let n = sqdist.nrows();
    check_k(n, k)?;
    let mut sigmas = Array1::zeros(n);
    let mut others: Vec<(f64, usize)> = Vec::with_capacity(n - 1);
    for i in 0..n {
        others.clear();
        others.extend((0..n).filter(|&j| j != i).map(|j| (sqdist[[i, j]].max(0.0), j)));
        let (_, kth, _) = others.select_nth_unstable_by(k - 1, |a, b| {
            a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
        });
        sigmas[i] = kth.0.sqrt();
    }
    Ok(sigmas)
}

pub fn local_scaling_affinity(x: &DataMatrix, k: usize) -> Result<AffinityMatrix> {
    local_scaling_affinity_from_sqdist(&pairwise_sqdist(x), k)
}

/// Local-scaling affinity over a precomputed squared-distance matrix.
/// Coincident samples (`σ_i·σ_j = 0`) get affinity 1 when their distance is
/// zero and 0 otherwise.
pub fn local_scaling_affinity_from_sqdist(
    sqdist: &Array2<f64>,
    k: usize,
) -> Result<AffinityMatrix> {
    let n = sqdist.nrows();
    if sqdist.ncols() != n {
        return Err(LfdaError::ShapeMismatch(format!(
            "distance matrix must be square, got {n}x{}",
            sqdist.ncols()
        )));
    }
    let sigmas = local_sigmas_from_sqdist(sqdist, k)?;
    let mut a = Array2::zeros((n, n));
    for i in 0..n {
        a[[i, i]] = 1.0;
        for j in (i + 1)..n {
            let d = sqdist[[i, j]].max(0.0);
            let scale = sigmas[i] * sigmas[j];
            let v = if scale > 0.0 {
                (-d / scale).exp()
            } else if d == 0.0 {
                1.0
            } else {
                0.0
            };
            a[[i, j]] = v;
            a[[j, i]] = v;
        }
    }
    Ok(AffinityMatrix(a))
}

pub fn laplacian(a: &AffinityMatrix) -> LaplacianPair {
    let entries = a.as_array();
    let n = a.n();
    let degree = Array1::from_iter((0..n).map(|i| entries.row(i).iter().sum::<f64>()));
    let mut lap = entries.mapv(|v| -v);
    for i in 0..n {
        lap[[i, i]] += degree[i];
    }
    LaplacianPair {
        degree,
        laplacian: lap,
    }
}
