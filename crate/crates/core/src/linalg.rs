//! Dense symmetric linear algebra: Cholesky factorisation, the symmetric
//! eigendecomposition and the symmetric-definite generalized eigenproblem
//! `B·φ = λ·W·φ`.
//!
//! The eigensolver is a Householder tridiagonalisation followed by implicit
//! QL iterations. Everything runs in a fixed order, so identical inputs give
//! bit-identical outputs.

use ndarray::{Array1, Array2, ArrayView2, Axis};

use crate::error::{LfdaError, Result};

/// Ridge multipliers tried, in order, when the right-hand matrix of a
/// generalized problem is not positive definite.
pub const RIDGE_SCHEDULE: [f64; 4] = [1e-9, 1e-7, 1e-5, 1e-3];

const MAX_QL_ITERATIONS: usize = 64;

/// Square symmetric matrix. Symmetry is enforced on construction by averaging
/// the matrix with its transpose, so `m[[i, j]] == m[[j, i]]` holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(Array2<f64>);

impl SymMatrix {
    pub fn new(mut m: Array2<f64>) -> Result<Self> {
        let (rows, cols) = m.dim();
        if rows != cols {
            return Err(LfdaError::ShapeMismatch(format!(
                "symmetric matrix must be square, got {rows}x{cols}"
            )));
        }
        if rows == 0 {
            return Err(LfdaError::EmptyInput("symmetric matrix"));
        }
        for i in 0..rows {
            for j in (i + 1)..rows {
                let avg = 0.5 * (m[[i, j]] + m[[j, i]]);
                m[[i, j]] = avg;
                m[[j, i]] = avg;
            }
        }
        Ok(SymMatrix(m))
    }

    pub fn identity(dim: usize) -> Self {
        SymMatrix(Array2::eye(dim.max(1)))
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        SymMatrix(Array2::from_diag(&Array1::from(diag.to_vec())))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn view(&self) -> ArrayView2<'_, f64> {
        self.0.view()
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.0
    }

    pub fn into_inner(self) -> Array2<f64> {
        self.0
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.0.view())
    }
}

/// Eigenpairs sorted by descending eigenvalue; column `i` of `vectors` pairs
/// with `values[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSolution {
    pub values: Array1<f64>,
    pub vectors: Array2<f64>,
    /// Ridge added to the right-hand matrix of a generalized solve, 0 if none.
    pub ridge: f64,
}

impl EigenSolution {
    /// Keeps the leading `r` pairs.
    pub fn truncate(mut self, r: usize) -> Self {
        let r = r.min(self.values.len());
        self.values = self.values.slice_move(ndarray::s![..r]);
        self.vectors = self.vectors.slice_move(ndarray::s![.., ..r]);
        self
    }
}

pub fn max_abs(m: &ArrayView2<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Flips each column so that its largest-magnitude entry is positive. Exact
/// magnitude ties resolve to the lowest row index.
pub fn canonicalize_signs(vectors: &mut Array2<f64>) {
    for mut col in vectors.axis_iter_mut(Axis(1)) {
        let mut best = 0;
        let mut best_abs = -1.0;
        for (i, v) in col.iter().enumerate() {
            if v.abs() > best_abs {
                best_abs = v.abs();
                best = i;
            }
        }
        if col[best] < 0.0 {
            col.mapv_inplace(|v| -v);
        }
    }
}

/// Lower-triangular `L` with `S = L·Lᵀ`.
///
/// A pivot is rejected when it is not larger than `dim·ε·max|diag(S)|`; at
/// that size it carries no significant digits and the factor is garbage.
pub fn cholesky(s: &SymMatrix) -> Result<Array2<f64>> {
    let n = s.dim();
    let a = s.as_array();
    let max_diag = (0..n).fold(0.0_f64, |m, i| m.max(a[[i, i]].abs()));
    let tol = n as f64 * f64::EPSILON * max_diag;
    let mut l = Array2::<f64>::zeros((n, n));
    for j in 0..n {
        let mut pivot = a[[j, j]];
        for k in 0..j {
            pivot -= l[[j, k]] * l[[j, k]];
        }
        if pivot.is_nan() || pivot <= tol {
            return Err(LfdaError::NotPositiveDefinite { index: j, pivot });
        }
        let ljj = pivot.sqrt();
        l[[j, j]] = ljj;
        for i in (j + 1)..n {
            let mut sum = a[[i, j]];
            for k in 0..j {
                sum -= l[[i, k]] * l[[j, k]];
            }
            l[[i, j]] = sum / ljj;
        }
    }
    Ok(l)
}

/// Full eigendecomposition of a symmetric matrix, values descending,
/// orthonormal eigenvectors under the sign convention of
/// [`canonicalize_signs`].
pub fn sym_eigen(s: &SymMatrix) -> Result<EigenSolution> {
    let n = s.dim();
    let mut v: Vec<f64> = s.as_array().iter().copied().collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(n, &mut v, &mut d, &mut e);
    tridiagonal_ql(n, &mut v, &mut d, &mut e)?;

    // Stable sort keeps equal eigenvalues in solver order.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[b].partial_cmp(&d[a]).unwrap_or(std::cmp::Ordering::Equal));

    let values = Array1::from_iter(order.iter().map(|&i| d[i]));
    let mut vectors = Array2::<f64>::zeros((n, n));
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[[row, col]] = v[row * n + src];
        }
    }
    canonicalize_signs(&mut vectors);
    Ok(EigenSolution {
        values,
        vectors,
        ridge: 0.0,
    })
}

/// Householder reduction to tridiagonal form. On exit `v` holds the
/// accumulated orthogonal transform (row-major), `d` the diagonal and `e` the
/// sub-diagonal in `e[1..]`.
fn tridiagonalize(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    let idx = |r: usize, c: usize| r * n + c;
    for j in 0..n {
        d[j] = v[idx(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for dk in &d[..i] {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[idx(i - 1, j)];
                v[idx(i, j)] = 0.0;
                v[idx(j, i)] = 0.0;
            }
        } else {
            for dk in &mut d[..i] {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[idx(j, i)] = f;
                g = e[j] + v[idx(j, j)] * f;
                for k in (j + 1)..i {
                    g += v[idx(k, j)] * d[k];
                    e[k] += v[idx(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[idx(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[idx(i - 1, j)];
                v[idx(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..n.saturating_sub(1) {
        v[idx(n - 1, i)] = v[idx(i, i)];
        v[idx(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[idx(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[idx(k, i + 1)] * v[idx(k, j)];
                }
                for k in 0..=i {
                    v[idx(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[idx(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[idx(n - 1, j)];
        v[idx(n - 1, j)] = 0.0;
    }
    v[idx(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Implicit QL iterations on the tridiagonal matrix `(d, e)`, accumulating
/// rotations into `v`.
fn tridiagonal_ql(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let idx = |r: usize, c: usize| r * n + c;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1 = 0.0_f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(LfdaError::ConvergenceFailure {
                        iterations: MAX_QL_ITERATIONS,
                    });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        h = v[idx(k, i + 1)];
                        v[idx(k, i + 1)] = s * v[idx(k, i)] + c * h;
                        v[idx(k, i)] = c * v[idx(k, i)] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    if d.iter().any(|x| !x.is_finite()) {
        return Err(LfdaError::ConvergenceFailure { iterations: 0 });
    }
    Ok(())
}

/// Solves `L·X = B` for lower-triangular `L`.
fn forward_solve(l: &Array2<f64>, b: &Array2<f64>) -> Array2<f64> {
    let n = l.nrows();
    let mut x = b.clone();
    for col in 0..x.ncols() {
        for i in 0..n {
            let mut sum = x[[i, col]];
            for k in 0..i {
                sum -= l[[i, k]] * x[[k, col]];
            }
            x[[i, col]] = sum / l[[i, i]];
        }
    }
    x
}

/// Solves `Lᵀ·X = B` for lower-triangular `L`.
fn backward_solve_transposed(l: &Array2<f64>, b: &Array2<f64>) -> Array2<f64> {
    let n = l.nrows();
    let mut x = b.clone();
    for col in 0..x.ncols() {
        for i in (0..n).rev() {
            let mut sum = x[[i, col]];
            for k in (i + 1)..n {
                sum -= l[[k, i]] * x[[k, col]];
            }
            x[[i, col]] = sum / l[[i, i]];
        }
    }
    x
}

/// Cholesky factor of `w`, retrying with `ε·mean(diag(w))·I` along
/// [`RIDGE_SCHEDULE`] when `w` is not positive definite. Returns the factor
/// and the absolute ridge that was added.
///
/// When `w` is numerically zero its diagonal carries no scale, and
/// `fallback_scale` (or 1 if that is not positive) is used instead.
pub fn cholesky_with_ridge(w: &SymMatrix, fallback_scale: f64) -> Result<(Array2<f64>, f64)> {
    let first_err = match cholesky(w) {
        Ok(l) => return Ok((l, 0.0)),
        Err(err) => err,
    };
    let n = w.dim();
    let a = w.as_array();
    let mut scale = (0..n).map(|i| a[[i, i]]).sum::<f64>() / n as f64;
    let negligible = n as f64 * f64::EPSILON * fallback_scale.max(w.max_abs());
    if scale <= negligible || !scale.is_finite() {
        scale = if fallback_scale > 0.0 && fallback_scale.is_finite() {
            fallback_scale
        } else {
            1.0
        };
    }
    let mut last_err = first_err;
    for eps in RIDGE_SCHEDULE {
        let ridge = eps * scale;
        let mut shifted = a.clone();
        for i in 0..n {
            shifted[[i, i]] += ridge;
        }
        match cholesky(&SymMatrix(shifted)) {
            Ok(l) => return Ok((l, ridge)),
            Err(err) => last_err = err,
        }
    }
    Err(last_err)
}

/// Top `r` eigenpairs of `B·φ = λ·W·φ` by Cholesky reduction: with
/// `W = L·Lᵀ`, solve the standard problem for `L⁻¹·B·L⁻ᵀ` and map back with
/// `φ = L⁻ᵀ·u`. The returned vectors are `W`-orthonormal (with any ridge
/// included in `W`).
pub fn gen_sym_eigen(b: &SymMatrix, w: &SymMatrix, r: usize) -> Result<EigenSolution> {
    let n = b.dim();
    if w.dim() != n {
        return Err(LfdaError::DimMismatch {
            expected: n,
            got: w.dim(),
        });
    }
    if r == 0 || r > n {
        return Err(LfdaError::BadRank { r, max: n });
    }
    let b_scale = (0..n).map(|i| b.as_array()[[i, i]].abs()).sum::<f64>() / n as f64;
    let (l, ridge) = cholesky_with_ridge(w, b_scale)?;
    // C = L⁻¹·B·L⁻ᵀ = L⁻¹·(L⁻¹·B)ᵀ since B is symmetric.
    let y = forward_solve(&l, b.as_array());
    let c = forward_solve(&l, &y.t().to_owned());
    let reduced = sym_eigen(&SymMatrix::new(c)?)?;
    let mut vectors = backward_solve_transposed(&l, &reduced.vectors);
    canonicalize_signs(&mut vectors);
    Ok(EigenSolution {
        values: reduced.values,
        vectors,
        ridge,
    }
    .truncate(r))
}
