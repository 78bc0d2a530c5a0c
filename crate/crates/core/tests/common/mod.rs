//! Test support shared by the integration suites: dataset loaders, synthetic
//! generators and a leave-one-out nearest-neighbour scorer.
#![allow(dead_code)]

use std::path::PathBuf;

use lfda::{DataMatrix, LabelVector};
use ndarray::{Array2, ArrayView2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn iris_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/iris.csv")
}

/// The 150×4 iris measurements and species labels.
pub fn iris() -> (DataMatrix, LabelVector) {
    let text = std::fs::read_to_string(iris_path()).expect("iris.csv");
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for line in text.lines().skip(1).filter(|l| !l.trim().is_empty()) {
        let fields: Vec<&str> = line.split(',').collect();
        rows.push(fields[..4].iter().map(|f| f.parse::<f64>().unwrap()).collect::<Vec<_>>());
        labels.push(fields[4].to_string());
    }
    (DataMatrix::from_rows(&rows).unwrap(), LabelVector::new(&labels))
}

/// Leave-one-out 1-NN accuracy of `z` against integer labels; distance ties
/// go to the lower index.
pub fn loo_1nn_accuracy(z: ArrayView2<f64>, labels: &[usize]) -> f64 {
    let n = z.nrows();
    let mut correct = 0;
    for i in 0..n {
        let mut best = (f64::INFINITY, usize::MAX);
        for j in 0..n {
            if i == j {
                continue;
            }
            let d: f64 = z.row(i).iter().zip(z.row(j)).map(|(a, b)| (a - b).powi(2)).sum();
            if d < best.0 {
                best = (d, j);
            }
        }
        if labels[best.1] == labels[i] {
            correct += 1;
        }
    }
    correct as f64 / n as f64
}

/// Fraction of `query` rows whose nearest `reference` row has the same label.
pub fn nn_accuracy(
    reference: ArrayView2<f64>,
    ref_labels: &[usize],
    query: ArrayView2<f64>,
    query_labels: &[usize],
) -> f64 {
    let mut correct = 0;
    for (i, q) in query.rows().into_iter().enumerate() {
        let mut best = (f64::INFINITY, 0);
        for (j, r) in reference.rows().into_iter().enumerate() {
            let d: f64 = q.iter().zip(r).map(|(a, b)| (a - b).powi(2)).sum();
            if d < best.0 {
                best = (d, j);
            }
        }
        if ref_labels[best.1] == query_labels[i] {
            correct += 1;
        }
    }
    correct as f64 / query.nrows() as f64
}

pub fn class_ids(y: &LabelVector) -> Vec<usize> {
    y.labels().iter().map(|l| l.expect("labeled")).collect()
}

/// Two concentric rings (radii 1 and 3) with small radial noise, alternating
/// inner/outer samples.
pub fn circles(n: usize, seed: u64) -> (DataMatrix, LabelVector) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let (radius, name) = if i % 2 == 0 { (1.0, "inner") } else { (3.0, "outer") };
        let angle = rng.gen_range(0.0..std::f64::consts::TAU);
        let r = radius + rng.gen_range(-0.1..0.1);
        rows.push(vec![r * angle.cos(), r * angle.sin()]);
        labels.push(name);
    }
    (DataMatrix::from_rows(&rows).unwrap(), LabelVector::new(&labels))
}

/// Gaussian-ish blobs: `classes` centres spread along random directions.
pub fn blobs(seed: u64, n: usize, d: usize, classes: usize, spread: f64) -> (DataMatrix, LabelVector) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centres: Vec<Vec<f64>> = (0..classes)
        .map(|_| (0..d).map(|_| rng.gen_range(-3.0..3.0)).collect())
        .collect();
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let c = i % classes;
        rows.push(
            centres[c]
                .iter()
                .map(|m| m + spread * (rng.gen::<f64>() + rng.gen::<f64>() + rng.gen::<f64>() - 1.5))
                .collect(),
        );
        labels.push(format!("c{c}"));
    }
    (DataMatrix::from_rows(&rows).unwrap(), LabelVector::new(&labels))
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Array2<f64> {
    Array2::from_shape_fn((rows, cols), |_| rng.gen_range(-1.0..1.0))
}

pub fn random_symmetric_weights(rng: &mut ChaCha8Rng, n: usize) -> Array2<f64> {
    let mut w = Array2::zeros((n, n));
    for i in 0..n {
        for j in i..n {
            let v = rng.gen_range(-1.0..1.0);
            w[[i, j]] = v;
            w[[j, i]] = v;
        }
    }
    w
}

pub fn max_abs_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    assert_eq!(a.dim(), b.dim());
    a.iter().zip(b).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
}
