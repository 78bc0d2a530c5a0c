//! Fast paths checked against the literal reference implementations.

mod common;

use common::*;
use lfda::oracle::{brute_scatter, fda_fit, knn_binary_affinity, lpp_fit, pca_fit, ClassStats};
use lfda::{
    fit_lfda, scatter_from_weights, sym_eigen, total_scatter, DataMatrix, LabelVector, Metric,
    SymMatrix,
};
use ndarray::{s, Array2};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laplacian_scatter_matches_pairwise_sum(seed in any::<u64>(), n in 1usize..=30, d in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = DataMatrix::new(random_matrix(&mut rng, n, d) * 3.0).unwrap();
        let w = random_symmetric_weights(&mut rng, n);
        let fast = scatter_from_weights(&x, &w).unwrap();
        let slow = brute_scatter(&x, &w).unwrap();
        let tol = 1e-10 * (1.0 + slow.max_abs());
        prop_assert!(max_abs_diff(fast.as_array(), slow.as_array()) <= tol);
    }
}

#[test]
fn brute_and_fast_agree_on_small_fixed_case() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let x = DataMatrix::new(random_matrix(&mut rng, 10, 3)).unwrap();
    let w = random_symmetric_weights(&mut rng, 10);
    let fast = scatter_from_weights(&x, &w).unwrap();
    let slow = brute_scatter(&x, &w).unwrap();
    assert!(max_abs_diff(fast.as_array(), slow.as_array()) <= 1e-10);
}

#[test]
fn class_stats_weighted_means_balance() {
    let (x, y) = iris();
    let st = ClassStats::compute(&x, &y).unwrap();
    assert_eq!(st.class_counts, vec![50, 50, 50]);
    for k in 0..4 {
        let weighted: f64 = st
            .class_means
            .iter()
            .zip(&st.class_counts)
            .map(|(m, &c)| m[k] * c as f64)
            .sum();
        assert!((weighted - 150.0 * st.global_mean[k]).abs() <= 1e-12 * 150.0 * 10.0);
    }
}

#[test]
fn fda_separates_iris() {
    let (x, y) = iris();
    let sol = fda_fit(&x, &y, 2).unwrap();
    let z = x.as_array().dot(&sol.vectors);
    let acc = loo_1nn_accuracy(z.view(), &class_ids(&y));
    assert!(acc >= 0.95, "accuracy {acc}");
}

#[test]
fn lfda_without_locality_tracks_fda() {
    // three unimodal, well separated classes
    let (x, y) = blobs(21, 90, 4, 3, 1.2);
    let ids = class_ids(&y);
    let fda = fda_fit(&x, &y, 2).unwrap();
    let fda_acc = loo_1nn_accuracy(x.as_array().dot(&fda.vectors).view(), &ids);
    let lfda = fit_lfda(&x, &y, 2, Metric::Plain, x.n() - 1).unwrap();
    let lfda_acc = loo_1nn_accuracy(lfda.embedded().view(), &ids);
    assert!((fda_acc - lfda_acc).abs() <= 0.02, "fda {fda_acc} lfda {lfda_acc}");
}

#[test]
fn lpp_constraint_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    for _ in 0..5 {
        let x = DataMatrix::new(random_matrix(&mut rng, 30, 5)).unwrap();
        let sol = lpp_fit(&x, 5, 2).unwrap();
        let a = knn_binary_affinity(&x, 5).unwrap();
        let degree = Array2::from_diag(&a.sum_axis(ndarray::Axis(1)));
        let xdx = x.as_array().t().dot(&degree).dot(x.as_array());
        let gram = sol.vectors.t().dot(&xdx).dot(&sol.vectors);
        assert!(max_abs_diff(&gram, &Array2::eye(2)) <= 1e-8);
        assert!(sol.values[0] >= sol.values[1]);
    }
}

#[test]
fn lpp_binary_affinity_is_symmetric_or() {
    let x = DataMatrix::from_rows(&[vec![0.0], vec![1.0], vec![5.0]]).unwrap();
    let a = knn_binary_affinity(&x, 1).unwrap();
    // 2's nearest is 1, so 1–2 is linked even though 1's nearest is 0
    assert_eq!(a[[1, 2]], 1.0);
    assert_eq!(a[[2, 1]], 1.0);
    assert_eq!(a[[0, 2]], 0.0);
}

#[test]
fn lpp_directions_scale_free() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let x = DataMatrix::new(random_matrix(&mut rng, 20, 3)).unwrap();
    let scaled = DataMatrix::new(x.as_array() * 4.0).unwrap();
    let a = lpp_fit(&x, 4, 2).unwrap();
    let b = lpp_fit(&scaled, 4, 2).unwrap();
    for j in 0..2 {
        let ca = a.vectors.column(j);
        let cb = b.vectors.column(j);
        let na = ca.dot(&ca).sqrt();
        let nb = cb.dot(&cb).sqrt();
        for k in 0..3 {
            assert!((ca[k] / na - cb[k] / nb).abs() <= 1e-8);
        }
    }
}

#[test]
fn pca_matches_explicit_covariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let x = DataMatrix::new(random_matrix(&mut rng, 50, 6)).unwrap();
    let sol = pca_fit(&x, 3).unwrap();
    let centred = x.as_array() - &x.as_array().mean_axis(ndarray::Axis(0)).unwrap();
    let cov = centred.t().dot(&centred);
    let direct = sym_eigen(&SymMatrix::new(cov).unwrap()).unwrap();
    assert!(max_abs_diff(&sol.vectors, &direct.vectors.slice(s![.., ..3]).to_owned()) <= 1e-10);
}

#[test]
fn total_scatter_matches_double_loop_and_pca() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let x = DataMatrix::new(random_matrix(&mut rng, 25, 4)).unwrap();
    let st = total_scatter(&x);
    let rows = x.as_array();
    let mut mean = [0.0; 4];
    for i in 0..25 {
        for k in 0..4 {
            mean[k] += rows[[i, k]] / 25.0;
        }
    }
    let mut expected = Array2::<f64>::zeros((4, 4));
    for i in 0..25 {
        for a in 0..4 {
            for b in 0..4 {
                expected[[a, b]] += (rows[[i, a]] - mean[a]) * (rows[[i, b]] - mean[b]);
            }
        }
    }
    assert!(max_abs_diff(st.as_array(), &expected) <= 1e-10);
    let from_scatter = sym_eigen(&st).unwrap();
    let pca = pca_fit(&x, 4).unwrap();
    assert!(max_abs_diff(&from_scatter.vectors, &pca.vectors) <= 1e-10);
}

#[test]
fn fda_rejects_partial_labels() {
    let x = DataMatrix::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
    let y = LabelVector::from_optional(&[Some("a"), None]);
    assert!(fda_fit(&x, &y, 1).is_err());
}
