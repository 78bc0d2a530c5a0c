//! The iris and synthetic workflows end to end through the library.

mod common;

use common::*;
use lfda::{
    discard_labels, fit_klfda_with_data, fit_lfda, fit_self, Bandwidth, LfdaError, Metric,
    SelfConfig, DEFAULT_KNN,
};

#[test]
fn iris_lfda_predict_on_training_rows() {
    let (x, y) = iris();
    for metric in [Metric::Plain, Metric::Weighted, Metric::Orthonormalized] {
        let model = fit_lfda(&x, &y, 3, metric, DEFAULT_KNN).unwrap();
        let z = model.transform(&x).unwrap();
        assert_eq!(z.dim(), (150, 3));
        assert!(max_abs_diff(&z, model.embedded()) <= 1e-10);
        assert_eq!(model.input_dim(), Some(4));
    }
}

#[test]
fn iris_klfda_shapes_and_round_trip() {
    let (x, y) = iris();
    let model = fit_klfda_with_data(&x, Bandwidth::Fixed(1.0), &y, 3, Metric::Weighted, DEFAULT_KNN).unwrap();
    assert_eq!(model.transform_matrix().dim(), (150, 3));
    assert_eq!(model.embedded().dim(), (150, 3));
    assert!(model.is_transformable());
    let z = model.transform(&x).unwrap();
    assert!(max_abs_diff(&z, model.embedded()) <= 1e-10 * (1.0 + model.embedded().iter().fold(0.0_f64, |m, v| m.max(v.abs()))));
    let wrong = lfda::DataMatrix::from_rows(&[vec![1.0, 2.0]]).unwrap();
    assert_eq!(model.transform(&wrong), Err(LfdaError::DimMismatch { expected: 4, got: 2 }));
}

#[test]
fn circles_held_out() {
    let (x, y) = circles(100, 7);
    let model = fit_klfda_with_data(&x, Bandwidth::Fixed(1.0), &y, 2, Metric::Plain, DEFAULT_KNN).unwrap();
    let ids = class_ids(&y);
    assert!(loo_1nn_accuracy(model.embedded().view(), &ids) >= 0.95);
    let (xt, yt) = circles(60, 99);
    let zt = model.transform(&xt).unwrap();
    assert!(nn_accuracy(model.embedded().view(), &ids, zt.view(), &class_ids(&yt)) >= 0.95);
}

#[test]
fn iris_self_partial_labels() {
    let (x, y) = iris();
    let partial = discard_labels(&y, 0.1, 42).unwrap();
    assert_eq!(partial.n_missing(), 15);
    let model = fit_self(&x, &partial, &SelfConfig::new(0.1, 3)).unwrap();
    assert_eq!(model.transform_matrix().dim(), (4, 3));
    assert_eq!(model.embedded().dim(), (150, 3));
    assert_eq!((model.params().n_labeled, model.params().n_unlabeled), (135, 15));
    assert!(max_abs_diff(&model.transform(&x).unwrap(), model.embedded()) <= 1e-10);
}
