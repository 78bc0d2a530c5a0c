//! Input containers: the sample matrix and the (possibly partial) labels.

use std::collections::HashMap;

use ndarray::{Array2, ArrayView2};

use crate::error::{LfdaError, Result};

/// `n × d` matrix with one sample per row. All entries are finite and both
/// dimensions are at least one.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix(Array2<f64>);

impl DataMatrix {
    pub fn new(rows: Array2<f64>) -> Result<Self> {
        if rows.nrows() == 0 || rows.ncols() == 0 {
            return Err(LfdaError::EmptyInput("data matrix needs at least one row and column"));
        }
        for ((row, col), v) in rows.indexed_iter() {
            if !v.is_finite() {
                return Err(LfdaError::NonFiniteInput { row, col });
            }
        }
        Ok(DataMatrix(rows))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let d = rows.first().map_or(0, Vec::len);
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != d) {
            return Err(LfdaError::ShapeMismatch(format!(
                "row {i} has {} values, expected {d}",
                row.len()
            )));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        let arr = Array2::from_shape_vec((n, d), flat)
            .map_err(|e| LfdaError::ShapeMismatch(e.to_string()))?;
        Self::new(arr)
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn d(&self) -> usize {
        self.0.ncols()
    }

    pub fn view(&self) -> ArrayView2<'_, f64> {
        self.0.view()
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.0
    }

    /// Rows selected by index, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> DataMatrix {
        DataMatrix(self.0.select(ndarray::Axis(0), indices))
    }
}

/// Per-sample class assignments. Classes are numbered in order of first
/// appearance; a `None` entry marks an unlabeled sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelVector {
    labels: Vec<Option<usize>>,
    classes: Vec<String>,
    counts: Vec<usize>,
}

impl LabelVector {
    /// Fully labeled vector.
    pub fn new<S: AsRef<str>>(labels: &[S]) -> Self {
        let opts: Vec<Option<&str>> = labels.iter().map(|s| Some(s.as_ref())).collect();
        Self::from_optional(&opts)
    }

    pub fn from_optional<S: AsRef<str>>(labels: &[Option<S>]) -> Self {
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut classes = Vec::new();
        let mut counts = Vec::new();
        let labels = labels
            .iter()
            .map(|label| {
                label.as_ref().map(|name| {
                    let name = name.as_ref();
                    let id = *index.entry(name.to_string()).or_insert_with(|| {
                        classes.push(name.to_string());
                        counts.push(0);
                        classes.len() - 1
                    });
                    counts[id] += 1;
                    id
                })
            })
            .collect();
        LabelVector {
            labels,
            classes,
            counts,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Class index of sample `i`, if labeled.
    pub fn get(&self, i: usize) -> Option<usize> {
        self.labels[i]
    }

    pub fn labels(&self) -> &[Option<usize>] {
        &self.labels
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn class_name(&self, i: usize) -> Option<&str> {
        self.labels[i].map(|c| self.classes[c].as_str())
    }

    pub fn n_labeled(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn n_missing(&self) -> usize {
        self.len() - self.n_labeled()
    }

    pub fn labeled_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.labels[i].is_some()).collect()
    }

    /// Class index per sample, failing on the first missing label.
    pub fn require_complete(&self) -> Result<Vec<usize>> {
        self.labels
            .iter()
            .enumerate()
            .map(|(index, l)| l.ok_or(LfdaError::MissingLabel { index }))
            .collect()
    }

    /// Labels of the given samples, renumbered by first appearance.
    pub fn select(&self, indices: &[usize]) -> LabelVector {
        let names: Vec<Option<&str>> = indices.iter().map(|&i| self.class_name(i)).collect();
        LabelVector::from_optional(&names)
    }

    /// Copy with the listed samples marked unlabeled.
    pub fn with_missing(&self, indices: &[usize]) -> LabelVector {
        let mut names: Vec<Option<&str>> = (0..self.len()).map(|i| self.class_name(i)).collect();
        for &i in indices {
            names[i] = None;
        }
        LabelVector::from_optional(&names)
    }
}
