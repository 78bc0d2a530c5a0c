//! Local Fisher discriminant analysis (LFDA) and its kernel and
//! semi-supervised variants for supervised dimensionality reduction.
//!
//! ```
//! use lfda::{fit_lfda, DataMatrix, LabelVector, Metric};
//!
//! let x = DataMatrix::from_rows(&[
//!     vec![0.0, 0.2], vec![0.3, 0.1], vec![0.1, 0.5],
//!     vec![2.0, 1.8], vec![2.4, 2.1], vec![1.9, 2.2],
//! ]).unwrap();
//! let y = LabelVector::new(&["a", "a", "a", "b", "b", "b"]);
//! let model = fit_lfda(&x, &y, 1, Metric::Plain, 2).unwrap();
//! assert_eq!(model.embedded().dim(), (6, 1));
//! ```

pub mod affinity;
pub mod data;
pub mod error;
pub mod kernel;
pub mod discriminant;
pub mod linalg;
pub mod oracle;
pub mod semi;

pub use affinity::{
    laplacian, local_scaling_affinity, local_sigmas, pairwise_sqdist, AffinityMatrix,
    LaplacianPair, DEFAULT_KNN,
};
pub use data::{DataMatrix, LabelVector};
pub use error::{LfdaError, Result};
pub use kernel::{
    fit_klfda, fit_klfda_with_data, gauss_kernel_matrix, transform_klfda, Bandwidth, KernelMatrix,
};
pub use discriminant::{
    apply_metric, build_weights, fit_lfda, scatter_from_weights, EmbeddingModel, FitParams,
    MethodKind, Metric, ModelParts, WeightMatrices,
};
pub use linalg::{cholesky, gen_sym_eigen, sym_eigen, EigenSolution, SymMatrix};
pub use semi::{blended_scatters, discard_labels, fit_self, total_scatter, SelfConfig};
