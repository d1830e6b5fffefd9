//! Probabilistic neural network forward pass: Cauchy product kernels,
//! per-class density estimates, Bayes-argmax classification and the
//! per-pattern smoothing modification.

mod kernel;
mod model;
mod smoothing;

pub use self::kernel::{cauchy_kernel, kde, product_kernel};
pub(crate) use self::model::argmax;
pub use self::model::{ModificationConfig, PnnModel};
pub use self::smoothing::{SmoothingKind, SmoothingSpec, DEFAULT_UPPER_BOUND};
