//! Conceptual views of a classifier's last hidden layer.
//!
//! The crate turns activations and output weights into a many-valued view,
//! scales it into formal contexts, and analyses both: nearest-class surrogate
//! fidelity, Gromov-Wasserstein model comparison, concept lattices and
//! subgroup rules against background knowledge.

pub mod cli;
pub mod error;
pub mod fca;
pub mod interpretation;
pub mod io;
pub mod matrix;
pub mod scaling;
pub mod similarity;
pub mod view;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use view::{fidelity, ManyValuedView, Metric, Predictions};
