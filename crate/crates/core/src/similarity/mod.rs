//! Model comparison through metric-measure spaces derived from views.

pub mod emd;
pub mod gw;
pub mod models;
pub mod space;

pub use emd::solve_transport;
pub use gw::{gw_distance, gw_objective, GwConfig, GwResult};
pub use models::{
    average_linkage, distance_matrix_over_models, matrix_csv, pairwise_fidelity_matrix, Dendrogram,
    ModelComparison, PairFlag,
};
pub use space::{space_from_view, MetricMeasureSpace, Side};
