//! Weather-category forecasting from pollutant readings with K-means.
//!
//! A batch Lloyd fit groups historical readings, each cluster is labeled by
//! its dominant pollutant, and new days are assigned incrementally to the
//! nearest existing centroid to obtain their forecast category.
//!
//! ```
//! use driftcast::{AttributeSchema, ClusterModel, DistanceMetric};
//!
//! let model = ClusterModel::from_means(
//!     AttributeSchema::pooled(),
//!     DistanceMetric::Manhattan,
//!     vec![vec![8.0], vec![56.0], vec![28.0], vec![72.0]],
//! )
//! .unwrap();
//! assert_eq!(model.assign_point(&[12.0]).unwrap(), (0, 4.0));
//! ```

pub mod arff;
pub mod cli;
pub mod csv_format;
pub mod dataset;
pub mod error;
pub mod evaluation;
pub mod incremental;
pub mod kmeans;
pub mod labeling;
pub mod metric;
pub mod model;
pub mod model_file;
pub mod synthetic;

pub use arff::{parse_arff, write_arff};
pub use csv_format::{parse_csv, parse_csv_with_header_schema, write_csv};
pub use dataset::{AttributeSchema, Dataset, MissingPolicy, PollutantRecord};
pub use error::{Error, Result};
pub use evaluation::{accuracy, evaluate, evaluate_rows, EvaluationReport, GroundTruth};
pub use incremental::{
    compare_with_refit, incremental_insert, insert_stream, DivergenceReport, InsertionLog, InsertionMode, LogEntry,
};
pub use kmeans::{init_centroids, lloyd_fit, lloyd_fit_rows, update_centroids, Assignment, Fit, InitStrategy, LloydConfig};
pub use labeling::{
    forecast, label_clusters, label_pooled_clusters, CategoryMap, Forecast, Normalization, WeatherCategory,
};
pub use metric::{distance, DistanceMetric};
pub use model::{assign_point, Centroid, ClusterModel};
pub use model_file::{load_model, model_from_json, model_to_json, save_model};
pub use synthetic::{generate_synthetic, SyntheticProfile};
