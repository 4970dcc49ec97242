//! Centroid models and nearest-centroid assignment.

use serde::{Deserialize, Serialize};

use crate::dataset::AttributeSchema;
use crate::error::{Error, Result};
use crate::labeling::WeatherCategory;
use crate::metric::DistanceMetric;

/// A cluster's mean vector and the number of records attributed to it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Centroid {
    pub mean: Vec<f64>,
    pub member_count: usize,
}

impl Centroid {
    pub fn new(mean: Vec<f64>, member_count: usize) -> Self {
        Centroid { mean, member_count }
    }
}

/// K centroids over a schema, the metric used to assign points to them, and
/// an optional weather category per cluster. Cluster ids are centroid indices.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterModel {
    schema: AttributeSchema,
    metric: DistanceMetric,
    centroids: Vec<Centroid>,
    labels: Vec<Option<WeatherCategory>>,
}

impl ClusterModel {
    pub fn new(schema: AttributeSchema, metric: DistanceMetric, centroids: Vec<Centroid>) -> Result<Self> {
        if centroids.is_empty() {
            return Err(Error::EmptyModel);
        }
        for centroid in &centroids {
            if centroid.mean.len() != schema.arity() {
                return Err(Error::LengthMismatch {
                    expected: schema.arity(),
                    actual: centroid.mean.len(),
                });
            }
            if centroid.mean.iter().any(|v| !v.is_finite()) {
                return Err(Error::ModelFile("centroid means must be finite".into()));
            }
        }
        let labels = vec![None; centroids.len()];
        Ok(ClusterModel {
            schema,
            metric,
            centroids,
            labels,
        })
    }

    /// Builds a model from bare mean vectors with zero member counts.
    pub fn from_means(schema: AttributeSchema, metric: DistanceMetric, means: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(schema, metric, means.into_iter().map(|m| Centroid::new(m, 0)).collect())
    }

    pub fn schema(&self) -> &AttributeSchema {
        &self.schema
    }

    pub fn metric(&self) -> DistanceMetric {
        self.metric
    }

    pub fn centroids(&self) -> &[Centroid] {
        &self.centroids
    }

    pub fn k(&self) -> usize {
        self.centroids.len()
    }

    /// True when the model clusters pooled scalar readings.
    pub fn is_pooled(&self) -> bool {
        self.schema == AttributeSchema::pooled()
    }

    pub fn labels(&self) -> &[Option<WeatherCategory>] {
        &self.labels
    }

    pub fn label(&self, cluster: usize) -> Option<&WeatherCategory> {
        self.labels.get(cluster).and_then(Option::as_ref)
    }

    pub fn is_labeled(&self) -> bool {
        self.labels.iter().all(Option::is_some)
    }

    pub fn with_labels(mut self, labels: Vec<Option<WeatherCategory>>) -> Result<Self> {
        if labels.len() != self.centroids.len() {
            return Err(Error::Labeling(format!(
                "{} labels supplied for {} clusters",
                labels.len(),
                self.centroids.len()
            )));
        }
        self.labels = labels;
        Ok(self)
    }

    pub(crate) fn centroids_mut(&mut self) -> &mut [Centroid] {
        &mut self.centroids
    }

    /// Distance from `x` to every centroid, in cluster order.
    pub fn distances(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_arity(x)?;
        Ok(self
            .centroids
            .iter()
            .map(|c| self.metric.distance_unchecked(x, &c.mean))
            .collect())
    }

    /// Nearest centroid to `x` and its distance. Ties go to the lowest index.
    pub fn assign_point(&self, x: &[f64]) -> Result<(usize, f64)> {
        self.check_arity(x)?;
        Ok(nearest(&self.centroids, x, self.metric))
    }

    fn check_arity(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.schema.arity() {
            return Err(Error::LengthMismatch {
                expected: self.schema.arity(),
                actual: x.len(),
            });
        }
        Ok(())
    }
}

/// Free-function form of [`ClusterModel::assign_point`].
pub fn assign_point(x: &[f64], model: &ClusterModel) -> Result<(usize, f64)> {
    model.assign_point(x)
}

/// Index of the first minimum of `distances`.
pub fn argmin(distances: &[f64]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &d) in distances.iter().enumerate() {
        match best {
            Some((_, b)) if d >= b => {}
            _ => best = Some((i, d)),
        }
    }
    best
}

pub(crate) fn nearest(centroids: &[Centroid], x: &[f64], metric: DistanceMetric) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, c) in centroids.iter().enumerate() {
        let d = metric.distance_unchecked(x, &c.mean);
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_model(means: &[f64], metric: DistanceMetric) -> ClusterModel {
        ClusterModel::from_means(AttributeSchema::pooled(), metric, means.iter().map(|m| vec![*m]).collect()).unwrap()
    }

    #[test]
    fn twelve_goes_to_first_cluster() {
        let model = scalar_model(&[8.0, 56.0, 28.0, 72.0], DistanceMetric::Manhattan);
        assert_eq!(model.assign_point(&[12.0]).unwrap(), (0, 4.0));
        assert_eq!(model.distances(&[12.0]).unwrap(), vec![4.0, 44.0, 16.0, 60.0]);
    }

    #[test]
    fn point_on_centroid() {
        let model = scalar_model(&[8.0, 56.0, 28.0, 72.0], DistanceMetric::Euclidean);
        assert_eq!(model.assign_point(&[28.0]).unwrap(), (2, 0.0));
    }

    #[test]
    fn ties_go_to_lower_index() {
        let model = scalar_model(&[0.0, 2.0], DistanceMetric::Euclidean);
        assert_eq!(model.assign_point(&[1.0]).unwrap(), (0, 1.0));
        let model = scalar_model(&[2.0, 0.0], DistanceMetric::Manhattan);
        assert_eq!(model.assign_point(&[1.0]).unwrap(), (0, 1.0));
    }

    #[test]
    fn empty_model_rejected() {
        assert!(matches!(
            ClusterModel::new(AttributeSchema::pooled(), DistanceMetric::Euclidean, vec![]),
            Err(Error::EmptyModel)
        ));
    }

    #[test]
    fn arity_checked() {
        let model = scalar_model(&[1.0], DistanceMetric::Euclidean);
        assert!(model.assign_point(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn argmin_first_minimum() {
        assert_eq!(argmin(&[3.0, 1.0, 1.0]), Some((1, 1.0)));
        assert_eq!(argmin(&[]), None);
    }
}
