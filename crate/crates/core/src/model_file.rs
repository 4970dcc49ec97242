//! Versioned JSON persistence for cluster models.
//!
//! Keys are written sorted and floats in shortest round-trip form, so
//! `save(load(save(m)))` is byte-identical to `save(m)` and loading restores
//! every mean bit for bit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::AttributeSchema;
use crate::error::{Error, Result};
use crate::labeling::WeatherCategory;
use crate::metric::DistanceMetric;
use crate::model::{Centroid, ClusterModel};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    format_version: u64,
    schema: AttributeSchema,
    metric: DistanceMetric,
    centroids: Vec<Centroid>,
    labels: Vec<Option<WeatherCategory>>,
}

/// Serializes a model as a JSON document with sorted keys.
pub fn model_to_json(model: &ClusterModel) -> Result<String> {
    let file = ModelFile {
        format_version: FORMAT_VERSION,
        schema: model.schema().clone(),
        metric: model.metric(),
        centroids: model.centroids().to_vec(),
        labels: model.labels().to_vec(),
    };
    // Value's map is a BTreeMap, which sorts keys at every level.
    let value = serde_json::to_value(&file)?;
    let mut text = serde_json::to_string_pretty(&value)?;
    text.push('\n');
    Ok(text)
}

/// Parses a model document, rejecting unknown format versions.
pub fn model_from_json(text: &str) -> Result<ClusterModel> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let version = value
        .get("format_version")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| Error::ModelFile("missing integer format_version".into()))?;
    if version != FORMAT_VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let file: ModelFile = serde_json::from_value(value)?;
    ClusterModel::new(file.schema, file.metric, file.centroids)?.with_labels(file.labels)
}

pub fn save_model(model: &ClusterModel, path: &Path) -> Result<()> {
    fs::write(path, model_to_json(model)?).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_model(path: &Path) -> Result<ClusterModel> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    model_from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labeling::{CategoryMap, label_clusters, Normalization};

    fn model() -> ClusterModel {
        ClusterModel::new(
            AttributeSchema::pollutants(),
            DistanceMetric::Euclidean,
            vec![
                Centroid::new(vec![0.1 + 0.2, 1.0 / 3.0, 7.0, 1e-17], 3),
                Centroid::new(vec![221.376238, 110.366337, 10.128713, 92.415842], 101),
            ],
        )
        .unwrap()
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let m = label_clusters(&model(), &CategoryMap::pollutants(), Normalization::None).unwrap();
        let text = model_to_json(&m).unwrap();
        let back = model_from_json(&text).unwrap();
        assert_eq!(back, m);
        for (a, b) in back.centroids().iter().zip(m.centroids()) {
            for (x, y) in a.mean.iter().zip(&b.mean) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
        assert_eq!(model_to_json(&back).unwrap(), text);
    }

    #[test]
    fn keys_are_sorted() {
        let text = model_to_json(&model()).unwrap();
        let order: Vec<usize> = ["\"centroids\"", "\"format_version\"", "\"labels\"", "\"metric\"", "\"schema\""]
            .iter()
            .map(|k| text.find(k).unwrap())
            .collect();
        assert!(order.windows(2).all(|w| w[0] < w[1]), "{text}");
        assert!(text.find("\"mean\"").unwrap() < text.find("\"member_count\"").unwrap());
    }

    #[test]
    fn unknown_version_rejected() {
        let text = model_to_json(&model()).unwrap().replace("\"format_version\": 1", "\"format_version\": 2");
        assert!(matches!(model_from_json(&text), Err(Error::UnsupportedVersion(2))));
    }

    #[test]
    fn malformed_documents_rejected() {
        assert!(model_from_json("{}").is_err());
        let text = model_to_json(&model()).unwrap().replace("\"euclidean\"", "\"cosine\"");
        assert!(model_from_json(&text).is_err());
        let text = model_to_json(&model()).unwrap().replace("\"CO2\"", "\"RPM\"");
        assert!(model_from_json(&text).is_err());
    }
}
