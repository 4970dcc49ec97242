//! Weather categories per cluster, and forecasts built from insertion logs.
//!
//! A cluster's category follows its dominant attribute: the centroid component
//! with the largest raw mean. Raw means of different pollutants are compared
//! directly unless [`Normalization::ZScore`] is requested.

use std::collections::BTreeMap;
use std::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::dataset::{format_date, parse_date};
use crate::error::{parse_err, Error, Result};
use crate::incremental::InsertionLog;
use crate::model::ClusterModel;

/// Category printed for clusters dominated by CO2.
pub const CO2_CATEGORY: &str = "hot, smogy and humid";
/// Category printed for clusters dominated by respirable particulate matter.
pub const RPM_CATEGORY: &str = "dusty, fly ash, smogy, fog, Mist";
/// Category printed for clusters dominated by oxides of nitrogen.
pub const NOX_CATEGORY: &str = "Hot, dry and smogy";
/// Category printed for clusters dominated by SO2.
pub const SO2_CATEGORY: &str = "hot, smogy and chance of acid rain";

/// A weather category and the attribute it was derived from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeatherCategory {
    pub dominant: String,
    pub description: String,
}

impl WeatherCategory {
    pub fn new(dominant: impl Into<String>, description: impl Into<String>) -> Self {
        WeatherCategory {
            dominant: dominant.into(),
            description: description.into(),
        }
    }

    /// Normalized token used when matching against ground truth.
    pub fn token(&self) -> String {
        category_token(&self.description)
    }
}

impl fmt::Display for WeatherCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.description)
    }
}

const FILLER_WORDS: [&str; 5] = ["and", "chance", "of", "due", "to"];

/// Normalizes a category phrase to a lowercase hyphenated token.
///
/// `"Hot, dry and smogy"` becomes `hot-dry-smogy`. Filler words are dropped and
/// the spelling `smoggy` folds into `smogy`, so tokens and phrases compare equal.
pub fn category_token(phrase: &str) -> String {
    phrase
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .filter(|w| !FILLER_WORDS.contains(&w.as_str()))
        .map(|w| if w == "smoggy" { "smogy".to_string() } else { w })
        .collect::<Vec<_>>()
        .join("-")
}

/// Attribute name to category phrase.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryMap {
    entries: BTreeMap<String, String>,
}

impl CategoryMap {
    pub fn empty() -> Self {
        CategoryMap {
            entries: BTreeMap::new(),
        }
    }

    /// The four-pollutant map; lookups ignore ASCII case.
    pub fn pollutants() -> Self {
        let mut map = Self::empty();
        map.insert("CO2", CO2_CATEGORY);
        map.insert("RPM", RPM_CATEGORY);
        map.insert("SO2", SO2_CATEGORY);
        map.insert("NOx", NOX_CATEGORY);
        map
    }

    /// Adds or replaces the category for an attribute.
    pub fn insert(&mut self, attribute: &str, description: &str) {
        self.entries.insert(attribute.to_ascii_lowercase(), description.to_string());
    }

    pub fn category_for(&self, attribute: &str) -> Result<WeatherCategory> {
        self.entries
            .get(&attribute.to_ascii_lowercase())
            .map(|d| WeatherCategory::new(attribute, d.clone()))
            .ok_or_else(|| {
                Error::Labeling(format!(
                    "no weather category defined for attribute {attribute:?}; supply one in the category map"
                ))
            })
    }

    /// Finds the canonical category whose token matches `phrase`.
    pub fn canonical(&self, phrase: &str) -> Option<&str> {
        let token = category_token(phrase);
        self.entries
            .values()
            .find(|d| category_token(d) == token)
            .map(String::as_str)
    }
}

impl Default for CategoryMap {
    fn default() -> Self {
        Self::pollutants()
    }
}

/// How centroid components are compared when picking the dominant attribute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// Raw means.
    #[default]
    None,
    /// Per-attribute z-scores across the K centroids. Extension; off by default.
    ZScore,
}

/// Dominant attribute index for one vector; ties go to the lowest index.
pub fn dominant_index(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

fn zscores(model: &ClusterModel) -> Vec<Vec<f64>> {
    let k = model.k() as f64;
    let arity = model.schema().arity();
    let mut stats = Vec::with_capacity(arity);
    for j in 0..arity {
        let column: Vec<f64> = model.centroids().iter().map(|c| c.mean[j]).collect();
        let mean = column.iter().sum::<f64>() / k;
        let var = column.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / k;
        stats.push((mean, var.sqrt()));
    }
    model
        .centroids()
        .iter()
        .map(|c| {
            c.mean
                .iter()
                .zip(&stats)
                .map(|(v, (mean, sd))| if *sd > 0.0 { (v - mean) / sd } else { 0.0 })
                .collect()
        })
        .collect()
}

/// Labels every cluster of a vector-per-day model by its dominant attribute.
pub fn label_clusters(model: &ClusterModel, categories: &CategoryMap, normalization: Normalization) -> Result<ClusterModel> {
    if model.schema().arity() < 2 {
        return Err(Error::Labeling(
            "pooled or single-attribute models have no attribute identity; use an explicit attribution map".into(),
        ));
    }
    let scores: Vec<Vec<f64>> = match normalization {
        Normalization::None => model.centroids().iter().map(|c| c.mean.clone()).collect(),
        Normalization::ZScore => zscores(model),
    };
    let labels = scores
        .iter()
        .map(|s| {
            let attribute = &model.schema().names()[dominant_index(s)];
            categories.category_for(attribute).map(Some)
        })
        .collect::<Result<Vec<_>>>()?;
    model.clone().with_labels(labels)
}

/// Labels a pooled scalar model from a caller-chosen attribute per cluster.
pub fn label_pooled_clusters(
    model: &ClusterModel,
    attribute_of_cluster: &BTreeMap<usize, String>,
    categories: &CategoryMap,
) -> Result<ClusterModel> {
    if model.schema().arity() != 1 {
        return Err(Error::Labeling(format!(
            "attribution maps apply to pooled 1-D models, this model has {} attributes",
            model.schema().arity()
        )));
    }
    if let Some(extra) = attribute_of_cluster.keys().find(|c| **c >= model.k()) {
        return Err(Error::Labeling(format!("attribution names cluster {extra}, model has {}", model.k())));
    }
    let labels = (0..model.k())
        .map(|c| {
            let attribute = attribute_of_cluster
                .get(&c)
                .ok_or_else(|| Error::Labeling(format!("attribution map has no entry for cluster {c}")))?;
            categories.category_for(attribute).map(Some)
        })
        .collect::<Result<Vec<_>>>()?;
    model.clone().with_labels(labels)
}

/// Parses `0=RPM,1=NOx,...` attribution maps.
pub fn parse_attribution(text: &str) -> std::result::Result<BTreeMap<usize, String>, String> {
    let mut map = BTreeMap::new();
    for pair in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (cluster, attribute) = pair
            .split_once('=')
            .ok_or_else(|| format!("expected cluster=attribute, got {pair:?}"))?;
        let cluster: usize = cluster
            .trim()
            .trim_start_matches(|c: char| c.is_alphabetic())
            .parse()
            .map_err(|_| format!("invalid cluster index in {pair:?}"))?;
        if map.insert(cluster, attribute.trim().to_string()).is_some() {
            return Err(format!("cluster {cluster} attributed twice"));
        }
    }
    Ok(map)
}

/// A predicted weather category for one date.
#[derive(Debug, Clone, PartialEq)]
pub struct Forecast {
    pub date: NaiveDate,
    pub cluster: usize,
    pub category: WeatherCategory,
}

/// Turns insertion log entries into forecasts using the model's labels.
pub fn forecast(log: &InsertionLog, model: &ClusterModel) -> Result<Vec<Forecast>> {
    log.entries
        .iter()
        .map(|entry| {
            let category = model.label(entry.cluster).ok_or(Error::Unlabeled(entry.cluster))?;
            Ok(Forecast {
                date: entry.date,
                cluster: entry.cluster,
                category: category.clone(),
            })
        })
        .collect()
}

/// Writes forecasts as `date,cluster,category`.
pub fn write_forecast_csv(forecasts: &[Forecast]) -> Result<String> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(["date", "cluster", "category"])?;
    for f in forecasts {
        writer.write_record([format_date(f.date), f.cluster.to_string(), f.category.description.clone()])?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::ModelFile(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// A forecast row as read back from CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastRow {
    pub date: NaiveDate,
    pub cluster: usize,
    pub category: String,
}

/// Reads a `date,cluster,category` file. Cluster cells may be `2` or `Cluster2`.
pub fn read_forecast_csv(text: &str) -> Result<Vec<ForecastRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.len() != 3 {
            return Err(parse_err(line, format!("expected 3 columns, found {}", record.len())));
        }
        let date = parse_date(&record[0]).ok_or_else(|| parse_err(line, format!("malformed date {:?}", &record[0])))?;
        let cluster = record[1]
            .trim_start_matches(|c: char| c.is_alphabetic())
            .parse()
            .map_err(|_| parse_err(line, format!("invalid cluster {:?}", &record[1])))?;
        rows.push(ForecastRow {
            date,
            cluster,
            category: record[2].to_string(),
        });
    }
    Ok(rows)
}

impl From<&Forecast> for ForecastRow {
    fn from(f: &Forecast) -> Self {
        ForecastRow {
            date: f.date,
            cluster: f.cluster,
            category: f.category.description.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::AttributeSchema;
    use crate::metric::DistanceMetric;

    fn initial_model() -> ClusterModel {
        ClusterModel::from_means(
            AttributeSchema::pollutants(),
            DistanceMetric::Euclidean,
            vec![
                vec![221.376238, 110.366337, 10.128713, 92.415842],
                vec![112.600000, 118.562500, 8.425000, 72.187500],
                vec![39.458824, 36.176471, 6.158824, 41.523529],
                vec![65.196721, 75.983607, 7.704918, 57.04918],
                vec![225.943182, 145.022727, 12.034091, 107.10227],
            ],
        )
        .unwrap()
    }

    #[test]
    fn initial_model_dominant_attributes() {
        let labeled = label_clusters(&initial_model(), &CategoryMap::pollutants(), Normalization::None).unwrap();
        let dominant: Vec<&str> = labeled.labels().iter().map(|l| l.as_ref().unwrap().dominant.as_str()).collect();
        assert_eq!(dominant, ["CO2", "RPM", "NOx", "RPM", "CO2"]);
        assert_eq!(labeled.label(0).unwrap().description, CO2_CATEGORY);
        assert_eq!(labeled.label(2).unwrap().description, NOX_CATEGORY);
    }

    #[test]
    fn ties_pick_first_attribute() {
        assert_eq!(dominant_index(&[5.0, 5.0, 5.0, 5.0]), 0);
        assert_eq!(dominant_index(&[1.0, 5.0, 5.0]), 1);
    }

    #[test]
    fn relabel_is_idempotent() {
        let once = label_clusters(&initial_model(), &CategoryMap::pollutants(), Normalization::None).unwrap();
        let twice = label_clusters(&once, &CategoryMap::pollutants(), Normalization::None).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn pooled_model_needs_attribution() {
        let pooled = ClusterModel::from_means(
            AttributeSchema::pooled(),
            DistanceMetric::Manhattan,
            vec![vec![8.0], vec![55.33], vec![29.33], vec![82.66]],
        )
        .unwrap();
        assert!(label_clusters(&pooled, &CategoryMap::pollutants(), Normalization::None).is_err());

        let map = parse_attribution("0=RPM,1=NOx,2=CO2,3=SO2").unwrap();
        let labeled = label_pooled_clusters(&pooled, &map, &CategoryMap::pollutants()).unwrap();
        assert_eq!(labeled.label(3).unwrap().description, SO2_CATEGORY);

        let partial = parse_attribution("0=RPM,1=NOx,2=CO2").unwrap();
        assert!(label_pooled_clusters(&pooled, &partial, &CategoryMap::pollutants()).is_err());
        let extra = parse_attribution("0=RPM,1=NOx,2=CO2,3=SO2,4=SO2").unwrap();
        assert!(label_pooled_clusters(&pooled, &extra, &CategoryMap::pollutants()).is_err());
    }

    #[test]
    fn unknown_attribute_needs_category() {
        let schema = AttributeSchema::new(["CO2", "O3"]).unwrap();
        let model = ClusterModel::from_means(schema, DistanceMetric::Euclidean, vec![vec![1.0, 9.0]]).unwrap();
        assert!(label_clusters(&model, &CategoryMap::pollutants(), Normalization::None).is_err());
        let mut map = CategoryMap::pollutants();
        map.insert("O3", "ozone haze");
        let labeled = label_clusters(&model, &map, Normalization::None).unwrap();
        assert_eq!(labeled.label(0).unwrap().description, "ozone haze");
    }

    #[test]
    fn zscore_changes_dominance() {
        let labeled = label_clusters(&initial_model(), &CategoryMap::pollutants(), Normalization::ZScore).unwrap();
        // Cluster 4 is highest on every pollutant; SO2 stands out most in z-terms.
        assert_eq!(labeled.label(4).unwrap().dominant, "SO2");
    }

    #[test]
    fn tokens_normalize_phrases() {
        assert_eq!(category_token(CO2_CATEGORY), "hot-smogy-humid");
        assert_eq!(category_token(RPM_CATEGORY), "dusty-fly-ash-smogy-fog-mist");
        assert_eq!(category_token(NOX_CATEGORY), "hot-dry-smogy");
        assert_eq!(category_token(SO2_CATEGORY), "hot-smogy-acid-rain");
        assert_eq!(category_token("Hot, dry and smoggy"), "hot-dry-smogy");
        assert_eq!(CategoryMap::pollutants().canonical("hot-dry-smogy"), Some(NOX_CATEGORY));
    }

    #[test]
    fn forecast_csv_quotes_categories() {
        let f = Forecast {
            date: NaiveDate::from_ymd_opt(2009, 9, 1).unwrap(),
            cluster: 2,
            category: WeatherCategory::new("NOx", NOX_CATEGORY),
        };
        let text = write_forecast_csv(std::slice::from_ref(&f)).unwrap();
        assert_eq!(text, "date,cluster,category\n1/9/2009,2,\"Hot, dry and smogy\"\n");
        assert_eq!(read_forecast_csv(&text).unwrap(), vec![ForecastRow::from(&f)]);
        let rows = read_forecast_csv("date,cluster,category\n1/9/2009,Cluster2,\"Hot, dry and smogy\"\n").unwrap();
        assert_eq!(rows[0].cluster, 2);
    }
}
