//! Incremental assignment of newly arriving records to an existing model.
//!
//! New records go to the nearest existing centroid without refitting. In
//! [`InsertionMode::StaticCentroids`] the model never changes; in
//! [`InsertionMode::RunningMean`] the receiving centroid absorbs the record.

use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;

use crate::dataset::{format_date, Dataset, PollutantRecord};
use crate::error::{Error, Result};
use crate::kmeans::{init_centroids, lloyd_fit, InitStrategy, LloydConfig};
use crate::metric::squared_euclidean;
use crate::model::{argmin, ClusterModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InsertionMode {
    #[default]
    StaticCentroids,
    RunningMean,
}

impl FromStr for InsertionMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "static" | "static-centroids" => Ok(InsertionMode::StaticCentroids),
            "running-mean" | "running" => Ok(InsertionMode::RunningMean),
            other => Err(format!("unknown insertion mode {other:?} (expected static or running-mean)")),
        }
    }
}

impl fmt::Display for InsertionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InsertionMode::StaticCentroids => "static",
            InsertionMode::RunningMean => "running-mean",
        })
    }
}

/// One inserted record.
#[derive(Debug, Clone, PartialEq)]
pub struct LogEntry {
    pub date: NaiveDate,
    pub values: Vec<f64>,
    pub cluster: usize,
    /// Distance to every centroid as it stood when the record arrived.
    pub distances: Vec<f64>,
    pub category: Option<String>,
}

impl LogEntry {
    pub fn min_distance(&self) -> f64 {
        self.distances[self.cluster]
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct InsertionLog {
    pub entries: Vec<LogEntry>,
}

impl InsertionLog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `date,cluster,category,d0,...,d{K-1}` with distances at four decimals.
    pub fn to_csv(&self, k: usize) -> Result<String> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let mut header = vec!["date".to_string(), "cluster".to_string(), "category".to_string()];
        header.extend((0..k).map(|i| format!("d{i}")));
        writer.write_record(&header)?;
        for entry in &self.entries {
            let mut row = vec![
                format_date(entry.date),
                entry.cluster.to_string(),
                entry.category.clone().unwrap_or_default(),
            ];
            row.extend(entry.distances.iter().map(|d| format!("{d:.4}")));
            writer.write_record(&row)?;
        }
        let bytes = writer.into_inner().map_err(|e| Error::ModelFile(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Assigns one record and, in running-mean mode, folds it into its centroid.
pub fn incremental_insert(
    record: &PollutantRecord,
    model: ClusterModel,
    mode: InsertionMode,
) -> Result<(ClusterModel, LogEntry)> {
    let values = record.dense().ok_or_else(|| Error::MissingValue {
        index: 0,
        date: format_date(record.date),
    })?;
    let distances = model.distances(&values)?;
    let (cluster, _) = argmin(&distances).ok_or(Error::EmptyModel)?;
    let category = model.label(cluster).map(|c| c.description.clone());

    let mut model = model;
    if mode == InsertionMode::RunningMean {
        let centroid = &mut model.centroids_mut()[cluster];
        let n = centroid.member_count as f64;
        for (m, x) in centroid.mean.iter_mut().zip(&values) {
            *m = (*m * n + x) / (n + 1.0);
        }
        centroid.member_count += 1;
    }
    let entry = LogEntry {
        date: record.date,
        values,
        cluster,
        distances,
        category,
    };
    Ok((model, entry))
}

/// Inserts records in order, threading the model through.
pub fn insert_stream(new_records: &Dataset, model: ClusterModel, mode: InsertionMode) -> Result<(ClusterModel, InsertionLog)> {
    let mut model = model;
    let mut log = InsertionLog::default();
    for (index, record) in new_records.records().iter().enumerate() {
        let (next, entry) = incremental_insert(record, model, mode).map_err(|e| match e {
            Error::MissingValue { date, .. } => Error::MissingValue { index, date },
            other => other,
        })?;
        model = next;
        log.entries.push(entry);
    }
    Ok((model, log))
}

/// How far the incremental shortcut drifts from a full refit.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceReport {
    pub mode: InsertionMode,
    pub total_records: usize,
    /// Records whose incremental cluster differs from the refit cluster.
    pub reassigned: usize,
    pub divergence: f64,
    /// L2 distance between each incremental centroid and its refit counterpart.
    pub centroid_displacement: Vec<f64>,
    pub refit_iterations: usize,
}

impl fmt::Display for DivergenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "insertion mode: {}", self.mode)?;
        writeln!(
            f,
            "reassigned: {} of {} records ({:.4}%)",
            self.reassigned,
            self.total_records,
            self.divergence * 100.0
        )?;
        writeln!(f, "refit iterations: {}", self.refit_iterations)?;
        for (i, d) in self.centroid_displacement.iter().enumerate() {
            writeln!(f, "cluster{i} displacement: {d:.4}")?;
        }
        Ok(())
    }
}

/// Fits `base`, streams `new_records` into the fit, then refits base + new
/// and compares cluster by cluster index. The starting centroids are drawn
/// once from `base` and reused for the refit, so random starts stay comparable.
pub fn compare_with_refit(
    base: &Dataset,
    new_records: &Dataset,
    config: &LloydConfig,
    mode: InsertionMode,
) -> Result<DivergenceReport> {
    let combined = base.concat(new_records)?;
    if combined.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let start = init_centroids(&base.dense_rows()?, base.schema().arity(), config.k, &config.init)?;
    let config = &config
        .clone()
        .with_init(InitStrategy::Explicit(start.into_iter().map(|c| c.mean).collect()));
    let base_fit = lloyd_fit(base, config)?;
    let (incremental_model, log) = insert_stream(new_records, base_fit.model, mode)?;
    let incremental: Vec<usize> = base_fit
        .assignment
        .cluster_of
        .iter()
        .copied()
        .chain(log.entries.iter().map(|e| e.cluster))
        .collect();

    let refit = lloyd_fit(&combined, config)?;
    let reassigned = incremental
        .iter()
        .zip(&refit.assignment.cluster_of)
        .filter(|(a, b)| a != b)
        .count();
    let centroid_displacement = incremental_model
        .centroids()
        .iter()
        .zip(refit.model.centroids())
        .map(|(a, b)| squared_euclidean(&a.mean, &b.mean).sqrt())
        .collect();
    Ok(DivergenceReport {
        mode,
        total_records: combined.len(),
        reassigned,
        divergence: reassigned as f64 / combined.len() as f64,
        centroid_displacement,
        refit_iterations: refit.iterations,
    })
}
