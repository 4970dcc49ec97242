//! Batch K-means (Lloyd iteration).
//!
//! Assignment uses the model's metric while centroid updates always take the
//! arithmetic mean, so a Manhattan fit is not guaranteed to descend any
//! objective; iteration stops when the assignment repeats or `max_iter` is hit.
//! WCSS is always reported with squared Euclidean distances.

use std::collections::HashSet;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::{AttributeSchema, Dataset};
use crate::error::{Error, Result};
use crate::metric::{squared_euclidean, DistanceMetric};
use crate::model::{nearest, Centroid, ClusterModel};

pub const DEFAULT_MAX_ITER: usize = 100;

/// How the first centroids are chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum InitStrategy {
    /// Use these means verbatim, one per cluster.
    Explicit(Vec<Vec<f64>>),
    /// The first K distinct records, in file order.
    FirstK,
    /// K distinct records sampled with a seeded generator.
    Random { seed: u64 },
}

impl FromStr for InitStrategy {
    type Err = String;

    /// Accepts `first-k`, `random`, `random:<seed>` or
    /// `explicit:<m,m,...>;<m,m,...>` (one `;`-separated group per centroid;
    /// for scalar models `explicit:8,56,28,72` is read as four 1-D means).
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("first-k") {
            return Ok(InitStrategy::FirstK);
        }
        if s.eq_ignore_ascii_case("random") {
            return Ok(InitStrategy::Random { seed: 0 });
        }
        if let Some(seed) = s.strip_prefix("random:") {
            let seed = seed.trim().parse().map_err(|_| format!("invalid seed {seed:?}"))?;
            return Ok(InitStrategy::Random { seed });
        }
        if let Some(body) = s.strip_prefix("explicit:") {
            let parse_group = |g: &str| -> std::result::Result<Vec<f64>, String> {
                g.split(',')
                    .map(|t| t.trim().parse::<f64>().map_err(|_| format!("invalid mean {t:?}")))
                    .collect()
            };
            let means = if body.contains(';') {
                body.split(';').map(parse_group).collect::<std::result::Result<Vec<_>, _>>()?
            } else {
                parse_group(body)?.into_iter().map(|v| vec![v]).collect()
            };
            if means.is_empty() || means.iter().any(Vec::is_empty) {
                return Err("explicit init needs at least one mean".into());
            }
            return Ok(InitStrategy::Explicit(means));
        }
        Err(format!("unknown init strategy {s:?} (expected explicit:..., first-k or random[:seed])"))
    }
}

/// Per-record cluster indices plus the squared-Euclidean WCSS.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub cluster_of: Vec<usize>,
    pub wcss: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LloydConfig {
    pub k: usize,
    pub metric: DistanceMetric,
    pub init: InitStrategy,
    pub max_iter: usize,
}

impl LloydConfig {
    pub fn new(k: usize, metric: DistanceMetric) -> Self {
        LloydConfig {
            k,
            metric,
            init: InitStrategy::FirstK,
            max_iter: DEFAULT_MAX_ITER,
        }
    }

    pub fn with_init(mut self, init: InitStrategy) -> Self {
        self.init = init;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }
}

/// Result of [`lloyd_fit`].
#[derive(Debug, Clone, PartialEq)]
pub struct Fit {
    pub model: ClusterModel,
    pub assignment: Assignment,
    /// Assign/update rounds performed, including the confirming round.
    pub iterations: usize,
    /// Whether the assignment repeated before `max_iter` ran out.
    pub converged: bool,
    /// WCSS after each round's centroid update.
    pub wcss_history: Vec<f64>,
}

/// Chooses the starting centroids.
pub fn init_centroids(rows: &[Vec<f64>], arity: usize, k: usize, strategy: &InitStrategy) -> Result<Vec<Centroid>> {
    if k == 0 {
        return Err(Error::ZeroClusters);
    }
    match strategy {
        InitStrategy::Explicit(means) => {
            if means.len() != k {
                return Err(Error::ExplicitInit(format!("{} means given for K = {k}", means.len())));
            }
            if let Some(bad) = means.iter().find(|m| m.len() != arity) {
                return Err(Error::ExplicitInit(format!(
                    "mean of length {} does not match attribute count {arity}",
                    bad.len()
                )));
            }
            if means.iter().flatten().any(|v| !v.is_finite()) {
                return Err(Error::ExplicitInit("means must be finite".into()));
            }
            Ok(means.iter().map(|m| Centroid::new(m.clone(), 0)).collect())
        }
        InitStrategy::FirstK | InitStrategy::Random { .. } => {
            let distinct = distinct_rows(rows);
            if distinct.len() < k {
                return Err(Error::NotEnoughDistinct {
                    k,
                    distinct: distinct.len(),
                });
            }
            let chosen: Vec<usize> = match strategy {
                InitStrategy::Random { seed } => {
                    let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                    sample(&mut rng, distinct.len(), k).into_vec()
                }
                _ => (0..k).collect(),
            };
            Ok(chosen
                .into_iter()
                .map(|i| Centroid::new(rows[distinct[i]].clone(), 0))
                .collect())
        }
    }
}

/// Indices of the first occurrence of each distinct row.
fn distinct_rows(rows: &[Vec<f64>]) -> Vec<usize> {
    let mut seen = HashSet::new();
    rows.iter()
        .enumerate()
        .filter(|(_, r)| seen.insert(r.iter().map(|v| (v + 0.0).to_bits()).collect::<Vec<_>>()))
        .map(|(i, _)| i)
        .collect()
}

/// Recomputes each centroid as the mean of its members. Empty clusters keep
/// their previous mean with a zero count.
pub fn update_centroids(rows: &[Vec<f64>], cluster_of: &[usize], previous: &[Centroid]) -> Result<Vec<Centroid>> {
    let k = previous.len();
    if k == 0 {
        return Err(Error::ZeroClusters);
    }
    if rows.len() != cluster_of.len() {
        return Err(Error::LengthMismatch {
            expected: rows.len(),
            actual: cluster_of.len(),
        });
    }
    let arity = previous[0].mean.len();
    let mut sums = vec![vec![0.0; arity]; k];
    let mut counts = vec![0usize; k];
    for (row, &c) in rows.iter().zip(cluster_of) {
        if c >= k {
            return Err(Error::LengthMismatch { expected: k, actual: c + 1 });
        }
        if row.len() != arity {
            return Err(Error::LengthMismatch {
                expected: arity,
                actual: row.len(),
            });
        }
        counts[c] += 1;
        for (s, v) in sums[c].iter_mut().zip(row) {
            *s += v;
        }
    }
    Ok(sums
        .into_iter()
        .zip(counts)
        .zip(previous)
        .map(|((sum, count), prev)| {
            if count == 0 {
                Centroid::new(prev.mean.clone(), 0)
            } else {
                Centroid::new(sum.into_iter().map(|s| s / count as f64).collect(), count)
            }
        })
        .collect())
}

/// Squared-Euclidean within-cluster sum of squares.
pub fn wcss(rows: &[Vec<f64>], cluster_of: &[usize], centroids: &[Centroid]) -> f64 {
    rows.iter()
        .zip(cluster_of)
        .map(|(row, &c)| squared_euclidean(row, &centroids[c].mean))
        .sum()
}

/// Nearest-centroid index for every row.
pub fn assign_all(rows: &[Vec<f64>], centroids: &[Centroid], metric: DistanceMetric) -> Vec<usize> {
    rows.iter().map(|r| nearest(centroids, r, metric).0).collect()
}

/// Fits K-means to a complete dataset.
pub fn lloyd_fit(ds: &Dataset, config: &LloydConfig) -> Result<Fit> {
    let rows = ds.dense_rows()?;
    lloyd_fit_rows(ds.schema(), &rows, config)
}

/// [`lloyd_fit`] over dense rows.
pub fn lloyd_fit_rows(schema: &AttributeSchema, rows: &[Vec<f64>], config: &LloydConfig) -> Result<Fit> {
    if config.k == 0 {
        return Err(Error::ZeroClusters);
    }
    if rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != schema.arity()) {
        return Err(Error::LengthMismatch {
            expected: schema.arity(),
            actual: bad.len(),
        });
    }
    let mut centroids = init_centroids(rows, schema.arity(), config.k, &config.init)?;
    let mut previous: Option<Vec<usize>> = None;
    let mut wcss_history = Vec::new();
    let mut iterations = 0;
    let mut converged = false;

    while iterations < config.max_iter {
        iterations += 1;
        let cluster_of = assign_all(rows, &centroids, config.metric);
        centroids = update_centroids(rows, &cluster_of, &centroids)?;
        wcss_history.push(wcss(rows, &cluster_of, &centroids));
        log::debug!("iteration {iterations}: wcss {:.6}", wcss_history[iterations - 1]);
        if previous.as_ref() == Some(&cluster_of) {
            converged = true;
            previous = Some(cluster_of);
            break;
        }
        previous = Some(cluster_of);
    }

    let cluster_of = match previous {
        Some(c) => c,
        // max_iter == 0: report the initial partition.
        None => assign_all(rows, &centroids, config.metric),
    };
    let total = wcss(rows, &cluster_of, &centroids);
    let model = ClusterModel::new(schema.clone(), config.metric, centroids)?;
    Ok(Fit {
        model,
        assignment: Assignment { cluster_of, wcss: total },
        iterations,
        converged,
        wcss_history,
    })
}
