//! Matched-records accuracy of forecasts against ground-truth categories.

use std::collections::BTreeMap;
use std::fmt;

use chrono::NaiveDate;
use serde::Serialize;

use crate::dataset::{format_date, parse_date};
use crate::error::{parse_err, Error, Result};
use crate::labeling::{category_token, Forecast, ForecastRow};

/// `100 * matched / total`.
pub fn accuracy(matched: usize, total: usize) -> Result<f64> {
    if total == 0 || matched > total {
        return Err(Error::InvalidAccuracy { matched, total });
    }
    Ok(100.0 * matched as f64 / total as f64)
}

/// Observed category token per date.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GroundTruth {
    entries: BTreeMap<NaiveDate, String>,
}

impl GroundTruth {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records the observed category for `date`. Repeating an identical entry
    /// is accepted; a conflicting one is an error.
    pub fn insert(&mut self, date: NaiveDate, category: &str) -> Result<()> {
        let token = category_token(category);
        match self.entries.get(&date) {
            Some(existing) if *existing != token => Err(Error::Schema(format!(
                "conflicting ground truth for {}: {existing} vs {token}",
                format_date(date)
            ))),
            _ => {
                self.entries.insert(date, token);
                Ok(())
            }
        }
    }

    pub fn get(&self, date: NaiveDate) -> Option<&str> {
        self.entries.get(&date).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Reads a `date,category` CSV with a header row.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(text.as_bytes());
        let mut truth = GroundTruth::new();
        for record in reader.records() {
            let record = record?;
            let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
            if record.len() != 2 {
                return Err(parse_err(line, format!("expected date,category, found {} columns", record.len())));
            }
            let date = parse_date(&record[0]).ok_or_else(|| parse_err(line, format!("malformed date {:?}", &record[0])))?;
            truth.insert(date, &record[1]).map_err(|e| parse_err(line, e.to_string()))?;
        }
        Ok(truth)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct CategoryCounts {
    pub matched: usize,
    pub total: usize,
}

/// Match counts, keyed per category by the ground-truth token.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub matched: usize,
    pub total: usize,
    pub accuracy_percent: f64,
    pub per_category: BTreeMap<String, CategoryCounts>,
}

impl EvaluationReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

impl fmt::Display for EvaluationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "matched records: {} of {}", self.matched, self.total)?;
        writeln!(f, "accuracy: {:.4}%", self.accuracy_percent)?;
        for (category, counts) in &self.per_category {
            writeln!(f, "  {category}: {} of {}", counts.matched, counts.total)?;
        }
        Ok(())
    }
}

/// Scores forecasts against ground truth by category token equality.
pub fn evaluate(forecasts: &[Forecast], truth: &GroundTruth) -> Result<EvaluationReport> {
    let rows: Vec<ForecastRow> = forecasts.iter().map(ForecastRow::from).collect();
    evaluate_rows(&rows, truth)
}

/// [`evaluate`] over forecast rows read from a file.
pub fn evaluate_rows(forecasts: &[ForecastRow], truth: &GroundTruth) -> Result<EvaluationReport> {
    let mut per_category: BTreeMap<String, CategoryCounts> = BTreeMap::new();
    let mut matched = 0;
    for row in forecasts {
        let actual = truth
            .get(row.date)
            .ok_or_else(|| Error::MissingTruth(format_date(row.date)))?;
        let counts = per_category.entry(actual.to_string()).or_default();
        counts.total += 1;
        if category_token(&row.category) == actual {
            counts.matched += 1;
            matched += 1;
        }
    }
    let total = forecasts.len();
    Ok(EvaluationReport {
        matched,
        total,
        accuracy_percent: accuracy(matched, total)?,
        per_category,
    })
}
