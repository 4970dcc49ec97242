//! Seeded synthetic pollutant series, used where the historical board data is unavailable.

use chrono::Days;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arff::default_start_date;
use crate::dataset::{AttributeSchema, Dataset, PollutantRecord};
use crate::error::{Error, Result};

/// Inclusive per-attribute value ranges.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticProfile {
    schema: AttributeSchema,
    ranges: Vec<(f64, f64)>,
}

impl SyntheticProfile {
    pub fn new(schema: AttributeSchema, ranges: Vec<(f64, f64)>) -> Result<Self> {
        if ranges.len() != schema.arity() {
            return Err(Error::LengthMismatch {
                expected: schema.arity(),
                actual: ranges.len(),
            });
        }
        for ((low, high), name) in ranges.iter().zip(schema.names()) {
            let valid = low.is_finite() && high.is_finite() && *low >= 0.0 && low <= high;
            if !valid {
                return Err(Error::InvalidRange {
                    attribute: name.clone(),
                    low: *low,
                    high: *high,
                });
            }
        }
        Ok(SyntheticProfile { schema, ranges })
    }

    /// Spreads observed in the September 2009 to June 2010 readings.
    pub fn west_bengal_2009_2010() -> Self {
        SyntheticProfile {
            schema: AttributeSchema::pollutants(),
            ranges: vec![(27.0, 270.0), (27.0, 175.0), (5.0, 16.0), (31.0, 120.0)],
        }
    }

    pub fn schema(&self) -> &AttributeSchema {
        &self.schema
    }

    pub fn ranges(&self) -> &[(f64, f64)] {
        &self.ranges
    }
}

/// Generates `days` consecutive daily records starting 1/1/2009.
///
/// Values are drawn uniformly and kept to two decimals so they survive a CSV
/// round trip unchanged.
pub fn generate_synthetic(seed: u64, days: usize, profile: &SyntheticProfile) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = default_start_date();
    let records = (0..days)
        .map(|day| {
            let values = profile
                .ranges
                .iter()
                .map(|&(low, high)| {
                    let raw = if low == high { low } else { rng.gen_range(low..=high) };
                    Some(((raw * 100.0).round() / 100.0).clamp(low, high))
                })
                .collect();
            let date = start
                .checked_add_days(Days::new(day as u64))
                .expect("synthetic date range within chrono bounds");
            PollutantRecord::new(date, values)
        })
        .collect();
    Dataset::new(profile.schema.clone(), records).expect("synthetic records respect the profile")
}
