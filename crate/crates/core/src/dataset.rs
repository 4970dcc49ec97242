//! Pollutant records, attribute schemas and datasets.

use std::collections::HashSet;
use std::fmt;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Attribute names used by the West Bengal pollution tables.
pub const DEFAULT_ATTRIBUTES: [&str; 4] = ["CO2", "RPM", "SO2", "NOx"];

/// Name of the single attribute carried by pooled (scalar) datasets.
pub const POOLED_ATTRIBUTE: &str = "value";

/// Ordered, unique attribute names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SchemaRepr", into = "SchemaRepr")]
pub struct AttributeSchema {
    names: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct SchemaRepr {
    names: Vec<String>,
}

impl TryFrom<SchemaRepr> for AttributeSchema {
    type Error = Error;

    fn try_from(repr: SchemaRepr) -> Result<Self> {
        AttributeSchema::new(repr.names)
    }
}

impl From<AttributeSchema> for SchemaRepr {
    fn from(schema: AttributeSchema) -> Self {
        SchemaRepr { names: schema.names }
    }
}

impl AttributeSchema {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::Schema("at least one attribute is required".into()));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if name.trim().is_empty() {
                return Err(Error::Schema("attribute names must be non-empty".into()));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::Schema(format!("duplicate attribute name {name:?}")));
            }
        }
        Ok(AttributeSchema { names })
    }

    /// The four-pollutant schema `CO2, RPM, SO2, NOx`.
    pub fn pollutants() -> Self {
        AttributeSchema {
            names: DEFAULT_ATTRIBUTES.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// The one-attribute schema used for pooled scalar readings.
    pub fn pooled() -> Self {
        AttributeSchema {
            names: vec![POOLED_ATTRIBUTE.to_string()],
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn arity(&self) -> usize {
        self.names.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

impl Default for AttributeSchema {
    fn default() -> Self {
        Self::pollutants()
    }
}

/// One day's observation. `None` marks a missing reading.
#[derive(Debug, Clone, PartialEq)]
pub struct PollutantRecord {
    pub date: NaiveDate,
    pub values: Vec<Option<f64>>,
}

impl PollutantRecord {
    pub fn new(date: NaiveDate, values: Vec<Option<f64>>) -> Self {
        PollutantRecord { date, values }
    }

    /// A record with every component present.
    pub fn complete(date: NaiveDate, values: &[f64]) -> Self {
        PollutantRecord {
            date,
            values: values.iter().copied().map(Some).collect(),
        }
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    /// The values as a dense vector, if no component is missing.
    pub fn dense(&self) -> Option<Vec<f64>> {
        self.values.iter().copied().collect()
    }
}

/// Policy applied to missing components before clustering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MissingPolicy {
    #[default]
    DropRecord,
    ColumnMean,
}

/// Ordered records sharing one schema. Order is file order.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    schema: AttributeSchema,
    records: Vec<PollutantRecord>,
}

impl Dataset {
    pub fn new(schema: AttributeSchema, records: Vec<PollutantRecord>) -> Result<Self> {
        for record in &records {
            validate_record(&schema, record)?;
        }
        Ok(Dataset { schema, records })
    }

    pub fn empty(schema: AttributeSchema) -> Self {
        Dataset {
            schema,
            records: Vec::new(),
        }
    }

    pub fn schema(&self) -> &AttributeSchema {
        &self.schema
    }

    pub fn records(&self) -> &[PollutantRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn push(&mut self, record: PollutantRecord) -> Result<()> {
        validate_record(&self.schema, &record)?;
        self.records.push(record);
        Ok(())
    }

    /// Appends every record of `other`, which must share this schema.
    pub fn concat(&self, other: &Dataset) -> Result<Dataset> {
        if self.schema != other.schema {
            return Err(Error::Schema(format!(
                "cannot combine datasets with schemas {:?} and {:?}",
                self.schema.names(),
                other.schema.names()
            )));
        }
        let mut records = self.records.clone();
        records.extend(other.records.iter().cloned());
        Ok(Dataset {
            schema: self.schema.clone(),
            records,
        })
    }

    pub fn missing_count(&self) -> usize {
        self.records
            .iter()
            .flat_map(|r| r.values.iter())
            .filter(|v| v.is_none())
            .count()
    }

    /// Dense rows, or [`Error::MissingValue`] naming the first incomplete record.
    pub fn dense_rows(&self) -> Result<Vec<Vec<f64>>> {
        self.records
            .iter()
            .enumerate()
            .map(|(index, r)| {
                r.dense().ok_or_else(|| Error::MissingValue {
                    index,
                    date: format_date(r.date),
                })
            })
            .collect()
    }

    /// Removes or imputes missing components so that every record is complete.
    pub fn resolve_missing(&self, policy: MissingPolicy) -> Result<Dataset> {
        match policy {
            MissingPolicy::DropRecord => Ok(Dataset {
                schema: self.schema.clone(),
                records: self
                    .records
                    .iter()
                    .filter(|r| r.is_complete())
                    .cloned()
                    .collect(),
            }),
            MissingPolicy::ColumnMean => {
                if self.missing_count() == 0 {
                    return Ok(self.clone());
                }
                let arity = self.schema.arity();
                let mut means = Vec::with_capacity(arity);
                for column in 0..arity {
                    let present: Vec<f64> =
                        self.records.iter().filter_map(|r| r.values[column]).collect();
                    let has_gap = present.len() < self.records.len();
                    if present.is_empty() {
                        if has_gap {
                            return Err(Error::AllMissingColumn {
                                column: self.schema.names()[column].clone(),
                            });
                        }
                        means.push(0.0);
                    } else {
                        means.push(present.iter().sum::<f64>() / present.len() as f64);
                    }
                }
                let records = self
                    .records
                    .iter()
                    .map(|r| PollutantRecord {
                        date: r.date,
                        values: r
                            .values
                            .iter()
                            .zip(&means)
                            .map(|(v, m)| Some(v.unwrap_or(*m)))
                            .collect(),
                    })
                    .collect();
                Ok(Dataset {
                    schema: self.schema.clone(),
                    records,
                })
            }
        }
    }

    /// Flattens every present reading into its own one-component record,
    /// row by row in attribute order. Missing readings contribute nothing.
    pub fn pooled(&self) -> Dataset {
        let records = self
            .records
            .iter()
            .flat_map(|r| {
                r.values
                    .iter()
                    .flatten()
                    .map(move |v| PollutantRecord::complete(r.date, &[*v]))
            })
            .collect();
        Dataset {
            schema: AttributeSchema::pooled(),
            records,
        }
    }
}

fn validate_record(schema: &AttributeSchema, record: &PollutantRecord) -> Result<()> {
    if record.values.len() != schema.arity() {
        return Err(Error::LengthMismatch {
            expected: schema.arity(),
            actual: record.values.len(),
        });
    }
    for (value, name) in record.values.iter().zip(schema.names()) {
        if let Some(v) = value {
            if !v.is_finite() || *v < 0.0 {
                return Err(Error::Schema(format!(
                    "{} on {}: value {v} must be finite and non-negative",
                    name,
                    format_date(record.date)
                )));
            }
        }
    }
    Ok(())
}

/// Parses a `D/M/YYYY` date.
pub fn parse_date(token: &str) -> Option<NaiveDate> {
    let mut parts = token.trim().split('/');
    let day = parts.next()?.parse().ok()?;
    let month = parts.next()?.parse().ok()?;
    let year_token = parts.next()?;
    if parts.next().is_some() || year_token.len() != 4 {
        return None;
    }
    NaiveDate::from_ymd_opt(year_token.parse().ok()?, month, day)
}

/// Formats a date as `D/M/YYYY` without zero padding.
pub fn format_date(date: NaiveDate) -> String {
    format!("{}/{}/{}", date.day(), date.month(), date.year())
}

/// Display wrapper printing a date as `D/M/YYYY`.
pub struct DayMonthYear(pub NaiveDate);

impl fmt::Display for DayMonthYear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_date(self.0))
    }
}
