//! `Date,<attributes...>` CSV tables with `D/M/YYYY` dates and `-` for missing readings.

use csv::{ReaderBuilder, StringRecord, Trim};

use crate::dataset::{format_date, parse_date, AttributeSchema, Dataset, PollutantRecord};
use crate::error::{parse_err, Result};

/// Parses a CSV table whose header must be `Date` followed by `schema`'s names.
pub fn parse_csv(text: &str, schema: &AttributeSchema) -> Result<Dataset> {
    let (header_schema, records) = read_table(text)?;
    if &header_schema != schema {
        return Err(parse_err(
            1,
            format!(
                "header columns {:?} do not match expected {:?}",
                header_schema.names(),
                schema.names()
            ),
        ));
    }
    Dataset::new(header_schema, records)
}

/// Parses a CSV table, taking the schema from its header row.
pub fn parse_csv_with_header_schema(text: &str) -> Result<Dataset> {
    let (schema, records) = read_table(text)?;
    Dataset::new(schema, records)
}

fn read_table(text: &str) -> Result<(AttributeSchema, Vec<PollutantRecord>)> {
    let mut reader = ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = reader.records();

    let header = match rows.next() {
        Some(row) => row?,
        None => return Err(parse_err(1, "missing header row")),
    };
    let header_line = line_of(&header);
    let mut columns = header.iter();
    match columns.next() {
        Some(first) if first.trim_start_matches('\u{feff}').eq_ignore_ascii_case("date") => {}
        _ => return Err(parse_err(header_line, "first header column must be `Date`")),
    }
    let schema = AttributeSchema::new(columns.map(str::to_string))
        .map_err(|e| parse_err(header_line, e.to_string()))?;

    let mut records = Vec::new();
    for row in rows {
        let row = row?;
        let line = line_of(&row);
        if row.len() != schema.arity() + 1 {
            return Err(parse_err(
                line,
                format!("expected {} columns, found {}", schema.arity() + 1, row.len()),
            ));
        }
        let date = parse_date(&row[0])
            .ok_or_else(|| parse_err(line, format!("malformed date {:?}, expected D/M/YYYY", &row[0])))?;
        let values = row
            .iter()
            .skip(1)
            .zip(schema.names())
            .map(|(token, name)| parse_reading(token, &["-", ""]).map_err(|m| parse_err(line, format!("{name}: {m}"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        records.push(PollutantRecord::new(date, values));
    }
    Ok((schema, records))
}

fn line_of(row: &StringRecord) -> usize {
    row.position().map(|p| p.line() as usize).unwrap_or(0)
}

/// Parses one reading; any token in `missing` yields `None`.
pub(crate) fn parse_reading(token: &str, missing: &[&str]) -> std::result::Result<Option<f64>, String> {
    let token = token.trim();
    if missing.contains(&token) {
        return Ok(None);
    }
    let value: f64 = token
        .parse()
        .map_err(|_| format!("non-numeric value {token:?}"))?;
    if !value.is_finite() {
        return Err(format!("non-finite value {token:?}"));
    }
    if value < 0.0 {
        return Err(format!("negative value {token:?}"));
    }
    Ok(Some(value))
}

/// Formats a reading with at most six fractional digits, trailing zeros trimmed.
pub fn format_reading(value: f64) -> String {
    let mut s = format!("{value:.6}");
    if s.contains('.') {
        let trimmed = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(trimmed);
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

/// Serializes a dataset as LF-terminated CSV.
pub fn write_csv(ds: &Dataset) -> String {
    let mut out = String::from("Date");
    for name in ds.schema().names() {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for record in ds.records() {
        out.push_str(&format_date(record.date));
        for value in &record.values {
            out.push(',');
            match value {
                Some(v) => out.push_str(&format_reading(*v)),
                None => out.push('-'),
            }
        }
        out.push('\n');
    }
    out
}
