//! Dense ARFF subset: `@relation`, numeric and date attributes, `%` comments, `@data`.
//!
//! Numeric attributes form the schema in declaration order. At most one `date`
//! attribute supplies the record date (`D/M/YYYY` or ISO `YYYY-MM-DD`). Files
//! without a date attribute are dated consecutively from 1/1/2009. Both `?` and
//! `-` mark missing readings. Sparse rows, string and nominal attributes are
//! rejected.

use chrono::{Days, NaiveDate};

use crate::csv_format::{format_reading, parse_reading};
use crate::dataset::{format_date, parse_date, AttributeSchema, Dataset, PollutantRecord};
use crate::error::{parse_err, Result};

const MISSING_MARKERS: [&str; 2] = ["?", "-"];

#[derive(Debug, Clone, Copy, PartialEq)]
enum Column {
    Date,
    Numeric,
}

/// Start date for ARFF files that carry no date attribute.
pub fn default_start_date() -> NaiveDate {
    NaiveDate::from_ymd_opt(2009, 1, 1).expect("valid date")
}

/// Parses a dense ARFF document.
pub fn parse_arff(text: &str) -> Result<Dataset> {
    let mut relation_seen = false;
    let mut columns: Vec<Column> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut header_line = 0;
    let mut data_start = None;

    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    for (line, raw) in lines.by_ref() {
        let content = raw.trim();
        if content.is_empty() || content.starts_with('%') {
            continue;
        }
        let (keyword, rest) = split_keyword(content);
        match keyword.to_ascii_lowercase().as_str() {
            "@relation" => relation_seen = true,
            "@attribute" => {
                if !relation_seen {
                    return Err(parse_err(line, "@attribute before @relation"));
                }
                let (name, kind) = split_name(rest).map_err(|m| parse_err(line, m))?;
                let kind_word = kind.split_whitespace().next().unwrap_or("").to_ascii_lowercase();
                match kind_word.as_str() {
                    "numeric" | "real" | "integer" => {
                        columns.push(Column::Numeric);
                        names.push(name);
                    }
                    "date" => {
                        if columns.contains(&Column::Date) {
                            return Err(parse_err(line, "more than one date attribute"));
                        }
                        columns.push(Column::Date);
                    }
                    "" => return Err(parse_err(line, format!("attribute {name:?} has no type"))),
                    _ => {
                        return Err(parse_err(
                            line,
                            format!("unsupported attribute type {kind:?} for {name:?}"),
                        ))
                    }
                }
                header_line = line;
            }
            "@data" => {
                if !relation_seen {
                    return Err(parse_err(line, "@data before @relation"));
                }
                data_start = Some(line);
                break;
            }
            _ => return Err(parse_err(line, format!("unexpected header line {content:?}"))),
        }
    }

    let data_line = data_start.ok_or_else(|| parse_err(text.lines().count().max(1), "missing @data marker"))?;
    if names.is_empty() {
        return Err(parse_err(
            header_line.max(data_line),
            "no numeric attributes declared",
        ));
    }
    let schema = AttributeSchema::new(names).map_err(|e| parse_err(header_line, e.to_string()))?;
    let has_date = columns.contains(&Column::Date);

    let mut records = Vec::new();
    for (line, raw) in lines {
        let content = raw.trim();
        if content.is_empty() || content.starts_with('%') {
            continue;
        }
        if content.starts_with('{') {
            return Err(parse_err(line, "sparse ARFF rows are not supported"));
        }
        let fields = split_fields(content).map_err(|m| parse_err(line, m))?;
        if fields.len() != columns.len() {
            return Err(parse_err(
                line,
                format!("expected {} values, found {}", columns.len(), fields.len()),
            ));
        }
        let mut date = None;
        let mut values = Vec::with_capacity(schema.arity());
        for (field, column) in fields.iter().zip(&columns) {
            match column {
                Column::Date => {
                    date = Some(parse_arff_date(field).ok_or_else(|| {
                        parse_err(line, format!("malformed date {field:?}"))
                    })?);
                }
                Column::Numeric => {
                    let name = &schema.names()[values.len()];
                    values.push(
                        parse_reading(field, &MISSING_MARKERS)
                            .map_err(|m| parse_err(line, format!("{name}: {m}")))?,
                    );
                }
            }
        }
        let date = match date {
            Some(d) => d,
            None if !has_date => default_start_date()
                .checked_add_days(Days::new(records.len() as u64))
                .ok_or_else(|| parse_err(line, "date overflow"))?,
            None => unreachable!("date column parsed above"),
        };
        records.push(PollutantRecord::new(date, values));
    }
    Dataset::new(schema, records)
}

/// Serializes a dataset as ARFF with a leading `Date` attribute.
pub fn write_arff(ds: &Dataset, relation: &str) -> String {
    let mut out = format!("@relation {}\n\n", quote_if_needed(relation));
    out.push_str("@attribute Date date \"d/M/yyyy\"\n");
    for name in ds.schema().names() {
        out.push_str(&format!("@attribute {} numeric\n", quote_if_needed(name)));
    }
    out.push_str("\n@data\n");
    for record in ds.records() {
        out.push_str(&format_date(record.date));
        for value in &record.values {
            out.push(',');
            match value {
                Some(v) => out.push_str(&format_reading(*v)),
                None => out.push('?'),
            }
        }
        out.push('\n');
    }
    out
}

fn parse_arff_date(token: &str) -> Option<NaiveDate> {
    if let Some(d) = parse_date(token) {
        return Some(d);
    }
    let iso = token.split('T').next()?;
    NaiveDate::parse_from_str(iso, "%Y-%m-%d").ok()
}

fn split_keyword(line: &str) -> (&str, &str) {
    match line.find(char::is_whitespace) {
        Some(i) => (&line[..i], line[i..].trim()),
        None => (line, ""),
    }
}

fn split_name(rest: &str) -> std::result::Result<(String, &str), String> {
    let rest = rest.trim();
    if let Some(quote) = rest.chars().next().filter(|c| *c == '\'' || *c == '"') {
        let body = &rest[1..];
        let end = body
            .find(quote)
            .ok_or_else(|| format!("unterminated quoted attribute name in {rest:?}"))?;
        Ok((body[..end].to_string(), body[end + 1..].trim()))
    } else {
        let (name, kind) = split_keyword(rest);
        if name.is_empty() {
            return Err("attribute without a name".into());
        }
        Ok((name.to_string(), kind))
    }
}

fn split_fields(line: &str) -> std::result::Result<Vec<String>, String> {
    let mut fields = Vec::new();
    let mut current = String::new();
    let mut quote: Option<char> = None;
    for c in line.chars() {
        match quote {
            Some(q) if c == q => quote = None,
            Some(_) => current.push(c),
            None if c == '\'' || c == '"' => quote = Some(c),
            None if c == ',' => fields.push(std::mem::take(&mut current).trim().to_string()),
            None => current.push(c),
        }
    }
    if quote.is_some() {
        return Err("unterminated quote".into());
    }
    fields.push(current.trim().to_string());
    Ok(fields)
}

fn quote_if_needed(name: &str) -> String {
    if name.chars().any(|c| c.is_whitespace() || ",{}%'\"".contains(c)) {
        format!("'{}'", name.replace('\'', ""))
    } else {
        name.to_string()
    }
}
