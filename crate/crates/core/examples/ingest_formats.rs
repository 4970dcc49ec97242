// Reads the same readings from CSV and ARFF and shows both missing-value policies.

use driftcast::{parse_arff, parse_csv, write_arff, write_csv, AttributeSchema, MissingPolicy};

const CSV: &str = "\
Date,CO2,RPM,SO2,NOx
1/1/2009,82,14,12,24
2/1/2009,72,56,28,8
3/1/2009,36,2,48,5
4/1/2009,7,-,94,62
";

pub fn run_example() -> driftcast::Result<String> {
    let from_csv = parse_csv(CSV, &AttributeSchema::pollutants())?;
    let arff = write_arff(&from_csv, "sample");
    let from_arff = parse_arff(&arff)?;
    assert_eq!(from_arff, from_csv);

    let mut out = format!("{} records, {} missing readings\n", from_csv.len(), from_csv.missing_count());
    out += &format!("ARFF form:\n{arff}");
    let dropped = from_csv.resolve_missing(MissingPolicy::DropRecord)?;
    out += &format!("drop-record keeps {} records\n", dropped.len());
    let filled = from_csv.resolve_missing(MissingPolicy::ColumnMean)?;
    out += &format!("column-mean fills:\n{}", write_csv(&filled));
    Ok(out)
}

#[allow(dead_code)]
fn main() -> driftcast::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
