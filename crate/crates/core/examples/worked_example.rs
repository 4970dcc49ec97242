// Pools four days of readings into one value list, fits four clusters under
// the Manhattan metric, then places three upcoming readings.

use driftcast::{
    insert_stream, lloyd_fit, parse_csv, AttributeSchema, DistanceMetric, InitStrategy, InsertionMode, LloydConfig,
};

const HISTORY: &str = "\
Date,CO2,RPM,SO2,NOx
1/1/2009,82,14,12,24
2/1/2009,72,56,28,8
3/1/2009,36,2,48,5
4/1/2009,7,-,94,62
";

const UPCOMING: &str = "\
Date,CO2,RPM,SO2,NOx
5/1/2009,-,-,-,49
6/1/2009,-,-,78,-
7/1/2009,20,-,-,-
";

pub fn run_example() -> driftcast::Result<String> {
    let schema = AttributeSchema::pollutants();
    let pooled = parse_csv(HISTORY, &schema)?.pooled();
    let config = LloydConfig::new(4, DistanceMetric::Manhattan)
        .with_init(InitStrategy::Explicit(vec![vec![8.0], vec![56.0], vec![28.0], vec![72.0]]));
    let fit = lloyd_fit(&pooled, &config)?;

    let mut out = format!("{} values, converged after {} iterations\n", pooled.len(), fit.iterations);
    for (i, c) in fit.model.centroids().iter().enumerate() {
        out += &format!("C{}: mean {:.2}, {} members\n", i + 1, c.mean[0], c.member_count);
    }

    let upcoming = parse_csv(UPCOMING, &schema)?.pooled();
    let (_, log) = insert_stream(&upcoming, fit.model, InsertionMode::StaticCentroids)?;
    for entry in &log.entries {
        out += &format!("{} -> C{} (distance {:.2})\n", entry.values[0], entry.cluster + 1, entry.min_distance());
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> driftcast::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
