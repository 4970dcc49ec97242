// Scores a September forecast against the observed weather categories.

use std::path::PathBuf;

use driftcast::{
    evaluate, forecast, insert_stream, label_clusters, load_model, parse_csv, AttributeSchema, CategoryMap,
    GroundTruth, InsertionMode, Normalization,
};

fn read(name: &str) -> driftcast::Result<String> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    std::fs::read_to_string(&path).map_err(|source| driftcast::Error::Io { path, source })
}

pub fn run_example() -> driftcast::Result<String> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/initial_clusters_2009.json");
    let model = label_clusters(&load_model(&path)?, &CategoryMap::pollutants(), Normalization::None)?;
    let truth = GroundTruth::from_csv(&read("september_2009_truth.csv")?)?;
    let september = parse_csv(&read("september_2009.csv")?, &AttributeSchema::pollutants())?;
    let (_, log) = insert_stream(&september, model.clone(), InsertionMode::StaticCentroids)?;

    // Only score days that have an observation.
    let observed: Vec<_> = forecast(&log, &model)?
        .into_iter()
        .filter(|f| truth.get(f.date).is_some())
        .collect();
    let report = evaluate(&observed, &truth)?;
    Ok(format!("{report}{}\n", report.to_json()?))
}

#[allow(dead_code)]
fn main() -> driftcast::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
