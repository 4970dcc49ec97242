// Labels five January-August 2009 clusters by their dominant pollutant and
// forecasts the weather category for September readings.

use std::path::PathBuf;

use driftcast::{
    forecast, insert_stream, label_clusters, load_model, parse_csv, AttributeSchema, CategoryMap, InsertionMode,
    Normalization,
};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn run_example() -> driftcast::Result<String> {
    let model = load_model(&fixture("initial_clusters_2009.json"))?;
    let model = label_clusters(&model, &CategoryMap::pollutants(), Normalization::None)?;

    let mut out = String::new();
    for (i, label) in model.labels().iter().enumerate() {
        let label = label.as_ref().unwrap();
        out += &format!("cluster{i}: {} dominant -> {}\n", label.dominant, label.description);
    }

    let text = std::fs::read_to_string(fixture("september_2009.csv")).map_err(|source| driftcast::Error::Io {
        path: fixture("september_2009.csv"),
        source,
    })?;
    let september = parse_csv(&text, &AttributeSchema::pollutants())?;
    let (_, log) = insert_stream(&september, model.clone(), InsertionMode::StaticCentroids)?;
    for f in forecast(&log, &model)? {
        out += &format!("{}: cluster{} {}\n", driftcast::dataset::format_date(f.date), f.cluster, f.category.description);
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> driftcast::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
