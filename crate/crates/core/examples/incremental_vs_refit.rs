// Measures how far streaming insertion drifts from refitting everything, for
// both insertion modes, on a synthetic season.

use chrono::Days;
use driftcast::{
    compare_with_refit, generate_synthetic, Dataset, DistanceMetric, InitStrategy, InsertionMode, LloydConfig,
    SyntheticProfile,
};

pub fn run_example() -> driftcast::Result<String> {
    let season = generate_synthetic(11, 365, &SyntheticProfile::west_bengal_2009_2010());
    let (base, stream) = season.records().split_at(243);
    let base = Dataset::new(season.schema().clone(), base.to_vec())?;
    let mut stream = Dataset::new(season.schema().clone(), stream.to_vec())?;
    // A small shifted burst makes the drift visible.
    let last = stream.records().last().unwrap().clone();
    for i in 1..=30 {
        let values = last.values.iter().map(|v| v.map(|x| x * 0.5)).collect();
        stream.push(driftcast::PollutantRecord::new(last.date + Days::new(i), values))?;
    }

    // First-k starts both fits from the same records, so cluster indices line up.
    let config = LloydConfig::new(5, DistanceMetric::Euclidean).with_init(InitStrategy::FirstK);
    let mut out = String::new();
    for mode in [InsertionMode::StaticCentroids, InsertionMode::RunningMean] {
        out += &compare_with_refit(&base, &stream, &config, mode)?.to_string();
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> driftcast::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
