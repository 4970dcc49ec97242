// Generates a reproducible synthetic year and clusters it from seeded random starts.

use driftcast::{
    generate_synthetic, label_clusters, lloyd_fit, CategoryMap, DistanceMetric, InitStrategy, LloydConfig,
    Normalization, SyntheticProfile,
};

pub fn run_example() -> driftcast::Result<String> {
    let profile = SyntheticProfile::west_bengal_2009_2010();
    let season = generate_synthetic(2009, 365, &profile);
    assert_eq!(season, generate_synthetic(2009, 365, &profile));

    let mut out = String::new();
    for seed in [1, 2, 3] {
        let config = LloydConfig::new(5, DistanceMetric::Euclidean).with_init(InitStrategy::Random { seed });
        let fit = lloyd_fit(&season, &config)?;
        out += &format!("seed {seed}: {} iterations, wcss {:.1}\n", fit.iterations, fit.assignment.wcss);
        if seed == 1 {
            // Uniform ranges differ in scale, so z-scores give a fairer dominant attribute.
            let labeled = label_clusters(&fit.model, &CategoryMap::pollutants(), Normalization::ZScore)?;
            for (i, l) in labeled.labels().iter().enumerate() {
                out += &format!("  cluster{i}: {}\n", l.as_ref().unwrap().dominant);
            }
        }
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> driftcast::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
