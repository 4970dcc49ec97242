//! Runs each example program and spot-checks its output.

macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));
        }
    };
}

example!(worked_example);
example!(west_bengal_forecast);
example!(ingest_formats);
example!(incremental_vs_refit);
example!(accuracy_report);
example!(synthetic_season);

#[test]
fn worked_example_runs() {
    let out = worked_example::run_example().unwrap();
    assert!(out.contains("15 values, converged after 2 iterations"), "{out}");
    assert!(out.contains("49 -> C2"), "{out}");
    assert!(out.contains("78 -> C4"), "{out}");
    assert!(out.contains("20 -> C3"), "{out}");
}

#[test]
fn west_bengal_forecast_runs() {
    let out = west_bengal_forecast::run_example().unwrap();
    assert!(out.contains("cluster2: NOx dominant -> Hot, dry and smogy"), "{out}");
    assert!(out.contains("2/9/2009: cluster3 dusty"), "{out}");
}

#[test]
fn ingest_formats_runs() {
    let out = ingest_formats::run_example().unwrap();
    assert!(out.contains("4 records, 1 missing readings"), "{out}");
    assert!(out.contains("drop-record keeps 3 records"), "{out}");
    assert!(out.contains("4/1/2009,7,24,94,62"), "{out}");
}

#[test]
fn incremental_vs_refit_runs() {
    let out = incremental_vs_refit::run_example().unwrap();
    assert!(out.contains("insertion mode: static"), "{out}");
    assert!(out.contains("insertion mode: running-mean"), "{out}");
    assert_eq!(out.matches("of 395 records").count(), 2, "{out}");
}

#[test]
fn accuracy_report_runs() {
    let out = accuracy_report::run_example().unwrap();
    assert!(out.contains("matched records: 7 of 7"), "{out}");
    assert!(out.contains("\"accuracy_percent\": 100.0"), "{out}");
}

#[test]
fn synthetic_season_runs() {
    let out = synthetic_season::run_example().unwrap();
    assert_eq!(out.matches("iterations, wcss").count(), 3, "{out}");
    assert_eq!(out.matches("  cluster").count(), 5, "{out}");
}
