//! Seeded comparison of both bounds against exact t* on random systems.
//!
//!     cargo run --release --example monte_carlo_study -- 300 7 study.csv

use masbound::montecarlo::{run_study, study_csv, StudyConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let count = args.next().map(|s| s.parse()).transpose()?.unwrap_or(100);
    let master_seed = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0);
    let config = StudyConfig { count, master_seed, ..StudyConfig::default() };

    let start = std::time::Instant::now();
    let (rows, summary) = run_study(&config)?;
    eprintln!("{} systems in {:.1?}", rows.len(), start.elapsed());

    for r in rows.iter().filter(|r| r.status != "ok") {
        eprintln!("system {}: {}", r.system_id, r.status);
    }
    let slowest = rows
        .iter()
        .max_by(|a, b| a.timings.t_star_forced.total_cmp(&b.timings.t_star_forced))
        .expect("at least one row");
    eprintln!("slowest forced t*: system {} ({:.2}s)", slowest.system_id, slowest.timings.t_star_forced);

    if let Some(path) = args.next() {
        std::fs::write(path, study_csv(&rows))?;
    }
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}
