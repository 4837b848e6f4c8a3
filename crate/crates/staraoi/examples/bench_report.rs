//! Timing both paths: the bundled reference instance plus a synthetic
//! dimension-count sweep showing the star path's join cost growing.
//!
//! ```bash
//! cargo run --release --example bench_report
//! ```

use staraoi::bench::run_bench;
use staraoi::{BenchConfig, Result};

fn main() -> Result<()> {
    let cfg = BenchConfig {
        row_counts: vec![10_000],
        depth: 2,
        fanout: vec![2, 4],
        dimensions: 8,
        repetitions: 3,
        seed: 42,
    };
    let report = run_bench(&cfg)?;
    print!("{}", report.text);
    Ok(())
}
