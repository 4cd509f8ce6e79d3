//! Concurrence against maximum violation for random Bell-diagonal states.
//!
//! Bins the samples by concurrence and prints the observed range of `F`
//! next to the band `(1 + 2E)/3 <= F <= rank-2 curve`.
//!
//! ```bash
//! cargo run --release --example scatter_envelope -- 50000
//! ```

use tsteer::cli::scatter;
use tsteer::entanglement::ef_band;

fn main() -> tsteer::Result<()> {
    let samples = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let outcome = scatter(samples, 2024, 1e-7)?;
    let bins = 10;
    let mut ranges = vec![(f64::INFINITY, f64::NEG_INFINITY, 0usize); bins];
    for p in outcome.points.iter().filter(|p| p.concurrence > 0.0) {
        let k = ((p.concurrence * bins as f64) as usize).min(bins - 1);
        let r = &mut ranges[k];
        *r = (r.0.min(p.f_value), r.1.max(p.f_value), r.2 + 1);
    }
    println!("{:>11} {:>7} {:>9} {:>9} {:>9} {:>9}", "E bin", "count", "min F", "max F", "lower", "upper");
    for (k, (lo, hi, n)) in ranges.iter().enumerate() {
        let (e0, e1) = (k as f64 / bins as f64, (k + 1) as f64 / bins as f64);
        let (band_lo, _) = ef_band(e0.max(1e-12))?;
        let (_, band_hi) = ef_band(e1)?;
        println!("{e0:.1}..{e1:.1}   {n:>7} {lo:>9.5} {hi:>9.5} {band_lo:>9.5} {band_hi:>9.5}");
    }
    let separable_max = outcome
        .points
        .iter()
        .filter(|p| p.concurrence == 0.0)
        .map(|p| p.f_value)
        .fold(0.0, f64::max);
    println!("largest F among separable samples: {separable_max:.9}");
    println!("{}", serde_json::to_string_pretty(&outcome.summary).expect("summary serializes"));
    Ok(())
}
