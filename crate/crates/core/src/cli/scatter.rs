//! Concurrence against maximum violation for random Bell-diagonal states.

use rayon::prelude::*;
use serde::Serialize;

use crate::entanglement::{concurrence, ef_band};
use crate::error::{domain, Error, Result};
use crate::families::{bell_diagonal_from_t, random_bell_diagonal, seeded_rng, RNG_ALGORITHM};
use crate::steering::{singular_spectrum, ViolationSolver, STEERING_BOUND};

/// Samples drawn from one RNG stream. Fixed so output does not depend on the thread count.
pub const SHARD_SIZE: usize = 1000;
/// Slack allowed on either side of the concurrence band.
pub const BAND_SLACK: f64 = 1e-6;
/// Concurrence above which every T state is steerable.
pub const STEERING_CONCURRENCE: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatterPoint {
    pub concurrence: f64,
    pub f_value: f64,
}

impl ScatterPoint {
    pub const HEADER: [&'static str; 2] = ["concurrence", "f_value"];

    pub fn violates_band(&self) -> bool {
        let (lo, hi) = ef_band(self.concurrence.clamp(0.0, 1.0)).expect("clamped into [0, 1]");
        self.f_value < lo - BAND_SLACK || self.f_value > hi + BAND_SLACK
    }

    /// A point with `E > 1/4 + slack` that is not steerable.
    pub fn violates_steering_claim(&self) -> bool {
        self.concurrence > STEERING_CONCURRENCE + BAND_SLACK && self.f_value <= STEERING_BOUND
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatterSummary {
    pub samples: usize,
    pub seed: u64,
    pub rng: &'static str,
    pub target_rel_err: f64,
    pub points: usize,
    pub band_violations: usize,
    pub steering_claim_violations: usize,
    pub convergence_failures: usize,
}

impl ScatterSummary {
    pub fn passed(&self) -> bool {
        self.band_violations == 0 && self.steering_claim_violations == 0
    }
}

#[derive(Debug, Clone)]
pub struct ScatterOutcome {
    /// Converged samples in sample order.
    pub points: Vec<ScatterPoint>,
    pub summary: ScatterSummary,
}

fn sample_shard(solver: &ViolationSolver, seed: u64, shard: usize, count: usize) -> Vec<Result<ScatterPoint>> {
    let mut rng = seeded_rng(seed, shard as u64);
    (0..count)
        .map(|_| {
            let params = random_bell_diagonal(&mut rng);
            let rho = bell_diagonal_from_t(&params)?;
            let f_value = solver.max_violation(&singular_spectrum(&params.correlation()))?.f_value;
            Ok(ScatterPoint {
                concurrence: concurrence(&rho).concurrence,
                f_value,
            })
        })
        .collect()
}

/// Draws `samples` Bell-diagonal states and evaluates `(E, F)` for each.
///
/// Convergence failures are counted and dropped; other errors abort.
pub fn scatter(samples: usize, seed: u64, target_rel_err: f64) -> Result<ScatterOutcome> {
    if samples == 0 {
        return domain("samples must be at least 1");
    }
    let solver = ViolationSolver::new(target_rel_err)?;
    let shards = samples.div_ceil(SHARD_SIZE);
    let results: Vec<Result<ScatterPoint>> = (0..shards)
        .into_par_iter()
        .flat_map_iter(|k| {
            let count = SHARD_SIZE.min(samples - k * SHARD_SIZE);
            sample_shard(&solver, seed, k, count)
        })
        .collect();

    let mut points = Vec::with_capacity(samples);
    let mut convergence_failures = 0;
    for r in results {
        match r {
            Ok(p) => points.push(p),
            Err(Error::Convergence { .. }) => convergence_failures += 1,
            Err(e) => return Err(e),
        }
    }
    let summary = ScatterSummary {
        samples,
        seed,
        rng: RNG_ALGORITHM,
        target_rel_err,
        points: points.len(),
        band_violations: points.iter().filter(|p| p.violates_band()).count(),
        steering_claim_violations: points.iter().filter(|p| p.violates_steering_claim()).count(),
        convergence_failures,
    };
    Ok(ScatterOutcome { points, summary })
}

/// Matplotlib script overlaying the concurrence band on the samples.
pub fn plot_script(csv_name: &str) -> String {
    format!(
        r##"# Concurrence against maximum violation, with the band for entangled T states.
# Sampler: {RNG_ALGORITHM}
import csv, math, os
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
rows = list(csv.DictReader(open(os.path.join(here, "{csv_name}"))))
plt.scatter([float(r["concurrence"]) for r in rows], [float(r["f_value"]) for r in rows], s=1, c="#6a9fd4")

def upper(e):
    if e >= 1:
        return 1.0
    k = math.sqrt(1 - e * e)
    return 0.5 * (1 + e * e / k * math.log((1 + k) / e))

es = [k / 1000 for k in range(1, 1001)]
plt.plot(es, [(1 + 2 * e) / 3 for e in es], "k--", label="(1 + 2E)/3")
plt.plot(es, [upper(e) for e in es], "k-", label="rank-2 upper bound")
plt.axhline(0.5, color="gray", lw=0.5)
plt.xlabel("E")
plt.ylabel("F")
plt.legend(loc="lower right")
plt.savefig(os.path.join(here, "{csv_name}".rsplit(".", 1)[0] + ".png"), dpi=150)
"##
    )
}
