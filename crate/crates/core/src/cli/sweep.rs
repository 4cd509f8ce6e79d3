//! Phase diagram of phase-damped Werner states over `(alpha, eta)`.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::families::werner_pd;
use crate::steering::{ViolationSolver, STEERING_BOUND};

/// Concurrences below this count as zero; the eigenvalue route leaves ~1e-16 noise.
pub const CONCURRENCE_FLOOR: f64 = 1e-12;
/// Rounding allowed above `1/2` for points the guarded verdict calls unsteerable.
pub const PHASE_ROUNDOFF: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    Separable,
    EntangledUnsteerable,
    Steerable,
}

impl Phase {
    /// `steerable` is the guarded verdict, so boundary points stay unsteerable.
    pub fn classify(concurrence: f64, steerable: bool) -> Self {
        if steerable {
            Phase::Steerable
        } else if concurrence > 0.0 {
            Phase::EntangledUnsteerable
        } else {
            Phase::Separable
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Separable => "separable",
            Phase::EntangledUnsteerable => "entangled-unsteerable",
            Phase::Steerable => "steerable",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord {
    pub alpha: f64,
    pub eta: f64,
    pub f_value: f64,
    pub concurrence: f64,
    pub phase: Phase,
}

impl SweepRecord {
    pub const HEADER: [&'static str; 5] = ["alpha", "eta", "f_value", "concurrence", "phase"];

    /// Steerable points are entangled with `F > 1/2`; the others have `F <= 1/2`
    /// up to [`PHASE_ROUNDOFF`], and separable points have zero concurrence.
    pub fn is_consistent(&self) -> bool {
        let entangled = self.concurrence > 0.0;
        match self.phase {
            Phase::Steerable => entangled && self.f_value > STEERING_BOUND,
            Phase::EntangledUnsteerable => entangled && self.f_value <= STEERING_BOUND + PHASE_ROUNDOFF,
            Phase::Separable => !entangled && self.f_value <= STEERING_BOUND + PHASE_ROUNDOFF,
        }
    }
}

/// Evaluates one phase-damped Werner state through the generic state route.
pub fn sweep_point(solver: &ViolationSolver, alpha: f64, eta: f64) -> Result<SweepRecord> {
    let report = solver.verdict(&werner_pd(alpha, eta)?)?;
    let concurrence = if report.concurrence < CONCURRENCE_FLOOR { 0.0 } else { report.concurrence };
    Ok(SweepRecord {
        alpha,
        eta,
        f_value: report.f_value,
        concurrence,
        phase: Phase::classify(concurrence, report.steerable),
    })
}

/// `alpha = i/(res-1)` for `i < res` and `eta = j/(res-1)` for `j < res-1`, alpha fastest.
pub fn sweep_grid(res: usize) -> Result<Vec<(f64, f64)>> {
    if res < 2 {
        return domain(format!("grid resolution must be at least 2, got {res}"));
    }
    let step = (res - 1) as f64;
    Ok((0..res - 1)
        .flat_map(|j| (0..res).map(move |i| (i as f64 / step, j as f64 / step)))
        .collect())
}

pub fn sweep_records(res: usize, target_rel_err: f64) -> Result<Vec<SweepRecord>> {
    let solver = ViolationSolver::new(target_rel_err)?;
    sweep_grid(res)?
        .into_par_iter()
        .map(|(alpha, eta)| sweep_point(&solver, alpha, eta))
        .collect()
}

// atanh(s)/s, with its series near zero.
fn atanh_over_s(s: f64) -> f64 {
    if s < 1e-4 {
        1.0 + s * s / 3.0
    } else {
        s.atanh() / s
    }
}

/// Smallest `alpha` at which the damped Werner state becomes steerable:
/// `1 / (1 + (1-eta)/sqrt(eta) ln((1 + sqrt(eta))/sqrt(1-eta)))`.
pub fn steering_boundary(eta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eta) {
        return domain(format!("damping strength {eta} outside [0, 1]"));
    }
    // ln((1+s)/sqrt(1-s^2)) = atanh(s)
    let g = if eta == 1.0 { 0.0 } else { (1.0 - eta) * atanh_over_s(eta.sqrt()) };
    Ok(1.0 / (1.0 + g))
}

/// Smallest `alpha` at which the damped Werner state becomes entangled: `1 / (1 + 2 sqrt(1-eta))`.
pub fn entanglement_boundary(eta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eta) {
        return domain(format!("damping strength {eta} outside [0, 1]"));
    }
    Ok(1.0 / (1.0 + 2.0 * (1.0 - eta).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transition {
    Entanglement,
    Steering,
}

/// Bisects in `alpha` on the sweep's own classification until the bracket is below `tol`.
pub fn bisect_transition(solver: &ViolationSolver, eta: f64, which: Transition, tol: f64) -> Result<f64> {
    let past = |alpha: f64| -> Result<bool> {
        let phase = sweep_point(solver, alpha, eta)?.phase;
        Ok(match which {
            Transition::Entanglement => phase != Phase::Separable,
            Transition::Steering => phase == Phase::Steerable,
        })
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    if past(lo)? || !past(hi)? {
        return domain(format!("no {which:?} transition in alpha for eta = {eta}"));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if past(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Matplotlib script drawing the sweep phases and both analytic boundaries.
pub fn plot_script(csv_name: &str) -> String {
    format!(
        r##"# Phase diagram of phase-damped Werner states.
# Usage: python3 this_script.py  (reads {csv_name} from the same directory)
import csv, math, os
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
rows = list(csv.DictReader(open(os.path.join(here, "{csv_name}"))))
colors = {{"separable": "#bbbbbb", "entangled-unsteerable": "#6a9fd4", "steerable": "#d46a6a"}}
for phase, color in colors.items():
    pts = [(float(r["eta"]), float(r["alpha"])) for r in rows if r["phase"] == phase]
    if pts:
        plt.scatter(*zip(*pts), s=4, c=color, label=phase)

etas = [k / 1000 for k in range(1, 1000)]
steer = [1 / (1 + (1 - e) / math.sqrt(e) * math.log((1 + math.sqrt(e)) / math.sqrt(1 - e))) for e in etas]
ent = [1 / (1 + 2 * math.sqrt(1 - e)) for e in etas]
plt.plot(etas, steer, "k-", label="steering boundary")
plt.plot(etas, ent, "k--", label="entanglement boundary")
plt.xlabel("eta")
plt.ylabel("alpha")
plt.legend(loc="lower right")
plt.savefig(os.path.join(here, "{csv_name}".rsplit(".", 1)[0] + ".png"), dpi=150)
"##
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_points() {
        let solver = ViolationSolver::new(1e-9).unwrap();
        assert_eq!(sweep_point(&solver, 1.0, 0.0).unwrap().phase, Phase::Steerable);
        let p = sweep_point(&solver, 0.4, 0.0).unwrap();
        assert_eq!(p.phase, Phase::EntangledUnsteerable);
        assert!((p.concurrence - 0.1).abs() < 1e-12);
        assert_eq!(sweep_point(&solver, 0.3, 0.0).unwrap().phase, Phase::Separable);
        assert_eq!(sweep_point(&solver, 1.0 / 3.0, 0.0).unwrap().phase, Phase::Separable);
        let edge = sweep_point(&solver, 0.5, 0.0).unwrap();
        assert_eq!(edge.phase, Phase::EntangledUnsteerable);
        assert!(edge.is_consistent());
    }

    #[test]
    fn grid_excludes_full_damping() {
        let g = sweep_grid(5).unwrap();
        assert_eq!(g.len(), 20);
        assert_eq!(g[0], (0.0, 0.0));
        assert_eq!(g[4], (1.0, 0.0));
        assert!(g.iter().all(|&(_, eta)| eta < 1.0));
        assert!(sweep_grid(1).is_err());
    }

    #[test]
    fn boundary_limits() {
        assert!((steering_boundary(0.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(steering_boundary(1.0).unwrap(), 1.0);
        assert!((entanglement_boundary(0.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(entanglement_boundary(1.0).unwrap(), 1.0);
        for eta in [1e-6f64, 0.3, 0.9] {
            let s = eta.sqrt();
            let direct = 1.0 / (1.0 + (1.0 - eta) / s * ((1.0 + s) / (1.0 - eta).sqrt()).ln());
            assert!((steering_boundary(eta).unwrap() - direct).abs() < 1e-12);
        }
        let below = steering_boundary(0.999e-8).unwrap();
        let above = steering_boundary(1.001e-8).unwrap();
        assert!(below < above && above - below < 1e-11);
    }

    #[test]
    fn records_are_consistent() {
        let recs = sweep_records(6, 1e-9).unwrap();
        assert_eq!(recs.len(), 30);
        assert!(recs.iter().all(SweepRecord::is_consistent));
    }

    #[test]
    fn bisection_finds_werner_thresholds() {
        let solver = ViolationSolver::new(1e-9).unwrap();
        let s = bisect_transition(&solver, 0.0, Transition::Steering, 1e-9).unwrap();
        assert!((s - 0.5).abs() < 1e-8);
        let e = bisect_transition(&solver, 0.0, Transition::Entanglement, 1e-9).unwrap();
        assert!((e - 1.0 / 3.0).abs() < 1e-8);
    }
}
