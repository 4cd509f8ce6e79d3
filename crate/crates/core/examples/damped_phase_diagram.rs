//! Werner states under phase damping on Bob's qubit.
//!
//! Prints, for a few damping strengths, the entanglement and steering
//! thresholds in `alpha` from the analytic boundary formulas next to the ones
//! found by bisecting the sweep classification, then a coarse text map of the
//! three phases.
//!
//! ```bash
//! cargo run --example damped_phase_diagram
//! ```

use tsteer::cli::{
    bisect_transition, entanglement_boundary, steering_boundary, sweep_records, Phase, Transition,
};
use tsteer::steering::ViolationSolver;

fn main() -> tsteer::Result<()> {
    let solver = ViolationSolver::new(1e-9)?;
    println!("{:>5} {:>12} {:>12} {:>12} {:>12}", "eta", "ent (exact)", "ent (bisect)", "steer (exact)", "steer (bis.)");
    for eta in [0.0, 0.2, 0.5, 0.8, 0.95] {
        let e = bisect_transition(&solver, eta, Transition::Entanglement, 1e-8)?;
        let s = bisect_transition(&solver, eta, Transition::Steering, 1e-8)?;
        println!(
            "{eta:>5.2} {:>12.8} {e:>12.8} {:>12.8} {s:>12.8}",
            entanglement_boundary(eta)?,
            steering_boundary(eta)?
        );
    }

    // rows: alpha from 1 down to 0; columns: eta from 0 to just below 1
    let res = 21;
    let records = sweep_records(res, 1e-9)?;
    println!("\n'#' steerable, '+' entangled but unsteerable, '.' separable");
    for i in (0..res).rev() {
        let row: String = (0..res - 1)
            .map(|j| match records[j * res + i].phase {
                Phase::Steerable => '#',
                Phase::EntangledUnsteerable => '+',
                Phase::Separable => '.',
            })
            .collect();
        println!("{:>5.2} {row}", i as f64 / (res - 1) as f64);
    }
    Ok(())
}
