//! Werner states: the maximum violation equals the mixing weight, so the
//! state is steerable exactly when `alpha > 1/2`.
//!
//! ```bash
//! cargo run --example werner_steering
//! ```

use tsteer::families::werner;
use tsteer::steering::{max_violation_quadrature, singular_spectrum, steering_verdict};
use tsteer::quantum_state::correlation_matrix;

fn main() -> tsteer::Result<()> {
    println!("{:>6} {:>10} {:>12} {:>10} {:>10}", "alpha", "F", "F (quad)", "E", "steerable");
    for alpha in [0.2, 0.4, 0.5, 0.51, 0.7, 1.0] {
        let rho = werner(alpha)?;
        let report = steering_verdict(&rho)?;
        // force the sphere integral even though the spectrum is isotropic
        let quad = max_violation_quadrature(&singular_spectrum(&correlation_matrix(&rho)), 1e-10)?;
        println!(
            "{alpha:>6.2} {:>10.6} {:>12.9} {:>10.4} {:>10}",
            report.f_value, quad.f_value, report.concurrence, report.steerable
        );
    }
    Ok(())
}
