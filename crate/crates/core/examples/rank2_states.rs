//! Rank-2 T states built from a pure state and its spin flip.
//!
//! Their maximum violation depends only on the concurrence `E` of the pure
//! state and sits on the upper edge of the concurrence band.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tsteer::entanglement::{concurrence_pure, rank2_max_violation};
use tsteer::families::{random_pure_state, rank2_t_state};
use tsteer::steering::steering_verdict;

fn main() -> tsteer::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    println!("{:>10} {:>14} {:>14} {:>10}", "E", "F (state)", "F (formula)", "|diff|");
    for _ in 0..8 {
        let psi = random_pure_state(&mut rng);
        let e = concurrence_pure(&psi)?;
        let report = steering_verdict(&rank2_t_state(&psi)?)?;
        let formula = rank2_max_violation(e)?;
        println!(
            "{e:>10.6} {:>14.10} {formula:>14.10} {:>10.2e}",
            report.f_value,
            (report.f_value - formula).abs()
        );
    }
    println!("\nE -> 0 gives {:.12}, E = 1 gives {:.12}", rank2_max_violation(1e-9)?, rank2_max_violation(1.0)?);
    Ok(())
}
