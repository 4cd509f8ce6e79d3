//! Random separable T states never exceed the bound 1/2.
//!
//! Each mixture pairs every product term with its antipodal partner so the
//! local Bloch vectors cancel. Mixtures concentrated on one axis come
//! closest: `T = diag(0, 0, b)` gives exactly `b/2`.

use tsteer::families::{random_separable_t, seeded_rng};
use tsteer::steering::{max_violation, singular_spectrum, SingularSpectrum};

fn main() -> tsteer::Result<()> {
    let mut rng = seeded_rng(5, 0);
    let mut worst: f64 = 0.0;
    for n_terms in 1..=6 {
        let mut largest: f64 = 0.0;
        for _ in 0..500 {
            let (mixture, _) = random_separable_t(n_terms, &mut rng)?;
            let f = max_violation(&singular_spectrum(&mixture.correlation()), 1e-7)?.f_value;
            largest = largest.max(f);
        }
        worst = worst.max(largest);
        println!("n_terms = {n_terms}: largest F over 500 mixtures = {largest:.9}");
    }
    println!("overall largest F = {worst:.9} (bound 0.5)");

    for b in [0.25, 0.5, 1.0] {
        let f = max_violation(&SingularSpectrum::new([0.0, 0.0, b])?, 1e-9)?.f_value;
        println!("T = diag(0, 0, {b}): F = {f:.12}");
    }
    Ok(())
}
