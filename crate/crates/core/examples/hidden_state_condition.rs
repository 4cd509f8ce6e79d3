//! The hidden-state condition on Bob's conditional states.
//!
//! For Alice's setting `r`, Bob's conditional Bloch vector has length
//! `sqrt(<r|T T^T|r>)`. The condition holds for every `r` exactly when
//! `t1 <= 1/2`, and such states always have `F <= t1 <= 1/2`. The converse
//! fails: plenty of states with `t1 > 1/2` still have `F <= 1/2`.

use tsteer::families::{random_bell_diagonal, random_unit_vector, seeded_rng};
use tsteer::quantum_state::conditional_spectrum;
use tsteer::steering::{lhs_condition_holds, max_violation, singular_spectrum};

fn main() -> tsteer::Result<()> {
    let mut rng = seeded_rng(3, 0);
    for k in 0..8 {
        let t = random_bell_diagonal(&mut rng).correlation();
        // every other state is shrunk below t1 = 1/2
        let t = if k % 2 == 1 { t.scaled(0.45 / singular_spectrum(&t).t1) } else { t };
        let spec = singular_spectrum(&t);
        let f = max_violation(&spec, 1e-9)?.f_value;
        let mut holds_everywhere = true;
        for _ in 0..1000 {
            holds_everywhere &= lhs_condition_holds(&t, &random_unit_vector(&mut rng))?;
        }
        let c = conditional_spectrum(&t, &random_unit_vector(&mut rng))?;
        println!(
            "t = ({:.3}, {:.3}, {:.3})  F = {f:.4}  holds on 1000 r: {:<5}  one conditional spectrum: ({:.3}, {:.3})",
            spec.t1, spec.t2, spec.t3, holds_everywhere, c.lambda1, c.lambda2
        );
    }
    Ok(())
}
