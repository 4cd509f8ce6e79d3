//! Local unitaries rotate the correlation matrix, `T -> R_A T R_B^T`, and
//! leave its singular values, and hence `F`, unchanged.

use tsteer::families::{random_local_unitary, random_t_state, seeded_rng};
use tsteer::quantum_state::{apply_local_unitary, correlation_matrix, rotation_from_unitary};
use tsteer::steering::{singular_spectrum, steering_verdict};

fn main() -> tsteer::Result<()> {
    let mut rng = seeded_rng(11, 0);
    let rho = random_t_state(&mut rng);
    let before = steering_verdict(&rho)?;
    println!("T =\n{}", correlation_matrix(&rho).matrix());
    println!("spectrum {:?}, F = {:.12}", singular_spectrum(&correlation_matrix(&rho)).as_array(), before.f_value);

    for _ in 0..4 {
        let (ua, ub) = (random_local_unitary(&mut rng), random_local_unitary(&mut rng));
        let rotated = apply_local_unitary(&rho, &ua, &ub)?;
        let t = correlation_matrix(&rotated);
        let expected = rotation_from_unitary(&ua) * correlation_matrix(&rho).matrix() * rotation_from_unitary(&ub).transpose();
        let after = steering_verdict(&rotated)?;
        println!(
            "rotated: |T - R_A T R_B^T| = {:.1e}, F = {:.12}, |dF| = {:.1e}",
            (t.matrix() - expected).norm(),
            after.f_value,
            (after.f_value - before.f_value).abs()
        );
    }
    Ok(())
}
