//! State families: Werner, phase-damped Werner, Bell-diagonal, rank-2 T states,
//! and seeded random T and separable T states.
//!
//! Every sampler takes the random generator explicitly. Bulk code derives one
//! [`seeded_rng`] stream per shard so results do not depend on scheduling.

use nalgebra::{Matrix2, Matrix3, Matrix4, Vector3, Vector4};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::Serialize;

use crate::entanglement::spin_flip_vector;
use crate::error::{domain, Error, Result};
use crate::quantum_state::{
    apply_local_unitary, bloch_operator, check_normalized, mix_with_white_noise, phase_damp,
    CorrelationMatrix, DensityMatrix, C64,
};

/// Identifier of the generator behind every seeded sampler, recorded in outputs.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.9), seed_from_u64(seed), stream = shard index";

/// Generator for `(seed, stream)`; distinct streams are independent.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `(|00> + |11>) / sqrt(2)`.
pub fn bell_vector() -> Vector4<C64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Vector4::new(s, 0.0, 0.0, s).map(C64::from)
}

pub fn bell_state() -> DensityMatrix {
    DensityMatrix::pure(&bell_vector()).expect("Bell vector is normalized")
}

/// `alpha |phi_B><phi_B| + (1 - alpha) 1/4`, valid for `-1/3 <= alpha <= 1`.
pub fn werner(alpha: f64) -> Result<DensityMatrix> {
    if !(-1.0 / 3.0..=1.0).contains(&alpha) {
        return domain(format!("Werner weight {alpha} outside [-1/3, 1]"));
    }
    if alpha >= 0.0 {
        return mix_with_white_noise(&bell_state(), alpha);
    }
    BellDiagonalParams::new(alpha, -alpha, alpha).and_then(|p| bell_diagonal_from_t(&p))
}

/// Werner state sent through phase damping of strength `eta` on Bob's qubit.
///
/// Its correlation matrix is `diag(alpha sqrt(1-eta), -alpha sqrt(1-eta), alpha)`.
pub fn werner_pd(alpha: f64, eta: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&eta) {
        return domain(format!("damping strength {eta} outside [0, 1]"));
    }
    phase_damp(&werner(alpha)?, eta)
}

/// Diagonal of a Bell-diagonal correlation matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BellDiagonalParams {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

/// Bell-basis weights below this count as negative.
pub const WEIGHT_TOL: f64 = -1e-12;

impl BellDiagonalParams {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        let p = Self { c1, c2, c3 };
        let w = p.weights();
        if w.iter().any(|x| !(*x >= WEIGHT_TOL)) {
            return Err(Error::InvalidState(vec![format!(
                "Bell-diagonal weights {w:?} are not a probability vector"
            )]));
        }
        Ok(p)
    }

    /// The four Bell-basis weights (eigenvalues of the state).
    pub fn weights(&self) -> [f64; 4] {
        let Self { c1, c2, c3 } = *self;
        [
            (1.0 - c1 - c2 - c3) / 4.0,
            (1.0 - c1 + c2 + c3) / 4.0,
            (1.0 + c1 - c2 + c3) / 4.0,
            (1.0 + c1 + c2 - c3) / 4.0,
        ]
    }

    pub fn correlation(&self) -> CorrelationMatrix {
        CorrelationMatrix::diagonal(self.c1, self.c2, self.c3)
    }
}

/// `(1 + sum_m c_m sigma_m x sigma_m) / 4`.
pub fn bell_diagonal_from_t(params: &BellDiagonalParams) -> Result<DensityMatrix> {
    DensityMatrix::from_correlation(&params.correlation())
}

/// `(|psi><psi| + |psi~><psi~|) / 2` with the spin-flipped `psi~`.
pub fn rank2_t_state(psi: &Vector4<C64>) -> Result<DensityMatrix> {
    check_normalized(psi)?;
    let flipped = spin_flip_vector(psi);
    let m = (psi * psi.adjoint() + flipped * flipped.adjoint()) * C64::from(0.5);
    DensityMatrix::new(m)
}

/// Uniform sample from the Bell-diagonal tetrahedron by rejection from `[-1, 1]^3`.
pub fn random_bell_diagonal<R: Rng + ?Sized>(rng: &mut R) -> BellDiagonalParams {
    loop {
        let c = [(); 3].map(|_| rng.random_range(-1.0..=1.0));
        if let Ok(p) = BellDiagonalParams::new(c[0], c[1], c[2]) {
            if p.weights().iter().all(|w| *w >= 0.0) {
                return p;
            }
        }
    }
}

pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
        let n = v.norm();
        if n > 1e-12 {
            return v / n;
        }
    }
}

/// Haar-random pure two-qubit state.
pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R) -> Vector4<C64> {
    loop {
        let v = Vector4::from_fn(|_, _| {
            C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let n = v.norm();
        if n > 1e-12 {
            return v / C64::from(n);
        }
    }
}

/// Haar-random element of SU(2) from a uniform unit quaternion.
pub fn random_local_unitary<R: Rng + ?Sized>(rng: &mut R) -> Matrix2<C64> {
    let q = loop {
        let q = Vector4::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
        if q.norm() > 1e-12 {
            break q.normalize();
        }
    };
    let (a, b) = (C64::new(q[0], q[1]), C64::new(q[2], q[3]));
    Matrix2::new(a, -b.conj(), b, a.conj())
}

/// Random Bell-diagonal state rotated by random local unitaries.
pub fn random_t_state<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let params = random_bell_diagonal(rng);
    let rho = bell_diagonal_from_t(&params).expect("sampled inside the tetrahedron");
    let (ua, ub) = (random_local_unitary(rng), random_local_unitary(rng));
    apply_local_unitary(&rho, &ua, &ub).expect("sampled unitaries are unitary")
}

/// One product-state term `p (1 + a.sigma)/2 x (1 + b.sigma)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeparableTerm {
    pub p: f64,
    pub a: Vector3<f64>,
    pub b: Vector3<f64>,
}

/// Mixture of pure product states whose local Bloch vectors cancel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparableMixture {
    terms: Vec<SeparableTerm>,
}

impl SeparableMixture {
    /// Pairs each `(p, a, b)` with `(p/2, -a, -b)` after halving `p`.
    ///
    /// Weights must sum to one and directions must be unit vectors.
    pub fn symmetrized(terms: &[(f64, Vector3<f64>, Vector3<f64>)]) -> Result<Self> {
        if terms.is_empty() {
            return domain("a separable mixture needs at least one term");
        }
        let total: f64 = terms.iter().map(|t| t.0).sum();
        if (total - 1.0).abs() > 1e-12 || terms.iter().any(|t| !(t.0 >= 0.0)) {
            return domain(format!("mixture weights must be non-negative and sum to 1, got {total}"));
        }
        let mut out = Vec::with_capacity(2 * terms.len());
        for &(p, a, b) in terms {
            if (a.norm() - 1.0).abs() > 1e-10 || (b.norm() - 1.0).abs() > 1e-10 {
                return domain("mixture directions must be unit vectors");
            }
            out.push(SeparableTerm { p: p / 2.0, a, b });
            out.push(SeparableTerm { p: p / 2.0, a: -a, b: -b });
        }
        Ok(Self { terms: out })
    }

    pub fn terms(&self) -> &[SeparableTerm] {
        &self.terms
    }

    /// `sum_i p_i |a_i><b_i|`.
    pub fn correlation(&self) -> CorrelationMatrix {
        CorrelationMatrix::new(
            self.terms
                .iter()
                .fold(Matrix3::zeros(), |acc, t| acc + t.a * t.b.transpose() * t.p),
        )
    }

    pub fn density(&self) -> Result<DensityMatrix> {
        let half = C64::from(0.5);
        let local = |v: &Vector3<f64>| (Matrix2::identity() + bloch_operator(v)) * half;
        let mut m = Matrix4::<C64>::zeros();
        // antipodal partners are adjacent, so each pair is summed before accumulating
        for pair in self.terms.chunks(2) {
            let pair_sum = pair.iter().fold(Matrix4::zeros(), |acc, t| {
                acc + crate::quantum_state::kron(&local(&t.a), &local(&t.b)) * C64::from(t.p)
            });
            m += pair_sum;
        }
        DensityMatrix::new(m)
    }
}

/// Random separable T state with `n_terms` Dirichlet-weighted product terms,
/// each symmetrized with its antipodal partner.
pub fn random_separable_t<R: Rng + ?Sized>(
    n_terms: usize,
    rng: &mut R,
) -> Result<(SeparableMixture, DensityMatrix)> {
    if n_terms == 0 {
        return domain("n_terms must be at least 1");
    }
    let raw: Vec<f64> = (0..n_terms).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    let mut terms: Vec<_> = raw
        .iter()
        .map(|w| (w / total, random_unit_vector(rng), random_unit_vector(rng)))
        .collect();
    // absorb rounding so the weights sum to one
    let drift = 1.0 - terms.iter().map(|t| t.0).sum::<f64>();
    terms[0].0 += drift;
    let mixture = SeparableMixture::symmetrized(&terms)?;
    let rho = mixture.density()?;
    Ok((mixture, rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum_state::{correlation_matrix, is_t_state, local_bloch_magnitude, validate};
    use crate::steering::singular_spectrum;

    fn max_abs_diff(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
        (a.matrix() - b.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn werner_endpoints() {
        assert!(max_abs_diff(&werner(1.0).unwrap(), &bell_state()) < 1e-15);
        assert!(max_abs_diff(&werner(0.0).unwrap(), &DensityMatrix::maximally_mixed()) < 1e-15);
        let t = correlation_matrix(&werner(-1.0 / 3.0).unwrap());
        assert!((t.matrix()[(1, 1)] - 1.0 / 3.0).abs() < 1e-15);
        assert!(werner(1.01).is_err());
        assert!(werner(-0.34).is_err());
    }

    #[test]
    fn werner_pd_correlations() {
        let (alpha, eta) = (0.8f64, 0.36f64);
        let t = correlation_matrix(&werner_pd(alpha, eta).unwrap());
        let a = alpha * (1.0 - eta).sqrt();
        assert!((t.matrix() - CorrelationMatrix::diagonal(a, -a, alpha).matrix()).amax() < 1e-12);
        assert!(max_abs_diff(&werner_pd(0.7, 0.0).unwrap(), &werner(0.7).unwrap()) < 1e-15);
        let t = correlation_matrix(&werner_pd(1.0, 1.0).unwrap());
        assert!((t.matrix() - CorrelationMatrix::diagonal(0.0, 0.0, 1.0).matrix()).amax() < 1e-12);
        assert!(werner_pd(0.5, 1.5).is_err());
    }

    #[test]
    fn bell_diagonal_examples() {
        let p = BellDiagonalParams::new(1.0, -1.0, 1.0).unwrap();
        assert_eq!(p.weights(), [0.0, 0.0, 1.0, 0.0]);
        assert!(max_abs_diff(&bell_diagonal_from_t(&p).unwrap(), &bell_state()) < 1e-15);
        let zero = bell_diagonal_from_t(&BellDiagonalParams::new(0.0, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!(zero, DensityMatrix::maximally_mixed());
        let half = bell_diagonal_from_t(&BellDiagonalParams::new(0.5, -0.5, 0.5).unwrap()).unwrap();
        assert!(max_abs_diff(&half, &werner(0.5).unwrap()) < 1e-15);
        assert!(matches!(
            BellDiagonalParams::new(1.0, 1.0, 1.0),
            Err(Error::InvalidState(_))
        ));
    }

    #[test]
    fn rank2_examples() {
        let rho = rank2_t_state(&bell_vector()).unwrap();
        assert!(max_abs_diff(&rho, &bell_state()) < 1e-15);
        let ket = Vector4::new(1.0, 0.0, 0.0, 0.0).map(C64::from);
        let s = singular_spectrum(&correlation_matrix(&rank2_t_state(&ket).unwrap()));
        assert!((s.t1 - 1.0).abs() < 1e-15 && s.t2.abs() < 1e-15 && s.t3.abs() < 1e-15);
        assert!(rank2_t_state(&(ket * C64::from(1.1))).is_err());
    }

    #[test]
    fn samplers_are_seed_deterministic() {
        let a: Vec<_> = (0..5).map({
            let mut r = seeded_rng(3, 0);
            move |_| random_bell_diagonal(&mut r)
        }).collect();
        let b: Vec<_> = (0..5).map({
            let mut r = seeded_rng(3, 0);
            move |_| random_bell_diagonal(&mut r)
        }).collect();
        assert_eq!(a, b);
        let c = random_bell_diagonal(&mut seeded_rng(3, 1));
        assert_ne!(a[0], c);
    }

    #[test]
    fn rejection_acceptance_rate_is_one_third() {
        // Tetrahedron volume 8/3 over cube volume 8.
        let mut rng = seeded_rng(11, 0);
        let trials = 200_000;
        let accepted = (0..trials)
            .filter(|_| {
                let c = [(); 3].map(|_| rng.random_range(-1.0..=1.0));
                BellDiagonalParams::new(c[0], c[1], c[2]).is_ok()
            })
            .count();
        let rate = accepted as f64 / trials as f64;
        assert!((rate - 1.0 / 3.0).abs() < 0.005, "rate {rate}");
    }

    #[test]
    fn random_t_states_are_t_states() {
        let mut rng = seeded_rng(5, 0);
        for _ in 0..50 {
            let rho = random_t_state(&mut rng);
            assert!(validate(rho.matrix()).is_empty());
            assert!(is_t_state(&rho, 1e-12));
        }
    }

    #[test]
    fn single_dyad_separable() {
        let z = Vector3::z();
        let m = SeparableMixture::symmetrized(&[(1.0, z, z)]).unwrap();
        let t = correlation_matrix(&m.density().unwrap());
        assert!((t.matrix() - CorrelationMatrix::diagonal(0.0, 0.0, 1.0).matrix()).amax() < 1e-15);
        assert!((m.correlation().matrix() - t.matrix()).amax() < 1e-15);
    }

    #[test]
    fn random_separable_outputs_are_t_states() {
        let mut rng = seeded_rng(9, 0);
        for n in 1..=6 {
            let (mix, rho) = random_separable_t(n, &mut rng).unwrap();
            assert_eq!(mix.terms().len(), 2 * n);
            assert!(local_bloch_magnitude(&rho) < 1e-12);
            assert!((mix.correlation().matrix() - correlation_matrix(&rho).matrix()).amax() < 1e-12);
        }
        assert!(random_separable_t(0, &mut rng).is_err());
    }
}
