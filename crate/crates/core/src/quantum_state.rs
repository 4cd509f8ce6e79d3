//! Two-qubit density matrices, Pauli algebra, and the correlation-matrix view.
//!
//! Basis ordering is fixed as `|00>, |01>, |10>, |11>` with Alice on the left
//! tensor factor, and Pauli indices run over `(x, y, z)`.

use nalgebra::{Complex, Matrix2, Matrix3, Matrix4, SymmetricEigen, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

pub type C64 = Complex<f64>;

/// Hermiticity tolerance, also used for the unit-trace check.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted as positive semidefinite.
pub const PSD_TOL: f64 = -1e-10;
/// Tolerance on `U U^dagger = 1` for local unitaries.
pub const UNITARY_TOL: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Pauli matrix for axis `k` in `0..3` (x, y, z).
pub fn pauli(k: usize) -> Matrix2<C64> {
    match k {
        0 => Matrix2::new(ZERO, ONE, ONE, ZERO),
        1 => Matrix2::new(ZERO, -I, I, ZERO),
        2 => Matrix2::new(ONE, ZERO, ZERO, -ONE),
        _ => panic!("pauli index {k} out of range"),
    }
}

/// `r . sigma` for a real 3-vector.
pub fn bloch_operator(r: &Vector3<f64>) -> Matrix2<C64> {
    (0..3).fold(Matrix2::zeros(), |acc, k| acc + pauli(k) * C64::from(r[k]))
}

pub fn kron(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Matrix4<C64> {
    Matrix4::from_fn(|i, j| a[(i / 2, j / 2)] * b[(i % 2, j % 2)])
}

fn max_abs(m: &Matrix4<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian 4x4 matrix, sorted descending.
pub(crate) fn hermitian_eigenvalues(m: &Matrix4<C64>) -> [f64; 4] {
    let sym = (m + m.adjoint()) * C64::from(0.5);
    let mut ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    [ev[0], ev[1], ev[2], ev[3]]
}

/// Reports every violated density-matrix invariant with its measured residual.
///
/// An empty list means the matrix is Hermitian, has unit trace and is
/// positive semidefinite within the module tolerances.
pub fn validate(m: &Matrix4<C64>) -> Vec<String> {
    let mut violations = Vec::new();
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        violations.push("non-finite entry".to_string());
        return violations;
    }
    let herm = max_abs(&(m - m.adjoint()));
    if herm > HERMITIAN_TOL {
        violations.push(format!("non-Hermitian residual {herm:?}"));
    }
    let tr = m.trace();
    let trace_residual = (tr - ONE).norm();
    if trace_residual > HERMITIAN_TOL {
        violations.push(format!("trace residual {trace_residual:?}"));
    }
    let min_ev = hermitian_eigenvalues(m)[3];
    if min_ev < PSD_TOL {
        violations.push(format!("negative eigenvalue {min_ev:?}"));
    }
    violations
}

/// A validated two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(Matrix4<C64>);

impl DensityMatrix {
    pub fn new(m: Matrix4<C64>) -> Result<Self> {
        let violations = validate(&m);
        if violations.is_empty() {
            Ok(Self(m))
        } else {
            Err(Error::InvalidState(violations))
        }
    }

    pub fn maximally_mixed() -> Self {
        Self(Matrix4::identity() * C64::from(0.25))
    }

    /// Projector onto a normalized pure state.
    pub fn pure(psi: &Vector4<C64>) -> Result<Self> {
        check_normalized(psi)?;
        Self::new(psi * psi.adjoint())
    }

    /// `(1 + a.sigma x 1 + 1 x b.sigma + sum_mn T_mn sigma_m x sigma_n) / 4`.
    pub fn from_pauli_components(
        a: &Vector3<f64>,
        b: &Vector3<f64>,
        t: &Matrix3<f64>,
    ) -> Result<Self> {
        let id = Matrix2::<C64>::identity();
        let mut m = Matrix4::<C64>::identity();
        for k in 0..3 {
            m += kron(&pauli(k), &id) * C64::from(a[k]);
            m += kron(&id, &pauli(k)) * C64::from(b[k]);
            for l in 0..3 {
                m += kron(&pauli(k), &pauli(l)) * C64::from(t[(k, l)]);
            }
        }
        Self::new(m * C64::from(0.25))
    }

    /// General T state built from a full correlation matrix, zero local vectors.
    pub fn from_correlation(t: &CorrelationMatrix) -> Result<Self> {
        Self::from_pauli_components(&Vector3::zeros(), &Vector3::zeros(), t.matrix())
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix4<C64> {
        self.0
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> [f64; 4] {
        hermitian_eigenvalues(&self.0)
    }

    fn expectation(&self, op: &Matrix4<C64>) -> f64 {
        (self.0 * op).trace().re
    }
}

pub(crate) fn check_normalized(psi: &Vector4<C64>) -> Result<()> {
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return domain(format!("state vector norm {norm} is not 1"));
    }
    Ok(())
}

/// Two-sided Pauli expectation values `T_mn = Tr[rho (sigma_m x sigma_n)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[[f64; 3]; 3]", into = "[[f64; 3]; 3]")]
pub struct CorrelationMatrix(Matrix3<f64>);

impl CorrelationMatrix {
    pub fn new(t: Matrix3<f64>) -> Self {
        Self(t)
    }

    pub fn diagonal(c1: f64, c2: f64, c3: f64) -> Self {
        Self(Matrix3::from_diagonal(&Vector3::new(c1, c2, c3)))
    }

    pub fn zero() -> Self {
        Self(Matrix3::zeros())
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn scaled(&self, gamma: f64) -> Self {
        Self(self.0 * gamma)
    }

    /// `<r| T T^T |r>`, the squared length of Bob's conditional Bloch vector.
    pub fn conditional_radicand(&self, r: &Vector3<f64>) -> f64 {
        (self.0.transpose() * r).norm_squared()
    }

    /// `<v| T^T T |v>`, the integrand radicand of the steering functional.
    pub fn steering_radicand(&self, v: &Vector3<f64>) -> f64 {
        (self.0 * v).norm_squared()
    }
}

impl From<[[f64; 3]; 3]> for CorrelationMatrix {
    fn from(rows: [[f64; 3]; 3]) -> Self {
        Self(Matrix3::from_fn(|i, j| rows[i][j]))
    }
}

impl From<CorrelationMatrix> for [[f64; 3]; 3] {
    fn from(t: CorrelationMatrix) -> Self {
        let m = t.0;
        [
            [m[(0, 0)], m[(0, 1)], m[(0, 2)]],
            [m[(1, 0)], m[(1, 1)], m[(1, 2)]],
            [m[(2, 0)], m[(2, 1)], m[(2, 2)]],
        ]
    }
}

pub fn correlation_matrix(rho: &DensityMatrix) -> CorrelationMatrix {
    CorrelationMatrix(Matrix3::from_fn(|m, n| {
        rho.expectation(&kron(&pauli(m), &pauli(n)))
    }))
}

/// Local Bloch vectors of Alice (`a`) and Bob (`b`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochPair {
    pub a: Vector3<f64>,
    pub b: Vector3<f64>,
}

pub fn local_bloch(rho: &DensityMatrix) -> BlochPair {
    let id = Matrix2::identity();
    BlochPair {
        a: Vector3::from_fn(|k, _| rho.expectation(&kron(&pauli(k), &id))),
        b: Vector3::from_fn(|k, _| rho.expectation(&kron(&id, &pauli(k)))),
    }
}

/// Largest local Bloch component, `max(|a|_inf, |b|_inf)`.
pub fn local_bloch_magnitude(rho: &DensityMatrix) -> f64 {
    let BlochPair { a, b } = local_bloch(rho);
    a.amax().max(b.amax())
}

pub fn is_t_state(rho: &DensityMatrix, tol: f64) -> bool {
    local_bloch_magnitude(rho) <= tol
}

/// `gamma rho + (1 - gamma) 1/4`.
pub fn mix_with_white_noise(rho: &DensityMatrix, gamma: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&gamma) {
        return domain(format!("noise mixing weight {gamma} outside [0, 1]"));
    }
    let m = rho.0 * C64::from(gamma) + Matrix4::identity() * C64::from((1.0 - gamma) / 4.0);
    DensityMatrix::new(m)
}

fn check_unitary(u: &Matrix2<C64>, side: &str) -> Result<()> {
    let residual = (u * u.adjoint() - Matrix2::identity())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if residual > UNITARY_TOL {
        return domain(format!("{side} operator is not unitary (residual {residual:e})"));
    }
    Ok(())
}

/// `(U_A x U_B) rho (U_A x U_B)^dagger`.
pub fn apply_local_unitary(
    rho: &DensityMatrix,
    ua: &Matrix2<C64>,
    ub: &Matrix2<C64>,
) -> Result<DensityMatrix> {
    check_unitary(ua, "Alice's")?;
    check_unitary(ub, "Bob's")?;
    let u = kron(ua, ub);
    DensityMatrix::new(u * rho.0 * u.adjoint())
}

/// Adjoint-representation rotation `R_kl = Tr(sigma_k U sigma_l U^dagger) / 2`.
pub fn rotation_from_unitary(u: &Matrix2<C64>) -> Matrix3<f64> {
    Matrix3::from_fn(|k, l| 0.5 * (pauli(k) * u * pauli(l) * u.adjoint()).trace().re)
}

/// Phase damping of strength `eta` on Bob's qubit.
///
/// Kraus operators `K0 = |0><0| + sqrt(1-eta)|1><1|` and `K1 = sqrt(eta)|1><1|`
/// act on the right tensor factor; transverse correlations pick up `sqrt(1-eta)`.
pub fn phase_damp(rho: &DensityMatrix, eta: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&eta) {
        return domain(format!("damping strength {eta} outside [0, 1]"));
    }
    let id = Matrix2::identity();
    let k0 = Matrix2::new(ONE, ZERO, ZERO, C64::from((1.0 - eta).sqrt()));
    let k1 = Matrix2::new(ZERO, ZERO, ZERO, C64::from(eta.sqrt()));
    let m = [k0, k1].iter().fold(Matrix4::zeros(), |acc, k| {
        let big = kron(&id, k);
        acc + big * rho.0 * big.adjoint()
    });
    DensityMatrix::new(m)
}

/// Eigenvalues of Bob's normalized conditional state, `lambda1 >= lambda2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionalStateSpectrum {
    pub lambda1: f64,
    pub lambda2: f64,
}

pub(crate) fn check_unit(r: &Vector3<f64>, tol: f64) -> Result<()> {
    let n = r.norm();
    if !n.is_finite() || (n - 1.0).abs() > tol {
        return domain(format!("direction has norm {n}, expected a unit vector"));
    }
    Ok(())
}

/// Spectrum of Bob's state after Alice measures `r . sigma`, for a T state with correlations `t`.
pub fn conditional_spectrum(t: &CorrelationMatrix, r: &Vector3<f64>) -> Result<ConditionalStateSpectrum> {
    check_unit(r, 1e-10)?;
    let s = t.conditional_radicand(r).max(0.0).sqrt().min(1.0);
    let lambda1 = 0.5 * (1.0 + s);
    Ok(ConditionalStateSpectrum {
        lambda1,
        lambda2: 1.0 - lambda1,
    })
}
