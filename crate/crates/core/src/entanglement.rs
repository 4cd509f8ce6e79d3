//! Concurrence and the concurrence/violation band.

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use serde::Serialize;

use crate::error::{domain, Result};
use crate::quantum_state::{
    check_normalized, hermitian_eigenvalues, is_t_state, kron, pauli, DensityMatrix, C64,
};
use crate::steering::axial_closed_form;

/// Local Bloch tolerance under which `rho` is treated as spin-flip invariant.
pub const SHORTCUT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConcurrenceMethod {
    TStateShortcut,
    WoottersGeneral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntanglementReport {
    pub concurrence: f64,
    /// Largest eigenvalue of the state.
    pub lambda_max: f64,
    pub method: ConcurrenceMethod,
}

fn sigma_yy() -> Matrix4<C64> {
    kron(&pauli(1), &pauli(1))
}

/// `(sigma_y x sigma_y) rho* (sigma_y x sigma_y)`.
pub fn spin_flip(rho: &Matrix4<C64>) -> Matrix4<C64> {
    let yy = sigma_yy();
    yy * rho.map(|z| z.conj()) * yy
}

/// `(sigma_y x sigma_y) |psi*>`.
pub fn spin_flip_vector(psi: &Vector4<C64>) -> Vector4<C64> {
    sigma_yy() * psi.map(|z| z.conj())
}

fn hermitian_sqrt(m: &Matrix4<C64>) -> Matrix4<C64> {
    let sym = (m + m.adjoint()) * C64::from(0.5);
    let eig = SymmetricEigen::new(sym);
    let root = eig.eigenvalues.map(|l| C64::from(l.max(0.0).sqrt()));
    let v = &eig.eigenvectors;
    v * Matrix4::from_diagonal(&root) * v.adjoint()
}

/// Spin-flip concurrence `max(0, l1 - l2 - l3 - l4)`, where `l_i` are the
/// descending square roots of the eigenvalues of `sqrt(rho) rho~ sqrt(rho)`.
pub fn concurrence_wootters(rho: &DensityMatrix) -> f64 {
    let root = hermitian_sqrt(rho.matrix());
    let product = root * spin_flip(rho.matrix()) * root;
    let l = hermitian_eigenvalues(&product).map(|mu| mu.max(0.0).sqrt());
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

/// Concurrence, using `max(0, 2 lambda_max - 1)` when `rho` is a T state.
pub fn concurrence(rho: &DensityMatrix) -> EntanglementReport {
    let lambda_max = rho.eigenvalues()[0];
    if is_t_state(rho, SHORTCUT_TOL) {
        EntanglementReport {
            concurrence: (2.0 * lambda_max - 1.0).max(0.0),
            lambda_max,
            method: ConcurrenceMethod::TStateShortcut,
        }
    } else {
        EntanglementReport {
            concurrence: concurrence_wootters(rho),
            lambda_max,
            method: ConcurrenceMethod::WoottersGeneral,
        }
    }
}

/// `|<psi|psi~>|` for a normalized pure state.
pub fn concurrence_pure(psi: &Vector4<C64>) -> Result<f64> {
    check_normalized(psi)?;
    Ok(psi.dotc(&spin_flip_vector(psi)).norm())
}

/// Maximum violation of the rank-2 T state with concurrence `e`:
/// `(1 + e^2/sqrt(1-e^2) ln((1 + sqrt(1-e^2))/e)) / 2`.
pub fn rank2_max_violation(e: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&e) {
        return domain(format!("concurrence {e} outside [0, 1]"));
    }
    axial_closed_form(e, 1.0)
}

/// Lower and upper bounds on `F` for T states of concurrence `e`.
///
/// Entangled states satisfy `(1 + 2e)/3 <= F <= rank2_max_violation(e)`;
/// at `e = 0` the band is `[0, 1/2]`.
pub fn ef_band(e: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&e) {
        return domain(format!("concurrence {e} outside [0, 1]"));
    }
    if e == 0.0 {
        return Ok((0.0, 0.5));
    }
    Ok(((1.0 + 2.0 * e) / 3.0, rank2_max_violation(e)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum_state::{mix_with_white_noise, CorrelationMatrix};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn bell_vector() -> Vector4<C64> {
        Vector4::new(FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2).map(C64::from)
    }

    fn werner(alpha: f64) -> DensityMatrix {
        mix_with_white_noise(&DensityMatrix::pure(&bell_vector()).unwrap(), alpha).unwrap()
    }

    #[test]
    fn werner_concurrence() {
        let r = concurrence(&werner(1.0));
        assert_eq!(r.method, ConcurrenceMethod::TStateShortcut);
        assert!((r.concurrence - 1.0).abs() < 1e-14);
        assert!((concurrence(&werner(0.6)).concurrence - 0.4).abs() < 1e-14);
        assert_eq!(concurrence(&DensityMatrix::maximally_mixed()).concurrence, 0.0);
        assert!((concurrence_wootters(&werner(0.6)) - 0.4).abs() < 1e-8);
        assert!((concurrence_wootters(&werner(1.0)) - 1.0).abs() < 1e-7);
    }

    #[test]
    fn werner_pd_concurrence() {
        let (alpha, eta) = (0.8f64, 0.36f64);
        let a = alpha * (1.0 - eta).sqrt();
        let rho = DensityMatrix::from_correlation(&CorrelationMatrix::diagonal(a, -a, alpha)).unwrap();
        assert!((concurrence(&rho).concurrence - 0.54).abs() < 1e-14);
    }

    #[test]
    fn product_state_uses_general_route() {
        let ket = Vector4::new(1.0, 0.0, 0.0, 0.0).map(C64::from);
        let r = concurrence(&DensityMatrix::pure(&ket).unwrap());
        assert_eq!(r.method, ConcurrenceMethod::WoottersGeneral);
        assert!(r.concurrence < 1e-8);
    }

    #[test]
    fn pure_concurrence() {
        assert!((concurrence_pure(&bell_vector()).unwrap() - 1.0).abs() < 1e-15);
        let ket = Vector4::new(1.0, 0.0, 0.0, 0.0).map(C64::from);
        assert_eq!(concurrence_pure(&ket).unwrap(), 0.0);
        let t = std::f64::consts::PI / 8.0;
        let psi = Vector4::new(t.cos(), 0.0, 0.0, t.sin()).map(C64::from);
        assert!((concurrence_pure(&psi).unwrap() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(concurrence_pure(&(psi * C64::from(2.0))).is_err());
    }

    #[test]
    fn band_edges() {
        assert_eq!(ef_band(1.0).unwrap(), (1.0, 1.0));
        assert!((ef_band(0.25).unwrap().0 - 0.5).abs() < 1e-15);
        assert!((ef_band(1e-12).unwrap().1 - 0.5).abs() < 1e-9);
        assert_eq!(ef_band(0.0).unwrap(), (0.0, 0.5));
        assert!(ef_band(1.1).is_err());
        assert!(ef_band(-0.1).is_err());
    }

    #[test]
    fn band_matches_direct_formula() {
        for e in [0.1f64, 0.5, 0.9] {
            let k = (1.0 - e * e).sqrt();
            let direct = 0.5 * (1.0 + e * e / k * ((1.0 + k) / e).ln());
            assert!((rank2_max_violation(e).unwrap() - direct).abs() < 1e-15);
        }
    }
}
