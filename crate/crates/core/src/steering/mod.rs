//! The maximum-violation functional `F` and the steerability verdict for T states.
//!
//! `F` is the spherical average of `sqrt(<v|T^T T|v>)`. It depends only on the
//! singular values of `T`, so every evaluation starts from a
//! [`SingularSpectrum`]. A T state is steerable from Alice to Bob exactly when
//! `F > 1/2`.

mod finite;

pub use finite::{
    catalog, finite_bound, infinite_bound, sign_construction_operator, steering_parameter_finite,
    MeasurementGeometry, MAX_EXHAUSTIVE_SETTINGS,
};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::entanglement;
use crate::error::{domain, Error, Result};
use crate::quadrature::{self, GridLadder, QuadratureResult, FOUR_PI};
use crate::quantum_state::{
    check_unit, conditional_spectrum, correlation_matrix, local_bloch_magnitude, CorrelationMatrix,
    DensityMatrix,
};

/// The infinite-measurement bound on `F` for states admitting a hidden-state model.
pub const STEERING_BOUND: f64 = 0.5;
/// Default relative accuracy for single analyses.
pub const DEFAULT_TARGET_REL_ERR: f64 = 1e-9;
/// Local Bloch vectors larger than this reject a state as non-T.
pub const T_STATE_TOL: f64 = 1e-8;
/// Singular values closer than this are treated as equal when dispatching.
const EQUAL_TOL: f64 = 1e-12;
/// Rounding from the SVD and the state algebra, in units of `f64::EPSILON * F`.
const ROUNDOFF_ULPS: f64 = 16.0;

fn roundoff(f_value: f64) -> f64 {
    ROUNDOFF_ULPS * f64::EPSILON * f_value.max(STEERING_BOUND)
}

/// Singular values of a correlation matrix, sorted descending.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularSpectrum {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
}

impl SingularSpectrum {
    /// Sorts the absolute values of `values` into a spectrum.
    pub fn new(values: [f64; 3]) -> Result<Self> {
        if values.iter().any(|x| !x.is_finite()) {
            return domain("singular values must be finite");
        }
        let mut v = values.map(f64::abs);
        v.sort_by(|a, b| b.total_cmp(a));
        Ok(Self {
            t1: v[0],
            t2: v[1],
            t3: v[2],
        })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.t1, self.t2, self.t3]
    }

    pub fn scaled(&self, gamma: f64) -> Self {
        Self {
            t1: self.t1 * gamma.abs(),
            t2: self.t2 * gamma.abs(),
            t3: self.t3 * gamma.abs(),
        }
    }
}

pub fn singular_spectrum(t: &CorrelationMatrix) -> SingularSpectrum {
    let sv = t.matrix().singular_values();
    SingularSpectrum::new([sv[0], sv[1], sv[2]]).expect("SVD of a finite matrix is finite")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationMethod {
    Isotropic,
    ClosedFormAxial,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub f_value: f64,
    pub method: ViolationMethod,
    pub estimated_error: f64,
}

// asinh(x)/x and asin(x)/x, with series near zero.
fn asinh_over_x(x: f64) -> f64 {
    if x < 1e-3 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + 3.0 * x2 * x2 / 40.0
    } else {
        x.asinh() / x
    }
}

fn asin_over_x(x: f64) -> f64 {
    if x < 1e-3 {
        let x2 = x * x;
        1.0 + x2 / 6.0 + 3.0 * x2 * x2 / 40.0
    } else {
        x.min(1.0).asin() / x
    }
}

/// `F` for a spectrum `(a, a, c)` in any order.
///
/// For `c > a` this is `(c + a^2/k ln((c + k)/a)) / 2` with `k = sqrt(c^2 - a^2)`;
/// for `c < a` the logarithm becomes `arcsin(k/a)` with `k = sqrt(a^2 - c^2)`.
/// Both reduce to `a` at `c = a` and to `c/2` as `a -> 0`.
pub fn axial_closed_form(a: f64, c: f64) -> Result<f64> {
    if !(a >= 0.0 && c >= 0.0) || !a.is_finite() || !c.is_finite() {
        return domain(format!("axial spectrum needs non-negative finite values, got a={a}, c={c}"));
    }
    if a == 0.0 {
        return Ok(0.5 * c);
    }
    let k = ((c - a).abs() * (c + a)).sqrt();
    let x = k / a;
    let shape = if c >= a { asinh_over_x(x) } else { asin_over_x(x) };
    Ok(0.5 * (c + a * shape))
}

/// Integrand radicand with the smallest singular value on the polar axis.
///
/// The product rule then only sees the endpoint behaviour of the smallest
/// value and the azimuthal anisotropy of the two largest.
fn spectrum_integrand(spec: &SingularSpectrum) -> impl Fn(&Vector3<f64>) -> f64 {
    let (a2, b2, c2) = (spec.t1 * spec.t1, spec.t2 * spec.t2, spec.t3 * spec.t3);
    move |v: &Vector3<f64>| (a2 * v.x * v.x + b2 * v.y * v.y + c2 * v.z * v.z).sqrt()
}

fn from_quadrature(r: QuadratureResult) -> Violation {
    Violation {
        f_value: r.value / FOUR_PI,
        method: ViolationMethod::Quadrature,
        estimated_error: (r.estimated_error / FOUR_PI).max(roundoff(r.value / FOUR_PI)),
    }
}

// Convergence failures report the best estimate of F rather than of the raw integral.
fn rescale_convergence(e: Error) -> Error {
    match e {
        Error::Convergence { best, difference, order } => Error::Convergence {
            best: best / FOUR_PI,
            difference: difference / FOUR_PI,
            order,
        },
        other => other,
    }
}

fn closed_form(spec: &SingularSpectrum) -> Option<Violation> {
    let SingularSpectrum { t1, t2, t3 } = *spec;
    if t1 - t3 <= EQUAL_TOL {
        return Some(Violation {
            f_value: t1,
            method: ViolationMethod::Isotropic,
            estimated_error: roundoff(t1),
        });
    }
    let (a, c) = if t1 - t2 <= EQUAL_TOL {
        (0.5 * (t1 + t2), t3)
    } else if t2 - t3 <= EQUAL_TOL {
        (0.5 * (t2 + t3), t1)
    } else {
        return None;
    };
    let f_value = axial_closed_form(a, c).expect("spectrum entries are non-negative");
    Some(Violation {
        f_value,
        method: ViolationMethod::ClosedFormAxial,
        estimated_error: roundoff(f_value),
    })
}

/// `F` for a singular spectrum, dispatching isotropic, axial and general cases.
pub fn max_violation(spec: &SingularSpectrum, target_rel_err: f64) -> Result<Violation> {
    match closed_form(spec) {
        Some(v) => Ok(v),
        None => max_violation_quadrature(spec, target_rel_err),
    }
}

/// `F` by adaptive sphere quadrature regardless of symmetry.
pub fn max_violation_quadrature(spec: &SingularSpectrum, target_rel_err: f64) -> Result<Violation> {
    quadrature::integrate_adaptive(spectrum_integrand(spec), target_rel_err)
        .map(from_quadrature)
        .map_err(rescale_convergence)
}

/// Full steering report for a state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteeringReport {
    pub f_value: f64,
    pub bound: f64,
    pub steerable: bool,
    pub concurrence: f64,
    pub method: ViolationMethod,
    pub estimated_error: f64,
}

/// Steerable only when the value clears the bound by more than its error estimate.
pub fn is_steerable(v: &Violation) -> bool {
    v.f_value - v.estimated_error > STEERING_BOUND
}

fn require_t_state(rho: &DensityMatrix) -> Result<()> {
    let magnitude = local_bloch_magnitude(rho);
    if magnitude > T_STATE_TOL {
        return Err(Error::NotTState(magnitude));
    }
    Ok(())
}

fn report(rho: &DensityMatrix, v: Violation) -> SteeringReport {
    SteeringReport {
        f_value: v.f_value,
        bound: STEERING_BOUND,
        steerable: is_steerable(&v),
        concurrence: entanglement::concurrence(rho).concurrence,
        method: v.method,
        estimated_error: v.estimated_error,
    }
}

/// Decides steerability of a T state at the default accuracy.
pub fn steering_verdict(rho: &DensityMatrix) -> Result<SteeringReport> {
    steering_verdict_with(rho, DEFAULT_TARGET_REL_ERR)
}

pub fn steering_verdict_with(rho: &DensityMatrix, target_rel_err: f64) -> Result<SteeringReport> {
    require_t_state(rho)?;
    let spec = singular_spectrum(&correlation_matrix(rho));
    Ok(report(rho, max_violation(&spec, target_rel_err)?))
}

/// Shares one grid ladder across many evaluations, e.g. in bulk sweeps.
#[derive(Debug, Clone)]
pub struct ViolationSolver {
    ladder: GridLadder,
    target_rel_err: f64,
}

impl ViolationSolver {
    pub fn new(target_rel_err: f64) -> Result<Self> {
        if !(target_rel_err > 0.0) {
            return domain(format!("target relative error must be positive, got {target_rel_err}"));
        }
        Ok(Self {
            ladder: GridLadder::default(),
            target_rel_err,
        })
    }

    pub fn target_rel_err(&self) -> f64 {
        self.target_rel_err
    }

    pub fn max_violation(&self, spec: &SingularSpectrum) -> Result<Violation> {
        match closed_form(spec) {
            Some(v) => Ok(v),
            None => self.max_violation_quadrature(spec),
        }
    }

    pub fn max_violation_quadrature(&self, spec: &SingularSpectrum) -> Result<Violation> {
        self.ladder
            .integrate_adaptive(spectrum_integrand(spec), self.target_rel_err)
            .map(from_quadrature)
            .map_err(rescale_convergence)
    }

    pub fn verdict(&self, rho: &DensityMatrix) -> Result<SteeringReport> {
        require_t_state(rho)?;
        let spec = singular_spectrum(&correlation_matrix(rho));
        Ok(report(rho, self.max_violation(&spec)?))
    }
}

/// Tolerance on `sqrt(<r|T T^T|r>) <= 1/2`.
pub const LHS_TOL: f64 = 1e-12;

/// Sufficient hidden-state condition for Alice's setting `r`.
///
/// Holds when Bob's conditional Bloch length `sqrt(<r|T T^T|r>)` is at most
/// `1/2`, equivalently when the conditional eigenvalues satisfy
/// `lambda1 <= 2 sqrt(lambda2) - lambda2`.
pub fn lhs_condition_holds(t: &CorrelationMatrix, r: &Vector3<f64>) -> Result<bool> {
    check_unit(r, 1e-10)?;
    let length = t.conditional_radicand(r).max(0.0).sqrt();
    let holds = length <= 0.5 + LHS_TOL;
    let spectrum = conditional_spectrum(t, r)?;
    let eigen_form = spectrum.lambda1 <= 2.0 * spectrum.lambda2.sqrt() - spectrum.lambda2 + 1e-12;
    debug_assert!(
        (length - 0.5).abs() < 1e-9 || eigen_form == holds,
        "eigenvalue and length forms disagree at length {length}"
    );
    Ok(holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{build_grid, integrate, Scheme};
    use std::f64::consts::PI;

    fn spec(a: f64, b: f64, c: f64) -> SingularSpectrum {
        SingularSpectrum::new([a, b, c]).unwrap()
    }

    #[test]
    fn spectra() {
        let s = singular_spectrum(&CorrelationMatrix::diagonal(1.0, -1.0, 1.0));
        assert!(s.as_array().iter().all(|x| (x - 1.0).abs() < 1e-15));
        assert_eq!(singular_spectrum(&CorrelationMatrix::zero()).as_array(), [0.0; 3]);
        let a = 0.8 * 0.64f64.sqrt();
        let s = singular_spectrum(&CorrelationMatrix::diagonal(a, -a, 0.8));
        for (got, want) in s.as_array().iter().zip([0.8, 0.64, 0.64]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn dispatch_examples() {
        let v = max_violation(&spec(1.0, 1.0, 1.0), 1e-9).unwrap();
        assert_eq!((v.f_value, v.method), (1.0, ViolationMethod::Isotropic));
        let v = max_violation(&spec(0.7, 0.7, 0.7), 1e-9).unwrap();
        assert_eq!(v.f_value, 0.7);
        let v = max_violation(&spec(1.0, 0.0, 0.0), 1e-9).unwrap();
        assert_eq!((v.f_value, v.method), (0.5, ViolationMethod::ClosedFormAxial));
        let v = max_violation(&spec(0.9, 0.5, 0.2), 1e-9).unwrap();
        assert_eq!(v.method, ViolationMethod::Quadrature);
    }

    #[test]
    fn pd_closed_form_value() {
        let (alpha, eta) = (0.8f64, 0.36f64);
        let f = axial_closed_form(alpha * (1.0 - eta).sqrt(), alpha).unwrap();
        let expected = 0.4 * (1.0 + (0.64 / 0.6) * (1.6f64 / 0.8).ln());
        assert!((f - expected).abs() < 1e-15);
    }

    #[test]
    fn axial_limits() {
        assert_eq!(axial_closed_form(0.0, 1.0).unwrap(), 0.5);
        assert_eq!(axial_closed_form(0.7, 0.7).unwrap(), 0.7);
        assert!((axial_closed_form(1e-300, 1.0).unwrap() - 0.5).abs() < 1e-12);
        // (a, a, 0): (1/2) int_{-1}^{1} a sqrt(1 - u^2) du = pi a / 4
        assert!((axial_closed_form(0.6, 0.0).unwrap() - PI * 0.6 / 4.0).abs() < 1e-15);
        // continuity across the a = c seam
        let below = axial_closed_form(0.5, 0.5 - 1e-7).unwrap();
        let above = axial_closed_form(0.5, 0.5 + 1e-7).unwrap();
        assert!((below - above).abs() < 3e-7);
        assert!(axial_closed_form(-0.1, 0.5).is_err());
    }

    #[test]
    fn axial_branches_match_hemisphere_quadrature() {
        // (a, a, c) with c on the polar axis reduces to a 1-D integral in cos(theta).
        let g = build_grid(Scheme::HemisphereGauss, 400).unwrap();
        for &(a, c) in &[(0.3, 0.9), (0.9, 0.3), (0.0, 0.8), (0.64, 0.8)] {
            let q = integrate(&g, |v: &Vector3<f64>| {
                (a * a * (v.x * v.x + v.y * v.y) + c * c * v.z * v.z).sqrt()
            });
            let closed = axial_closed_form(a, c).unwrap();
            assert!((q.value / FOUR_PI - closed).abs() < 1e-9, "a={a} c={c}");
        }
    }

    #[test]
    fn axial_branches_match_substituted_integral() {
        // F = int_0^1 sqrt(a^2 + (c^2 - a^2) u^2) du; u = sin(s) removes the endpoint singularity.
        let (x, w) = crate::quadrature::gauss_legendre(200);
        let half_pi = PI / 2.0;
        for &(a, c) in &[(0.3, 0.9), (0.9, 0.3), (0.5, 0.0), (0.0, 0.8), (0.64, 0.8), (0.99, 0.01)] {
            let q: f64 = x
                .iter()
                .zip(&w)
                .map(|(xi, wi)| {
                    let s = half_pi * 0.5 * (xi + 1.0);
                    let (sn, cs) = s.sin_cos();
                    wi * half_pi * 0.5 * (a * a * cs * cs + c * c * sn * sn).sqrt() * cs
                })
                .sum();
            let closed = axial_closed_form(a, c).unwrap();
            assert!((q - closed).abs() < 1e-12, "a={a} c={c}: {q} vs {closed}");
        }
    }

    #[test]
    fn verdict_boundaries() {
        let w = |alpha: f64| {
            DensityMatrix::from_correlation(&CorrelationMatrix::diagonal(alpha, -alpha, alpha)).unwrap()
        };
        let r = steering_verdict(&w(0.51)).unwrap();
        assert!(r.steerable && (r.f_value - 0.51).abs() < 1e-15);
        assert!(!steering_verdict(&w(0.5)).unwrap().steerable);
        let classical = DensityMatrix::from_correlation(&CorrelationMatrix::diagonal(1.0, 0.0, 0.0)).unwrap();
        let r = steering_verdict(&classical).unwrap();
        assert_eq!((r.f_value, r.steerable), (0.5, false));
    }

    #[test]
    fn non_t_state_rejected() {
        let rho = DensityMatrix::from_pauli_components(
            &Vector3::new(0.0, 0.0, 0.2),
            &Vector3::zeros(),
            &nalgebra::Matrix3::zeros(),
        )
        .unwrap();
        assert!(matches!(steering_verdict(&rho), Err(Error::NotTState(_))));
    }

    #[test]
    fn lhs_condition() {
        let r = Vector3::new(0.3, -0.4, 0.5).normalize();
        assert!(lhs_condition_holds(&CorrelationMatrix::zero(), &r).unwrap());
        assert!(!lhs_condition_holds(&CorrelationMatrix::diagonal(1.0, -1.0, 1.0), &r).unwrap());
        assert!(lhs_condition_holds(&CorrelationMatrix::diagonal(0.4, 0.4, 0.4), &r).unwrap());
        assert!(lhs_condition_holds(&CorrelationMatrix::diagonal(0.5, 0.5, 0.5), &r).unwrap());
        assert!(lhs_condition_holds(&CorrelationMatrix::zero(), &Vector3::new(2.0, 0.0, 0.0)).is_err());
    }
}
