//! Finite sets of measurement settings and their cheating bounds.

use std::path::Path;

use nalgebra::{Matrix2, SymmetricEigen, Vector3};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::quadrature::{SphereGrid, FOUR_PI};
use crate::quantum_state::{bloch_operator, CorrelationMatrix, C64};

/// Exhaustive sign search is limited to this many settings.
pub const MAX_EXHAUSTIVE_SETTINGS: usize = 24;

/// Named list of Bob's measurement axes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementGeometry {
    pub name: String,
    pub axes: Vec<Vector3<f64>>,
}

impl MeasurementGeometry {
    /// Validates unit norm (1e-10), non-emptiness and pairwise non-collinearity (1e-8).
    pub fn new(name: impl Into<String>, axes: Vec<Vector3<f64>>) -> Result<Self> {
        let name = name.into();
        if axes.is_empty() {
            return domain(format!("geometry {name:?} has no axes"));
        }
        for (i, a) in axes.iter().enumerate() {
            if (a.norm() - 1.0).abs() > 1e-10 {
                return domain(format!("axis {i} of {name:?} has norm {}", a.norm()));
            }
            for (j, b) in axes.iter().enumerate().skip(i + 1) {
                if a.cross(b).norm() < 1e-8 {
                    return domain(format!("axes {i} and {j} of {name:?} are collinear"));
                }
            }
        }
        Ok(Self { name, axes })
    }

    /// Normalizes each raw vector first.
    pub fn from_raw(name: impl Into<String>, raw: &[[f64; 3]]) -> Result<Self> {
        let mut axes = Vec::with_capacity(raw.len());
        for v in raw {
            let v = Vector3::from(*v);
            let n = v.norm();
            if !(n > 0.0) || !n.is_finite() {
                return domain("geometry axes must be non-zero finite vectors");
            }
            axes.push(v / n);
        }
        Self::new(name, axes)
    }

    /// Parses a JSON list of 3-vectors.
    pub fn from_json(name: impl Into<String>, json: &str) -> Result<Self> {
        let raw: Vec<[f64; 3]> =
            serde_json::from_str(json).map_err(|e| Error::Parse(format!("geometry file: {e}")))?;
        Self::from_raw(name, &raw)
    }

    /// Reads a geometry file, naming it after the file stem.
    pub fn load(path: &Path) -> Result<Self> {
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "custom".into());
        Self::from_json(name, &std::fs::read_to_string(path)?)
    }

    pub fn len(&self) -> usize {
        self.axes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axes.is_empty()
    }
}

/// Orthogonal pairs and triples plus Platonic-solid axes with antipodes merged.
pub fn catalog() -> Vec<MeasurementGeometry> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let ip = 1.0 / phi;
    let entries: [(&str, Vec<[f64; 3]>); 5] = [
        ("orthogonal-2", vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]),
        (
            "orthogonal-3",
            vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        ),
        (
            "cube-diagonals-4",
            vec![[1.0, 1.0, 1.0], [1.0, -1.0, 1.0], [-1.0, 1.0, 1.0], [-1.0, -1.0, 1.0]],
        ),
        (
            "icosahedron-6",
            vec![
                [0.0, 1.0, phi],
                [0.0, 1.0, -phi],
                [1.0, phi, 0.0],
                [1.0, -phi, 0.0],
                [phi, 0.0, 1.0],
                [-phi, 0.0, 1.0],
            ],
        ),
        (
            "dodecahedron-10",
            vec![
                [1.0, 1.0, 1.0],
                [1.0, -1.0, 1.0],
                [-1.0, 1.0, 1.0],
                [-1.0, -1.0, 1.0],
                [0.0, ip, phi],
                [0.0, ip, -phi],
                [ip, phi, 0.0],
                [ip, -phi, 0.0],
                [phi, 0.0, ip],
                [-phi, 0.0, ip],
            ],
        ),
    ];
    entries
        .into_iter()
        .map(|(name, raw)| MeasurementGeometry::from_raw(name, &raw).expect("catalog geometry is valid"))
        .collect()
}

/// Alice-optimized steering parameter `(1/N) sum_k sqrt(<s_k|T^T T|s_k>)`.
pub fn steering_parameter_finite(t: &CorrelationMatrix, geom: &MeasurementGeometry) -> f64 {
    let total: f64 = geom.axes.iter().map(|s| t.steering_radicand(s).sqrt()).sum();
    total / geom.len() as f64
}

/// Largest eigenvalue of `(1/N) sum_k A_k s_k.sigma` over all sign choices.
///
/// The eigenvalue of `r.sigma` is `|r|`, so this is the longest signed sum.
/// `A_1 = +1` is fixed and the remaining `2^(N-1)` patterns are walked in
/// Gray-code order so each step flips one term.
pub fn finite_bound(geom: &MeasurementGeometry) -> Result<f64> {
    let n = geom.len();
    if n > MAX_EXHAUSTIVE_SETTINGS {
        return domain(format!(
            "{n} settings exceed the exhaustive search limit of {MAX_EXHAUSTIVE_SETTINGS}; \
             larger geometries need a heuristic search"
        ));
    }
    let mut signs = vec![1.0; n];
    let mut sum: Vector3<f64> = geom.axes.iter().sum();
    let mut best = sum.norm();
    for g in 1u64..(1u64 << (n - 1)) {
        let k = g.trailing_zeros() as usize + 1;
        sum -= geom.axes[k] * (2.0 * signs[k]);
        signs[k] = -signs[k];
        best = best.max(sum.norm());
    }
    Ok(best / n as f64)
}

// +1 on the upper hemisphere, -1 on the lower, 0 on the equator.
fn hemisphere_sign(z: f64) -> f64 {
    if z > 0.0 {
        1.0
    } else if z < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `(1/4pi) sum_i w_i sign(v_z) v_i.sigma` on a sphere grid.
pub fn sign_construction_operator(grid: &SphereGrid) -> Matrix2<C64> {
    let r: Vector3<f64> = grid
        .nodes()
        .map(|n| n.direction * (n.weight * hemisphere_sign(n.direction.z)))
        .sum();
    bloch_operator(&(r / FOUR_PI))
}

/// Largest eigenvalue of [`sign_construction_operator`].
pub fn infinite_bound(grid: &SphereGrid) -> f64 {
    let op = sign_construction_operator(grid);
    let herm = (op + op.adjoint()) * C64::from(0.5);
    SymmetricEigen::new(herm).eigenvalues.max()
}
