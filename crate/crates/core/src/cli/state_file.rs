//! JSON state descriptions accepted by `analyze`.
//!
//! ```json
//! {"density": [[0.25, 0.0], ... 16 entries, row-major]}
//! {"correlation": [[0.4, 0, 0], [0, -0.4, 0], [0, 0, 0.4]]}
//! {"family": {"name": "werner_pd", "params": {"alpha": 0.8, "eta": 0.36}}}
//! ```

use std::path::Path;

use nalgebra::{Matrix3, Matrix4, Vector4};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::families::{
    bell_diagonal_from_t, random_separable_t, random_t_state, rank2_t_state, seeded_rng, werner,
    werner_pd, BellDiagonalParams,
};
use crate::quantum_state::{CorrelationMatrix, DensityMatrix, C64};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    Density(Vec<[f64; 2]>),
    Correlation([[f64; 3]; 3]),
    Family(FamilySpec),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "name", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    Werner { alpha: f64 },
    WernerPd { alpha: f64, eta: f64 },
    BellDiagonal { c1: f64, c2: f64, c3: f64 },
    Rank2 { psi: Vec<[f64; 2]> },
    RandomT { seed: u64 },
    RandomSeparable { n_terms: usize, seed: u64 },
}

fn complex_entries<const N: usize>(raw: &[[f64; 2]], what: &str) -> Result<[C64; N]> {
    if raw.len() != N {
        return Err(Error::Parse(format!("{what} needs {N} [re, im] pairs, got {}", raw.len())));
    }
    Ok(std::array::from_fn(|i| C64::new(raw[i][0], raw[i][1])))
}

impl StateSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("state file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Builds and validates the density matrix.
    ///
    /// A correlation matrix is read as the state `(1 + sum T_mn sigma_m x sigma_n)/4`,
    /// which is the Bell-diagonal state when `T` is diagonal.
    pub fn build(&self) -> Result<DensityMatrix> {
        match self {
            StateSpec::Density(raw) => {
                let e = complex_entries::<16>(raw, "density")?;
                DensityMatrix::new(Matrix4::from_row_slice(&e))
            }
            StateSpec::Correlation(t) => {
                DensityMatrix::from_correlation(&CorrelationMatrix::new(Matrix3::from_fn(|i, j| t[i][j])))
            }
            StateSpec::Family(f) => f.build(),
        }
    }
}

impl FamilySpec {
    pub fn build(&self) -> Result<DensityMatrix> {
        match *self {
            FamilySpec::Werner { alpha } => werner(alpha),
            FamilySpec::WernerPd { alpha, eta } => werner_pd(alpha, eta),
            FamilySpec::BellDiagonal { c1, c2, c3 } => {
                bell_diagonal_from_t(&BellDiagonalParams::new(c1, c2, c3)?)
            }
            FamilySpec::Rank2 { ref psi } => {
                let e = complex_entries::<4>(psi, "psi")?;
                rank2_t_state(&Vector4::from(e))
            }
            FamilySpec::RandomT { seed } => Ok(random_t_state(&mut seeded_rng(seed, 0))),
            FamilySpec::RandomSeparable { n_terms, seed } => {
                random_separable_t(n_terms, &mut seeded_rng(seed, 0)).map(|(_, rho)| rho)
            }
        }
    }
}
