//! Independent check of a solved state: the dimensionless radial operator
//!
//! ```text
//! −φ'' + [γ(γ−s)/x² + x² − Ā/x] φ = Ēˢ φ
//! ```
//!
//! is discretised with second-order central differences and Dirichlet walls
//! on a uniform grid, Ā frozen at the solved root, and its spectrum is
//! compared against the analytic Ēˢ = 2n + 2|γ| + 2 − s.
//!
//! For s = +1 with γ < 1/2 both Frobenius exponents γ and 1−γ vanish at the
//! origin and the grid selects 1−γ; states in that regime do not converge
//! to their analytic eigenvalue and are reported as such.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::BoundState;
use crate::tridiag::SymTridiagonal;
use crate::wavefunction::RadialFunction;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
}

impl GridSpec {
    pub const DEFAULT_X_MIN: f64 = 1e-4;

    pub fn new(x_min: f64, x_max: f64, points: usize) -> Result<Self> {
        if !(x_min > 0.0 && x_max > x_min && x_max.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "grid bounds must satisfy 0 < x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if points < 100 {
            return Err(Error::InvalidParameter(format!(
                "grid needs ≥ 100 points, got {points}"
            )));
        }
        Ok(GridSpec {
            x_min,
            x_max,
            points,
        })
    }

    /// Grid on [1e-4, x_max].
    pub fn with_default_origin(x_max: f64, points: usize) -> Result<Self> {
        Self::new(Self::DEFAULT_X_MIN, x_max, points)
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.points - 1) as f64
    }

    /// Same bounds, half the spacing.
    pub fn halved(&self) -> GridSpec {
        GridSpec {
            points: 2 * (self.points - 1) + 1,
            ..*self
        }
    }

    /// Interior nodes, where the unknowns live.
    pub fn interior(&self) -> Vec<f64> {
        let h = self.spacing();
        (1..self.points - 1)
            .map(|i| self.x_min + i as f64 * h)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub eigenvalues: Vec<f64>,
    pub matched_index: usize,
    pub matched_eigenvalue: f64,
    pub analytic_eigenvalue: f64,
    pub eigenvalue_error: f64,
    /// |⟨numeric, analytic⟩| of the unit-normalised grid vectors.
    pub overlap: f64,
    /// max ODE residual of the analytic state on grid nodes x ≥ 0.1, relative to max|φ|.
    pub residual_max: f64,
    pub grid: GridSpec,
    /// overlap ≥ 0.9
    pub verified: bool,
}

/// Grid spectrum of the radial operator with Ā frozen at the state's root.
pub fn discretized_eigenvalues(
    state: &BoundState,
    grid: &GridSpec,
    k: usize,
) -> Result<OracleReport> {
    let grid = GridSpec::new(grid.x_min, grid.x_max, grid.points)?;
    if k == 0 {
        return Err(Error::InvalidParameter("k must be ≥ 1".into()));
    }
    let analytic = state.reduced_energy();
    let h = grid.spacing();
    if h > 0.01 * analytic.abs().sqrt().max(1.0) {
        return Err(Error::GridTooCoarse(format!(
            "spacing {h} exceeds 1% of the turning-point scale √Ē = {}",
            analytic.abs().sqrt()
        )));
    }
    let rf = RadialFunction::from_state(state)?;

    let nodes = grid.interior();
    let inv_h2 = 1.0 / (h * h);
    let diag = nodes
        .iter()
        .map(|&x| 2.0 * inv_h2 + operator_potential(state, x))
        .collect();
    let matrix = SymTridiagonal::new(diag, vec![-inv_h2; nodes.len() - 1])?;
    let eigenvalues = matrix.lowest_eigenvalues(k.min(nodes.len()))?;

    let (matched_index, &matched_eigenvalue) = eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - analytic).abs().total_cmp(&(b.1 - analytic).abs()))
        .unwrap();

    let numeric = matrix.eigenvector(matched_eigenvalue);
    let sampled: Vec<f64> = nodes.iter().map(|&x| rf.radial_value(x)).collect();
    let sampled_norm = sampled.iter().map(|v| v * v).sum::<f64>().sqrt();
    let overlap = numeric
        .iter()
        .zip(&sampled)
        .map(|(a, b)| a * b)
        .sum::<f64>()
        .abs()
        / sampled_norm;

    let peak = rf.peak();
    let residual_max = nodes
        .iter()
        .filter(|&&x| x >= 0.1)
        .map(|&x| rf.ode_residual_at(x))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max)
        / peak;

    Ok(OracleReport {
        eigenvalues,
        matched_index,
        matched_eigenvalue,
        analytic_eigenvalue: analytic,
        eigenvalue_error: (matched_eigenvalue - analytic).abs(),
        overlap,
        residual_max,
        grid,
        verified: overlap >= 0.9,
    })
}

/// γ(γ−s)/x² + x² − Ā/x
fn operator_potential(state: &BoundState, x: f64) -> f64 {
    let gamma = state.derived.gamma;
    let s = state.qn.s.value();
    gamma * (gamma - s) / (x * x) + x * x - state.a_bar_root / x
}

/// h → 0 estimate from values at h and h/2 under an O(h²) error.
pub fn richardson(coarse: f64, fine: f64) -> f64 {
    if coarse == fine {
        return fine;
    }
    (4.0 * fine - coarse) / 3.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementStudy {
    pub coarse: OracleReport,
    pub fine: OracleReport,
    /// err(h) / err(h/2), signed errors; ≈ 4 for a second-order scheme.
    pub error_ratio: f64,
    pub extrapolated: f64,
}

/// Solves on `base_grid` and on its halving, checking second-order convergence.
pub fn refinement_study(state: &BoundState, base_grid: &GridSpec) -> Result<RefinementStudy> {
    let k = state.qn.n as usize + 3;
    let coarse = discretized_eigenvalues(state, base_grid, k)?;
    let fine = discretized_eigenvalues(state, &base_grid.halved(), k)?;
    if coarse.matched_index != fine.matched_index {
        return Err(Error::GridTooCoarse(format!(
            "matched eigenvalue index moved from {} to {} under refinement",
            coarse.matched_index, fine.matched_index
        )));
    }
    let target = coarse.analytic_eigenvalue;
    let err_coarse = coarse.matched_eigenvalue - target;
    let err_fine = fine.matched_eigenvalue - target;
    let error_ratio = err_coarse / err_fine;
    let extrapolated = richardson(coarse.matched_eigenvalue, fine.matched_eigenvalue);

    let converged = coarse.matched_eigenvalue == fine.matched_eigenvalue
        || err_coarse.abs() <= 1e-10 * target.abs().max(1.0);
    if !converged && !(error_ratio >= 3.0) {
        return Err(Error::GridTooCoarse(format!(
            "eigenvalue error {err_coarse:e} → {err_fine:e} under halving (ratio {error_ratio:.3}), \
             not second order"
        )));
    }
    Ok(RefinementStudy {
        coarse,
        fine,
        error_ratio,
        extrapolated,
    })
}

/// Richardson-extrapolated Ēˢ from `base_grid` and its halving.
pub fn refine_and_extrapolate(state: &BoundState, base_grid: &GridSpec) -> Result<f64> {
    refinement_study(state, base_grid).map(|study| study.extrapolated)
}
