//! Quantization of (E, ω̄) from the two truncation conditions ℰˢ = 2n and
//! a_{n+1}(Ā) = 0.
//!
//! Eliminating ω̄ between E² = m0² + 2m0ω̄κ and Ā² = 4Z²|e|⁴E²/(m0ω̄) gives,
//! for every admissible root Ā*,
//!
//! ```text
//! E² = m0² / (1 − 8κZ²|e|⁴/Ā*²),    m0ω̄ = 4Z²|e|⁴E²/Ā*²
//! ```
//!
//! The n = 1 and n = 2 roots are known in closed form (Ā² = 2δ and
//! Ā² = 4(2δ+1)); higher n go through real-root isolation of a_{n+1}(Ā).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heun::{self, HeunParams};
use crate::model::{
    compute_gamma, cyclotron_frequency, heun_delta, kappa, BoundState, Branch, DerivedQuantities,
    HalfInteger, QuantumNumbers, Spin, SystemParams,
};

pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRequest {
    pub params: SystemParams,
    pub qn: QuantumNumbers,
    pub tol: f64,
}

impl SpectrumRequest {
    pub fn new(params: SystemParams, qn: QuantumNumbers, tol: f64) -> Result<Self> {
        params.validate()?;
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol = {tol} must be > 0")));
        }
        Ok(SpectrumRequest { params, qn, tol })
    }

    pub fn solve(&self) -> Result<SolutionSet> {
        solve_general(&self.params, &self.qn, self.tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RejectionReason {
    ZeroRoot,
    ImaginaryEnergy,
    NonPositiveFrequency,
    BranchMismatch,
    ResidualAboveTolerance,
}

impl fmt::Display for RejectionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RejectionReason::ZeroRoot => "zero root",
            RejectionReason::ImaginaryEnergy => "imaginary energy",
            RejectionReason::NonPositiveFrequency => "non-positive effective frequency",
            RejectionReason::BranchMismatch => "branch sign mismatch",
            RejectionReason::ResidualAboveTolerance => "residual above tolerance",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RejectedRoot {
    pub a_bar: f64,
    pub reason: RejectionReason,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SolutionSet {
    pub states: Vec<BoundState>,
    pub diagnostics: Vec<RejectedRoot>,
}

/// E = ±√(m0² + 2m0ω̄κ); exactly ±m0 at resonance.
pub fn energy_from_frequency(
    omega_bar: f64,
    qn: &QuantumNumbers,
    params: &SystemParams,
) -> Result<f64> {
    if !(omega_bar >= 0.0) {
        return Err(Error::NegativeEffectiveFrequency(omega_bar));
    }
    let gamma = compute_gamma(params, qn.m_l)?;
    if omega_bar == 0.0 {
        return Ok(qn.branch.value() * params.m0);
    }
    let k = kappa(qn.n, gamma, qn.s, qn.m_l, params.flux_coupling());
    let radicand = params.m0 * params.m0 + 2.0 * params.m0 * omega_bar * k;
    if radicand < 0.0 {
        return Err(Error::ImaginaryEnergy(radicand));
    }
    Ok(qn.branch.value() * radicand.sqrt())
}

/// δˢ for a state, rejecting the critical γ = 0, s = +1 case.
fn checked_delta(params: &SystemParams, m_l: HalfInteger, s: Spin) -> Result<(f64, f64)> {
    let gamma = compute_gamma(params, m_l)?;
    let delta = heun_delta(gamma, s);
    if delta <= 0.0 {
        return Err(Error::CriticalExponent);
    }
    Ok((gamma, delta))
}

fn build_state(
    params: &SystemParams,
    qn: QuantumNumbers,
    energy: f64,
    omega_bar: f64,
    a_bar: f64,
) -> Result<BoundState> {
    let mut derived = DerivedQuantities::on_shell(params, &qn, energy, omega_bar)?;
    derived.a_bar = a_bar;
    let heun_params = HeunParams::new(a_bar, derived.delta_s, derived.eps_s)?;
    let heun_coeffs = heun::coefficients(heun_params, qn.n as usize).coeffs;
    Ok(BoundState {
        qn,
        energy,
        omega: omega_bar + derived.omega_c / 2.0,
        omega_bar,
        a_bar_root: a_bar,
        heun_coeffs,
        derived,
    })
}

fn resonance_states(
    params: &SystemParams,
    n: u32,
    m_l: HalfInteger,
    s: Spin,
) -> Result<SolutionSet> {
    let states = Branch::BOTH
        .iter()
        .map(|&branch| {
            let qn = QuantumNumbers::new(n, m_l, s, branch)?;
            build_state(params, qn, branch.value() * params.m0, 0.0, 0.0)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SolutionSet {
        states,
        diagnostics: Vec::new(),
    })
}

/// Closed form shared by n = 1, 2 given the known root Ā*² as a function of δ.
fn closed_form(
    params: &SystemParams,
    n: u32,
    m_l: HalfInteger,
    s: Spin,
    root_sq: impl Fn(f64) -> f64,
) -> Result<SolutionSet> {
    let (gamma, delta) = checked_delta(params, m_l, s)?;
    if params.coulomb_coupling() == 0.0 {
        return resonance_states(params, n, m_l, s);
    }
    let zc2 = params.coulomb_coupling().powi(2);
    let k = kappa(n, gamma, s, m_l, params.flux_coupling());
    let a_sq = root_sq(delta);
    let denom = 1.0 - 8.0 * zc2 * k / a_sq;
    if denom <= 0.0 {
        return Err(Error::NoBoundState(format!(
            "n = {n}: 1 − 8κZ²|e|⁴/Ā² = {denom} ≤ 0"
        )));
    }
    let magnitude = params.m0 / denom.sqrt();
    let states = Branch::BOTH
        .iter()
        .map(|&branch| {
            let qn = QuantumNumbers::new(n, m_l, s, branch)?;
            let energy = branch.value() * magnitude;
            let omega_bar = 4.0 * zc2 * energy * energy / (params.m0 * a_sq);
            let a_bar = branch.value() * a_sq.sqrt();
            build_state(params, qn, energy, omega_bar, a_bar)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SolutionSet {
        states,
        diagnostics: Vec::new(),
    })
}

/// n = 1: E = ±m0/√(1 − 4Z²|e|⁴κ/δˢ), ω = ω_c/2 + 2Z²|e|⁴E²/(m0δˢ).
///
/// Both branches are returned, positive first. Z = 0 yields the resonant
/// pair E = ±m0, ω = ω_c/2.
pub fn solve_ground_state(params: &SystemParams, m_l: HalfInteger, s: Spin) -> Result<SolutionSet> {
    closed_form(params, 1, m_l, s, |delta| 2.0 * delta)
}

/// n = 2: E = ±m0/√(1 − 2Z²|e|⁴κ/(4|γ|+3−2s)), ω = ω_c/2 + Z²|e|⁴E²/(m0(4|γ|+3−2s)).
pub fn solve_first_excited(
    params: &SystemParams,
    m_l: HalfInteger,
    s: Spin,
) -> Result<SolutionSet> {
    closed_form(params, 2, m_l, s, |delta| 4.0 * (2.0 * delta + 1.0))
}

/// General n: every real root of a_{n+1}(Ā) that yields a real energy, a
/// positive ω̄ and a sign of Ā matching the requested branch, sorted by ω̄.
pub fn solve_general(params: &SystemParams, qn: &QuantumNumbers, tol: f64) -> Result<SolutionSet> {
    params.validate()?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol = {tol} must be > 0")));
    }
    let (gamma, delta) = checked_delta(params, qn.m_l, qn.s)?;
    if params.coulomb_coupling() == 0.0 {
        return Err(Error::DegenerateCondition(
            "Z|e|² = 0 makes Ā ≡ 0; supply ω and use energy_from_frequency".into(),
        ));
    }

    let poly = heun::truncation_polynomial(qn.n, delta)?.monic();
    let zc2 = params.coulomb_coupling().powi(2);
    let k = kappa(qn.n, gamma, qn.s, qn.m_l, params.flux_coupling());
    let mut set = SolutionSet::default();

    for root in poly.real_roots() {
        let reject = |reason| RejectedRoot {
            a_bar: root,
            reason,
        };
        if root.abs() <= f64::EPSILON * poly.root_bound() {
            set.diagnostics.push(reject(RejectionReason::ZeroRoot));
            continue;
        }
        let residual = poly.eval(root).abs() / poly.magnitude_at(root);
        if residual > tol {
            set.diagnostics
                .push(reject(RejectionReason::ResidualAboveTolerance));
            continue;
        }
        let branch = if root > 0.0 {
            Branch::Positive
        } else {
            Branch::Negative
        };
        if branch != qn.branch {
            set.diagnostics
                .push(reject(RejectionReason::BranchMismatch));
            continue;
        }
        let a_sq = root * root;
        let denom = 1.0 - 8.0 * k * zc2 / a_sq;
        if denom <= 0.0 {
            set.diagnostics
                .push(reject(RejectionReason::ImaginaryEnergy));
            continue;
        }
        let energy = branch.value() * params.m0 / denom.sqrt();
        let omega_bar = 4.0 * zc2 * energy * energy / (params.m0 * a_sq);
        if !(omega_bar > 0.0) || !omega_bar.is_finite() {
            set.diagnostics
                .push(reject(RejectionReason::NonPositiveFrequency));
            continue;
        }
        set.states
            .push(build_state(params, *qn, energy, omega_bar, root)?);
    }

    if set.states.is_empty() {
        return Err(Error::NoBoundState(format!(
            "n = {}: no admissible root of a_{{n+1}}(Ā) (rejected: {:?})",
            qn.n, set.diagnostics
        )));
    }
    set.states
        .sort_by(|a, b| a.omega_bar.total_cmp(&b.omega_bar));
    Ok(set)
}

/// Closed forms for n ∈ {1, 2} restricted to one branch, root solver otherwise.
pub fn solve_preferring_closed_form(
    params: &SystemParams,
    qn: &QuantumNumbers,
    tol: f64,
) -> Result<SolutionSet> {
    let set = match qn.n {
        1 => solve_ground_state(params, qn.m_l, qn.s)?,
        2 => solve_first_excited(params, qn.m_l, qn.s)?,
        _ => return solve_general(params, qn, tol),
    };
    Ok(SolutionSet {
        states: set
            .states
            .into_iter()
            .filter(|st| st.qn.branch == qn.branch)
            .collect(),
        diagnostics: set.diagnostics,
    })
}

/// Solved ω for a configuration, i.e. ω̄ + ω_c/2.
pub fn oscillator_frequency(params: &SystemParams, omega_bar: f64) -> f64 {
    omega_bar + cyclotron_frequency(params) / 2.0
}
