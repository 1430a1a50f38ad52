//! Physical parameters of the radial problem and the scalar quantities
//! derived from them.
//!
//! Everything is in natural units (ħ = c = 1). The radial equation solved
//! downstream is
//!
//! ```text
//! φ'' − γ(γ−s)/ρ² φ − m0² ω̄² ρ² φ + 2Z|e|²E/ρ φ + Eˢ φ = 0
//! ```
//!
//! with `ω̄ = ω − ω_c/2` and `ω_c = |e|B/m0`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which form of the AB-Coulomb index γ to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum GammaConvention {
    /// γ² = (m_l + |e|Φ_AB)² − Z²|e|⁴. Reduces to the known AB, Coulomb and
    /// field-only limits.
    #[default]
    Linear,
    /// γ² = (m_l² + |e|Φ_AB)² − Z²|e|⁴, kept for compatibility with the
    /// typeset formula.
    AsPrinted,
}

/// Physical configuration of the system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Rest mass, > 0.
    pub m0: f64,
    /// Charge magnitude |e|. Natural Gaussian units suggest e² = α ≈ 1/137,
    /// but the caller always supplies it.
    pub e_abs: f64,
    /// Atomic number of the Coulomb centre.
    pub z: f64,
    /// AB flux parameter Φ_AB = Φ/2π. Either sign.
    pub phi_ab: f64,
    /// Homogeneous magnetic field strength.
    pub b: f64,
    /// Oscillator frequency; `None` when the quantizer determines it.
    pub omega: Option<f64>,
    #[serde(default)]
    pub gamma_convention: GammaConvention,
}

impl SystemParams {
    pub fn new(m0: f64, e_abs: f64, z: f64, phi_ab: f64, b: f64) -> Result<Self> {
        let params = SystemParams {
            m0,
            e_abs,
            z,
            phi_ab,
            b,
            omega: None,
            gamma_convention: GammaConvention::Linear,
        };
        params.validate()?;
        Ok(params)
    }

    /// Attach a fixed oscillator frequency. Rejects ω < ω_c/2.
    pub fn with_omega(mut self, omega: f64) -> Result<Self> {
        self.omega = Some(omega);
        self.validate()?;
        Ok(self)
    }

    pub fn with_gamma_convention(mut self, convention: GammaConvention) -> Self {
        self.gamma_convention = convention;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.m0, self.e_abs, self.z, self.phi_ab, self.b]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParameter("non-finite parameter".into()));
        }
        if self.m0 <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "m0 = {} must be > 0",
                self.m0
            )));
        }
        if self.e_abs < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "|e| = {} must be ≥ 0",
                self.e_abs
            )));
        }
        if self.z < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "Z = {} must be ≥ 0",
                self.z
            )));
        }
        if self.b < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "B = {} must be ≥ 0",
                self.b
            )));
        }
        if let Some(omega) = self.omega {
            if !omega.is_finite() || omega < 0.0 {
                return Err(Error::InvalidParameter(format!("ω = {omega} must be ≥ 0")));
            }
            effective_frequency(omega, cyclotron_frequency(self))?;
        }
        Ok(())
    }

    /// Z|e|², the Coulomb coupling strength.
    pub fn coulomb_coupling(&self) -> f64 {
        self.z * self.e_abs * self.e_abs
    }

    /// |e|Φ_AB.
    pub fn flux_coupling(&self) -> f64 {
        self.e_abs * self.phi_ab
    }

    /// ω̄ for the supplied ω, if any.
    pub fn omega_bar(&self) -> Option<Result<f64>> {
        self.omega
            .map(|w| effective_frequency(w, cyclotron_frequency(self)))
    }
}

/// A half-odd-integer such as the orbital number m_l, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfInteger(i32);

impl HalfInteger {
    pub fn from_twice(twice: i32) -> Result<Self> {
        if twice.rem_euclid(2) != 1 {
            return Err(Error::InvalidParameter(format!(
                "m_l = {}/2 is not a half-odd-integer",
                twice
            )));
        }
        Ok(HalfInteger(twice))
    }

    pub fn from_f64(value: f64) -> Result<Self> {
        let twice = 2.0 * value;
        if !twice.is_finite() || (twice - twice.round()).abs() > 1e-9 || twice.abs() > 1e9 {
            return Err(Error::InvalidParameter(format!(
                "m_l = {value} is not a half-odd-integer"
            )));
        }
        Self::from_twice(twice.round() as i32)
    }

    pub fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.0)
    }
}

/// Spin parameter s = ±1 labelling the two spinor components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn from_sign(sign: i32) -> Result<Self> {
        match sign {
            1 => Ok(Spin::Up),
            -1 => Ok(Spin::Down),
            _ => Err(Error::InvalidParameter(format!("s = {sign} must be ±1"))),
        }
    }

    pub fn sign(self) -> i32 {
        match self {
            Spin::Up => 1,
            Spin::Down => -1,
        }
    }

    pub fn value(self) -> f64 {
        f64::from(self.sign())
    }
}

/// Sign of the energy: particle (+) or antiparticle (−) states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Positive,
    Negative,
}

impl Branch {
    pub fn from_sign(sign: i32) -> Result<Self> {
        match sign {
            1 => Ok(Branch::Positive),
            -1 => Ok(Branch::Negative),
            _ => Err(Error::InvalidParameter(format!(
                "branch = {sign} must be ±1"
            ))),
        }
    }

    pub fn sign(self) -> i32 {
        match self {
            Branch::Positive => 1,
            Branch::Negative => -1,
        }
    }

    pub fn value(self) -> f64 {
        f64::from(self.sign())
    }

    pub fn flipped(self) -> Self {
        match self {
            Branch::Positive => Branch::Negative,
            Branch::Negative => Branch::Positive,
        }
    }

    pub const BOTH: [Branch; 2] = [Branch::Positive, Branch::Negative];
}

/// Labels of one bound state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantumNumbers {
    /// Principal number, ≥ 1. The ground state is n = 1.
    pub n: u32,
    pub m_l: HalfInteger,
    pub s: Spin,
    pub branch: Branch,
}

impl QuantumNumbers {
    pub fn new(n: u32, m_l: HalfInteger, s: Spin, branch: Branch) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be ≥ 1".into()));
        }
        Ok(QuantumNumbers { n, m_l, s, branch })
    }
}

/// Scalar quantities of one state, derived from the parameters and the
/// quantum numbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedQuantities {
    pub gamma: f64,
    /// δˢ = 2γ + 1 − s.
    pub delta_s: f64,
    pub kappa: f64,
    pub omega_c: f64,
    pub omega_bar: f64,
    /// Ā = 2Z|e|²E/√(m0 ω̄); zero at resonance.
    pub a_bar: f64,
    /// ℰˢ; equal to 2n on a solved state.
    pub eps_s: f64,
}

impl DerivedQuantities {
    /// Quantities of a state sitting on the truncation condition ℰˢ = 2n.
    pub fn on_shell(
        params: &SystemParams,
        qn: &QuantumNumbers,
        energy: f64,
        omega_bar: f64,
    ) -> Result<Self> {
        let gamma = compute_gamma(params, qn.m_l)?;
        Ok(DerivedQuantities {
            gamma,
            delta_s: heun_delta(gamma, qn.s),
            kappa: kappa(qn.n, gamma, qn.s, qn.m_l, params.flux_coupling()),
            omega_c: cyclotron_frequency(params),
            omega_bar,
            a_bar: coulomb_heun_coupling(params, energy, omega_bar),
            eps_s: 2.0 * f64::from(qn.n),
        })
    }
}

/// ω_c = |e|B/m0.
pub fn cyclotron_frequency(params: &SystemParams) -> f64 {
    params.e_abs * params.b / params.m0
}

/// ω̄ = ω − ω_c/2, or |ω_c| when ω = 0 (otherwise the energies would be
/// imaginary).
pub fn effective_frequency(omega: f64, omega_c: f64) -> Result<f64> {
    if omega == 0.0 {
        return Ok(omega_c.abs());
    }
    let omega_bar = omega - omega_c / 2.0;
    if omega_bar < 0.0 {
        return Err(Error::NegativeEffectiveFrequency(omega_bar));
    }
    Ok(omega_bar)
}

/// The AB-Coulomb index γ ≥ 0.
pub fn compute_gamma(params: &SystemParams, m_l: HalfInteger) -> Result<f64> {
    let ml = m_l.value();
    let shifted = match params.gamma_convention {
        GammaConvention::Linear => ml + params.flux_coupling(),
        GammaConvention::AsPrinted => ml * ml + params.flux_coupling(),
    };
    let coulomb = params.coulomb_coupling();
    let radicand = shifted * shifted - coulomb * coulomb;
    if radicand < 0.0 {
        return Err(Error::SupercriticalCoupling { radicand });
    }
    Ok(radicand.sqrt())
}

/// κ = n + |γ| + 1 − s − m_l − |e|Φ_AB.
pub fn kappa(n: u32, gamma: f64, s: Spin, m_l: HalfInteger, ephi: f64) -> f64 {
    f64::from(n) + gamma.abs() + 1.0 - s.value() - m_l.value() - ephi
}

/// δˢ = 2|γ| + 1 − s.
pub fn heun_delta(gamma: f64, s: Spin) -> f64 {
    2.0 * gamma.abs() + 1.0 - s.value()
}

/// Frobenius exponent |γ| + (1 − s)/2 of the radial function at the origin.
pub fn radial_exponent(gamma: f64, s: Spin) -> f64 {
    gamma.abs() + (1.0 - s.value()) / 2.0
}

/// Eˢ = E² − m0² + 2m0ω̄|e|Φ_AB + m0ω̄(2m_l + s).
pub fn spin_energy(
    params: &SystemParams,
    m_l: HalfInteger,
    s: Spin,
    energy: f64,
    omega_bar: f64,
) -> f64 {
    let m0 = params.m0;
    energy * energy - m0 * m0
        + 2.0 * m0 * omega_bar * params.flux_coupling()
        + m0 * omega_bar * (2.0 * m_l.value() + s.value())
}

/// Ēˢ = Eˢ/(m0 ω̄), the eigenvalue of the dimensionless radial operator.
pub fn reduced_energy(
    params: &SystemParams,
    m_l: HalfInteger,
    s: Spin,
    energy: f64,
    omega_bar: f64,
) -> f64 {
    spin_energy(params, m_l, s, energy, omega_bar) / (params.m0 * omega_bar)
}

/// ℰˢ = Ēˢ − 2|γ| − (2 − s), recomputed from an energy.
pub fn heun_spectral_parameter(
    params: &SystemParams,
    m_l: HalfInteger,
    s: Spin,
    energy: f64,
    omega_bar: f64,
) -> Result<f64> {
    let gamma = compute_gamma(params, m_l)?;
    Ok(reduced_energy(params, m_l, s, energy, omega_bar) - 2.0 * gamma - (2.0 - s.value()))
}

/// Ā = 2Z|e|²E/√(m0 ω̄); defined as 0 at ω̄ = 0.
pub fn coulomb_heun_coupling(params: &SystemParams, energy: f64, omega_bar: f64) -> f64 {
    if omega_bar == 0.0 {
        return 0.0;
    }
    2.0 * params.coulomb_coupling() * energy / (params.m0 * omega_bar).sqrt()
}

/// Analytic eigenvalue Ēˢ = 2n + 2|γ| + 2 − s of a truncated state.
pub fn analytic_reduced_energy(n: u32, gamma: f64, s: Spin) -> f64 {
    2.0 * f64::from(n) + 2.0 * gamma.abs() + 2.0 - s.value()
}

/// A solved bound state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    pub qn: QuantumNumbers,
    pub energy: f64,
    pub omega: f64,
    pub omega_bar: f64,
    /// Ā at which a_{n+1} vanishes.
    pub a_bar_root: f64,
    /// a_0..a_n of the truncated Heun polynomial.
    pub heun_coeffs: Vec<f64>,
    pub derived: DerivedQuantities,
}

impl BoundState {
    /// The same state on the opposite energy branch: E and Ā change sign,
    /// odd Heun coefficients follow Ā.
    pub fn flip_branch(&self) -> BoundState {
        let mut flipped = self.clone();
        flipped.qn.branch = self.qn.branch.flipped();
        flipped.energy = -self.energy;
        flipped.a_bar_root = -self.a_bar_root;
        flipped.derived.a_bar = -self.derived.a_bar;
        for (k, c) in flipped.heun_coeffs.iter_mut().enumerate() {
            if k % 2 == 1 {
                *c = -*c;
            }
        }
        flipped
    }

    /// Eigenvalue Ēˢ the dimensionless radial operator must reproduce.
    pub fn reduced_energy(&self) -> f64 {
        analytic_reduced_energy(self.qn.n, self.derived.gamma, self.qn.s)
    }

    /// True at the resonance ω = ω_c/2.
    pub fn is_resonant(&self) -> bool {
        self.omega_bar == 0.0
    }
}
