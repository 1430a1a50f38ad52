//! Radial bound-state profiles
//!
//! ```text
//! φˢ(x) = Cˢ x^(|γ| + (1−s)/2) e^(−x²/2) fˢ(x)
//! ```
//!
//! in the dimensionless coordinate x = √(m0ω̄)·ρ, where fˢ is the truncated
//! Heun polynomial of the state. The norm is ∫₀^∞ |φ|² dx = 1; the 1/√ρ
//! Jacobian already sits in the spinor prefactor, so the measure is flat.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{radial_exponent, BoundState};
use crate::poly::Polynomial;
use crate::quadrature;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialFunction {
    pub state: BoundState,
    /// |γ| + (1 − s)/2
    pub exponent: f64,
    /// Coefficients of fˢ, lowest degree first.
    pub poly: Vec<f64>,
    /// Cˢ; 1 until [`RadialFunction::normalize`] runs.
    pub norm_const: f64,
}

/// One row of an exported profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WavefunctionSample {
    pub x: f64,
    pub phi: f64,
    pub phi_squared: f64,
}

impl RadialFunction {
    /// Unnormalized profile (Cˢ = 1) of a solved state.
    pub fn from_state(state: &BoundState) -> Result<Self> {
        let exponent = radial_exponent(state.derived.gamma, state.qn.s);
        if exponent == 0.0 {
            return Err(Error::CriticalExponent);
        }
        if state.is_resonant() {
            return Err(Error::DegenerateCondition(
                "ω̄ = 0: the coordinate x = √(m0ω̄)ρ collapses".into(),
            ));
        }
        if state.heun_coeffs.len() != state.qn.n as usize + 1 {
            return Err(Error::InvalidParameter(format!(
                "expected {} Heun coefficients, got {}",
                state.qn.n + 1,
                state.heun_coeffs.len()
            )));
        }
        Ok(RadialFunction {
            state: state.clone(),
            exponent,
            poly: state.heun_coeffs.clone(),
            norm_const: 1.0,
        })
    }

    pub fn polynomial(&self) -> Polynomial {
        Polynomial::new(self.poly.clone())
    }

    fn poly_value(&self, x: f64) -> f64 {
        self.poly.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// φˢ(x) for x ≥ 0.
    pub fn radial_value(&self, x: f64) -> f64 {
        if x == 0.0 {
            return if self.exponent > 0.0 {
                0.0
            } else {
                self.norm_const * self.poly[0]
            };
        }
        self.norm_const * x.powf(self.exponent) * (-0.5 * x * x).exp() * self.poly_value(x)
    }

    /// Upper limit beyond which the Gaussian tail is negligible.
    pub fn tail_cutoff(&self) -> f64 {
        (2.0 * (self.exponent + f64::from(self.state.qn.n)) + 40.0).sqrt()
    }

    /// ∫₀^∞ |φ|² dx with the current Cˢ.
    pub fn norm_squared(&self, tol: f64) -> Result<f64> {
        let r = quadrature::integrate(
            |x| self.radial_value(x).powi(2),
            0.0,
            self.tail_cutoff(),
            1e-300,
            tol,
            4000,
        )?;
        Ok(r.value)
    }

    /// Fix Cˢ so that ∫|φ|² dx = 1 to relative accuracy `tol`.
    pub fn normalize(mut self, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol = {tol} must be > 0")));
        }
        self.norm_const = 1.0;
        let norm = self.norm_squared(0.1 * tol)?;
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::QuadratureFailure(format!("norm² = {norm}")));
        }
        self.norm_const = norm.sqrt().recip();
        Ok(self)
    }

    /// Cˢ for the same profile normalized in ρ: ∫|φ|² dρ = 1.
    pub fn rho_norm_const(&self, m0: f64) -> f64 {
        self.norm_const * (m0 * self.state.omega_bar).powf(0.25)
    }

    /// x = √(m0ω̄)·ρ
    pub fn x_of_rho(&self, m0: f64, rho: f64) -> f64 {
        (m0 * self.state.omega_bar).sqrt() * rho
    }

    /// Sign changes of fˢ on (0, x_max).
    pub fn count_nodes(&self, x_max: f64) -> usize {
        let poly = self.polynomial();
        let mut knots: Vec<f64> = poly
            .real_roots()
            .into_iter()
            .chain(poly.derivative().real_roots())
            .filter(|&r| r > 0.0 && r < x_max)
            .collect();
        knots.push(0.0);
        knots.push(x_max);
        knots.sort_by(f64::total_cmp);
        knots.dedup();

        let signs: Vec<f64> = knots
            .windows(2)
            .map(|w| poly.eval(0.5 * (w[0] + w[1])))
            .filter(|v| *v != 0.0)
            .map(f64::signum)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Residual with the stencil step from [`stencil_step`].
    pub fn ode_residual_at(&self, x: f64) -> Result<f64> {
        self.ode_residual(x, stencil_step(x))
    }

    /// |φ'' − [γ(γ−s)/x² + x² − Ā/x − Ēˢ] φ| with a five-point stencil of step h.
    pub fn ode_residual(&self, x: f64, h: f64) -> Result<f64> {
        if !(h > 0.0 && x - 2.0 * h > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "stencil x = {x}, h = {h} reaches x ≤ 0"
            )));
        }
        let phi = |t: f64| self.radial_value(t);
        let second = (-phi(x + 2.0 * h) + 16.0 * phi(x + h) - 30.0 * phi(x) + 16.0 * phi(x - h)
            - phi(x - 2.0 * h))
            / (12.0 * h * h);
        Ok((second - self.potential(x) * phi(x)).abs())
    }

    /// γ(γ−s)/x² + x² − Ā/x − Ēˢ, the coefficient multiplying φ.
    pub fn potential(&self, x: f64) -> f64 {
        let gamma = self.state.derived.gamma;
        let s = self.state.qn.s.value();
        gamma * (gamma - s) / (x * x) + x * x
            - self.state.a_bar_root / x
            - self.state.reduced_energy()
    }

    /// f'' + (δ/x − 2x) f' + (ℰ + Ā/x) f for the polynomial factor, exact derivatives.
    pub fn heun_residual(&self, x: f64) -> f64 {
        let f = self.polynomial();
        let df = f.derivative();
        let d2f = df.derivative();
        let d = &self.state.derived;
        d2f.eval(x)
            + (d.delta_s / x - 2.0 * x) * df.eval(x)
            + (d.eps_s + self.state.a_bar_root / x) * f.eval(x)
    }

    /// max |φ| located by a uniform scan of the support.
    pub fn peak(&self) -> f64 {
        let x_max = self.tail_cutoff();
        let samples = 4000;
        (0..=samples)
            .map(|i| self.radial_value(x_max * i as f64 / samples as f64).abs())
            .fold(0.0, f64::max)
    }

    /// `points` equally spaced samples on [0, x_max].
    pub fn sample(&self, x_max: f64, points: usize) -> Vec<WavefunctionSample> {
        let last = points.saturating_sub(1).max(1) as f64;
        (0..points)
            .map(|i| {
                let x = x_max * i as f64 / last;
                let phi = self.radial_value(x);
                WavefunctionSample {
                    x,
                    phi,
                    phi_squared: phi * phi,
                }
            })
            .collect()
    }
}

/// 1e-3, shrunk to 2.5e-3·x near the origin where x^p varies on the scale x.
pub fn stencil_step(x: f64) -> f64 {
    (2.5e-3 * x).min(1e-3)
}
