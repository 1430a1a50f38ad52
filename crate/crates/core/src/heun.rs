//! Frobenius expansion of the biconfluent Heun equation
//!
//! ```text
//! f'' + (δ/x − 2x) f' + (ℰ + Ā/x) f = 0
//! ```
//!
//! around the regular singular point x = 0, normalised by a_0 = 1. The
//! coefficients obey the three-term recurrence
//!
//! ```text
//! a_{k+2} = [−Ā a_{k+1} + (2k − ℰ) a_k] / ((k + 2)(k + 1 + δ))
//! ```
//!
//! with a_1 = −Ā/δ. Setting ℰ = 2n kills the a_k term at k = n, so the
//! series collapses to a degree-n polynomial as soon as a_{n+1} = 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeunParams {
    pub a_bar: f64,
    pub delta: f64,
    pub eps: f64,
}

impl HeunParams {
    pub fn new(a_bar: f64, delta: f64, eps: f64) -> Result<Self> {
        if !(a_bar.is_finite() && eps.is_finite()) {
            return Err(Error::InvalidParameter("non-finite Heun parameter".into()));
        }
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::InvalidParameter(format!("δ = {delta} must be > 0")));
        }
        Ok(HeunParams { a_bar, delta, eps })
    }

    /// Parameters in the H_B(α, β, γ, δ; z) labelling: (δ−1, 0, δ+1+ℰ, 2Ā), z = −x.
    pub fn hb_label(&self) -> [f64; 4] {
        [
            self.delta - 1.0,
            0.0,
            self.delta + 1.0 + self.eps,
            2.0 * self.a_bar,
        ]
    }

    /// Degree of the polynomial solution, if these parameters truncate the series.
    pub fn polynomial_degree(&self) -> Option<usize> {
        let half = self.eps / 2.0;
        if half < 0.0 || half != half.round() || half > 1e6 {
            return None;
        }
        let n = half as usize;
        let seq = coefficients(*self, n + 1);
        let scale = seq.coeffs[..=n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
        (seq.coeffs[n + 1].abs() <= 1e-10 * scale).then_some(n)
    }

    fn step_denominator(&self, k: usize) -> f64 {
        (k as f64 + 2.0) * (k as f64 + 1.0 + self.delta)
    }
}

/// a_0..a_K for one parameter set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSeq {
    pub coeffs: Vec<f64>,
    pub params: HeunParams,
}

impl CoefficientSeq {
    /// Σ a_k xᵏ over the stored coefficients.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }
}

/// Coefficients a_0..a_count.
pub fn coefficients(params: HeunParams, count: usize) -> CoefficientSeq {
    let mut coeffs = Vec::with_capacity(count + 1);
    coeffs.push(1.0);
    if count >= 1 {
        coeffs.push(-params.a_bar / params.delta);
    }
    for k in 0..count.saturating_sub(1) {
        let next = (-params.a_bar * coeffs[k + 1] + (2.0 * k as f64 - params.eps) * coeffs[k])
            / params.step_denominator(k);
        coeffs.push(next);
    }
    CoefficientSeq { coeffs, params }
}

/// a_0..a_count as polynomials in Ā, for fixed δ and ℰ.
pub fn symbolic_coefficients(delta: f64, eps: f64, count: usize) -> Result<Vec<Polynomial>> {
    let params = HeunParams::new(0.0, delta, eps)?;
    let mut coeffs = Vec::with_capacity(count + 1);
    coeffs.push(Polynomial::constant(1.0));
    if count >= 1 {
        coeffs.push(Polynomial::monomial(-1.0 / delta, 1));
    }
    let minus_a = Polynomial::monomial(-1.0, 1);
    for k in 0..count.saturating_sub(1) {
        let coupling = &minus_a * &coeffs[k + 1];
        let spectral = coeffs[k].scale(2.0 * k as f64 - eps);
        let next = (&coupling + &spectral).scale(1.0 / params.step_denominator(k));
        coeffs.push(next);
    }
    Ok(coeffs)
}

/// a_{n+1} at ℰ = 2n; zero exactly when (Ā, δ) admit a degree-n polynomial.
pub fn truncation_residual(n: u32, a_bar: f64, delta: f64) -> Result<f64> {
    let params = HeunParams::new(a_bar, delta, 2.0 * f64::from(n))?;
    Ok(coefficients(params, n as usize + 1).coeffs[n as usize + 1])
}

/// The truncation condition a_{n+1}(Ā) = 0 as a polynomial of degree n+1 in Ā.
pub fn truncation_polynomial(n: u32, delta: f64) -> Result<Polynomial> {
    let mut coeffs = symbolic_coefficients(delta, 2.0 * f64::from(n), n as usize + 1)?;
    Ok(coeffs.pop().unwrap())
}

/// Σ a_k xᵏ.
///
/// Truncating parameters are summed exactly up to their degree. Otherwise
/// terms are accumulated until three consecutive increments fall below
/// `tol` relative to the partial sum.
pub fn evaluate_series(params: HeunParams, x: f64, tol: f64, max_terms: usize) -> Result<f64> {
    if !(x >= 0.0) || !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("x = {x}, tol = {tol}")));
    }
    if let Some(n) = params.polynomial_degree() {
        return Ok(coefficients(params, n).eval(x));
    }

    let mut sum = CompensatedSum::default();
    let (mut prev, mut curr) = (1.0, -params.a_bar / params.delta);
    let mut power = 1.0;
    sum.add(1.0);
    let mut quiet = 0;
    for k in 1..max_terms {
        if k >= 2 {
            let next = (-params.a_bar * curr + (2.0 * (k - 2) as f64 - params.eps) * prev)
                / params.step_denominator(k - 2);
            prev = curr;
            curr = next;
        }
        power *= x;
        let term = curr * power;
        sum.add(term);
        if term.abs() <= tol * sum.value().abs() {
            quiet += 1;
            if quiet == 3 {
                return Ok(sum.value());
            }
        } else {
            quiet = 0;
        }
        if !sum.value().is_finite() {
            break;
        }
    }
    Err(Error::SeriesNotConverged {
        x,
        terms: max_terms,
    })
}

/// Neumaier summation.
#[derive(Debug, Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}
