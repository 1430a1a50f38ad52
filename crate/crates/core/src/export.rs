//! Row schemas for the machine-readable outputs.
//!
//! Floats are written with 17 significant digits so that the CSV output is
//! byte-stable and round-trips to the same `f64`.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::heun::{self, HeunParams};
use crate::model::{
    heun_delta, BoundState, Branch, DerivedQuantities, HalfInteger, QuantumNumbers, Spin,
};
use crate::wavefunction::WavefunctionSample;

pub const SOLVE_HEADER: [&str; 10] = [
    "n",
    "ml",
    "s",
    "branch",
    "E",
    "omega",
    "omega_bar",
    "A_bar",
    "gamma",
    "kappa",
];
pub const SCAN_HEADER: [&str; 4] = ["param_value", "E_plus", "E_minus", "omega"];
pub const WAVEFUNCTION_HEADER: [&str; 3] = ["x", "phi", "phi_squared"];

/// `{:.16e}`: 17 significant digits.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// One solved state, as emitted by `solve` and consumed by `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateRow {
    pub n: u32,
    pub ml: f64,
    pub s: i32,
    pub branch: i32,
    #[serde(rename = "E")]
    pub energy: f64,
    pub omega: f64,
    pub omega_bar: f64,
    #[serde(rename = "A_bar")]
    pub a_bar: f64,
    pub gamma: f64,
    pub kappa: f64,
}

impl StateRow {
    pub fn from_state(state: &BoundState) -> Self {
        StateRow {
            n: state.qn.n,
            ml: state.qn.m_l.value(),
            s: state.qn.s.sign(),
            branch: state.qn.branch.sign(),
            energy: state.energy,
            omega: state.omega,
            omega_bar: state.omega_bar,
            a_bar: state.a_bar_root,
            gamma: state.derived.gamma,
            kappa: state.derived.kappa,
        }
    }

    pub fn csv_fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.ml.to_string(),
            self.s.to_string(),
            self.branch.to_string(),
            fmt_float(self.energy),
            fmt_float(self.omega),
            fmt_float(self.omega_bar),
            fmt_float(self.a_bar),
            fmt_float(self.gamma),
            fmt_float(self.kappa),
        ]
    }

    /// Rebuilds the state; the Heun coefficients are regenerated from (Ā, δ, 2n).
    pub fn to_bound_state(&self) -> Result<BoundState> {
        let qn = QuantumNumbers::new(
            self.n,
            HalfInteger::from_f64(self.ml)?,
            Spin::from_sign(self.s)?,
            Branch::from_sign(self.branch)?,
        )?;
        let delta_s = heun_delta(self.gamma, qn.s);
        let eps_s = 2.0 * f64::from(self.n);
        let heun_coeffs = heun::coefficients(
            HeunParams::new(self.a_bar, delta_s, eps_s)?,
            self.n as usize,
        )
        .coeffs;
        Ok(BoundState {
            qn,
            energy: self.energy,
            omega: self.omega,
            omega_bar: self.omega_bar,
            a_bar_root: self.a_bar,
            heun_coeffs,
            derived: DerivedQuantities {
                gamma: self.gamma,
                delta_s,
                kappa: self.kappa,
                omega_c: 2.0 * (self.omega - self.omega_bar),
                omega_bar: self.omega_bar,
                a_bar: self.a_bar,
                eps_s,
            },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub param_value: f64,
    #[serde(rename = "E_plus")]
    pub energy_plus: f64,
    #[serde(rename = "E_minus")]
    pub energy_minus: f64,
    pub omega: f64,
}

impl ScanRow {
    pub fn csv_fields(&self) -> Vec<String> {
        [
            self.param_value,
            self.energy_plus,
            self.energy_minus,
            self.omega,
        ]
        .into_iter()
        .map(fmt_float)
        .collect()
    }
}

pub fn sample_fields(sample: &WavefunctionSample) -> Vec<String> {
    [sample.x, sample.phi, sample.phi_squared]
        .into_iter()
        .map(fmt_float)
        .collect()
}

/// Header line plus one comma-joined line per row.
pub fn write_csv<W: Write>(
    mut out: W,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> io::Result<()> {
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
