//! Bound states of the (2+1)-dimensional Dirac oscillator in an
//! Aharonov-Bohm-Coulomb field with a homogeneous magnetic field.
//!
//! The radial problem reduces to a biconfluent Heun equation whose
//! Frobenius series truncates to a polynomial only for discrete pairs
//! (E, ω). [`quantization`] solves for those pairs, [`wavefunction`] builds
//! and normalizes the radial profiles, and [`oracle`] checks each solution
//! against a finite-difference discretisation of the same operator.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod export;
pub mod heun;
pub mod model;
pub mod oracle;
pub mod poly;
pub mod quadrature;
pub mod quantization;
pub mod tridiag;
pub mod wavefunction;

pub use error::{Error, Result};
pub use model::{
    BoundState, Branch, DerivedQuantities, GammaConvention, HalfInteger, QuantumNumbers, Spin,
    SystemParams,
};
pub use oracle::{GridSpec, OracleReport};
pub use quantization::{SolutionSet, SpectrumRequest};
pub use wavefunction::RadialFunction;
