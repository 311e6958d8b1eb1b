//! Reduction of the lattice sine–Gordon equation to a completely discrete,
//! local NLS equation for the slow envelope of a carrier wave, and the
//! numerical check that the reduction holds in the far field.
//!
//! The slow time is `m₂ = m/N²`.

mod ansatz;
mod coeffs;
mod envelope;
mod validate;

use thiserror::Error;

use crate::lattice_sg::SgError;

pub use ansatz::{ansatz_value, build_ansatz, envelope_at, extract_envelope, fine_position, AnsatzData};
pub use coeffs::{
    combined_closed_form, compute_s, cubic_balance, cubic_balance_complex, nls_coefficients, nls_coefficients_for,
    select_wavenumber, CubicRule, NlsCoeffs, ReductionConfig,
};
pub use envelope::{
    harmonic_fields, nls_step, nls_step_with, residual_order2, substitute_wide_stencil, Boundary, Branch, Envelope2D,
    EnvelopeRow, HarmonicFields,
};
pub use validate::{
    demo_preset, evolve_envelope, validate_reduction, DemoPreset, GaussianProfile, ValidationEntry, ValidationReport,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NlsError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("no k in (0, pi) has group velocity {ratio}; attainable interval is [{lo}, {hi}]")]
    NoWavenumber { ratio: f64, lo: f64, hi: f64 },
    #[error("degenerate modulus (σ = {sigma}, k = {k})")]
    DegenerateModulus { k: f64, sigma: f64 },
    #[error("window: {0}")]
    Window(String),
    #[error("non-finite envelope value")]
    NonFinite,
    #[error(transparent)]
    Sg(#[from] SgError),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
