//! Orthogonal rational approximation (ORA) of tabulated frequency responses.
//!
//! The crate fits one or more responses sampled on the imaginary axis with
//! rational functions that share a common denominator, have real polynomial
//! coefficients and stable poles. Every coefficient lives in a real,
//! denominator-weighted orthogonal basis generated by a skew-symmetric Lanczos
//! recurrence; monomial coefficients are never formed.
//!
//! Module map:
//!
//! - [`basis`]: basis construction, off-grid evaluation and zeros of basis expansions.
//! - [`numfit`]: numerator fitting for a prescribed denominator.
//! - [`sk`]: the Sanathanan-Koerner style iteration with pole flipping.
//! - [`model`]: state-space and pole-residue macromodels.
//! - [`netdata`]: Touchstone and CSV input/output.

pub mod basis;
pub mod error;
pub mod grid;
pub mod linalg;
pub mod model;
pub mod netdata;
pub mod numfit;
pub mod response;
pub mod sk;
pub mod synth;

pub use basis::{
    build_basis, build_basis_with, comrade_matrix, comrade_zeros, evaluate_polynomial_basis, BasisOptions, StackedBasis,
};
pub use error::{OraError, Result};
pub use grid::{FrequencyGrid, StackedVector};
pub use model::{assemble_state_space, rms_error, PoleResidueModel, StateSpaceModel};
pub use numfit::{
    fit_numerator, fit_numerator_with, DenominatorSamples, FitOptions, FitWarning, NumeratorFit, SolveMode,
};
pub use response::ResponseSet;
pub use sk::{
    denominator_samples, flip_unstable, run_ora, update_denominator, update_denominator_polybasis, BasisKind,
    DenominatorUpdate, FitResult, InitialDenominator, IterationRecord, PoleSet, SkConfig,
};

pub use num_complex::Complex64;
