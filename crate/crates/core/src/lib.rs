//! Thermodynamic formalism for one-sided topological Markov shifts with
//! locally constant potentials.
//!
//! - [`sft`]: shifts, words, counts and recurrence properties.
//! - [`potential`]: potentials as finite tables, Birkhoff sums, block recoding.
//! - [`pressure`]: transfer matrices, Perron eigendata, classical pressure.
//! - [`induced`]: induced pressure by root finding, partition sums and the
//!   tail-sum diagnostic; BS dimension.
//! - [`measures`]: Markov measures, Gibbs measures, the variational search.
//! - [`cli`]: the system-file format and the batch commands.
//!
//! ```
//! use induced_pressure::{induced_pressure_root, InducedProblem, LocallyConstantPotential, Sft};
//!
//! let sft = Sft::golden_mean();
//! let phi = LocallyConstantPotential::constant(&sft, 0.0)?;
//! let psi = LocallyConstantPotential::constant(&sft, 1.0)?;
//! let root = induced_pressure_root(&InducedProblem::new(sft, phi, psi)?, 1e-10, 1e-12)?;
//! assert!((root.beta - 1.618_033_988_749_895_f64.ln()).abs() < 1e-9);
//! # Ok::<(), induced_pressure::Error>(())
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod induced;
pub mod measures;
pub mod potential;
pub mod pressure;
pub mod sft;

pub use error::{Error, Result};
pub use induced::{
    bs_dimension, induced_pressure_definitional, induced_pressure_root, r_diagnostic, InducedProblem, SolverSettings,
};
pub use measures::{gibbs_measure, variational_search, MarkovMeasure};
pub use potential::LocallyConstantPotential;
pub use pressure::{pressure_spectral, PressurePencil, SpectralSettings};
pub use sft::{EnumerationCap, Sft, Word};
