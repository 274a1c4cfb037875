//! Induced pressure `P_psi(phi)`.
//!
//! Three routes are provided:
//!
//! - [`induced_pressure_root`]: the production path. Bisection on the strictly
//!   decreasing map `beta -> P(phi - beta psi)`; the root is `P_psi(phi)`.
//! - [`q_partition_sum`] / [`p_partition_sum`] / [`induced_pressure_definitional`]:
//!   finite-`T` partition sums over the lengths `n` whose Birkhoff sum of `psi`
//!   first crosses `T`, evaluated exactly on cylinders. Exponential in `T`;
//!   used for validation.
//! - [`r_diagnostic`]: truncated tail sums whose boundedness in `T` tells on
//!   which side of `P_psi(phi)` a given `beta` lies.
//!
//! Separation and spanning are taken at the cylinder scale: two points are
//! `(n, ε)`-separated exactly when their first `n` symbols differ, so every
//! family below is indexed by cylinders and no metric is materialized.

mod diagnostic;
mod partition;

pub use diagnostic::{default_t_grid, r_diagnostic, RDiagnosticReport, RSample, Verdict, DEFAULT_NODE_BUDGET};
pub use partition::{
    induced_pressure_definitional, p_partition_sum, partition_sums, q_partition_sum, DefinitionalEstimate,
    FamilyConvention, LengthTerm, PartitionSumReport,
};

use crate::error::{Error, Result};
use crate::potential::{recode_to_memory2, BlockCode, LocallyConstantPotential};
use crate::pressure::{PressurePencil, SpectralSettings};
use crate::sft::{EnumerationCap, Sft};

/// Default lower bound that `min psi` must exceed.
pub const DEFAULT_PSI_FLOOR: f64 = 1e-9;

/// Shift plus the pair `(phi, psi)` with `psi > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedProblem {
    sft: Sft,
    phi: LocallyConstantPotential,
    psi: LocallyConstantPotential,
}

impl InducedProblem {
    pub fn new(sft: Sft, phi: LocallyConstantPotential, psi: LocallyConstantPotential) -> Result<Self> {
        Self::with_psi_floor(sft, phi, psi, DEFAULT_PSI_FLOOR)
    }

    pub fn with_psi_floor(
        sft: Sft,
        phi: LocallyConstantPotential,
        psi: LocallyConstantPotential,
        floor: f64,
    ) -> Result<Self> {
        if !phi.is_defined_over(&sft) {
            return Err(Error::InvalidPotential("phi is not defined over the shift".into()));
        }
        if !psi.is_defined_over(&sft) {
            return Err(Error::InvalidPotential("psi is not defined over the shift".into()));
        }
        let min = psi.min_value();
        if !(min > floor) {
            return Err(Error::NonPositivePsi { min, floor });
        }
        Ok(InducedProblem { sft, phi, psi })
    }

    pub fn sft(&self) -> &Sft {
        &self.sft
    }

    pub fn phi(&self) -> &LocallyConstantPotential {
        &self.phi
    }

    pub fn psi(&self) -> &LocallyConstantPotential {
        &self.psi
    }

    /// `max(memory(phi), memory(psi))`.
    pub fn memory(&self) -> usize {
        self.phi.memory().max(self.psi.memory())
    }

    /// Same problem with both potentials at memory at most 2, on the block
    /// shift when recoding is needed. Measures live on this presentation.
    pub fn markov_view(&self, cap: EnumerationCap) -> Result<MarkovView> {
        let recoded = recode_to_memory2(&self.sft, &[self.phi.clone(), self.psi.clone()], cap)?;
        let mut pots = recoded.potentials.into_iter();
        let phi = pots.next().expect("phi");
        let psi = pots.next().expect("psi");
        Ok(MarkovView {
            problem: InducedProblem {
                sft: recoded.sft,
                phi,
                psi,
            },
            blocks: recoded.blocks,
        })
    }

    /// `phi - beta psi`.
    pub fn combined(&self, beta: f64) -> Result<LocallyConstantPotential> {
        self.phi.linear_combination(1.0, &self.psi, -beta, &self.sft)
    }
}

/// A problem presented with memory at most 2, plus the block code back to the
/// original alphabet (`None` when no recoding was needed).
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovView {
    pub problem: InducedProblem,
    pub blocks: Option<BlockCode>,
}

/// Tolerances for the root solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    pub tol_beta: f64,
    pub spectral: SpectralSettings,
    pub cap: EnumerationCap,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            tol_beta: 1e-10,
            spectral: SpectralSettings::default(),
            cap: EnumerationCap::default(),
        }
    }
}

impl SolverSettings {
    pub fn with_tolerances(tol_beta: f64, tol_inner: f64) -> Self {
        SolverSettings {
            tol_beta,
            spectral: SpectralSettings {
                tol: tol_inner,
                ..SpectralSettings::default()
            },
            ..SolverSettings::default()
        }
    }
}

/// Result of the Bowen-equation bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BowenRoot {
    /// Midpoint of the final bracket.
    pub beta: f64,
    pub lower: f64,
    pub upper: f64,
    /// `P(phi - beta psi)` at `beta`.
    pub residual: f64,
    /// Number of inner pressure evaluations.
    pub evaluations: usize,
}

impl BowenRoot {
    pub fn bracket_width(&self) -> f64 {
        self.upper - self.lower
    }
}

const MAX_BRACKET_EXPANSIONS: usize = 64;

/// Solves `P(phi - beta psi) = 0` by bisection to a bracket of width `tol_beta`.
pub fn induced_pressure_root(prob: &InducedProblem, tol_beta: f64, tol_inner: f64) -> Result<BowenRoot> {
    induced_pressure_root_with(prob, &SolverSettings::with_tolerances(tol_beta, tol_inner))
}

pub fn induced_pressure_root_with(prob: &InducedProblem, settings: &SolverSettings) -> Result<BowenRoot> {
    if !(settings.tol_beta > 0.0) {
        return Err(Error::InvalidArgument("tol_beta must be positive".into()));
    }
    let pencil = PressurePencil::new(&prob.sft, &prob.phi, &prob.psi, settings.spectral, settings.cap)?;
    let mut evaluations = 0usize;
    let mut g = |beta: f64| {
        evaluations += 1;
        pencil.pressure(beta)
    };

    // P(phi) - beta max psi <= g(beta) <= P(phi) - beta min psi for beta >= 0
    // (reversed for beta < 0), so the root lies between P(phi)/max psi and
    // P(phi)/min psi.
    let p0 = g(0.0)?;
    let a = p0 / prob.psi.max_value();
    let b = p0 / prob.psi.min_value();
    let mut lo = a.min(b) - 1.0;
    let mut hi = a.max(b) + 1.0;
    let mut step = 1.0;
    let mut g_lo = g(lo)?;
    let mut expansions = 0;
    while g_lo <= 0.0 {
        step *= 2.0;
        lo -= step;
        g_lo = g(lo)?;
        expansions += 1;
        if expansions > MAX_BRACKET_EXPANSIONS {
            return Err(Error::NotConverged {
                what: "root bracketing",
                iterations: expansions,
                residual: g_lo,
            });
        }
    }
    step = 1.0;
    let mut g_hi = g(hi)?;
    while g_hi >= 0.0 {
        step *= 2.0;
        hi += step;
        g_hi = g(hi)?;
        expansions += 1;
        if expansions > MAX_BRACKET_EXPANSIONS {
            return Err(Error::NotConverged {
                what: "root bracketing",
                iterations: expansions,
                residual: g_hi,
            });
        }
    }

    while hi - lo > settings.tol_beta {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = g(mid)?;
        if v > 0.0 {
            lo = mid;
        } else if v < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            hi = mid;
        }
    }
    let beta = 0.5 * (lo + hi);
    let residual = g(beta)?;
    Ok(BowenRoot {
        beta,
        lower: lo,
        upper: hi,
        residual,
        evaluations,
    })
}

/// BS dimension of the whole shift with respect to `psi`: the induced
/// pressure of the zero potential, i.e. the root of `P(-s psi) = 0`.
pub fn bs_dimension(sft: &Sft, psi: &LocallyConstantPotential, tol: f64) -> Result<f64> {
    bs_dimension_with(
        sft,
        psi,
        &SolverSettings::with_tolerances(tol, SpectralSettings::default().tol),
    )
}

pub fn bs_dimension_with(sft: &Sft, psi: &LocallyConstantPotential, settings: &SolverSettings) -> Result<f64> {
    let zero = LocallyConstantPotential::constant(sft, 0.0)?;
    let prob = InducedProblem::new(sft.clone(), zero, psi.clone())?;
    Ok(induced_pressure_root_with(&prob, settings)?.beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pressure::pressure_spectral;

    const GOLDEN_LOG: f64 = 0.481_211_825_059_603_4;

    fn constant(sft: &Sft, c: f64) -> LocallyConstantPotential {
        LocallyConstantPotential::constant(sft, c).unwrap()
    }

    #[test]
    fn psi_must_be_positive() {
        let sft = Sft::full(2).unwrap();
        let err = InducedProblem::new(sft.clone(), constant(&sft, 0.0), constant(&sft, 0.0));
        assert!(matches!(err, Err(Error::NonPositivePsi { .. })));
        let neg = LocallyConstantPotential::from_symbol_values(&sft, &[1.0, -1.0]).unwrap();
        assert!(InducedProblem::new(sft.clone(), constant(&sft, 0.0), neg).is_err());
        let other = Sft::full(3).unwrap();
        let foreign = LocallyConstantPotential::from_fn(&sft, 2, |_| 1.0).unwrap();
        assert!(InducedProblem::new(other.clone(), constant(&other, 0.0), foreign).is_err());
    }

    #[test]
    fn unit_psi_gives_classical_pressure() {
        let gm = Sft::golden_mean();
        let prob = InducedProblem::new(gm.clone(), constant(&gm, 0.0), constant(&gm, 1.0)).unwrap();
        let root = induced_pressure_root(&prob, 1e-10, 1e-12).unwrap();
        assert!((root.beta - GOLDEN_LOG).abs() < 1e-9);
        assert!(root.bracket_width() <= 1e-10);
        assert!(root.residual.abs() < 1e-9);

        let phi = LocallyConstantPotential::from_symbol_values(&gm, &[0.3, -1.1]).unwrap();
        let prob = InducedProblem::new(gm.clone(), phi.clone(), constant(&gm, 1.0)).unwrap();
        let root = induced_pressure_root(&prob, 1e-10, 1e-12).unwrap();
        let p = pressure_spectral(&gm, &phi, 1e-12).unwrap();
        assert!((root.beta - p).abs() < 1e-9);
    }

    #[test]
    fn constant_psi_divides() {
        let gm = Sft::golden_mean();
        let prob = InducedProblem::new(gm.clone(), constant(&gm, 0.0), constant(&gm, 2.0)).unwrap();
        let root = induced_pressure_root(&prob, 1e-10, 1e-12).unwrap();
        assert!((root.beta - GOLDEN_LOG / 2.0).abs() < 1e-9);
    }

    #[test]
    fn single_symbol_quotient() {
        let one = Sft::full(1).unwrap();
        for (c, d) in [(0.7, 1.3), (-2.0, 0.5), (0.0, 3.0)] {
            let prob = InducedProblem::new(one.clone(), constant(&one, c), constant(&one, d)).unwrap();
            let root = induced_pressure_root(&prob, 1e-12, 1e-12).unwrap();
            assert!((root.beta - c / d).abs() < 1e-11, "{c}/{d}: {}", root.beta);
        }
    }

    #[test]
    fn bracket_expands_for_far_roots() {
        let full = Sft::full(2).unwrap();
        let phi = LocallyConstantPotential::from_symbol_values(&full, &[40.0, 41.0]).unwrap();
        let psi = LocallyConstantPotential::from_symbol_values(&full, &[0.01, 3.0]).unwrap();
        let prob = InducedProblem::new(full, phi, psi).unwrap();
        let root = induced_pressure_root(&prob, 1e-10, 1e-12).unwrap();
        assert!(root.residual.abs() < 1e-8);
    }

    #[test]
    fn bs_dimension_examples() {
        let full = Sft::full(2).unwrap();
        let ln2 = 2f64.ln();
        let psi = LocallyConstantPotential::from_symbol_values(&full, &[ln2, ln2]).unwrap();
        assert!((bs_dimension(&full, &psi, 1e-10).unwrap() - 1.0).abs() < 1e-9);
        let psi = LocallyConstantPotential::from_symbol_values(&full, &[ln2, 4f64.ln()]).unwrap();
        let s = bs_dimension(&full, &psi, 1e-10).unwrap();
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((s - golden.log2()).abs() < 1e-9);
        assert!((s - 0.694_241_9).abs() < 1e-7);
        let one = Sft::full(1).unwrap();
        let s = bs_dimension(&one, &constant(&one, 3f64.ln()), 1e-10).unwrap();
        assert!(s.abs() < 1e-9);
    }

    #[test]
    fn reducible_shift_fails() {
        let tri = Sft::new(&[vec![1, 1], vec![0, 1]]).unwrap();
        let prob = InducedProblem::new(tri.clone(), constant(&tri, 0.0), constant(&tri, 1.0)).unwrap();
        assert_eq!(induced_pressure_root(&prob, 1e-10, 1e-12), Err(Error::NotIrreducible));
    }

    #[test]
    fn markov_view_recodes_high_memory() {
        let gm = Sft::golden_mean();
        let psi = LocallyConstantPotential::from_fn(&gm, 3, |w| 1.0 + w[2] as f64).unwrap();
        let prob = InducedProblem::new(gm.clone(), constant(&gm, 0.0), psi).unwrap();
        let view = prob.markov_view(EnumerationCap::default()).unwrap();
        assert_eq!(view.problem.sft().alphabet_size(), 3);
        assert_eq!(view.problem.memory(), 2);
        assert!(view.blocks.is_some());
        let a = induced_pressure_root(&prob, 1e-10, 1e-12).unwrap().beta;
        let b = induced_pressure_root(&view.problem, 1e-10, 1e-12).unwrap().beta;
        assert!((a - b).abs() < 1e-9);
    }
}
