// Induced pressure as the root of beta -> P(phi - beta psi), with the
// bracket the bisection closed on.

use induced_pressure::induced::{induced_pressure_root_with, SolverSettings};
use induced_pressure::{pressure_spectral, InducedProblem, LocallyConstantPotential, Sft};

fn main() -> induced_pressure::Result<()> {
    let gm = Sft::golden_mean();
    let phi = LocallyConstantPotential::constant(&gm, 0.0)?;
    let one = LocallyConstantPotential::constant(&gm, 1.0)?;
    let root = induced_pressure_root_with(
        &InducedProblem::new(gm.clone(), phi.clone(), one)?,
        &SolverSettings::default(),
    )?;
    println!(
        "psi = 1: beta* = {:.12} (log golden ratio {:.12})",
        root.beta,
        pressure_spectral(&gm, &phi, 1e-13)?
    );

    let psi = LocallyConstantPotential::from_symbol_values(&gm, &[1.0, 3.0])?;
    let prob = InducedProblem::new(gm, phi, psi)?;
    let root = induced_pressure_root_with(&prob, &SolverSettings::default())?;
    println!(
        "psi = (1, 3): beta* = {:.12}, bracket [{:.12}, {:.12}], {} evaluations",
        root.beta, root.lower, root.upper, root.evaluations
    );
    Ok(())
}
