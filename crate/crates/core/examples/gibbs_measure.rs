// Gibbs measure of phi - beta* psi as a Markov chain, its equilibrium
// check and the cylinder ratio bands.

use induced_pressure::induced::SolverSettings;
use induced_pressure::measures::{equilibrium_check, gibbs_constant_estimate};
use induced_pressure::{gibbs_measure, EnumerationCap, InducedProblem, LocallyConstantPotential, Sft};

fn main() -> induced_pressure::Result<()> {
    let gm = Sft::golden_mean();
    let phi = LocallyConstantPotential::constant(&gm, 0.0)?;
    let one = LocallyConstantPotential::constant(&gm, 1.0)?;
    let prob = InducedProblem::new(gm, phi, one)?;
    let settings = SolverSettings::default();

    // zero potential: the Parry measure
    let (mu, beta) = gibbs_measure(&prob, &settings)?;
    println!("beta* = {beta:.10}");
    for row in mu.transition_rows() {
        println!("  {row:.6?}");
    }
    println!("stationary {:.6?}, entropy {:.10}", mu.stationary(), mu.entropy());

    let eq = equilibrium_check(&mu, &prob, 1e-9, &settings)?;
    println!("quotient {:.12}, gap {:.2e}, passed {}", eq.quotient, eq.gap, eq.passed);
    for band in gibbs_constant_estimate(&mu, &prob, beta, 6, EnumerationCap::default())? {
        println!("  depth {}: ratio in [{:.4}, {:.4}]", band.depth, band.min, band.max);
    }
    Ok(())
}
