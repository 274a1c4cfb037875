// Random Markov measures never beat the root; the Gibbs measure attains it.
// The root is solved to 1e-10, so quotients agree with it to that level.

use induced_pressure::induced::SolverSettings;
use induced_pressure::measures::SearchSettings;
use induced_pressure::{gibbs_measure, variational_search, InducedProblem, LocallyConstantPotential, Sft};

fn main() -> induced_pressure::Result<()> {
    let gm = Sft::golden_mean();
    let phi = LocallyConstantPotential::from_symbol_values(&gm, &[0.2, -0.3])?;
    let psi = LocallyConstantPotential::from_symbol_values(&gm, &[1.0, 2.0])?;
    let prob = InducedProblem::new(gm, phi, psi)?;
    let (gibbs, beta) = gibbs_measure(&prob, &SolverSettings::default())?;

    let settings = SearchSettings::new(500, 500, 7);
    let blind = variational_search(&prob, &settings, None)?;
    let seeded = variational_search(&prob, &settings, Some(&gibbs))?;
    println!("beta*                      {beta:.9}");
    println!("best random or refined     {:.9}", blind.max_sampled);
    println!("best with Gibbs injected   {:.9}", seeded.best_quotient);
    Ok(())
}
