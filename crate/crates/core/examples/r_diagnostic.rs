// Tail sums R_T stay bounded above the root and grow below it.

use induced_pressure::induced::{default_t_grid, r_diagnostic, SolverSettings};
use induced_pressure::{induced_pressure_root, InducedProblem, LocallyConstantPotential, Sft};

fn main() -> induced_pressure::Result<()> {
    let full = Sft::full(2)?;
    let phi = LocallyConstantPotential::from_symbol_values(&full, &[0.3f64.ln(), 0.7f64.ln()])?;
    let psi = LocallyConstantPotential::constant(&full, 2.0)?;
    let prob = InducedProblem::new(full, phi, psi)?;
    let settings = SolverSettings::default();
    let beta = induced_pressure_root(&prob, 1e-12, 1e-13)?.beta;
    let grid = default_t_grid(&prob, 8, &settings)?;
    for b in [beta + 0.2, beta - 0.2] {
        let report = r_diagnostic(&prob, b, &grid, &settings)?;
        println!(
            "beta = {b:+.3}, P = {:+.4}: {}",
            report.pressure,
            report.verdict.as_str()
        );
        for s in &report.samples {
            println!("  T = {:>6.2}  R_T = {:>12.6e}  horizon {}", s.t, s.value, s.horizon);
        }
    }
    Ok(())
}
