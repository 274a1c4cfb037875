// Classical pressure from the Perron eigenvalue, against the finite-n
// partition-sum estimate.

use induced_pressure::pressure::pressure_definitional;
use induced_pressure::{pressure_spectral, EnumerationCap, LocallyConstantPotential, Sft};

fn main() -> induced_pressure::Result<()> {
    let gm = Sft::golden_mean();
    // memory 2: the value depends on the pair (x0, x1)
    let phi = LocallyConstantPotential::from_fn(&gm, 2, |w| if w == [0, 0] { 0.5 } else { -0.25 })?;
    let p = pressure_spectral(&gm, &phi, 1e-13)?;
    println!("spectral P(phi) = {p:.12}");
    for n in [4, 8, 12, 16] {
        let est = pressure_definitional(&gm, &phi, n, EnumerationCap::default())?;
        println!("n = {n:>2}: (1/n) log Z_n = {est:.6}, gap {:.2e}", est - p);
    }
    Ok(())
}
