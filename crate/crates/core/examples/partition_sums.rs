// Spanning and separated partition sums Q_T over the lengths that cross T,
// and the definitional estimate built from them.

use induced_pressure::induced::{induced_pressure_definitional, partition_sums};
use induced_pressure::{induced_pressure_root, EnumerationCap, InducedProblem, LocallyConstantPotential, Sft};

fn main() -> induced_pressure::Result<()> {
    let gm = Sft::golden_mean();
    let phi = LocallyConstantPotential::constant(&gm, 0.0)?;
    let psi = LocallyConstantPotential::from_symbol_values(&gm, &[1.0, 2.0])?;
    let prob = InducedProblem::new(gm, phi, psi)?;
    let cap = EnumerationCap::default();

    let (q, p) = partition_sums(&prob, 6.0, cap)?;
    println!("T = 6, S_T = {:?}", q.s_set());
    for (a, b) in q.per_n.iter().zip(&p.per_n) {
        println!(
            "  n = {:>2}: spanning {:>4} cylinders sum {:>8.3}, separated sum {:>8.3}",
            a.n, a.cylinders, a.sum, b.sum
        );
    }
    println!("  log rates: spanning {:.5}, separated {:.5}", q.log_rate, p.log_rate);

    let est = induced_pressure_definitional(&prob, 24.0, 0.4, cap)?;
    let beta = induced_pressure_root(&prob, 1e-12, 1e-13)?.beta;
    println!(
        "definitional estimate {:.5} (validation only), root {beta:.5}, partial {}",
        est.estimate, est.partial
    );
    Ok(())
}
