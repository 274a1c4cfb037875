// BS dimension of a Moran construction: two pieces with contraction
// ratios 1/2 and 1/4, coded by the full 2-shift.

use induced_pressure::{bs_dimension, LocallyConstantPotential, Sft};

fn main() -> induced_pressure::Result<()> {
    let full = Sft::full(2)?;
    let psi = LocallyConstantPotential::from_symbol_values(&full, &[2f64.ln(), 4f64.ln()])?;
    let s = bs_dimension(&full, &psi, 1e-12)?;
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    println!(
        "dimension {s:.12}, closed form log2 of the golden ratio {:.12}",
        golden.log2()
    );
    // the Moran equation 2^-s + 4^-s = 1
    println!("moran residual {:.2e}", 2f64.powf(-s) + 4f64.powf(-s) - 1.0);
    Ok(())
}
