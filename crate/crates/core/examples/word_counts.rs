// Counts admissible words of the golden-mean shift and checks recurrence.
// The counts are Fibonacci numbers.

use induced_pressure::{EnumerationCap, Sft, Word};

fn main() -> induced_pressure::Result<()> {
    let gm = Sft::golden_mean();
    println!(
        "irreducible {}, period {:?}, mixing {}",
        gm.is_irreducible(),
        gm.period(),
        gm.is_mixing()
    );
    for n in 1..=10 {
        println!("words of length {n:>2}: {}", gm.count_words(n)?);
    }
    let words = gm.enumerate_words(4, EnumerationCap::default())?;
    let shown: Vec<String> = words.iter().map(|w| w.to_string()).collect();
    println!("length 4: {}", shown.join(" "));
    // symbols are 1-based in text
    let w = Word::parse("1211")?;
    println!("{w} admissible: {}", gm.is_admissible(w.symbols()));
    Ok(())
}
