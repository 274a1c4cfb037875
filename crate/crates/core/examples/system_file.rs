// Reads a system file, runs a subcommand through the library entry point
// and re-emits the file in canonical form.

use induced_pressure::cli::{emit_system, parse_system, run};

const SYSTEM: &str = "\
# golden mean with a two-symbol roof
[shift]
1 1
1 0

[potential zero memory=1]
* 0

[potential roof memory=1]
1 1
2 log(3)

[options]
seed = 7
";

fn main() -> induced_pressure::Result<()> {
    let system = parse_system(SYSTEM).map_err(|e| induced_pressure::Error::InvalidArgument(e.to_string()))?;
    print!("{}", emit_system(&system));

    let path = std::env::temp_dir().join("induced_pressure_example.sys");
    std::fs::write(&path, SYSTEM).expect("temp dir is writable");
    let out = run([
        "induced-pressure",
        "induced",
        path.to_str().unwrap(),
        "--phi",
        "zero",
        "--psi",
        "roof",
    ]);
    std::fs::remove_file(&path).ok();
    println!("exit code {}", out.code);
    print!("{}{}", out.stdout, out.stderr);
    Ok(())
}
