//! Running `qopt` jobs from library code: a configuration is parsed from
//! JSON, executed, and its CSV, metadata and plot script land in a
//! directory, exactly as the command-line tool would produce them.

use qopt::cli::{execute_job, parse_config};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::temp_dir().join("qopt-cli-example");
    let jobs = [
        r#"{ "command": "pnd", "name": "coherent", "state": { "kind": "coherent", "alpha": [[1.0, 0.5]] } }"#,
        r#"{
            "command": "qfunc",
            "name": "thermal",
            "state": { "kind": "thermal", "temperature": 0.5, "omega": 1.0 },
            "grid": { "q": { "min": -4, "max": 4, "n": 33 }, "p": { "min": -4, "max": 4, "n": 33 } }
        }"#,
        r#"{
            "command": "evolve",
            "name": "oscillator",
            "state": { "kind": "squeezed", "r": 0.5 },
            "hamiltonian": { "preset": "oscillator", "mass": 1.0, "omega": 1.0 },
            "times": { "min": 0, "max": 3.14159, "n": 9 }
        }"#,
    ];
    for text in jobs {
        let cfg = parse_config(text)?;
        let outcome = execute_job(&cfg, &out, &out)?;
        println!("{} -> {}", cfg.command, out.display());
        for f in &outcome.artifacts.files {
            println!("  {}", f.file_name().unwrap().to_string_lossy());
        }
        println!("  summary {}", outcome.summary);
    }

    // Configuration errors name the offending field.
    let bad = r#"{ "command": "wigner", "state": { "kind": "vacuum" }, "grid": { "q": { "min": 1, "max": 0, "n": 5 }, "p": { "min": 0, "max": 1, "n": 5 } } }"#;
    match parse_config(bad) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
