//! Every program under `examples/` runs to completion.
//!
//! A full `cargo test` builds the examples next to the test binaries, so they
//! are located relative to the running executable. Filtered runs such as
//! `cargo test --test examples_run` skip that step, and the test then builds
//! them itself.

use std::path::PathBuf;
use std::process::Command;

const EXAMPLES: &[&str] = &[
    "cat_states",
    "cli_job",
    "gaussian_photon_statistics",
    "hermite_polynomials",
    "oscillator_flow",
    "parametric_squeezing",
    "phase_space_functions",
    "propagators",
    "symplectic_tomography",
    "tomography_round_trip",
];

fn examples_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let dir = profile_dir.join("examples");
    let built = EXAMPLES
        .iter()
        .all(|name| dir.join(format!("{name}{}", std::env::consts::EXE_SUFFIX)).exists());
    if !built {
        let mut cargo = Command::new(env!("CARGO"));
        cargo.args(["build", "--examples", "--manifest-path", concat!(env!("CARGO_MANIFEST_DIR"), "/Cargo.toml")]);
        if profile_dir.file_name().is_some_and(|n| n == "release") {
            cargo.arg("--release");
        }
        assert!(cargo.status().unwrap().success(), "building the examples failed");
    }
    dir
}

#[test]
fn the_list_covers_the_examples_directory() {
    let src = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples");
    let mut found: Vec<String> = std::fs::read_dir(src)
        .unwrap()
        .filter_map(|e| {
            let path = e.unwrap().path();
            (path.extension()? == "rs").then(|| path.file_stem().unwrap().to_string_lossy().into_owned())
        })
        .collect();
    found.sort();
    assert_eq!(found, EXAMPLES);
}

#[test]
fn every_example_succeeds() {
    let dir = examples_dir();
    for name in EXAMPLES {
        let path = dir.join(format!("{name}{}", std::env::consts::EXE_SUFFIX));
        assert!(path.exists(), "{} was not built", path.display());
        let out = Command::new(&path).output().unwrap();
        assert!(
            out.status.success(),
            "{name} failed:\n{}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stdout.is_empty(), "{name} printed nothing");
    }
}
