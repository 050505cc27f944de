// Reading a run configuration and writing the tables the command line produces.

use std::path::Path;

use multistable_poisson::cli::{write_table, RunConfig, TableKind};

pub fn run_example() -> multistable_poisson::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/sinusoidal.toml");
    let mut cfg = RunConfig::from_file(&path)?;
    cfg.evaluate.k_max = 4;
    println!("lambda {} with seed {}", cfg.model.lambda, cfg.seed);
    for kind in [TableKind::Pmf, TableKind::Upcrossing] {
        let mut out = Vec::new();
        write_table(&cfg, kind, &mut out)?;
        println!("{}:\n{}", kind.file_name(), String::from_utf8_lossy(&out));
    }
    let bad = RunConfig::parse(
        "[model]\nlambda = 1.0\nalpha = { family = \"constant\", value = 1.5 }\n",
        None,
    );
    println!("rejected: {}", bad.expect_err("index outside (0, 1)"));
    Ok(())
}

#[allow(dead_code)]
fn main() -> multistable_poisson::Result<()> {
    run_example()
}
