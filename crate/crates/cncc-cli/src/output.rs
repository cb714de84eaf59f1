//! CSV emission with a reproducibility manifest.

use std::io::Write;

use crate::config::Experiment;

/// Writes the '#'-prefixed manifest block: subcommand, full network
/// parameters, seed, and stop rule, enough to reproduce the file.
pub fn manifest(w: &mut dyn Write, subcommand: &str, exp: &Experiment) -> std::io::Result<()> {
    writeln!(w, "# cncc {subcommand}")?;
    writeln!(w, "# network = {}", exp.label)?;
    for (i, row) in exp.generator.to_string().lines().enumerate() {
        writeln!(w, "# generator row {} = {row}", i + 1)?;
    }
    writeln!(
        w,
        "# antennas = {}  parity_streams = {}  memory = {}",
        exp.antennas,
        exp.generator.parity_streams(),
        exp.generator.declared_memory()
    )?;
    writeln!(
        w,
        "# m = {}  n = {}  eta = {}  beta = {}  depth = {}  l = {}",
        exp.nakagami_m, exp.packet_len, exp.eta, exp.beta, exp.depth, exp.packets_per_source
    )?;
    writeln!(w, "# seed = {}  horizon = {}", exp.seed, exp.horizon)?;
    writeln!(
        w,
        "# stop: target_errors = {}  min_rounds = {}  max_rounds = {}",
        exp.stop.target_errors, exp.stop.min_rounds, exp.stop.max_rounds
    )?;
    Ok(())
}

/// Probability formatting: scientific notation, '.' decimal point.
pub fn prob(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:e}")
    }
}
