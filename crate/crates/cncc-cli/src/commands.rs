//! The four subcommands: enumerate, analyze, simulate, sweep-beta.

use std::io::Write;
use std::time::Instant;

use cncc::channel::db_to_linear;
use cncc::{
    diversity_order, end_to_end_bound, relay_position_sweep, run_sweep, BoundInputs, SimConfig,
    Trellis, WeightEnumerator,
};

use crate::config::{ConfigError, Experiment};
use crate::output::{manifest, prob};

pub struct CommandOutcome {
    /// Set when any point finished flagged (partial statistics or a
    /// truncated bound); the process then exits nonzero.
    pub flagged: bool,
}

fn enumerator(exp: &Experiment) -> Result<WeightEnumerator, ConfigError> {
    let trellis = Trellis::build(&exp.generator)?;
    Ok(WeightEnumerator::enumerate(&trellis, exp.horizon)?)
}

fn bound_inputs(exp: &Experiment, wef: WeightEnumerator) -> BoundInputs {
    BoundInputs {
        wef,
        sources: exp.generator.sources(),
        antennas: exp.antennas,
        nakagami_m: exp.nakagami_m,
        packet_len: exp.packet_len,
        eta: exp.eta,
        beta: exp.beta,
    }
}

fn sim_config(exp: &Experiment) -> SimConfig {
    SimConfig {
        generator: exp.generator.clone(),
        antennas: exp.antennas,
        nakagami_m: exp.nakagami_m,
        packet_len: exp.packet_len,
        eta: exp.eta,
        beta: exp.beta,
        interleaver_depth: exp.depth,
        master_seed: exp.seed,
        overrides: Default::default(),
    }
}

/// Weight table, free distance, dominant patterns over M in {1,2,3}, and
/// the diversity/throughput table of the configured network.
pub fn cmd_enumerate(
    exp: &Experiment,
    csv: &mut dyn Write,
    summary: &mut dyn Write,
) -> Result<CommandOutcome, ConfigError> {
    let started = Instant::now();
    let wef = enumerator(exp)?;
    let dfree = wef.free_distance()?;
    let sources = exp.generator.sources() as u32;
    let parity_streams = exp.generator.parity_streams() as u32;

    manifest(csv, "enumerate", exp).map_err(io_err)?;
    writeln!(csv, "d1,d2,B").map_err(io_err)?;
    for ((d1, d2), b) in wef.terms_by_total_weight() {
        writeln!(csv, "{d1},{d2},{b}").map_err(io_err)?;
    }
    writeln!(csv, "# dfree = {dfree}").map_err(io_err)?;

    writeln!(csv, "# dominant patterns by antenna count").map_err(io_err)?;
    writeln!(csv, "M,dstar,pairs").map_err(io_err)?;
    for antennas in 1..=3u32 {
        let p = wef.dominant_pattern(antennas)?;
        let pairs: Vec<String> = p.pairs.iter().map(|(a, b)| format!("({a};{b})")).collect();
        writeln!(csv, "{antennas},{},{}", p.exponent, pairs.join(" ")).map_err(io_err)?;
    }

    let own = wef.dominant_pattern(exp.antennas)?;
    let throughput_own = reduced_fraction(sources, sources + parity_streams);
    let throughput_lnc = reduced_fraction(sources, sources + exp.antennas);
    writeln!(csv, "# configured network: M = {}, Dstar = {}", exp.antennas, own.exponent)
        .map_err(io_err)?;
    writeln!(csv, "m,diversity_cncc,diversity_lnc,throughput_cncc,throughput_lnc")
        .map_err(io_err)?;
    let mut diversity_row = Vec::new();
    for m in 1..=4u32 {
        let d = diversity_order(own.exponent, exp.antennas, m);
        diversity_row.push(d);
        writeln!(
            csv,
            "{m},{d},{},{throughput_own},{throughput_lnc}",
            exp.antennas + 1
        )
        .map_err(io_err)?;
    }

    writeln!(summary, "{}: dfree = {dfree}, Dstar = {}", exp.label, own.exponent)
        .map_err(io_err)?;
    writeln!(
        summary,
        "diversity (m = 1..4): {:?}; throughput {} vs single-antenna-relay baseline {}",
        diversity_row, throughput_own, throughput_lnc
    )
    .map_err(io_err)?;
    writeln!(summary, "enumerated {} terms in {:?}", wef.terms().count(), started.elapsed())
        .map_err(io_err)?;
    Ok(CommandOutcome { flagged: false })
}

/// Closed-form bound sweep over the relay-destination SNR grid.
pub fn cmd_analyze(
    exp: &Experiment,
    csv: &mut dyn Write,
    summary: &mut dyn Write,
) -> Result<CommandOutcome, ConfigError> {
    let inputs = bound_inputs(exp, enumerator(exp)?);
    manifest(csv, "analyze", exp).map_err(io_err)?;
    writeln!(
        csv,
        "gamma_rd_dB,Pe,Pf,PbGivenF,PbGivenS_bound,Pb_bound,Pb_bound_raw,slope_estimate"
    )
    .map_err(io_err)?;
    let mut flagged = false;
    let mut prev: Option<(f64, f64)> = None; // (gamma_rd linear, raw bound)
    for &db in &exp.snr_db {
        let gamma_rd = db_to_linear(db);
        let gamma_sd = gamma_rd * ((exp.beta - 1.0) / exp.beta).powf(exp.eta);
        let b = end_to_end_bound(&inputs, gamma_sd)?;
        let slope = match prev {
            Some((g0, p0)) => cncc::log_log_slope(p0, g0, b.pb_bound_raw, gamma_rd),
            None => f64::NAN,
        };
        prev = Some((gamma_rd, b.pb_bound_raw));
        flagged |= b.truncated;
        writeln!(
            csv,
            "{db},{},{},{},{},{},{},{}",
            prob(b.pe),
            prob(b.pf),
            prob(b.pb_given_f),
            prob(b.pb_given_s_bound),
            prob(b.pb_bound),
            prob(b.pb_bound_raw),
            prob(slope)
        )
        .map_err(io_err)?;
    }
    if let Some((_, last)) = prev {
        writeln!(summary, "{}: bound at top of grid = {}", exp.label, prob(last))
            .map_err(io_err)?;
    }
    if flagged {
        writeln!(summary, "note: tail estimate above 1% at some points (truncated flag)")
            .map_err(io_err)?;
    }
    Ok(CommandOutcome { flagged })
}

/// Monte Carlo sweep with the matching bound column.
pub fn cmd_simulate(
    exp: &Experiment,
    csv: &mut dyn Write,
    summary: &mut dyn Write,
) -> Result<CommandOutcome, ConfigError> {
    let inputs = bound_inputs(exp, enumerator(exp)?);
    let bounds: Vec<f64> = exp
        .snr_db
        .iter()
        .map(|&db| {
            let gamma_sd = db_to_linear(db) * ((exp.beta - 1.0) / exp.beta).powf(exp.eta);
            end_to_end_bound(&inputs, gamma_sd).map(|b| b.pb_bound_raw)
        })
        .collect::<Result<_, _>>()?;
    refuse_over_budget(exp, &bounds)?;

    let cfg = sim_config(exp);
    let points = run_sweep(&cfg, &exp.snr_db, &exp.stop)?;
    manifest(csv, "simulate", exp).map_err(io_err)?;
    writeln!(
        csv,
        "gamma_rd_dB,trials,bit_errors,ber,ci_radius,ps_empirical,throughput_net,pb_bound_raw"
    )
    .map_err(io_err)?;
    let mut flagged = false;
    for (point, bound) in points.iter().zip(&bounds) {
        let s = &point.stats;
        flagged |= s.partial;
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            point.gamma_rd_db,
            s.trials,
            s.bit_errors,
            prob(s.ber),
            prob(s.ci_radius),
            prob(s.ps_empirical),
            prob(s.throughput_net),
            prob(*bound)
        )
        .map_err(io_err)?;
        writeln!(
            summary,
            "gamma_rd = {} dB: ber = {} ({} errors / {} rounds), throughput net {} / gross {}{}",
            point.gamma_rd_db,
            prob(s.ber),
            s.bit_errors,
            s.trials,
            prob(s.throughput_net),
            prob(s.throughput_gross),
            if s.partial { " [partial]" } else { "" }
        )
        .map_err(io_err)?;
    }
    Ok(CommandOutcome { flagged })
}

/// Relay-position sweep at fixed relay-destination SNR.
pub fn cmd_sweep_beta(
    exp: &Experiment,
    csv: &mut dyn Write,
    summary: &mut dyn Write,
) -> Result<CommandOutcome, ConfigError> {
    let cfg = sim_config(exp);
    let points = relay_position_sweep(
        &cfg,
        &exp.beta_grid,
        exp.beta_sweep_gamma_rd_db,
        &exp.stop,
    )?;
    manifest(csv, "sweep-beta", exp).map_err(io_err)?;
    writeln!(csv, "# gamma_rd_db = {}", exp.beta_sweep_gamma_rd_db).map_err(io_err)?;
    writeln!(csv, "beta,trials,bit_errors,ber,ci_radius,ps_empirical,throughput_net")
        .map_err(io_err)?;
    let mut flagged = false;
    for point in &points {
        let s = &point.stats;
        flagged |= s.partial;
        writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            point.beta,
            s.trials,
            s.bit_errors,
            prob(s.ber),
            prob(s.ci_radius),
            prob(s.ps_empirical),
            prob(s.throughput_net)
        )
        .map_err(io_err)?;
        writeln!(
            summary,
            "beta = {}: ber = {} (ps = {}){}",
            point.beta,
            prob(s.ber),
            prob(s.ps_empirical),
            if s.partial { " [partial]" } else { "" }
        )
        .map_err(io_err)?;
    }
    Ok(CommandOutcome { flagged })
}

/// Simulation-cost gate: estimates rounds per point from the analytic
/// bound (actual BER sits below the bound, so the estimate assumes half
/// the bound) and refuses grids exceeding the budget, suggesting the
/// affordable prefix.
fn refuse_over_budget(exp: &Experiment, bounds: &[f64]) -> Result<(), ConfigError> {
    let bits_per_round = (exp.generator.sources() * exp.packet_len) as f64;
    let mut total = 0u64;
    let mut affordable = Vec::new();
    for (&db, &bound) in exp.snr_db.iter().zip(bounds) {
        let ber_estimate = (bound / 2.0).min(0.5).max(1e-12);
        let rounds = (exp.stop.target_errors as f64 / (ber_estimate * bits_per_round))
            .ceil()
            .min(exp.stop.max_rounds as f64) as u64;
        let rounds = rounds.max(exp.stop.min_rounds);
        total = total.saturating_add(rounds);
        if total <= exp.budget_rounds {
            affordable.push(db);
        }
    }
    if total > exp.budget_rounds {
        let suggestion: Vec<String> = affordable.iter().map(f64::to_string).collect();
        return Err(ConfigError(format!(
            "estimated {total} rounds exceed the budget of {}; trim the grid, e.g. --snr-db {}",
            exp.budget_rounds,
            suggestion.join(",")
        )));
    }
    Ok(())
}

fn reduced_fraction(num: u32, den: u32) -> String {
    let mut a = num;
    let mut b = den;
    while b != 0 {
        (a, b) = (b, a % b);
    }
    format!("{}/{}", num / a, den / a)
}

fn io_err(e: std::io::Error) -> ConfigError {
    ConfigError(format!("write failed: {e}"))
}
