//! Relay-position behavior of the Monte Carlo simulator.

use cncc::{relay_position_sweep, ChannelOverrides, GeneratorMatrix, SimConfig, StopRule};

fn network(preset: u8, m: u32, seed: u64) -> SimConfig {
    let (generator, antennas) = match preset {
        1 => (GeneratorMatrix::systematic_3_2_3(), 1),
        3 => (GeneratorMatrix::systematic_4_2_3(), 2),
        _ => unreachable!(),
    };
    SimConfig {
        generator,
        antennas,
        nakagami_m: m,
        packet_len: 10,
        eta: 2.0,
        beta: 5.0,
        interleaver_depth: 100,
        master_seed: seed,
        overrides: ChannelOverrides::default(),
    }
}

fn stop(target: u64) -> StopRule {
    StopRule { target_errors: target, min_rounds: 2_000, max_rounds: 3_000_000 }
}

#[test]
fn distant_relay_position_approaches_ideal_relay() {
    // far-left relay, strong source-relay hops: success rate goes to one
    // and the BER matches a genie relay with the same geometry
    let mut cfg = network(1, 2, 71);
    let beta = 25.0;
    let gamma_rd_db = 8.0;
    let real = relay_position_sweep(&cfg, &[beta], gamma_rd_db, &stop(400)).unwrap()[0].stats;
    cfg.overrides.sr_gain = Some(1e3);
    let ideal = relay_position_sweep(&cfg, &[beta], gamma_rd_db, &stop(400)).unwrap()[0].stats;
    assert!(real.ps_empirical > 0.999, "ps {}", real.ps_empirical);
    assert!((ideal.ps_empirical - 1.0).abs() < 1e-12);
    assert!(
        (real.ber - ideal.ber).abs() <= 2.0 * (real.ci_radius + ideal.ci_radius),
        "real {} +- {} vs ideal {} +- {}",
        real.ber,
        real.ci_radius,
        ideal.ber,
        ideal.ci_radius
    );
}

#[test]
fn ber_improves_as_relay_moves_toward_sources() {
    let cfg = network(1, 1, 72);
    let grid = [1.5, 2.0, 3.0, 5.0, 8.0];
    let points = relay_position_sweep(&cfg, &grid, 8.0, &stop(300)).unwrap();
    for pair in points.windows(2) {
        let (a, b) = (pair[0].stats, pair[1].stats);
        assert!(
            b.ber <= a.ber + 2.0 * (a.ci_radius + b.ci_radius),
            "beta {} -> {}: ber {} -> {}",
            pair[0].beta,
            pair[1].beta,
            a.ber,
            b.ber
        );
    }
}

#[test]
fn shape_parameter_saturates_for_close_relays() {
    // with the relay close to the sources the source-relay hops are
    // strong enough that m = 2 and m = 3 perform alike
    let cfg2 = network(3, 2, 73);
    let cfg3 = network(3, 3, 73);
    let grid = [5.0, 8.0];
    let a = relay_position_sweep(&cfg2, &grid, 3.0, &stop(300)).unwrap();
    let b = relay_position_sweep(&cfg3, &grid, 3.0, &stop(300)).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!(
            (x.stats.ber - y.stats.ber).abs() <= 2.0 * (x.stats.ci_radius + y.stats.ci_radius),
            "beta {}: m=2 ber {} vs m=3 ber {}",
            x.beta,
            x.stats.ber,
            y.stats.ber
        );
    }
}
