//! Link-level Monte Carlo simulation of the cooperation protocol.
//!
//! One round: the `N` sources transmit interleaved packets; the relay
//! combines its `M` antennas per bit, decodes, and (genie-aided) compares
//! against the truth. On success it encodes the parity packets and sends
//! each parity bit on the instantaneously strongest antenna; the
//! destination runs the Viterbi decoder over systematic and parity
//! observations. On failure the destination falls back to per-bit hard
//! decisions on the direct paths.
//!
//! Every random draw derives from `(master_seed, point, round, lane)`, so
//! results are identical for any worker count or schedule.

use rayon::prelude::*;

use crate::channel::{
    db_to_linear, sample_gaussian, sample_nakagami, select_best, stream_rng, Interleaver, Lane,
    SnrGeometry,
};
use crate::code::{encode, viterbi_decode, BitObs, SoftObservation, Trellis};
use crate::gf2::GeneratorMatrix;
use crate::{Error, Result};
use rand::Rng;

/// Forces fixed channel gains on selected link classes; validation hooks
/// for degenerate-channel checks, inert by default.
#[derive(Clone, Copy, Debug, Default)]
pub struct ChannelOverrides {
    pub sr_gain: Option<f64>,
    pub sd_gain: Option<f64>,
    pub rd_gain: Option<f64>,
}

/// Static description of one simulated network.
#[derive(Clone, Debug)]
pub struct SimConfig {
    pub generator: GeneratorMatrix,
    pub antennas: u32,
    pub nakagami_m: u32,
    /// Information bits per packet (also the fading block depth).
    pub packet_len: usize,
    pub eta: f64,
    pub beta: f64,
    pub interleaver_depth: usize,
    pub master_seed: u64,
    pub overrides: ChannelOverrides,
}

/// Per-point stopping rule: collect `target_errors` bit errors (after at
/// least `min_rounds` rounds) or give up at `max_rounds` and flag the
/// point as partial.
#[derive(Clone, Copy, Debug)]
pub struct StopRule {
    pub target_errors: u64,
    pub min_rounds: u64,
    pub max_rounds: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule { target_errors: 200, min_rounds: 1_000, max_rounds: 10_000_000 }
    }
}

/// Outcome of a single protocol round.
#[derive(Clone, Debug)]
pub struct RoundOutcome {
    pub relay_success: bool,
    pub bit_errors_per_source: Vec<u32>,
    /// Information bits counted (tail excluded).
    pub bits_counted: u32,
    /// Occupied time slots: `N` on failure, `N + M'` on success.
    pub channel_uses: u32,
}

/// Accumulated statistics of one simulated operating point.
#[derive(Clone, Copy, Debug)]
pub struct PointStats {
    pub trials: u64,
    pub bit_errors: u64,
    pub ber: f64,
    /// 95% Wilson interval half-width on the BER.
    pub ci_radius: f64,
    pub ps_empirical: f64,
    /// Information symbols per transmitted symbol, termination included.
    pub throughput_net: f64,
    /// Slot-level throughput, termination ignored.
    pub throughput_gross: f64,
    /// Set when the round budget ran out before the error target.
    pub partial: bool,
}

/// One entry of a relay-destination SNR sweep.
#[derive(Clone, Copy, Debug)]
pub struct SweepPoint {
    pub gamma_rd_db: f64,
    pub stats: PointStats,
}

/// One entry of a relay-position sweep.
#[derive(Clone, Copy, Debug)]
pub struct BetaPoint {
    pub beta: f64,
    pub stats: PointStats,
}

/// Simulates one round. Draw order within each lane is fixed; lanes are
/// independent streams.
pub fn run_round(
    cfg: &SimConfig,
    trellis: &Trellis,
    geometry: &SnrGeometry,
    point: u32,
    round: u64,
) -> RoundOutcome {
    let n = cfg.packet_len;
    let sources = trellis.sources();
    let streams = trellis.parity_streams();
    let antennas = cfg.antennas as usize;
    let total = trellis.total_len(n);
    let sigma = 0.5f64.sqrt(); // N0 = 1, E_b = 1; link SNR lives in the gains
    let iv = Interleaver::new(cfg.interleaver_depth, n).expect("validated config");
    let blocks_info = iv.block_indices(n, n);
    let blocks_total = iv.block_indices(n, total);

    // source packets
    let mut bits_rng = stream_rng(cfg.master_seed, point, round, Lane::SourceBits);
    let packets: Vec<Vec<u8>> = (0..sources)
        .map(|_| (0..n).map(|_| bits_rng.gen_range(0..2u8)).collect())
        .collect();

    // relay reception: MRC over the antennas, per bit, genie-checked
    let mut sr_gain_rng = stream_rng(cfg.master_seed, point, round, Lane::SrGain);
    let mut sr_noise_rng = stream_rng(cfg.master_seed, point, round, Lane::SrNoise);
    let gamma_sr = geometry.gamma_sr();
    let mut relay_success = true;
    for packet in &packets {
        let gains: Vec<Vec<f64>> = (0..antennas)
            .map(|_| {
                effective_gains(&mut sr_gain_rng, &blocks_info, cfg.overrides.sr_gain, |rng| {
                    sample_nakagami(rng, cfg.nakagami_m, gamma_sr)
                })
            })
            .collect();
        for (t, &bit) in packet.iter().enumerate() {
            let x = bpsk(bit);
            let mut statistic = 0.0;
            for gain_row in &gains {
                let h = gain_row[t];
                let y = h * x + sample_gaussian(&mut sr_noise_rng, sigma);
                statistic += h * y;
            }
            if u8::from(statistic < 0.0) != bit {
                relay_success = false;
            }
        }
    }

    // direct-path observations, always transmitted
    let mut sd_gain_rng = stream_rng(cfg.master_seed, point, round, Lane::SdGain);
    let mut sd_noise_rng = stream_rng(cfg.master_seed, point, round, Lane::SdNoise);
    let gamma_sd = geometry.gamma_sd;
    let sd_obs: Vec<Vec<BitObs>> = packets
        .iter()
        .map(|packet| {
            let gains =
                effective_gains(&mut sd_gain_rng, &blocks_info, cfg.overrides.sd_gain, |rng| {
                    sample_nakagami(rng, 1, gamma_sd)
                });
            packet
                .iter()
                .zip(&gains)
                .map(|(&bit, &h)| BitObs {
                    value: h * bpsk(bit) + sample_gaussian(&mut sd_noise_rng, sigma),
                    gain: h,
                })
                .collect()
        })
        .collect();

    let mut bit_errors_per_source = vec![0u32; sources];
    let channel_uses;
    if relay_success {
        let cw = encode(trellis, &packets).expect("packet shapes fixed by config");
        // termination bits ride a source-slot-equivalent channel
        let tail_obs: Vec<Vec<BitObs>> = (0..sources)
            .map(|i| {
                (0..trellis.memory())
                    .map(|k| {
                        let h = cfg
                            .overrides
                            .sd_gain
                            .unwrap_or_else(|| sample_nakagami(&mut sd_gain_rng, 1, gamma_sd));
                        BitObs {
                            value: h * bpsk(cw.tail_inputs[i][k])
                                + sample_gaussian(&mut sd_noise_rng, sigma),
                            gain: h,
                        }
                    })
                    .collect()
            })
            .collect();

        // parity over the best antenna, selected per bit
        let mut rd_gain_rng = stream_rng(cfg.master_seed, point, round, Lane::RdGain);
        let mut rd_noise_rng = stream_rng(cfg.master_seed, point, round, Lane::RdNoise);
        let gamma_rd = geometry.gamma_rd();
        let parity_obs: Vec<Vec<Option<BitObs>>> = cw
            .parity
            .iter()
            .map(|stream_bits| {
                let antenna_gains: Vec<Vec<f64>> = (0..antennas)
                    .map(|_| {
                        effective_gains(
                            &mut rd_gain_rng,
                            &blocks_total,
                            cfg.overrides.rd_gain,
                            |rng| sample_nakagami(rng, 1, gamma_rd),
                        )
                    })
                    .collect();
                stream_bits
                    .iter()
                    .enumerate()
                    .map(|(t, &bit)| {
                        let per_bit: Vec<f64> =
                            antenna_gains.iter().map(|row| row[t]).collect();
                        let (_, h) = select_best(&per_bit);
                        Some(BitObs {
                            value: h * bpsk(bit) + sample_gaussian(&mut rd_noise_rng, sigma),
                            gain: h,
                        })
                    })
                    .collect()
            })
            .collect();

        let systematic: Vec<Vec<Option<BitObs>>> = (0..sources)
            .map(|i| {
                sd_obs[i]
                    .iter()
                    .chain(&tail_obs[i])
                    .map(|&o| Some(o))
                    .collect()
            })
            .collect();
        let obs = SoftObservation {
            info_len: n,
            systematic,
            parity: parity_obs,
            energy_per_bit: 1.0,
            noise_half: 0.5,
        };
        let decoded = viterbi_decode(trellis, &obs).expect("dimensions fixed by config");
        for (i, packet) in packets.iter().enumerate() {
            for (t, &bit) in packet.iter().enumerate() {
                if decoded.info[i][t] != bit {
                    bit_errors_per_source[i] += 1;
                }
            }
        }
        channel_uses = (sources + streams) as u32;
    } else {
        for (i, packet) in packets.iter().enumerate() {
            for (t, &bit) in packet.iter().enumerate() {
                let o = sd_obs[i][t];
                if u8::from(o.gain * o.value < 0.0) != bit {
                    bit_errors_per_source[i] += 1;
                }
            }
        }
        channel_uses = sources as u32;
    }

    RoundOutcome {
        relay_success,
        bit_errors_per_source,
        bits_counted: (sources * n) as u32,
        channel_uses,
    }
}

fn bpsk(bit: u8) -> f64 {
    1.0 - 2.0 * f64::from(bit)
}

/// Per-bit fading gains under block fading and interleaving: one draw per
/// coherence block, bits mapped through their transmit positions.
fn effective_gains<R: Rng>(
    rng: &mut R,
    blocks: &[usize],
    forced: Option<f64>,
    mut draw: impl FnMut(&mut R) -> f64,
) -> Vec<f64> {
    if let Some(v) = forced {
        return vec![v; blocks.len()];
    }
    let mut gains = Vec::with_capacity(blocks.len());
    let mut current_block = usize::MAX;
    let mut current_gain = 0.0;
    for &b in blocks {
        if b != current_block {
            current_block = b;
            current_gain = draw(rng);
        }
        gains.push(current_gain);
    }
    gains
}

#[derive(Clone, Copy, Default)]
struct Totals {
    rounds: u64,
    successes: u64,
    bit_errors: u64,
    slot_uses: u64,
}

impl Totals {
    fn add(self, other: Totals) -> Totals {
        Totals {
            rounds: self.rounds + other.rounds,
            successes: self.successes + other.successes,
            bit_errors: self.bit_errors + other.bit_errors,
            slot_uses: self.slot_uses + other.slot_uses,
        }
    }

    fn from_outcome(o: &RoundOutcome) -> Totals {
        Totals {
            rounds: 1,
            successes: u64::from(o.relay_success),
            bit_errors: o.bit_errors_per_source.iter().map(|&e| u64::from(e)).sum(),
            slot_uses: u64::from(o.channel_uses),
        }
    }
}

fn run_point(
    cfg: &SimConfig,
    trellis: &Trellis,
    geometry: &SnrGeometry,
    point: u32,
    stop: &StopRule,
) -> PointStats {
    let mut totals = Totals::default();
    while totals.rounds < stop.max_rounds {
        let batch = batch_size(totals.rounds).min(stop.max_rounds - totals.rounds);
        let start = totals.rounds;
        let batch_totals = (start..start + batch)
            .into_par_iter()
            .map(|round| Totals::from_outcome(&run_round(cfg, trellis, geometry, point, round)))
            .reduce(Totals::default, Totals::add);
        totals = totals.add(batch_totals);
        if totals.bit_errors >= stop.target_errors && totals.rounds >= stop.min_rounds {
            break;
        }
    }
    finalize(cfg, trellis, totals, stop)
}

fn batch_size(done: u64) -> u64 {
    if done < 8_192 {
        2_048
    } else {
        32_768
    }
}

fn finalize(cfg: &SimConfig, trellis: &Trellis, totals: Totals, stop: &StopRule) -> PointStats {
    let sources = trellis.sources() as u64;
    let n = cfg.packet_len as u64;
    let total_len = trellis.total_len(cfg.packet_len) as u64;
    let bits = totals.rounds * sources * n;
    let ber = if bits > 0 { totals.bit_errors as f64 / bits as f64 } else { 0.0 };
    let info_symbols = (totals.rounds * sources * n) as f64;
    let net = info_symbols / (totals.slot_uses * total_len) as f64;
    let gross = (totals.rounds * sources) as f64 / totals.slot_uses as f64;
    PointStats {
        trials: totals.rounds,
        bit_errors: totals.bit_errors,
        ber,
        ci_radius: wilson_radius(totals.bit_errors, bits),
        ps_empirical: totals.successes as f64 / totals.rounds as f64,
        throughput_net: net,
        throughput_gross: gross,
        partial: totals.bit_errors < stop.target_errors,
    }
}

/// 95% Wilson score interval half-width for `k` successes in `n` trials.
pub fn wilson_radius(k: u64, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let z = 1.959_963_984_540_054f64;
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / (1.0 + z2 / nf)
}

fn validated_trellis(cfg: &SimConfig) -> Result<Trellis> {
    if cfg.packet_len == 0 {
        return Err(Error::InvalidParameter("packet length must be positive".into()));
    }
    if cfg.antennas == 0 || cfg.nakagami_m == 0 {
        return Err(Error::InvalidParameter(
            "antenna count and Nakagami m must be positive".into(),
        ));
    }
    Trellis::build(&cfg.generator)
}

/// BER sweep over relay-destination SNR points (dB). The geometry maps
/// each point back to the source-destination SNR.
pub fn run_sweep(cfg: &SimConfig, snr_rd_db: &[f64], stop: &StopRule) -> Result<Vec<SweepPoint>> {
    if snr_rd_db.is_empty() {
        return Err(Error::InvalidParameter("empty SNR grid".into()));
    }
    let trellis = validated_trellis(cfg)?;
    let mut out = Vec::with_capacity(snr_rd_db.len());
    for (idx, &db) in snr_rd_db.iter().enumerate() {
        let geometry = SnrGeometry::from_gamma_rd(db_to_linear(db), cfg.eta, cfg.beta)?;
        let stats = run_point(cfg, &trellis, &geometry, idx as u32, stop);
        out.push(SweepPoint { gamma_rd_db: db, stats });
    }
    Ok(out)
}

/// BER as a function of the relay position `beta = d_sd/d_sr` at fixed
/// relay-destination SNR.
pub fn relay_position_sweep(
    cfg: &SimConfig,
    beta_grid: &[f64],
    gamma_rd_db: f64,
    stop: &StopRule,
) -> Result<Vec<BetaPoint>> {
    if beta_grid.is_empty() {
        return Err(Error::InvalidParameter("empty beta grid".into()));
    }
    let trellis = validated_trellis(cfg)?;
    let mut out = Vec::with_capacity(beta_grid.len());
    for (idx, &beta) in beta_grid.iter().enumerate() {
        let geometry = SnrGeometry::from_gamma_rd(db_to_linear(gamma_rd_db), cfg.eta, beta)?;
        let stats = run_point(cfg, &trellis, &geometry, idx as u32, stop);
        out.push(BetaPoint { beta, stats });
    }
    Ok(out)
}
