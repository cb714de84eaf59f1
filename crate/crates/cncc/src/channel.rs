//! Fading samplers, SNR geometry, interleaving, and the per-round RNG
//! stream derivation used by the simulator.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::{Error, Result};

/// Link-budget geometry of the network. `gamma_sd` is the average
/// source-destination SNR (linear); `beta = d_sd / d_sr > 1` places the
/// relay between sources and destination; `eta` is the path-loss exponent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SnrGeometry {
    pub gamma_sd: f64,
    pub eta: f64,
    pub beta: f64,
}

impl SnrGeometry {
    pub fn new(gamma_sd: f64, eta: f64, beta: f64) -> Result<SnrGeometry> {
        if !(gamma_sd > 0.0) {
            return Err(Error::InvalidParameter("gamma_sd must be positive".into()));
        }
        if !(beta > 1.0) {
            return Err(Error::InvalidParameter(
                "beta = d_sd/d_sr must exceed 1 (relay between sources and destination)".into(),
            ));
        }
        if !(eta >= 0.0) {
            return Err(Error::InvalidParameter("eta must be nonnegative".into()));
        }
        Ok(SnrGeometry { gamma_sd, eta, beta })
    }

    /// Geometry pinned by the relay-destination SNR instead.
    pub fn from_gamma_rd(gamma_rd: f64, eta: f64, beta: f64) -> Result<SnrGeometry> {
        if !(gamma_rd > 0.0) {
            return Err(Error::InvalidParameter("gamma_rd must be positive".into()));
        }
        let gamma_sd = gamma_rd * ((beta - 1.0) / beta).powf(eta);
        SnrGeometry::new(gamma_sd, eta, beta)
    }

    /// Average source-relay SNR `beta^eta * gamma_sd`.
    pub fn gamma_sr(&self) -> f64 {
        self.beta.powf(self.eta) * self.gamma_sd
    }

    /// Average relay-destination SNR `(beta/(beta-1))^eta * gamma_sd`.
    pub fn gamma_rd(&self) -> f64 {
        (self.beta / (self.beta - 1.0)).powf(self.eta) * self.gamma_sd
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Draws a Nakagami-m amplitude with mean square `omega`, for integer
/// `m >= 1`, as the root of a sum of `2m` squared Gaussians of variance
/// `omega / 2m` (the squared amplitude is then Gamma(m, omega/m)).
pub fn sample_nakagami<R: Rng + ?Sized>(rng: &mut R, m: u32, omega: f64) -> f64 {
    debug_assert!(m >= 1 && omega > 0.0);
    let sigma = (omega / f64::from(2 * m)).sqrt();
    let mut sum_sq = 0.0;
    for _ in 0..2 * m {
        let g: f64 = rng.sample(StandardNormal);
        let g = g * sigma;
        sum_sq += g * g;
    }
    sum_sq.sqrt()
}

/// Combined SNR after maximal-ratio combining: `ebn0 * sum(h_j^2)`.
pub fn mrc_snr(gains: &[f64], ebn0: f64) -> f64 {
    ebn0 * gains.iter().map(|h| h * h).sum::<f64>()
}

/// Index and amplitude of the strongest branch; ties keep the lowest
/// index. The returned index is 0-based.
pub fn select_best(gains: &[f64]) -> (usize, f64) {
    let mut best = 0usize;
    for (i, &g) in gains.iter().enumerate().skip(1) {
        if g * g > gains[best] * gains[best] {
            best = i;
        }
    }
    (best, gains[best])
}

/// Row-column block interleaver over a span of `depth * packet_len`
/// positions: packets are written one per row of length `packet_len` and
/// transmitted column by column, so consecutive bits of a packet leave
/// `depth` positions apart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interleaver {
    depth: usize,
    packet_len: usize,
}

impl Interleaver {
    pub fn new(depth: usize, packet_len: usize) -> Result<Interleaver> {
        if depth == 0 || packet_len == 0 {
            return Err(Error::InvalidParameter(
                "interleaver depth and packet length must be positive".into(),
            ));
        }
        Ok(Interleaver { depth, packet_len })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn span(&self) -> usize {
        self.depth * self.packet_len
    }

    /// Transmit position of stream bit `s` (0 <= s < span).
    pub fn position(&self, s: usize) -> usize {
        let row = s / self.packet_len;
        let col = s % self.packet_len;
        col * self.depth + row
    }

    pub fn interleave<T: Copy>(&self, bits: &[T]) -> Result<Vec<T>> {
        if bits.len() != self.span() {
            return Err(Error::Shape(format!(
                "interleaver span is {}, input has {} bits",
                self.span(),
                bits.len()
            )));
        }
        let mut out = vec![bits[0]; bits.len()];
        for (s, &b) in bits.iter().enumerate() {
            out[self.position(s)] = b;
        }
        Ok(out)
    }

    pub fn deinterleave<T: Copy>(&self, bits: &[T]) -> Result<Vec<T>> {
        if bits.len() != self.span() {
            return Err(Error::Shape(format!(
                "interleaver span is {}, input has {} bits",
                self.span(),
                bits.len()
            )));
        }
        let mut out = vec![bits[0]; bits.len()];
        for (s, slot) in out.iter_mut().enumerate() {
            *slot = bits[self.position(s)];
        }
        Ok(out)
    }

    /// Fading block index (blocks of `block_len` consecutive transmit
    /// positions) seen by each bit of the packet in row 0.
    pub fn block_indices(&self, block_len: usize, count: usize) -> Vec<usize> {
        (0..count).map(|c| (c * self.depth) / block_len).collect()
    }
}

/// Draw lanes of one simulation round. Each lane is an independent stream,
/// so reordering draws in one lane never perturbs another.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lane {
    SourceBits = 0,
    SrGain = 1,
    SrNoise = 2,
    SdGain = 3,
    SdNoise = 4,
    RdGain = 5,
    RdNoise = 6,
}

/// Deterministic per-(point, round, lane) RNG stream from a master seed.
/// Results are identical for any thread schedule because nothing is
/// shared: the stream id encodes the coordinates.
pub fn stream_rng(master_seed: u64, point: u32, round: u64, lane: Lane) -> ChaCha12Rng {
    assert!(round < 1 << 48, "round index exceeds the stream id layout");
    assert!(point < 1 << 8, "point index exceeds the stream id layout");
    let mut seed = [0u8; 32];
    let mut x = master_seed;
    for chunk in seed.chunks_mut(8) {
        x = splitmix64(x);
        chunk.copy_from_slice(&x.to_le_bytes());
    }
    let mut rng = ChaCha12Rng::from_seed(seed);
    rng.set_stream((u64::from(point) << 56) | (round << 8) | lane as u64);
    rng
}

fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Standard normal draw helper for noise lanes.
pub fn sample_gaussian<R: RngCore + ?Sized>(rng: &mut R, sigma: f64) -> f64 {
    let g: f64 = rand_distr::Distribution::sample(&StandardNormal, rng);
    g * sigma
}
