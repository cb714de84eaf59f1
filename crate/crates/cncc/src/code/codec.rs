//! Terminated encoding and channel-state-aware Viterbi decoding.

use super::trellis::Trellis;
use crate::{Error, Result};

/// BPSK mapping used throughout: bit 0 -> +1, bit 1 -> -1.
pub(crate) fn bpsk(bit: u8) -> f64 {
    1.0 - 2.0 * f64::from(bit)
}

/// A terminated codeword: `N` systematic packets, the computed tail input
/// blocks, and `M'` parity packets covering information plus tail steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codeword {
    /// Information bits, one packet per source (`N x n`).
    pub systematic: Vec<Vec<u8>>,
    /// Termination inputs, one row per source (`N x memory`).
    pub tail_inputs: Vec<Vec<u8>>,
    /// Parity packets over all trellis steps (`M' x (n + memory)`).
    pub parity: Vec<Vec<u8>>,
}

impl Codeword {
    pub fn info_len(&self) -> usize {
        self.systematic.first().map_or(0, Vec::len)
    }

    pub fn total_len(&self) -> usize {
        self.parity.first().map_or(0, Vec::len)
    }

    /// Systematic bit of `source` at trellis step `t`, reading tail input
    /// bits past the information section.
    pub fn systematic_bit(&self, source: usize, t: usize) -> u8 {
        let n = self.info_len();
        if t < n {
            self.systematic[source][t]
        } else {
            self.tail_inputs[source][t - n]
        }
    }

    /// Hamming weight over systematic, tail, and parity bits.
    pub fn total_weight(&self) -> u32 {
        let sys: u32 = self.systematic.iter().flatten().map(|&b| u32::from(b)).sum();
        let tail: u32 = self.tail_inputs.iter().flatten().map(|&b| u32::from(b)).sum();
        let par: u32 = self.parity.iter().flatten().map(|&b| u32::from(b)).sum();
        sys + tail + par
    }
}

/// Encodes `N` equal-length packets, terminating the trellis back to the
/// zero state.
pub fn encode(trellis: &Trellis, packets: &[Vec<u8>]) -> Result<Codeword> {
    let sources = trellis.sources();
    if packets.len() != sources {
        return Err(Error::Shape(format!(
            "expected {sources} packets, got {}",
            packets.len()
        )));
    }
    let n = packets[0].len();
    if packets.iter().any(|p| p.len() != n) {
        return Err(Error::Shape("packets differ in length".into()));
    }
    let total = trellis.total_len(n);
    let mut parity: Vec<Vec<u8>> = vec![Vec::with_capacity(total); trellis.parity_streams()];
    let mut state = 0u32;
    let push_step = |state: &mut u32, input: u32, parity: &mut Vec<Vec<u8>>| {
        let (next, p) = trellis.step(*state, input);
        for (j, stream) in parity.iter_mut().enumerate() {
            stream.push(((p >> j) & 1) as u8);
        }
        *state = next;
    };
    for t in 0..n {
        let mut input = 0u32;
        for (i, packet) in packets.iter().enumerate() {
            input |= u32::from(packet[t] & 1) << i;
        }
        push_step(&mut state, input, &mut parity);
    }
    let tail = trellis.tail_inputs(state);
    let mut tail_inputs = vec![Vec::with_capacity(trellis.memory()); sources];
    for &input in &tail {
        for (i, row) in tail_inputs.iter_mut().enumerate() {
            row.push(((input >> i) & 1) as u8);
        }
        push_step(&mut state, input, &mut parity);
    }
    debug_assert_eq!(state, 0);
    Ok(Codeword {
        systematic: packets.to_vec(),
        tail_inputs,
        parity,
    })
}

/// One received bit: matched-filter observation and its fading amplitude.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BitObs {
    pub value: f64,
    pub gain: f64,
}

/// Soft observations of one terminated codeword. `None` marks an erased
/// position (nothing transmitted), which contributes no metric.
#[derive(Clone, Debug)]
pub struct SoftObservation {
    /// Information steps (tail steps follow implicitly).
    pub info_len: usize,
    /// `N x (info_len + memory)` systematic observations.
    pub systematic: Vec<Vec<Option<BitObs>>>,
    /// `M' x (info_len + memory)` parity observations.
    pub parity: Vec<Vec<Option<BitObs>>>,
    pub energy_per_bit: f64,
    /// Noise variance per real dimension (N0 / 2).
    pub noise_half: f64,
}

/// Maximum-likelihood decode result.
#[derive(Clone, Debug)]
pub struct Decoded {
    /// Recovered information packets (`N x info_len`).
    pub info: Vec<Vec<u8>>,
    /// Accumulated squared-distance metric of the winning codeword.
    pub metric: f64,
}

/// Viterbi decoding over the terminated trellis.
///
/// The survivor is forced to end in the zero state; the last `memory`
/// steps follow the termination map, so the search ranges exactly over
/// valid terminated codewords. Ties keep the lowest-numbered predecessor.
pub fn viterbi_decode(trellis: &Trellis, obs: &SoftObservation) -> Result<Decoded> {
    let sources = trellis.sources();
    let streams = trellis.parity_streams();
    let n = obs.info_len;
    let total = trellis.total_len(n);
    if obs.systematic.len() != sources
        || obs.systematic.iter().any(|row| row.len() != total)
        || obs.parity.len() != streams
        || obs.parity.iter().any(|row| row.len() != total)
    {
        return Err(Error::Shape(
            "observation dimensions do not match trellis and packet length".into(),
        ));
    }
    if !(obs.noise_half > 0.0) || !(obs.energy_per_bit > 0.0) {
        return Err(Error::InvalidParameter(
            "noise variance and bit energy must be positive".into(),
        ));
    }
    let amp = obs.energy_per_bit.sqrt();
    let branch_metric = |t: usize, input: u32, parity: u32| -> f64 {
        let mut m = 0.0;
        for (i, row) in obs.systematic.iter().enumerate() {
            if let Some(o) = row[t] {
                let d = o.value - amp * o.gain * bpsk(((input >> i) & 1) as u8);
                m += d * d;
            }
        }
        for (j, row) in obs.parity.iter().enumerate() {
            if let Some(o) = row[t] {
                let d = o.value - amp * o.gain * bpsk(((parity >> j) & 1) as u8);
                m += d * d;
            }
        }
        m
    };

    let states = trellis.state_count();
    let inputs = trellis.input_count();
    let mut metric = vec![f64::INFINITY; states];
    metric[0] = 0.0;
    let mut back: Vec<Vec<u32>> = Vec::with_capacity(n);
    let mut next_metric = vec![f64::INFINITY; states];
    for t in 0..n {
        next_metric.fill(f64::INFINITY);
        let mut bp = vec![0u32; states];
        for state in 0..states {
            if !metric[state].is_finite() {
                continue;
            }
            for input in 0..inputs {
                let (ns, parity) = trellis.step(state as u32, input as u32);
                let cand = metric[state] + branch_metric(t, input as u32, parity);
                if cand < next_metric[ns as usize] {
                    next_metric[ns as usize] = cand;
                    bp[ns as usize] = ((state as u32) << sources) | input as u32;
                }
            }
        }
        std::mem::swap(&mut metric, &mut next_metric);
        back.push(bp);
    }

    // Termination closure: each state's continuation is fixed by the tail
    // map, so the winner minimizes survivor + tail metric.
    let mut best_state = 0usize;
    let mut best_metric = f64::INFINITY;
    for state in 0..states {
        if !metric[state].is_finite() {
            continue;
        }
        let mut m = metric[state];
        let mut s = state as u32;
        for (k, input) in trellis.tail_inputs(state as u32).into_iter().enumerate() {
            let (ns, parity) = trellis.step(s, input);
            m += branch_metric(n + k, input, parity);
            s = ns;
        }
        debug_assert_eq!(s, 0);
        if m < best_metric {
            best_metric = m;
            best_state = state;
        }
    }

    let mut info = vec![vec![0u8; n]; sources];
    let mut cursor = best_state as u32;
    for t in (0..n).rev() {
        let packed = back[t][cursor as usize];
        let input = packed & ((1 << sources) - 1);
        for (i, packet) in info.iter_mut().enumerate() {
            packet[t] = ((input >> i) & 1) as u8;
        }
        cursor = packed >> sources;
    }
    debug_assert_eq!(cursor, 0);
    Ok(Decoded { info, metric: best_metric })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::GeneratorMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn trellis_3_2_3() -> Trellis {
        Trellis::build(&GeneratorMatrix::systematic_3_2_3()).unwrap()
    }

    fn random_packets(rng: &mut impl Rng, sources: usize, n: usize) -> Vec<Vec<u8>> {
        (0..sources)
            .map(|_| (0..n).map(|_| rng.gen_range(0..2u8)).collect())
            .collect()
    }

    /// Noiseless observation of a codeword with unit gains.
    fn observe_clean(cw: &Codeword, memory: usize) -> SoftObservation {
        let n = cw.info_len();
        let total = n + memory;
        let systematic = (0..cw.systematic.len())
            .map(|i| {
                (0..total)
                    .map(|t| {
                        Some(BitObs { value: bpsk(cw.systematic_bit(i, t)), gain: 1.0 })
                    })
                    .collect()
            })
            .collect();
        let parity = cw
            .parity
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&b| Some(BitObs { value: bpsk(b), gain: 1.0 }))
                    .collect()
            })
            .collect();
        SoftObservation {
            info_len: n,
            systematic,
            parity,
            energy_per_bit: 1.0,
            noise_half: 0.5,
        }
    }

    #[test]
    fn all_zero_packets_encode_to_all_zero() {
        let t = trellis_3_2_3();
        let cw = encode(&t, &[vec![0; 8], vec![0; 8]]).unwrap();
        assert_eq!(cw.total_weight(), 0);
        assert_eq!(cw.parity[0].len(), 11);
    }

    #[test]
    fn single_one_reaches_free_distance() {
        let t = trellis_3_2_3();
        let mut packets = vec![vec![0u8; 8], vec![0u8; 8]];
        packets[0][0] = 1;
        let cw = encode(&t, &packets).unwrap();
        assert!(cw.total_weight() >= 4, "weight {}", cw.total_weight());
    }

    #[test]
    fn parity_matches_per_column_filter_oracle() {
        // direct IIR filtering of each column's rationals over the
        // systematic-plus-tail input
        let gen = GeneratorMatrix::systematic_4_2_3();
        let t = Trellis::build(&gen).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..50 {
            let packets = random_packets(&mut rng, 2, 6);
            let cw = encode(&t, &packets).unwrap();
            let total = cw.total_len();
            for stream in 0..gen.parity_streams() {
                let mut expect = vec![0u8; total];
                for source in 0..gen.sources() {
                    let entry = gen.entry(source, stream);
                    let num = entry.num();
                    let den = entry.den();
                    let mut outs = vec![0u8; total];
                    for t_step in 0..total {
                        let mut acc = 0u8;
                        for k in 0..=num.degree().unwrap_or(0) {
                            if num.coeff(k) && t_step >= k {
                                acc ^= cw.systematic_bit(source, t_step - k);
                            }
                        }
                        for k in 1..=den.degree().unwrap_or(0) {
                            if den.coeff(k) && t_step >= k {
                                acc ^= outs[t_step - k];
                            }
                        }
                        outs[t_step] = acc;
                    }
                    for (e, o) in expect.iter_mut().zip(&outs) {
                        *e ^= o;
                    }
                }
                assert_eq!(cw.parity[stream], expect);
            }
        }
    }

    #[test]
    fn encoding_is_linear_including_tail() {
        let t = trellis_3_2_3();
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..100 {
            let p = random_packets(&mut rng, 2, 7);
            let q = random_packets(&mut rng, 2, 7);
            let xor: Vec<Vec<u8>> = p
                .iter()
                .zip(&q)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x ^ y).collect())
                .collect();
            let ep = encode(&t, &p).unwrap();
            let eq = encode(&t, &q).unwrap();
            let exor = encode(&t, &xor).unwrap();
            for i in 0..2 {
                let tails: Vec<u8> = ep.tail_inputs[i]
                    .iter()
                    .zip(&eq.tail_inputs[i])
                    .map(|(a, b)| a ^ b)
                    .collect();
                assert_eq!(exor.tail_inputs[i], tails);
            }
            for j in 0..1 {
                let par: Vec<u8> = ep.parity[j]
                    .iter()
                    .zip(&eq.parity[j])
                    .map(|(a, b)| a ^ b)
                    .collect();
                assert_eq!(exor.parity[j], par);
            }
        }
    }

    #[test]
    fn minimum_codeword_weight_is_the_free_distance() {
        // exhaustive over all packet pairs at n = 8
        for (gen, dfree) in [
            (GeneratorMatrix::systematic_3_2_3(), 4u32),
            (GeneratorMatrix::systematic_4_2_3(), 6u32),
        ] {
            let t = Trellis::build(&gen).unwrap();
            let n = 8usize;
            let mut min_weight = u32::MAX;
            for word in 1u32..1 << (2 * n) {
                let packets: Vec<Vec<u8>> = (0..2)
                    .map(|i| (0..n).map(|t| ((word >> (2 * t + i)) & 1) as u8).collect())
                    .collect();
                let weight = encode(&t, &packets).unwrap().total_weight();
                min_weight = min_weight.min(weight);
            }
            assert_eq!(min_weight, dfree);
        }
    }

    #[test]
    fn noiseless_decode_recovers_input() {
        let t = trellis_3_2_3();
        let mut rng = ChaCha12Rng::seed_from_u64(21);
        for _ in 0..50 {
            let packets = random_packets(&mut rng, 2, 10);
            let cw = encode(&t, &packets).unwrap();
            let obs = observe_clean(&cw, t.memory());
            let decoded = viterbi_decode(&t, &obs).unwrap();
            assert_eq!(decoded.info, packets);
            assert!(decoded.metric.abs() < 1e-12);
        }
    }

    #[test]
    fn all_parity_erased_reduces_to_per_bit_decisions() {
        let t = trellis_3_2_3();
        let mut rng = ChaCha12Rng::seed_from_u64(33);
        for _ in 0..200 {
            let n = 6;
            let total = t.total_len(n);
            // random observations, parity and tail systematic erased
            let systematic: Vec<Vec<Option<BitObs>>> = (0..2)
                .map(|_| {
                    (0..total)
                        .map(|t_step| {
                            (t_step < n).then(|| BitObs {
                                value: rng.gen_range(-2.0..2.0),
                                gain: rng.gen_range(0.01..2.0),
                            })
                        })
                        .collect()
                })
                .collect();
            let parity = vec![vec![None; total]; 1];
            let obs = SoftObservation {
                info_len: n,
                systematic,
                parity,
                energy_per_bit: 1.0,
                noise_half: 0.5,
            };
            let decoded = viterbi_decode(&t, &obs).unwrap();
            for i in 0..2 {
                for t_step in 0..n {
                    let o = obs.systematic[i][t_step].unwrap();
                    let hard = u8::from(o.gain * o.value < 0.0);
                    assert_eq!(decoded.info[i][t_step], hard);
                }
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let t = trellis_3_2_3();
        let obs = SoftObservation {
            info_len: 4,
            systematic: vec![vec![None; 5]; 2],
            parity: vec![vec![None; 7]; 1],
            energy_per_bit: 1.0,
            noise_half: 0.5,
        };
        assert!(matches!(viterbi_decode(&t, &obs), Err(Error::Shape(_))));
    }
}
