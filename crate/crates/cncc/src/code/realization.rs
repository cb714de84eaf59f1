//! Minimal state-space realization of the parity transfer matrix.
//!
//! The parity map `u -> p` of a systematic generator is a rational `M' x N`
//! transfer matrix. Its minimal realization is recovered from the Markov
//! parameters (power-series coefficients) by rank-factoring the block
//! Hankel matrix over GF(2): with enough blocks the Hankel rank equals the
//! minimal state dimension, the factors are the observability and
//! reachability maps, and the state update follows from the shifted
//! Hankel. Using the minimal machine matters beyond economy: weight
//! enumeration counts first-passage loops at the zero state, and a
//! non-minimal realization would miss event merges and overcount.

use crate::gf2::{BitMatrix, GeneratorMatrix};
use crate::{Error, Result};

/// Linear machine `s' = A s + B u`, `p = C s + E u` over GF(2).
pub(crate) struct StateSpace {
    /// State dimension (register count).
    pub memory: usize,
    pub a: BitMatrix,
    pub b: BitMatrix,
    pub c: BitMatrix,
    pub e: BitMatrix,
}

impl StateSpace {
    /// One machine step from `state` under input block `input`
    /// (bit `i` = source `i`); returns `(next_state, parity_block)`.
    pub fn step(&self, state: u64, input: u64) -> (u64, u64) {
        let next = self.a.mul_vec(state) ^ self.b.mul_vec(input);
        let parity = self.c.mul_vec(state) ^ self.e.mul_vec(input);
        (next, parity)
    }
}

/// Markov parameters `G_k[stream][source]` of the parity transfer matrix,
/// for `k = 0..count`.
fn markov_parameters(gen: &GeneratorMatrix, count: usize) -> Result<Vec<BitMatrix>> {
    let sources = gen.sources();
    let streams = gen.parity_streams();
    let mut series = Vec::with_capacity(sources * streams);
    for source in 0..sources {
        for stream in 0..streams {
            series.push(gen.entry(source, stream).series(count)?);
        }
    }
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let mut m = BitMatrix::zeros(streams, sources)?;
        for source in 0..sources {
            for stream in 0..streams {
                m.set(stream, source, series[source * streams + stream][k]);
            }
        }
        out.push(m);
    }
    Ok(out)
}

pub(crate) fn minimal_state_space(gen: &GeneratorMatrix) -> Result<StateSpace> {
    let sources = gen.sources();
    let streams = gen.parity_streams();
    let mut bound = 0usize;
    for stream in 0..streams {
        bound += gen.column_profile(stream)?.1;
    }
    let blocks = bound + 2;
    if blocks * sources > 64 || blocks * streams > 64 {
        return Err(Error::TooLarge(format!(
            "Hankel matrix {}x{} exceeds the word-packed solver",
            blocks * streams,
            blocks * sources
        )));
    }
    let markov = markov_parameters(gen, 2 * blocks + 3)?;

    let hankel = |shift: usize| -> Result<BitMatrix> {
        let mut m = BitMatrix::zeros(blocks * streams, blocks * sources)?;
        for a in 0..blocks {
            for b in 0..blocks {
                let g = &markov[a + b + 1 + shift];
                for j in 0..streams {
                    for i in 0..sources {
                        if g.get(j, i) {
                            m.set(a * streams + j, b * sources + i, true);
                        }
                    }
                }
            }
        }
        Ok(m)
    };

    let h = hankel(0)?;
    let h_shift = hankel(1)?;
    let (memory, pivot_cols) = h.rank_profile();

    if memory == 0 {
        return Ok(StateSpace {
            memory: 0,
            a: BitMatrix::zeros(0, 0)?,
            b: BitMatrix::zeros(0, sources)?,
            c: BitMatrix::zeros(streams, 0)?,
            e: markov[0].clone(),
        });
    }

    // H = O . R with O the pivot columns of H; the pivot columns of R are
    // then an identity block, so A solves O_rows . A = Hshift[rows, pivot].
    let obs = h.select_cols(&pivot_cols)?;
    let obs_rows = obs.independent_rows();
    let obs_square = obs.select_rows(&obs_rows);
    let shift_block = h_shift.select_rows(&obs_rows).select_cols(&pivot_cols)?;
    let a = obs_square.solve(&shift_block)?;

    let first_inputs: Vec<usize> = (0..sources).collect();
    let b = obs.solve(&h.select_cols(&first_inputs)?)?;
    let c = obs.select_rows(&(0..streams).collect::<Vec<_>>());
    let e = markov[0].clone();

    let machine = StateSpace { memory, a, b, c, e };
    debug_assert!(reproduces_markov(&machine, &markov, sources, streams));
    Ok(machine)
}

fn reproduces_markov(
    machine: &StateSpace,
    markov: &[BitMatrix],
    sources: usize,
    streams: usize,
) -> bool {
    for source in 0..sources {
        let mut state = 0u64;
        for (k, g) in markov.iter().enumerate() {
            let input = if k == 0 { 1u64 << source } else { 0 };
            let (next, parity) = machine.step(state, input);
            for stream in 0..streams {
                if g.get(stream, source) != ((parity >> stream) & 1 == 1) {
                    return false;
                }
            }
            state = next;
        }
    }
    true
}
