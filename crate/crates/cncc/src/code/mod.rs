//! Trellis construction, encoding, and maximum-likelihood decoding for
//! systematic convolutional codes given as `[ I | P(D) ]`.

mod codec;
mod realization;
mod trellis;

pub use codec::{encode, viterbi_decode, BitObs, Codeword, Decoded, SoftObservation};
pub use trellis::Trellis;

pub(crate) use realization::minimal_state_space;
