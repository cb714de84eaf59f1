//! Convolutional network-coded cooperation (CNCC) toolkit.
//!
//! A cooperative network of `N` single-antenna sources, one `M`-antenna
//! relay, and a common destination runs a systematic `(N+M', N, nu)`
//! convolutional code at the network level: the sources transmit the
//! systematic packets directly, and the relay (when it decodes all source
//! packets correctly) generates the `M'` parity packets and transmits them
//! on its instantaneously best antenna. This crate provides
//!
//! * exact GF(2) polynomial/rational arithmetic and generator-matrix
//!   validation ([`gf2`]),
//! * a minimal-realization trellis with encoder and channel-state-aware
//!   Viterbi decoder ([`code`]),
//! * weight enumeration split by systematic/parity weight, free distance,
//!   dominant error patterns, and diversity orders ([`wef`]),
//! * fading-channel samplers, SNR geometry, and interleaving ([`channel`]),
//! * closed-form end-to-end BER upper bounds and asymptotes ([`analysis`]),
//! * a reproducible link-level Monte Carlo simulator ([`sim`]).

pub mod analysis;
pub mod channel;
pub mod code;
pub mod gf2;
pub mod sim;
pub mod wef;

use std::fmt;

/// Crate-wide error type.
#[derive(Debug)]
pub enum Error {
    /// A polynomial operation exceeded the supported degree range.
    DegreeOverflow { degree: usize },
    /// A rational function was given a zero denominator.
    ZeroDenominator,
    /// A denominator has no constant term and cannot drive a feedback
    /// shift register.
    Unrealizable(String),
    /// Dimension mismatch between inputs.
    Shape(String),
    /// Text parse failure; `position` is a 0-based byte offset.
    Parse { position: usize, message: String },
    /// The requested construction does not fit the word-level linear
    /// algebra kit.
    TooLarge(String),
    /// Weight enumeration hit its node budget; the partial table is
    /// attached with its `complete` flag cleared.
    EnumerationBudget {
        visited: u64,
        partial: Box<wef::WeightEnumerator>,
    },
    /// No terms were enumerated, so the requested quantity is undefined.
    IncompleteEnumeration,
    /// The enumeration horizon cannot certify the dominant pattern.
    InconclusiveHorizon { horizon: u32, best_objective: u32 },
    /// A parameter was outside its documented domain.
    InvalidParameter(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegreeOverflow { degree } => {
                write!(f, "polynomial degree {degree} exceeds the supported maximum of 63")
            }
            Error::ZeroDenominator => write!(f, "rational function with zero denominator"),
            Error::Unrealizable(msg) => write!(f, "unrealizable denominator: {msg}"),
            Error::Shape(msg) => write!(f, "shape mismatch: {msg}"),
            Error::Parse { position, message } => {
                write!(f, "parse error at byte {position}: {message}")
            }
            Error::TooLarge(msg) => write!(f, "construction too large: {msg}"),
            Error::EnumerationBudget { visited, .. } => {
                write!(f, "weight enumeration budget exhausted after {visited} branch visits; partial table attached")
            }
            Error::IncompleteEnumeration => write!(f, "weight enumeration is empty"),
            Error::InconclusiveHorizon { horizon, best_objective } => write!(
                f,
                "horizon {horizon} cannot certify dominant pattern (best objective {best_objective})"
            ),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

pub use analysis::{
    direct_path_ber, end_to_end_bound, failure_probability, log_log_slope, pep_z_factor,
    relay_bit_error, success_ber_bound, Asymptote, BoundBreakdown, BoundInputs, BoundVariant,
    SuccessBound, ZFactor,
};
pub use channel::{
    db_to_linear, linear_to_db, mrc_snr, sample_nakagami, select_best, Interleaver, SnrGeometry,
};
pub use code::{encode, viterbi_decode, BitObs, Codeword, Decoded, SoftObservation, Trellis};
pub use gf2::{BinaryPoly, GeneratorMatrix, RationalFn, ValidationReport};
pub use sim::{
    relay_position_sweep, run_round, run_sweep, wilson_radius, BetaPoint, ChannelOverrides,
    PointStats, RoundOutcome, SimConfig, StopRule, SweepPoint,
};
pub use wef::{diversity_order, DominantPattern, WeightEnumerator};
