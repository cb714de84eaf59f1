//! Closed-form BER analysis: relay decoding error and failure
//! probabilities, direct-path BER, pairwise-error factors, cooperative
//! success-phase bounds, the assembled end-to-end bound, and its high-SNR
//! asymptote.
//!
//! All SNRs are linear; dB conversion lives at the interfaces
//! ([`crate::channel::db_to_linear`]).

use crate::wef::{DominantPattern, WeightEnumerator};
use crate::{Error, Result};

/// Average BPSK bit error probability after maximal-ratio combining of
/// `antennas` branches of integer-`m` Nakagami fading with average
/// per-branch SNR `gamma_sr`:
///
/// `[ (1-mu)/2 ]^L * sum_{w<L} C(L-1+w, w) [ (1+mu)/2 ]^w`
///
/// with `L = antennas * m` and `mu = sqrt(gamma / (m + gamma))`.
pub fn relay_bit_error(m: u32, antennas: u32, gamma_sr: f64) -> f64 {
    debug_assert!(m >= 1 && antennas >= 1 && gamma_sr > 0.0);
    let order = antennas * m;
    let fm = f64::from(m);
    let mu = (gamma_sr / (fm + gamma_sr)).sqrt();
    // (1 - mu)/2 without cancellation: 1 - mu = (1 - mu^2)/(1 + mu)
    let a = 0.5 * (fm / (fm + gamma_sr)) / (1.0 + mu);
    let b = 0.5 * (1.0 + mu);
    let mut sum = 1.0;
    let mut term = 1.0;
    for w in 0..order - 1 {
        term *= b * f64::from(order + w) / f64::from(w + 1);
        sum += term;
    }
    a.powi(order as i32) * sum
}

/// Probability that the relay fails to decode all `sources` packets of
/// `packet_len` bits: `1 - (1 - pe)^(N n)`, evaluated through
/// `expm1`/`ln_1p` so that tiny `pe` survives.
pub fn failure_probability(pe: f64, packet_len: usize, sources: usize) -> f64 {
    debug_assert!((0.0..=1.0).contains(&pe));
    if pe <= 0.0 {
        return 0.0;
    }
    if pe >= 1.0 {
        return 1.0;
    }
    let exponent = (packet_len * sources) as f64;
    -f64::exp_m1(exponent * f64::ln_1p(-pe))
}

/// BPSK bit error probability over a single Rayleigh link with average
/// SNR `gamma_sd` (the failure-phase direct path).
pub fn direct_path_ber(gamma_sd: f64) -> f64 {
    debug_assert!(gamma_sd > 0.0);
    let mu = (gamma_sd / (1.0 + gamma_sd)).sqrt();
    0.5 * (1.0 / (1.0 + gamma_sd)) / (1.0 + mu)
}

/// Per-parity-bit pairwise-error factor of the best-of-`M` relay antenna.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZFactor {
    /// `M! / prod_{k=0}^{M-1} (1 + k + gamma_rd)` — the alternating
    /// inclusion-exclusion sum collapsed to its cancellation-free product
    /// form.
    pub tight: f64,
    /// `M (M-1)! / gamma_rd^M`, the loose power-law majorant.
    pub loose: f64,
}

/// Evaluates both pairwise-error factors of selection combining over `M`
/// Rayleigh branches with average branch SNR `gamma_rd`.
pub fn pep_z_factor(antennas: u32, gamma_rd: f64) -> ZFactor {
    debug_assert!(antennas >= 1 && gamma_rd > 0.0);
    let m_fact: f64 = (1..=antennas).map(f64::from).product();
    let denom: f64 = (0..antennas)
        .map(|k| 1.0 + f64::from(k) + gamma_rd)
        .product();
    ZFactor {
        tight: m_fact / denom,
        loose: m_fact / gamma_rd.powi(antennas as i32),
    }
}

/// Which pairwise-error factor a bound uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundVariant {
    Tight,
    Loose,
}

/// A truncated union bound with its tail diagnostics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuccessBound {
    /// `(1/2N) * sum B_{d1,d2} Y^{d1} Z^{d2}` over the enumerated terms.
    pub value: f64,
    /// Geometric extrapolation of the per-total-weight level sums beyond
    /// the horizon.
    pub tail_estimate: f64,
    /// Set when the tail estimate exceeds 1% of the enumerated sum (or
    /// cannot be extrapolated because the level sums do not decay).
    pub truncated: bool,
}

/// Union bound on the success-phase BER of the sources.
///
/// Fails when the enumeration horizon cannot certify the dominant pattern
/// for this antenna count; a certified horizon guarantees the leading
/// terms are all present.
pub fn success_ber_bound(
    wef: &WeightEnumerator,
    sources: usize,
    gamma_sd: f64,
    gamma_rd: f64,
    antennas: u32,
    variant: BoundVariant,
) -> Result<SuccessBound> {
    if wef.is_empty() {
        return Ok(SuccessBound { value: 0.0, tail_estimate: 0.0, truncated: false });
    }
    wef.dominant_pattern(antennas)?;
    let y = 1.0 / (1.0 + gamma_sd);
    let zf = pep_z_factor(antennas, gamma_rd);
    let z = match variant {
        BoundVariant::Tight => zf.tight,
        BoundVariant::Loose => zf.loose,
    };
    let mut sum = 0.0;
    let mut levels: std::collections::BTreeMap<u32, f64> = std::collections::BTreeMap::new();
    for ((d1, d2), b) in wef.terms() {
        let term = b as f64 * y.powi(d1 as i32) * z.powi(d2 as i32);
        sum += term;
        *levels.entry(d1 + d2).or_insert(0.0) += term;
    }
    let value = sum / (2.0 * sources as f64);

    // geometric tail: per-unit-weight decay ratio from the last two level
    // sums (falling back to max(Y, Z) with a single level)
    let entries: Vec<(u32, f64)> = levels.into_iter().collect();
    let ratio = match entries.as_slice() {
        [.., (ta, sa), (tb, sb)] if *sa > 0.0 => (sb / sa).powf(1.0 / f64::from(tb - ta)),
        _ => y.max(z),
    };
    let last_level = entries.last().map_or(0.0, |&(_, s)| s);
    let (tail_estimate, truncated) = if ratio < 1.0 {
        let tail = last_level * ratio / (1.0 - ratio) / (2.0 * sources as f64);
        (tail, tail > 0.01 * value)
    } else {
        (f64::INFINITY, true)
    };
    Ok(SuccessBound { value, tail_estimate, truncated })
}

/// Everything the end-to-end bound needs besides the operating SNR.
#[derive(Clone, Debug)]
pub struct BoundInputs {
    pub wef: WeightEnumerator,
    pub sources: usize,
    pub antennas: u32,
    pub nakagami_m: u32,
    pub packet_len: usize,
    pub eta: f64,
    pub beta: f64,
}

/// Evaluated end-to-end bound with every intermediate quantity.
#[derive(Clone, Copy, Debug)]
pub struct BoundBreakdown {
    pub gamma_sd: f64,
    pub gamma_sr: f64,
    pub gamma_rd: f64,
    /// Relay per-bit error probability.
    pub pe: f64,
    /// Relay failure probability over all `N` packets.
    pub pf: f64,
    /// `1 - pf`.
    pub ps: f64,
    /// Direct-path BER conditioned on failure.
    pub pb_given_f: f64,
    /// Success-phase union bound (raw, may exceed 1 at low SNR).
    pub pb_given_s_bound: f64,
    /// `pb_given_s_bound * ps + pb_given_f * pf`, unclamped.
    pub pb_bound_raw: f64,
    /// Raw bound clamped into [0, 1] for reporting.
    pub pb_bound: f64,
    /// Tail diagnostic from the success bound.
    pub truncated: bool,
}

/// Assembles the end-to-end BER upper bound at source-destination SNR
/// `gamma_sd`, deriving the relay SNRs from the path-loss geometry.
pub fn end_to_end_bound(inputs: &BoundInputs, gamma_sd: f64) -> Result<BoundBreakdown> {
    if !(gamma_sd > 0.0) {
        return Err(Error::InvalidParameter("gamma_sd must be positive".into()));
    }
    let gamma_sr = inputs.beta.powf(inputs.eta) * gamma_sd;
    let gamma_rd = (inputs.beta / (inputs.beta - 1.0)).powf(inputs.eta) * gamma_sd;
    let pe = relay_bit_error(inputs.nakagami_m, inputs.antennas, gamma_sr);
    let pf = failure_probability(pe, inputs.packet_len, inputs.sources);
    let ps = 1.0 - pf;
    let pb_given_f = direct_path_ber(gamma_sd);
    let success = success_ber_bound(
        &inputs.wef,
        inputs.sources,
        gamma_sd,
        gamma_rd,
        inputs.antennas,
        BoundVariant::Tight,
    )?;
    let pb_bound_raw = success.value * ps + pb_given_f * pf;
    Ok(BoundBreakdown {
        gamma_sd,
        gamma_sr,
        gamma_rd,
        pe,
        pf,
        ps,
        pb_given_f,
        pb_given_s_bound: success.value,
        pb_bound_raw,
        pb_bound: pb_bound_raw.clamp(0.0, 1.0),
        truncated: success.truncated,
    })
}

/// Two-term high-SNR model of the bound: a cooperative term with the
/// dominant error pattern's exponent and a relay-failure floor with
/// exponent `M m + 1`. The coefficients are fitted to the exact bound at
/// an anchor SNR; the model is for slope extraction, not absolute values.
#[derive(Clone, Copy, Debug)]
pub struct Asymptote {
    k_success: f64,
    k_failure: f64,
    d1: u32,
    d2: u32,
    antennas: u32,
    floor_exponent: u32,
    selection_factor: f64,
}

impl Asymptote {
    /// Fits both coefficients at `anchor_gamma_sd`, which must already be
    /// in the asymptotic regime.
    pub fn fit(inputs: &BoundInputs, anchor_gamma_sd: f64) -> Result<Asymptote> {
        let dominant = inputs.wef.dominant_pattern(inputs.antennas)?;
        let (d1, d2) = dominant.pairs[0];
        let antennas = inputs.antennas;
        let m_fact: f64 = (1..=antennas).map(f64::from).product();
        let breakdown = end_to_end_bound(inputs, anchor_gamma_sd)?;
        let success_term = breakdown.pb_given_s_bound * breakdown.ps;
        let failure_term = breakdown.pb_given_f * breakdown.pf;
        let floor_exponent = antennas * inputs.nakagami_m + 1;
        let success_model = anchor_gamma_sd.powi(-(d1 as i32))
            * (m_fact * anchor_gamma_sd.powi(-(antennas as i32))).powi(d2 as i32);
        let failure_model = anchor_gamma_sd.powi(-(floor_exponent as i32));
        Ok(Asymptote {
            k_success: success_term / success_model,
            k_failure: failure_term / failure_model,
            d1,
            d2,
            antennas,
            floor_exponent,
            selection_factor: m_fact,
        })
    }

    pub fn eval(&self, gamma_sd: f64) -> f64 {
        self.k_success
            * gamma_sd.powi(-(self.d1 as i32))
            * (self.selection_factor * gamma_sd.powi(-(self.antennas as i32))).powi(self.d2 as i32)
            + self.k_failure * gamma_sd.powi(-(self.floor_exponent as i32))
    }

    /// Asymptotic log-log slope: `-min(d1 + M d2, M m + 1)`.
    pub fn slope(&self) -> f64 {
        -f64::from((self.d1 + self.antennas * self.d2).min(self.floor_exponent))
    }

    pub fn dominant_pair(&self) -> (u32, u32) {
        (self.d1, self.d2)
    }
}

/// Exponent most often read off BER curves: slope of `log Pb` against
/// `log gamma` between two evaluated points.
pub fn log_log_slope(pb_lo: f64, gamma_lo: f64, pb_hi: f64, gamma_hi: f64) -> f64 {
    (pb_hi.ln() - pb_lo.ln()) / (gamma_hi.ln() - gamma_lo.ln())
}

/// Binomial coefficient as f64, switching to log-space accumulation once
/// the direct product would wander above C(64, 32).
pub fn binomial(n: u64, k: u64) -> f64 {
    let k = k.min(n.saturating_sub(k));
    if n <= 64 {
        let mut acc = 1.0f64;
        for i in 0..k {
            acc = acc * (n - i) as f64 / (i + 1) as f64;
        }
        acc
    } else {
        let mut ln = 0.0f64;
        for i in 0..k {
            ln += ((n - i) as f64).ln() - ((i + 1) as f64).ln();
        }
        ln.exp()
    }
}

/// Helper used by tests and reporting: dominant exponent saturated by the
/// failure floor, i.e. the end-to-end diversity order.
pub fn bound_diversity(pattern: &DominantPattern, antennas: u32, nakagami_m: u32) -> u32 {
    crate::wef::diversity_order(pattern.exponent, antennas, nakagami_m)
}
