//! Rational functions of the delay variable over GF(2).

use std::fmt;

use super::poly::BinaryPoly;
use crate::{Error, Result};

/// A reduced fraction of binary polynomials with a nonzero denominator.
///
/// Values are stored with `gcd(num, den) = 1`; construction reduces and is
/// therefore idempotent. A rational drives a feedback shift register only
/// when its denominator has a nonzero constant term, which
/// [`RationalFn::is_realizable`] reports and the generator-matrix
/// validator enforces.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalFn {
    num: BinaryPoly,
    den: BinaryPoly,
}

impl RationalFn {
    /// Builds `num / den` in reduced form. Fails on a zero denominator.
    pub fn new(num: BinaryPoly, den: BinaryPoly) -> Result<RationalFn> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RationalFn { num, den: BinaryPoly::ONE });
        }
        let g = num.gcd(den);
        let num = num.div_rem(g)?.0;
        let den = den.div_rem(g)?.0;
        Ok(RationalFn { num, den })
    }

    pub fn from_poly(num: BinaryPoly) -> RationalFn {
        RationalFn { num, den: BinaryPoly::ONE }
    }

    pub fn num(self) -> BinaryPoly {
        self.num
    }

    pub fn den(self) -> BinaryPoly {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num.is_zero()
    }

    pub fn is_realizable(self) -> bool {
        self.den.has_constant_term()
    }

    /// First `len` coefficients of the formal power series expansion.
    /// Requires a realizable denominator.
    pub fn series(self, len: usize) -> Result<Vec<bool>> {
        if !self.is_realizable() {
            return Err(Error::Unrealizable(format!(
                "{} has no constant term",
                self.den
            )));
        }
        let den_deg = self.den.degree().unwrap_or(0);
        let mut out = Vec::with_capacity(len);
        for t in 0..len {
            let mut c = self.num.coeff(t);
            for j in 1..=den_deg.min(t) {
                if self.den.coeff(j) && out[t - j] {
                    c = !c;
                }
            }
            out.push(c);
        }
        Ok(out)
    }

    /// Parses `num / den`; a missing `/ den` part means denominator 1.
    pub fn parse(text: &str) -> Result<RationalFn> {
        match text.find('/') {
            None => Ok(RationalFn::from_poly(BinaryPoly::parse(text)?)),
            Some(slash) => {
                if text[slash + 1..].contains('/') {
                    return Err(Error::Parse {
                        position: slash + 1 + text[slash + 1..].find('/').unwrap(),
                        message: "more than one '/' in a rational".into(),
                    });
                }
                let num = BinaryPoly::parse(&text[..slash])?;
                let den = BinaryPoly::parse(&text[slash + 1..]).map_err(|e| match e {
                    Error::Parse { position, message } => Error::Parse {
                        position: position + slash + 1,
                        message,
                    },
                    other => other,
                })?;
                RationalFn::new(num, den)
            }
        }
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == BinaryPoly::ONE {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{} / {}", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFn({self})")
    }
}
