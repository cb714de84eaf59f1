//! Binary polynomials in the delay variable `D`.
//!
//! A polynomial is a `u64` bitset: bit `i` holds the coefficient of `D^i`,
//! so the supported degree range is 0..=63. Addition is XOR and
//! multiplication is carry-less shift-and-XOR. The all-zero word is the
//! zero polynomial, and nonzero values are canonical by construction (the
//! leading set bit *is* the leading coefficient).

use std::fmt;
use std::ops::{Add, AddAssign};

use crate::{Error, Result};

/// Largest representable degree.
pub const MAX_DEGREE: usize = 63;

/// A polynomial over GF(2) with degree at most [`MAX_DEGREE`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryPoly(u64);

impl BinaryPoly {
    pub const ZERO: BinaryPoly = BinaryPoly(0);
    pub const ONE: BinaryPoly = BinaryPoly(1);
    /// The monomial `D`.
    pub const D: BinaryPoly = BinaryPoly(2);

    /// Builds a polynomial from its coefficient bitset (bit `i` = `D^i`).
    pub fn from_bits(bits: u64) -> Self {
        BinaryPoly(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Degree of the polynomial, or `None` for the zero polynomial.
    pub fn degree(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(63 - self.0.leading_zeros() as usize)
        }
    }

    /// Coefficient of `D^power`.
    pub fn coeff(self, power: usize) -> bool {
        power <= MAX_DEGREE && (self.0 >> power) & 1 == 1
    }

    /// Number of nonzero coefficients.
    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    pub fn has_constant_term(self) -> bool {
        self.0 & 1 == 1
    }

    /// Carry-less product. Fails when the exact product would exceed
    /// degree 63.
    pub fn checked_mul(self, rhs: BinaryPoly) -> Result<BinaryPoly> {
        if self.is_zero() || rhs.is_zero() {
            return Ok(BinaryPoly::ZERO);
        }
        let degree = self.degree().unwrap() + rhs.degree().unwrap();
        if degree > MAX_DEGREE {
            return Err(Error::DegreeOverflow { degree });
        }
        let mut acc = 0u64;
        let mut a = self.0;
        let mut b = rhs.0;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            a <<= 1;
            b >>= 1;
        }
        Ok(BinaryPoly(acc))
    }

    /// Euclidean division: returns `(quotient, remainder)` with
    /// `self = quotient * divisor + remainder` and
    /// `deg remainder < deg divisor`.
    pub fn div_rem(self, divisor: BinaryPoly) -> Result<(BinaryPoly, BinaryPoly)> {
        if divisor.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let dd = divisor.degree().unwrap();
        let mut rem = self.0;
        let mut quot = 0u64;
        while rem != 0 {
            let rd = 63 - rem.leading_zeros() as usize;
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            quot |= 1 << shift;
            rem ^= divisor.0 << shift;
        }
        Ok((BinaryPoly(quot), BinaryPoly(rem)))
    }

    /// Greatest common divisor (monic by construction; `gcd(0, 0) = 0`).
    pub fn gcd(self, other: BinaryPoly) -> BinaryPoly {
        let (mut a, mut b) = (self, other);
        while !b.is_zero() {
            let r = a.div_rem(b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        a
    }

    /// Least common multiple.
    pub fn lcm(self, other: BinaryPoly) -> Result<BinaryPoly> {
        if self.is_zero() || other.is_zero() {
            return Ok(BinaryPoly::ZERO);
        }
        let g = self.gcd(other);
        let (q, _) = self.div_rem(g)?;
        q.checked_mul(other)
    }

    /// Parses a power list such as `1+D+D^2+D^3`, `D^2`, `1`, or `0`.
    ///
    /// Whitespace is ignored everywhere. Accepted characters are
    /// `0 1 D ^ +` digits and spaces; anything else is rejected with its
    /// byte position. Repeated powers add (XOR).
    pub fn parse(text: &str) -> Result<BinaryPoly> {
        for (pos, ch) in text.char_indices() {
            if !matches!(ch, '0'..='9' | 'D' | '^' | '+' | ' ' | '\t') {
                return Err(Error::Parse {
                    position: pos,
                    message: format!("character {ch:?} not allowed in a polynomial"),
                });
            }
        }
        let mut acc = 0u64;
        let mut term_start = 0usize;
        let bytes = text.as_bytes();
        let mut idx = 0usize;
        loop {
            // find the next '+' or end of string
            let mut end = idx;
            while end < bytes.len() && bytes[end] != b'+' {
                end += 1;
            }
            let term: String = text[idx..end].chars().filter(|c| !c.is_whitespace()).collect();
            if term.is_empty() {
                return Err(Error::Parse {
                    position: term_start,
                    message: "empty term".into(),
                });
            }
            acc ^= parse_term(&term, term_start)?;
            if end >= bytes.len() {
                break;
            }
            idx = end + 1;
            term_start = idx;
        }
        Ok(BinaryPoly(acc))
    }
}

fn parse_term(term: &str, position: usize) -> Result<u64> {
    match term {
        "0" => return Ok(0),
        "1" => return Ok(1),
        "D" => return Ok(2),
        _ => {}
    }
    let rest = term.strip_prefix("D^").ok_or_else(|| Error::Parse {
        position,
        message: format!("expected 0, 1, D, or D^k, found {term:?}"),
    })?;
    let power: usize = rest.parse().map_err(|_| Error::Parse {
        position,
        message: format!("bad exponent {rest:?}"),
    })?;
    if power > MAX_DEGREE {
        return Err(Error::DegreeOverflow { degree: power });
    }
    Ok(1u64 << power)
}

impl Add for BinaryPoly {
    type Output = BinaryPoly;
    fn add(self, rhs: BinaryPoly) -> BinaryPoly {
        BinaryPoly(self.0 ^ rhs.0)
    }
}

impl AddAssign for BinaryPoly {
    fn add_assign(&mut self, rhs: BinaryPoly) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Display for BinaryPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for power in 0..=MAX_DEGREE {
            if !self.coeff(power) {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            match power {
                0 => write!(f, "1")?,
                1 => write!(f, "D")?,
                _ => write!(f, "D^{power}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> BinaryPoly {
        BinaryPoly::parse(text).unwrap()
    }

    #[test]
    fn squares_have_no_cross_terms() {
        let one_plus_d = p("1+D");
        assert_eq!(one_plus_d.checked_mul(one_plus_d).unwrap(), p("1+D^2"));
    }

    #[test]
    fn one_is_multiplicative_identity() {
        for bits in [0u64, 1, 0b1011, 0xdead_beef] {
            let q = BinaryPoly::from_bits(bits);
            assert_eq!(q.checked_mul(BinaryPoly::ONE).unwrap(), q);
        }
    }

    #[test]
    fn mul_matches_schoolbook_convolution() {
        let a = p("1+D+D^3");
        let b = p("1+D");
        let mut coeffs = [0u8; 8];
        for i in 0..=3 {
            for j in 0..=1 {
                if a.coeff(i) && b.coeff(j) {
                    coeffs[i + j] ^= 1;
                }
            }
        }
        let expect = coeffs
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &c)| acc | ((c as u64) << i));
        assert_eq!(a.checked_mul(b).unwrap().bits(), expect);
    }

    #[test]
    fn mul_commutes_and_add_is_assoc_exhaustively() {
        // every polynomial of degree <= 8 is a 9-bit word
        for a in 0u64..512 {
            for b in (0u64..512).step_by(7) {
                let (pa, pb) = (BinaryPoly::from_bits(a), BinaryPoly::from_bits(b));
                assert_eq!(
                    pa.checked_mul(pb).unwrap(),
                    pb.checked_mul(pa).unwrap()
                );
                let pc = BinaryPoly::from_bits((a.rotate_left(3) ^ b) & 0x1ff);
                assert_eq!((pa + pb) + pc, pa + (pb + pc));
                assert_eq!(pa + pb, pb + pa);
            }
        }
    }

    #[test]
    fn addition_is_self_inverse() {
        let q = p("1+D^2+D^5");
        assert!((q + q).is_zero());
    }

    #[test]
    fn degree_overflow_is_an_error() {
        let hi = BinaryPoly::from_bits(1 << 63);
        assert!(matches!(
            hi.checked_mul(BinaryPoly::D),
            Err(Error::DegreeOverflow { degree: 64 })
        ));
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = p("1+D+D^4+D^6");
        let b = p("1+D+D^3");
        let (q, r) = a.div_rem(b).unwrap();
        assert_eq!(q.checked_mul(b).unwrap() + r, a);
        assert!(r.degree().unwrap_or(0) < b.degree().unwrap());
    }

    #[test]
    fn gcd_of_known_factorization() {
        // 1+D^2 = (1+D)^2 over GF(2)
        assert_eq!(p("1+D^2").gcd(p("1+D")), p("1+D"));
    }

    #[test]
    fn parse_rejects_foreign_characters() {
        let err = BinaryPoly::parse("1+x").unwrap_err();
        match err {
            Error::Parse { position, .. } => assert_eq!(position, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn parse_is_whitespace_insensitive() {
        assert_eq!(p(" 1 + D + D^2+D^3 "), p("1+D+D^2+D^3"));
    }

    #[test]
    fn display_round_trips() {
        for bits in [1u64, 2, 0b1011, 0b1111, 0b1101] {
            let q = BinaryPoly::from_bits(bits);
            assert_eq!(p(&q.to_string()), q);
        }
    }
}
