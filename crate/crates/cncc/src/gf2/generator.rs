//! Systematic generator matrices `[ I | P(D) ]` over GF(2).

use std::fmt;

use super::poly::BinaryPoly;
use super::rational::RationalFn;
use crate::{Error, Result};

/// A systematic `(N+M', N, nu)` convolutional code, stored as its parity
/// block `P(D)` (the identity block is implicit).
///
/// `N` source streams enter; `M'` parity streams leave. Each parity entry
/// is a reduced rational function of the delay variable. The declared
/// memory `nu` is checked against the minimal realization during
/// [`GeneratorMatrix::validate`].
#[derive(Clone, PartialEq, Eq)]
pub struct GeneratorMatrix {
    sources: usize,
    parity_streams: usize,
    declared_memory: usize,
    parity: Vec<Vec<RationalFn>>,
}

/// Outcome of [`GeneratorMatrix::validate`].
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub sources: usize,
    pub parity_streams: usize,
    /// Memory claimed at construction time.
    pub declared_memory: usize,
    /// State dimension of the minimal realization; every downstream
    /// construction (trellis, enumeration) uses this value.
    pub minimal_memory: usize,
    /// Registers an independent per-column shift-register realization
    /// would use; the sum is an upper bound on `minimal_memory`.
    pub column_memory: Vec<usize>,
    /// Common (LCM) denominator of each parity column.
    pub column_denominator: Vec<BinaryPoly>,
}

impl GeneratorMatrix {
    /// Builds a generator from its parity grid, indexed
    /// `parity[source][stream]`.
    pub fn new(parity: Vec<Vec<RationalFn>>, declared_memory: usize) -> Result<GeneratorMatrix> {
        let sources = parity.len();
        if sources == 0 {
            return Err(Error::Shape("generator needs at least one source row".into()));
        }
        let parity_streams = parity[0].len();
        if parity_streams == 0 {
            return Err(Error::Shape("generator needs at least one parity column".into()));
        }
        if parity.iter().any(|row| row.len() != parity_streams) {
            return Err(Error::Shape("ragged parity grid".into()));
        }
        Ok(GeneratorMatrix { sources, parity_streams, declared_memory, parity })
    }

    /// Parses one text row per source; entries within a row are separated
    /// by commas, e.g. `1+D^2+D^3 / 1+D+D^3 , 1+D^2 / 1+D+D^3`.
    pub fn parse_rows(rows: &[&str], declared_memory: usize) -> Result<GeneratorMatrix> {
        let mut parity = Vec::with_capacity(rows.len());
        for row in rows {
            let entries: Vec<RationalFn> = row
                .split(',')
                .map(RationalFn::parse)
                .collect::<Result<_>>()?;
            parity.push(entries);
        }
        GeneratorMatrix::new(parity, declared_memory)
    }

    /// The bundled rate-2/3 systematic code with memory 3 and free
    /// distance 4.
    pub fn systematic_3_2_3() -> GeneratorMatrix {
        GeneratorMatrix::parse_rows(
            &["1+D+D^2+D^3 / 1+D+D^3", "1+D^2+D^3 / 1+D+D^3"],
            3,
        )
        .expect("built-in code")
    }

    /// The bundled rate-1/2 systematic code with memory 3 and free
    /// distance 6.
    pub fn systematic_4_2_3() -> GeneratorMatrix {
        GeneratorMatrix::parse_rows(
            &[
                "1+D^2+D^3 / 1+D+D^3 , 1+D^2 / 1+D+D^3",
                "D^2 / 1+D+D^3 , 1+D^2+D^3 / 1+D+D^3",
            ],
            3,
        )
        .expect("built-in code")
    }

    pub fn sources(&self) -> usize {
        self.sources
    }

    pub fn parity_streams(&self) -> usize {
        self.parity_streams
    }

    pub fn declared_memory(&self) -> usize {
        self.declared_memory
    }

    pub fn entry(&self, source: usize, stream: usize) -> RationalFn {
        self.parity[source][stream]
    }

    /// Common denominator and register count of one parity column under an
    /// independent shift-register realization.
    pub(crate) fn column_profile(&self, stream: usize) -> Result<(BinaryPoly, usize)> {
        let mut lcm = BinaryPoly::ONE;
        for source in 0..self.sources {
            lcm = lcm.lcm(self.parity[source][stream].den())?;
        }
        if !lcm.has_constant_term() {
            return Err(Error::Unrealizable(format!(
                "column {} denominator {} has no constant term",
                stream + 1,
                lcm
            )));
        }
        let mut memory = lcm.degree().unwrap_or(0);
        for source in 0..self.sources {
            let entry = self.parity[source][stream];
            let scale = lcm.div_rem(entry.den())?.0;
            let scaled = entry.num().checked_mul(scale)?;
            memory = memory.max(scaled.degree().unwrap_or(0));
        }
        Ok((lcm, memory))
    }

    /// Checks realizability of every parity column, computes the minimal
    /// realization memory, and confirms the declared memory is attainable
    /// (declared >= minimal).
    pub fn validate(&self) -> Result<ValidationReport> {
        let mut column_memory = Vec::with_capacity(self.parity_streams);
        let mut column_denominator = Vec::with_capacity(self.parity_streams);
        for stream in 0..self.parity_streams {
            let (lcm, memory) = self.column_profile(stream)?;
            column_denominator.push(lcm);
            column_memory.push(memory);
        }
        let minimal_memory = crate::code::minimal_state_space(self)?.memory;
        if self.declared_memory < minimal_memory {
            return Err(Error::InvalidParameter(format!(
                "declared memory {} is below the minimal realization ({minimal_memory})",
                self.declared_memory
            )));
        }
        Ok(ValidationReport {
            sources: self.sources,
            parity_streams: self.parity_streams,
            declared_memory: self.declared_memory,
            minimal_memory,
            column_memory,
            column_denominator,
        })
    }
}

impl fmt::Display for GeneratorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.parity.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let entries: Vec<String> = row.iter().map(|r| r.to_string()).collect();
            write!(f, "{}", entries.join(" , "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for GeneratorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GeneratorMatrix(({}+{}, {}, {}))",
            self.sources, self.parity_streams, self.sources, self.declared_memory
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_3_2_3_validates_with_declared_parameters() {
        let g = GeneratorMatrix::systematic_3_2_3();
        let report = g.validate().unwrap();
        assert_eq!(report.sources, 2);
        assert_eq!(report.parity_streams, 1);
        assert_eq!(report.declared_memory, 3);
        assert_eq!(report.minimal_memory, 3);
        assert_eq!(report.column_memory, vec![3]);
    }

    #[test]
    fn bundled_4_2_3_shares_registers_across_columns() {
        let g = GeneratorMatrix::systematic_4_2_3();
        let report = g.validate().unwrap();
        assert_eq!(report.sources, 2);
        assert_eq!(report.parity_streams, 2);
        assert_eq!(report.column_memory, vec![3, 3]);
        // the two columns share a single 3-register bank
        assert_eq!(report.minimal_memory, 3);
    }

    #[test]
    fn denominator_without_constant_term_is_unrealizable() {
        let g = GeneratorMatrix::parse_rows(&["1 / D", "1"], 1).unwrap();
        assert!(matches!(g.validate(), Err(Error::Unrealizable(_))));
    }

    #[test]
    fn declared_memory_below_minimal_is_rejected() {
        let g = GeneratorMatrix::parse_rows(
            &["1+D+D^2+D^3 / 1+D+D^3", "1+D^2+D^3 / 1+D+D^3"],
            2,
        )
        .unwrap();
        assert!(matches!(g.validate(), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn display_parses_back() {
        let g = GeneratorMatrix::systematic_4_2_3();
        let rows: Vec<String> = g.to_string().lines().map(String::from).collect();
        let row_refs: Vec<&str> = rows.iter().map(String::as_str).collect();
        let reparsed = GeneratorMatrix::parse_rows(&row_refs, 3).unwrap();
        assert_eq!(reparsed, g);
    }
}
