//! Weight enumeration with the output weight split into systematic (`d1`)
//! and parity (`d2`) components, plus the quantities derived from it:
//! free distance, dominant error patterns, and diversity order.

use std::collections::BTreeMap;

use crate::code::Trellis;
use crate::{Error, Result};

/// Default branch-visit budget for exact enumeration.
pub const DEFAULT_BUDGET: u64 = 200_000_000;

/// Bit weight enumerator of a systematic code, as a sparse table
/// `(d1, d2) -> B` where `d1` counts nonzero systematic output bits, `d2`
/// nonzero parity output bits, and `B` the total nonzero input bits over
/// all first-passage loops at the zero state with those weights. For a
/// systematic code the input weight of a path equals its `d1`, so
/// `B = d1 * paths`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightEnumerator {
    terms: BTreeMap<(u32, u32), u64>,
    paths: BTreeMap<(u32, u32), u64>,
    horizon: u32,
    complete: bool,
}

impl WeightEnumerator {
    /// Exact enumeration of every error event with `d1 + d2 <= horizon`,
    /// with the default search budget.
    pub fn enumerate(trellis: &Trellis, horizon: u32) -> Result<WeightEnumerator> {
        Self::enumerate_with_budget(trellis, horizon, DEFAULT_BUDGET)
    }

    /// Exact enumeration with an explicit branch-visit budget. On budget
    /// exhaustion the partial table travels inside the error with its
    /// `complete` flag cleared.
    pub fn enumerate_with_budget(
        trellis: &Trellis,
        horizon: u32,
        budget: u64,
    ) -> Result<WeightEnumerator> {
        if horizon == 0 {
            return Err(Error::InvalidParameter("horizon must be at least 1".into()));
        }
        let inputs = trellis.input_count() as u32;
        let mut paths: BTreeMap<(u32, u32), u64> = BTreeMap::new();
        let mut visited = 0u64;
        // depth-first over first-passage loops: leave the zero state once,
        // record a term whenever a branch returns to it. Zero-weight
        // cycles cannot occur away from the zero state (the realization
        // is observable and the code systematic), so the search is finite.
        let mut stack: Vec<(u32, u32, u32, u32)> = Vec::new(); // state, d1, d2, next input
        let mut frame = (0u32, 0u32, 0u32, 1u32); // skip the zero-state self loop
        let mut exhausted = false;
        'dfs: loop {
            let (state, d1, d2, mut input) = frame;
            while input < inputs {
                visited += 1;
                if visited > budget {
                    exhausted = true;
                    break 'dfs;
                }
                let (next, parity) = trellis.step(state, input);
                let nd1 = d1 + input.count_ones();
                let nd2 = d2 + parity.count_ones();
                input += 1;
                if nd1 + nd2 > horizon {
                    continue;
                }
                if next == 0 {
                    *paths.entry((nd1, nd2)).or_insert(0) += 1;
                } else {
                    stack.push((state, d1, d2, input));
                    frame = (next, nd1, nd2, 0);
                    continue 'dfs;
                }
            }
            match stack.pop() {
                Some(parent) => frame = parent,
                None => break,
            }
        }
        let terms = paths
            .iter()
            .map(|(&(d1, d2), &count)| ((d1, d2), u64::from(d1) * count))
            .collect();
        let wef = WeightEnumerator { terms, paths, horizon, complete: !exhausted };
        if exhausted {
            return Err(Error::EnumerationBudget { visited, partial: Box::new(wef) });
        }
        Ok(wef)
    }

    /// `B` coefficient of the `(d1, d2)` term (0 when absent).
    pub fn coefficient(&self, d1: u32, d2: u32) -> u64 {
        self.terms.get(&(d1, d2)).copied().unwrap_or(0)
    }

    /// Number of first-passage paths with weights `(d1, d2)`.
    pub fn path_count(&self, d1: u32, d2: u32) -> u64 {
        self.paths.get(&(d1, d2)).copied().unwrap_or(0)
    }

    /// Iterates `((d1, d2), B)` in lexicographic `(d1, d2)` order.
    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), u64)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    /// Terms sorted by `(d1 + d2, d1)` ascending, the report order.
    pub fn terms_by_total_weight(&self) -> Vec<((u32, u32), u64)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by_key(|&((d1, d2), _)| (d1 + d2, d1));
        v
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    #[cfg(test)]
    pub(crate) fn empty_for_tests(horizon: u32) -> WeightEnumerator {
        WeightEnumerator {
            terms: BTreeMap::new(),
            paths: BTreeMap::new(),
            horizon,
            complete: true,
        }
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Minimum total weight `d1 + d2` over all enumerated terms.
    pub fn free_distance(&self) -> Result<u32> {
        self.terms
            .keys()
            .map(|&(d1, d2)| d1 + d2)
            .min()
            .ok_or(Error::IncompleteEnumeration)
    }

    /// All pairs minimizing `d1 + M*d2`, certified against the horizon:
    /// any term beyond the horizon has `d1 + d2 > horizon`, hence an
    /// objective above `horizon`, so a best objective within the horizon
    /// cannot be beaten by an unexplored term. An uncertifiable horizon is
    /// an error, never a silent answer.
    pub fn dominant_pattern(&self, antennas: u32) -> Result<DominantPattern> {
        if antennas == 0 {
            return Err(Error::InvalidParameter("antenna count must be positive".into()));
        }
        let mut best: Option<(u32, Vec<(u32, u32)>)> = None;
        for &(d1, d2) in self.terms.keys() {
            let objective = d1 + antennas * d2;
            match &mut best {
                Some((obj, pairs)) if *obj == objective => pairs.push((d1, d2)),
                Some((obj, _)) if *obj < objective => {}
                _ => best = Some((objective, vec![(d1, d2)])),
            }
        }
        let (objective, pairs) = best.ok_or(Error::IncompleteEnumeration)?;
        if objective > self.horizon {
            return Err(Error::InconclusiveHorizon {
                horizon: self.horizon,
                best_objective: objective,
            });
        }
        Ok(DominantPattern { pairs, exponent: objective })
    }
}

/// Error patterns minimizing `d1 + M*d2` and the resulting high-SNR
/// exponent of the cooperative phase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominantPattern {
    /// All minimizing `(d1, d2)` pairs, ascending.
    pub pairs: Vec<(u32, u32)>,
    /// The minimized objective `d1 + M*d2`.
    pub exponent: u32,
}

/// End-to-end diversity order: the cooperative-phase exponent saturated by
/// the relay decoding failure floor `M*m + 1`.
pub fn diversity_order(exponent: u32, antennas: u32, nakagami_m: u32) -> u32 {
    exponent.min(antennas * nakagami_m + 1)
}
