//! Iterates `f^n` and their degree sequences.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::coeff::Coefficient;
use crate::map::{MapError, PolyMap};

/// Default cap on the total number of terms in a single iterate.
pub const DEFAULT_TERM_LIMIT: usize = 2_000_000;

/// Sequential iterates `f^n = f o f^(n-1)`, computed once and kept.
#[derive(Clone, Debug)]
pub struct IterateCache<C> {
    base: PolyMap<C>,
    identity: PolyMap<C>,
    iterates: Vec<PolyMap<C>>,
    term_limit: usize,
}

impl<C: Coefficient> IterateCache<C> {
    pub fn new(base: PolyMap<C>) -> Self {
        let identity = PolyMap::identity(base.dim());
        Self { iterates: Vec::new(), identity, base, term_limit: DEFAULT_TERM_LIMIT }
    }

    pub fn with_term_limit(mut self, limit: usize) -> Self {
        self.term_limit = limit;
        self
    }

    pub fn base(&self) -> &PolyMap<C> {
        &self.base
    }

    /// Number of iterates currently cached.
    pub fn cached(&self) -> usize {
        self.iterates.len()
    }

    /// `f^n`; `n = 0` yields the identity.
    pub fn get(&mut self, n: u32) -> Result<&PolyMap<C>, MapError> {
        if n == 0 {
            return Ok(&self.identity);
        }
        while self.iterates.len() < n as usize {
            let next = match self.iterates.last() {
                None => self.base.clone(),
                Some(prev) => self.base.compose(prev)?,
            };
            let k = self.iterates.len() as u32 + 1;
            let terms = next.num_terms();
            if terms > self.term_limit {
                return Err(MapError::Resource { n: k, terms, limit: self.term_limit });
            }
            self.iterates.push(next);
        }
        Ok(&self.iterates[n as usize - 1])
    }
}

/// `f^n` through a fresh cache.
pub fn iterate<C: Coefficient>(f: &PolyMap<C>, n: u32) -> Result<PolyMap<C>, MapError> {
    IterateCache::new(f.clone()).get(n).cloned()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeEntry {
    pub n: u32,
    pub degree: u32,
    pub component_degrees: Vec<u32>,
}

/// `deg f^n` for `n = 1..=N`, without gaps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSequence {
    pub name: String,
    entries: Vec<DegreeEntry>,
}

impl DegreeSequence {
    /// From plain degrees, indexed `1..=len`.
    pub fn from_degrees(name: impl Into<String>, degrees: &[u32]) -> Self {
        let entries = degrees
            .iter()
            .enumerate()
            .map(|(i, &degree)| DegreeEntry { n: i as u32 + 1, degree, component_degrees: Vec::new() })
            .collect();
        Self { name: name.into(), entries }
    }

    pub fn entries(&self) -> &[DegreeEntry] {
        &self.entries
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.degree).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `deg f^n`, 1-based.
    pub fn degree(&self, n: u32) -> Option<u32> {
        self.entries.get((n as usize).checked_sub(1)?).map(|e| e.degree)
    }

    /// First `(n, m)` with `deg f^(n+m) > deg f^n * deg f^m`, if any.
    pub fn submultiplicativity_violation(&self) -> Option<(u32, u32)> {
        let d = self.degrees();
        let len = d.len();
        for n in 1..=len {
            for m in 1..=len - n {
                if n + m > len {
                    break;
                }
                if u64::from(d[n + m - 1]) > u64::from(d[n - 1]) * u64::from(d[m - 1]) {
                    return Some((n as u32, m as u32));
                }
            }
        }
        None
    }
}

/// A degree sequence cut short by the term budget.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeSequenceError {
    pub partial: DegreeSequence,
    pub source: MapError,
}

impl fmt::Display for DegreeSequenceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "degree sequence stopped after n = {}: {}", self.partial.len(), self.source)
    }
}

impl core::error::Error for DegreeSequenceError {}

/// Exact degrees of `f^1 .. f^N` via the iterate cache.
pub fn degree_sequence<C: Coefficient>(
    cache: &mut IterateCache<C>,
    n_max: u32,
) -> Result<DegreeSequence, DegreeSequenceError> {
    let name = String::from(cache.base().name().unwrap_or("map"));
    let mut seq = DegreeSequence { name, entries: Vec::with_capacity(n_max as usize) };
    for n in 1..=n_max {
        match cache.get(n) {
            Ok(map) => seq.entries.push(DegreeEntry {
                n,
                degree: map.degree(),
                component_degrees: map.component_degrees(),
            }),
            Err(source) => return Err(DegreeSequenceError { partial: seq, source }),
        }
    }
    assert!(
        seq.submultiplicativity_violation().is_none(),
        "degree sequence violates submultiplicativity"
    );
    Ok(seq)
}
