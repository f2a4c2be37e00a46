//! Permutations in one-line notation and the pattern relations between them.
//!
//! A [`Permutation`] of length `n` stores the ranks `1..=n` in position order.
//! Short permutations print as digit strings (`2413`); from length ten on the
//! entries are comma separated (`10,2,3,4,5,6,7,8,9,1`). Parsing accepts both.

mod decomp;
mod pattern;

pub use decomp::{Decomposition, MiddleGreedy};
pub use pattern::{BarredPattern, VincularPattern};

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Longest permutation representable; entries are stored as bytes.
pub const MAX_LENGTH: usize = u8::MAX as usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("empty permutation")]
    Empty,
    #[error("entries are not a permutation of 1..={0}")]
    NotBijection(usize),
    #[error("permutation longer than {MAX_LENGTH}")]
    TooLong,
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("inflation of a length-{expected} permutation given {got} children")]
    Arity { expected: usize, got: usize },
    #[error("inflation child {0} is empty")]
    EmptyChild(usize),
    #[error("{0} is skew indecomposable")]
    SkewIndecomposable(Permutation),
}

/// A bijection of `[n]` written in one-line notation.
///
/// The empty permutation exists only as an inflation piece inside the crate;
/// every public constructor rejects it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    entries: Vec<u8>,
}

impl Permutation {
    /// Builds a permutation from 1-based ranks.
    pub fn new(entries: Vec<u8>) -> Result<Self, PermError> {
        if entries.is_empty() {
            return Err(PermError::Empty);
        }
        Self::validate(&entries)?;
        Ok(Permutation { entries })
    }

    pub fn from_slice(entries: &[u8]) -> Result<Self, PermError> {
        Self::new(entries.to_vec())
    }

    fn validate(entries: &[u8]) -> Result<(), PermError> {
        let n = entries.len();
        if n > MAX_LENGTH {
            return Err(PermError::TooLong);
        }
        let mut seen = vec![false; n + 1];
        for &e in entries {
            let e = e as usize;
            if e == 0 || e > n || seen[e] {
                return Err(PermError::NotBijection(n));
            }
            seen[e] = true;
        }
        Ok(())
    }

    #[cfg(test)]
    pub(crate) fn empty() -> Self {
        Permutation { entries: Vec::new() }
    }

    /// Trusted constructor for entries already known to form a permutation.
    pub(crate) fn from_raw(entries: Vec<u8>) -> Self {
        debug_assert!(Self::validate(&entries).is_ok());
        Permutation { entries }
    }

    /// The increasing permutation `12…n`.
    pub fn identity(n: usize) -> Self {
        Permutation::from_raw((1..=n as u8).collect())
    }

    /// The decreasing permutation `n…21`.
    pub fn decreasing(n: usize) -> Self {
        Permutation::from_raw((1..=n as u8).rev().collect())
    }

    /// The pattern formed by an arbitrary sequence of distinct values.
    pub fn standardize<T: Ord>(values: &[T]) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].cmp(&values[b]));
        let mut entries = vec![0u8; values.len()];
        for (rank, &pos) in order.iter().enumerate() {
            entries[pos] = (rank + 1) as u8;
        }
        Permutation::from_raw(entries)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    /// Entry at 0-based position `i`.
    pub fn get(&self, i: usize) -> usize {
        self.entries[i] as usize
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.len()];
        for (i, &v) in self.entries.iter().enumerate() {
            inv[v as usize - 1] = (i + 1) as u8;
        }
        Permutation::from_raw(inv)
    }

    pub fn is_involution(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, &v)| self.entries[v as usize - 1] as usize == i + 1)
    }

    pub fn inversions(&self) -> usize {
        let e = &self.entries;
        let mut count = 0;
        for i in 0..e.len() {
            for j in i + 1..e.len() {
                if e[i] > e[j] {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn is_even(&self) -> bool {
        self.inversions() % 2 == 0
    }

    /// No interior entry lies between its two neighbours.
    pub fn is_alternating(&self) -> bool {
        self.entries.windows(3).all(|w| !((w[0] < w[1] && w[1] < w[2]) || (w[0] > w[1] && w[1] > w[2])))
    }

    pub fn begins_with_rise(&self) -> bool {
        self.len() >= 2 && self.entries[0] < self.entries[1]
    }

    pub fn ends_with_rise(&self) -> bool {
        let n = self.len();
        n >= 2 && self.entries[n - 2] < self.entries[n - 1]
    }

    /// Dumont permutation of the first kind: every even entry is immediately
    /// followed by a smaller one, every odd entry by a larger one or is last.
    pub fn is_dumont1(&self) -> bool {
        self.dumont_body(false) && self.entries.last().is_some_and(|&v| v % 2 == 1)
    }

    /// The Dumont condition on every position except the last. With `flipped`
    /// the roles of even and odd values are swapped.
    pub fn dumont_body(&self, flipped: bool) -> bool {
        self.entries.windows(2).all(|w| {
            let descent = w[0] > w[1];
            let even = w[0] % 2 == 0;
            descent == (even != flipped)
        })
    }

    pub fn last_value_even(&self) -> bool {
        self.entries.last().is_some_and(|&v| v % 2 == 0)
    }

    /// Not expressible as `12[α, β]`.
    pub fn is_sum_indecomposable(&self) -> bool {
        self.sum_split().is_none()
    }

    /// Not expressible as `21[α, β]`.
    pub fn is_skew_indecomposable(&self) -> bool {
        self.skew_split().is_none()
    }

    /// Length of the shortest proper prefix occupying the bottom values.
    pub(crate) fn sum_split(&self) -> Option<usize> {
        let mut max = 0;
        for (i, &v) in self.entries.iter().enumerate().take(self.len().saturating_sub(1)) {
            max = max.max(v as usize);
            if max == i + 1 {
                return Some(i + 1);
            }
        }
        None
    }

    /// Length of the shortest proper prefix occupying the top values.
    pub(crate) fn skew_split(&self) -> Option<usize> {
        let n = self.len();
        let mut min = usize::MAX;
        for (i, &v) in self.entries.iter().enumerate().take(n.saturating_sub(1)) {
            min = min.min(v as usize);
            if min == n - i {
                return Some(i + 1);
            }
        }
        None
    }

    /// The subpattern formed by the entries at the given (increasing) positions.
    pub fn pattern_at(&self, positions: &[usize]) -> Permutation {
        let vals: Vec<u8> = positions.iter().map(|&p| self.entries[p]).collect();
        Permutation::standardize(&vals)
    }

    /// Every permutation of length `n`, in lexicographic order.
    pub fn all_of_length(n: usize) -> AllPermutations {
        AllPermutations { next: if n == 0 { None } else { Some((1..=n as u8).collect()) } }
    }
}

/// Length first, then lexicographic.
impl Ord for Permutation {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.entries.cmp(&other.entries))
    }
}

impl PartialOrd for Permutation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 9 {
            for &e in &self.entries {
                write!(f, "{e}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let entries = parse_entries(s, 0)?;
        Permutation::new(entries)
    }
}

/// Parses either a digit string or a comma-separated list. `offset` shifts
/// reported error positions for callers parsing a larger string.
pub(crate) fn parse_entries(s: &str, offset: usize) -> Result<Vec<u8>, PermError> {
    parse_entries_in(s, offset, s.contains(','))
}

pub(crate) fn parse_entries_in(s: &str, offset: usize, comma: bool) -> Result<Vec<u8>, PermError> {
    let err = |pos: usize, msg: &str| PermError::Parse { pos: offset + pos, msg: msg.to_string() };
    if s.is_empty() {
        return Err(err(0, "expected a permutation"));
    }
    let mut out = Vec::new();
    if comma {
        let mut pos = 0;
        for tok in s.split(',') {
            let t = tok.trim();
            let v: u8 = t.parse().map_err(|_| err(pos, "expected a positive integer"))?;
            out.push(v);
            pos += tok.len() + 1;
        }
    } else {
        for (pos, c) in s.char_indices() {
            let d = c.to_digit(10).ok_or_else(|| err(pos, "expected a digit"))?;
            out.push(d as u8);
        }
    }
    Ok(out)
}

/// Lexicographic iterator over `S_n`.
pub struct AllPermutations {
    next: Option<Vec<u8>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let n = succ.len();
        if n >= 2 {
            let mut i = n - 1;
            while i > 0 && succ[i - 1] >= succ[i] {
                i -= 1;
            }
            if i > 0 {
                let mut j = n - 1;
                while succ[j] <= succ[i - 1] {
                    j -= 1;
                }
                succ.swap(i - 1, j);
                succ[i..].reverse();
                self.next = Some(succ);
            }
        }
        Some(Permutation::from_raw(cur))
    }
}
