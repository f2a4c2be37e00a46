use std::fmt;

use super::{PermError, Permutation};

/// The unique expression of a permutation as an inflation of a simple one.
///
/// When the skeleton is `12` (resp. `21`) the first child is sum (resp. skew)
/// indecomposable. The permutation `1` decomposes as `1[1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub skeleton: Permutation,
    pub children: Vec<Permutation>,
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kids: Vec<String> = self.children.iter().map(|c| c.to_string()).collect();
        write!(f, "{}[{}]", self.skeleton, kids.join(","))
    }
}

/// `π = 321[first, middle, last]` with skew-indecomposable outer parts and the
/// longest possible middle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiddleGreedy {
    pub first: Permutation,
    pub middle: Permutation,
    pub last: Permutation,
}

impl Permutation {
    /// Every interval `[a, b]` (1-based, inclusive) with `1 < b - a + 1 < n`.
    pub fn proper_intervals(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            let mut lo = self.entries[a];
            let mut hi = lo;
            for b in a + 1..n {
                lo = lo.min(self.entries[b]);
                hi = hi.max(self.entries[b]);
                let len = b - a + 1;
                if len < n && (hi - lo) as usize == b - a {
                    out.push((a + 1, b + 1));
                }
            }
        }
        out
    }

    pub fn is_simple(&self) -> bool {
        let n = self.len();
        if n <= 2 {
            return true;
        }
        for a in 0..n {
            let mut lo = self.entries[a];
            let mut hi = lo;
            for b in a + 1..n {
                lo = lo.min(self.entries[b]);
                hi = hi.max(self.entries[b]);
                if b - a + 1 < n && (hi - lo) as usize == b - a {
                    return false;
                }
            }
        }
        true
    }

    /// The inflation `self[children...]`.
    pub fn inflate(&self, children: &[Permutation]) -> Result<Permutation, PermError> {
        if children.len() != self.len() {
            return Err(PermError::Arity { expected: self.len(), got: children.len() });
        }
        if let Some(i) = children.iter().position(|c| c.is_empty()) {
            return Err(PermError::EmptyChild(i));
        }
        Ok(self.inflate_lenient(children))
    }

    /// Inflation whose children may be empty.
    pub(crate) fn inflate_lenient(&self, children: &[Permutation]) -> Permutation {
        debug_assert_eq!(children.len(), self.len());
        let m = self.len();
        let mut offset = vec![0usize; m];
        for i in 0..m {
            offset[i] = (0..m).filter(|&j| self.entries[j] < self.entries[i]).map(|j| children[j].len()).sum();
        }
        let mut out = Vec::with_capacity(children.iter().map(|c| c.len()).sum());
        for (i, child) in children.iter().enumerate() {
            out.extend(child.entries.iter().map(|&v| (v as usize + offset[i]) as u8));
        }
        Permutation::from_raw(out)
    }

    pub(crate) fn slice_pattern(&self, start: usize, end: usize) -> Permutation {
        Permutation::standardize(&self.entries[start..end])
    }

    /// Substitution decomposition.
    pub fn decompose(&self) -> Decomposition {
        let n = self.len();
        assert!(n > 0, "decompose of the empty permutation");
        if n == 1 {
            return Decomposition { skeleton: self.clone(), children: vec![self.clone()] };
        }
        if let Some(p) = self.sum_split() {
            return Decomposition {
                skeleton: Permutation::identity(2),
                children: vec![self.slice_pattern(0, p), self.slice_pattern(p, n)],
            };
        }
        if let Some(p) = self.skew_split() {
            return Decomposition {
                skeleton: Permutation::decreasing(2),
                children: vec![self.slice_pattern(0, p), self.slice_pattern(p, n)],
            };
        }
        // Neither sum nor skew decomposable: the maximal proper intervals are
        // disjoint and the blocks they leave are singletons.
        let intervals = self.proper_intervals();
        let maximal: Vec<(usize, usize)> = intervals
            .iter()
            .copied()
            .filter(|&(a, b)| !intervals.iter().any(|&(c, d)| (c, d) != (a, b) && c <= a && b <= d))
            .collect();
        let mut blocks = Vec::new();
        let mut pos = 1;
        while pos <= n {
            let end = maximal.iter().find(|&&(a, _)| a == pos).map_or(pos, |&(_, b)| b);
            blocks.push((pos - 1, end));
            pos = end + 1;
        }
        let reps: Vec<u8> = blocks.iter().map(|&(a, _)| self.entries[a]).collect();
        Decomposition {
            skeleton: Permutation::standardize(&reps),
            children: blocks.iter().map(|&(a, b)| self.slice_pattern(a, b)).collect(),
        }
    }

    /// The skew-sum components, top to bottom.
    pub fn skew_components(&self) -> Vec<Permutation> {
        let mut parts = Vec::new();
        let mut rest = self.clone();
        while let Some(p) = rest.skew_split() {
            parts.push(rest.slice_pattern(0, p));
            rest = rest.slice_pattern(p, rest.len());
        }
        parts.push(rest);
        parts
    }

    /// Middle greedy split of a skew-decomposable permutation; `None` when it
    /// has exactly two skew-indecomposable components.
    pub fn middle_greedy_321(&self) -> Result<Option<MiddleGreedy>, PermError> {
        let parts = self.skew_components();
        if parts.len() < 2 {
            return Err(PermError::SkewIndecomposable(self.clone()));
        }
        if parts.len() == 2 {
            return Ok(None);
        }
        let n = self.len();
        let first = parts[0].clone();
        let last = parts[parts.len() - 1].clone();
        let middle = self.slice_pattern(first.len(), n - last.len());
        Ok(Some(MiddleGreedy { first, middle, last }))
    }
}
