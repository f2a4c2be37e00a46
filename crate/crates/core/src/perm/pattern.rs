use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use super::{parse_entries_in, PermError, Permutation};

/// A pattern with adjacency requirements between consecutive entries.
///
/// In text form a dash separates entries that need not be adjacent in the
/// host (`3-12`); juxtaposed entries must be. A classical pattern is the
/// all-dashes case.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VincularPattern {
    pattern: Permutation,
    /// `adjacent[i]` requires entries `i` and `i + 1` (0-based) to be adjacent.
    adjacent: Vec<bool>,
}

impl VincularPattern {
    pub fn new(pattern: Permutation, adjacent: Vec<bool>) -> Result<Self, PermError> {
        if adjacent.len() + 1 != pattern.len() {
            return Err(PermError::Parse {
                pos: 0,
                msg: format!("adjacency list of length {} for a pattern of length {}", adjacent.len(), pattern.len()),
            });
        }
        Ok(VincularPattern { pattern, adjacent })
    }

    /// A pattern with no adjacency requirements.
    pub fn classical(pattern: Permutation) -> Self {
        let adjacent = vec![false; pattern.len().saturating_sub(1)];
        VincularPattern { pattern, adjacent }
    }

    pub fn pattern(&self) -> &Permutation {
        &self.pattern
    }

    pub fn adjacent(&self) -> &[bool] {
        &self.adjacent
    }

    /// Required-adjacent pairs as 1-based positions `i` (entries `i`, `i+1`).
    pub fn adjacency_positions(&self) -> Vec<usize> {
        (0..self.adjacent.len()).filter(|&i| self.adjacent[i]).map(|i| i + 1).collect()
    }

    pub fn is_classical(&self) -> bool {
        self.adjacent.iter().all(|a| !a)
    }

    /// The contiguous run of entries `start..end`, keeping internal adjacencies.
    pub(crate) fn segment(&self, start: usize, end: usize) -> VincularPattern {
        let positions: Vec<usize> = (start..end).collect();
        VincularPattern {
            pattern: self.pattern.pattern_at(&positions),
            adjacent: self.adjacent[start..end - 1].to_vec(),
        }
    }
}

impl fmt::Display for VincularPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.pattern.len() <= 9;
        for (i, &e) in self.pattern.entries().iter().enumerate() {
            if i > 0 {
                let sep = match (self.adjacent[i - 1], digits) {
                    (false, _) => "-",
                    (true, true) => "",
                    (true, false) => ",",
                };
                f.write_str(sep)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for VincularPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VincularPattern({self})")
    }
}

impl FromStr for VincularPattern {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, PermError> {
        let mut entries = Vec::new();
        let mut adjacent = Vec::new();
        let comma_form = s.contains(',');
        let mut pos = 0;
        for (gi, group) in s.split('-').enumerate() {
            if gi > 0 {
                adjacent.push(false);
            }
            let vals = parse_entries_in(group, pos, comma_form)?;
            for (k, v) in vals.into_iter().enumerate() {
                if k > 0 {
                    adjacent.push(true);
                }
                entries.push(v);
            }
            pos += group.len() + 1;
        }
        VincularPattern::new(Permutation::new(entries)?, adjacent)
    }
}

/// A pattern some of whose entries are barred.
///
/// A host avoids it when every copy of the unbarred entries extends to a copy
/// of the whole pattern. Digit form brackets barred digits (`[3]12`); comma
/// form suffixes them with `!` (`3!,1,2`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BarredPattern {
    pattern: Permutation,
    barred: Vec<bool>,
}

impl BarredPattern {
    pub fn new(pattern: Permutation, barred: Vec<bool>) -> Result<Self, PermError> {
        let n = pattern.len();
        let count = barred.iter().filter(|&&b| b).count();
        if barred.len() != n || count == 0 || count == n {
            return Err(PermError::Parse {
                pos: 0,
                msg: "barred set must be a nonempty proper subset of the positions".into(),
            });
        }
        Ok(BarredPattern { pattern, barred })
    }

    pub fn pattern(&self) -> &Permutation {
        &self.pattern
    }

    pub fn barred(&self) -> &[bool] {
        &self.barred
    }

    fn reduct_positions(&self) -> Vec<usize> {
        (0..self.pattern.len()).filter(|&i| !self.barred[i]).collect()
    }

    /// The pattern formed by the unbarred entries.
    pub fn reduct(&self) -> Permutation {
        self.pattern.pattern_at(&self.reduct_positions())
    }
}

impl fmt::Display for BarredPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.pattern.entries();
        if e.len() <= 9 {
            for (i, v) in e.iter().enumerate() {
                if self.barred[i] {
                    write!(f, "[{v}]")?;
                } else {
                    write!(f, "{v}")?;
                }
            }
            Ok(())
        } else {
            let parts: Vec<String> = e
                .iter()
                .enumerate()
                .map(|(i, v)| if self.barred[i] { format!("{v}!") } else { v.to_string() })
                .collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl fmt::Debug for BarredPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BarredPattern({self})")
    }
}

impl FromStr for BarredPattern {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, PermError> {
        let err = |pos: usize, msg: &str| PermError::Parse { pos, msg: msg.to_string() };
        let mut entries = Vec::new();
        let mut barred = Vec::new();
        if s.contains(',') || s.contains('!') {
            let mut pos = 0;
            for tok in s.split(',') {
                let (num, bar) = match tok.strip_suffix('!') {
                    Some(t) => (t, true),
                    None => (tok, false),
                };
                let v: u8 = num.parse().map_err(|_| err(pos, "expected a positive integer"))?;
                entries.push(v);
                barred.push(bar);
                pos += tok.len() + 1;
            }
        } else {
            // 0: outside brackets, 1: after '[', 2: after the bracketed digit
            let mut state = 0;
            for (pos, c) in s.char_indices() {
                state = match (state, c) {
                    (0, '[') => 1,
                    (2, ']') => 0,
                    (0 | 1, d) if d.is_ascii_digit() => {
                        entries.push(d as u8 - b'0');
                        barred.push(state == 1);
                        if state == 1 {
                            2
                        } else {
                            0
                        }
                    }
                    (2, _) => return Err(err(pos, "expected ']' after a barred digit")),
                    _ => return Err(err(pos, "expected a digit or '['")),
                };
            }
            if state != 0 {
                return Err(err(s.len(), "unclosed bracket"));
            }
        }
        BarredPattern::new(Permutation::new(entries)?, barred)
    }
}

/// Restrictions on where a copy may sit inside the host.
#[derive(Clone, Copy)]
pub(crate) struct Placement<'a> {
    pub adjacent: &'a [bool],
    /// The copy's first entry is the host's first entry.
    pub left: bool,
    /// The copy's last entry is the host's last entry.
    pub right: bool,
}

/// For each pattern entry, the earlier entries holding the nearest smaller and
/// larger values; together they bound the host value window.
fn value_windows(pattern: &[u8]) -> Vec<(Option<usize>, Option<usize>)> {
    (0..pattern.len())
        .map(|a| {
            let mut below: Option<usize> = None;
            let mut above: Option<usize> = None;
            for b in 0..a {
                if pattern[b] < pattern[a] && below.is_none_or(|x| pattern[b] > pattern[x]) {
                    below = Some(b);
                }
                if pattern[b] > pattern[a] && above.is_none_or(|x| pattern[b] < pattern[x]) {
                    above = Some(b);
                }
            }
            (below, above)
        })
        .collect()
}

/// Visits every copy of `pattern` in `host` meeting `place`, stopping early
/// when `visit` returns `true`. Returns whether it stopped early.
pub(crate) fn for_each_copy(
    pattern: &Permutation,
    host: &Permutation,
    place: Placement<'_>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let k = pattern.len();
    let n = host.len();
    if k == 0 {
        return visit(&[]);
    }
    if k > n {
        return false;
    }
    let windows = value_windows(pattern.entries());
    let mut chosen = vec![0usize; k];
    search(0, &windows, host.entries(), place, &mut chosen, visit)
}

fn search(
    a: usize,
    windows: &[(Option<usize>, Option<usize>)],
    host: &[u8],
    place: Placement<'_>,
    chosen: &mut [usize],
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let k = windows.len();
    let n = host.len();
    if a == k {
        return visit(chosen);
    }
    let (lo, hi) = if a == 0 {
        (0, if place.left { 0 } else { n - k })
    } else if place.adjacent[a - 1] {
        (chosen[a - 1] + 1, chosen[a - 1] + 1)
    } else {
        (chosen[a - 1] + 1, n - (k - a))
    };
    let (lo, hi) = if a == k - 1 && place.right {
        if hi < n - 1 || lo > n - 1 {
            return false;
        }
        (n - 1, n - 1)
    } else {
        (lo, hi)
    };
    if lo > hi || hi >= n {
        return false;
    }
    let (below, above) = windows[a];
    let min = below.map(|b| host[chosen[b]]);
    let max = above.map(|b| host[chosen[b]]);
    for pos in lo..=hi {
        let v = host[pos];
        if min.is_some_and(|m| v <= m) || max.is_some_and(|m| v >= m) {
            continue;
        }
        chosen[a] = pos;
        if search(a + 1, windows, host, place, chosen, visit) {
            return true;
        }
    }
    false
}

pub(crate) fn contains_placed(pattern: &Permutation, host: &Permutation, place: Placement<'_>) -> bool {
    for_each_copy(pattern, host, place, &mut |_| true)
}

impl Permutation {
    /// `self` occurs as a pattern in `host`.
    pub fn is_contained_in(&self, host: &Permutation) -> bool {
        let adjacent = vec![false; self.len().saturating_sub(1)];
        contains_placed(self, host, Placement { adjacent: &adjacent, left: false, right: false })
    }

    /// `pattern` occurs in `self`.
    pub fn contains(&self, pattern: &Permutation) -> bool {
        pattern.is_contained_in(self)
    }

    pub fn avoids(&self, pattern: &Permutation) -> bool {
        !self.contains(pattern)
    }

    pub fn contains_vincular(&self, pattern: &VincularPattern) -> bool {
        self.contains_vincular_anchored(pattern, false, false)
    }

    /// Copy of `pattern` whose first (`left`) or last (`right`) entry is
    /// pinned to the host's first or last position.
    pub fn contains_vincular_anchored(&self, pattern: &VincularPattern, left: bool, right: bool) -> bool {
        let place = Placement { adjacent: &pattern.adjacent, left, right };
        contains_placed(&pattern.pattern, self, place)
    }

    pub fn avoids_barred(&self, pattern: &BarredPattern) -> bool {
        let reduct_positions = pattern.reduct_positions();
        let full_adj = vec![false; pattern.pattern.len() - 1];
        let free = Placement { adjacent: &full_adj, left: false, right: false };
        let mut extendable: HashSet<Vec<usize>> = HashSet::new();
        for_each_copy(&pattern.pattern, self, free, &mut |copy| {
            extendable.insert(reduct_positions.iter().map(|&i| copy[i]).collect());
            false
        });
        let reduct = pattern.reduct();
        let red_adj = vec![false; reduct.len().saturating_sub(1)];
        let place = Placement { adjacent: &red_adj, left: false, right: false };
        !for_each_copy(&reduct, self, place, &mut |copy| !extendable.contains(copy))
    }
}
