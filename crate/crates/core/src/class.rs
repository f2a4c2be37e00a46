//! Permutation classes given by a basis and side conditions: the brute-force
//! oracle, simple permutations via one- and two-point extensions, and wreath
//! closures.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{BarredPattern, PermError, Permutation};
use crate::property::{Property, PropertyError};

pub const DEFAULT_MAX_SIMPLE_LENGTH: usize = 12;
pub const DEFAULT_MAX_ORACLE_LENGTH: usize = 9;
pub const DEFAULT_MAX_BASIS_LENGTH: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassError {
    #[error("oracle length {n} exceeds cap {cap}")]
    OracleCap { n: usize, cap: usize },
    #[error("simple permutations not known to be complete; raise the simple length cap")]
    IncompleteSimples,
    #[error("wreath-closure basis needs lengths up to {needed}, above cap {cap}")]
    BasisCap { needed: usize, cap: usize },
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Property(#[from] PropertyError),
    #[error("invalid class spec: {0}")]
    Spec(String),
}

/// A condition imposed on top of basis avoidance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SideCondition {
    Property(Property),
    /// Checked by the oracle only.
    Barred(BarredPattern),
    Involution,
}

impl SideCondition {
    pub fn holds(&self, pi: &Permutation) -> bool {
        match self {
            SideCondition::Property(p) => p.holds(pi),
            SideCondition::Barred(b) => pi.avoids_barred(b),
            SideCondition::Involution => pi.is_involution(),
        }
    }
}

impl FromStr for SideCondition {
    type Err = ClassError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "involution" {
            return Ok(SideCondition::Involution);
        }
        if let Some(rest) = s.strip_prefix("avoid_barred:") {
            return Ok(SideCondition::Barred(rest.parse()?));
        }
        Ok(SideCondition::Property(s.parse()?))
    }
}

impl fmt::Display for SideCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SideCondition::Property(p) => write!(f, "{p}"),
            SideCondition::Barred(b) => write!(f, "avoid_barred:{b}"),
            SideCondition::Involution => f.write_str("involution"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// `Av(basis)` itself.
    #[default]
    Class,
    /// The wreath closure of `Av(basis)`.
    WreathClosure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Caps {
    pub max_simple_length: usize,
    pub max_oracle_length: usize,
    pub max_basis_length: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_simple_length: DEFAULT_MAX_SIMPLE_LENGTH,
            max_oracle_length: DEFAULT_MAX_ORACLE_LENGTH,
            max_basis_length: DEFAULT_MAX_BASIS_LENGTH,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSpec {
    basis: Vec<Permutation>,
    pub conditions: Vec<SideCondition>,
    pub mode: Mode,
    pub caps: Caps,
}

impl ClassSpec {
    /// Drops basis elements containing other basis elements.
    pub fn new(basis: Vec<Permutation>, conditions: Vec<SideCondition>, mode: Mode) -> Self {
        let mut sorted: Vec<Permutation> = basis;
        sorted.sort();
        sorted.dedup();
        let mut minimal: Vec<Permutation> = Vec::new();
        for b in sorted {
            if let Some(m) = minimal.iter().find(|m| b.contains(m)) {
                log::warn!("dropping basis element {b}: it contains {m}");
            } else {
                minimal.push(b);
            }
        }
        ClassSpec { basis: minimal, conditions, mode, caps: Caps::default() }
    }

    pub fn av(basis: &[&str]) -> Result<Self, ClassError> {
        let basis = basis.iter().map(|b| b.parse()).collect::<Result<_, _>>()?;
        Ok(ClassSpec::new(basis, Vec::new(), Mode::Class))
    }

    pub fn with_conditions(mut self, conditions: &[&str]) -> Result<Self, ClassError> {
        for c in conditions {
            self.conditions.push(c.parse()?);
        }
        Ok(self)
    }

    pub fn basis(&self) -> &[Permutation] {
        &self.basis
    }

    pub fn involutions_only(&self) -> bool {
        self.conditions.contains(&SideCondition::Involution)
    }

    /// Property side conditions, in order.
    pub fn properties(&self) -> Vec<Property> {
        self.conditions
            .iter()
            .filter_map(|c| match c {
                SideCondition::Property(p) => Some(p.clone()),
                _ => None,
            })
            .collect()
    }

    /// Membership in the permutation set selected by basis and mode, ignoring
    /// side conditions.
    pub fn in_class(&self, pi: &Permutation) -> bool {
        match self.mode {
            Mode::Class => self.basis.iter().all(|b| pi.avoids(b)),
            Mode::WreathClosure => in_wreath_closure(pi, &|s: &Permutation| self.basis.iter().all(|b| s.avoids(b))),
        }
    }

    pub fn accepts(&self, pi: &Permutation) -> bool {
        self.in_class(pi) && self.conditions.iter().all(|c| c.holds(pi))
    }
}

/// Whether every skeleton in the recursive decomposition of `pi` is a member.
pub fn in_wreath_closure(pi: &Permutation, member: &dyn Fn(&Permutation) -> bool) -> bool {
    if pi.len() == 1 {
        return member(pi);
    }
    let d = pi.decompose();
    member(&d.skeleton) && d.children.iter().all(|c| in_wreath_closure(c, member))
}

/// Number of permutations of length `n` accepted by `spec`, by filtering `S_n`.
pub fn oracle_count(spec: &ClassSpec, n: usize) -> Result<u64, ClassError> {
    if n > spec.caps.max_oracle_length {
        return Err(ClassError::OracleCap { n, cap: spec.caps.max_oracle_length });
    }
    if n == 0 {
        return Ok(0);
    }
    Ok(Permutation::all_of_length(n).filter(|pi| spec.accepts(pi)).count() as u64)
}

/// The simple permutations of a class, by length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleSet {
    /// `by_length[n]` holds the simples of length `n`; index 0 is unused.
    pub by_length: Vec<Vec<Permutation>>,
    /// Whether the search proved there are no longer simples.
    pub complete: bool,
}

impl SimpleSet {
    /// A set given explicitly, taken to be complete.
    pub fn from_list(simples: &[Permutation]) -> Self {
        let max = simples.iter().map(Permutation::len).max().unwrap_or(0);
        let mut by_length = vec![Vec::new(); max + 1];
        for s in simples {
            by_length[s.len()].push(s.clone());
        }
        for level in &mut by_length {
            level.sort();
            level.dedup();
        }
        SimpleSet { by_length, complete: true }
    }

    /// Counts for lengths `1..`.
    pub fn counts(&self) -> Vec<usize> {
        self.by_length.iter().skip(1).map(Vec::len).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Permutation> {
        self.by_length.iter().flatten()
    }

    pub fn contains(&self, pi: &Permutation) -> bool {
        self.by_length.get(pi.len()).is_some_and(|l| l.binary_search(pi).is_ok())
    }

    /// Longest length with a simple, 0 if none.
    pub fn max_length(&self) -> usize {
        (0..self.by_length.len()).rev().find(|&n| !self.by_length[n].is_empty()).unwrap_or(0)
    }

    /// Simples of length at least 4, the ones beyond `1`, `12`, `21`.
    pub fn long(&self) -> Vec<Permutation> {
        self.iter().filter(|s| s.len() >= 4).cloned().collect()
    }

    /// The simples whose inverse is also present.
    pub fn inverse_closed_part(&self) -> SimpleSet {
        let mut out = self.clone();
        for level in &mut out.by_length {
            level.retain(|s| self.contains(&s.inverse()));
        }
        out
    }
}

fn insert_point(pi: &[u8], pos: usize, value: u8) -> Vec<u8> {
    let mut out: Vec<u8> = pi.iter().map(|&v| if v >= value { v + 1 } else { v }).collect();
    out.insert(pos, value);
    out
}

fn one_point_extensions(pi: &[u8]) -> impl Iterator<Item = Vec<u8>> + '_ {
    let n = pi.len();
    (0..=n).flat_map(move |pos| (1..=n as u8 + 1).map(move |v| insert_point(pi, pos, v)))
}

/// One-point and two-point extensions of the given permutations.
fn extensions<'a>(
    short: impl Iterator<Item = &'a Permutation>,
    shorter: impl Iterator<Item = &'a Permutation>,
) -> BTreeSet<Vec<u8>> {
    let mut out = BTreeSet::new();
    for p in short {
        out.extend(one_point_extensions(p.entries()));
    }
    for p in shorter {
        let once: BTreeSet<Vec<u8>> = one_point_extensions(p.entries()).collect();
        for q in &once {
            out.extend(one_point_extensions(q));
        }
    }
    out
}

/// Simple permutations of the class, level by level: every simple of length
/// `n ≥ 4` contains one of length `n - 1` or `n - 2`, so each level comes from
/// extending the previous two. Two empty levels beyond length 3 end the
/// search.
pub fn enumerate_simples(spec: &ClassSpec) -> SimpleSet {
    let cap = spec.caps.max_simple_length;
    let mut by_length: Vec<Vec<Permutation>> = vec![Vec::new()];
    let base = ["1", "12", "21"].map(|s| s.parse::<Permutation>().unwrap());
    for n in 1..=cap.min(3) {
        let level: Vec<Permutation> = base.iter().filter(|b| b.len() == n && spec.in_class(b)).cloned().collect();
        by_length.push(level);
    }
    let mut complete = false;
    for n in 4..=cap {
        let cands = extensions(by_length[n - 1].iter(), by_length[n - 2].iter());
        let level: Vec<Permutation> =
            cands.into_iter().map(Permutation::from_raw).filter(|c| c.is_simple() && spec.in_class(c)).collect();
        log::debug!("simples of length {n}: {}", level.len());
        by_length.push(level);
        if n >= 5 && by_length[n].is_empty() && by_length[n - 1].is_empty() {
            complete = true;
            break;
        }
    }
    SimpleSet { by_length, complete }
}

/// A class is wreath-closed exactly when its basis consists of simples.
pub fn is_wreath_closed(spec: &ClassSpec) -> bool {
    spec.basis.iter().all(Permutation::is_simple)
}

/// Basis of the wreath closure of a finite set of simples: the simples outside
/// the set all of whose one-point deletions lie in the closure. Such elements
/// have length at most `k + 2` where `k` is the longest simple in the set.
pub fn wreath_closure_basis(simples: &SimpleSet, cap: usize) -> Result<Vec<Permutation>, ClassError> {
    if !simples.complete {
        return Err(ClassError::IncompleteSimples);
    }
    let needed = simples.max_length() + 2;
    if needed > cap {
        return Err(ClassError::BasisCap { needed, cap });
    }
    let member = |s: &Permutation| simples.contains(s);
    let mut cands: BTreeSet<Vec<u8>> = [vec![1], vec![1, 2], vec![2, 1]].into_iter().collect();
    cands.extend(extensions(simples.iter(), simples.iter()));
    let mut basis: Vec<Permutation> = cands
        .into_iter()
        .map(Permutation::from_raw)
        .filter(|c| c.len() <= needed && c.is_simple() && !member(c))
        .filter(|c| {
            (0..c.len()).all(|skip| {
                let keep: Vec<usize> = (0..c.len()).filter(|&i| i != skip).collect();
                c.len() == 1 || in_wreath_closure(&c.pattern_at(&keep), &member)
            })
        })
        .collect();
    basis.sort();
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn ps(list: &[&str]) -> Vec<Permutation> {
        list.iter().map(|s| p(s)).collect()
    }

    #[test]
    fn basis_is_normalized() {
        let spec = ClassSpec::av(&["132", "1432", "21"]).unwrap();
        assert_eq!(spec.basis(), &ps(&["21"])[..]);
    }

    #[test]
    fn side_conditions_parse() {
        let spec = ClassSpec::av(&["132"])
            .unwrap()
            .with_conditions(&["involution", "avoid_barred:[3]12", "alternating"])
            .unwrap();
        assert!(spec.involutions_only());
        assert_eq!(spec.properties(), vec![Property::Alternating]);
        assert_eq!(spec.conditions[1].to_string(), "avoid_barred:[3]12");
    }

    #[test]
    fn oracle_counts() {
        assert_eq!(oracle_count(&ClassSpec::av(&["2413", "3142"]).unwrap(), 4).unwrap(), 22);
        assert_eq!(oracle_count(&ClassSpec::av(&["132"]).unwrap(), 5).unwrap(), 42);
        assert_eq!(oracle_count(&ClassSpec::av(&["12"]).unwrap(), 3).unwrap(), 1);
        let spec = ClassSpec::av(&["132"]).unwrap();
        assert!(matches!(oracle_count(&spec, 10), Err(ClassError::OracleCap { .. })));
    }

    #[test]
    fn wreath_closure_oracle() {
        // W(Av(132)) is the separable class
        let mut wc = ClassSpec::av(&["132"]).unwrap();
        wc.mode = Mode::WreathClosure;
        let sep = ClassSpec::av(&["2413", "3142"]).unwrap();
        for n in 1..=7 {
            assert_eq!(oracle_count(&wc, n).unwrap(), oracle_count(&sep, n).unwrap());
        }
    }

    #[test]
    fn simples_of_three_pattern_class() {
        let s = enumerate_simples(&ClassSpec::av(&["1324", "2143", "4231"]).unwrap());
        assert_eq!(s.counts(), vec![1, 2, 0, 2, 4, 0, 0]);
        assert!(s.complete);
        let s = enumerate_simples(&ClassSpec::av(&["132"]).unwrap());
        assert_eq!(s.iter().cloned().collect::<Vec<_>>(), ps(&["1", "12", "21"]));
        assert!(s.complete);
    }

    #[test]
    fn unrestricted_simples_hit_the_cap() {
        let mut spec = ClassSpec::av(&[]).unwrap();
        spec.caps.max_simple_length = 7;
        let s = enumerate_simples(&spec);
        assert!(!s.complete);
        assert_eq!(s.counts(), vec![1, 2, 0, 2, 6, 46, 338]);
    }

    #[test]
    fn simples_match_brute_force() {
        for basis in [&["2413"][..], &["321"], &["3142", "2413"], &["246135"], &["4231", "35142"], &["1234"]] {
            let mut spec = ClassSpec::av(basis).unwrap();
            spec.caps.max_simple_length = 7;
            let s = enumerate_simples(&spec);
            for n in 1..s.by_length.len() {
                let brute: Vec<Permutation> =
                    Permutation::all_of_length(n).filter(|q| q.is_simple() && spec.in_class(q)).collect();
                assert_eq!(s.by_length[n], brute, "{basis:?} at {n}");
            }
        }
    }

    #[test]
    fn wreath_closedness() {
        assert!(is_wreath_closed(&ClassSpec::av(&["2413", "3142"]).unwrap()));
        assert!(!is_wreath_closed(&ClassSpec::av(&["132"]).unwrap()));
        assert!(is_wreath_closed(&ClassSpec::av(&[]).unwrap()));
    }

    #[test]
    fn wreath_closure_bases() {
        let set = SimpleSet::from_list(&ps(&["1", "12", "21", "2413"]));
        assert_eq!(wreath_closure_basis(&set, 9).unwrap(), ps(&["3142", "25314", "246135", "362514"]));
        let set = SimpleSet::from_list(&ps(&["1", "12", "21"]));
        assert_eq!(wreath_closure_basis(&set, 9).unwrap(), ps(&["2413", "3142"]));
        let set = SimpleSet::from_list(&ps(&["1", "12"]));
        assert_eq!(wreath_closure_basis(&set, 9).unwrap(), ps(&["21"]));
        let set = SimpleSet::from_list(&ps(&["1", "12", "21", "2413"]));
        assert!(matches!(wreath_closure_basis(&set, 5), Err(ClassError::BasisCap { .. })));
    }

    #[test]
    fn wreath_closure_basis_matches_brute_force() {
        // minimal non-members of W(Si(Av(321))) up to length 7
        let mut spec = ClassSpec::av(&["321"]).unwrap();
        spec.caps.max_simple_length = 9;
        let set = SimpleSet::from_list(&ps(&["1", "12", "21", "2413", "3142"]));
        let member = |s: &Permutation| set.contains(s);
        let basis = wreath_closure_basis(&set, 9).unwrap();
        for n in 1..=6 {
            let brute: Vec<Permutation> = Permutation::all_of_length(n)
                .filter(|q| !in_wreath_closure(q, &member))
                .filter(|q| {
                    (0..n).all(|skip| {
                        let keep: Vec<usize> = (0..n).filter(|&i| i != skip).collect();
                        n == 1 || in_wreath_closure(&q.pattern_at(&keep), &member)
                    })
                })
                .collect();
            let got: Vec<Permutation> = basis.iter().filter(|b| b.len() == n).cloned().collect();
            assert_eq!(got, brute, "length {n}");
        }
    }
}
