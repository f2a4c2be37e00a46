//! Proper algebraic systems for the profile generating functions.
//!
//! In plain mode the unknown `g{R}` counts the permutations of the wreath
//! closure with profile `R`. In involution mode the unknown `h{R}` counts the
//! involutions with profile `R`, and the parameter `p{S}` stands for `g{S}(x²)`,
//! counting pairs `(α, α⁻¹)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::class::SimpleSet;
use crate::perm::Permutation;
use crate::property::{Profile, Property, PropertyError, PropertyUniverse};

/// Bound on the child tuples examined for a single skeleton.
pub const DEFAULT_MAX_TUPLES: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("simple permutations are incomplete")]
    IncompleteSimples,
    #[error("skeleton {sigma} has {tuples} child tuples, above the cap {cap}")]
    TooManyTuples { sigma: Permutation, tuples: usize, cap: usize },
    #[error("{0} is not simple")]
    NotSimple(Permutation),
    #[error("the simple set is not closed under pattern containment: {0} is missing")]
    NotWreathClosed(Permutation),
    #[error(transparent)]
    Property(#[from] PropertyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Plain,
    Involution,
}

/// A factor of a monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    /// Index into the unknowns.
    Unknown(usize),
    /// Index into the parameters.
    Param(usize),
}

/// `coeff · x^x_power · Π factors`, factors sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub factors: Vec<Symbol>,
    pub x_power: u32,
    pub coeff: i64,
}

impl Monomial {
    pub fn x() -> Monomial {
        Monomial { factors: Vec::new(), x_power: 1, coeff: 1 }
    }

    pub fn product(mut factors: Vec<Symbol>) -> Monomial {
        factors.sort();
        Monomial { factors, x_power: 0, coeff: 1 }
    }

    pub fn unknown_degree(&self) -> usize {
        self.factors.iter().filter(|f| matches!(f, Symbol::Unknown(_))).count()
    }

    pub fn param_degree(&self) -> usize {
        self.factors.len() - self.unknown_degree()
    }
}

#[derive(Debug, Clone)]
pub struct AlgebraicSystem {
    pub mode: Mode,
    pub universe: Arc<PropertyUniverse>,
    pub unknowns: Vec<Profile>,
    /// Right-hand side of the equation for each unknown, as merged, sorted
    /// monomials.
    pub equations: Vec<Vec<Monomial>>,
    /// Profiles of the `p` parameters, indices into `base.unknowns`.
    pub params: Vec<Profile>,
    /// In involution mode, the plain system whose solution defines the `p`s.
    pub base: Option<Arc<AlgebraicSystem>>,
}

/// Outcome of [`AlgebraicSystem::properness_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Properness {
    pub proper: bool,
    pub diagnostics: Vec<String>,
}

/// How a child slot of a skeleton is filled.
#[derive(Debug, Clone, Copy)]
enum Slot {
    /// An unknown, optionally required to contain a property.
    Own(Option<usize>),
    /// A parameter: a base profile, optionally required to contain a property.
    Pair(Option<usize>),
    /// The inverse of the profile in the given earlier slot.
    InverseOf(usize),
}

struct Rule {
    sigma: Permutation,
    slots: Vec<Slot>,
}

impl AlgebraicSystem {
    /// A system given directly; mainly for tests.
    pub fn from_equations(
        universe: Arc<PropertyUniverse>,
        unknowns: Vec<Profile>,
        equations: Vec<Vec<Monomial>>,
    ) -> Self {
        AlgebraicSystem { mode: Mode::Plain, universe, unknowns, equations, params: Vec::new(), base: None }
    }

    /// The system for `{g_R}` over the wreath closure of `simples`.
    pub fn build(simples: &SimpleSet, universe: Arc<PropertyUniverse>) -> Result<Self, SystemError> {
        Self::build_capped(simples, universe, DEFAULT_MAX_TUPLES)
    }

    pub fn build_capped(
        simples: &SimpleSet,
        universe: Arc<PropertyUniverse>,
        max_tuples: usize,
    ) -> Result<Self, SystemError> {
        check_simples(simples)?;
        let (sum, skew) = sum_skew(&universe)?;
        let mut rules = vec![
            Rule { sigma: p("12"), slots: vec![Slot::Own(Some(sum)), Slot::Own(None)] },
            Rule { sigma: p("21"), slots: vec![Slot::Own(Some(skew)), Slot::Own(None)] },
        ];
        for sigma in simples.long() {
            let slots = vec![Slot::Own(None); sigma.len()];
            rules.push(Rule { sigma, slots });
        }
        let rules: Vec<Rule> = rules.into_iter().filter(|r| rule_allowed(simples, &r.sigma)).collect();
        let built = Builder::new(&universe, &rules, &[], max_tuples).run()?;
        Ok(AlgebraicSystem {
            mode: Mode::Plain,
            universe,
            unknowns: built.unknowns,
            equations: built.equations,
            params: Vec::new(),
            base: None,
        })
    }

    /// The system for `{h_R}`, involutions of the wreath closure of `simples`.
    /// Simples whose inverse is absent are discarded first.
    pub fn build_involution(simples: &SimpleSet, universe: Arc<PropertyUniverse>) -> Result<Self, SystemError> {
        Self::build_involution_capped(simples, universe, DEFAULT_MAX_TUPLES)
    }

    pub fn build_involution_capped(
        simples: &SimpleSet,
        universe: Arc<PropertyUniverse>,
        max_tuples: usize,
    ) -> Result<Self, SystemError> {
        if !universe.is_inverse_closed() {
            return Err(PropertyError::NotInverseClosed.into());
        }
        let simples = simples.inverse_closed_part();
        let base = Arc::new(Self::build_capped(&simples, universe.clone(), max_tuples)?);
        let (sum, skew) = sum_skew(&universe)?;
        let mut rules = vec![
            Rule { sigma: p("12"), slots: vec![Slot::Own(Some(sum)), Slot::Own(None)] },
            Rule { sigma: p("21"), slots: vec![Slot::Pair(Some(skew)), Slot::InverseOf(0)] },
            Rule { sigma: p("321"), slots: vec![Slot::Pair(Some(skew)), Slot::Own(None), Slot::InverseOf(0)] },
        ];
        for sigma in simples.long().into_iter().filter(Permutation::is_involution) {
            let slots = (0..sigma.len())
                .map(|j| {
                    let image = sigma.get(j) - 1;
                    match image.cmp(&j) {
                        std::cmp::Ordering::Equal => Slot::Own(None),
                        std::cmp::Ordering::Greater => Slot::Pair(None),
                        std::cmp::Ordering::Less => Slot::InverseOf(image),
                    }
                })
                .collect();
            rules.push(Rule { sigma, slots });
        }
        let rules: Vec<Rule> = rules.into_iter().filter(|r| rule_allowed(&simples, &r.sigma)).collect();
        let built = Builder::new(&universe, &rules, &base.unknowns, max_tuples).run()?;
        Ok(AlgebraicSystem {
            mode: Mode::Involution,
            universe,
            unknowns: built.unknowns,
            equations: built.equations,
            params: built.params,
            base: Some(base),
        })
    }

    pub fn len(&self) -> usize {
        self.unknowns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unknowns.is_empty()
    }

    pub fn index_of(&self, profile: Profile) -> Option<usize> {
        self.unknowns.binary_search(&profile).ok()
    }

    /// Unknowns whose profile contains every property of `query`.
    pub fn query_indices(&self, query: &[Property]) -> Result<Vec<usize>, PropertyError> {
        let bits = query
            .iter()
            .map(|q| self.universe.index_of(q).ok_or_else(|| PropertyError::NotInUniverse(q.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((0..self.unknowns.len()).filter(|&i| bits.iter().all(|&b| self.unknowns[i].contains(b))).collect())
    }

    /// The subsystem for the unknowns containing `query` and everything their
    /// equations reach. Its solution agrees with the full one on those.
    pub fn restrict_to(&self, query: &[Property]) -> Result<AlgebraicSystem, PropertyError> {
        let mut keep = vec![false; self.len()];
        let mut stack = self.query_indices(query)?;
        while let Some(i) = stack.pop() {
            if std::mem::replace(&mut keep[i], true) {
                continue;
            }
            for m in &self.equations[i] {
                stack.extend(m.factors.iter().filter_map(|f| match *f {
                    Symbol::Unknown(j) if !keep[j] => Some(j),
                    _ => None,
                }));
            }
        }
        let renumber: Vec<Option<usize>> = keep
            .iter()
            .scan(0, |next, &k| {
                Some(k.then(|| {
                    *next += 1;
                    *next - 1
                }))
            })
            .collect();
        let used_params: BTreeSet<usize> = (0..self.len())
            .filter(|&i| keep[i])
            .flat_map(|i| self.equations[i].iter().flat_map(|m| m.factors.iter()))
            .filter_map(|f| match *f {
                Symbol::Param(j) => Some(j),
                _ => None,
            })
            .collect();
        let param_index: BTreeMap<usize, usize> = used_params.iter().enumerate().map(|(k, &j)| (j, k)).collect();
        let equations = (0..self.len())
            .filter(|&i| keep[i])
            .map(|i| {
                self.equations[i]
                    .iter()
                    .map(|m| {
                        let factors = m
                            .factors
                            .iter()
                            .map(|f| match *f {
                                Symbol::Unknown(j) => Symbol::Unknown(renumber[j].expect("closed under references")),
                                Symbol::Param(j) => Symbol::Param(param_index[&j]),
                            })
                            .collect();
                        Monomial { factors, x_power: m.x_power, coeff: m.coeff }
                    })
                    .collect()
            })
            .collect();
        Ok(AlgebraicSystem {
            mode: self.mode,
            universe: self.universe.clone(),
            unknowns: (0..self.len()).filter(|&i| keep[i]).map(|i| self.unknowns[i]).collect(),
            equations,
            params: used_params.iter().map(|&j| self.params[j]).collect(),
            base: self.base.clone(),
        })
    }

    /// Constant term zero and no term `c·g` without further factors.
    pub fn properness_check(&self) -> Properness {
        let mut diagnostics = Vec::new();
        for (i, eq) in self.equations.iter().enumerate() {
            for m in eq {
                let lower = m.x_power as usize + m.unknown_degree() + 2 * m.param_degree();
                if lower == 0 {
                    diagnostics.push(format!("{}: constant term {}", self.symbol_name(Symbol::Unknown(i)), m.coeff));
                } else if m.x_power == 0 && m.param_degree() == 0 && m.unknown_degree() == 1 {
                    diagnostics.push(format!(
                        "{}: linear term {}",
                        self.symbol_name(Symbol::Unknown(i)),
                        self.monomial_text(m)
                    ));
                }
            }
        }
        Properness { proper: diagnostics.is_empty(), diagnostics }
    }

    pub fn symbol_name(&self, s: Symbol) -> String {
        match (s, self.mode) {
            (Symbol::Unknown(i), Mode::Plain) => format!("g{}", self.universe.describe(self.unknowns[i])),
            (Symbol::Unknown(i), Mode::Involution) => format!("h{}", self.universe.describe(self.unknowns[i])),
            (Symbol::Param(i), _) => format!("p{}", self.universe.describe(self.params[i])),
        }
    }

    pub fn monomial_text(&self, m: &Monomial) -> String {
        let mut parts: Vec<String> = Vec::new();
        if m.coeff != 1 || (m.x_power == 0 && m.factors.is_empty()) {
            parts.push(m.coeff.to_string());
        }
        match m.x_power {
            0 => {}
            1 => parts.push("x".into()),
            k => parts.push(format!("x^{k}")),
        }
        let mut k = 0;
        while k < m.factors.len() {
            let run = m.factors[k..].iter().take_while(|&&f| f == m.factors[k]).count();
            let name = self.symbol_name(m.factors[k]);
            parts.push(if run == 1 { name } else { format!("{name}^{run}") });
            k += run;
        }
        parts.join("*")
    }
}

/// One equation per line, `g{R} = x + g{S}*g{T} + ...`.
impl fmt::Display for AlgebraicSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, eq) in self.equations.iter().enumerate() {
            let rhs: Vec<String> = eq.iter().map(|m| self.monomial_text(m)).collect();
            let rhs = if rhs.is_empty() { "0".to_string() } else { rhs.join(" + ") };
            writeln!(f, "{} = {}", self.symbol_name(Symbol::Unknown(i)), rhs)?;
        }
        Ok(())
    }
}

fn p(s: &str) -> Permutation {
    s.parse().expect("literal permutation")
}

fn sum_skew(universe: &PropertyUniverse) -> Result<(usize, usize), PropertyError> {
    let find = |q: Property| universe.index_of(&q).ok_or_else(|| PropertyError::NotInUniverse(q.to_string()));
    Ok((find(Property::SumIndec)?, find(Property::SkewIndec)?))
}

fn check_simples(simples: &SimpleSet) -> Result<(), SystemError> {
    if !simples.complete {
        return Err(SystemError::IncompleteSimples);
    }
    for s in simples.iter() {
        if !s.is_simple() {
            return Err(SystemError::NotSimple(s.clone()));
        }
    }
    // every simple pattern of a member must itself be a member
    for s in simples.iter() {
        for t in [p("1"), p("12"), p("21")] {
            if s.len() > t.len() && s.contains(&t) && !simples.contains(&t) {
                return Err(SystemError::NotWreathClosed(t));
            }
        }
    }
    Ok(())
}

/// Inflating through `sigma` only stays in the closure when `sigma` is a member.
fn rule_allowed(simples: &SimpleSet, sigma: &Permutation) -> bool {
    if sigma.len() == 3 {
        // 321 = 21[1, 21] only needs 21
        return simples.contains(&p("21"));
    }
    simples.contains(sigma)
}

struct Built {
    unknowns: Vec<Profile>,
    equations: Vec<Vec<Monomial>>,
    params: Vec<Profile>,
}

struct Builder<'a> {
    universe: &'a PropertyUniverse,
    rules: &'a [Rule],
    base: &'a [Profile],
    max_tuples: usize,
    memo: HashMap<(usize, Vec<Profile>), Profile>,
}

impl<'a> Builder<'a> {
    fn new(universe: &'a PropertyUniverse, rules: &'a [Rule], base: &'a [Profile], max_tuples: usize) -> Self {
        Builder { universe, rules, base, max_tuples, memo: HashMap::new() }
    }

    fn run(mut self) -> Result<Built, SystemError> {
        let one = self.universe.profile(&p("1"));
        let mut reached: BTreeSet<Profile> = BTreeSet::from([one]);
        loop {
            let current: Vec<Profile> = reached.iter().copied().collect();
            let mut grew = false;
            for r in 0..self.rules.len() {
                for (_, target) in self.tuples(r, &current)? {
                    grew |= reached.insert(target);
                }
            }
            if !grew {
                break;
            }
        }
        let unknowns: Vec<Profile> = reached.into_iter().collect();
        let position = |q: Profile| unknowns.binary_search(&q).expect("reached profile");
        let mut params: BTreeSet<Profile> = BTreeSet::new();
        let mut raw: Vec<Vec<(Vec<(bool, Profile)>, u32)>> = vec![Vec::new(); unknowns.len()];
        raw[position(one)].push((Vec::new(), 1));
        for r in 0..self.rules.len() {
            let slots = self.rules[r].slots.clone();
            for (tuple, target) in self.tuples(r, &unknowns)? {
                let mut factors = Vec::new();
                for (slot, prof) in slots.iter().zip(&tuple) {
                    match slot {
                        Slot::Own(_) => factors.push((false, *prof)),
                        Slot::Pair(_) => {
                            params.insert(*prof);
                            factors.push((true, *prof));
                        }
                        Slot::InverseOf(_) => {}
                    }
                }
                raw[position(target)].push((factors, 0));
            }
        }
        let params: Vec<Profile> = params.into_iter().collect();
        let equations = raw
            .into_iter()
            .map(|terms| {
                let mut merged: BTreeMap<(Vec<Symbol>, u32), i64> = BTreeMap::new();
                for (factors, x_power) in terms {
                    let mut syms: Vec<Symbol> = factors
                        .into_iter()
                        .map(|(is_param, q)| {
                            if is_param {
                                Symbol::Param(params.binary_search(&q).expect("collected parameter"))
                            } else {
                                Symbol::Unknown(position(q))
                            }
                        })
                        .collect();
                    syms.sort();
                    *merged.entry((syms, x_power)).or_insert(0) += 1;
                }
                let mut eq: Vec<Monomial> = merged
                    .into_iter()
                    .map(|((factors, x_power), coeff)| Monomial { factors, x_power, coeff })
                    .collect();
                eq.sort();
                eq
            })
            .collect();
        Ok(Built { unknowns, equations, params })
    }

    /// Every admissible child tuple of rule `r` over `own`, with the profile
    /// of the resulting inflation.
    fn tuples(&mut self, r: usize, own: &[Profile]) -> Result<Vec<(Vec<Profile>, Profile)>, SystemError> {
        let rule = &self.rules[r];
        let choices: Vec<Vec<Profile>> = rule
            .slots
            .iter()
            .map(|slot| match *slot {
                Slot::Own(need) => filter(own, need),
                Slot::Pair(need) => filter(self.base, need),
                Slot::InverseOf(_) => vec![Profile(0)],
            })
            .collect();
        let total = choices.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len()));
        match total {
            Some(t) if t <= self.max_tuples => {}
            _ => {
                return Err(SystemError::TooManyTuples {
                    sigma: rule.sigma.clone(),
                    tuples: total.unwrap_or(usize::MAX),
                    cap: self.max_tuples,
                })
            }
        }
        if choices.iter().any(Vec::is_empty) {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut idx = vec![0usize; choices.len()];
        loop {
            let mut tuple: Vec<Profile> = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
            for (k, slot) in rule.slots.iter().enumerate() {
                if let Slot::InverseOf(j) = *slot {
                    tuple[k] = self.universe.invert_profile(tuple[j])?;
                }
            }
            let key = (r, tuple);
            let target = match self.memo.get(&key) {
                Some(t) => *t,
                None => {
                    let t = self.universe.transfer(&rule.sigma, &key.1)?;
                    self.memo.insert(key.clone(), t);
                    t
                }
            };
            out.push((key.1, target));
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return Ok(out);
                }
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
}

fn filter(profiles: &[Profile], need: Option<usize>) -> Vec<Profile> {
    profiles.iter().copied().filter(|q| need.is_none_or(|b| q.contains(b))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(list: &[&str]) -> Vec<Permutation> {
        list.iter().map(|s| p(s)).collect()
    }

    fn universe(props: &[&str], inverse_closed: bool) -> Arc<PropertyUniverse> {
        let props: Vec<Property> = props.iter().map(|s| s.parse().unwrap()).collect();
        Arc::new(PropertyUniverse::close(&props, inverse_closed).unwrap())
    }

    #[test]
    fn separable_system() {
        let sys = AlgebraicSystem::build(&SimpleSet::from_list(&ps(&["1", "12", "21"])), universe(&[], false)).unwrap();
        let text = sys.to_string();
        assert_eq!(sys.len(), 3);
        assert!(text.contains("g{skew_indec,sum_indec} = x\n"), "{text}");
        assert!(sys.properness_check().proper);
        // g{sum_indec} = (g{⊕,⊖} + g{⊖})·f: six products, two of which merge
        let sum_only = sys.index_of(Profile(0b01)).unwrap();
        assert_eq!(sys.equations[sum_only].len(), 5);
        assert_eq!(sys.equations[sum_only].iter().map(|m| m.coeff).sum::<i64>(), 6);
    }

    #[test]
    fn quartic_term_for_2413() {
        let set = SimpleSet::from_list(&ps(&["1", "12", "21", "2413"]));
        let sys = AlgebraicSystem::build(&set, universe(&[], false)).unwrap();
        let both = sys.index_of(Profile(0b11)).unwrap();
        // x plus the 15 monomials of (g1 + g2 + g3)^4
        assert_eq!(sys.equations[both].len(), 16);
        let total: i64 = sys.equations[both].iter().map(|m| m.coeff).sum();
        assert_eq!(total, 1 + 81);
    }

    #[test]
    fn involution_system_shape() {
        let set = SimpleSet::from_list(&ps(&["1", "12", "21"]));
        let sys = AlgebraicSystem::build_involution(&set, universe(&[], true)).unwrap();
        assert_eq!(sys.mode, Mode::Involution);
        assert_eq!(sys.len(), 3);
        assert!(sys.properness_check().proper);
        let text = sys.to_string();
        assert!(text.contains("h{skew_indec,sum_indec} = x\n"), "{text}");
        assert!(text.contains("p{skew_indec} + p{skew_indec,sum_indec}"), "{text}");
        assert!(AlgebraicSystem::build_involution(&set, universe(&[], false)).is_err());
    }

    #[test]
    fn improper_system_is_flagged() {
        let u = universe(&[], false);
        let sys = AlgebraicSystem::from_equations(
            u,
            vec![Profile(0b11)],
            vec![vec![Monomial::x(), Monomial::product(vec![Symbol::Unknown(0)])]],
        );
        let check = sys.properness_check();
        assert!(!check.proper);
        assert_eq!(check.diagnostics.len(), 1);
    }

    #[test]
    fn incomplete_simples_rejected() {
        let mut set = SimpleSet::from_list(&ps(&["1", "12", "21"]));
        set.complete = false;
        assert!(matches!(AlgebraicSystem::build(&set, universe(&[], false)), Err(SystemError::IncompleteSimples)));
    }
}
