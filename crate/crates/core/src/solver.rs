//! Fixed-point iteration for proper systems.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::property::{Profile, Property, PropertyError, PropertyUniverse};
use crate::scalar::{from_i64, Coefficient};
use crate::series::TruncatedSeries;
use crate::system::{AlgebraicSystem, Mode, Monomial, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("system is not proper: {0}")]
    Improper(String),
    #[error("no series supplied for parameter {0}")]
    MissingParameter(String),
    #[error("parameter {name} known only to order {have}, need {need}")]
    ShortParameter { name: String, have: usize, need: usize },
    #[error("coefficient {index} of {unknown} changed at iteration {iteration}")]
    Unstable { unknown: String, index: usize, iteration: usize },
    #[error("negative coefficient {index} of {unknown}")]
    Negative { unknown: String, index: usize },
    #[error(transparent)]
    Property(#[from] PropertyError),
}

/// Series for each unknown profile.
#[derive(Clone)]
pub struct Solution<T> {
    pub universe: Arc<PropertyUniverse>,
    pub series: BTreeMap<Profile, TruncatedSeries<T>>,
    pub order: usize,
}

impl<T: Coefficient> std::fmt::Debug for Solution<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.series.iter().map(|(q, s)| (self.universe.describe(*q), s))).finish()
    }
}

impl<T: Coefficient> Solution<T> {
    /// `Σ g_R` over unknowns `R` containing every property of `query`.
    pub fn aggregate(&self, query: &[Property]) -> Result<TruncatedSeries<T>, PropertyError> {
        let bits = query
            .iter()
            .map(|q| self.universe.index_of(q).ok_or_else(|| PropertyError::NotInUniverse(q.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let mut total = TruncatedSeries::zero(self.order);
        for (profile, s) in &self.series {
            if bits.iter().all(|&b| profile.contains(b)) {
                total = &total + s;
            }
        }
        Ok(total)
    }

    pub fn get(&self, profile: Profile) -> Option<&TruncatedSeries<T>> {
        self.series.get(&profile)
    }
}

/// The unique solution of a proper system through order `order`, by
/// `order + 1` rounds of `g ← RHS(g)` from zero. `params` maps each parameter
/// profile of an involution system to its series.
pub fn solve<T: Coefficient>(
    sys: &AlgebraicSystem,
    order: usize,
    params: Option<&BTreeMap<Profile, TruncatedSeries<T>>>,
) -> Result<Solution<T>, SolveError> {
    let check = sys.properness_check();
    if !check.proper {
        return Err(SolveError::Improper(check.diagnostics.join("; ")));
    }
    let mut bound: Vec<TruncatedSeries<T>> = Vec::with_capacity(sys.params.len());
    for (i, prof) in sys.params.iter().enumerate() {
        let name = sys.symbol_name(Symbol::Param(i));
        let s = params.and_then(|m| m.get(prof)).ok_or_else(|| SolveError::MissingParameter(name.clone()))?;
        if s.order() < order {
            return Err(SolveError::ShortParameter { name, have: s.order(), need: order });
        }
        bound.push(s.truncate(order));
    }
    let mut current: Vec<TruncatedSeries<T>> = vec![TruncatedSeries::zero(order); sys.len()];
    for iteration in 1..=order + 1 {
        let next: Vec<TruncatedSeries<T>> =
            sys.equations.iter().map(|eq| evaluate(eq, &current, &bound, order)).collect();
        // the previous round was already exact through x^(iteration-1)
        for (i, (old, new)) in current.iter().zip(&next).enumerate() {
            if let Some(index) = (0..iteration.min(order + 1)).find(|&k| old.coeff(k) != new.coeff(k)) {
                return Err(SolveError::Unstable { unknown: sys.symbol_name(Symbol::Unknown(i)), index, iteration });
            }
        }
        current = next;
    }
    let zero = T::zero();
    for (i, s) in current.iter().enumerate() {
        if let Some(index) = s.coeffs().iter().position(|c| *c < zero) {
            return Err(SolveError::Negative { unknown: sys.symbol_name(Symbol::Unknown(i)), index });
        }
    }
    Ok(Solution { universe: sys.universe.clone(), series: sys.unknowns.iter().copied().zip(current).collect(), order })
}

fn evaluate<T: Coefficient>(
    eq: &[Monomial],
    unknowns: &[TruncatedSeries<T>],
    params: &[TruncatedSeries<T>],
    order: usize,
) -> TruncatedSeries<T> {
    let mut total = TruncatedSeries::zero(order);
    for m in eq {
        let mut term = TruncatedSeries::monomial(from_i64(m.coeff), m.x_power as usize, order);
        for f in &m.factors {
            if term.is_zero() {
                break;
            }
            term = match *f {
                Symbol::Unknown(i) => &term * &unknowns[i],
                Symbol::Param(i) => &term * &params[i],
            };
        }
        total = &total + &term;
    }
    total
}

/// The parameter series `p_S = g_S(x²)` of an involution system, from its
/// base system solved to half the order.
pub fn involution_parameters<T: Coefficient>(
    sys: &AlgebraicSystem,
    order: usize,
) -> Result<BTreeMap<Profile, TruncatedSeries<T>>, SolveError> {
    let Some(base) = (sys.mode == Mode::Involution).then_some(()).and(sys.base.as_ref()) else {
        return Ok(BTreeMap::new());
    };
    let g = solve::<T>(base, order / 2 + 1, None)?;
    Ok(g.series.iter().map(|(q, s)| (*q, s.substitute_x_squared().truncate(order))).collect())
}

/// Solve a system of either mode, supplying involution parameters itself.
pub fn solve_auto<T: Coefficient>(sys: &AlgebraicSystem, order: usize) -> Result<Solution<T>, SolveError> {
    match sys.mode {
        Mode::Plain => solve(sys, order, None),
        Mode::Involution => {
            let params = involution_parameters::<T>(sys, order)?;
            solve(sys, order, Some(&params))
        }
    }
}
