//! Elimination of a system down to one polynomial equation `Φ(x, f) = 0`.
//!
//! The unknowns are removed by successive resultants. The resulting `Φ` may
//! carry spurious factors; the annihilator reported is the smallest
//! polynomial vanishing on the solved series that divides `Φ` exactly, found
//! by a kernel search over the series coefficients.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::MultiPoly;
use crate::property::{Property, PropertyError};
use crate::scalar::{from_i64, ExactRing};
use crate::series::TruncatedSeries;
use crate::solver::{solve_auto, SolveError};
use crate::system::{AlgebraicSystem, Mode, Monomial, Symbol};

/// Extra coefficients required beyond `deg_f Φ` before certifying.
pub const DEFAULT_SAFETY_MARGIN: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElimError {
    #[error("order {order} too small to certify a polynomial of degree {degree} in f (margin {margin})")]
    OrderTooSmall { order: usize, degree: usize, margin: usize },
    #[error("elimination exceeded the {what} cap ({value} > {cap})")]
    Cap { what: &'static str, value: usize, cap: usize },
    #[error("every elimination order produced a zero resultant")]
    Degenerate,
    #[error("no eliminated polynomial annihilates the series")]
    NoAnnihilator,
    #[error("polynomial parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("the zero polynomial is not an annihilator")]
    ZeroPolynomial,
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Property(#[from] PropertyError),
}

/// A nonzero polynomial in `x` (variable 0) and `f` (variable 1), primitive,
/// with positive leading coefficient in the lex order with `f` first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AnnihilatorPoly<T> {
    poly: MultiPoly<T>,
}

impl<T: ExactRing> AnnihilatorPoly<T> {
    pub fn new(poly: MultiPoly<T>) -> Result<Self, ElimError> {
        if poly.is_zero() {
            return Err(ElimError::ZeroPolynomial);
        }
        assert_eq!(poly.nvars(), 2, "annihilators are bivariate");
        let mut p = poly.primitive();
        let lead = p.terms().max_by_key(|(e, _)| (e[1], e[0])).map(|(_, c)| c.is_negative());
        if lead == Some(true) {
            p = p.neg();
        }
        Ok(AnnihilatorPoly { poly: p })
    }

    pub fn poly(&self) -> &MultiPoly<T> {
        &self.poly
    }

    pub fn degree_f(&self) -> usize {
        self.poly.degree_in(1) as usize
    }

    pub fn degree_x(&self) -> usize {
        self.poly.degree_in(0) as usize
    }

    pub fn total_degree(&self) -> usize {
        self.poly.total_degree() as usize
    }

    /// `Φ(x, f(x))` through `order`.
    pub fn evaluate(&self, f: &TruncatedSeries<T>, order: usize) -> TruncatedSeries<T> {
        let x = TruncatedSeries::x(order);
        self.poly.eval_series(&[x, f.truncate(order)], order)
    }

    /// Coefficient of `f^k` as a list of `x` coefficients.
    fn f_coeff(&self, k: u32) -> Vec<T> {
        let dx = self.degree_x();
        (0..=dx as u32).map(|j| self.poly.coeff(&[j, k])).collect()
    }
}

/// Whether `Φ(x, f) ≡ 0 mod x^{order+1}`. Refuses orders below
/// `deg_f Φ + margin`.
pub fn verify_annihilator<T: ExactRing>(
    phi: &AnnihilatorPoly<T>,
    f: &TruncatedSeries<T>,
    order: usize,
    margin: usize,
) -> Result<bool, ElimError> {
    let degree = phi.degree_f();
    if order < degree + margin || f.order() < order {
        return Err(ElimError::OrderTooSmall { order: order.min(f.order()), degree, margin });
    }
    Ok(phi.evaluate(f, order).is_zero())
}

fn x_poly_text<T: ExactRing>(coeffs: &[T]) -> (bool, String) {
    // returns (negated, text) so a leading minus can become a binary minus
    let nonzero: Vec<(usize, &T)> = coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).rev().collect();
    let negate = nonzero.first().is_some_and(|(_, c)| c.is_negative());
    let mut out = String::new();
    for (n, (j, c)) in nonzero.iter().enumerate() {
        let c = if negate { -(*c).clone() } else { (*c).clone() };
        let neg = c.is_negative();
        let mag = if neg { -c } else { c };
        if n > 0 {
            out.push_str(if neg { " - " } else { " + " });
        } else if neg {
            out.push('-');
        }
        let xpart = match j {
            0 => String::new(),
            1 => "x".to_string(),
            k => format!("x^{k}"),
        };
        if xpart.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&xpart);
        } else {
            out.push_str(&format!("{mag}*{xpart}"));
        }
    }
    (negate, out)
}

/// Descending powers of `f`, e.g. `f^2 + (x - 1)*f + x`.
impl<T: ExactRing> fmt::Display for AnnihilatorPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for k in (0..=self.degree_f() as u32).rev() {
            let coeffs = self.f_coeff(k);
            let terms = coeffs.iter().filter(|c| !c.is_zero()).count();
            if terms == 0 {
                continue;
            }
            let (negate, text) = x_poly_text(&coeffs);
            let fpart = match k {
                0 => String::new(),
                1 => "f".to_string(),
                k => format!("f^{k}"),
            };
            let body = if fpart.is_empty() {
                if terms > 1 && !first {
                    format!("({text})")
                } else {
                    text
                }
            } else if text == "1" {
                fpart
            } else if terms > 1 {
                format!("({text})*{fpart}")
            } else {
                format!("{text}*{fpart}")
            };
            match (first, negate) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl<T: ExactRing> fmt::Debug for AnnihilatorPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Accepts `+ - * ^`, parentheses, juxtaposition as multiplication, and an
/// optional `= rhs`.
impl<T: ExactRing> FromStr for AnnihilatorPoly<T> {
    type Err = ElimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parser = Parser { src: s.as_bytes(), pos: 0 };
        let lhs: MultiPoly<T> = parser.expr()?;
        parser.skip_ws();
        let poly = if parser.peek() == Some(b'=') {
            parser.pos += 1;
            let rhs = parser.expr()?;
            lhs.sub(&rhs)
        } else {
            lhs
        };
        parser.skip_ws();
        if parser.pos != parser.src.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        AnnihilatorPoly::new(poly)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ElimError {
        ElimError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr<T: ExactRing>(&mut self) -> Result<MultiPoly<T>, ElimError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term<T: ExactRing>(&mut self) -> Result<MultiPoly<T>, ElimError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(b'(') | Some(b'x') | Some(b'f') => acc = acc.mul(&self.unary()?),
                _ => return Ok(acc),
            }
        }
    }

    fn unary<T: ExactRing>(&mut self) -> Result<MultiPoly<T>, ElimError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.number()?;
            let k: u32 = k.parse().map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<String, ElimError> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn atom<T: ExactRing>(&mut self) -> Result<MultiPoly<T>, ElimError> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(MultiPoly::var(2, 0))
            }
            Some(b'f') => {
                self.pos += 1;
                Ok(MultiPoly::var(2, 1))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.number()?;
                let c = T::from_str_radix(&digits, 10).map_err(|_| self.error("bad integer"))?;
                Ok(MultiPoly::constant(2, c))
            }
            _ => Err(self.error("expected x, f, a number or `(`")),
        }
    }
}

/// Limits on intermediate polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElimOptions {
    pub max_terms: usize,
    pub max_degree: usize,
    /// Alternative pivot choices tried after a zero resultant.
    pub max_retries: usize,
    /// Largest coefficient grid `(deg_f + 1)(deg_x + 1)` for the factor search.
    pub max_search_cells: usize,
}

impl Default for ElimOptions {
    fn default() -> Self {
        ElimOptions { max_terms: 200_000, max_degree: 400, max_retries: 8, max_search_cells: 600 }
    }
}

/// Outcome of [`eliminate`].
#[derive(Clone)]
pub struct Elimination<T> {
    /// Smallest annihilator found.
    pub annihilator: AnnihilatorPoly<T>,
    /// The polynomial left by the resultant chain.
    pub eliminated: AnnihilatorPoly<T>,
    /// Whether the cofactor `eliminated / annihilator` is nonzero on the
    /// series, which proves that `annihilator` vanishes exactly.
    pub certified: bool,
    /// Order through which the generating function was checked.
    pub order: usize,
}

impl<T: ExactRing> fmt::Debug for Elimination<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Elimination")
            .field("annihilator", &self.annihilator)
            .field("eliminated", &self.eliminated)
            .field("certified", &self.certified)
            .field("order", &self.order)
            .finish()
    }
}

/// Variables: `x`, `F`, the unknowns, then (involution mode) the base unknowns
/// standing for the parameters.
struct Layout {
    n: usize,
    base: usize,
}

impl Layout {
    fn nvars(&self) -> usize {
        2 + self.n + self.base
    }
}

fn monomial_poly<T: ExactRing>(
    m: &Monomial,
    layout: &Layout,
    param_var: &dyn Fn(usize) -> usize,
    x_scale: u32,
) -> MultiPoly<T> {
    let mut e = vec![0u32; layout.nvars()];
    e[0] = m.x_power * x_scale;
    for f in &m.factors {
        match *f {
            Symbol::Unknown(i) => e[2 + i] += 1,
            Symbol::Param(i) => e[param_var(i)] += 1,
        }
    }
    MultiPoly::monomial(layout.nvars(), from_i64(m.coeff), e)
}

/// The polynomial ideal generators `g_i - RHS_i` and `F - Σ_{i ∈ Q} g_i`.
fn generators<T: ExactRing>(sys: &AlgebraicSystem, query: &[usize]) -> (Vec<MultiPoly<T>>, Layout) {
    let base = sys.base.as_deref().filter(|_| sys.mode == Mode::Involution);
    let layout = Layout { n: sys.len(), base: base.map_or(0, AlgebraicSystem::len) };
    let nv = layout.nvars();
    let mut out = Vec::new();
    let param_var = |i: usize| {
        let b = base.expect("parameters need a base system");
        2 + layout.n + b.index_of(sys.params[i]).expect("parameter among base unknowns")
    };
    for (i, eq) in sys.equations.iter().enumerate() {
        let mut p = MultiPoly::var(nv, 2 + i);
        for m in eq {
            p = p.sub(&monomial_poly(m, &layout, &param_var, 1));
        }
        out.push(p);
    }
    if let Some(b) = base {
        // p_S = g_S(x²): the base equations with x replaced by x²
        let base_var = |i: usize| 2 + layout.n + i;
        for (i, eq) in b.equations.iter().enumerate() {
            let mut p = MultiPoly::var(nv, base_var(i));
            for m in eq {
                let mut e = vec![0u32; nv];
                e[0] = 2 * m.x_power;
                for f in &m.factors {
                    if let Symbol::Unknown(j) = *f {
                        e[base_var(j)] += 1;
                    }
                }
                p = p.sub(&MultiPoly::monomial(nv, from_i64(m.coeff), e));
            }
            out.push(p);
        }
    }
    let mut target = MultiPoly::var(nv, 1);
    for &i in query {
        target = target.sub(&MultiPoly::var(nv, 2 + i));
    }
    out.push(target);
    (out, layout)
}

/// Keep the generators reachable from the `F` equation through shared
/// variables.
fn relevant<T: ExactRing>(polys: Vec<MultiPoly<T>>, nv: usize) -> Vec<MultiPoly<T>> {
    let mut keep = vec![false; polys.len()];
    let mut vars: BTreeSet<usize> = BTreeSet::from([1]);
    loop {
        let mut grew = false;
        for (k, p) in polys.iter().enumerate() {
            if !keep[k] && vars.iter().any(|&v| p.contains_var(v)) {
                keep[k] = true;
                grew = true;
                vars.extend((2..nv).filter(|&v| p.contains_var(v)));
            }
        }
        if !grew {
            break;
        }
    }
    polys.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p).collect()
}

/// Eliminate every unknown from the system extended by `F = Σ_{R ⊇ Q} g_R`
/// and return the annihilator of the aggregated series.
pub fn eliminate<T: ExactRing>(
    sys: &AlgebraicSystem,
    query: &[Property],
    opts: &ElimOptions,
) -> Result<Elimination<T>, ElimError> {
    let sys = &sys.restrict_to(query)?;
    let qidx = sys.query_indices(query)?;
    let (gens, layout) = generators::<T>(sys, &qidx);
    let nv = layout.nvars();
    let mut values = ValueCache::<T>::new(sys, &qidx, &layout, 2 * nv + DEFAULT_SAFETY_MARGIN)?;

    let mut polys = Vec::new();
    for g in relevant(gens, nv) {
        polys.push(reduce_bivariate(g, &mut values, opts)?);
    }
    let mut remaining: BTreeSet<usize> = (2..nv).collect();
    let mut banned: BTreeSet<usize> = BTreeSet::new();
    let mut retries = 0;
    while let Some((v, pivot)) = choose_pivot(&polys, &remaining, &banned) {
        let holders: Vec<usize> = (0..polys.len()).filter(|&k| polys[k].contains_var(v)).collect();
        let lead = polys[pivot].coeffs_in(v).pop().expect("pivot has a leading coefficient");
        let divide_lead = !lead.is_constant() && !values.vanishes(&lead);
        let mut next: Vec<MultiPoly<T>> =
            (0..polys.len()).filter(|k| !holders.contains(k)).map(|k| polys[k].clone()).collect();
        let mut degenerate = false;
        for &k in holders.iter().filter(|&&k| k != pivot) {
            let r = polys[pivot].resultant(&polys[k], v);
            if r.is_zero() {
                degenerate = true;
                break;
            }
            let mut r = r.without_monomial_factor().primitive();
            if divide_lead {
                while let Some(q) = r.div_exact(&lead) {
                    r = q;
                }
            }
            if r.term_count() > opts.max_terms {
                return Err(ElimError::Cap { what: "term", value: r.term_count(), cap: opts.max_terms });
            }
            if r.total_degree() as usize > opts.max_degree {
                return Err(ElimError::Cap { what: "degree", value: r.total_degree() as usize, cap: opts.max_degree });
            }
            let r = reduce_bivariate(r, &mut values, opts)?;
            log::debug!("eliminated v{v}: {} terms, degree {}", r.term_count(), r.total_degree());
            next.push(r);
        }
        if degenerate {
            // a shared factor; try another variable first
            retries += 1;
            if retries > opts.max_retries {
                return Err(ElimError::Degenerate);
            }
            banned.insert(v);
            continue;
        }
        banned.clear();
        remaining.remove(&v);
        polys = next;
    }
    if polys.iter().any(|p| (2..nv).any(|v| p.contains_var(v))) {
        return Err(ElimError::Degenerate);
    }

    let phi = polys
        .into_iter()
        .filter(|p| p.contains_var(1) && values.vanishes(p))
        .min_by_key(MultiPoly::term_count)
        .ok_or(ElimError::NoAnnihilator)?;
    let (small, certified) = match minimal_divisor(&phi, 1, &mut values, opts)? {
        Some((m, certified)) => (m, certified),
        None => (phi.clone(), true),
    };
    let to_xf: Vec<usize> = (0..nv).map(|v| v.min(1)).collect();
    let eliminated = AnnihilatorPoly::new(phi.remap(2, &to_xf))?;
    let annihilator = AnnihilatorPoly::new(small.remap(2, &to_xf))?;
    let order = values.order.max(2 * annihilator.total_degree() + DEFAULT_SAFETY_MARGIN);
    values.ensure(order)?;
    if !verify_annihilator(&annihilator, &values.values[1], order, DEFAULT_SAFETY_MARGIN)? {
        return Err(ElimError::NoAnnihilator);
    }
    Ok(Elimination { annihilator, eliminated, certified, order })
}

/// Where the variable series come from.
struct Source<'a> {
    sys: &'a AlgebraicSystem,
    query: &'a [usize],
    base: bool,
}

impl Source<'_> {
    fn compute<T: ExactRing>(&self, order: usize) -> Result<Vec<TruncatedSeries<T>>, ElimError> {
        let sol = solve_auto::<T>(self.sys, order)?;
        let mut values = vec![TruncatedSeries::x(order), TruncatedSeries::zero(order)];
        for q in &self.sys.unknowns {
            values.push(sol.series[q].clone());
        }
        for &i in self.query {
            values[1] = &values[1] + &values[2 + i];
        }
        if self.base {
            let base = self.sys.base.as_deref().expect("involution base");
            let g = solve_auto::<T>(base, order / 2 + 1)?;
            for q in &base.unknowns {
                values.push(g.series[q].substitute_x_squared().truncate(order));
            }
        }
        Ok(values)
    }
}

/// Series of `x`, `F`, every unknown and every base unknown, re-solved on
/// demand to higher orders.
struct ValueCache<'a, T> {
    source: Source<'a>,
    values: Vec<TruncatedSeries<T>>,
    order: usize,
}

impl<'a, T: ExactRing> ValueCache<'a, T> {
    fn new(sys: &'a AlgebraicSystem, query: &'a [usize], layout: &Layout, order: usize) -> Result<Self, ElimError> {
        let source = Source { sys, query, base: layout.base > 0 };
        let mut cache = ValueCache { source, values: Vec::new(), order: 0 };
        cache.ensure(order)?;
        Ok(cache)
    }

    fn ensure(&mut self, order: usize) -> Result<(), ElimError> {
        if order > self.order {
            self.values = self.source.compute(order)?;
            self.order = order;
        }
        Ok(())
    }

    fn vanishes(&self, p: &MultiPoly<T>) -> bool {
        p.eval_series(&self.values, self.order).is_zero()
    }
}

/// The variable other than `x` when `p` involves exactly one.
fn sole_variable<T: ExactRing>(p: &MultiPoly<T>) -> Option<usize> {
    let mut vars = (1..p.nvars()).filter(|&v| p.contains_var(v));
    let w = vars.next()?;
    vars.next().is_none().then_some(w)
}

/// Replace a polynomial in `x` and one unknown by its certified minimal
/// factor, which keeps resultants from vanishing on shared factors.
fn reduce_bivariate<T: ExactRing>(
    p: MultiPoly<T>,
    values: &mut ValueCache<'_, T>,
    opts: &ElimOptions,
) -> Result<MultiPoly<T>, ElimError> {
    match sole_variable(&p) {
        Some(w) if w >= 2 && p.degree_in(w) >= 2 => match minimal_divisor(&p, w, values, opts)? {
            Some((m, true)) => Ok(m),
            _ => Ok(p),
        },
        _ => Ok(p),
    }
}

/// Smallest divisor of `p` (a polynomial in `x` and `w`) vanishing on the
/// series of `w`, and whether the complementary factor is nonzero there.
fn minimal_divisor<T: ExactRing>(
    p: &MultiPoly<T>,
    w: usize,
    values: &mut ValueCache<'_, T>,
    opts: &ElimOptions,
) -> Result<Option<(MultiPoly<T>, bool)>, ElimError> {
    let nv = p.nvars();
    let (dy_max, dx_max) = (p.degree_in(w) as usize, p.degree_in(0) as usize);
    let mut to_xy = vec![1; nv];
    to_xy[0] = 0;
    let p2 = p.remap(2, &to_xy);
    for df in 1..=dy_max {
        let cells = (df + 1) * (dx_max + 1);
        if cells > opts.max_search_cells {
            break;
        }
        let order = cells + DEFAULT_SAFETY_MARGIN;
        values.ensure(order)?;
        let y = values.values[w].truncate(order);
        let mut powers = vec![TruncatedSeries::constant(T::one(), order)];
        for _ in 0..df {
            powers.push(&powers[powers.len() - 1] * &y);
        }
        if kernel_vector(&powers, df, dx_max, order).is_none() {
            continue;
        }
        for dx in 0..=dx_max {
            let Some(cand) = kernel_vector(&powers, df, dx, order) else {
                continue;
            };
            let Some(cofactor) = p2.div_exact(cand.poly()) else {
                continue;
            };
            let xy = [TruncatedSeries::x(order), y.clone()];
            let certified = !cofactor.eval_series(&xy, order).is_zero();
            return Ok(Some((cand.poly().remap(nv, &[0, w]), certified)));
        }
    }
    Ok(None)
}

/// The (variable, pivot) pair with the smallest pivot degree, then fewest
/// other polynomials to combine, then smallest pivot.
fn choose_pivot<T: ExactRing>(
    polys: &[MultiPoly<T>],
    remaining: &BTreeSet<usize>,
    banned: &BTreeSet<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<((u32, usize, usize), (usize, usize))> = None;
    for &v in remaining.iter().filter(|v| !banned.contains(v)) {
        let holders: Vec<usize> = (0..polys.len()).filter(|&k| polys[k].contains_var(v)).collect();
        for &k in &holders {
            let key = (polys[k].degree_in(v), holders.len(), polys[k].term_count());
            if best.as_ref().is_none_or(|(b, _)| key < *b) {
                best = Some((key, (v, k)));
            }
        }
    }
    best.map(|(_, choice)| choice)
}

/// A nonzero `P` with `deg_f P ≤ df`, `deg_x P ≤ dx` and `P(x, f) ≡ 0`
/// through `order`, when one exists.
fn kernel_vector<T: ExactRing>(
    powers: &[TruncatedSeries<T>],
    df: usize,
    dx: usize,
    order: usize,
) -> Option<AnnihilatorPoly<T>> {
    let cols: Vec<(usize, usize)> = (0..=df).flat_map(|i| (0..=dx).map(move |j| (i, j))).collect();
    let rows = (order + 1).min(cols.len() + DEFAULT_SAFETY_MARGIN);
    let mut m: Vec<Vec<Ratio<T>>> = (0..rows)
        .map(|k| {
            cols.iter()
                .map(|&(i, j)| if k >= j { Ratio::from_integer(powers[i].coeff(k - j)) } else { Ratio::zero() })
                .collect()
        })
        .collect();
    let ncols = cols.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Ratio::one() / m[r][c].clone();
        for j in c..ncols {
            m[r][j] = m[r][j].clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in c..ncols {
                    let t = m[r][j].clone() * factor.clone();
                    m[i][j] = m[i][j].clone() - t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free = (0..ncols).find(|c| !pivots.contains(c))?;
    // kernel vector with the first free column set to one
    let mut sol: Vec<Ratio<T>> = vec![Ratio::zero(); ncols];
    sol[free] = Ratio::one();
    for (row, &pc) in pivots.iter().enumerate() {
        sol[pc] = -m[row][free].clone();
    }
    let lcm = sol.iter().fold(T::one(), |acc, q| acc.lcm(q.denom()));
    let mut poly = MultiPoly::zero(2);
    for (&(i, j), q) in cols.iter().zip(&sol) {
        let c = q.numer().clone() * (lcm.clone() / q.denom().clone());
        poly = poly.add(&MultiPoly::monomial(2, c, vec![j as u32, i as u32]));
    }
    AnnihilatorPoly::new(poly).ok()
}
