//! Sparse multivariate polynomials over an exact ring.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::{Coefficient, ExactRing};
use crate::series::TruncatedSeries;

/// Exponent vectors map to nonzero coefficients; keys compare
/// lexicographically, so the last entry is the lex-leading term.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly<T> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, T>,
}

impl<T: ExactRing> MultiPoly<T> {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        Self::monomial(nvars, c, vec![0; nvars])
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, T::one())
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        let mut e = vec![0; nvars];
        e[v] = 1;
        Self::monomial(nvars, T::one(), e)
    }

    pub fn monomial(nvars: usize, c: T, exps: Vec<u32>) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        MultiPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &T)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn coeff(&self, exps: &[u32]) -> T {
        self.terms.get(exps).cloned().unwrap_or_else(T::zero)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn contains_var(&self, v: usize) -> bool {
        self.terms.keys().any(|e| e[v] > 0)
    }

    /// Lex-leading term.
    pub fn leading(&self) -> Option<(&Vec<u32>, &T)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, exps: Vec<u32>, c: T) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MultiPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect() }
    }

    pub fn scale(&self, k: &T) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.clone() * k.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Coefficients as polynomials in `v`: `self = Σ c_k v^k`.
    pub fn coeffs_in(&self, v: usize) -> Vec<Self> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![Self::zero(self.nvars); d + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[v] as usize;
            e2[v] = 0;
            out[k].terms.insert(e2, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(nvars: usize, v: usize, coeffs: &[Self]) -> Self {
        let mut out = Self::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            for (e, a) in &c.terms {
                let mut e2 = e.clone();
                e2[v] += k as u32;
                out.add_term(e2, a.clone());
            }
        }
        out
    }

    /// Substitute `value` for variable `v`.
    pub fn substitute(&self, v: usize, value: &Self) -> Self {
        let coeffs = self.coeffs_in(v);
        let mut out = Self::zero(self.nvars);
        for c in coeffs.iter().rev() {
            out = out.mul(value).add(c);
        }
        out
    }

    /// Rename variables: variable `i` becomes `map[i]` in a ring of `nvars`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Self {
        let mut out = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    e2[map[i]] += k;
                }
            }
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Gcd of the coefficients, sign of the leading one.
    pub fn content(&self) -> T {
        let mut g = T::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        match self.leading() {
            Some((_, c)) if c.is_negative() => -g,
            _ => g,
        }
    }

    /// Divided by its content: integer coefficients, gcd 1, leading term
    /// positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let g = self.content();
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.clone() / g.clone())).collect(),
        }
    }

    /// Divided by the largest monomial dividing every term.
    pub fn without_monomial_factor(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut m = vec![u32::MAX; self.nvars];
        for e in self.terms.keys() {
            for (a, &b) in m.iter_mut().zip(e) {
                *a = (*a).min(b);
            }
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(&m).map(|(a, b)| a - b).collect(), c.clone()))
                .collect(),
        }
    }

    /// `self / d` when the division is exact.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (de, dc) = d.leading()?;
        let (de, dc) = (de.clone(), dc.clone());
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((re, rc)) = rem.leading() {
            if re.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let (q, r) = rc.div_rem(&dc);
            if !r.is_zero() {
                return None;
            }
            let e: Vec<u32> = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            let t = Self::monomial(self.nvars, q, e);
            rem = rem.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Resultant with respect to `v`.
    pub fn resultant(&self, other: &Self, v: usize) -> Self {
        let a = self.coeffs_in(v);
        let b = other.coeffs_in(v);
        let (m, n) = (a.len() - 1, b.len() - 1);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars);
        }
        if m == 0 {
            return a[0].pow(n as u32);
        }
        if n == 0 {
            return b[0].pow(m as u32);
        }
        if m == 1 {
            return linear_resultant(&a[1], &a[0], &b);
        }
        if n == 1 {
            let r = linear_resultant(&b[1], &b[0], &a);
            // Res(A, B) = (-1)^{mn} Res(B, A)
            return if m % 2 == 1 { r.neg() } else { r };
        }
        let size = m + n;
        let zero = Self::zero(self.nvars);
        let mut rows: Vec<Vec<Self>> = Vec::with_capacity(size);
        for i in 0..n {
            let mut row = vec![zero.clone(); size];
            for (j, c) in a.iter().rev().enumerate() {
                row[i + j] = c.clone();
            }
            rows.push(row);
        }
        for i in 0..m {
            let mut row = vec![zero.clone(); size];
            for (j, c) in b.iter().rev().enumerate() {
                row[i + j] = c.clone();
            }
            rows.push(row);
        }
        bareiss_det(rows)
    }

    /// Evaluate at series for every variable.
    pub fn eval_series(&self, values: &[TruncatedSeries<T>], order: usize) -> TruncatedSeries<T> {
        assert_eq!(values.len(), self.nvars);
        let mut total = TruncatedSeries::zero(order);
        let mut powers: Vec<Vec<TruncatedSeries<T>>> = vec![Vec::new(); self.nvars];
        for (e, c) in &self.terms {
            let mut term = TruncatedSeries::constant(c.clone(), order);
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let cache = &mut powers[v];
                if cache.is_empty() {
                    cache.push(TruncatedSeries::constant(T::one(), order));
                }
                while cache.len() <= k as usize {
                    let next = &cache[cache.len() - 1] * &values[v].truncate(order);
                    cache.push(next);
                }
                term = &term * &cache[k as usize];
            }
            total = &total + &term;
        }
        total
    }
}

/// `Res_v(a v + b, Σ q_k v^k) = Σ q_k (-b)^k a^{d-k}`.
fn linear_resultant<T: ExactRing>(a: &MultiPoly<T>, b: &MultiPoly<T>, q: &[MultiPoly<T>]) -> MultiPoly<T> {
    let nvars = a.nvars;
    let d = q.len() - 1;
    let minus_b = b.neg();
    let mut b_pows = vec![MultiPoly::one(nvars)];
    let mut a_pows = vec![MultiPoly::one(nvars)];
    for _ in 0..d {
        b_pows.push(b_pows.last().unwrap().mul(&minus_b));
        a_pows.push(a_pows.last().unwrap().mul(a));
    }
    let mut out = MultiPoly::zero(nvars);
    for (k, qk) in q.iter().enumerate() {
        if !qk.is_zero() {
            out = out.add(&qk.mul(&b_pows[k]).mul(&a_pows[d - k]));
        }
    }
    out
}

/// Fraction-free determinant.
fn bareiss_det<T: ExactRing>(mut m: Vec<Vec<MultiPoly<T>>>) -> MultiPoly<T> {
    let n = m.len();
    let nvars = m[0][0].nvars;
    let mut sign = false;
    let mut prev = MultiPoly::one(nvars);
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = !sign;
                }
                None => return MultiPoly::zero(nvars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = MultiPoly::zero(nvars);
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}

impl<T: Coefficient> fmt::Debug for MultiPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(v, &k)| if k == 1 { format!("v{v}") } else { format!("v{v}^{k}") })
                    .collect();
                if vars.is_empty() {
                    c.to_string()
                } else {
                    format!("{c}*{}", vars.join("*"))
                }
            })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;
    use proptest::prelude::*;

    use super::*;

    type P = MultiPoly<BigInt>;

    fn v(i: usize) -> P {
        P::var(3, i)
    }

    fn c(k: i64) -> P {
        P::constant(3, BigInt::from(k))
    }

    #[test]
    fn resultant_of_quadratics() {
        // for monic A = y² + a1 y + a0, Res(A, B) = B(r1) B(r2) over the roots of A
        let (x, y) = (v(0), v(1));
        let a = y.mul(&y).sub(&x);
        let b = y.mul(&y).sub(&y.scale(&BigInt::from(2))).add(&x);
        let (a1, a0) = (c(0), x.neg());
        let (b1, b0) = (c(-2), x.clone());
        let (d1, d0) = (b1.sub(&a1), b0.sub(&a0));
        let expect = d1.pow(2).mul(&a0).sub(&d1.mul(&d0).mul(&a1)).add(&d0.pow(2));
        assert_eq!(a.resultant(&b, 1), expect);
    }

    #[test]
    fn linear_resultant_is_substitution() {
        // Res_y(y - (x + 1), y² + x) = (x + 1)² + x
        let y = v(1);
        let x = v(0);
        let lin = y.sub(&x.add(&c(1)));
        let q = y.mul(&y).add(&x);
        let expect = x.add(&c(1)).pow(2).add(&x);
        let r = lin.resultant(&q, 1);
        assert_eq!(r, expect);
        assert_eq!(q.resultant(&lin, 1), expect);
        assert_eq!(q.substitute(1, &x.add(&c(1))), expect);
    }

    #[test]
    fn exact_division() {
        let x = v(0);
        let y = v(1);
        let a = x.add(&y).add(&c(3));
        let b = x.sub(&y.scale(&BigInt::from(2)));
        assert_eq!(a.mul(&b).div_exact(&b), Some(a.clone()));
        assert_eq!(a.mul(&b).add(&c(1)).div_exact(&b), None);
        assert_eq!(a.scale(&BigInt::from(-6)).primitive(), a);
    }

    fn small_poly() -> impl Strategy<Value = P> {
        prop::collection::vec((-3i64..4, 0u32..3, 0u32..3, 0u32..2), 1..5).prop_map(|ts| {
            let mut p = P::zero(3);
            for (k, a, b, d) in ts {
                p = p.add(&P::monomial(3, BigInt::from(k), vec![a, b, d]));
            }
            p
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn div_exact_inverts_mul(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!(a.mul(&b).div_exact(&b), Some(a));
        }

        // Res(A, B) lies in the ideal: it vanishes wherever A and B share a root in v
        #[test]
        fn resultant_vanishes_on_common_roots(a in small_poly(), b in small_poly(), r in small_poly()) {
            // A = (y - r)·a, B = (y - r)·b share the root y = r
            let y = v(1);
            let r = r.remap(3, &[0, 2, 2]);
            let fa = y.sub(&r).mul(&a);
            let fb = y.sub(&r).mul(&b);
            prop_assert!(fa.resultant(&fb, 1).is_zero());
        }
    }
}
