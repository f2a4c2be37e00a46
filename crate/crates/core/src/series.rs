//! Power series truncated at a fixed order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::scalar::{from_i64, Coefficient};

/// `Σ_{i ≤ N} c_i x^i`, all arithmetic modulo `x^{N+1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Coefficient> TruncatedSeries<T> {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries { coeffs: vec![T::zero(); order + 1] }
    }

    pub fn constant(value: T, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = value;
        s
    }

    /// `c x^k`, zero when `k > order`.
    pub fn monomial(c: T, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn x(order: usize) -> Self {
        Self::monomial(T::one(), 1, order)
    }

    /// Coefficients `c_0..`; the order is one less than their number.
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant coefficient");
        TruncatedSeries { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| from_i64(c)).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        TruncatedSeries { coeffs: (0..=order).map(|i| self.coeff(i)).collect() }
    }

    pub fn scale(&self, c: &T) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(T::one(), self.order());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// `s(x²)`, of twice the order.
    pub fn substitute_x_squared(&self) -> Self {
        let mut out = Self::zero(2 * self.order());
        for (i, c) in self.coeffs.iter().enumerate() {
            out.coeffs[2 * i] = c.clone();
        }
        out
    }

    /// Agreement of coefficients `0..=k`.
    pub fn agrees_through(&self, other: &Self, k: usize) -> bool {
        (0..=k).all(|i| self.coeff(i) == other.coeff(i))
    }

    pub fn map<U: Coefficient>(&self, f: impl Fn(&T) -> U) -> TruncatedSeries<U> {
        TruncatedSeries { coeffs: self.coeffs.iter().map(f).collect() }
    }
}

impl<T: Coefficient> Add for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;

    fn add(self, rhs: Self) -> TruncatedSeries<T> {
        let n = self.order().min(rhs.order());
        TruncatedSeries { coeffs: (0..=n).map(|i| self.coeffs[i].clone() + rhs.coeffs[i].clone()).collect() }
    }
}

impl<T: Coefficient> Sub for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;

    fn sub(self, rhs: Self) -> TruncatedSeries<T> {
        let n = self.order().min(rhs.order());
        TruncatedSeries { coeffs: (0..=n).map(|i| self.coeffs[i].clone() - rhs.coeffs[i].clone()).collect() }
    }
}

impl<T: Coefficient> Neg for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;

    fn neg(self) -> TruncatedSeries<T> {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

impl<T: Coefficient> Mul for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;

    fn mul(self, rhs: Self) -> TruncatedSeries<T> {
        let n = self.order().min(rhs.order());
        let mut out = vec![T::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        TruncatedSeries { coeffs: out }
    }
}

impl<T: Coefficient> Add for TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<T: Coefficient> Sub for TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<T: Coefficient> Mul for TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

/// Coefficients from `x¹` on, comma separated.
impl<T: Coefficient> fmt::Display for TruncatedSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().skip(1).map(|c| c.to_string()).collect();
        f.write_str(&parts.join(", "))
    }
}

impl<T: Coefficient> fmt::Debug for TruncatedSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; {}]", self.coeff(0), self)
    }
}
