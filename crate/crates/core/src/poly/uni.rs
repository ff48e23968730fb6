use std::fmt;
use std::ops;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{MultiPoly, C64, DROP_REL};

/// Dense univariate polynomial, coefficients in ascending order.
///
/// The leading coefficient is non-zero unless the polynomial is zero, in
/// which case `coeffs` is empty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniPoly {
    coeffs: Vec<C64>,
}

impl UniPoly {
    /// Trailing exact zeros are removed.
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == C64::zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    /// Monic polynomial `prod (x - r)`.
    pub fn from_roots(roots: &[C64]) -> Self {
        let mut coeffs = vec![C64::one()];
        for r in roots {
            let mut next = vec![C64::zero(); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    pub fn from_real_roots(roots: &[f64]) -> Self {
        let rs: Vec<C64> = roots.iter().map(|&r| C64::new(r, 0.0)).collect();
        Self::from_roots(&rs)
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C64::one())
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![C64::zero(), C64::one()])
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<C64> {
        self.coeffs.last().copied()
    }

    pub fn eval(&self, x: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::zero(), |acc, c| acc * x + c)
    }

    /// `sum |a_k| |x|^k`.
    pub fn eval_scale(&self, x: C64) -> f64 {
        let r = x.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn scale_real(&self, a: f64) -> Self {
        self.scale(C64::new(a, 0.0))
    }

    pub fn coefficient_scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn is_real(&self, tol: f64) -> bool {
        let s = self.coefficient_scale();
        self.coeffs.iter().all(|c| c.im.abs() <= tol * s)
    }

    pub fn to_multi(&self, nvars: usize, j: usize) -> crate::Result<MultiPoly> {
        MultiPoly::from_univariate(self, nvars, j)
    }

    /// Drops trailing coefficients with modulus at most `threshold`.
    pub(crate) fn trim_relative(&mut self, threshold: f64) {
        while self
            .coeffs
            .last()
            .is_some_and(|c| c.norm() <= threshold || *c == C64::zero())
        {
            self.coeffs.pop();
        }
    }

    pub(crate) fn add_exact(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![C64::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k] += c;
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            out[k] += c;
        }
        Self::new(out)
    }

    fn add_dropping(&self, other: &Self) -> Self {
        let mut out = self.add_exact(other);
        let s = self.coefficient_scale().max(other.coefficient_scale());
        out.trim_relative(DROP_REL * s);
        out
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![C64::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `f(g(x))`.
    pub fn compose(&self, g: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc.mul_impl(g).add_exact(&Self::constant(*c)))
    }
}

impl ops::Add<&UniPoly> for &UniPoly {
    type Output = UniPoly;

    fn add(self, rhs: &UniPoly) -> UniPoly {
        self.add_dropping(rhs)
    }
}

impl ops::Sub<&UniPoly> for &UniPoly {
    type Output = UniPoly;

    fn sub(self, rhs: &UniPoly) -> UniPoly {
        self.add_dropping(&rhs.scale(-C64::one()))
    }
}

impl ops::Mul<&UniPoly> for &UniPoly {
    type Output = UniPoly;

    fn mul(self, rhs: &UniPoly) -> UniPoly {
        self.mul_impl(rhs)
    }
}

impl ops::Neg for &UniPoly {
    type Output = UniPoly;

    fn neg(self) -> UniPoly {
        self.scale(-C64::one())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match MultiPoly::from_univariate(self, 1, 0) {
            Ok(m) => write!(f, "{m}"),
            Err(_) => f.write_str("0"),
        }
    }
}
