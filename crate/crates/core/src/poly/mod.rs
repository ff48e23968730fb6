//! Sparse multivariate polynomials over `Complex<f64>`, their dense
//! univariate counterpart, and the syntactic transforms used throughout the
//! crate (substitution, slicing, reversal, parity split, rotation).
//!
//! Variables are indexed `0..nvars` internally. The text format names them
//! `x1..xd`.

mod subst;
mod text;
mod uni;

use std::collections::BTreeMap;
use std::fmt;
use std::ops;

use num::complex::Complex;
use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use subst::{AffineSubstitution, VarRule};
pub use text::{format_text, parse_text, parse_text_with_nvars};
pub use uni::UniPoly;

pub type C64 = Complex<f64>;

/// A point in `C^d`.
pub type ComplexPoint = Vec<C64>;

/// Coefficients smaller than this fraction of the operands' scale are
/// dropped after arithmetic.
pub const DROP_REL: f64 = 1e-14;

pub(crate) const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Sparse polynomial in `nvars` variables.
///
/// Canonical form: no stored coefficient is zero and every exponent vector
/// has length `nvars`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolyJson", into = "PolyJson")]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, C64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rotation {
    /// `x_j -> -i x_j`: a stable input becomes an upper polynomial.
    StableToUpper,
    /// `x_j -> i x_j`: an upper input becomes a stable polynomial.
    UpperToStable,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C64) -> Self {
        let mut p = Self::zero(nvars);
        if c != C64::zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C64::one())
    }

    /// The variable `x_j` (0-based).
    ///
    /// Panics if `j >= nvars`.
    pub fn var(nvars: usize, j: usize) -> Self {
        assert!(j < nvars, "variable index {j} out of range for {nvars} variables");
        let mut e = vec![0; nvars];
        e[j] = 1;
        Self::monomial(e, C64::one())
    }

    pub fn monomial(exp: Vec<u32>, c: C64) -> Self {
        let mut p = Self::zero(exp.len());
        if c != C64::zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing
    /// repeated exponents. Only exact zeros are removed.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, C64)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    got: e.len(),
                });
            }
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::invalid("non-finite coefficient"));
            }
            *p.terms.entry(e).or_insert_with(C64::zero) += c;
        }
        p.terms.retain(|_, c| *c != C64::zero());
        Ok(p)
    }

    /// Real coefficients given as `(exponent, value)` pairs.
    pub fn from_real_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, f64)>,
    {
        Self::from_terms(nvars, terms.into_iter().map(|(e, c)| (e, C64::new(c, 0.0))))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], C64)> + '_ {
        self.terms.iter().map(|(e, c)| (e.as_slice(), *c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &[u32]) -> C64 {
        self.terms.get(exp).copied().unwrap_or_else(C64::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial (degree −1).
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree in `x_j`; `None` for the zero polynomial.
    pub fn degree_in(&self, j: usize) -> Result<Option<u32>> {
        self.check_index(j)?;
        Ok(self.terms.keys().map(|e| e[j]).max())
    }

    /// Largest coefficient modulus.
    pub fn coefficient_scale(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// True when every imaginary part is at most `tol` times the scale.
    pub fn is_real(&self, tol: f64) -> bool {
        let s = self.coefficient_scale();
        self.terms.values().all(|c| c.im.abs() <= tol * s)
    }

    /// True when every coefficient is real and strictly positive, up to
    /// `tol` relative imaginary noise.
    pub fn has_positive_coefficients(&self, tol: f64) -> bool {
        self.is_real(tol) && self.terms.values().all(|c| c.re > 0.0)
    }

    /// Variables that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&j| self.terms.keys().any(|e| e[j] > 0))
            .collect()
    }

    pub(crate) fn check_index(&self, j: usize) -> Result<()> {
        if j >= self.nvars {
            Err(Error::IndexOutOfRange {
                index: j,
                nvars: self.nvars,
            })
        } else {
            Ok(())
        }
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: other.nvars,
            })
        } else {
            Ok(())
        }
    }

    /// Removes coefficients with modulus at most `threshold`.
    pub(crate) fn drop_below(&mut self, threshold: f64) {
        self.terms.retain(|_, c| c.norm() > threshold && *c != C64::zero());
    }

    pub(crate) fn add_exact(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            *out.terms.entry(e.clone()).or_insert_with(C64::zero) += *c;
        }
        out.terms.retain(|_, c| *c != C64::zero());
        Ok(out)
    }

    pub(crate) fn mul_exact(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let mut terms: BTreeMap<Vec<u32>, C64> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *terms.entry(e).or_insert_with(C64::zero) += ca * cb;
            }
        }
        terms.retain(|_, c| *c != C64::zero());
        Ok(MultiPoly {
            nvars: self.nvars,
            terms,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.add_exact(other)?;
        let s = self.coefficient_scale().max(other.coefficient_scale());
        out.drop_below(DROP_REL * s);
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut out = self.mul_exact(other)?;
        let s = self.coefficient_scale() * other.coefficient_scale();
        out.drop_below(DROP_REL * s);
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale(-C64::one())
    }

    pub fn scale(&self, c: C64) -> Self {
        if c == C64::zero() {
            return Self::zero(self.nvars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out.terms.retain(|_, c| *c != C64::zero());
        out
    }

    pub fn scale_real(&self, a: f64) -> Self {
        self.scale(C64::new(a, 0.0))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Value at `p`, term by term with exponentiation by squaring.
    pub fn eval(&self, p: &[C64]) -> Result<C64> {
        if p.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: p.len(),
            });
        }
        Ok(self.eval_unchecked(p))
    }

    pub(crate) fn eval_unchecked(&self, p: &[C64]) -> C64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(p)
                    .filter(|(k, _)| **k > 0)
                    .fold(*c, |acc, (k, x)| acc * x.powu(*k))
            })
            .sum()
    }

    /// `sum |c| * prod |x_j|^e_j`, the natural magnitude of the terms at `p`.
    pub(crate) fn eval_scale(&self, p: &[C64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(p)
                    .fold(c.norm(), |acc, (k, x)| acc * x.norm().powi(*k as i32))
            })
            .sum()
    }

    pub fn partial_derivative(&self, j: usize) -> Result<Self> {
        self.check_index(j)?;
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[j] > 0 {
                let mut e2 = e.clone();
                e2[j] -= 1;
                out.terms.insert(e2, c * e[j] as f64);
            }
        }
        Ok(out)
    }

    /// The coefficient `f_k` of `x_j^k`, as a polynomial in the remaining
    /// `nvars - 1` variables.
    pub fn coefficient_slice(&self, j: usize, k: u32) -> Result<Self> {
        self.check_index(j)?;
        let mut out = Self::zero(self.nvars - 1);
        for (e, c) in &self.terms {
            if e[j] == k {
                out.terms.insert(remove_index(e, j), *c);
            }
        }
        Ok(out)
    }

    /// All slices `f_0, ..., f_n` along `x_j`, `n = deg_j f`.
    pub fn slices(&self, j: usize) -> Result<Vec<Self>> {
        let n = self.degree_in(j)?.unwrap_or(0);
        (0..=n).map(|k| self.coefficient_slice(j, k)).collect()
    }

    /// `sum_i f_i x_j^(n-i)` where `n = deg_j f`.
    pub fn reverse_in_var(&self, j: usize) -> Result<Self> {
        let n = match self.degree_in(j)? {
            Some(n) => n,
            None => return Ok(self.clone()),
        };
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[j] = n - e[j];
            out.terms.insert(e2, *c);
        }
        Ok(out)
    }

    /// Split by parity of total degree: `(f_e, f_o)`.
    pub fn even_odd_parts(&self) -> (Self, Self) {
        let mut even = Self::zero(self.nvars);
        let mut odd = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let target = if e.iter().sum::<u32>() % 2 == 0 {
                &mut even
            } else {
                &mut odd
            };
            target.terms.insert(e.clone(), *c);
        }
        (even, odd)
    }

    /// Sum of the terms of highest total degree.
    pub fn top_homogeneous(&self) -> Result<Self> {
        let n = self.degree().ok_or(Error::ZeroPolynomial)?;
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() == n {
                out.terms.insert(e.clone(), *c);
            }
        }
        Ok(out)
    }

    /// Substitutes `x_j -> ±i x_j` in every variable. Exact in floating point.
    pub fn rotate_halfplane(&self, direction: Rotation) -> Self {
        let unit = match direction {
            Rotation::UpperToStable => I,
            Rotation::StableToUpper => -I,
        };
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e.iter().sum::<u32>();
            out.terms.insert(e.clone(), c * unit.powu(k));
        }
        out
    }

    /// The univariate polynomial `t -> f(base + t * dir)`.
    pub fn restrict_line(&self, base: &[C64], dir: &[f64]) -> Result<UniPoly> {
        if base.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: base.len(),
            });
        }
        if dir.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: dir.len(),
            });
        }
        if dir.iter().all(|d| *d == 0.0) {
            return Err(Error::invalid("restriction direction is zero"));
        }
        let lines: Vec<UniPoly> = base
            .iter()
            .zip(dir)
            .map(|(b, d)| UniPoly::new(vec![*b, C64::new(*d, 0.0)]))
            .collect();
        Ok(self.compose_univariate(&lines))
    }

    /// `t -> f(values with x_j replaced by t)`. `values[j]` is ignored.
    pub fn restrict_to_var(&self, j: usize, values: &[C64]) -> Result<UniPoly> {
        self.check_index(j)?;
        if values.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: values.len(),
            });
        }
        let n = self.degree_in(j)?.unwrap_or(0) as usize;
        let mut coeffs = vec![C64::zero(); n + 1];
        for (e, c) in &self.terms {
            let v = e
                .iter()
                .enumerate()
                .filter(|(k, p)| *k != j && **p > 0)
                .fold(*c, |acc, (k, p)| acc * values[k].powu(*p));
            coeffs[e[j] as usize] += v;
        }
        let mut u = UniPoly::new(coeffs);
        let s = self.eval_scale(&replace(values, j, C64::one()));
        u.trim_relative(DROP_REL * s);
        Ok(u)
    }

    /// Substitutes a univariate polynomial for every variable.
    pub(crate) fn compose_univariate(&self, images: &[UniPoly]) -> UniPoly {
        let mut cache: Vec<Vec<UniPoly>> = images.iter().map(|p| vec![UniPoly::one(), p.clone()]).collect();
        let mut acc = UniPoly::zero();
        let mut bound = 0.0;
        for (e, c) in &self.terms {
            let mut term = UniPoly::constant(*c);
            let mut mag = c.norm();
            for (j, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while cache[j].len() <= k as usize {
                    let next = &cache[j][cache[j].len() - 1] * &images[j];
                    cache[j].push(next);
                }
                term = &term * &cache[j][k as usize];
                mag *= images[j].l1_norm().powi(k as i32);
            }
            bound += mag;
            acc = acc.add_exact(&term);
        }
        acc.trim_relative(DROP_REL * bound);
        acc
    }

    /// Appends `k` unused variables.
    pub fn append_vars(&self, k: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2.extend(std::iter::repeat_n(0, k));
                (e2, *c)
            })
            .collect();
        MultiPoly {
            nvars: self.nvars + k,
            terms,
        }
    }

    /// Inserts an unused variable at position `j`.
    pub fn insert_var(&self, j: usize) -> Result<Self> {
        if j > self.nvars {
            return Err(Error::IndexOutOfRange {
                index: j,
                nvars: self.nvars + 1,
            });
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2.insert(j, 0);
                (e2, *c)
            })
            .collect();
        Ok(MultiPoly {
            nvars: self.nvars + 1,
            terms,
        })
    }

    /// Renames variables: variable `k` of `self` becomes variable
    /// `map[k]` of a polynomial in `nvars` variables.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Result<Self> {
        if map.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: map.len(),
            });
        }
        if let Some(&bad) = map.iter().find(|&&m| m >= nvars) {
            return Err(Error::IndexOutOfRange { index: bad, nvars });
        }
        let mut out = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; nvars];
            for (k, p) in e.iter().enumerate() {
                e2[map[k]] += p;
            }
            *out.terms.entry(e2).or_insert_with(C64::zero) += *c;
        }
        out.terms.retain(|_, c| *c != C64::zero());
        Ok(out)
    }

    /// The univariate polynomial in `x_j`, provided no other variable occurs.
    pub fn to_univariate(&self, j: usize) -> Result<UniPoly> {
        self.check_index(j)?;
        let n = self.degree_in(j)?.unwrap_or(0) as usize;
        let mut coeffs = vec![C64::zero(); n + 1];
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(k, p)| k != j && *p > 0) {
                return Err(Error::invalid("polynomial depends on more than one variable"));
            }
            coeffs[e[j] as usize] = *c;
        }
        Ok(UniPoly::new(coeffs))
    }

    pub fn from_univariate(u: &UniPoly, nvars: usize, j: usize) -> Result<Self> {
        if j >= nvars {
            return Err(Error::IndexOutOfRange { index: j, nvars });
        }
        let mut out = Self::zero(nvars);
        for (k, c) in u.coeffs().iter().enumerate() {
            if *c != C64::zero() {
                let mut e = vec![0; nvars];
                e[j] = k as u32;
                out.terms.insert(e, *c);
            }
        }
        Ok(out)
    }

    /// Diagonal restriction `t -> f(t, ..., t)`.
    pub fn diagonal(&self) -> UniPoly {
        let n = self.degree().unwrap_or(0) as usize;
        let mut coeffs = vec![C64::zero(); n + 1];
        for (e, c) in &self.terms {
            coeffs[e.iter().sum::<u32>() as usize] += *c;
        }
        let mut u = UniPoly::new(coeffs);
        u.trim_relative(DROP_REL * self.terms.values().map(|c| c.norm()).sum::<f64>());
        u
    }

    /// Maps every coefficient through `f`, dropping exact zeros.
    pub fn map_coefficients(&self, mut f: impl FnMut(&[u32], C64) -> C64) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let v = f(e, *c);
            if v != C64::zero() {
                out.terms.insert(e.clone(), v);
            }
        }
        out
    }
}

fn remove_index(e: &[u32], j: usize) -> Vec<u32> {
    e.iter()
        .enumerate()
        .filter(|(k, _)| *k != j)
        .map(|(_, p)| *p)
        .collect()
}

fn replace(values: &[C64], j: usize, v: C64) -> Vec<C64> {
    let mut out = values.to_vec();
    out[j] = v;
    out
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl ops::$tr<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;

            /// Panics on a dimension mismatch; use the inherent method for a `Result`.
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                MultiPoly::$inner(self, rhs).expect("polynomials must share nvars")
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Sub, sub, sub);
forward_binop!(Mul, mul, mul);

impl ops::Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        MultiPoly::neg(self)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_text(self))
    }
}

#[derive(Clone, Serialize, Deserialize)]
struct TermJson {
    exp: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Clone, Serialize, Deserialize)]
struct PolyJson {
    nvars: usize,
    terms: Vec<TermJson>,
}

impl From<MultiPoly> for PolyJson {
    fn from(p: MultiPoly) -> Self {
        PolyJson {
            nvars: p.nvars,
            terms: p
                .terms
                .into_iter()
                .map(|(exp, c)| TermJson {
                    exp,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<PolyJson> for MultiPoly {
    type Error = Error;

    fn try_from(j: PolyJson) -> Result<Self> {
        MultiPoly::from_terms(
            j.nvars,
            j.terms.into_iter().map(|t| (t.exp, C64::new(t.re, t.im))),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn p(s: &str) -> MultiPoly {
        parse_text(s).unwrap()
    }

    fn pn(s: &str, n: usize) -> MultiPoly {
        parse_text_with_nvars(s, n).unwrap()
    }

    #[test]
    fn eval_examples() {
        let f = pn("1 - x1*x2", 2);
        assert_eq!(f.eval(&[c(1., 0.), c(1., 0.)]).unwrap(), C64::zero());
        let g = p("1 + x1");
        assert_eq!(g.eval(&[I]).unwrap(), c(1., 1.));
        assert!(matches!(
            g.eval(&[I, I]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn bilinear_root_matches_closed_form() {
        // a=b=c=d=1 at x=1: f(1,y) = 2 + 2y, so y = -1.
        let f = pn("1 + x1 + x2 + x1*x2", 2);
        let slice = f.restrict_to_var(1, &[c(1., 0.), C64::zero()]).unwrap();
        let y = -slice.coeffs()[0] / slice.coeffs()[1];
        let (a, b, cc, d, r, s) = (1.0, 1.0, 1.0, 1.0, 1.0, 0.0);
        let re_y = -(a * cc + b * cc * r + a * d * r + b * d * r * r + b * d * s * s)
            / ((cc + d * r) * (cc + d * r) + d * d * s * s);
        assert_eq!(y, c(-1., 0.));
        assert_eq!(re_y, -1.0);
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&pn("1 + x1", 2) * &pn("1 + x2", 2), pn("1 + x1 + x2 + x1*x2", 2));
        let f = p("3*x1^2 + 2i*x1 - 7");
        assert!((&f + &f.neg()).is_zero());
        assert_eq!(&p("x1 + 1") * &p("x1 + 2"), p("x1^2 + 3*x1 + 2"));
        assert!(matches!(
            pn("x1", 1).add(&pn("x1", 2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p("x1^2 + 3*x1 + 2").partial_derivative(0).unwrap(), p("2*x1 + 3"));
        assert!(pn("1 + x1", 2).partial_derivative(1).unwrap().is_zero());
        assert_eq!(pn("x1*x2", 2).partial_derivative(0).unwrap(), pn("x2", 2).coefficient_slice(0, 0).unwrap().insert_var(0).unwrap());
        assert!(matches!(
            p("x1").partial_derivative(3),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn slice_examples() {
        let f = pn("1 + x1 + (2 + x1)*x2", 2);
        assert_eq!(f.coefficient_slice(1, 1).unwrap(), pn("2 + x1", 1));
        assert!(f.coefficient_slice(1, 5).unwrap().is_zero());
        let g = &pn("1 + x1", 2) * &pn("1 + x2", 2);
        let s = g.slices(1).unwrap();
        assert_eq!(s, vec![pn("1 + x1", 1), pn("1 + x1", 1)]);
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(pn("2 + x1 + x2", 2).reverse_in_var(1).unwrap(), pn("(2 + x1)*x2 + 1", 2));
        let pal = pn("(1 + x1) + (1 + x1)*x2", 2);
        assert_eq!(pal.reverse_in_var(1).unwrap(), pal);
        assert_eq!(p("x1^2 + 3*x1 + 2").reverse_in_var(0).unwrap(), p("2*x1^2 + 3*x1 + 1"));
    }

    #[test]
    fn parity_examples() {
        let (e, o) = p("x1^3 + 6*x1^2 + 11*x1 + 6").even_odd_parts();
        assert_eq!(e, p("6*x1^2 + 6"));
        assert_eq!(o, p("x1^3 + 11*x1"));
        let (e, o) = pn("x1*x2 + 1", 2).even_odd_parts();
        assert_eq!(e, pn("x1*x2 + 1", 2));
        assert!(o.is_zero());
        let (e, o) = pn("x1 + x2", 2).even_odd_parts();
        assert!(e.is_zero());
        assert_eq!(o, pn("x1 + x2", 2));
    }

    #[test]
    fn top_homogeneous_examples() {
        assert_eq!(pn("1 + x1 + x1*x2", 2).top_homogeneous().unwrap(), pn("x1*x2", 2));
        let f = &pn("x1 + 1", 2) * &pn("x2 + 2", 2);
        assert_eq!(f.top_homogeneous().unwrap(), pn("x1*x2", 2));
        let h = pn("x1^2 + 3*x1*x2", 2);
        assert_eq!(h.top_homogeneous().unwrap(), h);
        assert!(matches!(
            MultiPoly::zero(2).top_homogeneous(),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn rotation_examples() {
        let f = p("x1 + 1");
        let up = f.rotate_halfplane(Rotation::StableToUpper);
        assert_eq!(up, p("-i*x1 + 1"));
        // root of -i x + 1 is x = -i, closed lower half plane
        let root = -up.coeff(&[0]) / up.coeff(&[1]);
        assert_eq!(root, c(0., -1.));

        let g = p("x1^2 + 3*x1 + 2");
        let back = g
            .rotate_halfplane(Rotation::StableToUpper)
            .rotate_halfplane(Rotation::UpperToStable);
        assert_eq!(back, g);

        // x + i has root -i, so it is upper; rotating gives i(x + 1)
        let h = p("x1 + i").rotate_halfplane(Rotation::UpperToStable);
        assert_eq!(h, p("i*x1 + i"));
    }

    #[test]
    fn line_restriction_examples() {
        let f = pn("x1*x2", 2);
        let r = f.restrict_line(&[C64::zero(), C64::zero()], &[1.0, 1.0]).unwrap();
        assert_eq!(r, UniPoly::from_real(&[0., 0., 1.]));
        let g = pn("1 + x1 + x2", 2);
        let r = g.restrict_line(&[I, C64::zero()], &[1.0, 2.0]).unwrap();
        assert_eq!(r, UniPoly::new(vec![c(1., 1.), c(3., 0.)]));
        assert!(g.restrict_line(&[I, I], &[0.0, 0.0]).is_err());
    }

    #[test]
    fn restrict_to_var_matches_line_restriction() {
        let f = pn("(1 + 2i)*x1^2*x2 + x2^3 - 4*x1 + 0.5", 2);
        let vals = [c(0.3, -1.2), C64::zero()];
        let a = f.restrict_to_var(1, &vals).unwrap();
        let b = f.restrict_line(&vals, &[0.0, 1.0]).unwrap();
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn json_round_trip_and_validation() {
        let f = pn("(1.5-2i)*x1^2*x2 + 3", 3);
        let s = serde_json::to_string(&f).unwrap();
        let g: MultiPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
        let bad = r#"{"nvars":2,"terms":[{"exp":[1],"re":1,"im":0}]}"#;
        assert!(serde_json::from_str::<MultiPoly>(bad).is_err());
    }

    #[test]
    fn embed_and_insert() {
        let f = pn("x1 + 2*x2", 2);
        assert_eq!(f.embed(3, &[2, 0]).unwrap(), pn("x3 + 2*x1", 3));
        assert_eq!(f.insert_var(0).unwrap(), pn("x2 + 2*x3", 3));
        assert_eq!(f.append_vars(1), pn("x1 + 2*x2", 3));
    }
}
