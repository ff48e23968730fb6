//! Linear operators given by polynomial symbols in multiplication and
//! differentiation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{MultiPoly, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpMode {
    /// `f(d/dx)`: every variable of the symbol differentiates.
    Pure,
    /// `f(x, d/dy)`: the first half of the symbol's variables multiply, the
    /// second half differentiate.
    Mixed,
}

/// A symbol together with how it acts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiffOpSpec {
    pub mode: OpMode,
    #[serde(flatten)]
    pub symbol: MultiPoly,
}

impl DiffOpSpec {
    pub fn pure(symbol: MultiPoly) -> Self {
        DiffOpSpec {
            mode: OpMode::Pure,
            symbol,
        }
    }

    pub fn mixed(symbol: MultiPoly) -> Result<Self> {
        if !symbol.nvars().is_multiple_of(2) {
            return Err(Error::invalid("mixed symbol needs an even number of variables"));
        }
        Ok(DiffOpSpec {
            mode: OpMode::Mixed,
            symbol,
        })
    }

    pub fn apply(&self, g: &MultiPoly) -> Result<MultiPoly> {
        match self.mode {
            OpMode::Pure => apply_diffop(&self.symbol, g),
            OpMode::Mixed => apply_mixed(&self.symbol, g),
        }
    }
}

fn falling(n: u32, k: u32) -> f64 {
    (n - k + 1..=n).map(f64::from).product()
}

/// `d^alpha` applied to `g`, with `alpha[j]` acting on variable
/// `offset + j`; `shift` is then added to the exponents, i.e. the result is
/// multiplied by `x^shift`.
fn monomial_action(
    g: &MultiPoly,
    offset: usize,
    alpha: &[u32],
    shift: &[u32],
    c: C64,
    acc: &mut BTreeMap<Vec<u32>, C64>,
) {
    'terms: for (e, gc) in g.terms() {
        let mut w = c * gc;
        let mut out = e.to_vec();
        for (j, &a) in alpha.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let k = e[offset + j];
            if k < a {
                continue 'terms;
            }
            w *= falling(k, a);
            out[offset + j] = k - a;
        }
        for (j, &s) in shift.iter().enumerate() {
            out[j] += s;
        }
        *acc.entry(out).or_default() += w;
    }
}

fn collect(nvars: usize, acc: BTreeMap<Vec<u32>, C64>) -> Result<MultiPoly> {
    MultiPoly::from_terms(nvars, acc)
}

/// `f(d/dx_1, ..., d/dx_d) g`.
pub fn apply_diffop(f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly> {
    if f.nvars() != g.nvars() {
        return Err(Error::DimensionMismatch {
            expected: g.nvars(),
            got: f.nvars(),
        });
    }
    let mut acc = BTreeMap::new();
    for (alpha, c) in f.terms() {
        monomial_action(g, 0, alpha, &[], c, &mut acc);
    }
    collect(g.nvars(), acc)
}

/// `f(x, d/dy) g(x, y)` with both polynomials in `2d` variables, the
/// first `d` being `x`. A `g` in `d` variables is read as `g(y)`.
pub fn apply_mixed(fsym: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly> {
    let n = fsym.nvars();
    if !n.is_multiple_of(2) {
        return Err(Error::invalid("mixed symbol needs an even number of variables"));
    }
    let d = n / 2;
    let g = if g.nvars() == d && d != n {
        g.embed(n, &(d..n).collect::<Vec<_>>())?
    } else if g.nvars() == n {
        g.clone()
    } else {
        return Err(Error::DimensionMismatch { expected: n, got: g.nvars() });
    };
    let mut acc = BTreeMap::new();
    for (e, c) in fsym.terms() {
        monomial_action(&g, d, &e[d..], &e[..d], c, &mut acc);
    }
    collect(n, acc)
}

/// `sum_k (d_x . d_y)^k f / k!` for `f` in `2d` variables; terminates
/// once the derivative vanishes.
pub fn exp_mixed(f: &MultiPoly) -> Result<MultiPoly> {
    let n = f.nvars();
    if !n.is_multiple_of(2) {
        return Err(Error::invalid("exp_mixed needs an even number of variables"));
    }
    let d = n / 2;
    let mut out = f.clone();
    let mut term = f.clone();
    let mut k = 0u32;
    loop {
        k += 1;
        let mut acc = BTreeMap::new();
        for j in 0..d {
            let mut alpha = vec![0u32; n];
            alpha[j] = 1;
            alpha[d + j] = 1;
            monomial_action(&term, 0, &alpha, &[], C64::new(1.0 / f64::from(k), 0.0), &mut acc);
        }
        term = collect(n, acc)?;
        if term.is_zero() {
            return Ok(out);
        }
        out = out.add(&term)?;
    }
}
