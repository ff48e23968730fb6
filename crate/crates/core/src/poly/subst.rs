use num::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{MultiPoly, C64, DROP_REL, I};
use crate::error::{Error, Result};

/// What happens to one variable under an [`AffineSubstitution`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarRule {
    Keep,
    /// `x_j -> a x_j`, `a > 0`.
    Scale(f64),
    /// `x_j -> x_j + s`, `Re s > 0`.
    Shift(C64),
    /// `x_j -> s`; removes the variable.
    Fix(C64),
    /// `x_j -> i a` for real `a`; removes the variable.
    FixImaginary(f64),
    /// `x_j -> x_k`; removes `x_j`. The target must survive the substitution.
    RenameTo(usize),
    /// `x_j -> x_j + y` with `y` a fresh variable appended after the
    /// surviving ones.
    SplitIntoSum,
}

impl VarRule {
    fn removes_slot(&self) -> bool {
        matches!(self, VarRule::Fix(_) | VarRule::FixImaginary(_) | VarRule::RenameTo(_))
    }
}

/// One rule per variable. Output variables are the surviving input
/// variables in order, followed by one fresh variable per `SplitIntoSum`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineSubstitution {
    rules: Vec<VarRule>,
}

impl AffineSubstitution {
    pub fn identity(nvars: usize) -> Self {
        AffineSubstitution {
            rules: vec![VarRule::Keep; nvars],
        }
    }

    pub fn new(rules: Vec<VarRule>) -> Self {
        AffineSubstitution { rules }
    }

    /// Builder form of setting the rule for `x_j`.
    pub fn with(mut self, j: usize, rule: VarRule) -> Self {
        if j < self.rules.len() {
            self.rules[j] = rule;
        }
        self
    }

    pub fn rules(&self) -> &[VarRule] {
        &self.rules
    }

    /// Variable count after substitution.
    pub fn output_nvars(&self) -> usize {
        let kept = self.rules.iter().filter(|r| !r.removes_slot()).count();
        let fresh = self
            .rules
            .iter()
            .filter(|r| matches!(r, VarRule::SplitIntoSum))
            .count();
        kept + fresh
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::MalformedSubstitution(m));
        for (j, r) in self.rules.iter().enumerate() {
            match *r {
                VarRule::Scale(a) if !(a > 0.0 && a.is_finite()) => {
                    return bad(format!("scale factor {a} for x{} must be positive", j + 1));
                }
                VarRule::Shift(s) if !(s.re > 0.0 && s.re.is_finite() && s.im.is_finite()) => {
                    return bad(format!("shift {s} for x{} needs Re > 0", j + 1));
                }
                VarRule::Fix(s) if !(s.re.is_finite() && s.im.is_finite()) => {
                    return bad(format!("non-finite value for x{}", j + 1));
                }
                VarRule::FixImaginary(a) if !a.is_finite() => {
                    return bad(format!("non-finite value for x{}", j + 1));
                }
                VarRule::RenameTo(k) => {
                    if k >= self.rules.len() || k == j {
                        return bad(format!("x{} renamed to invalid target {}", j + 1, k + 1));
                    }
                    if self.rules[k].removes_slot() {
                        return bad(format!("rename target x{} does not survive", k + 1));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }
}

impl MultiPoly {
    /// Applies `sub` to every variable at once.
    pub fn affine_substitute(&self, sub: &AffineSubstitution) -> Result<MultiPoly> {
        if sub.rules.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: sub.rules.len(),
            });
        }
        sub.validate()?;
        let out_n = sub.output_nvars();

        let mut slot = vec![usize::MAX; self.nvars];
        let mut next = 0;
        for (j, r) in sub.rules.iter().enumerate() {
            if !r.removes_slot() {
                slot[j] = next;
                next += 1;
            }
        }
        let mut images = Vec::with_capacity(self.nvars);
        for (j, r) in sub.rules.iter().enumerate() {
            let img = match *r {
                VarRule::Keep => MultiPoly::var(out_n, slot[j]),
                VarRule::Scale(a) => MultiPoly::var(out_n, slot[j]).scale_real(a),
                VarRule::Shift(s) => MultiPoly::var(out_n, slot[j])
                    .add_exact(&MultiPoly::constant(out_n, s))?,
                VarRule::Fix(s) => MultiPoly::constant(out_n, s),
                VarRule::FixImaginary(a) => MultiPoly::constant(out_n, I * a),
                VarRule::RenameTo(k) => MultiPoly::var(out_n, slot[k]),
                VarRule::SplitIntoSum => {
                    let fresh = MultiPoly::var(out_n, next);
                    next += 1;
                    MultiPoly::var(out_n, slot[j]).add_exact(&fresh)?
                }
            };
            images.push(img);
        }
        let norms: Vec<f64> = images.iter().map(|p| p.terms().map(|(_, c)| c.norm()).sum()).collect();

        let mut powers: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|p| vec![MultiPoly::one(out_n), p.clone()])
            .collect();
        let mut acc = MultiPoly::zero(out_n);
        let mut bound = 0.0;
        for (e, c) in self.terms() {
            let mut term = MultiPoly::constant(out_n, c);
            let mut mag = c.norm();
            for (j, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[j].len() <= k as usize {
                    let last = powers[j].last().expect("non-empty").mul_exact(&images[j])?;
                    powers[j].push(last);
                }
                term = term.mul_exact(&powers[j][k as usize])?;
                mag *= norms[j].powi(k as i32);
            }
            bound += mag;
            acc = acc.add_exact(&term)?;
        }
        acc.drop_below(DROP_REL * bound);
        Ok(acc)
    }

    /// `f(x_1 + s_1, ..., x_d + s_d)`.
    pub fn shift(&self, s: &[C64]) -> Result<MultiPoly> {
        let rules = s.iter().map(|v| {
            if *v == C64::zero() {
                VarRule::Keep
            } else {
                VarRule::Shift(*v)
            }
        });
        self.affine_substitute(&AffineSubstitution::new(rules.collect()))
    }

    /// `f(a_1 x_1, ..., a_d x_d)`.
    pub fn scale_vars(&self, a: &[f64]) -> Result<MultiPoly> {
        let rules = a.iter().map(|v| {
            if *v == f64::one() {
                VarRule::Keep
            } else {
                VarRule::Scale(*v)
            }
        });
        self.affine_substitute(&AffineSubstitution::new(rules.collect()))
    }
}
