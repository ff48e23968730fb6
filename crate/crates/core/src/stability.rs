//! Semidecision for multivariate stability (non-vanishing on the product
//! of open right half planes).
//!
//! Refutation is sound: every reported witness is checked by direct
//! evaluation. Acceptance is probabilistic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{ComplexPoint, MultiPoly, UniPoly, C64};
use crate::uniroots::{consolidated_roots, RootFinder};

/// A witness must have every real part above this after polishing.
pub const WITNESS_RE_MARGIN: f64 = 1e-10;
/// A witness must satisfy `|f(w)| < WITNESS_VALUE_TOL * coefficient_scale(f)`.
pub const WITNESS_VALUE_TOL: f64 = 1e-8;
/// Allowed spread of arguments among top-degree coefficients, in radians.
pub const ARGUMENT_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplerConfig {
    pub trials: usize,
    pub seed: u64,
    /// Sampling radius `R`: real parts in `(min_real, R]`, imaginary parts
    /// in `[-R, R]`.
    pub radius: f64,
    pub min_real: f64,
    pub tol: f64,
    pub polish_steps: usize,
    /// Restrict to lines `i a + t d` with `d > 0` instead of fixing all but
    /// one coordinate.
    pub line_mode: bool,
    pub max_redraws: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            trials: 2000,
            seed: 0,
            radius: 4.0,
            min_real: 1e-2,
            tol: 1e-9,
            polish_steps: 50,
            line_mode: false,
            max_redraws: 8,
        }
    }
}

impl SamplerConfig {
    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::invalid("sampling radius must be positive"));
        }
        if !(self.min_real > 0.0 && self.min_real < self.radius) {
            return Err(Error::invalid("min_real must lie in (0, radius)"));
        }
        Ok(())
    }

    /// Independent generator for one trial.
    pub(crate) fn trial_rng(&self, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64 + 1);
        rng
    }

    pub(crate) fn sample_rhp(&self, rng: &mut impl Rng) -> C64 {
        let (lo, hi) = (self.min_real.ln(), self.radius.ln());
        C64::new(rng.gen_range(lo..=hi).exp(), rng.gen_range(-self.radius..=self.radius))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    /// `det(I + sum x_j D_j + A)` with `A` skew-symmetric or absent.
    #[serde(alias = "det_pencil")]
    DetPencilSkew,
    /// `det(I + sum x_j D_j + i S)` with `S` symmetric.
    DetPencilImag,
    /// Product of affine forms `a + sum b_j x_j` with `b_j > 0`, `Re a >= 0`.
    LinearProduct,
    /// Closure operations applied to a certified input.
    Closure,
    Hadamard,
    ExpTransform,
    Preserver,
}

impl CertificateKind {
    pub fn name(&self) -> &'static str {
        match self {
            CertificateKind::DetPencilSkew => "det_pencil_skew",
            CertificateKind::DetPencilImag => "det_pencil_imag",
            CertificateKind::LinearProduct => "linear_product",
            CertificateKind::Closure => "closure",
            CertificateKind::Hadamard => "hadamard",
            CertificateKind::ExpTransform => "exp_transform",
            CertificateKind::Preserver => "preserver",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum StabilityVerdict {
    /// `witness` is absent only when a necessary condition failed and no
    /// explicit zero was located.
    Unstable {
        witness: Option<ComplexPoint>,
        value: Option<C64>,
        reason: String,
    },
    ProbablyStable {
        trials: usize,
        seed: u64,
        /// Smallest `-max Re(root)` seen over all restrictions; absent
        /// when every restriction was constant.
        min_margin: Option<f64>,
    },
    StableByCertificate {
        kind: CertificateKind,
    },
}

impl StabilityVerdict {
    pub fn is_unstable(&self) -> bool {
        matches!(self, StabilityVerdict::Unstable { .. })
    }

    pub fn witness(&self) -> Option<&ComplexPoint> {
        match self {
            StabilityVerdict::Unstable { witness, .. } => witness.as_ref(),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum BatteryOutcome {
    Pass,
    Fail {
        reason: String,
        /// A candidate zero found along the way, not yet validated.
        #[serde(skip)]
        hint: Option<LineCandidate>,
    },
}

impl BatteryOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, BatteryOutcome::Pass)
    }
}

/// A root `t` of `f(base + t dir)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LineCandidate {
    base: ComplexPoint,
    dir: Vec<f64>,
    restriction: UniPoly,
    t: C64,
}

impl LineCandidate {
    fn point(&self, t: C64) -> ComplexPoint {
        self.base.iter().zip(&self.dir).map(|(b, d)| b + t * d).collect()
    }
}

/// Checks `w` against the soundness rule for witnesses.
pub fn verify_witness(f: &MultiPoly, w: &[C64]) -> bool {
    if w.len() != f.nvars() || w.iter().any(|z| !(z.re > WITNESS_RE_MARGIN) || !z.im.is_finite()) {
        return false;
    }
    f.eval_unchecked(w).norm() < WITNESS_VALUE_TOL * f.coefficient_scale()
}

fn polish(c: &LineCandidate, steps: usize) -> C64 {
    let u = &c.restriction;
    let du = u.derivative();
    let mut t = c.t;
    let mut val = u.eval(t).norm();
    for _ in 0..steps {
        let d = du.eval(t);
        if d == C64::new(0.0, 0.0) || val == 0.0 {
            break;
        }
        let step = u.eval(t) / d;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..12 {
            let cand = t - step * lambda;
            let v = u.eval(cand).norm();
            if v < val {
                t = cand;
                val = v;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted || (step * lambda).norm() <= f64::EPSILON * (1.0 + t.norm()) {
            break;
        }
    }
    t
}

fn validate(f: &MultiPoly, c: &LineCandidate, steps: usize) -> Option<(ComplexPoint, C64)> {
    let t = polish(c, steps);
    let w = c.point(t);
    if verify_witness(f, &w) {
        let v = f.eval_unchecked(&w);
        return Some((w, v));
    }
    // Polishing may drift; the unpolished root can still be valid.
    let w = c.point(c.t);
    verify_witness(f, &w).then(|| {
        let v = f.eval_unchecked(&w);
        (w, v)
    })
}

/// Sound necessary conditions for stability.
pub fn necessary_battery(f: &MultiPoly) -> BatteryOutcome {
    necessary_battery_with(f, 1e-9)
}

fn necessary_battery_with(f: &MultiPoly, tol: f64) -> BatteryOutcome {
    let fail = |reason: String| BatteryOutcome::Fail { reason, hint: None };
    if f.is_zero() {
        return fail("zero polynomial".into());
    }
    let scale = f.coefficient_scale();
    let reference = f
        .terms()
        .map(|(_, c)| c)
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("non-zero");
    let unit = reference.conj() / reference.norm();

    // Same-sign test, after removing a common unimodular factor.
    let rotated = f.scale(unit);
    if rotated.is_real(1e-12) {
        let floor = 1e-13 * scale;
        let neg = rotated.terms().any(|(_, c)| c.re < -floor);
        let pos = rotated.terms().any(|(_, c)| c.re > floor);
        if neg && pos {
            return fail("real coefficients of mixed sign".into());
        }
    }

    // Top-degree coefficients share one argument.
    if let Ok(top) = f.top_homogeneous() {
        let tscale = top.coefficient_scale();
        let tref = top
            .terms()
            .map(|(_, c)| c)
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .expect("non-zero");
        let tunit = tref.conj() / tref.norm();
        for (e, c) in top.terms() {
            let m = c.norm();
            if m <= 1e-13 * tscale {
                continue;
            }
            let angle = (c * tunit).arg().abs();
            if angle > ARGUMENT_TOL + 1e-13 * tscale / m {
                return fail(format!(
                    "top-degree coefficients have different arguments (exponent {e:?} off by {angle:.3e} rad)"
                ));
            }
        }
    }

    // Diagonal restriction f(x, ..., x).
    let n = f.nvars();
    let diag = f.diagonal();
    let base = vec![C64::new(0.0, 0.0); n];
    let dir = vec![1.0; n];
    if diag.is_zero() {
        return BatteryOutcome::Fail {
            reason: "diagonal restriction vanishes identically".into(),
            hint: Some(LineCandidate {
                base,
                dir,
                restriction: diag,
                t: C64::new(1.0, 0.0),
            }),
        };
    }
    if diag.degree().unwrap_or(0) >= 1 {
        if let Ok(rs) = RootFinder::default().roots(&diag) {
            let roots = consolidated_roots(&diag, &rs.roots);
            if let Some(worst) = roots.iter().copied().max_by(|a, b| a.re.total_cmp(&b.re)) {
                if worst.re > tol {
                    return BatteryOutcome::Fail {
                        reason: format!("diagonal restriction has a root at {worst}"),
                        hint: Some(LineCandidate {
                            base,
                            dir,
                            restriction: diag,
                            t: worst,
                        }),
                    };
                }
            }
        }
    }
    BatteryOutcome::Pass
}

/// Monte-Carlo search for a zero in the open right half plane.
pub fn refute_montecarlo(f: &MultiPoly, cfg: &SamplerConfig) -> Result<StabilityVerdict> {
    cfg.validate()?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = f.nvars();
    let support = f.support_vars();
    let probably = |min_margin: Option<f64>| StabilityVerdict::ProbablyStable {
        trials: cfg.trials,
        seed: cfg.seed,
        min_margin,
    };
    if support.is_empty() {
        return Ok(probably(None));
    }
    // With one active variable every restriction is the same polynomial.
    let trials = if support.len() == 1 && !cfg.line_mode { 1 } else { cfg.trials };
    let probably = |min_margin: Option<f64>| StabilityVerdict::ProbablyStable {
        trials,
        seed: cfg.seed,
        min_margin,
    };
    let mut min_margin: Option<f64> = None;
    for trial in 0..trials {
        let mut rng = cfg.trial_rng(trial);
        let finder = RootFinder {
            seed: rng.gen(),
            tol: 1e-7,
            ..Default::default()
        };
        let mut attempt = None;
        for _ in 0..=cfg.max_redraws {
            let (base, dir, u) = if cfg.line_mode {
                let base: ComplexPoint = (0..n)
                    .map(|_| C64::new(0.0, rng.gen_range(-cfg.radius..=cfg.radius)))
                    .collect();
                let dir: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..=1.0)).collect();
                let u = f.restrict_line(&base, &dir)?;
                (base, dir, u)
            } else {
                let j = support[rng.gen_range(0..support.len())];
                let mut base: ComplexPoint = (0..n).map(|_| cfg.sample_rhp(&mut rng)).collect();
                let probe = base.clone();
                base[j] = C64::new(0.0, 0.0);
                let mut dir = vec![0.0; n];
                dir[j] = 1.0;
                let u = f.restrict_to_var(j, &probe)?;
                if u.is_zero() {
                    if f.eval_unchecked(&probe) == C64::new(0.0, 0.0) {
                        return Ok(StabilityVerdict::Unstable {
                            value: Some(C64::new(0.0, 0.0)),
                            witness: Some(probe),
                            reason: format!("restriction to x{} vanishes identically", j + 1),
                        });
                    }
                    continue;
                }
                (base, dir, u)
            };
            if u.is_zero() {
                continue;
            }
            attempt = Some((base, dir, u));
            break;
        }
        let Some((base, dir, u)) = attempt else {
            continue;
        };
        if u.degree() == Some(0) {
            continue;
        }
        let rs = finder.roots(&u)?;
        let mut roots = consolidated_roots(&u, &rs.roots);
        roots.sort_by(|a, b| b.re.total_cmp(&a.re));
        let margin = -roots[0].re;
        min_margin = Some(min_margin.map_or(margin, |m: f64| m.min(margin)));
        for t in roots.iter().take_while(|t| t.re > cfg.tol) {
            let cand = LineCandidate {
                base: base.clone(),
                dir: dir.clone(),
                restriction: u.clone(),
                t: *t,
            };
            if let Some((w, v)) = validate(f, &cand, cfg.polish_steps) {
                let axis = if cfg.line_mode {
                    "line".to_string()
                } else {
                    let j = dir.iter().position(|d| *d != 0.0).unwrap_or(0);
                    format!("x{}", j + 1)
                };
                return Ok(StabilityVerdict::Unstable {
                    witness: Some(w),
                    value: Some(v),
                    reason: format!("zero found on restriction to {axis} in trial {trial}"),
                });
            }
        }
    }
    Ok(probably(min_margin))
}

/// Battery, then certificate or Monte-Carlo refutation.
pub fn decide(f: &MultiPoly, cfg: &SamplerConfig, certificate: Option<CertificateKind>) -> Result<StabilityVerdict> {
    cfg.validate()?;
    match necessary_battery_with(f, cfg.tol) {
        BatteryOutcome::Pass => match certificate {
            Some(kind) => Ok(StabilityVerdict::StableByCertificate { kind }),
            None => refute_montecarlo(f, cfg),
        },
        BatteryOutcome::Fail { reason, hint } => {
            if f.is_zero() {
                return Ok(StabilityVerdict::Unstable {
                    witness: Some(vec![C64::new(1.0, 0.0); f.nvars()]),
                    value: Some(C64::new(0.0, 0.0)),
                    reason,
                });
            }
            if let Some((w, v)) = hint.and_then(|h| validate(f, &h, cfg.polish_steps)) {
                return Ok(StabilityVerdict::Unstable {
                    witness: Some(w),
                    value: Some(v),
                    reason,
                });
            }
            for line_mode in [false, true] {
                let search = SamplerConfig { line_mode, ..cfg.clone() };
                if let StabilityVerdict::Unstable {
                    witness: Some(w),
                    value,
                    ..
                } = refute_montecarlo(f, &search)?
                {
                    return Ok(StabilityVerdict::Unstable {
                        witness: Some(w),
                        value,
                        reason,
                    });
                }
            }
            Ok(StabilityVerdict::Unstable {
                witness: None,
                value: None,
                reason,
            })
        }
    }
}

/// `f + y g` with `y` appended as the last variable.
pub fn join_with_fresh_var(f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly> {
    if f.nvars() != g.nvars() {
        return Err(Error::DimensionMismatch {
            expected: f.nvars(),
            got: g.nvars(),
        });
    }
    let n = f.nvars();
    let y = MultiPoly::var(n + 1, n);
    f.append_vars(1).add(&g.append_vars(1).mul(&y)?)
}
