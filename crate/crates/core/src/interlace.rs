//! Interlacing relations between polynomials.
//!
//! `f <=H g`, `f <=U g` and `f <=P g` ask whether `f + y g` is stable,
//! upper, or both with positive coefficients. `f ~H g` and `f ~P g` ask the
//! same of `f + r g` for every real `r > 0`, with positive coefficients.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{ComplexPoint, MultiPoly, Rotation, UniPoly, C64};
use crate::stability::{decide, join_with_fresh_var, SamplerConfig, StabilityVerdict};
use crate::uniroots::{all_roots, in_ppos1, log_grid, roots_interlace, sorted_real_roots};

/// Relative tolerance for deciding that a ratio value lies on a region
/// boundary.
pub const BOUNDARY_TOL: f64 = 1e-10;
/// Sample points within this relative distance of a root of `g` are skipped.
pub const POLE_EXCLUSION: f64 = 1e-8;
/// Number of log-spaced multipliers for the `~` relations.
pub const MULTIPLIER_GRID: usize = 32;
/// Extra random multipliers per check.
pub const MULTIPLIER_RANDOM: usize = 4;
/// Stand-ins for the limits `r -> 0` and `r -> infinity`.
pub const MULTIPLIER_ENDPOINTS: [f64; 2] = [1e-6, 1e6];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "H")]
    HInterlace,
    #[serde(rename = "U")]
    UInterlace,
    #[serde(rename = "P")]
    PInterlace,
    #[serde(rename = "Hsim")]
    HSim,
    #[serde(rename = "Psim")]
    PSim,
}

impl Relation {
    pub const ALL: [Relation; 5] = [
        Relation::HInterlace,
        Relation::UInterlace,
        Relation::PInterlace,
        Relation::HSim,
        Relation::PSim,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Relation::HInterlace => "H",
            Relation::UInterlace => "U",
            Relation::PInterlace => "P",
            Relation::HSim => "Hsim",
            Relation::PSim => "Psim",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Relation::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown relation {s:?}; expected H, U, P, Hsim or Psim")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    /// The plane minus the closed negative real axis.
    SlitPlane,
    ClosedRHP,
    /// Closed first quadrant.
    Quadrant1,
    OpenRHP,
}

impl Region {
    /// Target region of `f/g` on the first quadrant for each relation.
    pub fn for_relation(rel: Relation) -> Option<Region> {
        match rel {
            Relation::HSim => Some(Region::SlitPlane),
            Relation::HInterlace => Some(Region::ClosedRHP),
            Relation::PInterlace => Some(Region::Quadrant1),
            Relation::PSim => Some(Region::OpenRHP),
            Relation::UInterlace => None,
        }
    }

    /// True when `w` is clearly outside the region. Open and closed
    /// half planes coincide at the boundary tolerance.
    pub fn excludes(&self, w: C64) -> bool {
        let m = w.norm();
        let eps = BOUNDARY_TOL * m;
        match self {
            Region::SlitPlane => w.re < 0.0 && w.im.abs() <= eps,
            Region::ClosedRHP | Region::OpenRHP => w.re < -eps,
            Region::Quadrant1 => w.re < -eps || w.im < -eps,
        }
    }
}

impl FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "SlitPlane" | "slit" => Ok(Region::SlitPlane),
            "ClosedRHP" => Ok(Region::ClosedRHP),
            "Quadrant1" | "Q1" => Ok(Region::Quadrant1),
            "OpenRHP" | "RHP" => Ok(Region::OpenRHP),
            _ => Err(Error::invalid(format!("unknown region {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Holds {
    Yes,
    No,
    Probably,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    RatioMap,
    Join,
    RootInterlacing,
    /// `f + r g` over a grid of multipliers.
    MultiplierSampling,
}

/// Concrete evidence that a relation fails. `r` is the multiplier for the
/// `~` relations and absent for the join-based ones.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RelationWitness {
    /// Zero with every coordinate in the open right half plane.
    RhpZero { point: ComplexPoint, r: Option<f64> },
    /// Zero with every coordinate in the open upper half plane.
    UhpZero { point: ComplexPoint, r: Option<f64> },
    /// A coefficient that is not positive.
    Coefficient { exponent: Vec<u32>, value: C64, r: Option<f64> },
    /// `(f/g)(sigma)` lies outside the target region.
    Ratio { sigma: C64, value: C64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationVerdict {
    pub relation: Relation,
    pub holds: Holds,
    pub witness: Option<RelationWitness>,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl RelationVerdict {
    /// Holds or probably holds.
    pub fn accepted(&self) -> bool {
        self.holds != Holds::No
    }

    fn new(relation: Relation, method: Method, m: Membership) -> Self {
        RelationVerdict {
            relation,
            holds: m.holds,
            witness: m.witness,
            method,
            note: m.note,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Class {
    /// Stable, any coefficients.
    Stable,
    Upper,
    /// Stable with positive coefficients.
    PositiveStable,
    /// Stable and upper with positive coefficients.
    Positive,
}

#[derive(Clone, Debug, PartialEq)]
struct Membership {
    holds: Holds,
    witness: Option<RelationWitness>,
    note: Option<String>,
}

impl Membership {
    fn probably() -> Self {
        Membership {
            holds: Holds::Probably,
            witness: None,
            note: None,
        }
    }

    fn no(witness: Option<RelationWitness>, note: Option<String>) -> Self {
        Membership {
            holds: Holds::No,
            witness,
            note,
        }
    }
}

fn first_nonpositive(p: &MultiPoly) -> Option<(Vec<u32>, C64)> {
    let s = p.coefficient_scale();
    p.terms()
        .find(|(_, c)| !(c.re > 0.0) || c.im.abs() > 1e-12 * s)
        .map(|(e, c)| (e.to_vec(), c))
}

fn stable_part(p: &MultiPoly, cfg: &SamplerConfig, r: Option<f64>, upper: bool) -> Result<Option<Membership>> {
    let target = if upper {
        p.rotate_halfplane(Rotation::UpperToStable)
    } else {
        p.clone()
    };
    match decide(&target, cfg, None)? {
        StabilityVerdict::Unstable { witness, reason, .. } => {
            let witness = witness.map(|w| {
                if upper {
                    RelationWitness::UhpZero {
                        point: w.iter().map(|z| z * C64::new(0.0, 1.0)).collect(),
                        r,
                    }
                } else {
                    RelationWitness::RhpZero { point: w, r }
                }
            });
            Ok(Some(Membership::no(witness, Some(reason))))
        }
        _ => Ok(None),
    }
}

fn membership(p: &MultiPoly, class: Class, cfg: &SamplerConfig, r: Option<f64>) -> Result<Membership> {
    if p.is_zero() {
        return Ok(Membership::no(None, Some("polynomial vanishes identically".into())));
    }
    if matches!(class, Class::PositiveStable | Class::Positive) {
        if let Some((exponent, value)) = first_nonpositive(p) {
            return Ok(Membership::no(
                Some(RelationWitness::Coefficient { exponent, value, r }),
                Some("coefficient is not positive".into()),
            ));
        }
    }
    if class != Class::Upper {
        if let Some(m) = stable_part(p, cfg, r, false)? {
            return Ok(m);
        }
    }
    if matches!(class, Class::Upper | Class::Positive) {
        if let Some(m) = stable_part(p, cfg, r, true)? {
            return Ok(m);
        }
    }
    Ok(Membership::probably())
}

fn check_inputs(f: &MultiPoly, g: &MultiPoly) -> Result<()> {
    if f.nvars() != g.nvars() {
        return Err(Error::DimensionMismatch {
            expected: f.nvars(),
            got: g.nvars(),
        });
    }
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(())
}

/// Multipliers used by the `~` relations: the log grid, seeded random
/// values and the two endpoint stand-ins.
pub fn multipliers(seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut rs = log_grid(1e-3, 1e3, MULTIPLIER_GRID);
    let (lo, hi) = (1e-3f64.ln(), 1e3f64.ln());
    rs.extend((0..MULTIPLIER_RANDOM).map(|_| rng.gen_range(lo..hi).exp()));
    rs.extend(MULTIPLIER_ENDPOINTS);
    rs
}

fn univariate_ppos(f: &MultiPoly) -> Result<Option<UniPoly>> {
    if f.nvars() != 1 || !f.is_real(1e-12) {
        return Ok(None);
    }
    let u = f.to_univariate(0)?;
    Ok(in_ppos1(&u, 1e-9)?.then_some(u))
}

/// Checks one relation. One-variable inputs in the positive cone take the
/// exact root-order path for `P` and `Psim`.
pub fn check_relation(f: &MultiPoly, g: &MultiPoly, rel: Relation, cfg: &SamplerConfig) -> Result<RelationVerdict> {
    check_inputs(f, g)?;
    if matches!(rel, Relation::PInterlace | Relation::PSim) {
        if let (Some(fu), Some(gu)) = (univariate_ppos(f)?, univariate_ppos(g)?) {
            return exact_positive(f, g, &fu, &gu, rel, cfg);
        }
    }
    match rel {
        Relation::HInterlace | Relation::UInterlace | Relation::PInterlace => {
            let join = join_with_fresh_var(f, g)?;
            let class = match rel {
                Relation::HInterlace => Class::Stable,
                Relation::UInterlace => Class::Upper,
                _ => Class::Positive,
            };
            Ok(RelationVerdict::new(rel, Method::Join, membership(&join, class, cfg, None)?))
        }
        Relation::HSim | Relation::PSim => {
            let class = if rel == Relation::HSim {
                Class::PositiveStable
            } else {
                Class::Positive
            };
            for r in multipliers(cfg.seed) {
                let p = f.add(&g.scale_real(r))?;
                let m = membership(&p, class, cfg, Some(r))?;
                if m.holds == Holds::No {
                    return Ok(RelationVerdict::new(rel, Method::MultiplierSampling, m));
                }
            }
            Ok(RelationVerdict::new(rel, Method::MultiplierSampling, Membership::probably()))
        }
    }
}

fn exact_positive(
    f: &MultiPoly,
    g: &MultiPoly,
    fu: &UniPoly,
    gu: &UniPoly,
    rel: Relation,
    cfg: &SamplerConfig,
) -> Result<RelationVerdict> {
    let tol = 1e-9;
    let fr = sorted_real_roots(fu, tol)?.expect("checked real-rooted");
    let gr = sorted_real_roots(gu, tol)?.expect("checked real-rooted");
    let holds = match rel {
        Relation::PInterlace => roots_interlace(&fr, &gr, tol),
        _ => {
            let mut merged: Vec<f64> = fr.iter().chain(&gr).copied().collect();
            merged.sort_by(|a, b| b.total_cmp(a));
            let hr: Vec<f64> = merged.iter().step_by(2).copied().collect();
            fr.len().abs_diff(gr.len()) <= 1 && roots_interlace(&hr, &fr, tol) && roots_interlace(&hr, &gr, tol)
        }
    };
    if holds {
        return Ok(RelationVerdict {
            relation: rel,
            holds: Holds::Yes,
            witness: None,
            method: Method::RootInterlacing,
            note: None,
        });
    }
    let m = match rel {
        Relation::PInterlace => membership(&join_with_fresh_var(f, g)?, Class::Positive, cfg, None)?,
        _ => psim_witness(fu, gu)?,
    };
    Ok(RelationVerdict {
        relation: rel,
        holds: Holds::No,
        witness: m.witness,
        method: Method::RootInterlacing,
        note: m.note.or_else(|| Some("roots do not interlace".into())),
    })
}

/// A multiplier `t` with `f + t g` outside the one-variable positive cone,
/// and a concrete zero or coefficient showing it.
fn psim_witness(f: &UniPoly, g: &UniPoly) -> Result<Membership> {
    for t in log_grid(1e-4, 1e4, 400) {
        let p = f + &g.scale_real(t);
        if in_ppos1(&p, 1e-9)? {
            continue;
        }
        let r = Some(t);
        if let Some((k, c)) = p.coeffs().iter().enumerate().find(|(_, c)| c.re < 0.0) {
            return Ok(Membership::no(
                Some(RelationWitness::Coefficient {
                    exponent: vec![k as u32],
                    value: *c,
                    r,
                }),
                None,
            ));
        }
        let roots = all_roots(&p, 1e-9)?.roots;
        if let Some(z) = roots.iter().max_by(|a, b| a.im.abs().total_cmp(&b.im.abs())) {
            if z.im.abs() > 1e-9 * (1.0 + z.norm()) {
                let z = if z.im > 0.0 { *z } else { z.conj() };
                return Ok(Membership::no(Some(RelationWitness::UhpZero { point: vec![z], r }), None));
            }
        }
        if let Some(z) = roots.iter().max_by(|a, b| a.re.total_cmp(&b.re)) {
            if z.re > 0.0 {
                return Ok(Membership::no(Some(RelationWitness::RhpZero { point: vec![*z], r }), None));
            }
        }
    }
    Ok(Membership::no(None, Some("no violating multiplier located".into())))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RatioOutcome {
    Holds,
    Counterexample { sigma: C64, value: C64 },
}

impl RatioOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, RatioOutcome::Holds)
    }
}

/// Samples `f/g` over the open first quadrant: a `grid x grid` log-polar
/// mesh with radii in `[1e-3, 1e3]` plus `grid` random points. For the
/// slit plane, sign changes of `Im(f/g)` along mesh lines are bisected to
/// catch crossings of the negative axis.
pub fn ratio_region_check(f: &UniPoly, g: &UniPoly, region: Region, grid: usize, seed: u64) -> Result<RatioOutcome> {
    if g.is_zero() || f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_real(1e-12) || !g.is_real(1e-12) {
        return Err(Error::invalid("ratio criteria need real coefficients"));
    }
    if grid == 0 {
        return Err(Error::invalid("grid must be positive"));
    }
    let poles: Vec<C64> = if g.degree() >= Some(1) {
        all_roots(g, 1e-9)?.roots
    } else {
        Vec::new()
    };
    let ratio = |s: C64| -> Option<C64> {
        if poles.iter().any(|p| (s - p).norm() <= POLE_EXCLUSION * (1.0 + p.norm())) {
            return None;
        }
        let d = g.eval(s);
        if d.norm() == 0.0 {
            return None;
        }
        let w = f.eval(s) / d;
        (w.re.is_finite() && w.im.is_finite()).then_some(w)
    };
    let radii = log_grid(1e-3, 1e3, grid);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let angles: Vec<f64> = (0..grid).map(|k| half_pi * (k + 1) as f64 / (grid + 1) as f64).collect();
    let mesh: Vec<Vec<C64>> = radii
        .iter()
        .map(|r| angles.iter().map(|a| C64::from_polar(*r, *a)).collect())
        .collect();
    let values: Vec<Vec<Option<C64>>> = mesh.iter().map(|row| row.iter().map(|s| ratio(*s)).collect()).collect();

    for (row, vals) in mesh.iter().zip(&values) {
        for (s, w) in row.iter().zip(vals) {
            if let Some(w) = w {
                if region.excludes(*w) {
                    return Ok(RatioOutcome::Counterexample { sigma: *s, value: *w });
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = (1e-3f64.ln(), 1e3f64.ln());
    for _ in 0..grid {
        let s = C64::from_polar(rng.gen_range(lo..hi).exp(), rng.gen_range(0.0..half_pi));
        if let Some(w) = ratio(s) {
            if region.excludes(w) {
                return Ok(RatioOutcome::Counterexample { sigma: s, value: w });
            }
        }
    }
    if region == Region::SlitPlane {
        let n = grid;
        let mut segments = Vec::with_capacity(2 * n * n);
        for i in 0..n {
            for k in 0..n {
                if k + 1 < n {
                    segments.push(((i, k), (i, k + 1)));
                }
                if i + 1 < n {
                    segments.push(((i, k), (i + 1, k)));
                }
            }
        }
        for ((i1, k1), (i2, k2)) in segments {
            let (Some(w1), Some(w2)) = (values[i1][k1], values[i2][k2]) else {
                continue;
            };
            if let Some((s, w)) = negative_axis_crossing(&ratio, mesh[i1][k1], w1, mesh[i2][k2], w2) {
                return Ok(RatioOutcome::Counterexample { sigma: s, value: w });
            }
        }
    }
    Ok(RatioOutcome::Holds)
}

fn negative_axis_crossing(
    ratio: &impl Fn(C64) -> Option<C64>,
    s1: C64,
    w1: C64,
    s2: C64,
    w2: C64,
) -> Option<(C64, C64)> {
    if !(w1.im * w2.im < 0.0) {
        return None;
    }
    let x = w1.re - w1.im * (w2.re - w1.re) / (w2.im - w1.im);
    if !(x < 0.0) {
        return None;
    }
    let (mut a, mut b) = (s1, s2);
    let sign_a = w1.im.signum();
    let mut last = None;
    for _ in 0..200 {
        let m = (a + b) * 0.5;
        let w = ratio(m)?;
        last = Some((m, w));
        if w.im == 0.0 {
            break;
        }
        if w.im.signum() == sign_a {
            a = m;
        } else {
            b = m;
        }
        if (b - a).norm() <= f64::EPSILON * a.norm() {
            break;
        }
    }
    let (s, w) = last?;
    Region::SlitPlane.excludes(w).then_some((s, w))
}

/// Outcome of the even/odd decomposition test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "path", rename_all = "snake_case")]
pub enum HermiteBiehler {
    /// `f_e <=H f_o` was checked.
    Relation { verdict: RelationVerdict },
    /// One of the parts vanishes; `f` was decided directly.
    Degenerate { verdict: StabilityVerdict },
}

impl HermiteBiehler {
    /// Whether the check accepts `f` as stable.
    pub fn accepts(&self) -> bool {
        match self {
            HermiteBiehler::Relation { verdict } => verdict.accepted(),
            HermiteBiehler::Degenerate { verdict } => !verdict.is_unstable(),
        }
    }
}

pub fn hermite_biehler_check(f: &MultiPoly, cfg: &SamplerConfig) -> Result<HermiteBiehler> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (fe, fo) = f.even_odd_parts();
    if fe.is_zero() || fo.is_zero() {
        return Ok(HermiteBiehler::Degenerate {
            verdict: decide(f, cfg, None)?,
        });
    }
    Ok(HermiteBiehler::Relation {
        verdict: check_relation(&fe, &fo, Relation::HInterlace, cfg)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainEntry {
    pub lower: usize,
    pub upper: usize,
    pub verdict: RelationVerdict,
}

/// For the slices `f_0, ..., f_n` of `F` along `x_j`: `f_i <=H f_{i+1}` for
/// consecutive pairs that are not both zero, and `f_k ~H f_{k+2}`.
pub fn coefficient_chain_check(big_f: &MultiPoly, j: usize, cfg: &SamplerConfig) -> Result<Vec<ChainEntry>> {
    let slices = big_f.slices(j)?;
    let mut out = Vec::new();
    let mut run = |lower: usize, upper: usize, rel: Relation| -> Result<()> {
        let (a, b) = (&slices[lower], &slices[upper]);
        let verdict = if a.is_zero() && b.is_zero() {
            return Ok(());
        } else if a.is_zero() || b.is_zero() {
            // f + y 0 and 0 + y g reduce to membership of the other slice.
            let other = if a.is_zero() { b } else { a };
            let class = if rel == Relation::HSim {
                Class::PositiveStable
            } else {
                Class::Stable
            };
            RelationVerdict::new(rel, Method::Join, membership(other, class, cfg, None)?)
        } else {
            check_relation(a, b, rel, cfg)?
        };
        out.push(ChainEntry { lower, upper, verdict });
        Ok(())
    };
    for i in 0..slices.len().saturating_sub(1) {
        run(i, i + 1, Relation::HInterlace)?;
    }
    for k in 0..slices.len().saturating_sub(2) {
        run(k, k + 2, Relation::HSim)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_text_with_nvars as pn;

    fn cfg() -> SamplerConfig {
        SamplerConfig::default().with_trials(400).with_seed(3)
    }

    fn u(roots: &[f64]) -> UniPoly {
        UniPoly::from_real_roots(roots)
    }

    fn m(p: &UniPoly) -> MultiPoly {
        MultiPoly::from_univariate(p, 1, 0).unwrap()
    }

    #[test]
    fn nested_roots_pair() {
        let f = pn("x1*(x1 + 3)", 1).unwrap();
        let g = pn("(x1 + 1)*(x1 + 2)", 1).unwrap();
        let c = cfg();
        assert_eq!(check_relation(&f, &g, Relation::PSim, &c).unwrap().holds, Holds::Yes);
        let p = check_relation(&f, &g, Relation::PInterlace, &c).unwrap();
        assert_eq!(p.holds, Holds::No);
        assert!(p.witness.is_some());
        assert!(check_relation(&f, &g, Relation::HSim, &c).unwrap().accepted());
        assert!(check_relation(&f, &g, Relation::HInterlace, &c).unwrap().accepted());
    }

    #[test]
    fn square_against_one() {
        let f = pn("x1^2", 1).unwrap();
        let g = pn("1", 1).unwrap();
        let c = cfg();
        assert!(check_relation(&f, &g, Relation::HSim, &c).unwrap().accepted());
        let h = check_relation(&f, &g, Relation::HInterlace, &c).unwrap();
        assert_eq!(h.holds, Holds::No);
        match h.witness {
            Some(RelationWitness::RhpZero { point, .. }) => {
                let join = pn("x1^2 + x2", 2).unwrap();
                assert!(crate::stability::verify_witness(&join, &point));
            }
            other => panic!("unexpected witness {other:?}"),
        }
        assert_eq!(check_relation(&f, &g, Relation::PInterlace, &c).unwrap().holds, Holds::No);
    }

    #[test]
    fn derivative_interlaces() {
        let f = pn("(1 + x1)*(2 + x1)", 1).unwrap();
        let df = f.partial_derivative(0).unwrap();
        assert!(check_relation(&f, &df, Relation::HInterlace, &cfg()).unwrap().accepted());
    }

    #[test]
    fn relation_names_round_trip() {
        for r in Relation::ALL {
            assert_eq!(r.name().parse::<Relation>().unwrap(), r);
            let s = serde_json::to_string(&r).unwrap();
            assert_eq!(s, format!("\"{}\"", r.name()));
        }
        assert!("Q".parse::<Relation>().is_err());
    }

    #[test]
    fn relation_input_errors() {
        let f = pn("x1", 1).unwrap();
        assert!(matches!(
            check_relation(&f, &MultiPoly::zero(1), Relation::HInterlace, &cfg()),
            Err(Error::ZeroPolynomial)
        ));
        assert!(matches!(
            check_relation(&f, &MultiPoly::one(2), Relation::HInterlace, &cfg()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn ratio_examples() {
        let one = UniPoly::one();
        let sq = UniPoly::from_real(&[0., 0., 1.]);
        assert!(ratio_region_check(&sq, &one, Region::SlitPlane, 48, 1).unwrap().holds());
        let f = u(&[-1., -2.]);
        let g = u(&[-1.5]);
        assert!(ratio_region_check(&f, &g, Region::Quadrant1, 48, 1).unwrap().holds());
        let bad = UniPoly::from_real(&[-1., 1.]);
        match ratio_region_check(&bad, &one, Region::ClosedRHP, 48, 1).unwrap() {
            RatioOutcome::Counterexample { value, .. } => assert!(value.re < 0.0),
            RatioOutcome::Holds => panic!("x - 1 maps small sigma to the left half plane"),
        }
    }

    #[test]
    fn slit_crossing_is_found() {
        // sigma^3 reaches the negative axis at arg sigma = pi/3
        let cube = UniPoly::from_real(&[0., 0., 0., 1.]);
        match ratio_region_check(&cube, &UniPoly::one(), Region::SlitPlane, 16, 1).unwrap() {
            RatioOutcome::Counterexample { sigma, value } => {
                assert!((sigma.arg() - std::f64::consts::FRAC_PI_3).abs() < 1e-6);
                assert!(value.re < 0.0);
            }
            RatioOutcome::Holds => panic!("expected a crossing"),
        }
    }

    #[test]
    fn ratio_rejects_complex_and_zero() {
        let c = UniPoly::new(vec![C64::new(1.0, 1.0), C64::new(1.0, 0.0)]);
        assert!(ratio_region_check(&c, &UniPoly::one(), Region::OpenRHP, 8, 0).is_err());
        assert!(ratio_region_check(&UniPoly::one(), &UniPoly::zero(), Region::OpenRHP, 8, 0).is_err());
    }

    #[test]
    fn hermite_biehler_examples() {
        let c = cfg();
        let f = pn("x1^3 + 6*x1^2 + 11*x1 + 6", 1).unwrap();
        assert!(hermite_biehler_check(&f, &c).unwrap().accepts());
        let g = pn("x1 - 1", 1).unwrap();
        let v = hermite_biehler_check(&g, &c).unwrap();
        assert!(!v.accepts());
        let h = pn("x1^2 + 1", 1).unwrap();
        let v = hermite_biehler_check(&h, &c).unwrap();
        assert!(matches!(v, HermiteBiehler::Degenerate { .. }));
        assert!(v.accepts());
    }

    #[test]
    fn chain_examples() {
        let c = cfg();
        let cube = pn("(1 + x1)^3", 1).unwrap();
        let chain = coefficient_chain_check(&cube, 0, &c).unwrap();
        assert_eq!(chain.len(), 3 + 2);
        assert!(chain.iter().all(|e| e.verdict.accepted()));
        let f = pn("(1 + x1)*(1 + x2)", 2).unwrap();
        let chain = coefficient_chain_check(&f, 1, &c).unwrap();
        assert_eq!(chain.len(), 1);
        assert!(chain[0].verdict.accepted());
    }

    #[test]
    fn exact_positive_path_matches_definition() {
        let f = m(&u(&[-1., -3.]));
        let g = m(&u(&[-2.]));
        let v = check_relation(&f, &g, Relation::PInterlace, &cfg()).unwrap();
        assert_eq!((v.holds, v.method), (Holds::Yes, Method::RootInterlacing));
        let v = check_relation(&g, &f, Relation::PInterlace, &cfg()).unwrap();
        assert_eq!(v.holds, Holds::No);
        let far = m(&u(&[-10., -11.]));
        let v = check_relation(&f, &far, Relation::PSim, &cfg()).unwrap();
        assert_eq!(v.holds, Holds::No);
        assert!(v.witness.is_some());
    }
}
