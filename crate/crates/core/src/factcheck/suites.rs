use rand::Rng;

use super::gen::{
    certified, certified_positive, certified_ppos, hurwitz1, interlaced_by, log_uniform, negative_points, p_interlacing_pair, ppos1,
    psim_pair, rhp_point,
};
use super::probes::{q1_trial, q2_trial};
use super::{uni, Ctx, Evidence, Outcome, SuiteInfo, SuiteKind, CLOSURE_TRIALS, CONSTRUCTION_TRIALS};
use crate::construct::{
    alpha_two_det, bezout, christoffel_darboux, coeff_hankel_det, det_pencil, pencil_coeff_det, random_coeff_pencil, random_pencil,
    wronskian, OrthoFamily, OrthoPreset, Tail, TailKind,
};
use crate::error::Result;
use crate::interlace::{check_relation, hermite_biehler_check, ratio_region_check, Holds, RatioOutcome, Region, Relation, RelationWitness};
use crate::poly::{AffineSubstitution, MultiPoly, UniPoly, VarRule, C64};
use crate::preservers::{apply_diffop, apply_mixed, exp_mixed};
use crate::stability::{decide, necessary_battery, verify_witness, StabilityVerdict, ARGUMENT_TOL};
use crate::uniroots::{all_roots, hurwitz_verdict, p_interlacing, sorted_real_roots};

const RATIO_GRID: usize = 48;

macro_rules! suite {
    ($id:expr, $kind:expr, $trials:expr, $body:expr, $stmt:expr) => {
        SuiteInfo {
            id: $id,
            statement: $stmt,
            kind: $kind,
            default_trials: $trials,
            body: $body,
        }
    };
}

use SuiteKind::{Fact, Probe};

pub(super) static REGISTRY: &[SuiteInfo] = &[
    suite!("lots-elem-1a", Fact, CLOSURE_TRIALS, lots_elem_1a, "alpha f is stable for alpha != 0"),
    suite!("lots-elem-1b", Fact, CLOSURE_TRIALS, lots_elem_1b, "f(a_1 x_1, ..., a_d x_d) is stable for a_j > 0"),
    suite!("lots-elem-1c", Fact, CLOSURE_TRIALS, lots_elem_1c, "f(x + sigma) is stable for Re sigma_j > 0"),
    suite!("lots-elem-1d", Fact, CLOSURE_TRIALS, lots_elem_1d, "f(sigma, x_2, ...) is stable for Re sigma > 0"),
    suite!("lots-elem-1e", Fact, CLOSURE_TRIALS, lots_elem_1e, "f(x_1 + y, x_2, ...) is stable"),
    suite!("lots-elem-1f", Fact, CLOSURE_TRIALS, lots_elem_1f, "f(x, x, x_3, ...) is stable"),
    suite!("lots-elem-2", Fact, CLOSURE_TRIALS, lots_elem_2, "f(i a, x_2, ...) is stable or zero for real a"),
    suite!("lots-elem-3", Fact, CLOSURE_TRIALS, lots_elem_3, "products and factors of stable polynomials are stable"),
    suite!("lots-elem-4", Fact, CLOSURE_TRIALS, lots_elem_4, "reversal in one variable preserves stability"),
    suite!("lots-elem-5", Fact, CLOSURE_TRIALS, lots_elem_5, "partial derivatives are stable or zero"),
    suite!("lots-elem-6", Fact, CLOSURE_TRIALS, lots_elem_6, "coefficients in one variable are stable or zero"),
    suite!("elem2-1", Fact, CLOSURE_TRIALS, elem2_1, "consecutive coefficients f_i <=H f_(i+1)"),
    suite!("elem2-2", Fact, CLOSURE_TRIALS, elem2_2, "f <=H d f / d x_j"),
    suite!("elem2-3", Fact, CLOSURE_TRIALS, elem2_3, "<=H rules: common factor, symmetry, sums"),
    suite!("elem2-4", Fact, CLOSURE_TRIALS, elem2_4, "stable f has even part <=H odd part"),
    suite!("homog-1", Fact, CONSTRUCTION_TRIALS, homog_1, "top-degree part of a stable polynomial is stable"),
    suite!("homog-3", Fact, CONSTRUCTION_TRIALS, homog_3, "top-degree coefficients share one argument"),
    suite!("real-sign", Fact, 100, real_sign, "real stable polynomials have coefficients of one sign"),
    suite!("bilinear-2x2", Fact, 100, bilinear_2x2, "a + bx + cy + dxy is stable for positive a, b, c, d"),
    suite!("det-pencil", Fact, CONSTRUCTION_TRIALS, det_pencil_suite, "determinantal pencils are stable"),
    suite!("ppos-counterexample", Fact, 1, ppos_counterexample, "x(x+3) + (1+i)(x+1)(x+2) has roots in quadrants 2 and 3"),
    suite!("exy-2", Fact, CONSTRUCTION_TRIALS, exy_2, "exp(d_x . d_y) preserves stability"),
    suite!("exy-3", Fact, CONSTRUCTION_TRIALS, exy_3, "f(d/dx) g is stable or zero for stable f, g"),
    suite!("fxD", Fact, CONSTRUCTION_TRIALS, fxd, "f(x, d/dy) preserves stability when f is stable"),
    suite!("poslace-1", Fact, CONSTRUCTION_TRIALS, poslace_1, "common interlacer gives ~P; partials of a positive polynomial are ~P"),
    suite!("sim-table-1", Fact, CONSTRUCTION_TRIALS, sim_table_1, "f ~H g iff r f ~H s g"),
    suite!("sim-table-2", Fact, CONSTRUCTION_TRIALS, sim_table_2, "f ~H g iff f + r g ~H g"),
    suite!("sim-table-3", Fact, CONSTRUCTION_TRIALS, sim_table_3, "for h in H: f ~H g iff f h ~H h g"),
    suite!("sim-table-4", Fact, CONSTRUCTION_TRIALS, sim_table_4, "f ~H g iff g ~H f"),
    suite!("sim-table-5", Fact, CONSTRUCTION_TRIALS, sim_table_5, "~P implies ~H"),
    suite!("sim-table-6", Fact, 10, sim_table_6, "~H does not imply ~P (x^2, 1)"),
    suite!("sim-table-7", Fact, CONSTRUCTION_TRIALS, sim_table_7, "<=P implies ~P"),
    suite!("sim-table-8", Fact, 10, sim_table_8, "~P does not imply <=P (x(x+3), (x+1)(x+2))"),
    suite!("sim-table-9", Fact, CONSTRUCTION_TRIALS, sim_table_9, "<=H with positive coefficients implies ~H"),
    suite!("sim-table-10", Fact, 10, sim_table_10, "~H does not imply <=H (x^2, 1)"),
    suite!("fact11-1", Fact, CONSTRUCTION_TRIALS, fact11_1, "coefficients f_k ~H f_(k+2)"),
    suite!("fact11-2", Fact, CONSTRUCTION_TRIALS, fact11_2, "constant term ~H coefficient of yz"),
    suite!("fact11-3", Fact, CONSTRUCTION_TRIALS, fact11_3, "f <=H g implies f ~H x g"),
    suite!("fact11-4", Fact, CONSTRUCTION_TRIALS, fact11_4, "f <=H g and f1 <=H g1 imply f f1 ~H g g1"),
    suite!("onevar-1", Fact, CONSTRUCTION_TRIALS, onevar_1, "f ~H g iff f/g avoids the negative axis on Q1"),
    suite!("onevar-2", Fact, CONSTRUCTION_TRIALS, onevar_2, "f <=H g iff f/g maps Q1 into the closed right half plane"),
    suite!("onevar-3", Fact, CONSTRUCTION_TRIALS, onevar_3, "f <=P g iff f/g maps Q1 into Q1"),
    suite!("onevar-4", Fact, CONSTRUCTION_TRIALS, onevar_4, "f ~P g iff f/g maps Q1 into the right half plane"),
    suite!("onevar-5", Fact, CONSTRUCTION_TRIALS, onevar_5, "~P implies <=H in one variable"),
    suite!("posinterlace-1", Fact, CONSTRUCTION_TRIALS, posinterlace_1, "f ~P f_i for all i implies f ~P sum f_i"),
    suite!("posinterlace-2", Fact, CONSTRUCTION_TRIALS, posinterlace_2, "f <=P f_i, g <=P g_i imply f g ~H sum f_i g_i"),
    suite!("posinterlace-3", Fact, CONSTRUCTION_TRIALS, posinterlace_3, "f <=P g implies f g' - f' g is stable"),
    suite!("posinterlace-4", Fact, CONSTRUCTION_TRIALS, posinterlace_4, "f <=P g implies the Bezoutian is stable and f(x) f(y) ~H B"),
    suite!("christoffel", Fact, 24, christoffel, "sum of squares of orthonormal polynomials is stable"),
    suite!("final-2x2-1", Fact, CONSTRUCTION_TRIALS, final_2x2_1, "f_0^2 ~H f_1^2 - alpha f_0 f_2 for 0 < alpha < 2"),
    suite!("final-2x2-2", Fact, CONSTRUCTION_TRIALS, final_2x2_2, "f_k f_(k+2) - f_(k+1)^2 is stable"),
    suite!("final-2x2-3", Fact, CONSTRUCTION_TRIALS, final_2x2_3, "pencil coefficient determinant f k - g h is stable"),
    suite!("q1-probe", Probe, CONSTRUCTION_TRIALS, q1_trial, "do ~P / ~H pairs have a common interlacer?"),
    suite!("q2-probe", Probe, CONSTRUCTION_TRIALS, q2_trial, "is the double-coefficient determinant of a positive polynomial stable?"),
];

fn stable_or(ctx: &Ctx, input: &MultiPoly, others: &[MultiPoly], out: &MultiPoly, allow_zero: bool, what: &str) -> Result<Outcome> {
    if out.is_zero() {
        return Ok(if allow_zero {
            Outcome::Bucket("zero".into())
        } else {
            Outcome::refuted(ctx.trial, input, others, Some(out), None, format!("{what}: output vanishes"))
        });
    }
    match decide(out, &ctx.cfg, None)? {
        StabilityVerdict::Unstable { witness, value, reason } => {
            let evidence = match witness {
                Some(point) => Evidence::Zero { point, value },
                None => Evidence::Necessary { reason: reason.clone() },
            };
            Ok(Outcome::refuted(ctx.trial, input, others, Some(out), Some(evidence), format!("{what}: {reason}")))
        }
        _ => Ok(Outcome::Pass),
    }
}

fn stable(ctx: &Ctx, input: &MultiPoly, out: &MultiPoly, what: &str) -> Result<Outcome> {
    stable_or(ctx, input, &[], out, false, what)
}

fn stable_or_zero(ctx: &Ctx, input: &MultiPoly, out: &MultiPoly, what: &str) -> Result<Outcome> {
    stable_or(ctx, input, &[], out, true, what)
}

fn uni_stable(ctx: &Ctx, input: &MultiPoly, others: &[MultiPoly], p: &UniPoly, what: &str) -> Result<Outcome> {
    if p.is_zero() {
        return Ok(Outcome::refuted(ctx.trial, input, others, Some(&uni(p)), None, format!("{what}: vanishes")));
    }
    let v = hurwitz_verdict(p, 1e-9)?;
    if v.stable {
        return Ok(Outcome::Pass);
    }
    let roots = all_roots(p, 1e-9)?.roots;
    Ok(Outcome::refuted(
        ctx.trial,
        input,
        others,
        Some(&uni(p)),
        Some(Evidence::Roots { roots }),
        format!("{what}: root with real part {:.3e}", -v.margin),
    ))
}

fn expect_rel(ctx: &Ctx, f: &MultiPoly, g: &MultiPoly, rel: Relation, others: &[MultiPoly], what: &str) -> Result<Outcome> {
    let v = check_relation(f, g, rel, &ctx.rel_cfg)?;
    if v.accepted() {
        return Ok(Outcome::Pass);
    }
    let mut all = vec![g.clone()];
    all.extend_from_slice(others);
    Ok(Outcome::refuted(ctx.trial, f, &all, None, Some(Evidence::Relation { verdict: v }), what.to_string()))
}

fn nvars(ctx: &mut Ctx, lo: usize, hi: usize) -> usize {
    ctx.rng.gen_range(lo..=hi)
}

// ---- closure under substitutions and elementary operations ----

fn lots_elem_1a(ctx: &mut Ctx) -> Result<Outcome> {
    let n = nvars(ctx, 1, 3);
    let f = certified(&mut ctx.rng, n)?;
    let alpha = C64::from_polar(log_uniform(&mut ctx.rng, 1e-2, 1e2), ctx.rng.gen_range(0.0..std::f64::consts::TAU));
    stable(ctx, &f, &f.scale(alpha), "alpha f")
}

fn lots_elem_1b(ctx: &mut Ctx) -> Result<Outcome> {
    let n = nvars(ctx, 1, 3);
    let f = certified(&mut ctx.rng, n)?;
    let a: Vec<f64> = (0..n).map(|_| log_uniform(&mut ctx.rng, 0.1, 10.0)).collect();
    stable(ctx, &f, &f.scale_vars(&a)?, "scaled variables")
}

fn lots_elem_1c(ctx: &mut Ctx) -> Result<Outcome> {
    let n = nvars(ctx, 1, 3);
    let f = certified(&mut ctx.rng, n)?;
    let s: Vec<C64> = (0..n)
        .map(|_| C64::new(log_uniform(&mut ctx.rng, 1e-2, 2.0), ctx.rng.gen_range(-2.0..2.0)))
        .collect();
    stable(ctx, &f, &f.shift(&s)?, "shifted variables")
}

fn substitute(f: &MultiPoly, j: usize, rule: VarRule) -> Result<MultiPoly> {
    f.affine_substitute(&AffineSubstitution::identity(f.nvars()).with(j, rule))
}

fn lots_elem_1d(ctx: &mut Ctx) -> Result<Outcome> {
    let n = nvars(ctx, 2, 3);
    let f = certified(&mut ctx.rng, n)?;
    let j = ctx.rng.gen_range(0..n);
    let sigma = rhp_point(&mut ctx.rng);
    stable(ctx, &f, &substitute(&f, j, VarRule::Fix(sigma))?, "variable fixed in the right half plane")
}

fn lots_elem_1e(ctx: &mut Ctx) -> Result<Outcome> {
    let n = nvars(ctx, 1, 3);
    let f = certified(&mut ctx.rng, n)?;
    let j = ctx.rng.gen_range(0..n);
    stable(ctx, &f, &substitute(&f, j, VarRule::SplitIntoSum)?, "variable split into a sum")
}

fn lots_elem_1f(ctx: &mut Ctx) -> Result<Outcome> {
    let n = nvars(ctx, 2, 3);
    let f = certified(&mut ctx.rng, n)?;
    let j = ctx.rng.gen_range(0..n);
    let k = (j + ctx.rng.gen_range(1..n)) % n;
    stable(ctx, &f, &substitute(&f, j, VarRule::RenameTo(k))?, "two variables identified")
}

fn lots_elem_2(ctx: &mut Ctx) -> Result<Outcome> {
    let n = nvars(ctx, 2, 3);
    let f = certified(&mut ctx.rng, n)?;
    let j = ctx.rng.gen_range(0..n);
    let a = ctx.rng.gen_range(-3.0..3.0);
    stable_or_zero(ctx, &f, &substitute(&f, j, VarRule::FixImaginary(a))?, "variable fixed on the imaginary axis")
}

fn lots_elem_3(ctx: &mut Ctx) -> Result<Outcome> {
    let n = nvars(ctx, 1, 3);
    let f = certified(&mut ctx.rng, n)?;
    if ctx.trial.is_multiple_of(2) {
        let g = certified(&mut ctx.rng, n)?;
        let p = f.mul(&g)?;
        return stable_or(ctx, &f, &[g], &p, false, "product");
    }
    // Factor of the diagonal restriction, read off its roots.
    let u = f.diagonal();
    if u.degree().unwrap_or(0) < 2 {
        return Ok(Outcome::skip("diagonal of degree below 2"));
    }
    let roots = all_roots(&u, 1e-9)?.roots;
    let mut keep: Vec<C64> = roots.iter().copied().filter(|_| ctx.rng.gen_bool(0.5)).collect();
    if keep.is_empty() {
        keep.push(roots[0]);
    }
    if keep.len() == roots.len() {
        keep.pop();
    }
    let factor = UniPoly::from_roots(&keep);
    uni_stable(ctx, &f, &[uni(&u)], &factor, "factor of a stable polynomial")
}

fn lots_elem_4(ctx: &mut Ctx) -> Result<Outcome> {
    let n = nvars(ctx, 1, 3);
    let f = certified(&mut ctx.rng, n)?;
    let j = ctx.rng.gen_range(0..n);
    stable(ctx, &f, &f.reverse_in_var(j)?, "reversal")
}

fn lots_elem_5(ctx: &mut Ctx) -> Result<Outcome> {
    let n = nvars(ctx, 1, 3);
    let f = certified(&mut ctx.rng, n)?;
    let j = ctx.rng.gen_range(0..n);
    stable_or_zero(ctx, &f, &f.partial_derivative(j)?, "partial derivative")
}

fn lots_elem_6(ctx: &mut Ctx) -> Result<Outcome> {
    let n = nvars(ctx, 2, 3);
    let f = certified(&mut ctx.rng, n)?;
    let j = ctx.rng.gen_range(0..n);
    for s in f.slices(j)? {
        let o = stable_or_zero(ctx, &f, &s, "coefficient slice")?;
        if matches!(o, Outcome::Refuted(_)) {
            return Ok(o);
        }
    }
    Ok(Outcome::Pass)
}

// ---- interlacing facts over the complex stable class ----

fn elem2_1(ctx: &mut Ctx) -> Result<Outcome> {
    let n = nvars(ctx, 2, 3);
    let f = certified(&mut ctx.rng, n)?;
    let j = ctx.rng.gen_range(0..n);
    let slices = f.slices(j)?;
    for w in slices.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let o = match (a.is_zero(), b.is_zero()) {
            (true, true) => continue,
            (true, false) => stable_or(ctx, &f, &[], b, false, "f_i + y 0 with f_i = 0")?,
            (false, true) => stable_or(ctx, &f, &[], a, false, "f_i + y 0")?,
            (false, false) => expect_rel(ctx, a, b, Relation::HInterlace, std::slice::from_ref(&f), "consecutive coefficients")?,
        };
        if matches!(o, Outcome::Refuted(_)) {
            return Ok(o);
        }
    }
    Ok(Outcome::Pass)
}

fn elem2_2(ctx: &mut Ctx) -> Result<Outcome> {
    let n = nvars(ctx, 1, 3);
    let f = certified(&mut ctx.rng, n)?;
    let support = f.support_vars();
    if support.is_empty() {
        return Ok(Outcome::skip("constant input"));
    }
    let j = support[ctx.rng.gen_range(0..support.len())];
    let df = f.partial_derivative(j)?;
    expect_rel(ctx, &f, &df, Relation::HInterlace, &[], "f <=H derivative")
}

/// `(f_00, f_10, f_01, f_20)` of a certified polynomial in `d + 2`
/// variables, sliced along the last two.
fn double_slices(ctx: &mut Ctx, positive: bool) -> Result<Option<(MultiPoly, [MultiPoly; 4])>> {
    let d = nvars(ctx, 1, 2);
    let big = if positive {
        certified_positive(&mut ctx.rng, d + 2)?
    } else {
        certified(&mut ctx.rng, d + 2)?
    };
    let (y, z) = (d, d + 1);
    let z0 = big.coefficient_slice(z, 0)?;
    let z1 = big.coefficient_slice(z, 1)?;
    let parts = [
        z0.coefficient_slice(y, 0)?,
        z0.coefficient_slice(y, 1)?,
        z1.coefficient_slice(y, 0)?,
        z0.coefficient_slice(y, 2)?,
    ];
    Ok(Some((big, parts)))
}

fn elem2_3(ctx: &mut Ctx) -> Result<Outcome> {
    let Some((big, [f00, f10, f01, f20])) = double_slices(ctx, false)? else {
        return Ok(Outcome::skip("degenerate"));
    };
    let rule = ctx.trial % 5;
    let need = |ps: &[&MultiPoly]| ps.iter().all(|p| !p.is_zero());
    let rel = Relation::HInterlace;
    match rule {
        // fh <=H gh when f <=H g and h is stable
        0 => {
            if !need(&[&f00, &f10]) {
                return Ok(Outcome::skip("zero coefficient"));
            }
            let h = certified(&mut ctx.rng, f00.nvars())?;
            expect_rel(ctx, &f00.mul(&h)?, &f10.mul(&h)?, rel, &[big, h], "common stable factor")
        }
        // symmetry
        1 => {
            if !need(&[&f00, &f10]) {
                return Ok(Outcome::skip("zero coefficient"));
            }
            expect_rel(ctx, &f10, &f00, rel, &[big], "symmetry")
        }
        // f <=H g, f <=H h  =>  f <=H g + h
        2 => {
            if !need(&[&f00, &f10, &f01]) {
                return Ok(Outcome::skip("zero coefficient"));
            }
            let s = f10.add(&f01)?;
            if s.is_zero() {
                return Ok(Outcome::skip("cancelling sum"));
            }
            expect_rel(ctx, &f00, &s, rel, &[big], "sum on the right")
        }
        // f <=H g, h <=H g  =>  f + h <=H g
        3 => {
            if !need(&[&f00, &f10, &f01]) {
                return Ok(Outcome::skip("zero coefficient"));
            }
            let s = f10.add(&f01)?;
            if s.is_zero() {
                return Ok(Outcome::skip("cancelling sum"));
            }
            expect_rel(ctx, &s, &f00, rel, &[big], "sum on the left")
        }
        // f <=H g <=H h  =>  f + h <=H g
        _ => {
            if !need(&[&f00, &f10, &f20]) {
                return Ok(Outcome::skip("zero coefficient"));
            }
            let s = f00.add(&f20)?;
            if s.is_zero() {
                return Ok(Outcome::skip("cancelling sum"));
            }
            expect_rel(ctx, &s, &f10, rel, &[big], "chain")
        }
    }
}

fn elem2_4(ctx: &mut Ctx) -> Result<Outcome> {
    let n = nvars(ctx, 1, 3);
    let f = certified(&mut ctx.rng, n)?;
    let hb = hermite_biehler_check(&f, &ctx.rel_cfg)?;
    if hb.accepts() {
        return Ok(Outcome::Pass);
    }
    let evidence = serde_json::to_string(&hb).unwrap_or_default();
    Ok(Outcome::refuted(ctx.trial, &f, &[], None, Some(Evidence::Note { text: evidence }), "even part not <=H odd part"))
}

// ---- homogeneous part, signs, small constructions ----

fn homog_1(ctx: &mut Ctx) -> Result<Outcome> {
    let n = nvars(ctx, 1, 3);
    let f = certified(&mut ctx.rng, n)?;
    stable(ctx, &f, &f.top_homogeneous()?, "top-degree part")
}

fn homog_3(ctx: &mut Ctx) -> Result<Outcome> {
    let n = nvars(ctx, 1, 3);
    let f = certified(&mut ctx.rng, n)?;
    let top = f.top_homogeneous()?;
    let scale = top.coefficient_scale();
    let reference = top.terms().map(|(_, c)| c).max_by(|a, b| a.norm().total_cmp(&b.norm())).expect("non-zero");
    for (_, c) in top.terms() {
        let m = c.norm();
        if m <= 1e-13 * scale {
            continue;
        }
        let angle = (c * reference.conj()).arg().abs();
        if angle > ARGUMENT_TOL + 1e-13 * scale / m {
            return Ok(Outcome::refuted(
                ctx.trial,
                &f,
                &[],
                Some(&top),
                Some(Evidence::Mismatch { expected: 0.0, got: angle }),
                "top-degree arguments differ",
            ));
        }
    }
    Ok(Outcome::Pass)
}

fn real_sign(ctx: &mut Ctx) -> Result<Outcome> {
    let n = nvars(ctx, 1, 3);
    let mut f = certified_positive(&mut ctx.rng, n)?;
    for _ in 0..ctx.rng.gen_range(0..=2) {
        let j = ctx.rng.gen_range(0..n);
        let next = match ctx.rng.gen_range(0..4) {
            0 => f.partial_derivative(j)?,
            1 => f.reverse_in_var(j)?,
            2 => substitute(&f, j, VarRule::Shift(C64::new(log_uniform(&mut ctx.rng, 0.05, 3.0), 0.0)))?,
            _ => substitute(&f, j, VarRule::Scale(log_uniform(&mut ctx.rng, 0.1, 10.0)))?,
        };
        if !next.is_zero() {
            f = next;
        }
    }
    let f = f.scale_real(if ctx.rng.gen_bool(0.5) { -1.0 } else { 1.0 } * log_uniform(&mut ctx.rng, 0.1, 10.0));
    let scale = f.coefficient_scale();
    let pos = f.terms().any(|(_, c)| c.re > 1e-13 * scale);
    let neg = f.terms().any(|(_, c)| c.re < -1e-13 * scale);
    if pos && neg {
        return Ok(Outcome::refuted(ctx.trial, &f, &[], None, None, "coefficients of both signs"));
    }
    Ok(Outcome::Pass)
}

fn bilinear_2x2(ctx: &mut Ctx) -> Result<Outcome> {
    let rng = &mut ctx.rng;
    let [a, b, c, d] = [(); 4].map(|_| log_uniform(rng, 1e-2, 1e2));
    let r = log_uniform(rng, 1e-3, 1e2);
    let s = rng.gen_range(-1e2..1e2);
    let f = MultiPoly::from_real_terms(2, [(vec![0, 0], a), (vec![1, 0], b), (vec![0, 1], c), (vec![1, 1], d)])?;
    let x = C64::new(r, s);
    let y = -(C64::new(a, 0.0) + x * b) / (C64::new(c, 0.0) + x * d);
    let closed = -(a * c + b * c * r + a * d * r + b * d * r * r + b * d * s * s) / ((c + d * r).powi(2) + d * d * s * s);
    let rel = (closed - y.re).abs() / closed.abs().max(f64::MIN_POSITIVE);
    if rel >= 1e-10 {
        return Ok(Outcome::refuted(
            ctx.trial,
            &f,
            &[],
            None,
            Some(Evidence::Mismatch {
                expected: closed,
                got: y.re,
            }),
            "closed form disagrees with the solved root",
        ));
    }
    if !(closed < 0.0) {
        return Ok(Outcome::refuted(
            ctx.trial,
            &f,
            &[],
            None,
            Some(Evidence::Zero {
                point: vec![x, y],
                value: None,
            }),
            "Re y is not negative",
        ));
    }
    Ok(Outcome::Pass)
}

fn det_pencil_suite(ctx: &mut Ctx) -> Result<Outcome> {
    let n = nvars(ctx, 1, 4);
    let d = nvars(ctx, 1, 3);
    let tail = [TailKind::None, TailKind::Skew, TailKind::ImagSym][ctx.trial % 3];
    let spec = random_pencil(n, d, tail, ctx.rng.gen())?;
    let (p, kind) = det_pencil(&spec)?;
    if !necessary_battery(&p).passed() {
        return Ok(Outcome::refuted(ctx.trial, &p, &[], None, None, "necessary conditions fail"));
    }
    if !matches!(spec.tail, Tail::ImagSym { .. }) {
        let scale = p.coefficient_scale();
        if p.terms().any(|(_, c)| c.re <= 0.0 || c.im.abs() > 1e-12 * scale) {
            return Ok(Outcome::refuted(ctx.trial, &p, &[], None, None, "real-tail pencil has a non-positive coefficient"));
        }
    }
    let o = stable(ctx, &p, &p, "pencil")?;
    Ok(match o {
        Outcome::Pass => Outcome::Bucket(kind.name().to_string()),
        other => other,
    })
}

fn ppos_counterexample(ctx: &mut Ctx) -> Result<Outcome> {
    let f = crate::poly::parse_text_with_nvars("x1*(x1+3) + x2*(x1+1)*(x1+2)", 2)?;
    let u = f.restrict_to_var(0, &[C64::new(0.0, 0.0), C64::new(1.0, 1.0)])?;
    let roots = all_roots(&u, 1e-12)?.roots;
    let q2 = roots.iter().filter(|z| z.re < 0.0 && z.im > 0.0).count();
    let q3 = roots.iter().filter(|z| z.re < 0.0 && z.im < 0.0).count();
    if roots.len() != 2 || q2 != 1 || q3 != 1 {
        return Ok(Outcome::refuted(ctx.trial, &f, &[], None, Some(Evidence::Roots { roots }), "roots not in quadrants 2 and 3"));
    }
    let g = crate::poly::parse_text_with_nvars("(x1+1)*(x1+2)", 1)?;
    let fx = crate::poly::parse_text_with_nvars("x1*(x1+3)", 1)?;
    let v = check_relation(&fx, &g, Relation::PInterlace, &ctx.rel_cfg)?;
    if v.holds != Holds::No {
        return Ok(Outcome::refuted(ctx.trial, &fx, &[g], None, Some(Evidence::Relation { verdict: v }), "f + y g accepted as positive"));
    }
    Ok(Outcome::Pass)
}

// ---- differential operators ----

fn exy_2(ctx: &mut Ctx) -> Result<Outcome> {
    let d = nvars(ctx, 1, 2);
    let f = certified(&mut ctx.rng, 2 * d)?;
    stable(ctx, &f, &exp_mixed(&f)?, "exp(d_x . d_y) f")
}

fn exy_3(ctx: &mut Ctx) -> Result<Outcome> {
    let n = nvars(ctx, 1, 3);
    let f = certified(&mut ctx.rng, n)?;
    let g = certified(&mut ctx.rng, n)?;
    let out = apply_diffop(&f, &g)?;
    stable_or(ctx, &f, &[g], &out, true, "f(d/dx) g")
}

fn negate_var(f: &MultiPoly, j: usize) -> MultiPoly {
    f.map_coefficients(|e, c| if e[j] % 2 == 1 { -c } else { c })
}

fn fxd(ctx: &mut Ctx) -> Result<Outcome> {
    let d = nvars(ctx, 1, 2);
    let fsym = certified(&mut ctx.rng, 2 * d)?;
    if ctx.trial % 4 == 3 {
        return fxd_converse(ctx, &fsym, d);
    }
    let g = certified(&mut ctx.rng, d)?;
    let out = apply_mixed(&fsym, &g)?;
    let o = stable_or(ctx, &fsym, std::slice::from_ref(&g), &out, true, "f(x, d/dy) g")?;
    if !matches!(o, Outcome::Pass | Outcome::Bucket(_)) || out.is_zero() {
        return Ok(o);
    }
    // Identify y_j with x_j.
    let rules: Vec<VarRule> = (0..2 * d).map(|k| if k < d { VarRule::Keep } else { VarRule::RenameTo(k - d) }).collect();
    let diag = out.affine_substitute(&AffineSubstitution::new(rules))?;
    stable_or(ctx, &fsym, &[g], &diag, true, "f(x, d/dx) g")
}

/// Looks for a stable `g` whose image under an unstable symbol is refuted.
fn fxd_converse(ctx: &mut Ctx, base: &MultiPoly, d: usize) -> Result<Outcome> {
    let fsym = negate_var(base, 0);
    if !decide(&fsym, &ctx.cfg, None)?.is_unstable() {
        return Ok(Outcome::Observed {
            bucket: "converse: symbol not refuted".into(),
            observation: None,
        });
    }
    for _ in 0..4 {
        let g = certified(&mut ctx.rng, d)?;
        let out = apply_mixed(&fsym, &g)?;
        if out.is_zero() {
            continue;
        }
        if let StabilityVerdict::Unstable { witness: Some(w), value, .. } = decide(&out, &ctx.cfg, None)? {
            if !verify_witness(&out, &w) {
                return Ok(Outcome::refuted(ctx.trial, &fsym, &[g], Some(&out), None, "converse witness failed verification"));
            }
            return Ok(Outcome::Observed {
                bucket: "converse: witness found".into(),
                observation: Some(Box::new(super::Observation {
                    trial: ctx.trial,
                    label: "unstable symbol maps a stable g to an unstable image".into(),
                    inputs: vec![fsym, g, out],
                    evidence: Some(Evidence::Zero { point: w, value }),
                })),
            });
        }
    }
    Ok(Outcome::Observed {
        bucket: "converse: no witness in 4 attempts".into(),
        observation: None,
    })
}

// ---- positive interlacing ----

fn poslace_1(ctx: &mut Ctx) -> Result<Outcome> {
    if ctx.trial.is_multiple_of(2) {
        let deg = ctx.rng.gen_range(1..=5);
        let h = loop {
            let h = negative_points(&mut ctx.rng, deg);
            if h.len() == deg {
                break h;
            }
        };
        let f = interlaced_by(&mut ctx.rng, &h);
        let g = interlaced_by(&mut ctx.rng, &h);
        let hp = UniPoly::from_real_roots(&h);
        return expect_rel(ctx, &uni(&f), &uni(&g), Relation::PSim, &[uni(&hp)], "common interlacer but not ~P");
    }
    let n = nvars(ctx, 2, 3);
    let f = certified_ppos(&mut ctx.rng, n, 2)?;
    let i = ctx.rng.gen_range(0..n);
    let j = (i + ctx.rng.gen_range(1..n)) % n;
    let (a, b) = (f.partial_derivative(i)?, f.partial_derivative(j)?);
    if a.is_zero() || b.is_zero() {
        return Ok(Outcome::skip("vanishing partial"));
    }
    expect_rel(ctx, &a, &b, Relation::PSim, &[f], "partials not ~P")
}

/// A `~H` pair with positive coefficients: consecutive coefficients of a
/// positive stable polynomial, or `(f, f')`.
fn hsim_pair(ctx: &mut Ctx) -> Result<Option<(MultiPoly, MultiPoly)>> {
    if ctx.rng.gen_bool(0.5) {
        let deg = ctx.rng.gen_range(1..=5);
        let f = hurwitz1(&mut ctx.rng, deg);
        return Ok(Some((uni(&f), uni(&f.derivative()))));
    }
    let d = nvars(ctx, 1, 2);
    let big = certified_positive(&mut ctx.rng, d + 1)?;
    let slices = big.slices(d)?;
    if slices.len() < 2 {
        return Ok(None);
    }
    let k = ctx.rng.gen_range(0..slices.len() - 1);
    let (a, b) = (slices[k].clone(), slices[k + 1].clone());
    Ok((!a.is_zero() && !b.is_zero()).then_some((a, b)))
}

fn random_h1_pair(ctx: &mut Ctx) -> (MultiPoly, MultiPoly) {
    let df: usize = ctx.rng.gen_range(1..=4);
    let dg = ctx.rng.gen_range(df.saturating_sub(1).max(1)..=df + 1);
    (uni(&hurwitz1(&mut ctx.rng, df)), uni(&hurwitz1(&mut ctx.rng, dg)))
}

/// Checks `premise => conclusion` on a pair; a rejected premise is a skip.
fn implication(
    ctx: &mut Ctx,
    premise: (&MultiPoly, &MultiPoly),
    conclusion: (&MultiPoly, &MultiPoly),
    rel: Relation,
    what: &str,
) -> Result<Outcome> {
    let p = check_relation(premise.0, premise.1, rel, &ctx.rel_cfg)?;
    if !p.accepted() {
        return Ok(Outcome::Bucket("premise fails".into()));
    }
    let o = expect_rel(ctx, conclusion.0, conclusion.1, rel, &[premise.0.clone(), premise.1.clone()], what)?;
    Ok(match o {
        Outcome::Pass => Outcome::Bucket("premise holds".into()),
        other => other,
    })
}

fn sim_table_1(ctx: &mut Ctx) -> Result<Outcome> {
    let (r, s) = (log_uniform(&mut ctx.rng, 0.1, 10.0), log_uniform(&mut ctx.rng, 0.1, 10.0));
    if ctx.trial.is_multiple_of(2) {
        let Some((f, g)) = hsim_pair(ctx)? else {
            return Ok(Outcome::skip("degenerate"));
        };
        return expect_rel(ctx, &f.scale_real(r), &g.scale_real(s), Relation::HSim, std::slice::from_ref(&f), "r f ~H s g");
    }
    let (f, g) = random_h1_pair(ctx);
    let (rf, sg) = (f.scale_real(r), g.scale_real(s));
    implication(ctx, (&rf, &sg), (&f, &g), Relation::HSim, "r f ~H s g but not f ~H g")
}

fn sim_table_2(ctx: &mut Ctx) -> Result<Outcome> {
    let r = log_uniform(&mut ctx.rng, 0.1, 10.0);
    if ctx.trial.is_multiple_of(2) {
        let Some((f, g)) = hsim_pair(ctx)? else {
            return Ok(Outcome::skip("degenerate"));
        };
        let frg = f.add(&g.scale_real(r))?;
        return expect_rel(ctx, &frg, &g, Relation::HSim, std::slice::from_ref(&f), "f + r g ~H g");
    }
    // Trial 1 is a known pair where f + g ~H g holds and f ~H g fails.
    let (f, g, r) = if ctx.trial == 1 {
        let f = UniPoly::from_real(&[3., 2., 1., 1.]);
        (uni(&f), uni(&UniPoly::from_real(&[0., 0., 1.])), 1.0)
    } else {
        let (f, g) = random_h1_pair(ctx);
        (f, g, r)
    };
    let frg = f.add(&g.scale_real(r))?;
    implication(ctx, (&frg, &g), (&f, &g), Relation::HSim, "f + r g ~H g but not f ~H g")
}

fn sim_table_3(ctx: &mut Ctx) -> Result<Outcome> {
    let deg = ctx.rng.gen_range(1..=3);
    let h1 = hurwitz1(&mut ctx.rng, deg);
    if ctx.trial.is_multiple_of(2) {
        let Some((f, g)) = hsim_pair(ctx)? else {
            return Ok(Outcome::skip("degenerate"));
        };
        let h = MultiPoly::from_univariate(&h1, f.nvars(), 0)?;
        return expect_rel(ctx, &f.mul(&h)?, &h.mul(&g)?, Relation::HSim, &[f.clone(), h], "f h ~H h g");
    }
    let (f, g) = random_h1_pair(ctx);
    let h = uni(&h1);
    let (fh, hg) = (f.mul(&h)?, h.mul(&g)?);
    implication(ctx, (&fh, &hg), (&f, &g), Relation::HSim, "f h ~H h g but not f ~H g")
}

fn sim_table_4(ctx: &mut Ctx) -> Result<Outcome> {
    if ctx.trial.is_multiple_of(2) {
        let Some((f, g)) = hsim_pair(ctx)? else {
            return Ok(Outcome::skip("degenerate"));
        };
        return expect_rel(ctx, &g, &f, Relation::HSim, &[], "g ~H f");
    }
    let (f, g) = random_h1_pair(ctx);
    let a = check_relation(&f, &g, Relation::HSim, &ctx.rel_cfg)?;
    let b = check_relation(&g, &f, Relation::HSim, &ctx.rel_cfg)?;
    if a.accepted() == b.accepted() {
        return Ok(Outcome::Bucket(if a.accepted() { "both hold" } else { "both fail" }.into()));
    }
    // Transport the witness: f + r g = 0 iff g + f / r = 0.
    let (no, p, q) = if a.accepted() { (&b, &g, &f) } else { (&a, &f, &g) };
    if let Some(RelationWitness::RhpZero { point, r: Some(r) }) = &no.witness {
        let swapped = q.add(&p.scale_real(1.0 / r))?;
        if verify_witness(&swapped, point) {
            return Ok(Outcome::Bucket("sampling miss, witness transported".into()));
        }
    }
    Ok(Outcome::refuted(ctx.trial, &f, &[g], None, Some(Evidence::Relation { verdict: no.clone() }), "asymmetric ~H"))
}

fn sim_table_5(ctx: &mut Ctx) -> Result<Outcome> {
    let deg = ctx.rng.gen_range(1..=5);
    let (f, g) = psim_pair(&mut ctx.rng, deg);
    let (f, g) = (uni(&f), uni(&g));
    if !check_relation(&f, &g, Relation::PSim, &ctx.rel_cfg)?.accepted() {
        return Ok(Outcome::refuted(ctx.trial, &f, &[g], None, None, "constructed ~P pair rejected"));
    }
    expect_rel(ctx, &f, &g, Relation::HSim, &[], "~P but not ~H")
}

fn non_implication(ctx: &mut Ctx, f: &MultiPoly, g: &MultiPoly, holds: Relation, fails: Relation) -> Result<Outcome> {
    let a = check_relation(f, g, holds, &ctx.rel_cfg)?;
    let b = check_relation(f, g, fails, &ctx.rel_cfg)?;
    if !a.accepted() {
        return Ok(Outcome::refuted(ctx.trial, f, std::slice::from_ref(g), None, Some(Evidence::Relation { verdict: a }), format!("{holds} expected to hold")));
    }
    if b.holds != Holds::No {
        return Ok(Outcome::refuted(ctx.trial, f, std::slice::from_ref(g), None, Some(Evidence::Relation { verdict: b }), format!("{fails} expected to fail")));
    }
    Ok(Outcome::Pass)
}

/// `a x^2 + c` and `b`; the first trial uses `x^2` and `1`.
fn square_family(ctx: &mut Ctx) -> (MultiPoly, MultiPoly) {
    if ctx.trial == 0 {
        return (uni(&UniPoly::from_real(&[0., 0., 1.])), uni(&UniPoly::one()));
    }
    let (a, b) = (log_uniform(&mut ctx.rng, 0.1, 10.0), log_uniform(&mut ctx.rng, 0.1, 10.0));
    let c = if ctx.rng.gen_bool(0.5) { 0.0 } else { log_uniform(&mut ctx.rng, 0.01, 10.0) };
    (uni(&UniPoly::from_real(&[c, 0., a])), uni(&UniPoly::constant(C64::new(b, 0.0))))
}

fn sim_table_6(ctx: &mut Ctx) -> Result<Outcome> {
    let (f, g) = square_family(ctx);
    non_implication(ctx, &f, &g, Relation::HSim, Relation::PSim)
}

fn sim_table_7(ctx: &mut Ctx) -> Result<Outcome> {
    let deg = ctx.rng.gen_range(1..=5);
    let (f, g) = p_interlacing_pair(&mut ctx.rng, deg);
    expect_rel(ctx, &uni(&f), &uni(&g), Relation::PSim, &[], "<=P but not ~P")
}

fn sim_table_8(ctx: &mut Ctx) -> Result<Outcome> {
    let lambda = if ctx.trial == 0 { 1.0 } else { log_uniform(&mut ctx.rng, 0.1, 10.0) };
    let f = UniPoly::from_real(&[0., 3., 1.]);
    let g = UniPoly::from_real(&[2., 3., 1.]);
    let s = UniPoly::from_real(&[0., lambda]);
    let (f, g) = (uni(&f.compose(&s)), uni(&g.compose(&s)));
    non_implication(ctx, &f, &g, Relation::PSim, Relation::PInterlace)
}

fn sim_table_9(ctx: &mut Ctx) -> Result<Outcome> {
    let Some((f, g)) = hsim_pair(ctx)? else {
        return Ok(Outcome::skip("degenerate"));
    };
    if !check_relation(&f, &g, Relation::HInterlace, &ctx.rel_cfg)?.accepted() {
        return Ok(Outcome::Bucket("premise fails".into()));
    }
    expect_rel(ctx, &f, &g, Relation::HSim, &[], "<=H but not ~H")
}

fn sim_table_10(ctx: &mut Ctx) -> Result<Outcome> {
    let (f, g) = square_family(ctx);
    non_implication(ctx, &f, &g, Relation::HSim, Relation::HInterlace)
}

fn fact11_1(ctx: &mut Ctx) -> Result<Outcome> {
    let n = nvars(ctx, 2, 3);
    let big = certified_positive(&mut ctx.rng, n)?;
    let j = ctx.rng.gen_range(0..n);
    let slices = big.slices(j)?;
    if slices.len() < 3 {
        return Ok(Outcome::skip("degree below 2 in the chosen variable"));
    }
    let k = ctx.rng.gen_range(0..slices.len() - 2);
    let (a, b) = (&slices[k], &slices[k + 2]);
    if a.is_zero() || b.is_zero() {
        return Ok(Outcome::skip("zero coefficient"));
    }
    expect_rel(ctx, a, b, Relation::HSim, std::slice::from_ref(&big), "f_k not ~H f_(k+2)")
}

fn fact11_2(ctx: &mut Ctx) -> Result<Outcome> {
    let d = nvars(ctx, 1, 2);
    let big = certified_positive(&mut ctx.rng, d + 2)?;
    let f = big.coefficient_slice(d + 1, 0)?.coefficient_slice(d, 0)?;
    let g = big.coefficient_slice(d + 1, 1)?.coefficient_slice(d, 1)?;
    if f.is_zero() || g.is_zero() {
        return Ok(Outcome::skip("no yz term"));
    }
    expect_rel(ctx, &f, &g, Relation::HSim, &[big], "constant term not ~H yz coefficient")
}

fn positive_hpair(ctx: &mut Ctx) -> Result<Option<(MultiPoly, MultiPoly)>> {
    let d = nvars(ctx, 1, 2);
    let big = certified_positive(&mut ctx.rng, d + 1)?;
    let slices = big.slices(d)?;
    if slices.len() < 2 {
        return Ok(None);
    }
    let k = ctx.rng.gen_range(0..slices.len() - 1);
    let (a, b) = (slices[k].clone(), slices[k + 1].clone());
    Ok((!a.is_zero() && !b.is_zero()).then_some((a, b)))
}

fn fact11_3(ctx: &mut Ctx) -> Result<Outcome> {
    let Some((f, g)) = positive_hpair(ctx)? else {
        return Ok(Outcome::skip("degenerate"));
    };
    let xg = g.mul(&MultiPoly::var(g.nvars(), 0))?;
    expect_rel(ctx, &f, &xg, Relation::HSim, std::slice::from_ref(&g), "f not ~H x g")
}

fn fact11_4(ctx: &mut Ctx) -> Result<Outcome> {
    let d = nvars(ctx, 1, 2);
    let mut pair = || -> Result<Option<(MultiPoly, MultiPoly)>> {
        let big = certified_positive(&mut ctx.rng, d + 1)?;
        let s = big.slices(d)?;
        if s.len() < 2 || s[0].is_zero() || s[1].is_zero() {
            return Ok(None);
        }
        Ok(Some((s[0].clone(), s[1].clone())))
    };
    let (Some((f, g)), Some((f1, g1))) = (pair()?, pair()?) else {
        return Ok(Outcome::skip("degenerate"));
    };
    expect_rel(ctx, &f.mul(&f1)?, &g.mul(&g1)?, Relation::HSim, &[g, f1, g1], "f f1 not ~H g g1")
}

// ---- one variable: ratio criteria ----

fn to_uni(p: &MultiPoly) -> Result<UniPoly> {
    p.to_univariate(0)
}

fn onevar_pair(ctx: &mut Ctx) -> Result<(MultiPoly, MultiPoly)> {
    if ctx.trial.is_multiple_of(2) {
        loop {
            if let Some((f, g)) = hsim_pair(ctx)? {
                if f.nvars() == 1 {
                    return Ok((f, g));
                }
            }
        }
    }
    Ok(random_h1_pair(ctx))
}

fn q1(z: C64) -> C64 {
    if z.im < 0.0 {
        z.conj()
    } else {
        z
    }
}

fn onevar_1(ctx: &mut Ctx) -> Result<Outcome> {
    let (f, g) = onevar_pair(ctx)?;
    let rel = check_relation(&f, &g, Relation::HSim, &ctx.rel_cfg)?;
    let ratio = ratio_region_check(&to_uni(&f)?, &to_uni(&g)?, Region::SlitPlane, RATIO_GRID, ctx.seed)?;
    match (rel.accepted(), &ratio) {
        (true, RatioOutcome::Holds) => Ok(Outcome::Bucket("both hold".into())),
        (false, RatioOutcome::Counterexample { .. }) => Ok(Outcome::Bucket("both fail".into())),
        (false, RatioOutcome::Holds) => {
            // A zero of f + r g in the right half plane puts f/g = -r there.
            if let Some(RelationWitness::RhpZero { point, r: Some(r) }) = &rel.witness {
                let (fu, gu) = (to_uni(&f)?, to_uni(&g)?);
                let z = q1(point[0]);
                if z.re > 0.0 && (fu.eval(z) + gu.eval(z) * r).norm() < 1e-8 * (fu.eval_scale(z) + r * gu.eval_scale(z)) {
                    return Ok(Outcome::Bucket("ratio sampling miss".into()));
                }
            }
            Ok(Outcome::refuted(ctx.trial, &f, &[g], None, Some(Evidence::Relation { verdict: rel }), "~H fails but ratio avoids the slit"))
        }
        (true, RatioOutcome::Counterexample { sigma, value }) => {
            let r = -value.re;
            let frg = f.add(&g.scale_real(r))?;
            if r > 0.0 && verify_witness(&frg, &[*sigma]) {
                return Ok(Outcome::Bucket("relation sampling miss".into()));
            }
            Ok(Outcome::refuted(
                ctx.trial,
                &f,
                &[g],
                None,
                Some(Evidence::Ratio {
                    sigma: *sigma,
                    value: *value,
                }),
                "~H accepted but ratio meets the slit",
            ))
        }
    }
}

fn onevar_2(ctx: &mut Ctx) -> Result<Outcome> {
    let (f, g) = onevar_pair(ctx)?;
    let rel = check_relation(&f, &g, Relation::HInterlace, &ctx.rel_cfg)?;
    let ratio = ratio_region_check(&to_uni(&f)?, &to_uni(&g)?, Region::ClosedRHP, RATIO_GRID, ctx.seed)?;
    match (rel.accepted(), &ratio) {
        (true, RatioOutcome::Holds) => Ok(Outcome::Bucket("both hold".into())),
        (false, RatioOutcome::Counterexample { .. }) => Ok(Outcome::Bucket("both fail".into())),
        (false, RatioOutcome::Holds) => {
            // f(x) + y g(x) = 0 with Re y > 0 puts f/g = -y in the left half plane.
            if let Some(RelationWitness::RhpZero { point, .. }) = &rel.witness {
                let (fu, gu) = (to_uni(&f)?, to_uni(&g)?);
                let w = fu.eval(point[0]) / gu.eval(point[0]);
                if point[1].re > 0.0 && w.re < 0.0 {
                    return Ok(Outcome::Bucket("ratio sampling miss".into()));
                }
            }
            Ok(Outcome::refuted(ctx.trial, &f, &[g], None, Some(Evidence::Relation { verdict: rel }), "<=H fails but ratio stays in the half plane"))
        }
        (true, RatioOutcome::Counterexample { sigma, value }) => {
            let join = crate::stability::join_with_fresh_var(&f, &g)?;
            if verify_witness(&join, &[*sigma, -*value]) {
                return Ok(Outcome::Bucket("relation sampling miss".into()));
            }
            Ok(Outcome::refuted(
                ctx.trial,
                &f,
                &[g],
                None,
                Some(Evidence::Ratio {
                    sigma: *sigma,
                    value: *value,
                }),
                "<=H accepted but ratio leaves the half plane",
            ))
        }
    }
}

/// Half interlacing pairs, half independent members of the positive cone.
fn ppos1_pair(ctx: &mut Ctx, interlacing: fn(&mut rand_chacha::ChaCha8Rng, usize) -> (UniPoly, UniPoly)) -> (UniPoly, UniPoly) {
    let deg = ctx.rng.gen_range(1..=5);
    if ctx.trial.is_multiple_of(2) {
        return interlacing(&mut ctx.rng, deg);
    }
    let dg = if deg > 1 && ctx.rng.gen_bool(0.5) { deg - 1 } else { deg };
    (ppos1(&mut ctx.rng, deg), ppos1(&mut ctx.rng, dg))
}

fn root_order(f: &UniPoly, g: &UniPoly) -> Result<Evidence> {
    Ok(Evidence::RootOrder {
        f: sorted_real_roots(f, 1e-9)?.unwrap_or_default(),
        g: sorted_real_roots(g, 1e-9)?.unwrap_or_default(),
    })
}

fn onevar_3(ctx: &mut Ctx) -> Result<Outcome> {
    let (f, g) = ppos1_pair(ctx, p_interlacing_pair);
    let exact = p_interlacing(&f, &g, 1e-9)?;
    let ratio = ratio_region_check(&f, &g, Region::Quadrant1, RATIO_GRID, ctx.seed)?;
    let (fm, gm) = (uni(&f), uni(&g));
    match (exact, &ratio) {
        (true, RatioOutcome::Holds) => Ok(Outcome::Bucket("both hold".into())),
        (false, RatioOutcome::Counterexample { .. }) => Ok(Outcome::Bucket("both fail".into())),
        (true, RatioOutcome::Counterexample { sigma, value }) => Ok(Outcome::refuted(
            ctx.trial,
            &fm,
            &[gm],
            None,
            Some(Evidence::Ratio {
                sigma: *sigma,
                value: *value,
            }),
            "roots interlace but f/g leaves Q1",
        )),
        (false, RatioOutcome::Holds) => Ok(Outcome::refuted(
            ctx.trial,
            &fm,
            &[gm],
            None,
            Some(root_order(&f, &g)?),
            "roots do not interlace but f/g stays in Q1 on every sample",
        )),
    }
}

fn onevar_4(ctx: &mut Ctx) -> Result<Outcome> {
    let (f, g) = ppos1_pair(ctx, psim_pair);
    let (fm, gm) = (uni(&f), uni(&g));
    let rel = check_relation(&fm, &gm, Relation::PSim, &ctx.rel_cfg)?;
    let ratio = ratio_region_check(&f, &g, Region::OpenRHP, RATIO_GRID, ctx.seed)?;
    match (rel.accepted(), &ratio) {
        (true, RatioOutcome::Holds) => Ok(Outcome::Bucket("both hold".into())),
        (false, RatioOutcome::Counterexample { .. }) => Ok(Outcome::Bucket("both fail".into())),
        (true, RatioOutcome::Counterexample { sigma, value }) => Ok(Outcome::refuted(
            ctx.trial,
            &fm,
            &[gm],
            None,
            Some(Evidence::Ratio {
                sigma: *sigma,
                value: *value,
            }),
            "~P holds but f/g leaves the right half plane",
        )),
        (false, RatioOutcome::Holds) => Ok(Outcome::refuted(
            ctx.trial,
            &fm,
            &[gm],
            None,
            Some(Evidence::Relation { verdict: rel }),
            "~P fails but f/g stays in the right half plane on every sample",
        )),
    }
}

fn onevar_5(ctx: &mut Ctx) -> Result<Outcome> {
    let (f, g) = ppos1_pair(ctx, psim_pair);
    let (fm, gm) = (uni(&f), uni(&g));
    if !check_relation(&fm, &gm, Relation::PSim, &ctx.rel_cfg)?.accepted() {
        return Ok(Outcome::Bucket("premise fails".into()));
    }
    expect_rel(ctx, &fm, &gm, Relation::HInterlace, &[], "~P but not <=H")
}

fn posinterlace_1(ctx: &mut Ctx) -> Result<Outcome> {
    let deg = ctx.rng.gen_range(1..=5);
    let h = loop {
        let h = negative_points(&mut ctx.rng, deg);
        if h.len() == deg {
            break h;
        }
    };
    // f and every f_i share the interlacer h, so f ~P f_i.
    let f = interlaced_by(&mut ctx.rng, &h);
    let m = ctx.rng.gen_range(2..=3);
    let mut sum = UniPoly::zero();
    let mut parts = Vec::new();
    for _ in 0..m {
        let fi = interlaced_by(&mut ctx.rng, &h);
        sum = &sum + &fi;
        parts.push(uni(&fi));
    }
    expect_rel(ctx, &uni(&f), &uni(&sum), Relation::PSim, &parts, "f not ~P sum")
}

fn posinterlace_2(ctx: &mut Ctx) -> Result<Outcome> {
    let m = ctx.rng.gen_range(1..=3);
    let build = |ctx: &mut Ctx| -> (UniPoly, Vec<UniPoly>) {
        let deg = ctx.rng.gen_range(1..=4);
        let roots = loop {
            let r = negative_points(&mut ctx.rng, deg);
            if r.len() == deg {
                break r;
            }
        };
        let f = UniPoly::from_real_roots(&roots);
        let parts = (0..m).map(|_| interlaced_by(&mut ctx.rng, &roots)).collect();
        (f, parts)
    };
    let (f, fs) = build(ctx);
    let (g, gs) = build(ctx);
    let mut sum = UniPoly::zero();
    for (a, b) in fs.iter().zip(&gs) {
        sum = &sum + &(a * b);
    }
    let fg = &f * &g;
    expect_rel(ctx, &uni(&fg), &uni(&sum), Relation::HSim, &[uni(&f), uni(&g)], "f g not ~H sum f_i g_i")
}

fn posinterlace_3(ctx: &mut Ctx) -> Result<Outcome> {
    let deg = ctx.rng.gen_range(1..=6);
    let (f, g) = p_interlacing_pair(&mut ctx.rng, deg);
    let w = wronskian(&f, &g);
    if w.is_zero() {
        return Ok(Outcome::skip("proportional pair"));
    }
    uni_stable(ctx, &uni(&f), &[uni(&g)], &w, "Wronskian")
}

fn posinterlace_4(ctx: &mut Ctx) -> Result<Outcome> {
    let deg = ctx.rng.gen_range(1..=4);
    let (f, g) = p_interlacing_pair(&mut ctx.rng, deg);
    let b = match bezout(&f, &g) {
        Ok(b) => b,
        Err(crate::error::Error::InvalidInput(_)) => return Ok(Outcome::skip("degenerate Bezoutian")),
        Err(e) => return Err(e),
    };
    let o = stable_or(ctx, &uni(&f), &[uni(&g)], &b, false, "Bezoutian")?;
    if matches!(o, Outcome::Refuted(_)) {
        return Ok(o);
    }
    let fx = MultiPoly::from_univariate(&f, 2, 0)?;
    let fy = MultiPoly::from_univariate(&f, 2, 1)?;
    expect_rel(ctx, &fx.mul(&fy)?, &b, Relation::HSim, &[uni(&g)], "f(x) f(y) not ~H B")
}

fn christoffel(ctx: &mut Ctx) -> Result<Outcome> {
    let kind = [OrthoPreset::Legendre, OrthoPreset::ChebyshevT, OrthoPreset::Hermite][ctx.trial % 3];
    let n = 1 + (ctx.trial / 3) % 8;
    let fam = OrthoFamily::preset(kind, n + 2);
    let (sum, det) = christoffel_darboux(&fam, n)?;
    let input = uni(&sum);
    let resid = (&sum - &det).coefficient_scale() / sum.coefficient_scale();
    if resid >= 1e-8 {
        return Ok(Outcome::refuted(
            ctx.trial,
            &input,
            &[uni(&det)],
            None,
            Some(Evidence::Mismatch { expected: 0.0, got: resid }),
            format!("{} n={n}: identity residual", fam.name),
        ));
    }
    uni_stable(ctx, &input, &[], &sum, &format!("{} n={n}: sum of squares", fam.name))
}

fn ppos2(ctx: &mut Ctx) -> Result<MultiPoly> {
    certified_ppos(&mut ctx.rng, 2, 2)
}

fn final_2x2_1(ctx: &mut Ctx) -> Result<Outcome> {
    let big = ppos2(ctx)?;
    let alpha = ctx.rng.gen_range(0.01..1.99);
    let (lhs, rhs) = alpha_two_det(&big, 1, alpha)?;
    if rhs.is_zero() {
        return Ok(Outcome::skip("zero determinant"));
    }
    expect_rel(ctx, &lhs, &rhs, Relation::HSim, &[big], "f_0^2 not ~H f_1^2 - alpha f_0 f_2")
}

fn final_2x2_2(ctx: &mut Ctx) -> Result<Outcome> {
    let big = ppos2(ctx)?;
    let deg = big.degree_in(1)?.unwrap_or(0) as usize;
    if deg == 0 {
        return Ok(Outcome::skip("no y dependence"));
    }
    let k = ctx.rng.gen_range(0..deg);
    let det = coeff_hankel_det(&big, 1, 2, k)?;
    if det.is_zero() {
        return Ok(Outcome::skip("zero determinant"));
    }
    uni_stable(ctx, &big, &[], &to_uni(&det)?, "2x2 coefficient determinant")
}

fn final_2x2_3(ctx: &mut Ctx) -> Result<Outcome> {
    let n = nvars(ctx, 1, 4);
    let spec = random_coeff_pencil(n, ctx.rng.gen())?;
    let p = pencil_coeff_det(&spec)?;
    let (full, _) = det_pencil(&spec)?;
    uni_stable(ctx, &full, &[], &p, "pencil coefficient determinant")
}
