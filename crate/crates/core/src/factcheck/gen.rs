//! Random inputs for the suites.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::construct::{random_pencil, random_stable, Recipe, TailKind};
use crate::error::Result;
use crate::poly::{MultiPoly, UniPoly, C64};

pub(crate) fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..hi.ln()).exp()
}

pub(crate) fn rhp_point(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(log_uniform(rng, 1e-2, 3.0), rng.gen_range(-3.0..3.0))
}

fn max_degree(nvars: usize) -> usize {
    if nvars >= 3 {
        3
    } else {
        4
    }
}

/// Certified stable, any coefficients.
pub(crate) fn certified(rng: &mut ChaCha8Rng, nvars: usize) -> Result<MultiPoly> {
    let recipe = match rng.gen_range(0..20) {
        0..=5 => Recipe::Product,
        6..=10 => Recipe::Pencil,
        11..=13 => Recipe::RealProduct,
        14..=16 => Recipe::RealPencil,
        _ => Recipe::Closure,
    };
    let degree = rng.gen_range(1..=max_degree(nvars));
    Ok(random_stable(nvars, degree, rng.gen(), recipe)?.0)
}

/// Certified stable with positive coefficients.
pub(crate) fn certified_positive(rng: &mut ChaCha8Rng, nvars: usize) -> Result<MultiPoly> {
    let recipe = if rng.gen_bool(0.5) {
        Recipe::RealProduct
    } else {
        Recipe::RealPencil
    };
    let degree = rng.gen_range(1..=max_degree(nvars));
    Ok(random_stable(nvars, degree, rng.gen(), recipe)?.0)
}

/// Stable and upper with positive coefficients: products of positive
/// affine forms or real symmetric pencils.
pub(crate) fn certified_ppos(rng: &mut ChaCha8Rng, nvars: usize, min_degree: usize) -> Result<MultiPoly> {
    let degree = rng.gen_range(min_degree.max(1)..=max_degree(nvars).max(min_degree));
    if rng.gen_bool(0.5) {
        Ok(random_stable(nvars, degree, rng.gen(), Recipe::RealProduct)?.0)
    } else {
        let spec = random_pencil(degree, nvars, TailKind::None, rng.gen())?;
        Ok(crate::construct::det_pencil(&spec)?.0)
    }
}

/// Stable univariate polynomial with positive coefficients.
pub(crate) fn hurwitz1(rng: &mut ChaCha8Rng, degree: usize) -> UniPoly {
    let mut roots = Vec::with_capacity(degree);
    while roots.len() < degree {
        if degree - roots.len() >= 2 && rng.gen_bool(0.5) {
            let z = C64::new(-log_uniform(rng, 0.05, 5.0), log_uniform(rng, 0.05, 5.0));
            roots.push(z);
            roots.push(z.conj());
        } else {
            roots.push(C64::new(-log_uniform(rng, 0.05, 5.0), 0.0));
        }
    }
    UniPoly::from_roots(&roots).scale_real(log_uniform(rng, 0.2, 5.0))
}

/// Descending distinct negative values.
pub(crate) fn negative_points(rng: &mut ChaCha8Rng, count: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..count).map(|_| -log_uniform(rng, 0.05, 10.0)).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
    v
}

pub(crate) fn from_neg_roots(rng: &mut ChaCha8Rng, roots: &[f64]) -> UniPoly {
    UniPoly::from_real_roots(roots).scale_real(log_uniform(rng, 0.2, 5.0))
}

/// Member of the positive cone in one variable.
pub(crate) fn ppos1(rng: &mut ChaCha8Rng, degree: usize) -> UniPoly {
    loop {
        let r = negative_points(rng, degree);
        if r.len() == degree {
            return from_neg_roots(rng, &r);
        }
    }
}

/// `(f, g)` with roots `f_1 >= g_1 >= f_2 >= ...` and
/// `deg f - deg g` in `{0, 1}`.
pub(crate) fn p_interlacing_pair(rng: &mut ChaCha8Rng, deg_f: usize) -> (UniPoly, UniPoly) {
    let deg_g = if deg_f > 1 && rng.gen_bool(0.5) { deg_f - 1 } else { deg_f };
    loop {
        let pts = negative_points(rng, deg_f + deg_g);
        if pts.len() != deg_f + deg_g {
            continue;
        }
        let fr: Vec<f64> = pts.iter().step_by(2).copied().collect();
        let gr: Vec<f64> = pts.iter().skip(1).step_by(2).copied().collect();
        return (from_neg_roots(rng, &fr), from_neg_roots(rng, &gr));
    }
}

/// A polynomial `f` with `h <=P f`, given the descending roots of `h`.
pub(crate) fn interlaced_by(rng: &mut ChaCha8Rng, h_roots: &[f64]) -> UniPoly {
    let n = h_roots.len();
    let full = rng.gen_bool(0.5);
    let mut roots = Vec::with_capacity(n);
    for i in 0..n.saturating_sub(1) {
        let (hi, lo) = (h_roots[i], h_roots[i + 1]);
        roots.push(lo + (hi - lo) * rng.gen_range(0.05..0.95));
    }
    if full || n == 1 {
        let last = h_roots[n - 1];
        roots.push(last - log_uniform(rng, 0.05, 5.0));
    }
    from_neg_roots(rng, &roots)
}

/// Univariate pair with a common interlacer.
pub(crate) fn psim_pair(rng: &mut ChaCha8Rng, degree: usize) -> (UniPoly, UniPoly) {
    loop {
        let h = negative_points(rng, degree);
        if h.len() == degree {
            return (interlaced_by(rng, &h), interlaced_by(rng, &h));
        }
    }
}
