//! Univariate roots, Hurwitz tests and root-interlacing primitives.
//!
//! Root finding is Aberth–Ehrlich simultaneous iteration. Hurwitz and
//! real-rootedness verdicts first consolidate clusters that behave like a
//! multiple root, since simultaneous iteration only resolves an `m`-fold
//! root to about `eps^(1/m)`.

use num::rational::BigRational;
use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{UniPoly, C64};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Reporting-level cluster tolerance: roots closer than this (relative)
/// are still listed individually.
pub const CLUSTER_TOL: f64 = 1e-6;

/// Linkage radius used when looking for numerically multiple roots.
const MULTIPLE_ROOT_LINK: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootSet {
    pub roots: Vec<C64>,
    /// Largest `|p(z)| / sum |a_k| |z|^k` over the roots.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HurwitzVerdict {
    pub stable: bool,
    /// Root with the largest real part; `None` for constants.
    pub worst_root: Option<C64>,
    /// `-max Re(root)`; infinite for constants.
    pub margin: f64,
}

#[derive(Clone, Debug)]
pub struct RootFinder {
    pub tol: f64,
    pub max_iter: usize,
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for RootFinder {
    fn default() -> Self {
        RootFinder {
            tol: DEFAULT_TOL,
            max_iter: 400,
            max_restarts: 6,
            seed: 0x5eed,
        }
    }
}

impl RootFinder {
    pub fn with_tol(tol: f64) -> Self {
        RootFinder {
            tol,
            ..Default::default()
        }
    }

    pub fn roots(&self, p: &UniPoly) -> Result<RootSet> {
        let n = match p.degree() {
            None => return Err(Error::ZeroPolynomial),
            Some(0) => return Err(Error::invalid("root finding needs degree >= 1")),
            Some(n) => n,
        };
        let coeffs = p.coeffs();
        let zeros = coeffs.iter().take_while(|c| **c == C64::zero()).count();
        let mut roots = vec![C64::zero(); zeros];
        let lead = coeffs[n];
        let monic: Vec<C64> = coeffs[zeros..].iter().map(|c| c / lead).collect();
        let m = n - zeros;
        match m {
            0 => {}
            1 => roots.push(-monic[0]),
            _ => roots.extend(self.aberth(&monic)?),
        }
        let residual = roots
            .iter()
            .map(|z| relative_residual(p, *z))
            .fold(0.0, f64::max);
        if !(residual <= self.tol) {
            return Err(Error::NoConvergence {
                iterations: self.max_iter,
                residual,
            });
        }
        Ok(RootSet { roots, residual })
    }

    fn aberth(&self, monic: &[C64]) -> Result<Vec<C64>> {
        let n = monic.len() - 1;
        let poly = UniPoly::new(monic.to_vec());
        let dpoly = poly.derivative();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);

        // Geometric mean of root moduli, bounded away from zero.
        let radius = monic[0].norm().powf(1.0 / n as f64).max(1e-3);
        let centre = -monic[n - 1] / n as f64;
        let offset: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let mut z: Vec<C64> = (0..n)
            .map(|k| {
                let theta = offset + std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
                centre + C64::from_polar(radius, theta)
            })
            .collect();

        let eps = f64::EPSILON * 8.0 * n as f64;
        let mut worst = f64::INFINITY;
        for restart in 0..=self.max_restarts {
            if restart > 0 {
                let scale = z.iter().map(|v| v.norm()).fold(radius, f64::max);
                for v in z.iter_mut() {
                    *v += C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * (0.1 * scale);
                }
            }
            let mut done = vec![false; n];
            for _ in 0..self.max_iter {
                for k in 0..n {
                    if done[k] {
                        continue;
                    }
                    let zk = z[k];
                    let pv = poly.eval(zk);
                    if pv.norm() <= eps * poly.eval_scale(zk) {
                        done[k] = true;
                        continue;
                    }
                    let dv = dpoly.eval(zk);
                    let ratio = if dv == C64::zero() {
                        C64::new(1e-8 * (1.0 + zk.norm()), 0.0)
                    } else {
                        pv / dv
                    };
                    let s: C64 = (0..n)
                        .filter(|&j| j != k)
                        .map(|j| {
                            let d = zk - z[j];
                            if d == C64::zero() {
                                C64::zero()
                            } else {
                                d.inv()
                            }
                        })
                        .sum();
                    let denom = C64::new(1.0, 0.0) - ratio * s;
                    let w = if denom.norm() < 1e-300 { ratio } else { ratio / denom };
                    let next = zk - w;
                    if next.re.is_finite() && next.im.is_finite() {
                        z[k] = next;
                    } else {
                        z[k] = zk + C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * radius;
                    }
                }
                if done.iter().all(|d| *d) {
                    return Ok(z);
                }
            }
            worst = z
                .iter()
                .map(|v| relative_residual(&poly, *v))
                .fold(0.0, f64::max);
        }
        Err(Error::NoConvergence {
            iterations: self.max_iter * (self.max_restarts + 1),
            residual: worst,
        })
    }
}

fn relative_residual(p: &UniPoly, z: C64) -> f64 {
    let s = p.eval_scale(z);
    if s == 0.0 {
        0.0
    } else {
        p.eval(z).norm() / s
    }
}

pub fn all_roots(p: &UniPoly, tol: f64) -> Result<RootSet> {
    RootFinder::with_tol(tol).roots(p)
}

/// Roots with clusters that behave like an `m`-fold root replaced by `m`
/// copies of a refined centre. Clusters that fail the multiplicity test
/// are left alone.
pub fn consolidated_roots(p: &UniPoly, roots: &[C64]) -> Vec<C64> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            let scale = 1.0 + roots[i].norm().max(roots[j].norm());
            if (roots[i] - roots[j]).norm() <= MULTIPLE_ROOT_LINK * scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut out = roots.to_vec();
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    for members in groups.values().filter(|m| m.len() > 1) {
        let m = members.len();
        let centre: C64 = members.iter().map(|&i| roots[i]).sum::<C64>() / m as f64;
        let mut q = p.clone();
        for _ in 0..m - 1 {
            q = q.derivative();
        }
        let dq = q.derivative();
        let mut c = centre;
        for _ in 0..30 {
            let d = dq.eval(c);
            if d == C64::zero() {
                break;
            }
            let step = q.eval(c) / d;
            c -= step;
            if step.norm() <= f64::EPSILON * (1.0 + c.norm()) {
                break;
            }
        }
        let spread = members
            .iter()
            .map(|&i| (roots[i] - c).norm())
            .fold(0.0, f64::max);
        let ok = c.re.is_finite()
            && c.im.is_finite()
            && spread <= 2.0 * MULTIPLE_ROOT_LINK * (1.0 + c.norm()) * m as f64
            && p.eval(c).norm() <= 1e3 * f64::EPSILON * p.eval_scale(c);
        if ok {
            for &i in members {
                out[i] = c;
            }
        }
    }
    out
}

/// Stable iff every root has `Re <= tol`. Imaginary-axis roots are allowed.
pub fn hurwitz_verdict(p: &UniPoly, tol: f64) -> Result<HurwitzVerdict> {
    hurwitz_verdict_with(p, tol, &RootFinder::default())
}

pub fn hurwitz_verdict_with(p: &UniPoly, tol: f64, finder: &RootFinder) -> Result<HurwitzVerdict> {
    match p.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => {
            return Ok(HurwitzVerdict {
                stable: true,
                worst_root: None,
                margin: f64::INFINITY,
            })
        }
        _ => {}
    }
    let rs = finder.roots(p)?;
    let roots = consolidated_roots(p, &rs.roots);
    let worst = roots
        .iter()
        .copied()
        .max_by(|a, b| a.re.total_cmp(&b.re))
        .expect("degree >= 1");
    Ok(HurwitzVerdict {
        stable: worst.re <= tol,
        worst_root: Some(worst),
        margin: -worst.re,
    })
}

fn to_rational(v: f64) -> Result<BigRational> {
    BigRational::from_float(v).ok_or_else(|| Error::invalid("non-finite coefficient"))
}

/// Strict Hurwitz test (all roots in the open left half plane) by the
/// Routh table in exact rational arithmetic. Coefficients must be real.
/// A zero pivot means "not strictly Hurwitz".
pub fn routh_hurwitz_real(p: &UniPoly) -> Result<bool> {
    let n = p.degree().ok_or(Error::ZeroPolynomial)?;
    if p.coeffs().iter().any(|c| c.im != 0.0) {
        return Err(Error::invalid("Routh table needs real coefficients"));
    }
    if n == 0 {
        return Ok(true);
    }
    let desc: Vec<BigRational> = p
        .coeffs()
        .iter()
        .rev()
        .map(|c| to_rational(c.re))
        .collect::<Result<_>>()?;
    let width = n / 2 + 1;
    let row = |start: usize| -> Vec<BigRational> {
        (0..width)
            .map(|k| desc.get(start + 2 * k).cloned().unwrap_or_else(BigRational::zero))
            .collect()
    };
    let mut prev = row(0);
    let mut cur = row(1);
    let sign = prev[0].signum();
    let mut first_column = vec![prev[0].clone()];
    for _ in 0..n {
        if cur[0].is_zero() {
            return Ok(false);
        }
        first_column.push(cur[0].clone());
        let next: Vec<BigRational> = (0..width)
            .map(|k| {
                let a = prev.get(k + 1).cloned().unwrap_or_else(BigRational::zero);
                let b = cur.get(k + 1).cloned().unwrap_or_else(BigRational::zero);
                (&cur[0] * &a - &prev[0] * &b) / &cur[0]
            })
            .collect();
        prev = cur;
        cur = next;
    }
    Ok(first_column.iter().all(|v| v.signum() == sign))
}

/// First-order forward error estimate for a computed root, capped so that
/// unresolved multiple roots do not swallow everything.
fn root_error_bound(p: &UniPoly, z: C64) -> f64 {
    let n = p.degree().unwrap_or(0) as f64;
    let cap = 1e-6 * (1.0 + z.norm());
    let d = p.derivative().eval(z).norm();
    if d == 0.0 {
        return cap;
    }
    (16.0 * (n + 1.0) * f64::EPSILON * p.eval_scale(z) / d).min(cap)
}

fn is_numerically_real(p: &UniPoly, z: C64, tol: f64) -> bool {
    z.im.abs() <= tol * (1.0 + z.norm()) || (p.is_real(0.0) && z.im.abs() <= root_error_bound(p, z))
}

/// Every root satisfies `|Im z| <= tol (1 + |z|)`. For real coefficients
/// the allowance grows with the conditioning of each root.
pub fn real_rooted(p: &UniPoly, tol: f64) -> Result<bool> {
    match p.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Ok(true),
        _ => {}
    }
    let rs = RootFinder::default().roots(p)?;
    Ok(consolidated_roots(p, &rs.roots)
        .iter()
        .all(|z| is_numerically_real(p, *z, tol)))
}

/// Real parts of the roots, sorted descending, provided the polynomial is
/// real-rooted at tolerance `tol`.
pub fn sorted_real_roots(p: &UniPoly, tol: f64) -> Result<Option<Vec<f64>>> {
    match p.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Ok(Some(Vec::new())),
        _ => {}
    }
    let rs = RootFinder::default().roots(p)?;
    let roots = consolidated_roots(p, &rs.roots);
    if roots.iter().any(|z| !is_numerically_real(p, *z, tol)) {
        return Ok(None);
    }
    let mut re: Vec<f64> = roots.iter().map(|z| z.re).collect();
    re.sort_by(|a, b| b.total_cmp(a));
    Ok(Some(re))
}

/// Membership in the one-variable positive cone: real coefficients,
/// non-negative coefficients, real roots, none of them positive.
pub fn in_ppos1(p: &UniPoly, tol: f64) -> Result<bool> {
    if p.is_zero() {
        return Ok(false);
    }
    if !p.is_real(1e-12) {
        return Ok(false);
    }
    let lead = p.leading().expect("non-zero").re;
    let s = p.coefficient_scale();
    if lead <= 0.0 || p.coeffs().iter().any(|c| c.re < -1e-12 * s) {
        return Ok(false);
    }
    Ok(match sorted_real_roots(p, tol)? {
        Some(r) => r.iter().all(|z| *z <= tol * (1.0 + z.abs())),
        None => false,
    })
}

/// Weak alternation `f_1 >= g_1 >= f_2 >= g_2 >= ...` of descending root
/// lists with `deg f - deg g` in `{0, 1}`: the one-variable form of
/// `f + y g` lying in the positive cone.
pub fn roots_interlace(f_roots: &[f64], g_roots: &[f64], tol: f64) -> bool {
    let (nf, ng) = (f_roots.len(), g_roots.len());
    if !(nf == ng || nf == ng + 1) {
        return false;
    }
    let le = |a: f64, b: f64| a <= b + tol * (1.0 + a.abs().max(b.abs()));
    for i in 0..ng {
        if !le(g_roots[i], f_roots[i]) {
            return false;
        }
        if i + 1 < nf && !le(f_roots[i + 1], g_roots[i]) {
            return false;
        }
    }
    true
}

/// Exact one-variable decision of `f + y g` in the positive cone for
/// `f, g` in the one-variable positive cone.
pub fn p_interlacing(f: &UniPoly, g: &UniPoly, tol: f64) -> Result<bool> {
    let fr = sorted_real_roots(f, tol)?.ok_or_else(|| Error::invalid("f is not real-rooted"))?;
    let gr = sorted_real_roots(g, tol)?.ok_or_else(|| Error::invalid("g is not real-rooted"))?;
    Ok(roots_interlace(&fr, &gr, tol.max(1e-9)))
}

/// Log-spaced multipliers in `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![(lo * hi).sqrt()];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp())
        .collect()
}

/// A polynomial `h` with `h <=P f` and `h <=P g`, built from every second
/// entry of the merged descending root list, or `None` when `f + t g`
/// leaves the positive cone for a sampled `t > 0` or the candidate fails
/// the interlacing check.
pub fn common_interlacer(f: &UniPoly, g: &UniPoly, tol: f64) -> Result<Option<UniPoly>> {
    let check = |p: &UniPoly, name: &str| -> Result<Vec<f64>> {
        if p.is_zero() {
            return Err(Error::invalid(format!("{name} is zero")));
        }
        if !p.is_real(1e-12) {
            return Err(Error::invalid(format!("{name} has non-real coefficients")));
        }
        if p.leading().expect("non-zero").re <= 0.0 {
            return Err(Error::invalid(format!("{name} needs a positive leading coefficient")));
        }
        let roots = sorted_real_roots(p, tol)?
            .ok_or_else(|| Error::invalid(format!("{name} is not real-rooted")))?;
        if roots.iter().any(|r| *r > tol * (1.0 + r.abs())) {
            return Err(Error::invalid(format!("{name} has a positive root")));
        }
        Ok(roots)
    };
    let fr = check(f, "f")?;
    let gr = check(g, "g")?;
    if fr.len().abs_diff(gr.len()) > 1 {
        return Err(Error::invalid("degrees differ by more than one"));
    }
    for t in log_grid(1e-3, 1e3, 32) {
        if !in_ppos1(&(f + &g.scale_real(t)), tol)? {
            return Ok(None);
        }
    }
    let mut merged: Vec<f64> = fr.iter().chain(gr.iter()).copied().collect();
    merged.sort_by(|a, b| b.total_cmp(a));
    let hr: Vec<f64> = merged.iter().step_by(2).copied().collect();
    let itol = tol.max(1e-9);
    if roots_interlace(&hr, &fr, itol) && roots_interlace(&hr, &gr, itol) {
        Ok(Some(UniPoly::from_real_roots(&hr)))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn random_unit_disk_poly(rng: &mut impl Rng, degree: usize) -> UniPoly {
        let mut coeffs: Vec<C64> = (0..=degree)
            .map(|_| {
                let r: f64 = rng.gen_range(0.0..1.0f64).sqrt();
                C64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
            })
            .collect();
        if coeffs[degree].norm() < 1e-3 {
            coeffs[degree] = C64::new(1.0, 0.0);
        }
        UniPoly::new(coeffs)
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sorted(mut v: Vec<C64>) -> Vec<C64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    fn close(a: &[C64], b: &[C64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() < tol)
    }

    #[test]
    fn roots_of_x2_plus_1() {
        let r = all_roots(&UniPoly::from_real(&[1., 0., 1.]), 1e-9).unwrap();
        assert!(close(&sorted(r.roots), &[c(0., -1.), c(0., 1.)], 1e-12));
    }

    #[test]
    fn roots_match_quadratic_formula() {
        // x^2 + 2x + 2: (-2 ± sqrt(4 - 8)) / 2 = -1 ± i
        let (a, b, cc) = (1.0f64, 2.0f64, 2.0f64);
        let disc = C64::new(b * b - 4.0 * a * cc, 0.0).sqrt();
        let oracle = vec![(-b + disc) / (2.0 * a), (-b - disc) / (2.0 * a)];
        let r = all_roots(&UniPoly::from_real(&[cc, b, a]), 1e-9).unwrap();
        assert!(close(&sorted(r.roots), &sorted(oracle), 1e-12));
    }

    #[test]
    fn triple_root_within_cluster_tolerance() {
        let p = UniPoly::from_real_roots(&[-1.0, -1.0, -1.0]);
        let r = all_roots(&p, 1e-9).unwrap();
        assert_eq!(r.roots.len(), 3);
        assert!(r.roots.iter().all(|z| (z - c(-1., 0.)).norm() < 1e-4));
        let merged = consolidated_roots(&p, &r.roots);
        assert!(merged.iter().all(|z| (z - c(-1., 0.)).norm() < 1e-12));
    }

    #[test]
    fn zero_polynomial_and_constants_rejected() {
        assert!(matches!(all_roots(&UniPoly::zero(), 1e-9), Err(Error::ZeroPolynomial)));
        assert!(all_roots(&UniPoly::from_real(&[3.0]), 1e-9).is_err());
    }

    #[test]
    fn hurwitz_examples() {
        let v = hurwitz_verdict(&UniPoly::from_real(&[1., 1.]), 1e-9).unwrap();
        assert!(v.stable);
        assert!((v.margin - 1.0).abs() < 1e-14);
        let v = hurwitz_verdict(&UniPoly::from_real(&[-1., 1.]), 1e-9).unwrap();
        assert!(!v.stable);
        assert!((v.worst_root.unwrap() - c(1., 0.)).norm() < 1e-14);
        let v = hurwitz_verdict(&UniPoly::from_real(&[1., 0., 1.]), 1e-9).unwrap();
        assert!(v.stable);
        assert!(v.margin.abs() < 1e-12);
    }

    #[test]
    fn boundary_double_roots_stay_stable() {
        // (x^2 + 1)^2 has double roots on the imaginary axis.
        let p = UniPoly::from_real(&[1., 0., 2., 0., 1.]);
        assert!(hurwitz_verdict(&p, 1e-9).unwrap().stable);
        let q = UniPoly::from_roots(&[c(0., 2.), c(0., 2.), c(-1., 0.)]);
        assert!(hurwitz_verdict(&q, 1e-9).unwrap().stable);
    }

    #[test]
    fn routh_examples() {
        assert!(routh_hurwitz_real(&UniPoly::from_real(&[2., 3., 1.])).unwrap());
        assert!(!routh_hurwitz_real(&UniPoly::from_real(&[1., 0., 1.])).unwrap());
        // (x + 1)(x^2 + x + 1): roots -1, (-1 ± i sqrt 3)/2
        assert!(routh_hurwitz_real(&UniPoly::from_real(&[1., 2., 2., 1.])).unwrap());
        assert!(!routh_hurwitz_real(&UniPoly::from_real(&[-1., 1.])).unwrap());
        assert!(routh_hurwitz_real(&UniPoly::from_real(&[5.])).unwrap());
        assert!(routh_hurwitz_real(&UniPoly::new(vec![c(1., 1.), c(1., 0.)])).is_err());
        assert!(matches!(routh_hurwitz_real(&UniPoly::zero()), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn real_rooted_examples() {
        assert!(real_rooted(&UniPoly::from_real_roots(&[-1., -2.]), 1e-9).unwrap());
        assert!(!real_rooted(&UniPoly::from_real(&[1., 0., 1.]), 1e-9).unwrap());
        // discriminant of x^2 + x + 1 is -3
        assert!(!real_rooted(&UniPoly::from_real(&[1., 1., 1.]), 1e-9).unwrap());
        assert!(real_rooted(&UniPoly::from_real_roots(&[-2., -2., -0.5]), 1e-9).unwrap());
    }

    fn is_p_interlacer(h: &UniPoly, f: &UniPoly) -> bool {
        p_interlacing(h, f, 1e-9).unwrap()
    }

    #[test]
    fn common_interlacer_examples() {
        let f = UniPoly::from_real_roots(&[0., -3.]);
        let g = UniPoly::from_real_roots(&[-1., -2.]);
        let h = common_interlacer(&f, &g, 1e-9).unwrap().expect("f ~P g");
        assert!(is_p_interlacer(&h, &f) && is_p_interlacer(&h, &g));

        let same = UniPoly::from_real_roots(&[-1., -2.]);
        let h = common_interlacer(&same, &same, 1e-9).unwrap().unwrap();
        assert!(is_p_interlacer(&h, &same));

        let f = UniPoly::from_real_roots(&[-1., -3.]);
        let g = UniPoly::from_real_roots(&[-2., -4.]);
        let h = common_interlacer(&f, &g, 1e-9).unwrap().unwrap();
        // merged descending -1, -2, -3, -4 -> h roots -1, -3
        let hr = sorted_real_roots(&h, 1e-9).unwrap().unwrap();
        assert!((hr[0] + 1.0).abs() < 1e-9 && (hr[1] + 3.0).abs() < 1e-9);
        assert!(is_p_interlacer(&h, &f) && is_p_interlacer(&h, &g));
    }

    #[test]
    fn common_interlacer_absent_and_precondition_errors() {
        // roots -1,-2 vs -10,-11: f + t g leaves the cone
        let f = UniPoly::from_real_roots(&[-1., -2.]);
        let g = UniPoly::from_real_roots(&[-10., -11.]);
        assert_eq!(common_interlacer(&f, &g, 1e-9).unwrap(), None);
        let bad = UniPoly::from_real(&[1., 0., 1.]);
        assert!(common_interlacer(&bad, &f, 1e-9).is_err());
        let positive_root = UniPoly::from_real_roots(&[1.0]);
        assert!(common_interlacer(&positive_root, &f, 1e-9).is_err());
        let far = UniPoly::from_real_roots(&[-1., -2., -3., -4.]);
        assert!(common_interlacer(&far, &f, 1e-9).is_err());
    }

    #[test]
    fn interlacing_orientation() {
        assert!(roots_interlace(&[-1.0], &[], 1e-9));
        assert!(!roots_interlace(&[], &[-1.0], 1e-9));
        assert!(roots_interlace(&[0.0, -2.0], &[-1.0], 1e-9));
        assert!(!roots_interlace(&[0.0, -3.0], &[-1.0, -2.0], 1e-9));
        assert!(roots_interlace(&[-1.0, -2.0], &[-1.0, -2.0], 1e-9));
    }

    fn random_real_rooted(seed: u64, lo: f64, hi: f64) -> UniPoly {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=8);
        let roots: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..hi)).collect();
        UniPoly::from_real_roots(&roots).scale_real(rng.gen_range(0.5..2.0))
    }

    #[test]
    fn real_rooted_left_polys_are_stable() {
        for seed in 0..200 {
            let p = random_real_rooted(seed, -5.0, 0.0);
            assert!(hurwitz_verdict(&p, 1e-9).unwrap().stable, "seed {seed}");
        }
    }

    #[test]
    fn routh_agrees_with_root_verdict() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 500 {
            let deg = rng.gen_range(1..=8);
            let mut roots = Vec::new();
            while roots.len() < deg {
                let re: f64 = rng.gen_range(-3.0..1.0);
                if re.abs() < 1e-6 {
                    continue;
                }
                if deg - roots.len() >= 2 && rng.gen_bool(0.5) {
                    let im: f64 = rng.gen_range(0.1..3.0);
                    roots.push(c(re, im));
                    roots.push(c(re, -im));
                } else {
                    roots.push(c(re, 0.0));
                }
            }
            let p = UniPoly::from_roots(&roots);
            let p = UniPoly::from_real(&p.coeffs().iter().map(|z| z.re).collect::<Vec<_>>());
            let exact = routh_hurwitz_real(&p).unwrap();
            let v = hurwitz_verdict(&p, 1e-9).unwrap();
            assert_eq!(exact, v.margin > 1e-8, "roots {roots:?}");
            checked += 1;
        }
    }

    #[test]
    fn residual_small_on_unit_disk_polys() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let deg = rng.gen_range(1..=12);
            let p = random_unit_disk_poly(&mut rng, deg);
            let r = all_roots(&p, 1e-9).unwrap();
            assert_eq!(r.roots.len(), deg);
            assert!(r.residual < 1e-9);
        }
    }

    fn match_multisets(a: &[C64], b: &[C64], tol: f64) -> bool {
        let mut used = vec![false; b.len()];
        a.len() == b.len()
            && a.iter().all(|x| {
                let best = (0..b.len())
                    .filter(|&j| !used[j])
                    .min_by(|&i, &j| (x - b[i]).norm().total_cmp(&(x - b[j]).norm()));
                match best {
                    Some(j) if (x - b[j]).norm() < tol => {
                        used[j] = true;
                        true
                    }
                    _ => false,
                }
            })
    }

    proptest! {
        #[test]
        fn product_roots_are_union(seed in 0u64..10_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let q = UniPoly::from_roots(&(0..rng.gen_range(1..=6)).map(|_| c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0))).collect::<Vec<_>>());
            let r = UniPoly::from_roots(&(0..rng.gen_range(1..=6)).map(|_| c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0))).collect::<Vec<_>>());
            let pq = &q * &r;
            let all = all_roots(&pq, 1e-9).unwrap().roots;
            let mut parts = all_roots(&q, 1e-9).unwrap().roots;
            parts.extend(all_roots(&r, 1e-9).unwrap().roots);
            let a = consolidated_roots(&pq, &all);
            prop_assert!(match_multisets(&a, &parts, 1e-6));
        }
    }
}
