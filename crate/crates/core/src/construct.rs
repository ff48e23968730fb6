//! Certified-stable generators and named bilinear and determinantal
//! constructions.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{MultiPoly, UniPoly, C64};
use crate::stability::CertificateKind;
use crate::uniroots::real_rooted;

/// Dense real matrix, row-major.
pub type Matrix = Vec<Vec<f64>>;

/// Largest pencil size accepted.
pub const MAX_PENCIL: usize = 12;
/// Largest size expanded by minors; bigger pencils are interpolated.
pub const MINOR_EXPANSION_MAX: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Tail {
    None,
    /// Real skew-symmetric `A`.
    Skew {
        #[serde(rename = "M")]
        m: Matrix,
    },
    /// Real symmetric `S`, entering as `i S`.
    #[serde(rename = "imagsym")]
    ImagSym {
        #[serde(rename = "M")]
        m: Matrix,
    },
}

/// `det(I + x_1 D_1 + ... + x_d D_d + tail)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PencilSpec {
    pub n: usize,
    pub d: usize,
    #[serde(rename = "D")]
    pub mats: Vec<Matrix>,
    pub tail: Tail,
}

fn check_square(m: &Matrix, n: usize, what: &str) -> Result<()> {
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(Error::invalid(format!("{what} must be {n}x{n}")));
    }
    if m.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("{what} has non-finite entries")));
    }
    Ok(())
}

fn is_symmetric(m: &Matrix) -> bool {
    (0..m.len()).all(|i| (0..i).all(|j| m[i][j] == m[j][i]))
}

fn to_dmatrix(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.len(), m.len(), |i, j| m[i][j])
}

/// Symmetric with a successful Cholesky factorization.
pub fn is_positive_definite(m: &Matrix) -> bool {
    !m.is_empty() && is_symmetric(m) && to_dmatrix(m).cholesky().is_some()
}

impl PencilSpec {
    pub fn new(mats: Vec<Matrix>, tail: Tail) -> Result<Self> {
        let n = mats.first().map(|m| m.len()).ok_or_else(|| Error::invalid("at least one matrix needed"))?;
        let spec = PencilSpec {
            n,
            d: mats.len(),
            mats,
            tail,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("pencil size must be positive"));
        }
        if self.n > MAX_PENCIL {
            return Err(Error::invalid(format!("pencil size {} exceeds {MAX_PENCIL}", self.n)));
        }
        if self.mats.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: self.mats.len(),
            });
        }
        for (i, m) in self.mats.iter().enumerate() {
            check_square(m, self.n, &format!("D{}", i + 1))?;
            if !is_positive_definite(m) {
                return Err(Error::invalid(format!("D{} is not symmetric positive definite", i + 1)));
            }
        }
        match &self.tail {
            Tail::None => {}
            Tail::Skew { m } => {
                check_square(m, self.n, "A")?;
                let n = self.n;
                if !(0..n).all(|i| (0..n).all(|j| m[i][j] == -m[j][i])) {
                    return Err(Error::invalid("A is not skew-symmetric"));
                }
            }
            Tail::ImagSym { m } => {
                check_square(m, self.n, "S")?;
                if !is_symmetric(m) {
                    return Err(Error::invalid("S is not symmetric"));
                }
            }
        }
        Ok(())
    }

    pub fn certificate(&self) -> CertificateKind {
        match self.tail {
            Tail::ImagSym { .. } => CertificateKind::DetPencilImag,
            _ => CertificateKind::DetPencilSkew,
        }
    }

    fn constant_part(&self) -> Vec<Vec<C64>> {
        let n = self.n;
        let mut c = vec![vec![C64::zero(); n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = C64::new(1.0, 0.0);
        }
        match &self.tail {
            Tail::None => {}
            Tail::Skew { m } => {
                for i in 0..n {
                    for j in 0..n {
                        c[i][j] += m[i][j];
                    }
                }
            }
            Tail::ImagSym { m } => {
                for i in 0..n {
                    for j in 0..n {
                        c[i][j] += C64::new(0.0, m[i][j]);
                    }
                }
            }
        }
        c
    }
}

/// The expanded determinant and its certificate.
pub fn det_pencil(spec: &PencilSpec) -> Result<(MultiPoly, CertificateKind)> {
    spec.validate()?;
    let p = if spec.n <= MINOR_EXPANSION_MAX {
        det_by_minors(spec)?
    } else {
        det_by_interpolation(spec)?
    };
    Ok((p, spec.certificate()))
}

fn det_by_minors(spec: &PencilSpec) -> Result<MultiPoly> {
    let (n, d) = (spec.n, spec.d);
    let c = spec.constant_part();
    let entry = |i: usize, j: usize| -> Result<MultiPoly> {
        let terms = std::iter::once((vec![0; d], c[i][j])).chain((0..d).map(|k| {
            let mut e = vec![0; d];
            e[k] = 1;
            (e, C64::new(spec.mats[k][i][j], 0.0))
        }));
        MultiPoly::from_terms(d, terms)
    };
    let entries: Vec<Vec<MultiPoly>> = (0..n).map(|i| (0..n).map(|j| entry(i, j)).collect()).collect::<Result<_>>()?;

    // minor[mask] = det of the last popcount(mask) rows restricted to the
    // columns in mask.
    let mut minor: HashMap<u32, MultiPoly> = HashMap::new();
    minor.insert(0, MultiPoly::one(d));
    for size in 1..=n {
        let row = n - size;
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let mut acc = MultiPoly::zero(d);
            let mut sign = 1.0;
            for col in 0..n {
                if mask & (1 << col) == 0 {
                    continue;
                }
                let rest = &minor[&(mask & !(1 << col))];
                let term = entries[row][col].mul(rest)?;
                acc = acc.add(&term.scale_real(sign))?;
                sign = -sign;
            }
            minor.insert(mask, acc);
        }
        minor.retain(|m, _| m.count_ones() as usize >= size);
    }
    let full = minor.remove(&((1u32 << n) - 1)).expect("full minor computed");
    Ok(clean(full, spec))
}

/// Real tails give real determinants; drop the rounding noise.
fn clean(p: MultiPoly, spec: &PencilSpec) -> MultiPoly {
    let scale = p.coefficient_scale();
    let real = !matches!(spec.tail, Tail::ImagSym { .. });
    p.map_coefficients(|_, c| {
        let c = if real { C64::new(c.re, 0.0) } else { c };
        if c.norm() <= 1e-12 * scale {
            C64::zero()
        } else {
            c
        }
    })
}

fn det_by_interpolation(spec: &PencilSpec) -> Result<MultiPoly> {
    let (n, d) = (spec.n, spec.d);
    let m = n + 1;
    let points = m.checked_pow(d as u32).filter(|p| *p <= 1_000_000).ok_or_else(|| {
        Error::invalid(format!("interpolation grid {m}^{d} too large"))
    })?;
    let c = spec.constant_part();
    let roots: Vec<C64> = (0..m)
        .map(|k| C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / m as f64))
        .collect();
    let mut values = vec![C64::zero(); points];
    let mut idx = vec![0usize; d];
    for v in values.iter_mut() {
        let mat = DMatrix::from_fn(n, n, |i, j| {
            let mut e = c[i][j];
            for k in 0..d {
                e += roots[idx[k]] * spec.mats[k][i][j];
            }
            e
        });
        *v = mat.determinant();
        for i in idx.iter_mut() {
            *i += 1;
            if *i < m {
                break;
            }
            *i = 0;
        }
    }
    // Inverse DFT along each axis in turn.
    let mut stride = 1;
    for _ in 0..d {
        let mut next = values.clone();
        for base in 0..points {
            let k = (base / stride) % m;
            if k != 0 {
                continue;
            }
            for a in 0..m {
                let mut s = C64::zero();
                for b in 0..m {
                    s += values[base + b * stride] * roots[(a * b) % m].conj();
                }
                next[base + a * stride] = s / m as f64;
            }
        }
        values = next;
        stride *= m;
    }
    let terms = values.iter().enumerate().map(|(flat, v)| {
        let mut e = vec![0u32; d];
        let mut r = flat;
        for slot in e.iter_mut() {
            *slot = (r % m) as u32;
            r /= m;
        }
        (e, *v)
    });
    Ok(clean(MultiPoly::from_terms(d, terms)?, spec))
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn uniform_matrix(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Matrix {
    (0..n).map(|_| (0..n).map(|_| rng.gen_range(lo..=hi)).collect()).collect()
}

fn gram_plus_shift(m: &Matrix) -> Matrix {
    let n = m.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let s: f64 = (0..n).map(|k| m[k][i] * m[k][j]).sum();
                    if i == j {
                        s + 1e-3
                    } else {
                        s
                    }
                })
                .collect()
        })
        .collect()
}

pub(crate) fn random_pd_with(rng: &mut impl Rng, n: usize) -> Matrix {
    gram_plus_shift(&uniform_matrix(rng, n, -1.0, 1.0))
}

pub(crate) fn random_positive_pd_with(rng: &mut impl Rng, n: usize) -> Matrix {
    gram_plus_shift(&uniform_matrix(rng, n, 0.0, 1.0))
}

pub(crate) fn random_skew_with(rng: &mut impl Rng, n: usize) -> Matrix {
    let m = uniform_matrix(rng, n, -1.0, 1.0);
    (0..n).map(|i| (0..n).map(|j| (m[i][j] - m[j][i]) / 2.0).collect()).collect()
}

pub(crate) fn random_sym_with(rng: &mut impl Rng, n: usize) -> Matrix {
    let m = uniform_matrix(rng, n, -1.0, 1.0);
    (0..n).map(|i| (0..n).map(|j| (m[i][j] + m[j][i]) / 2.0).collect()).collect()
}

/// `M^T M + 1e-3 I` with `M` uniform on `[-1, 1]`.
pub fn random_pd(n: usize, seed: u64) -> Matrix {
    random_pd_with(&mut rng_for(seed), n)
}

/// `M^T M + 1e-3 I` with `M` uniform on `[0, 1]`; every entry positive.
pub fn random_positive_pd(n: usize, seed: u64) -> Matrix {
    random_positive_pd_with(&mut rng_for(seed), n)
}

/// `(M - M^T) / 2`.
pub fn random_skew(n: usize, seed: u64) -> Matrix {
    random_skew_with(&mut rng_for(seed), n)
}

/// `(M + M^T) / 2`.
pub fn random_sym(n: usize, seed: u64) -> Matrix {
    random_sym_with(&mut rng_for(seed), n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailKind {
    None,
    Skew,
    ImagSym,
}

/// Random pencil with `d` PD matrices of size `n`.
pub fn random_pencil(n: usize, d: usize, tail: TailKind, seed: u64) -> Result<PencilSpec> {
    let mut rng = rng_for(seed);
    let mats = (0..d).map(|_| random_pd_with(&mut rng, n)).collect();
    let tail = match tail {
        TailKind::None => Tail::None,
        TailKind::Skew => Tail::Skew {
            m: random_skew_with(&mut rng, n),
        },
        TailKind::ImagSym => Tail::ImagSym {
            m: random_sym_with(&mut rng, n),
        },
    };
    PencilSpec::new(mats, tail)
}

fn numerator_scale(f: &UniPoly, g: &UniPoly) -> f64 {
    f.l1_norm() * g.l1_norm()
}

/// `B(x, y) = (f(x) g(y) - f(y) g(x)) / (x - y)` by synthetic division.
pub fn bezout(f: &UniPoly, g: &UniPoly) -> Result<MultiPoly> {
    if f.degree().unwrap_or(0) < 1 {
        return Err(Error::invalid("bezout needs deg f >= 1"));
    }
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let fx = MultiPoly::from_univariate(f, 2, 0)?;
    let fy = MultiPoly::from_univariate(f, 2, 1)?;
    let gx = MultiPoly::from_univariate(g, 2, 0)?;
    let gy = MultiPoly::from_univariate(g, 2, 1)?;
    let num = fx.mul(&gy)?.sub(&fy.mul(&gx)?)?;

    // num = sum_k N_k(y) x^k; divide by (x - y) from the top.
    let top = num.degree_in(0)?.unwrap_or(0);
    let slices = num.slices(0)?;
    let y = MultiPoly::var(1, 0);
    let mut q: Vec<MultiPoly> = vec![MultiPoly::zero(1); top as usize];
    let mut carry = MultiPoly::zero(1);
    for k in (1..=top as usize).rev() {
        carry = slices[k].add(&carry.mul(&y)?)?;
        q[k - 1] = carry.clone();
    }
    let remainder = slices[0].add(&carry.mul(&y)?)?;
    let scale = numerator_scale(f, g);
    if remainder.coefficient_scale() > 1e-9 * scale {
        return Err(Error::Numerical(format!(
            "Bezout division left a remainder of size {:e}",
            remainder.coefficient_scale()
        )));
    }
    let mut out = MultiPoly::zero(2);
    for (k, qk) in q.iter().enumerate() {
        let xk = MultiPoly::var(2, 0).pow(k as u32);
        out = out.add(&qk.embed(2, &[1])?.mul(&xk)?)?;
    }
    if out.is_zero() {
        return Err(Error::invalid("f and g are proportional; the Bezoutian vanishes"));
    }
    Ok(out)
}

/// `f g' - f' g`.
pub fn wronskian(f: &UniPoly, g: &UniPoly) -> UniPoly {
    &(f * &g.derivative()) - &(&f.derivative() * g)
}

/// Three-term recurrence `f_{k+1} = (a_k x + b_k) f_k - c_k f_{k-1}`,
/// `f_0 = 1`. Members are returned orthonormalized.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthoFamily {
    pub name: String,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrthoPreset {
    Legendre,
    ChebyshevT,
    Hermite,
}

impl OrthoFamily {
    /// Coefficients for `k = 0..len`.
    pub fn preset(kind: OrthoPreset, len: usize) -> Self {
        let (name, a, b, c): (&str, Vec<f64>, Vec<f64>, Vec<f64>) = match kind {
            OrthoPreset::Legendre => (
                "legendre",
                (0..len).map(|k| (2 * k + 1) as f64 / (k + 1) as f64).collect(),
                vec![0.0; len],
                (0..len).map(|k| k as f64 / (k + 1) as f64).collect(),
            ),
            OrthoPreset::ChebyshevT => (
                "chebyshev_t",
                (0..len).map(|k| if k == 0 { 1.0 } else { 2.0 }).collect(),
                vec![0.0; len],
                (0..len).map(|k| if k == 0 { 0.0 } else { 1.0 }).collect(),
            ),
            OrthoPreset::Hermite => ("hermite", vec![1.0; len], vec![0.0; len], (0..len).map(|k| k as f64).collect()),
        };
        OrthoFamily {
            name: name.into(),
            a,
            b,
            c,
        }
    }

    /// Recurrence of `f_k(s x + t)`.
    pub fn substitute(&self, s: f64, t: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite() && t.is_finite()) {
            return Err(Error::invalid("substitution needs s > 0 and finite t"));
        }
        Ok(OrthoFamily {
            name: format!("{}(s={s},t={t})", self.name),
            a: self.a.iter().map(|a| a * s).collect(),
            b: self.a.iter().zip(&self.b).map(|(a, b)| a * t + b).collect(),
            c: self.c.clone(),
        })
    }

    pub fn custom(a: Vec<f64>, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        let fam = OrthoFamily {
            name: "custom".into(),
            a,
            b,
            c,
        };
        fam.validate(fam.a.len())?;
        Ok(fam)
    }

    fn validate(&self, needed: usize) -> Result<()> {
        if self.a.len() < needed || self.b.len() < needed || self.c.len() < needed {
            return Err(Error::invalid(format!("recurrence needs {needed} coefficient triples")));
        }
        for k in 0..needed {
            if !(self.a[k] > 0.0) || !self.b[k].is_finite() || !self.a[k].is_finite() {
                return Err(Error::invalid(format!("a_{k} must be positive")));
            }
            if k > 0 && !(self.c[k] > 0.0 && self.c[k].is_finite()) {
                return Err(Error::invalid(format!("c_{k} must be positive")));
            }
        }
        Ok(())
    }

    /// Orthonormal members `q_0..=q_m`.
    pub fn members(&self, m: usize) -> Result<Vec<UniPoly>> {
        // q_{m} needs a_0..a_{m-1}; its norm needs c_m and a_m.
        self.validate(m + 1)?;
        let mut raw = vec![UniPoly::one()];
        for k in 0..m {
            let lin = UniPoly::from_real(&[self.b[k], self.a[k]]);
            let mut next = &lin * &raw[k];
            if k > 0 {
                next = &next - &raw[k - 1].scale_real(self.c[k]);
            }
            raw.push(next);
        }
        let mut h = vec![1.0];
        for k in 0..m {
            h.push(self.a[k] * self.c[k + 1] * h[k] / self.a[k + 1]);
        }
        let out: Vec<UniPoly> = raw.iter().zip(&h).map(|(p, hk)| p.scale_real(1.0 / hk.sqrt())).collect();
        for (k, p) in out.iter().enumerate().skip(1) {
            if !real_rooted(p, 1e-9)? {
                return Err(Error::invalid(format!("member {k} of the {} family is not real-rooted", self.name)));
            }
        }
        Ok(out)
    }
}

/// `(sum_{i<=n} q_i^2, (k_n/k_{n+1}) (q_n q_{n+1}' - q_n' q_{n+1}))` for the
/// orthonormal members of `family`, `k_i` their leading coefficients.
pub fn christoffel_darboux(family: &OrthoFamily, n: usize) -> Result<(UniPoly, UniPoly)> {
    let q = family.members(n + 1)?;
    let mut sum = UniPoly::zero();
    for p in &q[..=n] {
        sum = sum.add_exact(&(p * p));
    }
    let kn = q[n].leading().expect("non-zero").re;
    let kn1 = q[n + 1].leading().expect("non-zero").re;
    let det = wronskian(&q[n], &q[n + 1]).scale_real(kn / kn1);
    Ok((sum, det))
}

/// `sum a_i g_i(x) x_j^i` where `f = sum a_i y^i` and `g = sum g_i x_j^i`.
pub fn hadamard(f: &UniPoly, g: &MultiPoly, j: usize) -> Result<MultiPoly> {
    if j >= g.nvars() {
        return Err(Error::IndexOutOfRange { index: j, nvars: g.nvars() });
    }
    let a = f.coeffs();
    Ok(g.map_coefficients(|e, c| a.get(e[j] as usize).map_or(C64::zero(), |ai| c * ai)))
}

/// Divides the coefficient of `x_j^i` by `i!`.
pub fn exp_transform(f: &MultiPoly, j: usize) -> Result<MultiPoly> {
    if j >= f.nvars() {
        return Err(Error::IndexOutOfRange { index: j, nvars: f.nvars() });
    }
    Ok(f.map_coefficients(|e, c| c / factorial(e[j])))
}

pub(crate) fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Determinant of a square matrix of polynomials by minors.
pub fn poly_det(m: &[Vec<MultiPoly>]) -> Result<MultiPoly> {
    let n = m.len();
    if n == 0 {
        return Err(Error::invalid("empty matrix"));
    }
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::invalid("matrix must be square"));
    }
    if n > 16 {
        return Err(Error::invalid("matrix too large for expansion by minors"));
    }
    let nv = m[0][0].nvars();
    let mut minor: HashMap<u32, MultiPoly> = HashMap::new();
    minor.insert(0, MultiPoly::one(nv));
    for size in 1..=n {
        let row = n - size;
        let mut next = HashMap::new();
        for &mask in minor.keys() {
            for col in 0..n {
                if mask & (1 << col) != 0 {
                    continue;
                }
                next.entry(mask | (1 << col)).or_insert(());
            }
        }
        let mut layer = HashMap::new();
        for mask in next.into_keys() {
            let mut acc = MultiPoly::zero(nv);
            let mut sign = 1.0;
            for col in 0..n {
                if mask & (1 << col) == 0 {
                    continue;
                }
                let rest = &minor[&(mask & !(1 << col))];
                if !m[row][col].is_zero() && !rest.is_zero() {
                    acc = acc.add(&m[row][col].mul(rest)?.scale_real(sign))?;
                }
                sign = -sign;
            }
            layer.insert(mask, acc);
        }
        minor = layer;
    }
    Ok(minor.remove(&((1u32 << n) - 1)).expect("full minor"))
}

fn slice_or_zero(slices: &[MultiPoly], k: usize, nvars: usize) -> MultiPoly {
    slices.get(k).cloned().unwrap_or_else(|| MultiPoly::zero(nvars))
}

/// `det [f_{base+i+k}]_{i,k<r}` for the slices of `F` along `x_j`.
pub fn coeff_hankel_det(big_f: &MultiPoly, j: usize, r: usize, base: usize) -> Result<MultiPoly> {
    if r == 0 {
        return Err(Error::invalid("determinant size must be positive"));
    }
    let slices = big_f.slices(j)?;
    let nv = big_f.nvars() - 1;
    let m: Vec<Vec<MultiPoly>> = (0..r)
        .map(|i| (0..r).map(|k| slice_or_zero(&slices, base + i + k, nv)).collect())
        .collect();
    poly_det(&m)
}

/// `det [f_{b a}]_{a,b<r}` where `f_{ik}` is the coefficient of
/// `x_j^i x_k^k`; the result lives in the remaining variables.
pub fn double_slice_det(big_f: &MultiPoly, j: usize, k: usize, r: usize) -> Result<MultiPoly> {
    if j == k {
        return Err(Error::invalid("slice variables must differ"));
    }
    if r == 0 {
        return Err(Error::invalid("determinant size must be positive"));
    }
    let n = big_f.nvars();
    if j >= n || k >= n {
        return Err(Error::IndexOutOfRange { index: j.max(k), nvars: n });
    }
    let (hi, lo) = if j > k { (j, k) } else { (k, j) };
    let entry = |a: usize, b: usize| -> Result<MultiPoly> {
        // coefficient of x_j^b x_k^a
        let (pj, pk) = (b as u32, a as u32);
        let (p_hi, p_lo) = if hi == j { (pj, pk) } else { (pk, pj) };
        big_f.coefficient_slice(hi, p_hi)?.coefficient_slice(lo, p_lo)
    };
    let m: Vec<Vec<MultiPoly>> = (0..r).map(|a| (0..r).map(|b| entry(a, b)).collect()).collect::<Result<_>>()?;
    poly_det(&m)
}

/// `(f_0^2, f_1^2 - alpha f_0 f_2)` for the slices along `x_j`.
pub fn alpha_two_det(big_f: &MultiPoly, j: usize, alpha: f64) -> Result<(MultiPoly, MultiPoly)> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::invalid(format!("alpha = {alpha} outside (0, 2)")));
    }
    let slices = big_f.slices(j)?;
    let nv = big_f.nvars() - 1;
    let f0 = slice_or_zero(&slices, 0, nv);
    let f1 = slice_or_zero(&slices, 1, nv);
    let f2 = slice_or_zero(&slices, 2, nv);
    let lhs = f0.mul(&f0)?;
    let rhs = f1.mul(&f1)?.sub(&f0.mul(&f2)?.scale_real(alpha))?;
    Ok((lhs, rhs))
}

fn is_diagonal(m: &Matrix) -> bool {
    (0..m.len()).all(|i| (0..m.len()).all(|j| i == j || m[i][j] == 0.0))
}

/// `f k - g h` where `f, g, h, k` are the coefficients of `1, y, z, yz` in
/// `det(I + x D_1 + y D_2 + z D_3)`.
pub fn pencil_coeff_det(spec: &PencilSpec) -> Result<UniPoly> {
    spec.validate()?;
    if spec.d != 3 {
        return Err(Error::invalid("pencil_coeff_det needs exactly three matrices"));
    }
    if spec.tail != Tail::None {
        return Err(Error::invalid("pencil_coeff_det takes no tail"));
    }
    if !is_diagonal(&spec.mats[0]) {
        return Err(Error::invalid("D1 must be diagonal"));
    }
    if spec.mats[1..].iter().any(|m| m.iter().flatten().any(|v| !(*v > 0.0))) {
        return Err(Error::invalid("D2 and D3 must have positive entries"));
    }
    let (p, _) = det_pencil(spec)?;
    let coeff = |ey: u32, ez: u32| -> Result<UniPoly> {
        p.coefficient_slice(2, ez)?.coefficient_slice(1, ey)?.to_univariate(0)
    };
    let (f, g, h, k) = (coeff(0, 0)?, coeff(1, 0)?, coeff(0, 1)?, coeff(1, 1)?);
    Ok(&(&f * &k) - &(&g * &h))
}

/// Pencil satisfying the preconditions of [`pencil_coeff_det`].
pub fn random_coeff_pencil(n: usize, seed: u64) -> Result<PencilSpec> {
    let mut rng = rng_for(seed);
    let d1: Matrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { rng.gen_range(0.1..2.0) } else { 0.0 }).collect())
        .collect();
    let d2 = random_positive_pd_with(&mut rng, n);
    let d3 = random_positive_pd_with(&mut rng, n);
    PencilSpec::new(vec![d1, d2, d3], Tail::None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Recipe {
    /// Product of affine forms with complex constant terms.
    Product,
    /// Product of affine forms with positive real coefficients.
    RealProduct,
    /// Determinantal pencil with a random tail.
    Pencil,
    /// Pencil with no tail or a skew tail; positive real coefficients.
    RealPencil,
    /// Closure operations applied to a product or pencil.
    Closure,
}

impl Recipe {
    pub const ALL: [Recipe; 5] = [
        Recipe::Product,
        Recipe::RealProduct,
        Recipe::Pencil,
        Recipe::RealPencil,
        Recipe::Closure,
    ];
}

fn affine_product(rng: &mut impl Rng, nvars: usize, degree: usize, real: bool) -> Result<MultiPoly> {
    let mut p = MultiPoly::one(nvars);
    for _ in 0..degree {
        let a = if real {
            C64::new(rng.gen_range(0.1..2.0), 0.0)
        } else {
            C64::new(rng.gen_range(0.0..2.0), rng.gen_range(-1.0..1.0))
        };
        let mut terms = vec![(vec![0; nvars], a)];
        let forced = rng.gen_range(0..nvars);
        for j in 0..nvars {
            if j == forced || rng.gen_bool(0.6) {
                let mut e = vec![0; nvars];
                e[j] = 1;
                terms.push((e, C64::new(rng.gen_range(0.1..2.0), 0.0)));
            }
        }
        p = p.mul(&MultiPoly::from_terms(nvars, terms)?)?;
    }
    Ok(p)
}

/// A random polynomial in `nvars` variables with a stability certificate.
pub fn random_stable(nvars: usize, degree: usize, seed: u64, recipe: Recipe) -> Result<(MultiPoly, CertificateKind)> {
    if degree == 0 {
        return Err(Error::invalid("degree must be at least 1"));
    }
    if nvars == 0 {
        return Err(Error::invalid("at least one variable needed"));
    }
    let mut rng = rng_for(seed);
    match recipe {
        Recipe::Product => Ok((affine_product(&mut rng, nvars, degree, false)?, CertificateKind::LinearProduct)),
        Recipe::RealProduct => Ok((affine_product(&mut rng, nvars, degree, true)?, CertificateKind::LinearProduct)),
        Recipe::Pencil | Recipe::RealPencil => {
            let tails: &[TailKind] = if recipe == Recipe::Pencil {
                &[TailKind::None, TailKind::Skew, TailKind::ImagSym]
            } else {
                &[TailKind::None, TailKind::Skew]
            };
            let tail = tails[rng.gen_range(0..tails.len())];
            let spec = random_pencil(degree.min(MINOR_EXPANSION_MAX), nvars, tail, rng.gen())?;
            det_pencil(&spec)
        }
        Recipe::Closure => {
            let base = if rng.gen_bool(0.5) { Recipe::Product } else { Recipe::Pencil };
            let (mut p, _) = random_stable(nvars, degree + 1, rng.gen(), base)?;
            for _ in 0..rng.gen_range(1..=3) {
                let j = rng.gen_range(0..nvars);
                let next = match rng.gen_range(0..4) {
                    0 => p.partial_derivative(j)?,
                    1 => p.reverse_in_var(j)?,
                    2 => {
                        let a: Vec<f64> = (0..nvars).map(|_| rng.gen_range(0.2..3.0)).collect();
                        p.scale_vars(&a)?
                    }
                    _ => {
                        let s: Vec<C64> = (0..nvars)
                            .map(|_| C64::new(rng.gen_range(0.05..1.0), rng.gen_range(-1.0..1.0)))
                            .collect();
                        p.shift(&s)?
                    }
                };
                if next.degree().unwrap_or(0) >= 1 {
                    p = next;
                }
            }
            Ok((p, CertificateKind::Closure))
        }
    }
}
