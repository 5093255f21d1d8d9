//! Dense complex matrices, Hermitian spectra and monotone functional calculus.
//!
//! Everything downstream (isocones, causal cones, Connes distances) works with
//! matrices of dimension at most 16, so the eigen-solver is a closed form for
//! dimension 2 and cyclic complex Jacobi rotations otherwise.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest dimension the eigen-solver is meant for.
pub const MAX_DIM: usize = 16;

/// Tolerance used when validating Hermiticity on construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Default tolerance for [`is_psd`].
pub const DEFAULT_PSD_TOL: f64 = 1e-9;

const MAX_SWEEPS: usize = 100;

pub(crate) const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct CMat {
    dim: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from row-major entries.
    pub fn from_rows(dim: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend(row.iter().map(|&x| c(x, 0.0)));
        }
        Ok(Self { dim, data })
    }

    pub fn diag(values: &[C64]) -> Self {
        Self::from_fn(values.len(), |i, j| if i == j { values[i] } else { c(0.0, 0.0) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        self.data[i * self.dim + j] = value;
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(c(s, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest |a_ij - conj(a_ji)|.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Largest |a_ij + conj(a_ji)|.
    pub fn anti_hermitian_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self.get(i, j) + self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn try_add(&self, other: &CMat) -> Result<CMat> {
        self.check_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &CMat) -> Result<CMat> {
        self.check_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn try_mul(&self, other: &CMat) -> Result<CMat> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik == c(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += aik * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CMat) -> CMat {
        let (n, m) = (self.dim, other.dim);
        CMat::from_fn(n * m, |i, j| self.get(i / m, j / m) * other.get(i % m, j % m))
    }

    /// Assembles `[[a, b], [c, d]]` from four equal-size blocks.
    pub fn from_blocks(a: &CMat, b: &CMat, c_: &CMat, d: &CMat) -> Result<CMat> {
        for blk in [b, c_, d] {
            a.check_dim(blk)?;
        }
        let n = a.dim;
        Ok(CMat::from_fn(2 * n, |i, j| {
            let blk = match (i < n, j < n) {
                (true, true) => a,
                (true, false) => b,
                (false, true) => c_,
                (false, false) => d,
            };
            blk.get(i % n, j % n)
        }))
    }

    /// `v^H A v`.
    pub fn quadratic_form(&self, v: &[C64]) -> C64 {
        let n = self.dim;
        let mut acc = c(0.0, 0.0);
        for i in 0..n {
            let mut row = c(0.0, 0.0);
            for (j, vj) in v.iter().enumerate().take(n) {
                row += self.get(i, j) * vj;
            }
            acc += v[i].conj() * row;
        }
        acc
    }

    fn check_dim(&self, other: &CMat) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self.get(i, j);
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for &CMat {
    type Output = CMat;
    fn add(self, rhs: &CMat) -> CMat {
        self.try_add(rhs).expect("matrix dimensions must agree")
    }
}

impl Sub for &CMat {
    type Output = CMat;
    fn sub(self, rhs: &CMat) -> CMat {
        self.try_sub(rhs).expect("matrix dimensions must agree")
    }
}

impl Mul for &CMat {
    type Output = CMat;
    fn mul(self, rhs: &CMat) -> CMat {
        self.try_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl Neg for &CMat {
    type Output = CMat;
    fn neg(self) -> CMat {
        self.scale_real(-1.0)
    }
}

pub fn sigma_x() -> CMat {
    CMat::from_fn(2, |i, j| if i != j { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

pub fn sigma_y() -> CMat {
    CMat::from_fn(2, |i, j| match (i, j) {
        (0, 1) => c(0.0, -1.0),
        (1, 0) => c(0.0, 1.0),
        _ => c(0.0, 0.0),
    })
}

pub fn sigma_z() -> CMat {
    CMat::diag(&[c(1.0, 0.0), c(-1.0, 0.0)])
}

/// Complex Hermitian matrix. Symmetrized exactly on construction.
#[derive(Clone, PartialEq)]
pub struct HermMat(CMat);

impl HermMat {
    /// Validates Hermiticity (relative to the matrix scale) and symmetrizes `(a + a*)/2`.
    pub fn new(m: CMat) -> Result<Self> {
        if m.dim == 0 {
            return Err(Error::InvalidMatrix("dimension must be positive".into()));
        }
        if m.data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        let deviation = m.hermitian_deviation();
        if deviation > HERMITIAN_TOL * m.max_abs().max(1.0) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self::symmetrized(&m))
    }

    fn symmetrized(m: &CMat) -> Self {
        let n = m.dim;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            out.set(i, i, c(m.get(i, i).re, 0.0));
            for j in (i + 1)..n {
                let z = (m.get(i, j) + m.get(j, i).conj()) * 0.5;
                out.set(i, j, z);
                out.set(j, i, z.conj());
            }
        }
        HermMat(out)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::new(CMat::from_real_rows(rows)?)
    }

    pub fn identity(dim: usize) -> Self {
        HermMat(CMat::identity(dim))
    }

    pub fn zeros(dim: usize) -> Self {
        HermMat(CMat::zeros(dim))
    }

    /// `value * I`.
    pub fn scalar(dim: usize, value: f64) -> Self {
        HermMat(CMat::identity(dim).scale_real(value))
    }

    pub fn from_real_diag(values: &[f64]) -> Self {
        let d: Vec<C64> = values.iter().map(|&x| c(x, 0.0)).collect();
        HermMat(CMat::diag(&d))
    }

    /// `c I₂ + v·σ`.
    pub fn from_bloch(scalar: f64, v: [f64; 3]) -> Self {
        HermMat(CMat::from_fn(2, |i, j| match (i, j) {
            (0, 0) => c(scalar + v[2], 0.0),
            (1, 1) => c(scalar - v[2], 0.0),
            (0, 1) => c(v[0], -v[1]),
            _ => c(v[0], v[1]),
        }))
    }

    /// Rank-one projector `|ξ⟩⟨ξ|` for a (normalized) vector.
    pub fn projector(xi: &[C64]) -> Self {
        HermMat::symmetrized(&CMat::from_fn(xi.len(), |i, j| xi[i] * xi[j].conj()))
    }

    /// Splits a 2×2 Hermitian matrix as `c I₂ + v·σ`.
    pub fn bloch_decompose(&self) -> Result<(f64, [f64; 3])> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: self.dim(),
            });
        }
        let a = &self.0;
        let (a00, a11, a01) = (a.get(0, 0).re, a.get(1, 1).re, a.get(0, 1));
        Ok(((a00 + a11) / 2.0, [a01.re, -a01.im, (a00 - a11) / 2.0]))
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0.get(i, j)
    }

    pub fn as_cmat(&self) -> &CMat {
        &self.0
    }

    pub fn into_cmat(self) -> CMat {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn try_add(&self, other: &HermMat) -> Result<HermMat> {
        Ok(HermMat(self.0.try_add(&other.0)?))
    }

    pub fn try_sub(&self, other: &HermMat) -> Result<HermMat> {
        Ok(HermMat(self.0.try_sub(&other.0)?))
    }

    pub fn scale(&self, s: f64) -> HermMat {
        HermMat(self.0.scale_real(s))
    }

    pub fn shift(&self, s: f64) -> HermMat {
        let mut m = self.0.clone();
        for i in 0..m.dim {
            m.set(i, i, m.get(i, i) + c(s, 0.0));
        }
        HermMat(m)
    }

    /// `U a U*` for a unitary `U`.
    pub fn conjugate_by(&self, u: &CMat) -> Result<HermMat> {
        let m = u.try_mul(&self.0)?.try_mul(&u.adjoint())?;
        Ok(HermMat::symmetrized(&m))
    }

    /// Expectation `⟨ξ, a ξ⟩` in a vector state.
    pub fn expectation(&self, xi: &[C64]) -> f64 {
        self.0.quadratic_form(xi).re
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        spectrum(self)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(eigenvalues(self)?[0])
    }

    pub fn max_eigenvalue(&self) -> Result<f64> {
        Ok(*eigenvalues(self)?.last().expect("non-empty spectrum"))
    }

    /// Real vectorization in the orthonormal basis of `ℜ(M_n)`.
    pub fn to_real_vector(&self) -> Vec<f64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            out.push(self.get(i, i).re);
            for j in (i + 1)..n {
                let z = self.get(i, j);
                out.push(z.re * std::f64::consts::SQRT_2);
                out.push(z.im * std::f64::consts::SQRT_2);
            }
        }
        out
    }
}

impl fmt::Debug for HermMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Herm")?;
        self.0.fmt(f)
    }
}

impl TryFrom<CMat> for HermMat {
    type Error = Error;
    fn try_from(m: CMat) -> Result<Self> {
        HermMat::new(m)
    }
}

/// JSON layout `{dim, re, im}` with row-major entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&CMat> for MatrixJson {
    fn from(m: &CMat) -> Self {
        MatrixJson {
            dim: m.dim,
            re: m.data.iter().map(|z| z.re).collect(),
            im: m.data.iter().map(|z| z.im).collect(),
        }
    }
}

impl TryFrom<MatrixJson> for CMat {
    type Error = Error;
    fn try_from(j: MatrixJson) -> Result<Self> {
        if j.re.len() != j.dim * j.dim || j.im.len() != j.dim * j.dim {
            return Err(Error::InvalidMatrix(format!(
                "expected {} real and imaginary entries for dim {}",
                j.dim * j.dim,
                j.dim
            )));
        }
        CMat::from_rows(j.dim, j.re.iter().zip(&j.im).map(|(&r, &i)| c(r, i)).collect())
    }
}

impl Serialize for CMat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CMat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        CMat::try_from(j).map_err(serde::de::Error::custom)
    }
}

impl Serialize for HermMat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermMat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = CMat::deserialize(d)?;
        HermMat::new(m).map_err(serde::de::Error::custom)
    }
}

/// Spectral decomposition with rank-one eigenprojectors, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenprojectors: Vec<HermMat>,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    /// `Σ g(λᵢ) Pᵢ`.
    pub fn recombine(&self, mut g: impl FnMut(f64) -> f64) -> HermMat {
        let n = self.eigenprojectors[0].dim();
        let mut acc = CMat::zeros(n);
        for (lam, p) in self.eigenvalues.iter().zip(&self.eigenprojectors) {
            acc = &acc + &p.0.scale_real(g(*lam));
        }
        HermMat::symmetrized(&acc)
    }
}

/// Eigen-decomposition: closed form in dimension ≤ 2, cyclic Jacobi otherwise.
pub fn spectrum(a: &HermMat) -> Result<Spectrum> {
    let (values, vectors) = eigen_pairs(a)?;
    let eigenprojectors = vectors.iter().map(|v| HermMat::projector(v)).collect();
    Ok(Spectrum {
        eigenvalues: values,
        eigenprojectors,
    })
}

/// Eigenvalues only, ascending.
pub fn eigenvalues(a: &HermMat) -> Result<Vec<f64>> {
    match a.dim() {
        1 => Ok(vec![a.get(0, 0).re]),
        2 => {
            let (s, v) = a.bloch_decompose()?;
            let r = norm3(v);
            Ok(vec![s - r, s + r])
        }
        _ => Ok(jacobi(a.as_cmat())?.0),
    }
}

/// Eigenvalues ascending with unit eigenvectors.
pub fn eigen_pairs(a: &HermMat) -> Result<(Vec<f64>, Vec<Vec<C64>>)> {
    match a.dim() {
        1 => Ok((vec![a.get(0, 0).re], vec![vec![c(1.0, 0.0)]])),
        2 => Ok(eigen_2x2(a)),
        _ => {
            let (values, v) = jacobi(a.as_cmat())?;
            let n = a.dim();
            let vectors = (0..n).map(|k| (0..n).map(|i| v.get(i, k)).collect()).collect();
            Ok((values, vectors))
        }
    }
}

fn eigen_2x2(a: &HermMat) -> (Vec<f64>, Vec<Vec<C64>>) {
    let (s, v) = a.bloch_decompose().expect("dimension checked by caller");
    let r = norm3(v);
    if r <= f64::MIN_POSITIVE * 1e4 {
        return (
            vec![s, s],
            vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]],
        );
    }
    let n = [v[0] / r, v[1] / r, v[2] / r];
    let minus = [-n[0], -n[1], -n[2]];
    (vec![s - r, s + r], vec![bloch_to_vector(minus), bloch_to_vector(n)])
}

/// Unit vector whose projector has Bloch vector `n`.
pub fn bloch_to_vector(n: [f64; 3]) -> Vec<C64> {
    let cos_half = ((1.0 + n[2]) / 2.0).max(0.0).sqrt();
    let sin_half = ((1.0 - n[2]) / 2.0).max(0.0).sqrt();
    let rho = (n[0] * n[0] + n[1] * n[1]).sqrt();
    let phase = if rho > 0.0 {
        c(n[0] / rho, n[1] / rho)
    } else {
        c(1.0, 0.0)
    };
    vec![c(cos_half, 0.0), phase * sin_half]
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Cyclic Jacobi for complex Hermitian matrices. Returns ascending eigenvalues and
/// the unitary whose columns are the matching eigenvectors.
fn jacobi(a: &CMat) -> Result<(Vec<f64>, CMat)> {
    let n = a.dim;
    let mut m = a.clone();
    let mut v = CMat::identity(n);
    let scale = m.frobenius_norm();
    if !scale.is_finite() {
        return Err(Error::NoConvergence { sweeps: 0 });
    }
    let mut converged = scale == 0.0;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| m.get(p, q).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let sorted = CMat::from_fn(n, |i, k| v.get(i, order[k]));
    Ok((values, sorted))
}

/// Annihilates `m[p][q]` with the unitary `R = diag(1, e^{-iφ}) · J(θ)` on the (p, q) plane.
fn rotate(m: &mut CMat, v: &mut CMat, p: usize, q: usize) {
    let apq = m.get(p, q);
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let phase = apq / g;
    let (alpha, beta) = (m.get(p, p).re, m.get(q, q).re);
    let tau = (beta - alpha) / (2.0 * g);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let cs = 1.0 / (1.0 + t * t).sqrt();
    let sn = t * cs;
    let r_pp = c(cs, 0.0);
    let r_pq = c(sn, 0.0);
    let r_qp = phase.conj() * (-sn);
    let r_qq = phase.conj() * cs;
    let n = m.dim;
    // M <- M R
    for k in 0..n {
        let (mkp, mkq) = (m.get(k, p), m.get(k, q));
        m.set(k, p, mkp * r_pp + mkq * r_qp);
        m.set(k, q, mkp * r_pq + mkq * r_qq);
        let (vkp, vkq) = (v.get(k, p), v.get(k, q));
        v.set(k, p, vkp * r_pp + vkq * r_qp);
        v.set(k, q, vkp * r_pq + vkq * r_qq);
    }
    // M <- R^H M
    for k in 0..n {
        let (mpk, mqk) = (m.get(p, k), m.get(q, k));
        m.set(p, k, r_pp.conj() * mpk + r_qp.conj() * mqk);
        m.set(q, k, r_pq.conj() * mpk + r_qq.conj() * mqk);
    }
    m.set(p, q, c(0.0, 0.0));
    m.set(q, p, c(0.0, 0.0));
    m.set(p, p, c(m.get(p, p).re, 0.0));
    m.set(q, q, c(m.get(q, q).re, 0.0));
}

/// Continuous non-decreasing piecewise-linear function, affine beyond the outer knots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MonotoneFnRepr", into = "MonotoneFnRepr")]
pub struct MonotoneFn {
    knots: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct MonotoneFnRepr {
    knots: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<MonotoneFnRepr> for MonotoneFn {
    type Error = Error;
    fn try_from(r: MonotoneFnRepr) -> Result<Self> {
        MonotoneFn::new(r.knots, r.values)
    }
}

impl From<MonotoneFn> for MonotoneFnRepr {
    fn from(f: MonotoneFn) -> Self {
        MonotoneFnRepr {
            knots: f.knots,
            values: f.values,
        }
    }
}

impl MonotoneFn {
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if knots.is_empty() || knots.len() != values.len() {
            return Err(Error::InvalidMonotone(
                "need equally many knots and values, at least one".into(),
            ));
        }
        if knots.iter().chain(&values).any(|x| !x.is_finite()) {
            return Err(Error::InvalidMonotone("non-finite knot or value".into()));
        }
        if knots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidMonotone("knots must be strictly increasing".into()));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidMonotone("values must be non-decreasing".into()));
        }
        Ok(Self { knots, values })
    }

    pub fn identity() -> Self {
        Self {
            knots: vec![0.0, 1.0],
            values: vec![0.0, 1.0],
        }
    }

    pub fn constant(value: f64) -> Self {
        Self {
            knots: vec![0.0],
            values: vec![value],
        }
    }

    /// `x ↦ max(x - at, 0)`, a ramp that is flat below `at`.
    pub fn ramp(at: f64) -> Self {
        Self {
            knots: vec![at, at + 1.0],
            values: vec![0.0, 1.0],
        }
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn segment_slope(&self, k: usize) -> f64 {
        (self.values[k + 1] - self.values[k]) / (self.knots[k + 1] - self.knots[k])
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.knots.len();
        if n == 1 {
            return self.values[0];
        }
        if x <= self.knots[0] {
            return self.values[0] + self.segment_slope(0) * (x - self.knots[0]);
        }
        if x >= self.knots[n - 1] {
            return self.values[n - 1] + self.segment_slope(n - 2) * (x - self.knots[n - 1]);
        }
        let k = self.knots.partition_point(|&t| t <= x) - 1;
        let w = (x - self.knots[k]) / (self.knots[k + 1] - self.knots[k]);
        self.values[k] + w * (self.values[k + 1] - self.values[k])
    }

    /// Right derivative.
    pub fn slope(&self, x: f64) -> f64 {
        let n = self.knots.len();
        if n == 1 {
            return 0.0;
        }
        if x < self.knots[0] {
            return self.segment_slope(0);
        }
        if x >= self.knots[n - 1] {
            return self.segment_slope(n - 2);
        }
        let k = self.knots.partition_point(|&t| t <= x) - 1;
        self.segment_slope(k)
    }
}

/// `f(a) = Σ f(λᵢ) Pᵢ`.
pub fn apply_monotone(a: &HermMat, f: &MonotoneFn) -> Result<HermMat> {
    Ok(spectrum(a)?.recombine(|x| f.eval(x)))
}

/// `min σ(a) ≥ -tol`.
pub fn is_psd(a: &HermMat, tol: f64) -> bool {
    match eigenvalues(a) {
        Ok(ev) => ev[0] >= -tol,
        Err(_) => false,
    }
}

/// Largest singular value, `sqrt(max σ(a* a))`.
pub fn op_norm(a: &CMat) -> f64 {
    let gram = HermMat::symmetrized(&(&a.adjoint() * a));
    match eigenvalues(&gram) {
        Ok(ev) => ev.last().copied().unwrap_or(0.0).max(0.0).sqrt(),
        Err(_) => f64::NAN,
    }
}

/// `ab - ba`. For Hermitian inputs the result is anti-Hermitian.
pub fn commutator(a: &HermMat, b: &HermMat) -> Result<CMat> {
    let ab = a.0.try_mul(&b.0)?;
    let ba = b.0.try_mul(&a.0)?;
    let out = ab.try_sub(&ba)?;
    let dev = out.anti_hermitian_deviation();
    if dev > 1e-9 * (a.0.max_abs() * b.0.max_abs()).max(1.0) {
        return Err(Error::Consistency(format!(
            "commutator of Hermitian matrices deviates from anti-Hermitian by {dev:e}"
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::sampling::random_herm;

    fn reconstruct(s: &Spectrum) -> HermMat {
        s.recombine(|x| x)
    }

    #[test]
    fn spectrum_of_identity_and_diagonal() {
        assert_eq!(spectrum(&HermMat::identity(2)).unwrap().eigenvalues, vec![1.0, 1.0]);
        assert_eq!(
            spectrum(&HermMat::from_real_diag(&[0.0, 1.0])).unwrap().eigenvalues,
            vec![0.0, 1.0]
        );
    }

    #[test]
    fn pauli_x_eigenvalues_match_power_iteration() {
        let px = HermMat::new(sigma_x()).unwrap();
        let ev = spectrum(&px).unwrap().eigenvalues;
        assert_abs_diff_eq!(ev[0], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ev[1], 1.0, epsilon = 1e-15);

        // power iteration on σx + 2I (eigenvalues 1, 3) recovers the top one
        let shifted = px.shift(2.0);
        let mut x = vec![c(1.0, 0.0), c(0.3, 0.0)];
        let mut lam = 0.0;
        for _ in 0..200 {
            let y: Vec<C64> = (0..2)
                .map(|i| (0..2).map(|j| shifted.get(i, j) * x[j]).sum())
                .collect();
            let nrm = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            x = y.iter().map(|z| z / nrm).collect();
            lam = shifted.expectation(&x);
        }
        assert_abs_diff_eq!(lam - 2.0, ev[1], epsilon = 1e-9);
    }

    #[test]
    fn jacobi_handles_complex_entries() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in 3..=MAX_DIM {
            let a = random_herm(&mut rng, dim, 3.0);
            let s = spectrum(&a).unwrap();
            let err = (&reconstruct(&s).0 - &a.0).frobenius_norm();
            assert!(err < 1e-9, "dim {dim}: reconstruction error {err:e}");
            assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            let trace: f64 = s.eigenvalues.iter().sum();
            assert_abs_diff_eq!(trace, a.trace(), epsilon = 1e-9);
        }
    }

    #[test]
    fn spectral_projectors_resolve_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let dim = rng.gen_range(1..=8);
            let s = spectrum(&random_herm(&mut rng, dim, 2.0)).unwrap();
            let mut sum = CMat::zeros(dim);
            for p in &s.eigenprojectors {
                let p2 = &p.0 * &p.0;
                assert!((&p2 - &p.0).frobenius_norm() < 1e-10);
                assert!(p.0.hermitian_deviation() < 1e-10);
                sum = &sum + &p.0;
            }
            assert!((&sum - &CMat::identity(dim)).frobenius_norm() < 1e-10);
        }
    }

    #[test]
    fn degenerate_eigenvalues_in_larger_dims() {
        let a = HermMat::from_real_diag(&[2.0, 2.0, -1.0, 2.0]);
        let s = spectrum(&a).unwrap();
        assert_eq!(s.eigenvalues, vec![-1.0, 2.0, 2.0, 2.0]);
        assert!((&reconstruct(&s).0 - &a.0).frobenius_norm() < 1e-12);
    }

    #[test]
    fn apply_monotone_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_herm(&mut rng, 3, 1.0);
        let id = apply_monotone(&a, &MonotoneFn::identity()).unwrap();
        assert!((&id.0 - &a.0).frobenius_norm() < 1e-10);

        let k = apply_monotone(&a, &MonotoneFn::constant(4.5)).unwrap();
        assert!((&k.0 - &HermMat::scalar(3, 4.5).0).frobenius_norm() < 1e-10);

        let f = MonotoneFn::new(vec![0.0, 1.0], vec![2.0, 5.0]).unwrap();
        let out = apply_monotone(&HermMat::from_real_diag(&[0.0, 1.0]), &f).unwrap();
        assert!((&out.0 - &HermMat::from_real_diag(&[2.0, 5.0]).0).frobenius_norm() < 1e-12);
    }

    #[test]
    fn monotone_fn_extends_affinely_and_validates() {
        let f = MonotoneFn::new(vec![0.0, 1.0, 3.0], vec![0.0, 2.0, 3.0]).unwrap();
        assert_abs_diff_eq!(f.eval(-1.0), -2.0);
        assert_abs_diff_eq!(f.eval(0.5), 1.0);
        assert_abs_diff_eq!(f.eval(2.0), 2.5);
        assert_abs_diff_eq!(f.eval(5.0), 4.0);
        assert_abs_diff_eq!(f.slope(0.0), 2.0);
        assert_abs_diff_eq!(f.slope(1.0), 0.5);
        assert!(MonotoneFn::new(vec![0.0, 1.0], vec![1.0, 0.0]).is_err());
        assert!(MonotoneFn::new(vec![1.0, 1.0], vec![0.0, 0.0]).is_err());
        assert!(MonotoneFn::new(vec![], vec![]).is_err());
    }

    #[test]
    fn psd_examples() {
        assert!(is_psd(&HermMat::identity(2), DEFAULT_PSD_TOL));
        assert!(!is_psd(&HermMat::from_real_diag(&[1.0, -1.0]), DEFAULT_PSD_TOL));
        let ones = HermMat::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        assert!(is_psd(&ones, DEFAULT_PSD_TOL));
    }

    #[test]
    fn op_norm_examples() {
        assert_eq!(op_norm(&CMat::zeros(2)), 0.0);
        assert_abs_diff_eq!(op_norm(HermMat::from_real_diag(&[3.0, -5.0]).as_cmat()), 5.0, epsilon = 1e-12);
        let anti = CMat::from_real_rows(&[&[0.0, 2.0], &[-2.0, 0.0]]).unwrap();
        assert_abs_diff_eq!(op_norm(&anti), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn commutator_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_herm(&mut rng, 2, 1.0);
        assert!(commutator(&a, &a).unwrap().frobenius_norm() < 1e-14);

        let d = HermMat::from_real_diag(&[0.0, 1.0]);
        let x = HermMat::new(sigma_x()).unwrap();
        let expected = CMat::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]).unwrap();
        assert_eq!(commutator(&d, &x).unwrap(), expected);

        let s = HermMat::scalar(2, 3.7);
        assert!(commutator(&s, &a).unwrap().frobenius_norm() < 1e-14);

        assert!(matches!(
            commutator(&HermMat::identity(2), &HermMat::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn construction_rejects_non_hermitian() {
        let m = CMat::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(HermMat::new(m), Err(Error::NotHermitian { .. })));
        // round-off is symmetrized away
        let mut m = CMat::from_real_rows(&[&[1.0, 2.0], &[2.0, 1.0]]).unwrap();
        m.set(1, 0, c(2.0 + 1e-14, 0.0));
        let h = HermMat::new(m).unwrap();
        assert_eq!(h.as_cmat().hermitian_deviation(), 0.0);
    }

    #[test]
    fn bloch_round_trip() {
        let a = HermMat::from_bloch(0.25, [0.1, -0.7, 0.3]);
        let (s, v) = a.bloch_decompose().unwrap();
        assert_abs_diff_eq!(s, 0.25, epsilon = 1e-15);
        for (x, y) in v.iter().zip([0.1, -0.7, 0.3]) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-15);
        }
        let xi = bloch_to_vector([0.0, 1.0, 0.0]);
        let p = HermMat::projector(&xi);
        let (s, v) = p.bloch_decompose().unwrap();
        assert_abs_diff_eq!(s, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(v[1], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn matrix_json_layout() {
        let a = HermMat::from_bloch(0.0, [1.0, 2.0, 0.0]);
        let j = serde_json::to_value(&a).unwrap();
        assert_eq!(j["dim"], 2);
        assert_eq!(j["re"], serde_json::json!([0.0, 1.0, 1.0, 0.0]));
        assert_eq!(j["im"], serde_json::json!([0.0, -2.0, 2.0, 0.0]));
        let back: HermMat = serde_json::from_value(j).unwrap();
        assert_eq!(back, a);
        let bad = serde_json::json!({"dim": 2, "re": [0.0, 1.0, 0.0, 0.0], "im": [0.0, 0.0, 0.0, 0.0]});
        assert!(serde_json::from_value::<HermMat>(bad).is_err());
    }
}
