//! Causal cone of the product Lorentzian spectral triple `ℝ^{1,1} × M₂(ℂ)`.
//!
//! With `D = D_M ⊗ 1 + γ⁰γ¹ ⊗ D_F` and `j = iγ⁰ ⊗ 1`, a Hermitian field `α` satisfies
//! `j[D, α] ≤ 0` at a point exactly when
//!
//! ```text
//! ⎡ 2∂ᵤα       [D_F, α] ⎤
//! ⎣ −[D_F, α]  2∂ᵥα     ⎦  ≥ 0.
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hermitian::{
    apply_monotone, c, commutator, eigenvalues, is_psd, op_norm, spectrum, CMat, HermMat,
    MonotoneFn,
};
use crate::isocone::BlochState;
use crate::minkowski::{causal_leq, lorentz_distance, Event};
use crate::sampling::{self, frame_for_axis, random_herm};

/// Below this gap between `|Δz|` of two states they count as one latitude.
pub const LATITUDE_TOL: f64 = 1e-9;
/// Slack on `ℓ(x, y) ≥ d_NC`.
pub const ORDER_TOL: f64 = 1e-9;

/// `D_F = diag(d1, d2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteDirac {
    pub d1: f64,
    pub d2: f64,
}

impl FiniteDirac {
    pub fn new(d1: f64, d2: f64) -> Self {
        Self { d1, d2 }
    }

    pub fn gap(&self) -> f64 {
        (self.d1 - self.d2).abs()
    }

    pub fn matrix(&self) -> HermMat {
        HermMat::from_real_diag(&[self.d1, self.d2])
    }

    /// Diagonal form of a Hermitian 2×2 Dirac operator, plus the rotation taking Bloch
    /// vectors into its eigenframe (the `d1` eigenvector becomes `+z`).
    pub fn from_matrix(h: &HermMat) -> Result<(Self, [[f64; 3]; 3])> {
        let (s, w) = h.bloch_decompose()?;
        let r = sampling::norm(w);
        let axis = if r > 0.0 { sampling::normalize(w) } else { [0.0, 0.0, 1.0] };
        let f = frame_for_axis(axis);
        // transpose: coordinates with respect to the frame
        let to_frame = [
            [f[0][0], f[1][0], f[2][0]],
            [f[0][1], f[1][1], f[2][1]],
            [f[0][2], f[1][2], f[2][2]],
        ];
        Ok((Self::new(s + r, s - r), to_frame))
    }
}

/// Gamma matrices of the plane, signature `(−, +)`.
pub struct GammaSet;

impl GammaSet {
    pub fn gamma0() -> CMat {
        CMat::from_rows(2, vec![c(0.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap()
    }

    pub fn gamma1() -> CMat {
        CMat::from_rows(2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap()
    }

    /// `j = iγ⁰ ⊗ 1₂`.
    pub fn j() -> CMat {
        Self::gamma0().scale(c(0.0, 1.0)).kron(&CMat::identity(2))
    }

    /// `j[D, α]` assembled from Kronecker products, with `∂₀ = ∂ᵤ + ∂ᵥ`, `∂₁ = ∂ᵤ − ∂ᵥ`.
    pub fn j_commutator(
        alpha_u: &HermMat,
        alpha_v: &HermMat,
        alpha: &HermMat,
        dirac: &FiniteDirac,
    ) -> Result<CMat> {
        let (g0, g1) = (Self::gamma0(), Self::gamma1());
        let d0 = alpha_u.as_cmat() + alpha_v.as_cmat();
        let d1 = alpha_u.as_cmat() - alpha_v.as_cmat();
        let minus_i = c(0.0, -1.0);
        let dm = &g0.scale(minus_i).kron(&d0) + &g1.scale(minus_i).kron(&d1);
        let df = (&g0 * &g1).kron(&commutator(&dirac.matrix(), alpha)?);
        Ok(&Self::j() * &(&dm + &df))
    }
}

fn cone_block(
    alpha_u: &HermMat,
    alpha_v: &HermMat,
    alpha: &HermMat,
    dirac: &FiniteDirac,
) -> Result<HermMat> {
    for m in [alpha_u, alpha_v, alpha] {
        if m.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: m.dim(),
            });
        }
    }
    let comm = commutator(&dirac.matrix(), alpha)?;
    let block = CMat::from_blocks(
        &alpha_u.as_cmat().scale_real(2.0),
        &comm,
        &(-&comm),
        &alpha_v.as_cmat().scale_real(2.0),
    )?;
    let dev = block.hermitian_deviation();
    if dev > 1e-9 * block.max_abs().max(1.0) {
        return Err(Error::Consistency(format!(
            "cone block is not Hermitian (deviation {dev:e})"
        )));
    }
    HermMat::new(block)
}

/// Smallest eigenvalue of the cone block; the condition holds when it is `≥ −tol`.
pub fn cone_margin(
    alpha_u: &HermMat,
    alpha_v: &HermMat,
    alpha: &HermMat,
    dirac: &FiniteDirac,
) -> Result<f64> {
    Ok(eigenvalues(&cone_block(alpha_u, alpha_v, alpha, dirac)?)?[0])
}

/// `j[D, α] ≤ 0` at one point, given `α` and its light-cone derivatives there.
pub fn cone_condition_at(
    alpha_u: &HermMat,
    alpha_v: &HermMat,
    alpha: &HermMat,
    dirac: &FiniteDirac,
    tol: f64,
) -> Result<bool> {
    Ok(is_psd(&cone_block(alpha_u, alpha_v, alpha, dirac)?, tol))
}

/// Scalar fields `f·I₂` are causal iff `∂ᵤf ≥ 0` and `∂ᵥf ≥ 0`.
pub fn scalar_causal_iff(grad_u: f64, grad_v: f64) -> bool {
    grad_u >= 0.0 && grad_v >= 0.0
}

/// Regular `n × n` lattice over `[u_min, u_max] × [v_min, v_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(u_min: f64, u_max: f64, v_min: f64, v_max: f64, n: usize) -> Result<Self> {
        let g = Self {
            u_min,
            u_max,
            v_min,
            v_max,
            n,
        };
        g.validate()?;
        Ok(g)
    }

    /// Square grid `[-half, half]²`.
    pub fn square(half: f64, n: usize) -> Result<Self> {
        Self::new(-half, half, -half, half, n)
    }

    fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::InvalidField(format!("grid needs n ≥ 3, got {}", self.n)));
        }
        let ok = |a: f64, b: f64| a.is_finite() && b.is_finite() && a < b;
        if !ok(self.u_min, self.u_max) || !ok(self.v_min, self.v_max) {
            return Err(Error::InvalidField("grid bounds must be finite with min < max".into()));
        }
        Ok(())
    }

    pub fn hu(&self) -> f64 {
        (self.u_max - self.u_min) / (self.n - 1) as f64
    }

    pub fn hv(&self) -> f64 {
        (self.v_max - self.v_min) / (self.n - 1) as f64
    }

    pub fn u(&self, i: usize) -> f64 {
        self.u_min + i as f64 * self.hu()
    }

    pub fn v(&self, j: usize) -> f64 {
        self.v_min + j as f64 * self.hv()
    }

    pub fn event(&self, i: usize, j: usize) -> Event {
        Event::from_lightcone(self.u(i), self.v(j))
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn index(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }
}

/// Fields with closed-form derivatives.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum AnalyticFamily {
    /// `c + u·a_u + v·a_v`.
    Affine {
        c: HermMat,
        a_u: HermMat,
        a_v: HermMat,
    },
    /// `Σₖ uᵏ gₖ + Σₖ vᵏ hₖ`.
    Separable { g: Vec<HermMat>, h: Vec<HermMat> },
    /// `t·I + a` with `t = (u + v)/2`.
    TimePlusConstant { a: HermMat },
    /// `φ(t·I + a)`.
    MonotoneTimePlusConstant { a: HermMat, phi: MonotoneFn },
}

impl AnalyticFamily {
    pub fn name(&self) -> &'static str {
        match self {
            AnalyticFamily::Affine { .. } => "affine",
            AnalyticFamily::Separable { .. } => "separable",
            AnalyticFamily::TimePlusConstant { .. } => "time-plus-constant",
            AnalyticFamily::MonotoneTimePlusConstant { .. } => "monotone-time-plus-constant",
        }
    }

    fn matrices(&self) -> Vec<&HermMat> {
        match self {
            AnalyticFamily::Affine { c, a_u, a_v } => vec![c, a_u, a_v],
            AnalyticFamily::Separable { g, h } => g.iter().chain(h).collect(),
            AnalyticFamily::TimePlusConstant { a } => vec![a],
            AnalyticFamily::MonotoneTimePlusConstant { a, .. } => vec![a],
        }
    }

    fn validate(&self) -> Result<()> {
        if let AnalyticFamily::Separable { g, h } = self {
            if g.is_empty() || h.is_empty() {
                return Err(Error::InvalidField("separable family needs coefficients".into()));
            }
        }
        for m in self.matrices() {
            if m.dim() != 2 {
                return Err(Error::InvalidField(format!(
                    "{} family needs 2×2 matrices, got {}×{}",
                    self.name(),
                    m.dim(),
                    m.dim()
                )));
            }
        }
        Ok(())
    }

    pub fn value(&self, u: f64, v: f64) -> Result<HermMat> {
        let t = 0.5 * (u + v);
        match self {
            AnalyticFamily::Affine { c, a_u, a_v } => {
                c.try_add(&a_u.scale(u))?.try_add(&a_v.scale(v))
            }
            AnalyticFamily::Separable { g, h } => {
                let mut acc = HermMat::zeros(2);
                for (k, gk) in g.iter().enumerate() {
                    acc = acc.try_add(&gk.scale(u.powi(k as i32)))?;
                }
                for (k, hk) in h.iter().enumerate() {
                    acc = acc.try_add(&hk.scale(v.powi(k as i32)))?;
                }
                Ok(acc)
            }
            AnalyticFamily::TimePlusConstant { a } => Ok(a.shift(t)),
            AnalyticFamily::MonotoneTimePlusConstant { a, phi } => apply_monotone(&a.shift(t), phi),
        }
    }

    /// `(∂ᵤα, ∂ᵥα)`.
    pub fn derivatives(&self, u: f64, v: f64) -> Result<(HermMat, HermMat)> {
        match self {
            AnalyticFamily::Affine { a_u, a_v, .. } => Ok((a_u.clone(), a_v.clone())),
            AnalyticFamily::Separable { g, h } => {
                let poly_deriv = |coeffs: &[HermMat], x: f64| -> Result<HermMat> {
                    let mut acc = HermMat::zeros(2);
                    for (k, ck) in coeffs.iter().enumerate().skip(1) {
                        acc = acc.try_add(&ck.scale(k as f64 * x.powi(k as i32 - 1)))?;
                    }
                    Ok(acc)
                };
                Ok((poly_deriv(g, u)?, poly_deriv(h, v)?))
            }
            AnalyticFamily::TimePlusConstant { .. } => {
                Ok((HermMat::scalar(2, 0.5), HermMat::scalar(2, 0.5)))
            }
            AnalyticFamily::MonotoneTimePlusConstant { a, phi } => {
                let t = 0.5 * (u + v);
                let d = spectrum(&a.shift(t))?.recombine(|x| 0.5 * phi.slope(x));
                Ok((d.clone(), d))
            }
        }
    }
}

/// How derivatives of a [`MatrixField`] are obtained.
#[derive(Clone, Debug, PartialEq)]
pub enum DerivativeScheme {
    FiniteDifference,
    Analytic(AnalyticFamily),
}

/// Hermitian 2×2 matrix field sampled on a [`Grid`]; `values[i·n + j]` sits at `(u_i, v_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixField {
    grid: Grid,
    values: Vec<HermMat>,
    scheme: DerivativeScheme,
}

impl MatrixField {
    /// Samples with finite-difference derivatives.
    pub fn sampled(grid: Grid, values: Vec<HermMat>) -> Result<Self> {
        grid.validate()?;
        if values.len() != grid.len() {
            return Err(Error::InvalidField(format!(
                "expected {} values for an {}×{} grid, got {}",
                grid.len(),
                grid.n,
                grid.n,
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|m| m.dim() != 2) {
            return Err(Error::InvalidField(format!(
                "field values must be 2×2, got {}×{}",
                bad.dim(),
                bad.dim()
            )));
        }
        Ok(Self {
            grid,
            values,
            scheme: DerivativeScheme::FiniteDifference,
        })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> HermMat) -> Result<Self> {
        grid.validate()?;
        let values = (0..grid.n)
            .flat_map(|i| (0..grid.n).map(move |j| (i, j)))
            .map(|(i, j)| f(grid.u(i), grid.v(j)))
            .collect();
        Self::sampled(grid, values)
    }

    pub fn analytic(grid: Grid, family: AnalyticFamily) -> Result<Self> {
        grid.validate()?;
        family.validate()?;
        let values = (0..grid.n)
            .flat_map(|i| (0..grid.n).map(move |j| (i, j)))
            .map(|(i, j)| family.value(grid.u(i), grid.v(j)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            grid,
            values,
            scheme: DerivativeScheme::Analytic(family),
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn scheme(&self) -> &DerivativeScheme {
        &self.scheme
    }

    pub fn value(&self, i: usize, j: usize) -> &HermMat {
        &self.values[self.grid.index(i, j)]
    }

    /// `(∂ᵤα, ∂ᵥα, slack)` at a node; `slack` bounds the discretization error of the cone
    /// block and is zero for analytic fields.
    pub fn derivatives_at(&self, i: usize, j: usize) -> Result<(HermMat, HermMat, f64)> {
        match &self.scheme {
            DerivativeScheme::Analytic(fam) => {
                let (du, dv) = fam.derivatives(self.grid.u(i), self.grid.v(j))?;
                Ok((du, dv, 0.0))
            }
            DerivativeScheme::FiniteDifference => {
                let (du, eu) = self.difference(i, self.grid.hu(), |k| self.value(k, j))?;
                let (dv, ev) = self.difference(j, self.grid.hv(), |k| self.value(i, k))?;
                Ok((du, dv, 2.0 * eu.max(ev)))
            }
        }
    }

    /// Second-order difference along one axis, with a Richardson error estimate
    /// `‖D_{2h} − D_h‖/3`. Nodes next to the edge borrow the estimate of the nearest node
    /// whose stencil fits; grids with `n < 5` get no estimate.
    fn difference<'a>(
        &'a self,
        k: usize,
        h: f64,
        at: impl Fn(usize) -> &'a HermMat,
    ) -> Result<(HermMat, f64)> {
        let n = self.grid.n;
        let combo = |terms: &[(usize, f64)], step: f64| -> Result<HermMat> {
            let mut acc = HermMat::zeros(2);
            for &(idx, w) in terms {
                acc = acc.try_add(&at(idx).scale(w / step))?;
            }
            Ok(acc)
        };
        let stencil = |k: usize, spacing: usize| -> Result<HermMat> {
            let s = spacing;
            let step = 2.0 * h * s as f64;
            if k == 0 {
                combo(&[(0, -3.0), (s, 4.0), (2 * s, -1.0)], step)
            } else if k == n - 1 {
                combo(&[(k, 3.0), (k - s, -4.0), (k - 2 * s, 1.0)], step)
            } else {
                combo(&[(k + s, 1.0), (k - s, -1.0)], step)
            }
        };
        let dh = stencil(k, 1)?;
        let err = if n >= 5 {
            let e = if k == 0 || k == n - 1 { k } else { k.clamp(2, n - 3) };
            stencil(e, 2)?.try_sub(&stencil(e, 1)?)?.as_cmat().frobenius_norm() / 3.0
        } else {
            0.0
        };
        Ok((dh, err))
    }
}

/// Result of [`field_in_cone`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldCheck {
    pub in_cone: bool,
    /// Node `(i, j)` with the smallest linear index that fails.
    pub first_failure: Option<(usize, usize)>,
    /// Smallest cone-block eigenvalue over the grid.
    pub worst_margin: f64,
}

/// Checks [`cone_condition_at`] at every node; nodes are processed in parallel.
pub fn field_in_cone(f: &MatrixField, dirac: &FiniteDirac, tol: f64) -> Result<FieldCheck> {
    let n = f.grid.n;
    let per_node: Vec<(bool, f64)> = (0..f.grid.len())
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let (du, dv, slack) = f.derivatives_at(i, j)?;
            let margin = cone_margin(&du, &dv, f.value(i, j), dirac)?;
            Ok((margin >= -(tol + slack), margin))
        })
        .collect::<Result<_>>()?;
    let first = per_node.iter().position(|(ok, _)| !ok);
    Ok(FieldCheck {
        in_cone: first.is_none(),
        first_failure: first.map(|idx| (idx / n, idx % n)),
        worst_margin: per_node.iter().map(|p| p.1).fold(f64::INFINITY, f64::min),
    })
}

#[derive(Serialize, Deserialize)]
struct FieldJson {
    grid: Grid,
    values: Vec<HermMat>,
    derivatives: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<serde_json::Value>,
}

impl Serialize for MatrixField {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (derivatives, params) = match &self.scheme {
            DerivativeScheme::FiniteDifference => ("finite-difference".to_string(), None),
            DerivativeScheme::Analytic(fam) => {
                let mut v = serde_json::to_value(fam).map_err(serde::ser::Error::custom)?;
                if let Some(obj) = v.as_object_mut() {
                    obj.remove("family");
                }
                (format!("analytic:{}", fam.name()), Some(v))
            }
        };
        FieldJson {
            grid: self.grid,
            values: self.values.clone(),
            derivatives,
            params,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatrixField {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = FieldJson::deserialize(d)?;
        if j.derivatives == "finite-difference" {
            return MatrixField::sampled(j.grid, j.values).map_err(D::Error::custom);
        }
        let Some(name) = j.derivatives.strip_prefix("analytic:") else {
            return Err(D::Error::custom(format!(
                "derivatives must be \"finite-difference\" or \"analytic:<family>\", got {:?}",
                j.derivatives
            )));
        };
        let mut params = j
            .params
            .ok_or_else(|| D::Error::custom("analytic fields need a \"params\" object"))?;
        params
            .as_object_mut()
            .ok_or_else(|| D::Error::custom("\"params\" must be an object"))?
            .insert("family".into(), serde_json::Value::String(name.into()));
        let family: AnalyticFamily = serde_json::from_value(params).map_err(D::Error::custom)?;
        let field = MatrixField::analytic(j.grid, family).map_err(D::Error::custom)?;
        if field.values.len() != j.values.len() {
            return Err(D::Error::custom("value count does not match the grid"));
        }
        for (k, (a, b)) in field.values.iter().zip(&j.values).enumerate() {
            let dev = a.try_sub(b).map_err(D::Error::custom)?.as_cmat().max_abs();
            if dev > 1e-9 * a.as_cmat().max_abs().max(1.0) {
                return Err(D::Error::custom(format!(
                    "value {k} differs from the analytic family by {dev:e}"
                )));
            }
        }
        Ok(field)
    }
}

/// Connes distance: finite, or `+∞` between states of different latitude.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Distance {
    Finite(f64),
    Infinite,
}

impl Distance {
    pub fn finite(&self) -> Option<f64> {
        match *self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Distance::Infinite)
    }
}

impl Serialize for Distance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Distance::Finite(d) => s.serialize_f64(d),
            Distance::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// `sup{|tr((p₁ − p₂)a)| : ‖[D_F, a]‖ ≤ 1}`.
///
/// Only the off-diagonal part of `a` is constrained, with `‖[D_F, a]‖ = gap·|a₀₁|`; the
/// diagonal part pairs with `Δz` and makes the supremum infinite unless `Δz = 0`. At
/// equal latitude the value is `|n₁ − n₂| / gap`.
pub fn connes_distance(dirac: &FiniteDirac, s1: &BlochState, s2: &BlochState) -> Result<Distance> {
    let gap = dirac.gap();
    if gap == 0.0 {
        return Err(Error::DegenerateDirac(dirac.d1));
    }
    let (n1, n2) = (s1.bloch(), s2.bloch());
    if (n1[2] - n2[2]).abs() > LATITUDE_TOL {
        return Ok(Distance::Infinite);
    }
    Ok(Distance::Finite((n1[0] - n2[0]).hypot(n1[1] - n2[1]) / gap))
}

/// Order on pure states `(x, ω)` of the product algebra, with knife-edge flag.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProductRelation {
    pub related: bool,
    pub lorentz: f64,
    pub distance: Distance,
    /// `|ℓ − d_NC| < 1e-9`: the verdict sits on the boundary case of the criterion.
    pub knife_edge: bool,
}

/// `(x, s1) ≼ (y, s2)` iff `x ≤ y` and `ℓ(x, y) ≥ d_NC(s1, s2)`.
pub fn product_state_relation(
    dirac: &FiniteDirac,
    x: &Event,
    s1: &BlochState,
    y: &Event,
    s2: &BlochState,
) -> Result<ProductRelation> {
    let distance = connes_distance(dirac, s1, s2)?;
    let lorentz = lorentz_distance(x, y);
    let (related, knife_edge) = match distance {
        Distance::Infinite => (false, false),
        Distance::Finite(d) => (
            causal_leq(x, y) && lorentz >= d - ORDER_TOL,
            (lorentz - d).abs() < ORDER_TOL,
        ),
    };
    Ok(ProductRelation {
        related,
        lorentz,
        distance,
        knife_edge,
    })
}

pub fn product_state_order(
    dirac: &FiniteDirac,
    x: &Event,
    s1: &BlochState,
    y: &Event,
    s2: &BlochState,
) -> Result<bool> {
    Ok(product_state_relation(dirac, x, s1, y, s2)?.related)
}

/// Eigenvalue behaviour of a cone member between two causally related nodes.
#[derive(Clone, Debug, Serialize)]
pub struct ClockReport {
    pub x: (usize, usize),
    pub y: (usize, usize),
    pub lambda_x: [f64; 2],
    pub lambda_y: [f64; 2],
    pub lorentz: f64,
    /// `λ₂(x) > λ₁(y)`: the field is not isotone for the spectral order.
    pub phenomenon: bool,
    pub paths_checked: usize,
    /// Each eigenvalue is non-decreasing along every sampled causal lattice path.
    pub eigenvalues_monotone: bool,
    /// `α(y) − α(x) ≥ 0`.
    pub operator_monotone: bool,
}

/// Tolerance for the monotonicity checks in [`eigenvalue_clock_probe`].
pub const CLOCK_TOL: f64 = 1e-9;

/// Compares `λᵢ(x)` with `λᵢ(y)` for a cone member and two nodes `x ≤ y`.
pub fn eigenvalue_clock_probe(
    f: &MatrixField,
    dirac: &FiniteDirac,
    x: (usize, usize),
    y: (usize, usize),
    paths: usize,
    seed: u64,
) -> Result<ClockReport> {
    let n = f.grid.n;
    if x.0 >= n || x.1 >= n || y.0 >= n || y.1 >= n {
        return Err(Error::Domain("node outside the grid".into()));
    }
    if !(x.0 <= y.0 && x.1 <= y.1) {
        return Err(Error::Domain(format!("node {x:?} is not causally below {y:?}")));
    }
    if !field_in_cone(f, dirac, CLOCK_TOL)?.in_cone {
        return Err(Error::Domain("the probe needs a field in the causal cone".into()));
    }
    let lam = |node: (usize, usize)| -> Result<[f64; 2]> {
        let ev = eigenvalues(f.value(node.0, node.1))?;
        Ok([ev[0], ev[1]])
    };
    let (lx, ly) = (lam(x)?, lam(y)?);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut monotone = true;
    for _ in 0..paths {
        let (mut i, mut j) = x;
        let mut prev = lx;
        while (i, j) != y {
            let step_u = j == y.1 || (i < y.0 && rng.gen_bool(0.5));
            if step_u {
                i += 1;
            } else {
                j += 1;
            }
            let cur = lam((i, j))?;
            monotone &= cur[0] >= prev[0] - CLOCK_TOL && cur[1] >= prev[1] - CLOCK_TOL;
            prev = cur;
        }
    }
    let diff = f.value(y.0, y.1).try_sub(f.value(x.0, x.1))?;
    Ok(ClockReport {
        x,
        y,
        lambda_x: lx,
        lambda_y: ly,
        lorentz: lorentz_distance(&f.grid.event(x.0, x.1), &f.grid.event(y.0, y.1)),
        phenomenon: lx[1] > ly[0] + CLOCK_TOL,
        paths_checked: paths,
        eigenvalues_monotone: monotone,
        operator_monotone: is_psd(&diff, CLOCK_TOL),
    })
}

/// First causally related node pair of a cone member with `λ₂(x) > λ₁(y)`, if any.
pub fn find_clock_phenomenon(
    f: &MatrixField,
    dirac: &FiniteDirac,
    seed: u64,
) -> Result<Option<ClockReport>> {
    let n = f.grid.n;
    let lam: Vec<[f64; 2]> = f
        .values
        .iter()
        .map(|m| eigenvalues(m).map(|ev| [ev[0], ev[1]]))
        .collect::<Result<_>>()?;
    for idx_x in 0..f.grid.len() {
        let x = (idx_x / n, idx_x % n);
        for i in x.0..n {
            for j in x.1..n {
                if (i, j) != x && lam[idx_x][1] > lam[i * n + j][0] + CLOCK_TOL {
                    return eigenvalue_clock_probe(f, dirac, x, (i, j), 8, seed).map(Some);
                }
            }
        }
    }
    Ok(None)
}

/// A cone member `tI + A` and a monotone `φ` with `φ(tI + A)` outside the cone.
#[derive(Clone, Debug, Serialize)]
pub struct InstabilityWitness {
    pub dirac: FiniteDirac,
    pub a: HermMat,
    pub phi: MonotoneFn,
    pub grid: Grid,
    pub member_check: FieldCheck,
    pub composed_check: FieldCheck,
}

/// Randomized search for a failure of stability under monotone functional calculus.
///
/// Candidates are `tI + A` with `‖[D_F, A]‖ ≤ 1` and ramps or random piecewise-linear
/// `φ`. Failing nodes whose eigenvalues sit within `1e-6` of a knot of `φ` are discarded,
/// so a witness never relies on a one-sided derivative.
pub fn monotone_instability_search(trials: usize, seed: u64) -> Result<Option<InstabilityWitness>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let gap = rng.gen_range(0.2..3.0);
        let d1 = rng.gen_range(-1.0..1.0);
        let dirac = FiniteDirac::new(d1, d1 + gap);
        let raw = random_herm(&mut rng, 2, 1.0);
        let norm = op_norm(&commutator(&dirac.matrix(), &raw)?);
        if norm.is_nan() || norm <= 1e-6 {
            continue;
        }
        let a = raw.scale(rng.gen_range(0.2..=1.0) / norm);
        let grid = Grid::square(1.0, 9)?;
        let phi = if rng.gen_bool(0.5) {
            let ev = eigenvalues(&a)?;
            MonotoneFn::ramp(rng.gen_range(ev[0] - 0.5..ev[1] + 0.5))
        } else {
            sampling::random_monotone(&mut rng, 2.0)
        };
        let member = MatrixField::analytic(grid, AnalyticFamily::TimePlusConstant { a: a.clone() })?;
        let member_check = field_in_cone(&member, &dirac, 1e-9)?;
        if !member_check.in_cone {
            return Err(Error::Consistency(
                "tI + A with ‖[D_F, A]‖ ≤ 1 failed the cone condition".into(),
            ));
        }
        let composed = MatrixField::analytic(
            grid,
            AnalyticFamily::MonotoneTimePlusConstant {
                a: a.clone(),
                phi: phi.clone(),
            },
        )?;
        let composed_check = field_in_cone(&composed, &dirac, 1e-9)?;
        let Some((i, j)) = composed_check.first_failure else {
            continue;
        };
        let t = 0.5 * (grid.u(i) + grid.v(j));
        let ev = eigenvalues(&a)?;
        let near_knot = ev
            .iter()
            .any(|l| phi.knots().iter().any(|k| (t + l - k).abs() < 1e-6));
        if !near_knot {
            return Ok(Some(InstabilityWitness {
                dirac,
                a,
                phi,
                grid,
                member_check,
                composed_check,
            }));
        }
    }
    Ok(None)
}
