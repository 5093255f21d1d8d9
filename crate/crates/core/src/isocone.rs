//! Isocones of finite-dimensional C*-algebras and the orders they induce on pure states.
//!
//! Three constructions are covered:
//!
//! * [`CapIsocone`]: cones in `ℜ(M₂(ℂ))` of the form `{c·I + v·σ : v = 0 or angle(v, axis) ≤ ρ}`,
//!   plus the trivial isocone (every Hermitian element).
//! * [`LexIsocone`]: the lexicographic sum over a finite poset, where related blocks must have
//!   ordered spectra.
//! * [`PushforwardIsocone`]: the image of a lexicographic sum under a block-selection morphism.
//!
//! The pure-state order of a cap isocone is `n₁ ≼ n₂ ⇔ n₂ − n₁ ∈ K°`, with `K°` the dual
//! cone of the cap; for a cap of angular radius ρ this is again a cap, of radius `π/2 − ρ`.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hermitian::{
    apply_monotone, bloch_to_vector, eigenvalues, CMat, HermMat, C64,
};
use crate::poset::FinitePoset;
use crate::sampling::{
    self, angle_between, dot, norm, point_around_axis, random_herm, random_monotone, random_unit3,
    random_unit_vector,
};

/// Angular slack on cap and dual-cap membership.
pub const ANGLE_TOL: f64 = 1e-10;
/// Slack on `max σ(a_x) ≤ min σ(a_y)`.
pub const SPECTRAL_TOL: f64 = 1e-10;
/// Two pure states closer than this (Bloch chord) are treated as equal.
pub const STATE_EQ_TOL: f64 = 1e-9;

/// Pure state of `M₂(ℂ)` as a unit Bloch vector; its projector is `(I + n·σ)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochState {
    n: [f64; 3],
}

impl BlochState {
    /// Accepts vectors within `1e-9` of unit length and renormalizes them.
    pub fn new(n: [f64; 3]) -> Result<Self> {
        let r = norm(n);
        if !r.is_finite() || (r - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidState(format!("Bloch vector has norm {r}")));
        }
        Ok(Self {
            n: [n[0] / r, n[1] / r, n[2] / r],
        })
    }

    /// Polar angle θ from `+z`, azimuth φ.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self {
            n: [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()],
        }
    }

    pub fn north() -> Self {
        Self { n: [0.0, 0.0, 1.0] }
    }

    pub fn bloch(&self) -> [f64; 3] {
        self.n
    }

    pub fn z(&self) -> f64 {
        self.n[2]
    }

    pub fn azimuth(&self) -> f64 {
        self.n[1].atan2(self.n[0])
    }

    pub fn projector(&self) -> HermMat {
        HermMat::from_bloch(0.5, [self.n[0] / 2.0, self.n[1] / 2.0, self.n[2] / 2.0])
    }

    pub fn vector(&self) -> Vec<C64> {
        bloch_to_vector(self.n)
    }

    /// `tr(p a) = c + n·v` for `a = c I + v·σ`.
    pub fn expectation(&self, a: &HermMat) -> Result<f64> {
        let (s, v) = a.bloch_decompose()?;
        Ok(s + dot(self.n, v))
    }

    /// Chord distance between Bloch vectors.
    pub fn chord(&self, other: &BlochState) -> f64 {
        norm(sampling::sub(self.n, other.n))
    }

    /// Great-circle distance on the unit sphere.
    pub fn geodesic(&self, other: &BlochState) -> f64 {
        angle_between(self.n, other.n)
    }

    pub fn same_as(&self, other: &BlochState) -> bool {
        self.chord(other) <= STATE_EQ_TOL
    }
}

impl Serialize for BlochState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.n.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BlochState {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        BlochState::new(<[f64; 3]>::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// Isocone of `M₂(ℂ)` given by a spherical cap, or the trivial isocone.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CapIsocone {
    Full,
    Cap { axis: [f64; 3], rho: f64 },
}

impl CapIsocone {
    pub fn cap(axis: [f64; 3], rho: f64) -> Result<Self> {
        let r = norm(axis);
        if !r.is_finite() || r < 1e-12 {
            return Err(Error::InvalidIsocone("cap axis must be a non-zero vector".into()));
        }
        if !(rho > 0.0 && rho <= FRAC_PI_2) {
            return Err(Error::InvalidIsocone(format!(
                "cap radius must lie in (0, π/2], got {rho}"
            )));
        }
        Ok(CapIsocone::Cap {
            axis: [axis[0] / r, axis[1] / r, axis[2] / r],
            rho,
        })
    }

    pub fn is_full(&self) -> bool {
        matches!(self, CapIsocone::Full)
    }

    /// Membership of a Bloch-vector part `v` in the cap cone.
    pub fn contains_vector(&self, v: [f64; 3], scale: f64) -> bool {
        match *self {
            CapIsocone::Full => true,
            CapIsocone::Cap { axis, rho } => {
                norm(v) <= 1e-10 * scale.max(1.0) || angle_between(v, axis) <= rho + ANGLE_TOL
            }
        }
    }

    /// `w ∈ K°`, the dual cone of the cap: `w = 0` or `angle(w, axis) ≤ π/2 − ρ`.
    pub fn dual_contains(&self, w: [f64; 3]) -> bool {
        match *self {
            CapIsocone::Full => norm(w) <= STATE_EQ_TOL,
            CapIsocone::Cap { axis, rho } => {
                norm(w) <= 1e-12 || angle_between(w, axis) <= FRAC_PI_2 - rho + ANGLE_TOL
            }
        }
    }

    /// Cap point `k ∈ K` minimizing `k·w`; `k·w < 0` exactly when `w ∉ K°`.
    pub fn most_violating_point(&self, w: [f64; 3]) -> Option<[f64; 3]> {
        let CapIsocone::Cap { axis, rho } = *self else {
            return None;
        };
        let target = sampling::scale(w, -1.0);
        if norm(target) < 1e-300 {
            return Some(axis);
        }
        if angle_between(target, axis) <= rho {
            return Some(sampling::normalize(target));
        }
        let along = dot(target, axis);
        let perp = sampling::sub(target, sampling::scale(axis, along));
        if norm(perp) < 1e-300 {
            // target anti-parallel to the axis: any rim point works
            return Some(point_around_axis(axis, rho, 0.0));
        }
        let perp = sampling::normalize(perp);
        Some(sampling::add(
            sampling::scale(axis, rho.cos()),
            sampling::scale(perp, rho.sin()),
        ))
    }

    /// Random member `c I + v·σ` with `|c|, |v| ≤ scale`; rim and `v = 0` cases appear often.
    pub fn random_member<R: Rng + ?Sized>(&self, rng: &mut R, scale: f64) -> HermMat {
        let s = rng.gen_range(-scale..=scale);
        let r = rng.gen_range(0.0..=scale);
        let v = match *self {
            CapIsocone::Full => sampling::scale(random_unit3(rng), r),
            CapIsocone::Cap { axis, rho } => {
                let theta = match rng.gen_range(0..4) {
                    0 => rho,
                    1 => 0.0,
                    _ => (1.0 - rng.gen_range(0.0..=1.0) * (1.0 - rho.cos())).acos(),
                };
                let r = if rng.gen_range(0..8) == 0 { 0.0 } else { r };
                sampling::scale(point_around_axis(axis, theta, rng.gen_range(0.0..std::f64::consts::TAU)), r)
            }
        };
        HermMat::from_bloch(s, v)
    }

    /// Random pair `(n₁, n₂)` with `n₂ − n₁ ∈ K°`, built along a dual-cone direction.
    pub fn random_related_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (BlochState, BlochState) {
        let CapIsocone::Cap { axis, rho } = *self else {
            let s = BlochState { n: random_unit3(rng) };
            return (s, s);
        };
        let beta = FRAC_PI_2 - rho;
        loop {
            let n1 = random_unit3(rng);
            let theta = (1.0 - rng.gen_range(0.0..=1.0) * (1.0 - beta.cos())).acos();
            let w = point_around_axis(axis, theta, rng.gen_range(0.0..std::f64::consts::TAU));
            let proj = dot(n1, w);
            if proj < -1e-3 {
                let n2 = sampling::add(n1, sampling::scale(w, -2.0 * proj));
                if let (Ok(a), Ok(b)) = (BlochState::new(n1), BlochState::new(n2)) {
                    return (a, b);
                }
            }
        }
    }
}

impl Serialize for CapIsocone {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            CapIsocone::Full => ConeJson::Name("full".into()).serialize(s),
            CapIsocone::Cap { axis, rho } => ConeJson::Cap { axis, rho }.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for CapIsocone {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match ConeJson::deserialize(d)? {
            ConeJson::Name(n) if n == "full" => Ok(CapIsocone::Full),
            ConeJson::Name(n) => Err(serde::de::Error::custom(format!("unknown cone `{n}`"))),
            ConeJson::Cap { axis, rho } => {
                CapIsocone::cap(axis, rho).map_err(serde::de::Error::custom)
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ConeJson {
    Name(String),
    Cap { axis: [f64; 3], rho: f64 },
}

/// `a ∈ I` for a 2×2 Hermitian `a`.
pub fn cap_membership(cone: &CapIsocone, a: &HermMat) -> Result<bool> {
    let (s, v) = a.bloch_decompose()?;
    Ok(cone.contains_vector(v, s.abs()))
}

/// Order induced on pure states: `n₂ − n₁ ∈ K°`, or equality for the trivial isocone.
pub fn cap_induced_order(cone: &CapIsocone, s1: &BlochState, s2: &BlochState) -> bool {
    match cone {
        CapIsocone::Full => s1.same_as(s2),
        cap => cap.dual_contains(sampling::sub(s2.n, s1.n)),
    }
}

/// Pure state of a single block `M_n(ℂ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PureState {
    /// The unique state of `ℂ`.
    Point,
    Bloch { n: BlochState },
    /// Unit vector in `ℂⁿ`, `n ≥ 3`, defined up to phase.
    Vector { xi: Vec<C64> },
}

impl PureState {
    pub fn dim(&self) -> usize {
        match self {
            PureState::Point => 1,
            PureState::Bloch { .. } => 2,
            PureState::Vector { xi } => xi.len(),
        }
    }

    pub fn expectation(&self, a: &HermMat) -> f64 {
        match self {
            PureState::Point => a.get(0, 0).re,
            PureState::Bloch { n } => n.expectation(a).expect("2×2 block"),
            PureState::Vector { xi } => a.expectation(xi),
        }
    }

    /// Chord distance `√2·‖ξξ* − ηη*‖_F`, which agrees with the Bloch chord for qubits.
    pub fn distance(&self, other: &PureState) -> f64 {
        match (self, other) {
            (PureState::Point, PureState::Point) => 0.0,
            (PureState::Bloch { n: a }, PureState::Bloch { n: b }) => a.chord(b),
            (PureState::Vector { xi }, PureState::Vector { xi: eta }) if xi.len() == eta.len() => {
                let mut sum = 0.0;
                for i in 0..xi.len() {
                    for j in 0..xi.len() {
                        sum += (xi[i] * xi[j].conj() - eta[i] * eta[j].conj()).norm_sqr();
                    }
                }
                (2.0 * sum).sqrt()
            }
            _ => f64::INFINITY,
        }
    }

    pub fn same_as(&self, other: &PureState) -> bool {
        self.distance(other) <= STATE_EQ_TOL
    }

    fn random<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> PureState {
        match dim {
            1 => PureState::Point,
            2 => PureState::Bloch {
                n: BlochState { n: random_unit3(rng) },
            },
            n => PureState::Vector {
                xi: random_unit_vector(rng, n),
            },
        }
    }
}

/// One summand `(M_n(ℂ), I_x)` of a lexicographic sum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub dim: usize,
    pub cone: CapIsocone,
}

impl Component {
    pub fn full(dim: usize) -> Self {
        Component {
            dim,
            cone: CapIsocone::Full,
        }
    }

    pub fn cap(axis: [f64; 3], rho: f64) -> Result<Self> {
        Ok(Component {
            dim: 2,
            cone: CapIsocone::cap(axis, rho)?,
        })
    }

    pub fn contains(&self, a: &HermMat) -> Result<bool> {
        if a.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: a.dim(),
            });
        }
        match self.cone {
            CapIsocone::Full => Ok(true),
            cone => cap_membership(&cone, a),
        }
    }

    pub fn state_order(&self, s1: &PureState, s2: &PureState) -> bool {
        match (&self.cone, s1, s2) {
            (CapIsocone::Cap { .. }, PureState::Bloch { n: a }, PureState::Bloch { n: b }) => {
                cap_induced_order(&self.cone, a, b)
            }
            _ => s1.same_as(s2),
        }
    }

    /// Member with spectrum inside `[-1, 1]`.
    fn random_unit_member<R: Rng + ?Sized>(&self, rng: &mut R) -> HermMat {
        let raw = match (self.dim, self.cone) {
            (1, _) => HermMat::scalar(1, rng.gen_range(-1.0..=1.0)),
            (2, cone) => cone.random_member(rng, 1.0),
            (n, _) => random_herm(rng, n, 1.0),
        };
        let ev = eigenvalues(&raw).expect("finite member");
        let (lo, hi) = (ev[0], ev[ev.len() - 1]);
        if hi - lo < 1e-12 {
            return HermMat::scalar(self.dim, rng.gen_range(-1.0..=1.0));
        }
        // affine maps with positive slope are monotone, so membership is preserved
        let width = if rng.gen_range(0..3) == 0 {
            2.0
        } else {
            rng.gen_range(0.0..=2.0)
        };
        let lo_target = rng.gen_range(-1.0..=(1.0 - width));
        let slope = width / (hi - lo);
        raw.shift(-lo).scale(slope).shift(lo_target)
    }
}

/// State of a direct sum: a block index and a pure state of that block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LexState {
    pub block: usize,
    pub state: PureState,
}

/// Lexicographic sum of component isocones over a finite poset.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LexIsocone {
    poset: FinitePoset,
    components: Vec<Component>,
}

#[derive(Deserialize)]
struct LexJson {
    poset: FinitePoset,
    components: Vec<Component>,
}

impl<'de> Deserialize<'de> for LexIsocone {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = LexJson::deserialize(d)?;
        LexIsocone::new(j.poset, j.components).map_err(serde::de::Error::custom)
    }
}

impl LexIsocone {
    pub fn new(poset: FinitePoset, components: Vec<Component>) -> Result<Self> {
        if components.len() != poset.size() {
            return Err(Error::DimensionMismatch {
                expected: poset.size(),
                found: components.len(),
            });
        }
        for (x, comp) in components.iter().enumerate() {
            if comp.dim == 0 || comp.dim > crate::hermitian::MAX_DIM {
                return Err(Error::InvalidIsocone(format!(
                    "block {x} has unsupported dimension {}",
                    comp.dim
                )));
            }
            if comp.dim != 2 && !comp.cone.is_full() {
                return Err(Error::InvalidIsocone(format!(
                    "block {x}: cap isocones exist only in dimension 2 (M_{} is egalitarian)",
                    comp.dim
                )));
            }
        }
        Ok(Self { poset, components })
    }

    /// Single-block isocone.
    pub fn single(component: Component) -> Self {
        Self {
            poset: FinitePoset::antichain(1),
            components: vec![component],
        }
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.dim).collect()
    }

    /// Real dimension of `ℜ(A)`, `Σ n_x²`.
    pub fn real_dim(&self) -> usize {
        self.components.iter().map(|c| c.dim * c.dim).sum()
    }

    fn check_element(&self, a: &[HermMat]) -> Result<()> {
        if a.len() != self.components.len() {
            return Err(Error::DimensionMismatch {
                expected: self.components.len(),
                found: a.len(),
            });
        }
        for (blk, comp) in a.iter().zip(&self.components) {
            if blk.dim() != comp.dim {
                return Err(Error::DimensionMismatch {
                    expected: comp.dim,
                    found: blk.dim(),
                });
            }
        }
        Ok(())
    }

    /// `a_x ∈ I_x` for all `x`, and `max σ(a_x) ≤ min σ(a_y)` whenever `x ≺ y`.
    pub fn lex_membership(&self, a: &[HermMat]) -> Result<bool> {
        self.check_element(a)?;
        for (blk, comp) in a.iter().zip(&self.components) {
            if !comp.contains(blk)? {
                return Ok(false);
            }
        }
        let spectra: Vec<(f64, f64)> = a
            .iter()
            .map(|b| eigenvalues(b).map(|ev| (ev[0], ev[ev.len() - 1])))
            .collect::<Result<_>>()?;
        Ok(self
            .poset
            .strict_pairs()
            .into_iter()
            .all(|(x, y)| spectra[x].1 <= spectra[y].0 + SPECTRAL_TOL))
    }

    /// `φ ≼_L ψ ⇔ (x ≠ y and x ≼ y) or (x = y and φ ≼_{I_x} ψ)`.
    pub fn lex_induced_order(&self, s1: &LexState, s2: &LexState) -> bool {
        if s1.block != s2.block {
            return self.poset.leq(s1.block, s2.block);
        }
        self.components[s1.block].state_order(&s1.state, &s2.state)
    }

    /// Value of the element at a pure state of the direct sum.
    pub fn evaluate(&self, a: &[HermMat], s: &LexState) -> f64 {
        s.state.expectation(&a[s.block])
    }

    /// Random member; every block's spectrum sits in `[2h − 1, 2h + 1]`, with `h` the height.
    pub fn random_member<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<HermMat> {
        self.components
            .iter()
            .enumerate()
            .map(|(x, comp)| {
                comp.random_unit_member(rng)
                    .shift(2.0 * self.poset.height(x) as f64)
            })
            .collect()
    }

    pub fn random_state<R: Rng + ?Sized>(&self, rng: &mut R, block: usize) -> LexState {
        LexState {
            block,
            state: PureState::random(rng, self.components[block].dim),
        }
    }

    /// Member `a ∈ L` with `φ(a) > ψ(a)`, for unrelated `φ ⋠ ψ`.
    ///
    /// Across blocks this is the step element `1` on the up-set of `x` and `0` elsewhere.
    /// Inside a block it pairs a component element separating the two states with scalar
    /// blocks `±2` that keep the cross-block constraints.
    pub fn separating_witness(&self, s1: &LexState, s2: &LexState) -> Option<Vec<HermMat>> {
        let (x, y) = (s1.block, s2.block);
        if x != y {
            if self.poset.leq(x, y) {
                return None;
            }
            return Some(
                self.components
                    .iter()
                    .enumerate()
                    .map(|(z, comp)| {
                        HermMat::scalar(comp.dim, if self.poset.leq(x, z) { 1.0 } else { 0.0 })
                    })
                    .collect(),
            );
        }
        let comp = &self.components[x];
        if comp.state_order(&s1.state, &s2.state) {
            return None;
        }
        let local = match (&comp.cone, &s1.state, &s2.state) {
            (CapIsocone::Cap { .. }, PureState::Bloch { n: a }, PureState::Bloch { n: b }) => {
                let w = sampling::sub(b.n, a.n);
                let k = comp.cone.most_violating_point(w)?;
                HermMat::from_bloch(0.0, k)
            }
            (_, PureState::Bloch { n: a }, _) => HermMat::from_bloch(0.0, a.n),
            (_, PureState::Vector { xi }, _) => HermMat::projector(xi).scale(2.0).shift(-1.0),
            (_, PureState::Point, _) => return None,
        };
        Some(
            self.components
                .iter()
                .enumerate()
                .map(|(z, comp)| {
                    if z == x {
                        local.clone()
                    } else if self.poset.lt(x, z) {
                        HermMat::scalar(comp.dim, 2.0)
                    } else {
                        HermMat::scalar(comp.dim, -2.0)
                    }
                })
                .collect(),
        )
    }

    fn vectorize(element: &[HermMat]) -> Vec<f64> {
        element.iter().flat_map(|b| b.to_real_vector()).collect()
    }

    /// Numerical rank of `span(L − L)` from `samples` random member differences.
    pub fn difference_span_rank<R: Rng + ?Sized>(&self, rng: &mut R, samples: usize) -> usize {
        let rows: Vec<Vec<f64>> = (0..samples)
            .map(|_| {
                let a = Self::vectorize(&self.random_member(rng));
                let b = Self::vectorize(&self.random_member(rng));
                a.iter().zip(&b).map(|(x, y)| x - y).collect()
            })
            .collect();
        numerical_rank(rows, 1e-9)
    }
}

/// Rank by Gaussian elimination with partial pivoting.
pub(crate) fn numerical_rank(mut rows: Vec<Vec<f64>>, tol: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let scale = rows
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |m, x| m.max(x.abs()))
        .max(1.0);
    let mut rank = 0;
    for col in 0..cols {
        let Some((pivot, _)) = rows
            .iter()
            .enumerate()
            .skip(rank)
            .map(|(i, r)| (i, r[col].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .filter(|&(_, v)| v > tol * scale)
        else {
            continue;
        };
        rows.swap(rank, pivot);
        let prow = rows[rank].clone();
        for r in rows.iter_mut().skip(rank + 1) {
            let f = r[col] / prow[col];
            if f != 0.0 {
                for (x, p) in r.iter_mut().zip(&prow) {
                    *x -= f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A sampled order violation or missing separation.
#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub s1: LexState,
    pub s2: LexState,
    pub related: bool,
    pub element: Vec<HermMat>,
    pub value1: f64,
    pub value2: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyReport {
    pub pairs_checked: usize,
    pub related_pairs: usize,
    pub members_sampled: usize,
    pub witnesses_built: usize,
    pub counterexamples: Vec<Counterexample>,
    pub passed: bool,
}

/// Checks the formula for `≼_L` against the definition "φ ≼ ψ ⇔ φ(a) ≤ ψ(a) for all a ∈ L".
///
/// Related pairs must not be reversed by any sampled member; unrelated pairs must be
/// separated by a constructed witness that is itself a member.
pub fn lex_order_consistency_check(l: &LexIsocone, samples: usize, seed: u64) -> ConsistencyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut members: Vec<Vec<HermMat>> = Vec::with_capacity(samples);
    for _ in 0..samples {
        let mut a = l.random_member(&mut rng);
        if rng.gen_bool(0.3) {
            let f = random_monotone(&mut rng, 3.0);
            a = a
                .iter()
                .map(|b| apply_monotone(b, &f).expect("finite member"))
                .collect();
        }
        members.push(a);
    }
    let n = l.poset.size();
    let pairs: Vec<(LexState, LexState)> = (0..samples)
        .map(|_| {
            let x = rng.gen_range(0..n);
            let y = if rng.gen_bool(0.5) { x } else { rng.gen_range(0..n) };
            if x == y && rng.gen_bool(0.5) {
                let comp = &l.components[x];
                if let CapIsocone::Cap { .. } = comp.cone {
                    let (a, b) = comp.cone.random_related_pair(&mut rng);
                    return (
                        LexState { block: x, state: PureState::Bloch { n: a } },
                        LexState { block: x, state: PureState::Bloch { n: b } },
                    );
                }
                let s = l.random_state(&mut rng, x);
                return (s.clone(), s);
            }
            (l.random_state(&mut rng, x), l.random_state(&mut rng, y))
        })
        .collect();

    let results: Vec<(bool, bool, Option<Counterexample>)> = pairs
        .par_iter()
        .map(|(s1, s2)| {
            let related = l.lex_induced_order(s1, s2);
            if related {
                for a in &members {
                    let (v1, v2) = (l.evaluate(a, s1), l.evaluate(a, s2));
                    if v1 > v2 + 1e-9 {
                        return (true, false, Some(counterexample(s1, s2, true, a, v1, v2)));
                    }
                }
                return (true, false, None);
            }
            match l.separating_witness(s1, s2) {
                Some(w) => {
                    let (v1, v2) = (l.evaluate(&w, s1), l.evaluate(&w, s2));
                    let ok = l.lex_membership(&w).unwrap_or(false) && v1 > v2;
                    let cx = (!ok).then(|| counterexample(s1, s2, false, &w, v1, v2));
                    (false, true, cx)
                }
                None => (
                    false,
                    false,
                    Some(Counterexample {
                        s1: s1.clone(),
                        s2: s2.clone(),
                        related: false,
                        element: Vec::new(),
                        value1: f64::NAN,
                        value2: f64::NAN,
                    }),
                ),
            }
        })
        .collect();

    let counterexamples: Vec<Counterexample> =
        results.iter().filter_map(|r| r.2.clone()).collect();
    ConsistencyReport {
        pairs_checked: pairs.len(),
        related_pairs: results.iter().filter(|r| r.0).count(),
        members_sampled: members.len(),
        witnesses_built: results.iter().filter(|r| r.1).count(),
        passed: counterexamples.is_empty(),
        counterexamples,
    }
}

fn counterexample(
    s1: &LexState,
    s2: &LexState,
    related: bool,
    a: &[HermMat],
    v1: f64,
    v2: f64,
) -> Counterexample {
    Counterexample {
        s1: s1.clone(),
        s2: s2.clone(),
        related,
        element: a.to_vec(),
        value1: v1,
        value2: v2,
    }
}

/// One target block of a block-selection morphism: `b = U a_source U*`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetBlock {
    pub source: usize,
    #[serde(default)]
    pub unitary: Option<CMat>,
}

/// Surjective *-morphism `⊕ A_x → ⊕ B_k` selecting blocks, each possibly conjugated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockMorphism {
    source_dims: Vec<usize>,
    targets: Vec<TargetBlock>,
}

impl BlockMorphism {
    pub fn new(source_dims: Vec<usize>, targets: Vec<TargetBlock>) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::NotSurjective("no target blocks".into()));
        }
        let mut seen = vec![false; source_dims.len()];
        for (k, t) in targets.iter().enumerate() {
            let Some(&dim) = source_dims.get(t.source) else {
                return Err(Error::NotSurjective(format!(
                    "target block {k} refers to missing source block {}",
                    t.source
                )));
            };
            if std::mem::replace(&mut seen[t.source], true) {
                return Err(Error::NotSurjective(format!(
                    "source block {} feeds two target blocks; the diagonal image is proper",
                    t.source
                )));
            }
            if let Some(u) = &t.unitary {
                if u.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: u.dim(),
                    });
                }
                let defect = (&(u * &u.adjoint()) - &CMat::identity(dim)).frobenius_norm();
                if defect > 1e-10 {
                    return Err(Error::NotSurjective(format!(
                        "target block {k}: conjugating matrix is not unitary (defect {defect:e})"
                    )));
                }
            }
        }
        Ok(Self {
            source_dims,
            targets,
        })
    }

    pub fn identity(dims: &[usize]) -> Self {
        Self {
            source_dims: dims.to_vec(),
            targets: (0..dims.len())
                .map(|source| TargetBlock {
                    source,
                    unitary: None,
                })
                .collect(),
        }
    }

    /// Plain projection onto the listed source blocks.
    pub fn select(dims: &[usize], blocks: &[usize]) -> Result<Self> {
        Self::new(
            dims.to_vec(),
            blocks
                .iter()
                .map(|&source| TargetBlock {
                    source,
                    unitary: None,
                })
                .collect(),
        )
    }

    pub fn targets(&self) -> &[TargetBlock] {
        &self.targets
    }

    pub fn target_dims(&self) -> Vec<usize> {
        self.targets.iter().map(|t| self.source_dims[t.source]).collect()
    }

    pub fn apply(&self, a: &[HermMat]) -> Result<Vec<HermMat>> {
        if a.len() != self.source_dims.len() {
            return Err(Error::DimensionMismatch {
                expected: self.source_dims.len(),
                found: a.len(),
            });
        }
        self.targets
            .iter()
            .map(|t| match &t.unitary {
                Some(u) => a[t.source].conjugate_by(u),
                None => Ok(a[t.source].clone()),
            })
            .collect()
    }

    fn pull_back(&self, b: &[HermMat]) -> Result<Vec<HermMat>> {
        if b.len() != self.targets.len() {
            return Err(Error::DimensionMismatch {
                expected: self.targets.len(),
                found: b.len(),
            });
        }
        self.targets
            .iter()
            .zip(b)
            .map(|(t, blk)| match &t.unitary {
                Some(u) => blk.conjugate_by(&u.adjoint()),
                None => Ok(blk.clone()),
            })
            .collect()
    }
}

/// `π(L)` for a block-selection morphism `π`.
///
/// Membership reduces to the lexicographic sum over the selected blocks with the induced
/// order: the unselected blocks can always be filled with scalars.
#[derive(Clone, Debug)]
pub struct PushforwardIsocone {
    morphism: BlockMorphism,
    source: LexIsocone,
    reduced: LexIsocone,
}

pub fn pushforward(pi: &BlockMorphism, l: &LexIsocone) -> Result<PushforwardIsocone> {
    if pi.source_dims != l.dims() {
        return Err(Error::NotSurjective(format!(
            "morphism source blocks {:?} do not match isocone blocks {:?}",
            pi.source_dims,
            l.dims()
        )));
    }
    let selected: Vec<usize> = pi.targets.iter().map(|t| t.source).collect();
    let poset = l.poset.restrict(&selected)?;
    let components = selected.iter().map(|&x| l.components[x].clone()).collect();
    Ok(PushforwardIsocone {
        morphism: pi.clone(),
        source: l.clone(),
        reduced: LexIsocone::new(poset, components)?,
    })
}

impl PushforwardIsocone {
    pub fn contains(&self, b: &[HermMat]) -> Result<bool> {
        self.reduced.lex_membership(&self.morphism.pull_back(b)?)
    }

    /// Lexicographic sum over the selected blocks (in source coordinates).
    pub fn reduced(&self) -> &LexIsocone {
        &self.reduced
    }

    /// Some `a ∈ L` with `π(a) = b`, when `b` is in the pushforward.
    pub fn preimage(&self, b: &[HermMat]) -> Result<Option<Vec<HermMat>>> {
        if !self.contains(b)? {
            return Ok(None);
        }
        let pulled = self.morphism.pull_back(b)?;
        let l = &self.source;
        let n = l.poset.size();
        let mut fixed: Vec<Option<HermMat>> = vec![None; n];
        for (t, blk) in self.morphism.targets.iter().zip(pulled) {
            fixed[t.source] = Some(blk);
        }
        let mut spectra = vec![(0.0, 0.0); n];
        let mut floor = f64::INFINITY;
        for (x, f) in fixed.iter().enumerate() {
            if let Some(a) = f {
                let ev = eigenvalues(a)?;
                spectra[x] = (ev[0], ev[ev.len() - 1]);
                floor = floor.min(ev[0]);
            }
        }
        let floor = if floor.is_finite() { floor - 1.0 } else { 0.0 };
        let element = (0..n)
            .map(|z| match &fixed[z] {
                Some(a) => a.clone(),
                None => {
                    let level = (0..n)
                        .filter(|&x| fixed[x].is_some() && l.poset.lt(x, z))
                        .map(|x| spectra[x].1)
                        .fold(floor, f64::max);
                    HermMat::scalar(l.components[z].dim, level)
                }
            })
            .collect();
        Ok(Some(element))
    }
}

/// Per-block pure states plus within-block related pairs, used to test isotonicity.
#[derive(Clone, Debug)]
pub struct StateSample {
    states: Vec<Vec<PureState>>,
    related: Vec<Vec<(PureState, PureState)>>,
}

impl StateSample {
    /// `density` states per block and `density` related pairs per cap block.
    pub fn draw<R: Rng + ?Sized>(l: &LexIsocone, density: usize, rng: &mut R) -> Self {
        let mut states = Vec::with_capacity(l.components.len());
        let mut related = Vec::with_capacity(l.components.len());
        for comp in &l.components {
            let count = if comp.dim == 1 { 1 } else { density.max(1) };
            states.push((0..count).map(|_| PureState::random(rng, comp.dim)).collect());
            related.push(match comp.cone {
                CapIsocone::Cap { .. } => (0..density)
                    .map(|_| {
                        let (a, b) = comp.cone.random_related_pair(rng);
                        (PureState::Bloch { n: a }, PureState::Bloch { n: b })
                    })
                    .collect(),
                CapIsocone::Full => Vec::new(),
            });
        }
        Self { states, related }
    }

    /// Whether `a` is non-decreasing on every sampled related pair.
    pub fn is_isotone(&self, l: &LexIsocone, a: &[HermMat]) -> bool {
        let range: Vec<(f64, f64)> = self
            .states
            .iter()
            .enumerate()
            .map(|(x, ss)| {
                ss.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
                    let v = s.expectation(&a[x]);
                    (lo.min(v), hi.max(v))
                })
            })
            .collect();
        let cross = l
            .poset
            .strict_pairs()
            .into_iter()
            .all(|(x, y)| range[x].1 <= range[y].0 + SPECTRAL_TOL);
        cross
            && self.related.iter().enumerate().all(|(x, pairs)| {
                pairs
                    .iter()
                    .all(|(s1, s2)| s1.expectation(&a[x]) <= s2.expectation(&a[x]) + SPECTRAL_TOL)
            })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SaturationCandidate {
    pub index: usize,
    pub element: Vec<HermMat>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SaturationReport {
    pub elements_tested: usize,
    pub members: usize,
    pub isotone_on_coarse_sample: usize,
    /// Members that failed isotonicity; always empty unless the order formula is wrong.
    pub member_violations: Vec<SaturationCandidate>,
    pub flagged_coarse: usize,
    pub eliminated_by_densification: usize,
    pub survivors: Vec<SaturationCandidate>,
    pub verdict: String,
}

/// Saturation evidence: searches for isotone elements outside `L`.
///
/// Elements isotone on a coarse state sample but outside `L` are re-tested on a sample
/// ten times denser; only survivors are reported. The verdict never claims saturation.
pub fn saturation_check(
    l: &LexIsocone,
    state_samples: usize,
    element_samples: usize,
    seed: u64,
) -> SaturationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let elements: Vec<Vec<HermMat>> = (0..element_samples)
        .map(|_| saturation_probe_element(l, &mut rng))
        .collect();
    saturation_check_with(l, state_samples, &elements, seed)
}

/// [`saturation_check`] on caller-supplied elements.
pub fn saturation_check_with(
    l: &LexIsocone,
    state_samples: usize,
    elements: &[Vec<HermMat>],
    seed: u64,
) -> SaturationReport {
    let mut coarse_rng = ChaCha8Rng::seed_from_u64(seed);
    coarse_rng.set_stream(1);
    let coarse = StateSample::draw(l, state_samples, &mut coarse_rng);
    let mut dense_rng = ChaCha8Rng::seed_from_u64(seed);
    dense_rng.set_stream(2);
    let dense = StateSample::draw(l, 10 * state_samples, &mut dense_rng);

    // (member, isotone coarse, flagged, survived densification)
    let verdicts: Vec<(bool, bool, bool, bool)> = elements
        .par_iter()
        .map(|a| {
            let member = l.lex_membership(a).unwrap_or(false);
            let iso = coarse.is_isotone(l, a);
            let flagged = iso && !member;
            let survived = flagged && dense.is_isotone(l, a);
            (member, iso, flagged, survived)
        })
        .collect();

    let candidate = |i: usize| SaturationCandidate {
        index: i,
        element: elements[i].clone(),
    };
    let member_violations: Vec<_> = verdicts
        .iter()
        .enumerate()
        .filter(|(_, v)| v.0 && !v.1)
        .map(|(i, _)| candidate(i))
        .collect();
    let survivors: Vec<_> = verdicts
        .iter()
        .enumerate()
        .filter(|(_, v)| v.3)
        .map(|(i, _)| candidate(i))
        .collect();
    let flagged = verdicts.iter().filter(|v| v.2).count();
    let verdict = if survivors.is_empty() && member_violations.is_empty() {
        "no counterexample found".to_string()
    } else {
        format!(
            "{} counterexample candidate(s) survived densification, {} member(s) not isotone",
            survivors.len(),
            member_violations.len()
        )
    };
    SaturationReport {
        elements_tested: elements.len(),
        members: verdicts.iter().filter(|v| v.0).count(),
        isotone_on_coarse_sample: verdicts.iter().filter(|v| v.1).count(),
        member_violations,
        flagged_coarse: flagged,
        eliminated_by_densification: flagged - survivors.len(),
        survivors,
        verdict,
    }
}

/// Mix of members, near-misses (a cap component pushed past the rim, or two related
/// blocks with overlapping spectra) and unstructured elements.
fn saturation_probe_element<R: Rng + ?Sized>(l: &LexIsocone, rng: &mut R) -> Vec<HermMat> {
    let mut a = l.random_member(rng);
    match rng.gen_range(0..4) {
        0 => a,
        1 => {
            let caps: Vec<usize> = (0..a.len())
                .filter(|&x| !l.components[x].cone.is_full())
                .collect();
            if caps.is_empty() {
                return perturb_cross(l, a, rng);
            }
            let x = caps[rng.gen_range(0..caps.len())];
            let CapIsocone::Cap { axis, rho } = l.components[x].cone else {
                unreachable!()
            };
            let (s, v) = a[x].bloch_decompose().expect("cap block is 2×2");
            let r = norm(v).max(0.1);
            let theta = (rho + rng.gen_range(0.05..=0.5)).min(std::f64::consts::PI);
            let dir = point_around_axis(axis, theta, rng.gen_range(0.0..std::f64::consts::TAU));
            a[x] = HermMat::from_bloch(s, sampling::scale(dir, r));
            a
        }
        2 => perturb_cross(l, a, rng),
        _ => {
            for (x, blk) in a.iter_mut().enumerate() {
                *blk = random_herm(rng, blk.dim(), 1.0)
                    .shift(2.0 * l.poset.height(x) as f64);
            }
            a
        }
    }
}

fn perturb_cross<R: Rng + ?Sized>(l: &LexIsocone, mut a: Vec<HermMat>, rng: &mut R) -> Vec<HermMat> {
    let pairs = l.poset.strict_pairs();
    if pairs.is_empty() {
        let x = rng.gen_range(0..a.len());
        a[x] = random_herm(rng, a[x].dim(), 1.0);
        return a;
    }
    let (x, y) = pairs[rng.gen_range(0..pairs.len())];
    let top_x = eigenvalues(&a[x]).expect("finite").last().copied().unwrap_or(0.0);
    let bottom_y = eigenvalues(&a[y]).expect("finite")[0];
    let overlap = rng.gen_range(0.05..=0.5);
    a[x] = a[x].shift(bottom_y - top_x + overlap);
    a
}
