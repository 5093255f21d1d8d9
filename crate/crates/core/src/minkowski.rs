//! Two-dimensional Minkowski space in Cartesian, light-cone and Penrose coordinates.
//!
//! Light-cone coordinates are `u = x⁰ + x¹`, `v = x⁰ − x¹`; the Penrose chart is
//! `(μ, ν) = (2 atan u, 2 atan v)`, closed to the square `[−π, π]²`.

use std::f64::consts::PI;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Point of the Minkowski plane, stored in Cartesian coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Event {
    pub x0: f64,
    pub x1: f64,
}

impl Event {
    pub fn new(x0: f64, x1: f64) -> Self {
        Self { x0, x1 }
    }

    pub fn from_lightcone(u: f64, v: f64) -> Self {
        Self {
            x0: (u + v) / 2.0,
            x1: (u - v) / 2.0,
        }
    }

    pub fn u(&self) -> f64 {
        self.x0 + self.x1
    }

    pub fn v(&self) -> f64 {
        self.x0 - self.x1
    }
}

/// Point of the closed Penrose square `[−π, π]²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PenrosePoint {
    pub mu: f64,
    pub nu: f64,
}

impl PenrosePoint {
    /// Values up to `1e-12` outside the square are clamped onto it.
    pub fn new(mu: f64, nu: f64) -> Result<Self> {
        let clamp = |t: f64, name: &str| {
            if !t.is_finite() || t.abs() > PI + 1e-12 {
                Err(Error::Domain(format!("{name} = {t} lies outside [-π, π]")))
            } else {
                Ok(t.clamp(-PI, PI))
            }
        };
        Ok(Self {
            mu: clamp(mu, "mu")?,
            nu: clamp(nu, "nu")?,
        })
    }

    pub fn is_boundary(&self) -> bool {
        self.mu.abs() >= PI || self.nu.abs() >= PI
    }

    pub fn is_interior(&self) -> bool {
        !self.is_boundary()
    }

    /// Euclidean distance in the chart.
    pub fn distance(&self, other: &PenrosePoint) -> f64 {
        (self.mu - other.mu).hypot(self.nu - other.nu)
    }
}

/// Mass scale of the deformed order.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
pub struct Lambda(f64);

impl Lambda {
    pub fn new(value: f64) -> Result<Self> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::Domain(format!("Λ must be finite and non-negative, got {value}")));
        }
        Ok(Self(value))
    }

    pub fn zero() -> Self {
        Self(0.0)
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

impl<'de> Deserialize<'de> for Lambda {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Lambda::new(f64::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// Causal order: the product order on `(u, v)`.
pub fn causal_leq(x: &Event, y: &Event) -> bool {
    y.u() >= x.u() && y.v() >= x.v()
}

/// Lorentzian length of the straight segment from `x` to `y`, or `0` if `y` is not in the future.
pub fn lorentz_distance(x: &Event, y: &Event) -> f64 {
    if !causal_leq(x, y) {
        return 0.0;
    }
    ((y.u() - x.u()) * (y.v() - x.v())).sqrt()
}

pub fn penrose_map(x: &Event) -> PenrosePoint {
    PenrosePoint {
        mu: 2.0 * x.u().atan(),
        nu: 2.0 * x.v().atan(),
    }
}

pub fn penrose_inverse(p: &PenrosePoint) -> Result<Event> {
    if p.is_boundary() {
        return Err(Error::Domain(format!(
            "({}, {}) lies on the boundary of the Penrose square",
            p.mu, p.nu
        )));
    }
    Ok(Event::from_lightcone((p.mu / 2.0).tan(), (p.nu / 2.0).tan()))
}

/// Relative slack on `ΔuΔv ≥ Λ²`, so that `ℓ = Λ` survives the round trip through the chart.
pub const THRESHOLD_RTOL: f64 = 1e-12;

fn deformed(du: f64, dv: f64, lam: Lambda) -> bool {
    du >= 0.0 && dv >= 0.0 && du * dv >= lam.0 * lam.0 * (1.0 - THRESHOLD_RTOL)
}

/// Deformed order `≼_Λ` on the closed Penrose square.
///
/// Interior pairs need `Δtan(μ/2) ≥ 0`, `Δtan(ν/2) ≥ 0` and `Δtan(μ/2)·Δtan(ν/2) ≥ Λ²`;
/// as soon as one point is on the boundary the plain product order on `(μ, ν)` applies.
pub fn lambda_leq(p: &PenrosePoint, q: &PenrosePoint, lam: Lambda) -> bool {
    if p == q {
        return true;
    }
    if p.is_boundary() || q.is_boundary() {
        return q.mu >= p.mu && q.nu >= p.nu;
    }
    let du = (q.mu / 2.0).tan() - (p.mu / 2.0).tan();
    let dv = (q.nu / 2.0).tan() - (p.nu / 2.0).tan();
    deformed(du, dv, lam)
}

/// [`lambda_leq`] on Cartesian coordinates: `Δx⁰ ≥ |Δx¹|` and `(Δx⁰)² − (Δx¹)² ≥ Λ²`.
pub fn lambda_leq_cartesian(x: &Event, y: &Event, lam: Lambda) -> bool {
    if x == y {
        return true;
    }
    let (dt, dx) = (y.x0 - x.x0, y.x1 - x.x1);
    dt >= dx.abs() && dt * dt - dx * dx >= lam.0 * lam.0 * (1.0 - THRESHOLD_RTOL)
}

/// [`lambda_leq`] on light-cone coordinates.
pub fn lambda_leq_lightcone(x: (f64, f64), y: (f64, f64), lam: Lambda) -> bool {
    x == y || deformed(y.0 - x.0, y.1 - x.1, lam)
}

/// Radius `r > 0` such that no point of the punctured `r`-ball around `p` is `≼_Λ`-comparable to `p`.
///
/// Bisection on a bound for `|Δtan(μ/2)|·|Δtan(ν/2)|` over the ball, kept inside the square,
/// then confirmed on a dense polar sample of the ball.
pub fn lambda_closedness_probe(p: &PenrosePoint, lam: Lambda) -> Result<f64> {
    if lam.0 <= 0.0 {
        return Err(Error::Domain("the closedness probe needs Λ > 0".into()));
    }
    if p.is_boundary() {
        return Err(Error::Domain(
            "the order is not locally trivial at boundary points".into(),
        ));
    }
    let to_edge = (PI - p.mu.abs()).min(PI - p.nu.abs());
    let spread = |centre: f64, r: f64| {
        let t = (centre / 2.0).tan();
        let up = (((centre + r).min(PI - 1e-300)) / 2.0).tan() - t;
        let down = t - (((centre - r).max(-PI + 1e-300)) / 2.0).tan();
        up.max(down)
    };
    let separated = |r: f64| spread(p.mu, r) * spread(p.nu, r) < lam.0 * lam.0;

    let (mut lo, mut hi) = (0.0, to_edge);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if separated(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut r = lo * (1.0 - 1e-9);
    if r.is_nan() || r <= 0.0 {
        return Err(Error::Consistency("closedness probe found no positive radius".into()));
    }
    while sampled_comparable(p, r, lam) {
        r *= 0.5;
        if r < 1e-300 {
            return Err(Error::Consistency("closedness probe could not isolate the point".into()));
        }
    }
    Ok(r)
}

fn sampled_comparable(p: &PenrosePoint, r: f64, lam: Lambda) -> bool {
    const RINGS: usize = 64;
    const SPOKES: usize = 256;
    (1..=RINGS).any(|i| {
        let rad = r * i as f64 / RINGS as f64;
        (0..SPOKES).any(|j| {
            let a = 2.0 * PI * j as f64 / SPOKES as f64;
            match PenrosePoint::new(p.mu + rad * a.cos(), p.nu + rad * a.sin()) {
                Ok(q) => q != *p && (lambda_leq(p, &q, lam) || lambda_leq(&q, p, lam)),
                Err(_) => true,
            }
        })
    })
}

/// Coordinate-tagged point, the JSON form of events and Penrose points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "coords", content = "point", rename_all = "lowercase")]
pub enum Coordinates {
    Cartesian([f64; 2]),
    Lightcone([f64; 2]),
    Penrose([f64; 2]),
}

impl Coordinates {
    pub fn to_penrose(&self) -> Result<PenrosePoint> {
        match *self {
            Coordinates::Penrose([mu, nu]) => PenrosePoint::new(mu, nu),
            _ => Ok(penrose_map(&self.to_event()?)),
        }
    }

    pub fn to_event(&self) -> Result<Event> {
        match *self {
            Coordinates::Cartesian([x0, x1]) => finite_event(Event::new(x0, x1)),
            Coordinates::Lightcone([u, v]) => finite_event(Event::from_lightcone(u, v)),
            Coordinates::Penrose([mu, nu]) => penrose_inverse(&PenrosePoint::new(mu, nu)?),
        }
    }
}

fn finite_event(e: Event) -> Result<Event> {
    if e.x0.is_finite() && e.x1.is_finite() {
        Ok(e)
    } else {
        Err(Error::Domain("event coordinates must be finite".into()))
    }
}

impl Serialize for Event {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Coordinates::Cartesian([self.x0, self.x1]).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Event {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Coordinates::deserialize(d)?
            .to_event()
            .map_err(serde::de::Error::custom)
    }
}

impl Serialize for PenrosePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Coordinates::Penrose([self.mu, self.nu]).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PenrosePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Coordinates::deserialize(d)?
            .to_penrose()
            .map_err(serde::de::Error::custom)
    }
}
