//! Random generators shared by the sampling-based checks and the test suites.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::hermitian::{c, CMat, HermMat, MonotoneFn, C64};

/// Hermitian matrix with entries uniform in `[-scale, scale]` (real and imaginary parts).
pub fn random_herm<R: Rng + ?Sized>(rng: &mut R, dim: usize, scale: f64) -> HermMat {
    let mut m = CMat::zeros(dim);
    for i in 0..dim {
        m.set(i, i, c(rng.gen_range(-scale..=scale), 0.0));
        for j in (i + 1)..dim {
            let z = c(rng.gen_range(-scale..=scale), rng.gen_range(-scale..=scale));
            m.set(i, j, z);
            m.set(j, i, z.conj());
        }
    }
    HermMat::new(m).expect("constructed Hermitian")
}

/// Uniform point on the unit 2-sphere.
pub fn random_unit3<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..2.0 * PI);
    let r = (1.0 - z * z).max(0.0).sqrt();
    [r * phi.cos(), r * phi.sin(), z]
}

/// Uniform point on the sphere at a fixed height `z`.
pub fn random_on_latitude<R: Rng + ?Sized>(rng: &mut R, z: f64) -> [f64; 3] {
    let phi: f64 = rng.gen_range(0.0..2.0 * PI);
    let r = (1.0 - z * z).max(0.0).sqrt();
    [r * phi.cos(), r * phi.sin(), z]
}

/// Uniformly distributed unit vector in `ℂⁿ`.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim)
            .map(|_| c(gaussian(rng), gaussian(rng)))
            .collect();
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-8 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

/// Standard normal sample.
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Random non-decreasing piecewise-linear function with 1 to 5 knots in `[-span, span]`.
pub fn random_monotone<R: Rng + ?Sized>(rng: &mut R, span: f64) -> MonotoneFn {
    let n = rng.gen_range(1..=5);
    let mut knots: Vec<f64> = (0..n).map(|_| rng.gen_range(-span..=span)).collect();
    knots.sort_by(f64::total_cmp);
    knots.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
    let mut values = Vec::with_capacity(knots.len());
    let mut acc: f64 = rng.gen_range(-span..=span);
    for _ in 0..knots.len() {
        values.push(acc);
        // flat segments appear with probability 1/3
        if rng.gen_bool(2.0 / 3.0) {
            acc += rng.gen_range(0.0..=2.0);
        }
    }
    MonotoneFn::new(knots, values).expect("sorted knots and values")
}

/// Rotation of the sphere taking `+z` to `axis`, as a 3×3 row-major matrix.
pub fn frame_for_axis(axis: [f64; 3]) -> [[f64; 3]; 3] {
    let helper = if axis[2].abs() < 0.9 {
        [0.0, 0.0, 1.0]
    } else {
        [1.0, 0.0, 0.0]
    };
    let e1 = normalize(cross(helper, axis));
    let e2 = cross(axis, e1);
    [
        [e1[0], e2[0], axis[0]],
        [e1[1], e2[1], axis[1]],
        [e1[2], e2[2], axis[2]],
    ]
}

pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn normalize(a: [f64; 3]) -> [f64; 3] {
    let n = norm(a);
    [a[0] / n, a[1] / n, a[2] / n]
}

pub(crate) fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub(crate) fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub(crate) fn apply(frame: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        dot(frame[0], v),
        dot(frame[1], v),
        dot(frame[2], v),
    ]
}

/// Angle between two non-zero vectors, accurate near 0 and π.
pub fn angle_between(a: [f64; 3], b: [f64; 3]) -> f64 {
    norm(cross(a, b)).atan2(dot(a, b))
}

/// Point at polar angle `theta` and azimuth `phi` around `axis`.
pub fn point_around_axis(axis: [f64; 3], theta: f64, phi: f64) -> [f64; 3] {
    let frame = frame_for_axis(axis);
    let local = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
    apply(&frame, local)
}
