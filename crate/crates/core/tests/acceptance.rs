//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::process::ExitCode;
use std::time::Instant;

use nc_causal::causal_cone::{
    cone_condition_at, cone_margin, connes_distance, field_in_cone, find_clock_phenomenon,
    monotone_instability_search, product_state_order, AnalyticFamily, Distance, FiniteDirac, Grid,
    MatrixField,
};
use nc_causal::experiment::{default_cone_fields, default_lex_fixtures};
use nc_causal::figure::{
    cell_center, fig1_causal_cone, fig1_isocone, isocone_annotation, CellStatus, FigureSetup,
    SphereAnnotation,
};
use nc_causal::hermitian::{
    apply_monotone, bloch_to_vector, commutator, eigen_pairs, op_norm, sigma_x, sigma_y, sigma_z,
    CMat, HermMat, DEFAULT_PSD_TOL,
};
use nc_causal::isocone::{
    cap_induced_order, cap_membership, saturation_check, BlochState, CapIsocone, LexState,
};
use nc_causal::minkowski::{
    causal_leq, lambda_leq, penrose_inverse, penrose_map, Event, Lambda, PenrosePoint,
};
use nc_causal::sampling::{random_herm, random_monotone, random_unit3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

fn angle(a: [f64; 3], b: [f64; 3]) -> f64 {
    (dot(a, b) / (norm(a) * norm(b))).clamp(-1.0, 1.0).acos()
}

fn on_latitude(z: f64, phi: f64) -> BlochState {
    let r = (1.0 - z * z).sqrt();
    BlochState::new([r * phi.cos(), r * phi.sin(), z]).unwrap()
}

fn random_dirac(r: &mut ChaCha8Rng) -> FiniteDirac {
    let d1 = r.gen_range(-2.0..2.0);
    let gap = r.gen_range(0.1..5.0) * if r.gen_bool(0.5) { 1.0 } else { -1.0 };
    FiniteDirac::new(d1, d1 + gap)
}

/// Numerical supremum of `|tr((ρ₁ − ρ₂) a)|` over `‖[D_F, a]‖ ≤ 1`.
///
/// At equal latitude the diagonal of `a` is invisible, so only the off-diagonal phase is
/// searched: a coarse scan followed by golden-section refinement, each candidate rescaled
/// by its numerically computed commutator norm. At different latitudes the commuting
/// direction `t σ_z` is feasible for every `t` and the objective grows without bound.
fn connes_oracle(d: &FiniteDirac, s1: &BlochState, s2: &BlochState) -> Option<f64> {
    let rho = |s: &BlochState| HermMat::projector(&bloch_to_vector(s.bloch()));
    let diff = rho(s1).try_sub(&rho(s2)).unwrap();
    let objective = |a: &CMat| (diff.as_cmat() * a).trace().re.abs();

    let diag = sigma_z().scale_real(1e12);
    let comm = commutator(&d.matrix(), &HermMat::new(diag.clone()).unwrap()).unwrap();
    if op_norm(&comm) <= 1.0 && objective(&diag) > 1e6 {
        return None;
    }
    let value = |theta: f64| {
        let a = &sigma_x().scale_real(theta.cos()) + &sigma_y().scale_real(theta.sin());
        let scale = op_norm(&commutator(&d.matrix(), &HermMat::new(a.clone()).unwrap()).unwrap());
        objective(&a) / scale
    };
    let steps = 90;
    let h = TAU / steps as f64;
    let best = (0..steps)
        .map(|k| k as f64 * h)
        .max_by(|a, b| value(*a).total_cmp(&value(*b)))
        .unwrap();
    let (mut lo, mut hi) = (best - h, best + h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let (m1, m2) = (hi - g * (hi - lo), lo + g * (hi - lo));
        if value(m1) < value(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    Some(value(0.5 * (lo + hi)))
}

fn criterion_1() -> Outcome {
    let mut r = rng(101);
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for _ in 0..10 {
        let d = random_dirac(&mut r);
        for _ in 0..100 {
            let z = r.gen_range(-1.0..1.0);
            let s1 = on_latitude(z, r.gen_range(0.0..TAU));
            let s2 = on_latitude(z, r.gen_range(0.0..TAU));
            let closed = connes_distance(&d, &s1, &s2)
                .map_err(|e| e.to_string())?
                .finite()
                .ok_or("equal-latitude pair reported infinite")?;
            let oracle = connes_oracle(&d, &s1, &s2).ok_or("oracle found no bound")?;
            worst = worst.max((closed - oracle).abs());
            pairs += 1;
        }
    }
    if worst > 1e-6 {
        return Err(format!("max |closed form - oracle| = {worst:.3e} > 1e-6"));
    }
    let mut infinite = 0;
    for _ in 0..1000 {
        let d = random_dirac(&mut r);
        let (z1, z2) = loop {
            let (a, b) = (r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
            if f64::abs(a - b) > 1e-6 {
                break (a, b);
            }
        };
        let s1 = on_latitude(z1, r.gen_range(0.0..TAU));
        let s2 = on_latitude(z2, r.gen_range(0.0..TAU));
        let got = connes_distance(&d, &s1, &s2).map_err(|e| e.to_string())?;
        if got == Distance::Infinite && connes_oracle(&d, &s1, &s2).is_none() {
            infinite += 1;
        }
    }
    if infinite != 1000 {
        return Err(format!("{infinite}/1000 different-latitude pairs infinite"));
    }
    Ok(format!(
        "{pairs} equal-latitude pairs, max deviation {worst:.2e}; 1000/1000 different-latitude pairs infinite"
    ))
}

fn criterion_2() -> Outcome {
    let mut r = rng(102);
    let mut disagreements = 0;
    let mut causal = 0;
    for k in 0..1000 {
        let (a, b): (f64, f64) = if k % 2 == 0 {
            (r.gen_range(-8..=8) as f64 / 4.0, r.gen_range(-8..=8) as f64 / 4.0)
        } else {
            (r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0))
        };
        // f = a t + b x with t = (u + v)/2 and x = (u - v)/2
        let (du, dv) = ((a + b) / 2.0, (a - b) / 2.0);
        let d = random_dirac(&mut r);
        let value = HermMat::scalar(2, r.gen_range(-5.0..5.0));
        let cone = cone_condition_at(&HermMat::scalar(2, du), &HermMat::scalar(2, dv), &value, &d, 0.0)
            .map_err(|e| e.to_string())?;
        let expected = a >= b.abs();
        causal += expected as usize;
        disagreements += (cone != expected) as usize;
    }
    if disagreements > 0 {
        return Err(format!("{disagreements} disagreements"));
    }
    Ok(format!("1000 fields ({causal} causal), 0 disagreements"))
}

fn criterion_3() -> Outcome {
    let mut r = rng(103);
    let grid = Grid::square(1.0, 5).map_err(|e| e.to_string())?;
    let mut disagreements = 0;
    let mut members = 0;
    for _ in 0..1000 {
        let d = random_dirac(&mut r);
        let raw = random_herm(&mut r, 2, 1.0);
        let n = op_norm(&commutator(&d.matrix(), &raw).unwrap());
        let a = match r.gen_range(0..3) {
            0 => raw.scale(1.0 / n),
            1 => raw.scale(r.gen_range(0.5..1.5) / n),
            _ => raw,
        };
        let field = MatrixField::analytic(grid, AnalyticFamily::TimePlusConstant { a: a.clone() })
            .map_err(|e| e.to_string())?;
        let in_cone = field_in_cone(&field, &d, DEFAULT_PSD_TOL)
            .map_err(|e| e.to_string())?
            .in_cone;
        let expected = op_norm(&commutator(&d.matrix(), &a).unwrap()) <= 1.0 + 1e-9;
        members += expected as usize;
        disagreements += (in_cone != expected) as usize;
    }
    if disagreements > 0 {
        return Err(format!("{disagreements} disagreements"));
    }
    Ok(format!("1000 fields ({members} in the cone), 0 disagreements"))
}

fn criterion_4() -> Outcome {
    let mut r = rng(104);
    let d = FiniteDirac::new(0.0, 1.0);
    let x = Event::new(0.0, 0.0);
    let pairs: Vec<(BlochState, BlochState, f64)> = (0..100)
        .map(|_| {
            let z: f64 = r.gen_range(-1.0..1.0);
            let (p1, p2) = (r.gen_range(0.0..TAU), r.gen_range(0.0..TAU));
            // chord length on the latitude circle
            let dist = 2.0 * (1.0 - z * z).sqrt() * ((p1 - p2) / 2.0).sin().abs() / d.gap();
            (on_latitude(z, p1), on_latitude(z, p2), dist)
        })
        .collect();
    let mut disagreements = 0;
    let mut related = 0;
    for k in 0..100 {
        let s = 2.2 * k as f64 / 99.0;
        let y = Event::new(s, 0.0);
        for (s1, s2, dist) in &pairs {
            let got = product_state_order(&d, &x, s1, &y, s2).map_err(|e| e.to_string())?;
            related += got as usize;
            if got != (s >= *dist) && (s - dist).abs() >= 1e-9 {
                disagreements += 1;
            }
        }
    }
    if disagreements > 0 {
        return Err(format!("{disagreements} disagreements outside the 1e-9 band"));
    }
    Ok(format!("10000 (s, pair) cases ({related} related), 0 disagreements"))
}

#[derive(Default)]
struct Axioms {
    reflexive: usize,
    antisymmetric: usize,
    transitive: usize,
    related: usize,
}

impl Axioms {
    fn check<T>(
        &mut self,
        x: &T,
        y: &T,
        z: &T,
        leq: impl Fn(&T, &T) -> bool,
        eq: impl Fn(&T, &T) -> bool,
    ) {
        let (xy, yx, yz, xz) = (leq(x, y), leq(y, x), leq(y, z), leq(x, z));
        self.related += xy as usize;
        self.reflexive += !leq(x, x) as usize;
        self.antisymmetric += (xy && yx && !eq(x, y)) as usize;
        self.transitive += (xy && yz && !xz) as usize;
    }

    fn violations(&self) -> usize {
        self.reflexive + self.antisymmetric + self.transitive
    }
}

fn pick<'a, T>(r: &mut ChaCha8Rng, pool: &'a [T]) -> &'a T {
    &pool[r.gen_range(0..pool.len())]
}

fn run_axioms<T>(
    r: &mut ChaCha8Rng,
    pool: &[T],
    leq: impl Fn(&T, &T) -> bool,
    eq: impl Fn(&T, &T) -> bool,
) -> Axioms {
    let mut ax = Axioms::default();
    for _ in 0..10_000 {
        let (x, y, z) = (pick(r, pool), pick(r, pool), pick(r, pool));
        ax.check(x, y, z, &leq, &eq);
    }
    ax
}

fn criterion_5() -> Outcome {
    let mut r = rng(105);
    let mut report = Vec::new();
    let mut failures = Vec::new();
    let mut record = |name: String, ax: Axioms| {
        if ax.violations() > 0 {
            failures.push(format!(
                "{name}: reflexivity {}, antisymmetry {}, transitivity {}",
                ax.reflexive, ax.antisymmetric, ax.transitive
            ));
        }
        report.push(format!("{name} {}", ax.related));
    };

    let events: Vec<Event> = (-3..=3)
        .flat_map(|t| (-3..=3).map(move |x| Event::new(t as f64, x as f64)))
        .collect();
    let ax = run_axioms(&mut r, &events, causal_leq, |a, b| a == b);
    record("causal".into(), ax);

    let mut points: Vec<PenrosePoint> = (-4..=4)
        .flat_map(|u| (-4..=4).map(move |v| (u, v)))
        .map(|(u, v)| penrose_map(&Event::from_lightcone(0.4 * u as f64, 0.4 * v as f64)))
        .collect();
    for k in -2..=2 {
        let t = k as f64;
        points.push(PenrosePoint::new(PI, t).unwrap());
        points.push(PenrosePoint::new(t, PI).unwrap());
        points.push(PenrosePoint::new(-PI, t).unwrap());
        points.push(PenrosePoint::new(t, -PI).unwrap());
    }
    for lam in [0.0, 0.1, 1.0] {
        let l = Lambda::new(lam).unwrap();
        let ax = run_axioms(&mut r, &points, |p, q| lambda_leq(p, q, l), |p, q| p == q);
        record(format!("lambda({lam})"), ax);
    }

    let cone = CapIsocone::cap([0.0, 0.0, 1.0], FRAC_PI_4).unwrap();
    let mut states: Vec<BlochState> = Vec::new();
    for _ in 0..10 {
        let (a, b) = cone.random_related_pair(&mut r);
        states.extend([a, b]);
        states.push(BlochState::new(random_unit3(&mut r)).unwrap());
    }
    let ax = run_axioms(&mut r, &states, |a, b| cap_induced_order(&cone, a, b), |a, b| {
        a.same_as(b)
    });
    record("cap".into(), ax);

    for (name, l) in default_lex_fixtures() {
        let pool: Vec<LexState> = (0..l.poset().size())
            .flat_map(|b| (0..6).map(move |_| b))
            .map(|b| l.random_state(&mut r, b))
            .collect();
        let ax = run_axioms(&mut r, &pool, |a, b| l.lex_induced_order(a, b), |a, b| {
            a.block == b.block && a.state.same_as(&b.state)
        });
        record(format!("lex[{name}]"), ax);
    }

    let d = FiniteDirac::new(0.0, 1.0);
    let mut pool: Vec<(Event, BlochState)> = Vec::new();
    for t in 0..=3 {
        for x in -2..=2 {
            for z in [0.3, -0.5] {
                for k in [0, 1, 5] {
                    pool.push((Event::new(t as f64, x as f64), on_latitude(z, k as f64 * FRAC_PI_4)));
                }
            }
        }
    }
    let ax = run_axioms(
        &mut r,
        &pool,
        |a, b| product_state_order(&d, &a.0, &a.1, &b.0, &b.1).unwrap(),
        |a, b| a.0 == b.0 && a.1.same_as(&b.1),
    );
    record("product".into(), ax);

    if failures.is_empty() {
        Ok(format!("10^4 tuples per order, 0 violations (related pairs: {})", report.join(", ")))
    } else {
        Err(failures.join("; "))
    }
}

fn rank(vectors: &[Vec<f64>]) -> usize {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for b in &basis {
            let p: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
            w.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
        }
        let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-8 {
            basis.push(w.into_iter().map(|x| x / n).collect());
        }
    }
    basis.len()
}

fn criterion_6() -> Outcome {
    let mut r = rng(106);
    let mut failures = Vec::new();

    let caps = [
        CapIsocone::cap([0.0, 0.0, 1.0], FRAC_PI_4).unwrap(),
        CapIsocone::cap([1.0, -1.0, 0.5], 0.2).unwrap(),
        CapIsocone::cap([0.0, 1.0, 0.0], 1.4).unwrap(),
    ];
    let (mut add_fail, mut fc_fail, mut diffs) = (0, 0, Vec::new());
    for k in 0..1000 {
        let cone = &caps[k % caps.len()];
        let (a, b) = (cone.random_member(&mut r, 2.0), cone.random_member(&mut r, 2.0));
        let sum = a.try_add(&b).unwrap();
        add_fail += !cap_membership(cone, &sum).unwrap() as usize;
        let phi = random_monotone(&mut r, 3.0);
        let image = apply_monotone(&a, &phi).unwrap();
        fc_fail += !cap_membership(cone, &image).unwrap() as usize;
        if k % caps.len() == 0 {
            diffs.push(a.try_sub(&b).unwrap().to_real_vector());
        }
    }
    let cap_rank = rank(&diffs);
    if add_fail + fc_fail > 0 || cap_rank != 4 {
        failures.push(format!(
            "cap: addition {add_fail}, functional calculus {fc_fail}, span rank {cap_rank}/4"
        ));
    }

    let fixtures = default_lex_fixtures();
    let (mut add_fail, mut fc_fail) = (0, 0);
    for k in 0..1000 {
        let l = &fixtures[k % fixtures.len()].1;
        let (a, b) = (l.random_member(&mut r), l.random_member(&mut r));
        let sum: Vec<HermMat> = a.iter().zip(&b).map(|(x, y)| x.try_add(y).unwrap()).collect();
        add_fail += !l.lex_membership(&sum).unwrap() as usize;
        let phi = random_monotone(&mut r, 6.0);
        let image: Vec<HermMat> = a.iter().map(|x| apply_monotone(x, &phi).unwrap()).collect();
        fc_fail += !l.lex_membership(&image).unwrap() as usize;
    }
    let mut ranks = Vec::new();
    for (name, l) in &fixtures {
        let got = l.difference_span_rank(&mut r, 4 * l.real_dim() + 8);
        if got != l.real_dim() {
            failures.push(format!("lex[{name}]: span rank {got}/{}", l.real_dim()));
        }
        ranks.push(format!("{name} {got}"));
    }
    if add_fail + fc_fail > 0 {
        failures.push(format!("lex: addition {add_fail}, functional calculus {fc_fail}"));
    }
    if failures.is_empty() {
        Ok(format!(
            "1000 cap and 1000 lex trials, 0 failures; span ranks full (cap 4, {})",
            ranks.join(", ")
        ))
    } else {
        Err(failures.join("; "))
    }
}

fn criterion_7() -> Outcome {
    let mut r = rng(107);
    let (axis_raw, rho) = ([0.3, -0.2, 1.0], 0.6);
    let cone = CapIsocone::cap(axis_raw, rho).unwrap();
    let axis = {
        let n = norm(axis_raw);
        [axis_raw[0] / n, axis_raw[1] / n, axis_raw[2] / n]
    };
    // orthonormal frame around the axis
    let helper = if axis[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let e1 = {
        let p = dot(helper, axis);
        let v = [helper[0] - p * axis[0], helper[1] - p * axis[1], helper[2] - p * axis[2]];
        let n = norm(v);
        [v[0] / n, v[1] / n, v[2] / n]
    };
    let e2 = [
        axis[1] * e1[2] - axis[2] * e1[1],
        axis[2] * e1[0] - axis[0] * e1[2],
        axis[0] * e1[1] - axis[1] * e1[0],
    ];
    let at = |theta: f64, phi: f64| -> [f64; 3] {
        let (s, c) = theta.sin_cos();
        std::array::from_fn(|i| c * axis[i] + s * (phi.cos() * e1[i] + phi.sin() * e2[i]))
    };
    // Directions at geodesic distance ≤ ρ from the axis: half on the rim, half inside.
    let samples: Vec<[f64; 3]> = (0..10_000)
        .map(|k| {
            if k % 2 == 0 {
                at(rho, TAU * (k / 2) as f64 / 5000.0)
            } else {
                let theta = (1.0 - r.gen_range(0.0..1.0) * (1.0 - rho.cos())).acos();
                at(theta, r.gen_range(0.0..TAU))
            }
        })
        .collect();

    let (mut disagreements, mut banded, mut related) = (0, 0, 0);
    for k in 0..1000 {
        let (s1, s2) = if k % 2 == 0 {
            cone.random_related_pair(&mut r)
        } else {
            (
                BlochState::new(random_unit3(&mut r)).unwrap(),
                BlochState::new(random_unit3(&mut r)).unwrap(),
            )
        };
        let (n1, n2) = (s1.bloch(), s2.bloch());
        let w = [n2[0] - n1[0], n2[1] - n1[1], n2[2] - n1[2]];
        if norm(w) > 1e-12 && (angle(w, axis) - (FRAC_PI_2 - rho)).abs() < 1e-6 {
            banded += 1;
            continue;
        }
        let sampled = samples.iter().all(|v| dot(*v, w) >= -1e-12);
        let got = cap_induced_order(&cone, &s1, &s2);
        related += got as usize;
        disagreements += (got != sampled) as usize;
    }
    if disagreements > 0 {
        return Err(format!("{disagreements} disagreements outside the band"));
    }
    Ok(format!(
        "1000 pairs ({related} related, {banded} in the 1e-6 band), 10^4 cap samples, 0 disagreements"
    ))
}

fn criterion_8() -> Outcome {
    let dirac = FiniteDirac::new(0.0, 1.0);
    let setup = FigureSetup {
        a: penrose_map(&Event::new(0.0, 0.0)),
        p: BlochState::new([1.0, 0.0, 0.0]).unwrap(),
        dirac,
        cap: CapIsocone::cap([0.0, 0.0, 1.0], FRAC_PI_4).unwrap(),
        lambda: Lambda::new(0.5).unwrap(),
        resolution: 64,
        cap_samples: 2000,
    };
    let n = setup.resolution;
    let a = penrose_inverse(&setup.a).unwrap();
    let cone = fig1_causal_cone(&setup).map_err(|e| e.to_string())?;
    let iso = fig1_isocone(&setup).map_err(|e| e.to_string())?;
    let (mut cone_bad, mut iso_bad, mut cone_grey, mut iso_grey) = (0, 0, 0, 0);
    for i in 0..n {
        for j in 0..n {
            let b = PenrosePoint::new(cell_center(i, n), cell_center(j, n)).unwrap();
            let is_base = (i, j) == cone.base;
            let expect = |grey: bool| match (is_base, grey) {
                (true, _) => CellStatus::Base,
                (false, true) => CellStatus::Grey,
                (false, false) => CellStatus::White,
            };
            let causal = causal_leq(&a, &penrose_inverse(&b).unwrap());
            cone_bad += (cone.status(i, j) != expect(causal)) as usize;
            cone_grey += (causal && !is_base) as usize;
            let lam = b != setup.a && lambda_leq(&setup.a, &b, setup.lambda);
            iso_bad += (iso.status(i, j) != expect(lam)) as usize;
            iso_grey += (lam && !is_base) as usize;
        }
    }
    if cone_bad + iso_bad > 0 || cone.base != iso.base {
        return Err(format!("cell mismatches: causal cone {cone_bad}, isocone {iso_bad}"));
    }

    let SphereAnnotation::Cap {
        apex,
        axis,
        half_angle,
        samples,
    } = isocone_annotation(&setup, &setup.a).map_err(|e| e.to_string())?
    else {
        return Err("base-cell annotation is not a cap".into());
    };
    let expected_half = FRAC_PI_2 - FRAC_PI_4;
    if !apex.same_as(&setup.p) || (half_angle - expected_half).abs() > 1e-6 {
        return Err(format!("cap apex/half-angle off: {half_angle}"));
    }
    let mut cap_bad = 0;
    for s in &samples {
        let p = setup.p.bloch();
        let w = [s.bloch[0] - p[0], s.bloch[1] - p[1], s.bloch[2] - p[2]];
        if norm(w) < 1e-12 {
            cap_bad += !s.above as usize;
            continue;
        }
        let margin = expected_half - angle(w, axis);
        if margin.abs() > 1e-6 && s.above != (margin > 0.0) {
            cap_bad += 1;
        }
    }
    if cap_bad > 0 {
        return Err(format!("{cap_bad} base-cap samples outside p + K° tolerance"));
    }
    Ok(format!(
        "{n}x{n} grids match exactly (grey: cone {cone_grey}, isocone {iso_grey}); base cap matches on {} samples",
        samples.len()
    ))
}

fn criterion_9() -> Outcome {
    let dirac = FiniteDirac::new(0.0, 1.0);
    let mut clock = None;
    for (name, f) in default_cone_fields() {
        if !field_in_cone(&f, &dirac, DEFAULT_PSD_TOL).unwrap().in_cone {
            continue;
        }
        if let Some(rep) = find_clock_phenomenon(&f, &dirac, 7).map_err(|e| e.to_string())? {
            let (lx, ly) = (
                f.value(rep.x.0, rep.x.1).max_eigenvalue().unwrap(),
                f.value(rep.y.0, rep.y.1).min_eigenvalue().unwrap(),
            );
            let causal = causal_leq(
                &f.grid().event(rep.x.0, rep.x.1),
                &f.grid().event(rep.y.0, rep.y.1),
            );
            if rep.phenomenon && causal && lx > ly {
                clock = Some(format!("{name}: λ₂(x) = {lx:.4} > λ₁(y) = {ly:.4}"));
                break;
            }
        }
    }
    let clock = clock.ok_or("no clock phenomenon among the cone-member fixtures")?;

    let w = monotone_instability_search(2000, 9)
        .map_err(|e| e.to_string())?
        .ok_or("no instability witness found")?;
    let member_ok = op_norm(&commutator(&w.dirac.matrix(), &w.a).unwrap()) <= 1.0 + 1e-9;
    let (i, j) = w.composed_check.first_failure.ok_or("witness has no failing node")?;
    // φ(tI + A) = Σ φ(t + λₖ) Pₖ, with ∂ᵤ = ∂ᵥ = ½ Σ φ'(t + λₖ) Pₖ
    let t = w.grid.event(i, j).x0;
    let (ev, vecs) = eigen_pairs(&w.a).unwrap();
    let mut value = HermMat::zeros(2);
    let mut deriv = HermMat::zeros(2);
    for (lam, v) in ev.iter().zip(&vecs) {
        let p = HermMat::projector(v);
        value = value.try_add(&p.scale(w.phi.eval(t + lam))).unwrap();
        deriv = deriv.try_add(&p.scale(0.5 * w.phi.slope(t + lam))).unwrap();
    }
    let margin = cone_margin(&deriv, &deriv, &value, &w.dirac).unwrap();
    if !(member_ok && w.member_check.in_cone && margin < -1e-9) {
        return Err(format!("witness not confirmed (margin {margin:.3e})"));
    }
    Ok(format!("{clock}; φ∘f leaves the cone at node ({i}, {j}) with margin {margin:.3e}"))
}

fn criterion_10() -> Outcome {
    let mut lines = Vec::new();
    let mut failures = Vec::new();
    for (name, l) in default_lex_fixtures() {
        let rep = saturation_check(&l, 200, 400, 11);
        if !rep.survivors.is_empty() || !rep.member_violations.is_empty() {
            failures.push(format!(
                "{name}: {} survivors, {} member violations",
                rep.survivors.len(),
                rep.member_violations.len()
            ));
        }
        lines.push(format!(
            "{name} {}/{} flagged eliminated",
            rep.eliminated_by_densification, rep.flagged_coarse
        ));
    }
    if failures.is_empty() {
        Ok(format!("0 survivors after 10x densification ({})", lines.join(", ")))
    } else {
        Err(failures.join("; "))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Connes distance oracle equivalence", criterion_1),
        ("scalar causality criterion", criterion_2),
        ("constant-plus-time fields", criterion_3),
        ("product order on (0,0) -> (s,0)", criterion_4),
        ("order axioms", criterion_5),
        ("isocone axioms on constructions", criterion_6),
        ("dual-cone formula", criterion_7),
        ("future-set figure data", criterion_8),
        ("causal cone differs from isocone", criterion_9),
        ("saturation evidence", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2}s]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.2}s]", k + 1);
            }
        }
    }
    println!("acceptance: {}/10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
