//! Acceptance suite: one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use abnorm_core::catalog::{AlgebraId, Catalog, Family};
use abnorm_core::lie::{StructureConstants, Vector4, DIM};
use abnorm_core::{
    canonical_basis, check_prop2, classify_basis, classify_dim3, generates, integrate,
    theorem3_dispatch, witness_search, CanonicalBasis, Dim3Verdict, SeminormBody, Sign, Subspace,
    Verdict,
};
use nalgebra::{Matrix4, Vector4 as NaVector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn catalog() -> &'static Catalog {
    Catalog::builtin()
}

fn e(k: usize) -> Vector4 {
    Vector4::e(k)
}

// Test-side oracles. These only read the raw table.

fn bracket(alg: &StructureConstants, x: &[f64; DIM], y: &[f64; DIM]) -> [f64; DIM] {
    let mut out = [0.0; DIM];
    for i in 0..DIM {
        for j in 0..DIM {
            for (k, o) in out.iter_mut().enumerate() {
                *o += x[i] * y[j] * alg.constant(i, j, k);
            }
        }
    }
    out
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn jacobi_oracle(alg: &StructureConstants) -> f64 {
    let mut worst: f64 = 0.0;
    for a in 1..=DIM {
        for b in 1..=DIM {
            for c in 1..=DIM {
                let (x, y, z) = (e(a).0, e(b).0, e(c).0);
                let t1 = bracket(alg, &x, &bracket(alg, &y, &z));
                let t2 = bracket(alg, &y, &bracket(alg, &z, &x));
                let t3 = bracket(alg, &z, &bracket(alg, &x, &y));
                let s: Vec<f64> = (0..DIM).map(|k| t1[k] + t2[k] + t3[k]).collect();
                worst = worst.max(max_abs(&s));
            }
        }
    }
    worst
}

fn apply(m: &Matrix4<f64>, v: &[f64; DIM]) -> [f64; DIM] {
    let r = m * NaVector4::from_column_slice(v);
    [r[0], r[1], r[2], r[3]]
}

fn automorphism_oracle(alg: &StructureConstants, m: &Matrix4<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for a in 1..=DIM {
        for b in 1..=DIM {
            let lhs = apply(m, &bracket(alg, &e(a).0, &e(b).0));
            let rhs = bracket(alg, &apply(m, &e(a).0), &apply(m, &e(b).0));
            let d: Vec<f64> = (0..DIM).map(|k| lhs[k] - rhs[k]).collect();
            worst = worst.max(max_abs(&d));
        }
    }
    worst
}

/// Gram-Schmidt span with a relative cutoff.
#[derive(Default)]
struct Span {
    q: Vec<[f64; DIM]>,
}

impl Span {
    fn push(&mut self, v: &[f64; DIM]) {
        let n0 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n0 <= 1e-9 || self.q.len() == DIM {
            return;
        }
        let mut r = *v;
        for _ in 0..2 {
            for q in &self.q {
                let d: f64 = (0..DIM).map(|k| q[k] * r[k]).sum();
                for k in 0..DIM {
                    r[k] -= d * q[k];
                }
            }
        }
        let n = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-8 * n0.max(1.0) {
            self.q.push(r.map(|x| x / n));
        }
    }
}

fn flag_oracle(alg: &StructureConstants, p: &[Vector4]) -> Vec<usize> {
    let mut span = Span::default();
    for v in p {
        span.push(&v.0);
    }
    let mut dims = vec![span.q.len()];
    while span.q.len() < DIM {
        let basis = span.q.clone();
        for a in &basis {
            for b in &basis {
                span.push(&bracket(alg, a, b));
            }
        }
        let d = span.q.len();
        let repeat = d == *dims.last().unwrap();
        dims.push(d);
        if repeat {
            break;
        }
    }
    dims
}

/// `[e2,e3]` expressed in `(e1..e4)` by a direct solve.
fn c23_oracle(alg: &StructureConstants, b: &CanonicalBasis) -> [f64; DIM] {
    let m = Matrix4::from_columns(&[b.e1.to_na(), b.e2.to_na(), b.e3.to_na(), b.e4.to_na()]);
    let rhs = NaVector4::from_column_slice(&bracket(alg, &b.e2.0, &b.e3.0));
    let x = m.lu().solve(&rhs).expect("canonical frame is a basis");
    [x[0], x[1], x[2], x[3]]
}

/// The adjoint system along `exp(t u2 e2)`, written out from the equations.
fn adjoint_matrix(c: &[f64; DIM], u2: f64) -> Matrix4<f64> {
    let mut a = Matrix4::zeros();
    // psi1' = -u2 psi3
    a[(0, 2)] = -u2;
    // psi3' = u2 (C1 psi1 + C2 psi2 + C3 psi3 + C4 psi4)
    for k in 0..DIM {
        a[(2, k)] = u2 * c[k];
    }
    // psi4' = u2 (C2 psi3 + C3 psi4)
    a[(3, 2)] = u2 * c[1];
    a[(3, 3)] = u2 * c[2];
    a
}

fn bodies() -> Vec<(&'static str, SeminormBody)> {
    vec![
        ("centered disk", SeminormBody::unit_disk()),
        ("shifted disk", SeminormBody::disk([0.5, 0.0], 1.0).unwrap()),
        ("square", SeminormBody::square(1.0).unwrap()),
        (
            "quadrilateral",
            SeminormBody::polygon(vec![[1.0, 0.0], [0.0, 1.0], [-2.0, 0.0], [0.0, -1.0]]).unwrap(),
        ),
    ]
}

fn planes(id: &AlgebraId) -> Vec<(String, Subspace)> {
    catalog()
        .known_generating_subspaces(id)
        .unwrap()
        .into_iter()
        .map(|k| (k.label.clone().unwrap_or_default(), k.subspace().unwrap()))
        .collect()
}

fn all_ids() -> Vec<AlgebraId> {
    Family::ALL
        .iter()
        .flat_map(|&f| catalog().parameter_grid(f))
        .collect()
}

/// A few evenly spread grid points per family.
fn spread_ids(per_family: usize) -> Vec<AlgebraId> {
    Family::ALL
        .iter()
        .flat_map(|&f| {
            let g = catalog().parameter_grid(f);
            let step = (g.len() / per_family).max(1);
            g.into_iter().step_by(step).take(per_family).collect::<Vec<_>>()
        })
        .collect()
}

fn random_plane<R: Rng>(rng: &mut R) -> Subspace {
    loop {
        let mut v = || Vector4(std::array::from_fn(|_| rng.random_range(-1.0..1.0)));
        if let Ok(p) = Subspace::new(vec![v(), v()]) {
            return p;
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst_jac: f64 = 0.0;
    let mut worst_aut: f64 = 0.0;
    let mut draws = 0;
    for &f in &Family::ALL {
        let grid = catalog().parameter_grid(f);
        if !f.param_names().is_empty() {
            ensure(grid.len() >= 20, || format!("{f}: only {} parameter samples", grid.len()))?;
        }
        for id in &grid {
            let alg = catalog().instantiate(id).map_err(|e| e.to_string())?;
            let d = jacobi_oracle(&alg).max(alg.jacobi_defect());
            ensure(d <= 1e-12, || format!("{id}: Jacobi defect {d:e}"))?;
            worst_jac = worst_jac.max(d);
            let Ok(fam) = catalog().automorphism_family(id) else {
                continue;
            };
            for _ in 0..100 {
                let m = fam.sample(&mut rng).map_err(|e| e.to_string())?;
                let d = automorphism_oracle(&alg, m.matrix()).max(alg.automorphism_defect(&m));
                ensure(d <= 1e-10, || format!("{id}: automorphism defect {d:e} for {:?}", m.params()))?;
                worst_aut = worst_aut.max(d);
                draws += 1;
            }
        }
    }
    // Boundary values singled out by the constraints.
    for id in [
        AlgebraId::with_alpha(Family::G48, -1.0),
        AlgebraId::with_alpha(Family::G48, 1.0),
        AlgebraId::with_alpha(Family::G42, 1.0),
        AlgebraId::with_params(Family::G45, -1.0, 1.0),
        AlgebraId::with_params(Family::G45, 0.5, 0.5),
    ] {
        let d = jacobi_oracle(&catalog().instantiate(&id).map_err(|e| e.to_string())?);
        ensure(d <= 1e-12, || format!("{id}: Jacobi defect {d:e}"))?;
    }
    Ok(format!(
        "max Jacobi defect {worst_jac:.1e}, {draws} automorphism draws, max defect {worst_aut:.1e}"
    ))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for id in all_ids() {
        let alg = catalog().instantiate(&id).unwrap();
        for (label, p0) in planes(&id) {
            for n in 0..=50 {
                let p = if n == 0 {
                    p0.clone()
                } else {
                    let m = catalog().random_automorphism(&id, &mut rng).map_err(|e| e.to_string())?;
                    p0.transform(&m).map_err(|e| e.to_string())?
                };
                let b = canonical_basis(&alg, &p).map_err(|e| format!("{id} {label}: {e}"))?;
                let d = check_prop2(&b);
                ensure(d <= 1e-9, || format!("{id} {label}: frame relation defect {d:e}"))?;
                let c = c23_oracle(&alg, &b);
                let scale = 1.0 + max_abs(&c);
                let diff: Vec<f64> = (0..DIM).map(|k| c[k] - b.c23[k]).collect();
                ensure(max_abs(&diff) <= 1e-9 * scale, || {
                    format!("{id} {label}: C23 {:?} vs direct solve {c:?}", b.c23)
                })?;
                ensure(c[3].abs() <= 1e-9 * scale, || format!("{id} {label}: C4 = {}", c[3]))?;
                if c[0].abs() > 1e-9 {
                    ensure(c[1].abs() <= 1e-9 * scale, || {
                        format!("{id} {label}: C1 = {}, C2 = {}", c[0], c[1])
                    })?;
                }
                let mut span = Span::default();
                for v in p.vectors().iter().chain([&b.e1, &b.e2]) {
                    span.push(&v.0);
                }
                ensure(span.q.len() == 2, || format!("{id} {label}: e1, e2 leave the plane"))?;
                worst = worst.max(d);
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} planes (known plus automorphism images), max defect {worst:.1e}"))
}

fn excluded(id: &AlgebraId) -> bool {
    let (a, b) = (id.alpha.unwrap_or(f64::NAN), id.beta.unwrap_or(f64::NAN));
    match id.family {
        Family::G31 | Family::G33 => true,
        Family::G42 | Family::G48 => a == 1.0,
        Family::G45 => b == 1.0 || a == b,
        _ => false,
    }
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut with_plane = 0;
    let mut without = 0;
    let mut extra = vec![
        AlgebraId::with_alpha(Family::G42, 1.0),
        AlgebraId::with_alpha(Family::G48, 1.0),
        AlgebraId::with_params(Family::G45, 0.5, 1.0),
        AlgebraId::with_params(Family::G45, -0.7, -0.7),
    ];
    extra.extend(all_ids());
    for id in extra {
        let alg = catalog().instantiate(&id).unwrap();
        let listed = planes(&id);
        let expect_none = excluded(&id);
        ensure(catalog().has_no_generator(&id).unwrap() == expect_none, || {
            format!("{id}: catalog exclusion flag disagrees")
        })?;
        if expect_none {
            ensure(listed.is_empty(), || format!("{id}: excluded but a plane is listed"))?;
            for _ in 0..1000 {
                let p = random_plane(&mut rng);
                let f = generates(&alg, &p);
                let oracle = flag_oracle(&alg, p.vectors());
                ensure(f.dims == oracle, || format!("{id}: flag {:?} vs oracle {oracle:?}", f.dims))?;
                ensure(!f.generates, || format!("{id}: random plane generates: {:?}", p.vectors()))?;
            }
            without += 1;
        } else {
            ensure(!listed.is_empty(), || format!("{id}: no plane listed"))?;
            for (label, p) in listed {
                let f = generates(&alg, &p);
                let oracle = flag_oracle(&alg, p.vectors());
                ensure(f.generates && f.dims == oracle && *oracle.last().unwrap() == DIM, || {
                    format!("{id} {label}: flag {:?}, oracle {oracle:?}", f.dims)
                })?;
            }
            with_plane += 1;
        }
    }
    Ok(format!(
        "{with_plane} parameter points with generating planes, {without} without (1000 random planes each)"
    ))
}

fn criterion_4() -> Outcome {
    let p3 = Subspace::new(vec![e(1), e(3), e(4)]).unwrap();
    let engel = catalog().instantiate(&AlgebraId::new(Family::G41)).unwrap();
    let r = classify_dim3(&engel, &p3, None).map_err(|e| e.to_string())?;
    ensure(r.verdict == Some(Dim3Verdict::NonStrictForAllMetrics), || {
        format!("Engel 3-dim: {:?}", r.verdict)
    })?;
    let g43 = catalog().instantiate(&AlgebraId::new(Family::G43)).unwrap();
    let r = classify_dim3(&g43, &p3, None).map_err(|e| e.to_string())?;
    ensure(r.verdict == Some(Dim3Verdict::StrictForAllMetrics), || {
        format!("g4.3 3-dim: {:?}", r.verdict)
    })?;

    let g37 = catalog().instantiate(&AlgebraId::new(Family::G37)).unwrap();
    let p = Subspace::new(vec![e(1) + e(4), e(1) + e(2) + e(4) * 2.0]).unwrap();
    let b = canonical_basis(&g37, &p).map_err(|e| e.to_string())?;
    let target = (e(1) - e(2)) * 0.5;
    ensure((b.e1 - target).max_abs() <= 1e-12, || format!("so(3) + R: shifted e1 = {}", b.e1))?;
    let body = b.body_from_subspace_frame(&SeminormBody::unit_disk()).unwrap();
    let v = classify_basis(&b, &body).combined;
    ensure(v == Verdict::Strict, || format!("so(3) + R: {v:?}"))?;

    let mut n = 0;
    for id in [AlgebraId::new(Family::G410), AlgebraId::with_alpha(Family::G48, 0.0)] {
        let alg = catalog().instantiate(&id).unwrap();
        for (label, p) in planes(&id) {
            let b = canonical_basis(&alg, &p).unwrap();
            for (name, body) in bodies() {
                let v = classify_basis(&b, &body).combined;
                ensure(v == Verdict::NonStrict, || format!("{id} {label} {name}: {v:?}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("Engel, g4.3 and so(3) + R reproduced, {n} g4.10 and g4.8(alpha=0) cases non-strict"))
}

fn criterion_5() -> Outcome {
    let mut agree = 0;
    let mut flagged = 0;
    for id in all_ids() {
        let alg = catalog().instantiate(&id).unwrap();
        for (label, p) in planes(&id) {
            let b = canonical_basis(&alg, &p).unwrap();
            for (name, body) in bodies() {
                let report = classify_basis(&b, &body);
                if id.family == Family::G36 && (label == "IIa" || label == "IIb") {
                    // Flagged exactly where the summary theorem departs from the criterion.
                    let d = theorem3_dispatch(catalog(), &id, &p, &body).map_err(|e| e.to_string())?;
                    let departs = d.theorem.iter().any(|&(s, v)| v != report.verdict(s));
                    ensure(d.tension == departs && (!departs || !d.consistent), || {
                        format!("{id} {label} {name}: tension {} but departs {departs}", d.tension)
                    })?;
                    if departs {
                        flagged += 1;
                    }
                }
                for s in Sign::BOTH {
                    let w = witness_search(&b, &body, s, 5.0);
                    let oracle = if w.is_some() { Verdict::NonStrict } else { Verdict::Strict };
                    ensure(oracle == report.verdict(s), || {
                        format!("{id} {label} {name} s={s}: criterion {:?}, oracle {oracle:?}", report.verdict(s))
                    })?;
                    if let Some(w) = w {
                        // The witness must solve the adjoint system and stay on the level set.
                        let a = adjoint_matrix(&b.c23, w.u2);
                        let x0 = NaVector4::from_column_slice(&w.state(0.0));
                        for k in 1..=10 {
                            let t = 0.5 * k as f64;
                            let x = (a * t).exp() * x0;
                            let y = w.state(t);
                            let d = (0..DIM).map(|i| (x[i] - y[i]).abs()).fold(0.0, f64::max);
                            ensure(d <= 1e-7 * (1.0 + x.amax()), || {
                                format!("{id} {label} {name} s={s}: witness off the ODE by {d:e}")
                            })?;
                            let h = body.support([y[0], y[1]]);
                            ensure((h - 1.0).abs() <= 1e-7, || {
                                format!("{id} {label} {name} s={s}: support {h} at t={t}")
                            })?;
                        }
                    }
                    agree += 1;
                }
            }
        }
    }
    Ok(format!("{agree} cases agree, {flagged} type IIa/IIb cases flagged"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for n in 0..100 {
        let mut c: [f64; DIM] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        if n % 4 == 0 {
            c[0] = 0.0;
            c[1] = 0.0;
        }
        let u2 = rng.random_range(0.3..1.5) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let psi0: [f64; DIM] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let tr = integrate(&c, u2, &psi0, 5.0, 1e-3).map_err(|e| e.to_string())?;
        let a = adjoint_matrix(&c, u2);
        let x0 = NaVector4::from_column_slice(&psi0);
        for st in tr.states.iter().step_by(50) {
            let x = (a * st.t).exp() * x0;
            let d = (0..DIM).map(|i| (x[i] - st.psi[i]).abs()).fold(0.0, f64::max);
            ensure(d <= 1e-6, || format!("C = {c:?}, u2 = {u2}: deviation {d:e} at t = {}", st.t))?;
            worst = worst.max(d);
            if c[0] == 0.0 && c[1] == 0.0 {
                let psi4 = psi0[3] * (c[2] * u2 * st.t).exp();
                ensure((st.psi[3] - psi4).abs() <= 1e-6, || {
                    format!("C = {c:?}: psi4 {} vs {psi4}", st.psi[3])
                })?;
            }
        }
        ensure(tr.max_deviation <= 1e-6, || format!("reported deviation {:e}", tr.max_deviation))?;
    }
    Ok(format!("100 constant sets, max deviation {worst:.1e}"))
}

fn random_convex_polygon<R: Rng>(rng: &mut R) -> SeminormBody {
    loop {
        let n = rng.random_range(3..12);
        let mut angles: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let (a, b) = (rng.random_range(0.5..2.0), rng.random_range(0.5..2.0));
        let (cx, cy) = (rng.random_range(-0.2..0.2), rng.random_range(-0.2..0.2));
        let vs: Vec<[f64; 2]> = angles.iter().map(|t| [cx + a * t.cos(), cy + b * t.sin()]).collect();
        if let Ok(p) = SeminormBody::polygon(vs) {
            return p;
        }
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut test_bodies: Vec<SeminormBody> = bodies().into_iter().map(|(_, b)| b).collect();
    test_bodies.push(SeminormBody::ellipse([0.1, -0.2], [[2.0, 0.3], [0.3, 0.5]]).unwrap());
    test_bodies.extend((0..5).map(|_| random_convex_polygon(&mut rng)));
    let mut samples = 0;
    for body in &test_bodies {
        for _ in 0..10_000 {
            let v = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
            let w = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
            let lhs = v[0] * w[0] + v[1] * w[1];
            let rhs = body.gauge(v) * body.support(w);
            ensure(lhs <= rhs + 1e-12 * (1.0 + rhs.abs()), || {
                format!("<{v:?}, {w:?}> = {lhs} > {rhs}")
            })?;
            samples += 1;
        }
    }
    for _ in 0..200 {
        let p = random_convex_polygon(&mut rng);
        let pp = p.polar().and_then(|q| q.polar()).map_err(|e| e.to_string())?;
        let (a, b) = (p.vertices().unwrap(), pp.vertices().unwrap());
        ensure(a.len() == b.len(), || format!("{} vertices vs {}", a.len(), b.len()))?;
        for v in a {
            let nearest = b
                .iter()
                .map(|w| (v[0] - w[0]).abs().max((v[1] - w[1]).abs()))
                .fold(f64::INFINITY, f64::min);
            ensure(nearest <= 1e-9, || format!("vertex {v:?} missing from bipolar ({nearest:e})"))?;
        }
    }
    let shifted = SeminormBody::disk([0.5, 0.0], 1.0).unwrap();
    for s in Sign::BOTH {
        let (sup, inv) = shifted.axis_values(s);
        ensure((sup - 1.0).abs() <= 1e-12 && (inv - 3f64.sqrt() / 2.0).abs() <= 1e-12, || {
            format!("shifted disk axis values ({sup}, {inv})")
        })?;
        ensure(!shifted.axis_condition(s), || "shifted disk passes the axis condition".into())?;
    }
    Ok(format!("{samples} gauge-support samples, 200 bipolar polygons, shifted disk (1 vs sqrt3/2)"))
}

/// Body of `(xi p, xi U)` in the canonical frame of `xi p`.
fn transport(
    alg: &StructureConstants,
    b: &CanonicalBasis,
    body: &SeminormBody,
    m: &Matrix4<f64>,
) -> Result<(CanonicalBasis, SeminormBody), String> {
    let (x1, x2) = (Vector4(apply(m, &b.e1.0)), Vector4(apply(m, &b.e2.0)));
    let q = Subspace::new(vec![x1, x2]).map_err(|e| e.to_string())?;
    let b2 = canonical_basis(alg, &q).map_err(|e| e.to_string())?;
    let (c1, c2) = (b2.coordinates(&x1), b2.coordinates(&x2));
    let a = [[c1[0], c2[0]], [c1[1], c2[1]]];
    let body2 = body.linear_image(a).map_err(|e| e.to_string())?;
    Ok((b2, body2))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut cases = 0;
    for id in spread_ids(3) {
        let alg = catalog().instantiate(&id).unwrap();
        let maps: Vec<Matrix4<f64>> = (0..50)
            .map(|_| {
                let m = catalog().random_automorphism(&id, &mut rng).unwrap();
                let d = automorphism_oracle(&alg, m.matrix());
                assert!(d <= 1e-9 * (1.0 + m.matrix().amax().powi(2)), "{id}: unverified automorphism {d:e}");
                *m.matrix()
            })
            .collect();
        for (label, p) in planes(&id) {
            let b = canonical_basis(&alg, &p).unwrap();
            for (name, body) in bodies() {
                let v = classify_basis(&b, &body).combined;
                for lambda in [0.5, 2.0, 10.0] {
                    let w = classify_basis(&b, &body.scaled(lambda).unwrap()).combined;
                    ensure(v == w, || format!("{id} {label} {name}: {v:?} but {w:?} at scale {lambda}"))?;
                    cases += 1;
                }
                for m in &maps {
                    let (b2, body2) = transport(&alg, &b, &body, m).map_err(|e| format!("{id} {label}: {e}"))?;
                    let w = classify_basis(&b2, &body2).combined;
                    ensure(v == w, || {
                        format!("{id} {label} {name}: {v:?} but {w:?} after automorphism, C23 {:?} -> {:?}", b.c23, b2.c23)
                    })?;
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} scaled or transported cases keep their verdict"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("catalog soundness", criterion_1),
        ("canonical frames", criterion_2),
        ("generation table", criterion_3),
        ("worked examples", criterion_4),
        ("criterion vs oracle", criterion_5),
        ("ODE fidelity", criterion_6),
        ("convex duality", criterion_7),
        ("invariance", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        println!("acceptance: 8/8 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 8 criteria fail");
        ExitCode::FAILURE
    }
}
