//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use geofib::fibration::{flip_z, EquivalenceTag};
use geofib::hyper::H3Geodesic;
use geofib::verify::{
    check_partition, check_preservation, classification_demo, curl_fd, default_grid, golden_table, sample_point, v_t,
    PreservationFailure,
};
use geofib::{
    canonicalize_z, transitivity_witness, Complex64, FiberField, Fibration, H3PointHalf, Point, Space, SubgroupSpec,
    Vec3,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_917;

struct Outcome {
    passed: bool,
    detail: String,
}

fn pass_if(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn fibrations() -> Vec<Fibration> {
    let mut out: Vec<Fibration> = [0.0, 0.5, 1.0, 3.0]
        .iter()
        .map(|&t| Fibration::euclidean(t).unwrap())
        .collect();
    out.push(Fibration::HyperbolicFInf);
    for z in [c(0.0, 1.0), c(1.0, 1.0), c(0.0, 2.0), c(1.0, 2.0), c(0.5, 1.5)] {
        out.push(Fibration::hyperbolic(z).unwrap());
    }
    out
}

fn partition_suite() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    let mut failures = Vec::new();
    for f in fibrations() {
        match check_partition(&f, 1000, 1e-8, SEED) {
            Ok(r) => {
                worst = worst.max(r.max_residual);
                if !r.passed {
                    failures.push(format!("{f}: {r}"));
                }
            }
            Err(e) => failures.push(format!("{f}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    pass_if(
        failures.is_empty() && elapsed < Duration::from_secs(10),
        format!(
            "10 fibrations x 1000 pairs, max residual {worst:.2e} < 1e-8, {:.2}s < 10s {}",
            elapsed.as_secs_f64(),
            failures.join("; ")
        ),
    )
}

fn transitivity_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut worst = 0.0_f64;
    let mut errors = Vec::new();
    for f in fibrations() {
        for _ in 0..100 {
            let mut local = ChaCha8Rng::seed_from_u64(rng.gen());
            let mut run = || -> geofib::Result<f64> {
                let rng = &mut local;
                let a = f.fiber_through(&sample_point(f.space(), rng))?;
                let b = f.fiber_through(&sample_point(f.space(), rng))?;
                let w = transitivity_witness(&f, &a, &b)?;
                let mut m = w.image(&a)?.mismatch(&b);
                for _ in 0..100 {
                    let probe = f.fiber_through(&sample_point(f.space(), rng))?;
                    m = m.max(f.fiber_mismatch(&w.image(&probe)?)?);
                }
                Ok(m)
            };
            match run() {
                Ok(m) => worst = worst.max(m),
                Err(e) => errors.push(format!("{f}: {e}")),
            }
        }
    }
    pass_if(
        errors.is_empty() && worst < 1e-8,
        format!(
            "10 fibrations x 100 pairs x 100 probes, max residual {worst:.2e} < 1e-8 {}",
            errors.join("; ")
        ),
    )
}

fn group_action_suite() -> Outcome {
    let e3 = |n: &str| SubgroupSpec::lookup(Space::E3, n, Some(1.0)).unwrap();
    let h3 = |n: &str| SubgroupSpec::lookup(Space::H3, n, None).unwrap();
    let ft = |t: f64| Fibration::euclidean(t).unwrap();
    let fz = |z: Complex64| Fibration::hyperbolic(z).unwrap();
    let grid = default_grid();
    let passing = [
        (ft(0.0), e3("T3")),
        (ft(1.0), e3("E2bar")),
        (fz(c(1.0, 1.0)), h3("HypPar")),
        (Fibration::HyperbolicFInf, h3("Sim")),
        (fz(c(0.0, 1.0)), h3("H2")),
    ];
    let failing = [
        (ft(1.0), e3("SO3")),
        (ft(1.0), e3("E3")),
        (fz(c(0.0, 1.0)), h3("SO3")),
        (fz(c(0.0, 1.0)), h3("H3")),
    ];
    let mut problems = Vec::new();
    for (f, g) in &passing {
        match check_preservation(f, g, &grid, 1e-8, SEED) {
            Ok(r) if r.report.passed => {}
            Ok(r) => problems.push(format!("({f}, {}) should pass: {}", g.name(), r.report)),
            Err(e) => problems.push(format!("({f}, {}): {e}", g.name())),
        }
    }
    for (f, g) in &failing {
        match check_preservation(f, g, &grid, 1e-8, SEED) {
            Ok(r) if !r.report.passed && matches!(r.failure, Some(PreservationFailure::Transversal { .. })) => {}
            Ok(r) => problems.push(format!("({f}, {}) should fail transversally: {}", g.name(), r.report)),
            Err(e) => problems.push(format!("({f}, {}): {e}", g.name())),
        }
    }
    pass_if(
        problems.is_empty(),
        format!(
            "5 preserving pairs pass, 4 pairs fail with transversal evidence {}",
            problems.join("; ")
        ),
    )
}

fn golden_tables() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut rows = [0usize; 2];
    for (i, space) in [Space::E3, Space::H3].into_iter().enumerate() {
        match classification_demo(space, 1e-8, SEED) {
            Ok(verdicts) => {
                rows[i] = verdicts.len();
                let golden = golden_table(space, 1.0);
                if verdicts.len() != golden.len() {
                    problems.push(format!("{space}: {} rows, expected {}", verdicts.len(), golden.len()));
                }
                for (v, (name, want)) in verdicts.iter().zip(&golden) {
                    if v.group_name != *name || !want.matches(&v.outcome, 1e-4) {
                        problems.push(format!("{space} {}: got {}, expected {want}", v.group_name, v.outcome));
                    }
                }
            }
            Err(e) => problems.push(format!("{space}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    pass_if(
        problems.is_empty() && rows == [12, 15] && elapsed < Duration::from_secs(60),
        format!(
            "E3 {} rows, H3 {} rows match golden tables, {:.2}s < 60s {}",
            rows[0],
            rows[1],
            elapsed.as_secs_f64(),
            problems.join("; ")
        ),
    )
}

fn curl_eigenfield() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let mut worst_ratio = 0.0_f64;
    for t in [0.5, 1.0, 2.0] {
        for _ in 0..20 {
            let p = Vec3::new(
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
            );
            for h in [1e-2, 5e-3, 2.5e-3] {
                let residual = (curl_fd(v_t(t), &p, h) + v_t(t)(&p) * t).norm();
                worst_ratio = worst_ratio.max(residual / (h * h));
            }
        }
    }
    pass_if(
        worst_ratio <= 10.0,
        format!("max |curl v_t + t v_t| / h^2 = {worst_ratio:.3} <= 10 (eigenvalue -t, |eigenvalue| = t)"),
    )
}

/// Independent oracle: the geodesic with endpoints `(a - λi, a + λz)`
/// passes through `(w, h)` iff `w` lies on the chord between the endpoints
/// and `|w - centre|² + h² = radius²`. Grid search over `(ln λ, a)` with
/// successive zooms, then Newton on the two equations.
fn oracle_lambda_a(z: Complex64, w: Complex64, h: f64) -> (f64, f64) {
    let eqs = |ln_l: f64, a: f64| -> [f64; 2] {
        let l = ln_l.exp();
        let u = c(a, -l);
        let v = c(a + l * z.re, l * z.im);
        let centre = (u + v) * 0.5;
        let r = (v - u).norm() * 0.5;
        let chord = (v - u) / (v - u).norm();
        let offset = ((w - u) * chord.conj()).im;
        [((w - centre).norm_sqr() + h * h - r * r) / (r * r), offset / r]
    };
    let score = |ln_l: f64, a: f64| {
        let [e1, e2] = eqs(ln_l, a);
        e1 * e1 + e2 * e2
    };
    let (mut best_l, mut best_a) = (0.0, w.re);
    let mut best = f64::INFINITY;
    let (mut span_l, mut span_a) = (9.0, 60.0);
    let (mut centre_l, mut centre_a) = (0.0, w.re);
    for _ in 0..6 {
        let n = 120;
        for i in 0..=n {
            for j in 0..=n {
                let ll = centre_l + span_l * (2.0 * i as f64 / n as f64 - 1.0);
                let aa = centre_a + span_a * (2.0 * j as f64 / n as f64 - 1.0);
                let s = score(ll, aa);
                if s < best {
                    best = s;
                    best_l = ll;
                    best_a = aa;
                }
            }
        }
        centre_l = best_l;
        centre_a = best_a;
        span_l *= 0.05;
        span_a *= 0.05;
    }
    let (mut ll, mut aa) = (best_l, best_a);
    for _ in 0..50 {
        let f = eqs(ll, aa);
        let d = 1e-7;
        let fl = eqs(ll + d, aa);
        let fa = eqs(ll, aa + d);
        let j = [
            [(fl[0] - f[0]) / d, (fa[0] - f[0]) / d],
            [(fl[1] - f[1]) / d, (fa[1] - f[1]) / d],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-300 {
            break;
        }
        let dl = (f[0] * j[1][1] - f[1] * j[0][1]) / det;
        let da = (j[0][0] * f[1] - j[1][0] * f[0]) / det;
        ll -= dl;
        aa -= da;
        if dl.abs() + da.abs() < 1e-15 {
            break;
        }
    }
    (ll.exp(), aa)
}

fn solver_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let mut worst = 0.0_f64;
    let mut errors = Vec::new();
    for _ in 0..200 {
        let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(0.2..3.0));
        let w = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let h = rng.gen_range(0.1..4.0);
        let p = H3PointHalf::new(w, h).unwrap();
        match geofib::fibration::fiber_h3_z(z, &p) {
            Ok((_, coords)) => {
                let (l, a) = oracle_lambda_a(z, w, h);
                worst = worst.max((coords.lambda - l).abs()).max((coords.a - a).abs());
            }
            Err(e) => errors.push(e.to_string()),
        }
    }
    let elapsed = start.elapsed();
    pass_if(
        errors.is_empty() && worst < 1e-6 && elapsed < Duration::from_secs(30),
        format!(
            "200 instances, max |(λ, a) - oracle| = {worst:.2e} < 1e-6, {:.2}s < 30s {}",
            elapsed.as_secs_f64(),
            errors.join("; ")
        ),
    )
}

fn canonicalization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let mut idempotent = true;
    let mut flip_err = 0.0_f64;
    for _ in 0..500 {
        let z = c(rng.gen_range(-5.0..5.0), rng.gen_range(0.01..5.0));
        let first = canonicalize_z(z).unwrap();
        let second = canonicalize_z(first.z).unwrap();
        idempotent &= second.z == first.z && second.steps.is_empty() && first.z.re >= 0.0 && first.z.im >= 1.0;
        flip_err = flip_err.max((flip_z(z).im * z.im - 1.0).abs());
    }
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let z = c(rng.gen_range(-3.0..3.0), rng.gen_range(0.2..3.0));
        let canon = canonicalize_z(z).unwrap();
        let witness = canon.witness();
        let target = Fibration::hyperbolic(canon.z).unwrap();
        for _ in 0..50 {
            let p = sample_point(Space::H3, &mut rng);
            let Point::H3(q) = p else { unreachable!() };
            let (g, _) = geofib::fibration::fiber_h3_z(z, &q).unwrap();
            let image: H3Geodesic = witness.image_of_geodesic(&g);
            let m = target
                .fiber_mismatch(&geofib::Fiber::Geodesic(image))
                .unwrap_or(f64::INFINITY);
            worst = worst.max(m);
        }
    }
    pass_if(
        idempotent && flip_err < 1e-12 && worst < 1e-8,
        format!(
            "500 idempotent: {idempotent}, max |Im flip(z) Im z - 1| = {flip_err:.1e} < 1e-12, \
             witness residual {worst:.2e} < 1e-8 over 20 z x 50 fibers"
        ),
    )
}

fn distinctness() -> Outcome {
    let zs = [c(0.0, 1.0), c(1.0, 1.0), c(0.0, 2.0), c(1.0, 2.0)];
    let tags: Vec<EquivalenceTag> = zs
        .iter()
        .map(|&z| Fibration::hyperbolic(z).unwrap().equivalence_invariant())
        .collect();
    let mut distinct = true;
    for i in 0..tags.len() {
        for j in i + 1..tags.len() {
            distinct &= !tags[i].approx_eq(&tags[j], 1e-9);
        }
    }
    let inf = Fibration::HyperbolicFInf.equivalence_invariant();
    let inf_distinct = tags.iter().all(|t| !inf.approx_eq(t, 1e-9));
    pass_if(
        distinct && inf_distinct,
        format!("6 F_z pairs distinct: {distinct}; F_inf distinct from all: {inf_distinct}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("partition", partition_suite),
        ("transitivity", transitivity_suite),
        ("group-action", group_action_suite),
        ("classification-golden", golden_tables),
        ("curl-eigenfield", curl_eigenfield),
        ("solver-oracle", solver_oracle),
        ("canonicalization", canonicalization),
        ("distinctness", distinctness),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let o = run();
        println!(
            "{} {name}: {} [{:.2}s]",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail.trim_end(),
            start.elapsed().as_secs_f64()
        );
        failed += usize::from(!o.passed);
    }
    println!("{} of {} criteria passed", 8 - failed, 8);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
