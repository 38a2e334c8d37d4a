//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! Reference values come from independent oracles written here (central
//! differences, vertex and active-set enumeration, angular grids, a dense SVD
//! from nalgebra, closed-form maximizers), not from the library under test.

use std::io::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use saddlefw::ingest::{
    parse_libsvm_str, synthetic_classification, write_libsvm, CsrMatrix, ParseOptions, SparseDataset,
    SyntheticClassification,
};
use saddlefw::problems::{
    generate_dictionary_dataset, DictionaryDims, DictionaryLearning, QuadraticSaddle, RobustMulticlass,
};
use saddlefw::sets::{BoxSet, ChiSquareBall, L2Ball, NuclearBall, Simplex};
use saddlefw::{
    run, run_cg_rpga, scalar_recursion_bound, Algorithm, DualStep, Error, FeasibleSet, SaddleObjective, SolverConfig64,
    StepSchedule,
};
use saddlefw_harness::config::{AlgorithmSpec, Timing};
use saddlefw_harness::presets::preset;
use saddlefw_harness::runner::{build_problem, execute, solver_configs};
use saddlefw_harness::trace::{read_trace, rows_for, write_trace, TraceRow, TRACE_HEADER};
use saddlefw_harness::ExperimentConfig;

type Outcome = Result<String, String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gauss(r: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| r.sample(StandardNormal)).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn diff(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    norm(&diff(a, b))
}

fn rel_err(got: &[f64], want: &[f64]) -> f64 {
    dist(got, want) / norm(want).max(1e-12)
}

fn central_difference(f: impl Fn(&[f64]) -> f64, at: &[f64], h: f64) -> Vec<f64> {
    let mut p = at.to_vec();
    (0..at.len())
        .map(|i| {
            let orig = p[i];
            p[i] = orig + h;
            let hi = f(&p);
            p[i] = orig - h;
            let lo = f(&p);
            p[i] = orig;
            (hi - lo) / (2.0 * h)
        })
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Euclidean projection onto a ball, written independently of the library.
fn ball_projection(p: &[f64], center: &[f64], radius: f64) -> Vec<f64> {
    let d = diff(p, center);
    let n = norm(&d);
    if n <= radius {
        p.to_vec()
    } else {
        center.iter().zip(&d).map(|(c, v)| c + radius * v / n).collect()
    }
}

/// Point in a ball: on the boundary half of the time, otherwise uniform.
fn ball_point(r: &mut impl Rng, center: &[f64], radius: f64) -> Vec<f64> {
    let dir = gauss(r, center.len());
    let n = norm(&dir);
    let t = if r.random::<bool>() {
        1.0
    } else {
        r.random::<f64>().powf(1.0 / center.len() as f64)
    };
    center.iter().zip(&dir).map(|(c, d)| c + radius * t * d / n).collect()
}

fn spectral_norm(rows: usize, cols: usize, data: &[f64]) -> f64 {
    DMatrix::from_row_slice(rows, cols, data).singular_values().max()
}

/// Analytic maximizer of `L(x, .) - mu/2 ||. - anchor||^2` over a centered
/// ball for `L = 1/2 x'Qx + x'Ay + b'y - mu_tilde/2 ||y||^2`.
fn quad_y_star(p: &QuadraticSaddle<f64>, x: &[f64], mu: f64, anchor: &[f64], radius: f64) -> Vec<f64> {
    let a = p.coupling();
    let gy0 = p.grad_y(x, &vec![0.0; a.cols]);
    let curv = p.mu_tilde() + mu;
    let free: Vec<f64> = gy0.iter().zip(anchor).map(|(g, y0)| (g + mu * y0) / curv).collect();
    ball_projection(&free, &vec![0.0; a.cols], radius)
}

// 1 ------------------------------------------------------------------------

fn gradient_worst(
    obj: &dyn SaddleObjective<f64>,
    x_set: &dyn FeasibleSet<f64>,
    y_set: &dyn FeasibleSet<f64>,
    points: usize,
    seed: u64,
) -> f64 {
    let mut r = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..points {
        let x = x_set.sample(&mut r);
        let y = y_set.sample(&mut r);
        let fx = central_difference(|p| obj.value(p, &y), &x, 1e-6);
        let fy = central_difference(|p| obj.value(&x, p), &y, 1e-6);
        worst = worst
            .max(rel_err(&obj.grad_x(&x, &y), &fx))
            .max(rel_err(&obj.grad_y(&x, &y), &fy));
    }
    worst
}

fn criterion_gradients() -> Outcome {
    let spec = SyntheticClassification {
        samples: 30,
        features: 10,
        classes: 3,
        nnz_per_row: 5,
        noise: 0.3,
    };
    let ds = synthetic_classification::<f64>(&spec, 11).map_err(|e| e.to_string())?;
    let rx = NuclearBall::new(ds.num_classes(), ds.dim(), 3.0).unwrap();
    let ry = ChiSquareBall::new(ds.len(), 1.0).unwrap();
    let robust = RobustMulticlass::new(ds, saddlefw::Smoothness::new(1.0, 1.0, 0.0, 0.0).unwrap()).unwrap();

    let dims = DictionaryDims {
        m: 6,
        n: 8,
        p: 3,
        l: 2,
        q: 4,
        n_prime: 5,
    };
    let data = generate_dictionary_dataset::<f64>(dims, 12).unwrap();
    let dict = DictionaryLearning::new(&data, 1e-4, 2.0, 1.0).unwrap();
    let (dx, dy) = dict.feasible_sets().unwrap();

    let quad = QuadraticSaddle::<f64>::random(7, 4, 0.6, 13).unwrap();
    let qx = L2Ball::centered(7, 1.5).unwrap();
    let qy = L2Ball::centered(4, 1.0).unwrap();

    let worst = [
        ("robust", gradient_worst(&robust, &rx, &ry, 50, 1)),
        ("dictionary", gradient_worst(&dict, &dx, &dy, 50, 2)),
        ("quadratic", gradient_worst(&quad, &qx, &qy, 50, 3)),
    ];
    for (name, w) in worst {
        ensure(w <= 1e-5, || format!("{name}: relative error {w:e} > 1e-5"))?;
    }
    Ok(format!(
        "worst relative error robust {:.1e}, dictionary {:.1e}, quadratic {:.1e}",
        worst[0].1, worst[1].1, worst[2].1
    ))
}

// 2 ------------------------------------------------------------------------

/// Projection onto the probability simplex by enumerating supports.
fn simplex_projection_oracle(p: &[f64]) -> Vec<f64> {
    let n = p.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 1u32..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let theta = (support.iter().map(|&i| p[i]).sum::<f64>() - 1.0) / support.len() as f64;
        let mut q = vec![0.0; n];
        let mut ok = true;
        for &i in &support {
            q[i] = p[i] - theta;
            ok &= q[i] >= -1e-15;
        }
        if !ok {
            continue;
        }
        let d = dist(p, &q);
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            best = Some((d, q));
        }
    }
    best.expect("some support is feasible").1
}

/// Minimum of `f` over the circle: a 10^4-point angular grid, refined by
/// ternary search between the neighbours of the best grid point.
fn grid_minimum(f: impl Fn(f64) -> f64) -> f64 {
    let n = 10_000;
    let step = 2.0 * std::f64::consts::PI / n as f64;
    let best = (0..n)
        .min_by(|&a, &b| f(a as f64 * step).total_cmp(&f(b as f64 * step)))
        .unwrap();
    let (mut lo, mut hi) = ((best as f64 - 1.0) * step, (best as f64 + 1.0) * step);
    for _ in 0..100 {
        let (m1, m2) = (lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0);
        if f(m1) < f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    f(0.5 * (lo + hi))
}

fn criterion_oracles() -> Outcome {
    let mut r = rng(21);
    let tol = 1e-6;
    let mut worst: f64 = 0.0;

    let simplex = Simplex::new(4).unwrap();
    for _ in 0..1000 {
        let c = gauss(&mut r, 4);
        let got = dot(&c, &simplex.lmo(&c).unwrap());
        let want = c.iter().cloned().fold(f64::INFINITY, f64::min);
        worst = worst.max((got - want).abs());
        let p: Vec<f64> = gauss(&mut r, 4).iter().map(|v| 2.0 * v).collect();
        worst = worst.max(dist(&simplex.project(&p).unwrap(), &simplex_projection_oracle(&p)));
    }
    ensure(worst <= tol, || format!("simplex deviates by {worst:e}"))?;

    let lo = vec![-1.0, 0.5, -0.2];
    let hi = vec![2.0, 0.75, 3.0];
    let boxed = BoxSet::new(lo.clone(), hi.clone()).unwrap();
    for _ in 0..1000 {
        let c = gauss(&mut r, 3);
        let vertex_min = (0..8u32)
            .map(|m| {
                let v: Vec<f64> = (0..3).map(|i| if m & (1 << i) != 0 { hi[i] } else { lo[i] }).collect();
                dot(&c, &v)
            })
            .fold(f64::INFINITY, f64::min);
        worst = worst.max((dot(&c, &boxed.lmo(&c).unwrap()) - vertex_min).abs());
        let p: Vec<f64> = gauss(&mut r, 3).iter().map(|v| 3.0 * v).collect();
        let clamp: Vec<f64> = (0..3).map(|i| p[i].max(lo[i]).min(hi[i])).collect();
        worst = worst.max(dist(&boxed.project(&p).unwrap(), &clamp));
    }
    ensure(worst <= tol, || format!("box deviates by {worst:e}"))?;

    let center = vec![0.4, -0.3];
    let radius = 1.3;
    let ball = L2Ball::new(center.clone(), radius).unwrap();
    let circle = |t: f64| vec![center[0] + radius * t.cos(), center[1] + radius * t.sin()];
    for _ in 0..200 {
        let c = gauss(&mut r, 2);
        let want = grid_minimum(|t| dot(&c, &circle(t)));
        worst = worst.max((dot(&c, &ball.lmo(&c).unwrap()) - want).abs());
        let p: Vec<f64> = gauss(&mut r, 2).iter().map(|v| 2.0 * v).collect();
        let got = ball.project(&p).unwrap();
        let want = if dist(&p, &center) <= radius {
            0.0
        } else {
            grid_minimum(|t| dist(&p, &circle(t)))
        };
        worst = worst.max((dist(&p, &got) - want).abs());
    }
    ensure(worst <= tol, || format!("ball deviates by {worst:e}"))?;

    let nuclear = NuclearBall::<f64>::new(10, 8, 1.5).unwrap();
    let mut nuc_worst: f64 = 0.0;
    for _ in 0..20 {
        let c = gauss(&mut r, 80);
        let want = -1.5 * spectral_norm(10, 8, &c);
        let got = dot(&c, &nuclear.lmo(&c).map_err(|e| e.to_string())?);
        nuc_worst = nuc_worst.max(((got - want) / want).abs());
    }
    ensure(nuc_worst <= tol, || format!("nuclear LMO relative error {nuc_worst:e}"))?;
    Ok(format!(
        "simplex/box/ball max deviation {worst:.1e}, nuclear relative error {nuc_worst:.1e}"
    ))
}

// 3 ------------------------------------------------------------------------

fn criterion_strong_convexity() -> Outcome {
    let mut r = rng(31);
    let center = gauss(&mut r, 5);
    let radius = 0.7;
    let ball = L2Ball::new(center.clone(), radius).unwrap();
    let n = 6;
    let rho = 0.5;
    let chi = ChiSquareBall::<f64>::new(n, rho).unwrap();
    let chi_center = vec![1.0 / n as f64; n];
    let chi_radius = rho.sqrt() / n as f64;
    let mut worst = f64::NEG_INFINITY;
    for (set, c, rad) in [
        (&ball as &dyn FeasibleSet<f64>, &center, radius),
        (&chi as &dyn FeasibleSet<f64>, &chi_center, chi_radius),
    ] {
        let alpha = set
            .strong_convexity()
            .ok_or_else(|| format!("{} declares no modulus", set.name()))?;
        for _ in 0..1000 {
            let u = ball_point(&mut r, c, rad);
            let v = ball_point(&mut r, c, rad);
            let g: f64 = r.random();
            let w = gauss(&mut r, c.len());
            let wn = norm(&w);
            let bump = g * (1.0 - g) * alpha / 2.0 * dist(&u, &v).powi(2);
            let p: Vec<f64> = (0..c.len())
                .map(|i| g * u[i] + (1.0 - g) * v[i] + bump * w[i] / wn)
                .collect();
            worst = worst.max(dist(&p, c) - rad);
        }
    }
    ensure(worst <= 1e-9, || format!("construction point outside by {worst:e}"))?;
    Ok(format!("2000 construction points, largest excess {worst:.1e}"))
}

// 4 ------------------------------------------------------------------------

fn criterion_lipschitz_solution_map() -> Outcome {
    let p = QuadraticSaddle::<f64>::random(6, 4, 0.0, 41).unwrap();
    let a = p.coupling();
    let l_yx = spectral_norm(a.rows, a.cols, &a.data);
    let y_radius = 0.5;
    let mut r = rng(42);
    let anchor = ball_point(&mut r, &[0.0; 4], y_radius);
    let mut worst = f64::NEG_INFINITY;
    for mu in [0.1, 1.0] {
        for _ in 0..100 {
            let x1 = ball_point(&mut r, &[0.0; 6], 1.0);
            let x2 = ball_point(&mut r, &[0.0; 6], 1.0);
            let y1 = quad_y_star(&p, &x1, mu, &anchor, y_radius);
            let y2 = quad_y_star(&p, &x2, mu, &anchor, y_radius);
            worst = worst.max(dist(&y1, &y2) - l_yx / mu * dist(&x1, &x2));
        }
    }
    ensure(worst <= 1e-8, || format!("bound exceeded by {worst:e}"))?;
    Ok(format!("200 pairs, largest slack {worst:.2e} (negative means inside)"))
}

// 5 ------------------------------------------------------------------------

fn criterion_danskin() -> Outcome {
    let p = QuadraticSaddle::<f64>::random(6, 4, 0.0, 51).unwrap();
    let mu = 0.5;
    let y_radius = 0.5;
    let mut r = rng(52);
    let anchor = ball_point(&mut r, &[0.0; 4], y_radius);
    let f_mu = |x: &[f64]| {
        let y = quad_y_star(&p, x, mu, &anchor, y_radius);
        p.value(x, &y) - 0.5 * mu * dist(&y, &anchor).powi(2)
    };
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let x = ball_point(&mut r, &[0.0; 6], 1.0);
        let y = quad_y_star(&p, &x, mu, &anchor, y_radius);
        let fd = central_difference(f_mu, &x, 1e-6);
        worst = worst.max(rel_err(&p.grad_x(&x, &y), &fd));
    }
    ensure(worst <= 1e-4, || format!("relative error {worst:e}"))?;
    Ok(format!("20 points, worst relative error {worst:.1e}"))
}

// 6 ------------------------------------------------------------------------

#[allow(clippy::too_many_arguments)]
fn frozen_x_run(
    p: &QuadraticSaddle<f64>,
    x_set: &L2Ball<f64>,
    y_set: &L2Ball<f64>,
    x: &[f64],
    y_start: &[f64],
    anchor: &[f64],
    mu: f64,
    sigma: f64,
    k: usize,
) -> Result<Vec<Vec<f64>>, String> {
    let cfg = SolverConfig64::new(Algorithm::CgRpga, k)
        .with_mu(mu)
        .with_tau(StepSchedule::Constant(0.0))
        .with_sigma(DualStep::Schedule(StepSchedule::Constant(sigma)))
        .with_anchor(anchor.to_vec())
        .with_eval_every(1)
        .with_snapshots(true);
    let res = run_cg_rpga(p, x_set, y_set, x, y_start, &cfg).map_err(|e| e.to_string())?;
    let mut ys: Vec<Vec<f64>> = res.records.iter().map(|r| r.y_snapshot.clone().unwrap()).collect();
    ys.push(res.final_y);
    Ok(ys)
}

fn criterion_contraction() -> Outcome {
    let mu_tilde = 1.0;
    let p = QuadraticSaddle::<f64>::random(6, 4, mu_tilde, 61).unwrap();
    let l_yy = mu_tilde;
    let y_radius = 2.0;
    let x_set = L2Ball::centered(6, 1.0).unwrap();
    let y_set = L2Ball::centered(4, y_radius).unwrap();
    let mut r = rng(62);
    let zero_y = [0.0; 4];
    let mut worst_step = f64::NEG_INFINITY;
    for _ in 0..100 {
        let x = ball_point(&mut r, &[0.0; 6], 1.0);
        let y = ball_point(&mut r, &zero_y, y_radius);
        let anchor = ball_point(&mut r, &zero_y, y_radius);
        let mu = 0.05 + r.random::<f64>();
        let sigma = (0.01 + 0.99 * r.random::<f64>()) * 2.0 / (l_yy + 2.0 * mu);
        let rho = (1.0 - sigma * (l_yy + mu)).abs().max((1.0 - sigma * mu).abs());
        let star = quad_y_star(&p, &x, mu, &anchor, y_radius);
        let ys = frozen_x_run(&p, &x_set, &y_set, &x, &y, &anchor, mu, sigma, 1)?;
        worst_step = worst_step.max(dist(&ys[1], &star) - rho * dist(&y, &star));
    }
    ensure(worst_step <= 1e-8, || {
        format!("one-step bound exceeded by {worst_step:e}")
    })?;

    let x = ball_point(&mut r, &[0.0; 6], 1.0);
    let y = ball_point(&mut r, &zero_y, y_radius);
    let anchor = vec![0.0; 4];
    let (mu, sigma) = (0.3, 0.5);
    let rho = (1.0 - sigma * (l_yy + mu)).abs().max((1.0 - sigma * mu).abs());
    let star = quad_y_star(&p, &x, mu, &anchor, y_radius);
    let ys = frozen_x_run(&p, &x_set, &y_set, &x, &y, &anchor, mu, sigma, 40)?;
    let d0 = dist(&y, &star);
    let mut worst_k = f64::NEG_INFINITY;
    for (k, yk) in ys.iter().enumerate() {
        worst_k = worst_k.max(dist(yk, &star) - rho.powi(k as i32) * d0);
    }
    ensure(worst_k <= 1e-8, || format!("geometric bound exceeded by {worst_k:e}"))?;
    Ok(format!(
        "one-step slack {worst_step:.1e}, 40-step slack {worst_k:.1e} (rho = {rho:.2})"
    ))
}

// 7 ------------------------------------------------------------------------

fn criterion_scalar_recursion() -> Outcome {
    let mut cases = 0;
    let mut worst = f64::NEG_INFINITY;
    for a0 in [0.0, 0.5, 1.0, 10.0, 100.0] {
        for m1 in [0.01, 0.05, 0.1, 0.5, 1.0] {
            for m2 in [1e-8, 1e-6, 1e-4, 1e-2] {
                cases += 1;
                let mut a: f64 = a0;
                for k in 1..=1000 {
                    a = (0.5f64).max(1.0 - m1 * a.sqrt()) * a + m2;
                    let bound = scalar_recursion_bound(a0, m1, m2, k).map_err(|e| e.to_string())?;
                    worst = worst.max((a - bound) / bound);
                    ensure(a <= bound, || {
                        format!("a0={a0} m1={m1} m2={m2}: a_{k} = {a:e} > bound {bound:e}")
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "{cases} parameter triples x 1000 steps, max (a_k - bound)/bound = {worst:.3}"
    ))
}

// 8, 9 ---------------------------------------------------------------------

fn quadratic_best_gaps(
    preset_name: &str,
    alg: &str,
    budgets: &[usize],
    check_feasible: bool,
) -> Result<Vec<f64>, String> {
    let mut cfg = preset(preset_name).map_err(|e| e.to_string())?;
    cfg.algorithms = vec![AlgorithmSpec::named(alg)];
    cfg.eval_every = 1;
    let mut out = Vec::new();
    for &k in budgets {
        cfg.iterations = k;
        let problem = build_problem(&cfg, Path::new(".")).map_err(|e| e.to_string())?;
        let sc = solver_configs(&cfg, &problem)
            .map_err(|e| e.to_string())?
            .remove(0)
            .with_snapshots(check_feasible);
        let res = run(
            &*problem.obj,
            &*problem.x_set,
            &*problem.y_set,
            &problem.x0,
            &problem.y0,
            &sc,
        )
        .map_err(|e| e.to_string())?;
        if check_feasible {
            for rec in &res.records {
                let (x, y) = (rec.x_snapshot.as_ref().unwrap(), rec.y_snapshot.as_ref().unwrap());
                ensure(norm(x) <= 1.0 + 1e-8 && norm(y) <= 1.0 + 1e-8, || {
                    format!("{alg} K={k}: iterate {} leaves the unit balls", rec.k)
                })?;
            }
        }
        out.push(res.best_gap().ok_or("no best iterate")?.gap_z);
    }
    Ok(out)
}

fn sci(v: &[f64]) -> String {
    v.iter().map(|g| format!("{g:.2e}")).collect::<Vec<_>>().join(", ")
}

fn criterion_ncsc_rate() -> Outcome {
    let budgets = [100, 1000, 10_000];
    let gaps = quadratic_best_gaps("quadratic-ncsc", "CGRPGA", &budgets, false)?;
    let lx: Vec<f64> = budgets.iter().map(|&k| (k as f64).log10()).collect();
    let ly: Vec<f64> = gaps.iter().map(|g| g.max(1e-300).log10()).collect();
    let mx = lx.iter().sum::<f64>() / 3.0;
    let my = ly.iter().sum::<f64>() / 3.0;
    let slope = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>()
        / lx.iter().map(|a| (a - mx).powi(2)).sum::<f64>();
    ensure(slope <= -0.35, || {
        format!("slope {slope:.3} > -0.35 (gaps {})", sci(&gaps))
    })?;
    Ok(format!(
        "best G_Z {} at K = 1e2, 1e3, 1e4; slope {slope:.2}",
        sci(&gaps)
    ))
}

fn criterion_ncc_convergence() -> Outcome {
    let mut parts = Vec::new();
    for alg in ["RPDCG", "CGRPGA"] {
        let g = quadratic_best_gaps("quadratic-ncc", alg, &[100, 10_000], true)?;
        ensure(g[1] < g[0], || {
            format!("{alg}: best G_Z {:.3e} at 1e4 is not below {:.3e} at 1e2", g[1], g[0])
        })?;
        parts.push(format!("{alg} {:.3e} -> {:.3e}", g[0], g[1]));
    }
    Ok(format!(
        "best G_Z K=1e2 -> 1e4: {}; iterates feasible",
        parts.join(", ")
    ))
}

// 10 -----------------------------------------------------------------------

fn criterion_dictionary_desk() -> Outcome {
    let cfg = preset("dictionary-desk").map_err(|e| e.to_string())?;
    let delta = match &cfg.problem {
        saddlefw_harness::config::ProblemSpec::Dictionary(d) => d.delta,
        _ => return Err("preset is not a dictionary problem".into()),
    };
    let exp = execute(&cfg, Path::new(".")).map_err(|e| e.to_string())?;
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    let mut hits = Vec::new();
    for run in &exp.runs {
        let res = &run.result;
        if res.iterations_completed != cfg.iterations {
            failures.push(format!("{} stopped after {}", run.algorithm, res.iterations_completed));
        }
        if !matches!(run.algorithm, Algorithm::Rpdcg | Algorithm::CgRpga) {
            continue;
        }
        let g0 = res.initial_gap().ok_or("no initial gap")?.gap_z;
        let best = res.best_gap().ok_or("no best gap")?.gap_z;
        let infeas = res
            .last_evaluated()
            .and_then(|r| r.infeasibility)
            .ok_or("no infeasibility")?;
        let hit = res.evaluated().find(|(_, g)| g.gap_z <= g0 / 10.0).map(|(r, _)| r.k);
        notes.push(format!(
            "{}: G_Z {g0:.2e} -> best {best:.2e}, final infeasibility {infeas:.2e}, G_Z/10 reached at k={hit:?}",
            run.algorithm
        ));
        if infeas > 10.0 * delta {
            failures.push(format!(
                "{} final infeasibility {infeas:.2e} > {:.0e}",
                run.algorithm,
                10.0 * delta
            ));
        }
        if best > g0 / 10.0 {
            failures.push(format!("{} best G_Z reduced only {:.1}x", run.algorithm, g0 / best));
        }
        hits.push((run.algorithm, hit));
    }
    let hit_of = |a: Algorithm| hits.iter().find(|(b, _)| *b == a).and_then(|(_, h)| *h);
    match (hit_of(Algorithm::CgRpga), hit_of(Algorithm::Rpdcg)) {
        (Some(c), Some(r)) if c <= r => {}
        (Some(_), None) => {}
        (c, r) => failures.push(format!("threshold ordering: CGRPGA at {c:?}, RPDCG at {r:?}")),
    }
    let summary = format!("all four ran {} iterations; {}", cfg.iterations, notes.join("; "));
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{}. {summary}", failures.join("; ")))
    }
}

// 11 -----------------------------------------------------------------------

fn trace_bytes(cfg: &ExperimentConfig) -> Result<Vec<u8>, String> {
    let exp = execute(cfg, Path::new(".")).map_err(|e| e.to_string())?;
    let rows: Vec<TraceRow> = exp.runs.iter().flat_map(|r| rows_for(r, cfg.timing)).collect();
    let mut buf = Vec::new();
    write_trace(&rows, &mut buf).map_err(|e| e.to_string())?;
    Ok(buf)
}

fn golden_config() -> ExperimentConfig {
    let mut cfg = preset("quadratic-ncsc").unwrap();
    cfg.iterations = 10;
    cfg.eval_every = 4;
    cfg.timing = Timing::Off;
    cfg
}

fn criterion_determinism_and_schema() -> Outcome {
    let mut configs = vec![golden_config()];
    let mut dict = preset("dictionary-desk").unwrap();
    dict.iterations = 60;
    dict.eval_every = 7;
    dict.timing = Timing::Off;
    configs.push(dict);
    for cfg in &configs {
        let a = trace_bytes(cfg)?;
        let b = trace_bytes(cfg)?;
        ensure(a == b, || format!("{} traces differ between runs", cfg.problem.kind()))?;
    }

    let golden_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/quadratic_trace.csv");
    let golden_text = std::fs::read_to_string(&golden_path).map_err(|e| e.to_string())?;
    let fresh = String::from_utf8(trace_bytes(&golden_config())?).unwrap();
    ensure(fresh.lines().next() == Some(TRACE_HEADER), || "header differs".into())?;
    ensure(golden_text.lines().next() == Some(TRACE_HEADER), || {
        "golden header differs".into()
    })?;
    let g = read_trace(golden_text.as_bytes(), "golden").map_err(|e| e.to_string())?;
    let f = read_trace(fresh.as_bytes(), "fresh").map_err(|e| e.to_string())?;
    ensure(g.len() == f.len(), || {
        format!("{} rows, golden has {}", f.len(), g.len())
    })?;
    for (a, b) in g.iter().zip(&f) {
        let same_keys = a.algorithm == b.algorithm
            && a.k == b.k
            && a.dual_mode == b.dual_mode
            && a.infeasibility.is_none()
            && b.infeasibility.is_none()
            && b.elapsed_seconds == 0.0;
        let close = |u: f64, v: f64| (u - v).abs() <= 1e-9 * (1.0 + u.abs());
        ensure(
            same_keys && close(a.gap_x, b.gap_x) && close(a.gap_y, b.gap_y) && close(a.gap_z, b.gap_z),
            || format!("row {} k={} deviates from golden", a.algorithm, a.k),
        )?;
    }

    // Wall-clock traces: fixed columns and nondecreasing time per block.
    let mut wall = golden_config();
    wall.timing = Timing::Wall;
    wall.iterations = 200;
    let text = String::from_utf8(trace_bytes(&wall)?).unwrap();
    for line in text.lines() {
        ensure(line.split(',').count() == 8, || {
            format!("line `{line}` has the wrong arity")
        })?;
    }
    let rows = read_trace(text.as_bytes(), "wall").map_err(|e| e.to_string())?;
    for pair in rows.windows(2) {
        if pair[0].algorithm == pair[1].algorithm {
            ensure(pair[1].elapsed_seconds >= pair[0].elapsed_seconds, || {
                "elapsed_seconds decreased".into()
            })?;
        }
    }
    Ok(format!(
        "2 configs byte-identical across reruns; golden schema matches ({} rows)",
        g.len()
    ))
}

// 12 -----------------------------------------------------------------------

fn random_dataset(r: &mut impl Rng) -> SparseDataset<f64> {
    let n = r.random_range(1..15);
    let d = r.random_range(1..30);
    let raw_pool = [-7i64, -1, 0, 1, 2, 5, 9, 40];
    let rows: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|_| {
            let mut row = Vec::new();
            for j in 0..d {
                if r.random::<f64>() < 0.3 {
                    let mag = 10f64.powi(r.random_range(-12..12));
                    row.push((j, mag * r.sample::<f64, _>(StandardNormal)));
                }
            }
            row
        })
        .collect();
    let labels: Vec<i64> = (0..n).map(|_| raw_pool[r.random_range(0..raw_pool.len())]).collect();
    // The parser infers the dimension from the largest index present.
    let dim = rows
        .iter()
        .flat_map(|row| row.iter().map(|(j, _)| j + 1))
        .max()
        .unwrap_or(0);
    SparseDataset::from_raw_labels(CsrMatrix::from_rows(dim, &rows).unwrap(), &labels).unwrap()
}

fn mutate(r: &mut impl Rng, base: &[u8]) -> Vec<u8> {
    const ALPHABET: &[u8] = b"0123456789 :.-+eE#\n\t\rxinfa\xff\x00";
    let mut out = base.to_vec();
    for _ in 0..r.random_range(1..6) {
        let pos = r.random_range(0..=out.len());
        match r.random_range(0..3) {
            0 if pos < out.len() => {
                out.remove(pos);
            }
            1 if pos < out.len() => out[pos] = ALPHABET[r.random_range(0..ALPHABET.len())],
            _ => out.insert(pos, ALPHABET[r.random_range(0..ALPHABET.len())]),
        }
    }
    out
}

fn criterion_parser() -> Outcome {
    let mut r = rng(121);
    let opts = ParseOptions::default();
    for i in 0..500 {
        let ds = random_dataset(&mut r);
        let mut text = Vec::new();
        write_libsvm(&ds, &mut text, true).map_err(|e| e.to_string())?;
        let back =
            parse_libsvm_str::<f64>(std::str::from_utf8(&text).unwrap(), opts).map_err(|e| format!("case {i}: {e}"))?;
        ensure(back == ds, || format!("round trip {i} changed the dataset"))?;
    }
    let seeds = [
        b"1 2:0.5 7:1.0\n-1 1:3 4:-2e-3 # note\n\n2 3:1\n".to_vec(),
        b"5 1:1\n9 2:2\n".to_vec(),
    ];
    let (mut ok, mut rejected) = (0, 0);
    for i in 0..10_000 {
        let input: Vec<u8> = if i % 2 == 0 {
            let len = r.random_range(0..80);
            let mut v = vec![0u8; len];
            r.fill_bytes(&mut v);
            v
        } else {
            mutate(&mut r, &seeds[i % seeds.len()])
        };
        let parsed = catch_unwind(AssertUnwindSafe(|| {
            saddlefw::ingest::parse_libsvm::<f64, _>(&input[..], opts)
        }))
        .map_err(|_| format!("parser panicked on input {i}: {input:?}"))?;
        match parsed {
            Ok(_) => ok += 1,
            Err(Error::Parse { line, .. }) if line >= 1 => rejected += 1,
            Err(e) => return Err(format!("input {i}: error without a line number: {e}")),
        }
    }
    Ok(format!(
        "500 round trips; 10000 fuzz inputs: {ok} parsed, {rejected} rejected with line numbers"
    ))
}

// --------------------------------------------------------------------------

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "gradient correctness", Duration::from_secs(30), criterion_gradients),
        (2, "oracle correctness", Duration::from_secs(30), criterion_oracles),
        (
            3,
            "strong-convexity membership",
            Duration::from_secs(30),
            criterion_strong_convexity,
        ),
        (
            4,
            "solution-map Lipschitz bound",
            Duration::from_secs(30),
            criterion_lipschitz_solution_map,
        ),
        (5, "Danskin gradient", Duration::from_secs(30), criterion_danskin),
        (6, "dual contraction", Duration::from_secs(30), criterion_contraction),
        (
            7,
            "scalar recursion bound",
            Duration::from_secs(30),
            criterion_scalar_recursion,
        ),
        (8, "NC-SC rate trend", Duration::from_secs(120), criterion_ncsc_rate),
        (
            9,
            "NC-C convergence",
            Duration::from_secs(120),
            criterion_ncc_convergence,
        ),
        (
            10,
            "dictionary desk reproduction",
            Duration::from_secs(180),
            criterion_dictionary_desk,
        ),
        (
            11,
            "determinism and trace schema",
            Duration::from_secs(60),
            criterion_determinism_and_schema,
        ),
        (12, "parser totality", Duration::from_secs(30), criterion_parser),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, name, limit, check) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(check).unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > limit => Err(format!("took {elapsed:.1?}, limit {limit:?}")),
            o => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        failed += outcome.is_err() as usize;
        println!(
            "criterion {id:>2} {tag} {name} [{:.2}s]: {detail}",
            elapsed.as_secs_f64()
        );
        std::io::stdout().flush().ok();
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
