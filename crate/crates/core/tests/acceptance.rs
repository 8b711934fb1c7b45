//! Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.
//!
//! Run with `cargo test -p lpnorm-core --test acceptance -- --nocapture --test-threads=1`.

use std::time::{Duration, Instant};

use lpnorm::barriers::{dual_lbf, dual_limit_objective, primal_lbf, BarrierParameter};
use lpnorm::instances;
use lpnorm::linalg::min_eigenvalue;
use lpnorm::oracles::{
    check_weak_duality, ground_truth, lp_vertex_optimum, sample_dual_points, sample_feasible_points,
};
use lpnorm::solve::{
    default_dual_start, solve_dual_path, solve_primal_path, NewtonConfig, PathSchedule,
};
use lpnorm::study::{fit_constant, fitted_bound};
use lpnorm::transforms::{
    log_laplace_closed_form, log_laplace_of_grid, log_lp_norm, numeric_dual_lbf, sample_tilde_g_p,
    verify_cramer_identity, CramerGrids, Domain, QuadratureConfig,
};
use lpnorm::{DualPoint, ProblemInstance};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PATH_TOL: f64 = 1e-3;
const LOG_MONOMIAL_TOL: f64 = 2e-3;
const SANDWICH_WIDTH: f64 = 5e-3;
const CLOSED_FORM_REL: f64 = 1e-6;
const CRAMER_TOL: f64 = 1e-2;
const LAPLACE_TOL: f64 = 1e-4;
const LEMMA1_TOL: f64 = 1e-8;
const GRAD_REL: f64 = 1e-6;
const HESS_REL: f64 = 1e-4;
const EIG_REL: f64 = 1e-8;
const REDUCTION_TOL: f64 = 1e-12;
const WEAK_DUALITY_TOL: f64 = 1e-9;

fn report(id: u32, name: &str, pass: bool, detail: String) {
    println!(
        "criterion {id:>2} {name:<28} {}  {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

fn dual_path(prob: &ProblemInstance) -> lpnorm::SolveReport {
    let start = default_dual_start(prob).unwrap();
    solve_dual_path(
        prob,
        &PathSchedule::default(),
        &NewtonConfig::default(),
        &start,
    )
    .unwrap()
}

fn par(p: f64) -> BarrierParameter {
    BarrierParameter::new(p).unwrap()
}

#[test]
fn criterion_01_lp_convergence() {
    let t = Instant::now();
    let mut pass = true;
    let mut notes = Vec::new();
    for (name, prob) in [("lp1d", instances::lp_1d()), ("lp2x2", instances::lp_2x2())] {
        let g = lp_vertex_optimum(&prob).unwrap().g_value;
        let r = dual_path(&prob);
        let errors: Vec<(f64, f64)> = r
            .stages
            .iter()
            .map(|s| (s.p, (s.objective - g).abs()))
            .collect();
        let final_err = errors.last().unwrap().1;
        let c = fit_constant(errors[0].0, errors[0].1);
        let violation = errors[1..].iter().find(|(p, e)| *e > fitted_bound(c, *p));
        pass &= final_err <= PATH_TOL && violation.is_none();
        notes.push(match violation {
            None => format!("{name}: final err {final_err:.2e}, fit C={c:.4} holds"),
            Some((p, e)) => format!(
                "{name}: final err {final_err:.2e}, fit C={c:.4} violated at p={p}: {e:.3e} > {:.3e}",
                fitted_bound(c, *p)
            ),
        });
    }
    let elapsed = t.elapsed();
    pass &= elapsed <= Duration::from_secs(1);
    report(
        1,
        "LP path convergence",
        pass,
        format!("{}; {elapsed:.2?}", notes.join("; ")),
    );
}

#[test]
fn criterion_02_strong_duality() {
    let mut pass = true;
    let mut notes = Vec::new();
    for (name, prob, tol) in [
        ("qp1d", instances::qp_1d(), PATH_TOL),
        ("logmono1d", instances::log_monomial_1d(), LOG_MONOMIAL_TOL),
    ] {
        let oracle = ground_truth(&prob).unwrap().g_value;
        let t = Instant::now();
        let r = dual_path(&prob);
        let elapsed = t.elapsed();
        let err = (r.estimate() - oracle).abs();
        pass &= err <= tol && elapsed <= Duration::from_secs(1);
        notes.push(format!(
            "{name}: oracle {oracle:.6}, err {err:.2e} in {elapsed:.2?}"
        ));
    }
    report(2, "strong duality (QP, log-mono)", pass, notes.join("; "));
}

#[test]
fn criterion_03_primal_dual_sandwich() {
    let mut pass = true;
    let mut notes = Vec::new();
    for (name, prob, x0) in [
        ("lp1d", instances::lp_1d(), vec![0.5]),
        ("lp2x2", instances::lp_2x2(), vec![0.5, 0.5]),
    ] {
        let dual = dual_path(&prob);
        let primal = solve_primal_path(
            &prob,
            &PathSchedule::default(),
            &NewtonConfig::default(),
            &DVector::from_vec(x0),
        )
        .unwrap();
        let mut first_violation = None;
        for (d, pr) in dual.stages.iter().zip(&primal.stages) {
            if d.converged
                && pr.converged
                && pr.limit_objective > d.objective
                && first_violation.is_none()
            {
                first_violation = Some((d.p, pr.limit_objective, d.objective));
            }
        }
        let h1_ordered = dual
            .stages
            .iter()
            .zip(&primal.stages)
            .all(|(d, pr)| pr.limit_objective <= d.limit_objective);
        let width = dual.last().objective - primal.last().limit_objective;
        pass &= first_violation.is_none() && width <= SANDWICH_WIDTH;
        notes.push(match first_violation {
            None => format!("{name}: all stages ordered, final width {width:.2e}, f <= h1: {h1_ordered}"),
            Some((p, f, phi)) => format!(
                "{name}: f(x)={f:.6} > φ_p={phi:.6} at p={p}, final width {width:.2e}, f <= h1: {h1_ordered}"
            ),
        });
    }
    report(3, "primal/dual sandwich", pass, notes.join("; "));
}

#[test]
fn criterion_04_closed_form_vs_quadrature() {
    let t = Instant::now();
    let cfg = QuadratureConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for prob in instances::random_test_instances() {
        assert!(prob.n() <= 2);
        let lambdas =
            sample_dual_points(&prob, &vec![(0.05, 4.0); prob.m()], 10, 1_000_000, &mut rng)
                .unwrap();
        for l in lambdas {
            let p = rng.random_range(1.0..50.0);
            let closed = dual_lbf(&prob, &l, par(p)).value;
            let numeric = numeric_dual_lbf(&prob, &l, p, &cfg).unwrap();
            worst = worst.max((closed - numeric).abs() / closed.abs());
        }
    }
    let elapsed = t.elapsed();
    let pass = worst <= CLOSED_FORM_REL && elapsed <= Duration::from_secs(10);
    report(
        4,
        "closed form vs quadrature",
        pass,
        format!("worst rel diff {worst:.2e} in {elapsed:.2?}"),
    );
}

#[test]
fn criterion_05_cramer_identity() {
    let t = Instant::now();
    let prob = instances::lp_neg_1d();
    let cfg = QuadratureConfig::default();
    let coarse = CramerGrids::default();
    let fine = CramerGrids {
        y_grid: coarse.y_grid.refined(),
        z_nodes: 2 * coarse.z_nodes - 1,
        ..coarse.clone()
    };
    let mut pass = true;
    let mut notes = Vec::new();
    for p in [1.0, 4.0] {
        let a = verify_cramer_identity(&prob, p, &coarse, &cfg).unwrap();
        let b = verify_cramer_identity(&prob, p, &fine, &cfg).unwrap();
        pass &= a.residual <= CRAMER_TOL && b.residual < a.residual;
        notes.push(format!(
            "p={p}: residual {:.2e} -> {:.2e} on doubling",
            a.residual, b.residual
        ));
        if p == 1.0 {
            let gf = sample_tilde_g_p(&prob, p, &coarse.y_grid, &cfg).unwrap();
            let l = a.lambda[0];
            let numeric = log_laplace_of_grid(&gf, &[p * l], coarse.decay_nats).unwrap();
            let closed = log_laplace_closed_form(&prob, &[l], p);
            let diff = (numeric - closed).abs();
            pass &= diff <= LAPLACE_TOL;
            notes.push(format!("Laplace closed form at p=1, λ*: diff {diff:.2e}"));
        }
    }
    let elapsed = t.elapsed();
    pass &= elapsed <= Duration::from_secs(30);
    report(
        5,
        "Cramer identity",
        pass,
        format!("{}; {elapsed:.2?}", notes.join("; ")),
    );
}

#[test]
fn criterion_06_lemma1() {
    let cfg = QuadratureConfig::default();
    let values: Vec<(f64, f64)> = (0..=10)
        .map(|t| {
            let p = 2f64.powi(t);
            (
                p,
                log_lp_norm(|x| -x[0], &Domain::Orthant(1), p, &cfg).unwrap(),
            )
        })
        .collect();
    let worst = values
        .iter()
        .map(|(p, v)| (v + p.ln() / p).abs())
        .fold(0.0, f64::max);
    // −ln p/p is 0 at p = 1 and equal at p = 2, 4; from there it rises to 0
    let approaching = values[2..].windows(2).all(|w| w[1].1.abs() < w[0].1.abs());
    let last = values.last().unwrap().1;
    let pass = worst <= LEMMA1_TOL && approaching && last.abs() < 1e-2;
    report(
        6,
        "ess sup limit",
        pass,
        format!("max |v + ln p/p| = {worst:.2e}, value at p=1024: {last:.3e}"),
    );
}

type ValueGradHessian = (f64, DVector<f64>, nalgebra::DMatrix<f64>);

fn fd_check(
    eval: &dyn Fn(&DVector<f64>) -> ValueGradHessian,
    x: &DVector<f64>,
    step: f64,
) -> (f64, f64) {
    let (_, g, h) = eval(x);
    let n = x.len();
    let mut fd_g = DVector::zeros(n);
    let mut fd_h = nalgebra::DMatrix::zeros(n, n);
    for i in 0..n {
        let (mut xp, mut xm) = (x.clone(), x.clone());
        xp[i] += step;
        xm[i] -= step;
        let (vp, gp, _) = eval(&xp);
        let (vm, gm, _) = eval(&xm);
        fd_g[i] = (vp - vm) / (2.0 * step);
        fd_h.set_column(i, &((gp - gm) / (2.0 * step)));
    }
    let g_err = (&fd_g - &g).amax() / g.amax().max(1.0);
    let h_err = (&fd_h - &h).amax() / h.amax().max(1.0);
    (g_err, h_err)
}

#[test]
fn criterion_07_derivatives() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (mut g_worst, mut h_worst, mut eig_worst): (f64, f64, f64) = (0.0, 0.0, f64::INFINITY);
    for prob in instances::random_test_instances() {
        let duals =
            sample_dual_points(&prob, &vec![(0.05, 4.0); prob.m()], 20, 1_000_000, &mut rng)
                .unwrap();
        for l in duals {
            let p = rng.random_range(1.0..50.0);
            let eval = |v: &DVector<f64>| {
                let e = dual_lbf(&prob, &DualPoint::new(v.clone()).unwrap(), par(p));
                (e.value, e.gradient, e.hessian)
            };
            let x = l.as_vector();
            let step = 1e-5
                * x.min()
                    .min(prob.dual_slack(x).map_or(1.0, |s| s.min()))
                    .min(1.0);
            let (ge, he) = fd_check(&eval, x, step);
            g_worst = g_worst.max(ge);
            h_worst = h_worst.max(he);
            let h = dual_lbf(&prob, &l, par(p)).hessian;
            eig_worst = eig_worst.min(min_eigenvalue(&h) / (h.trace() / prob.m() as f64));
        }
        let lo = if prob.on_orthant() { 0.0 } else { -3.0 };
        let xs = sample_feasible_points(&prob, &vec![(lo, 3.0); prob.n()], 20, 1_000_000, &mut rng)
            .unwrap();
        for x in xs {
            let p = rng.random_range(1.0..50.0);
            let eval = |v: &DVector<f64>| {
                let e = primal_lbf(&prob, v, par(p));
                (e.value, e.gradient, e.hessian)
            };
            let slack = prob.y() - prob.constraint_map(&x);
            let mut dist = slack.min().min(1.0);
            if prob.on_orthant() {
                dist = dist.min(x.min());
            }
            let (ge, he) = fd_check(&eval, &x, 1e-4 * dist);
            g_worst = g_worst.max(ge);
            h_worst = h_worst.max(he);
        }
    }
    let pass = g_worst <= GRAD_REL && h_worst <= HESS_REL && eig_worst >= -EIG_REL;
    report(
        7,
        "derivative correctness",
        pass,
        format!("grad {g_worst:.2e}, Hessian {h_worst:.2e}, min eig/(tr/m) {eig_worst:.2e}"),
    );
}

#[test]
fn criterion_08_class_reduction() {
    let (lp, lm) = instances::lp_and_zero_b_log_monomial();
    let conic = instances::conic_2x2();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_lm: f64 = 0.0;
    let mut worst_conic: f64 = 0.0;
    for l in sample_dual_points(&lp, &[(0.05, 4.0), (0.05, 4.0)], 50, 1_000_000, &mut rng).unwrap()
    {
        let p = par(rng.random_range(1.0..1e5));
        let (a, b, c) = (
            dual_lbf(&lp, &l, p),
            dual_lbf(&lm, &l, p),
            dual_lbf(&conic, &l, p),
        );
        worst_lm = worst_lm
            .max((a.value - b.value).abs())
            .max((&a.gradient - &b.gradient).amax())
            .max((&a.hessian - &b.hessian).amax())
            .max((dual_limit_objective(&lp, &l) - dual_limit_objective(&lm, &l)).abs());
        worst_conic = worst_conic.max((a.value - c.value).abs());
    }
    let (ra, rb) = (dual_path(&lp), dual_path(&lm));
    for (sa, sb) in ra.stages.iter().zip(&rb.stages) {
        worst_lm = worst_lm
            .max((sa.objective - sb.objective).abs())
            .max((&sa.point - &sb.point).amax())
            .max((sa.limit_objective - sb.limit_objective).abs());
    }
    let pass = worst_lm <= REDUCTION_TOL && worst_conic <= REDUCTION_TOL;
    report(
        8,
        "class reduction",
        pass,
        format!("log-mono(b=0) vs LP {worst_lm:.1e}, conic vs LP {worst_conic:.1e}"),
    );
}

#[test]
fn criterion_09_barrier_blow_up() {
    let p = par(5.0);
    let seq = |prob: &ProblemInstance, at: &dyn Fn(f64) -> Vec<f64>| -> Vec<f64> {
        (1..=12)
            .map(|t| {
                dual_lbf(
                    prob,
                    &DualPoint::from_slice(&at(10f64.powi(-t))).unwrap(),
                    p,
                )
                .value
            })
            .collect()
    };
    let faces: Vec<(&str, Vec<f64>)> = vec![
        (
            "λ_1 -> 0 (LP)",
            seq(&instances::lp_2x2(), &|e| vec![e, 2.0]),
        ),
        (
            "λ_2 -> 0 (log-mono)",
            seq(&instances::log_monomial_2d(), &|e| vec![2.0, e]),
        ),
        ("λ -> 0 (QP)", seq(&instances::qp_2d(), &|e| vec![1.0, e])),
        (
            "A'λ -> c (LP)",
            seq(&instances::lp_1d(), &|e| vec![1.0 + e]),
        ),
        (
            "A'λ -> c (log-mono)",
            seq(&instances::log_monomial_1d(), &|e| vec![e]),
        ),
        (
            "Q_λ -> singular",
            seq(&instances::qp_singular_face(), &|e| vec![0.5 + e]),
        ),
    ];
    let mut pass = true;
    let mut notes = Vec::new();
    for (name, vals) in &faces {
        let ok = vals.iter().all(|v| v.is_finite()) && vals.windows(2).all(|w| w[1] > w[0]);
        pass &= ok;
        notes.push(format!(
            "{name}: {}",
            if ok { "increasing" } else { "NOT increasing" }
        ));
    }
    report(9, "barrier blow-up", pass, notes.join("; "));
}

#[test]
fn criterion_10_weak_duality() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = f64::INFINITY;
    let mut pairs = 0;
    for prob in instances::random_test_instances() {
        let lo = if prob.on_orthant() { 0.0 } else { -3.0 };
        let xs =
            sample_feasible_points(&prob, &vec![(lo, 3.0); prob.n()], 100, 1_000_000, &mut rng)
                .unwrap();
        let ls = sample_dual_points(&prob, &vec![(0.0, 4.0); prob.m()], 100, 1_000_000, &mut rng)
            .unwrap();
        for (x, l) in xs.iter().zip(&ls) {
            let w = check_weak_duality(&prob, x, l).unwrap();
            worst = worst.min(w.margin);
            pairs += 1;
        }
    }
    let pass = worst >= -WEAK_DUALITY_TOL && pairs == 400;
    report(
        10,
        "weak duality",
        pass,
        format!("{pairs} pairs, min margin {worst:.3e}"),
    );
}

#[test]
fn criterion_11_stirling_limit() {
    let mut pass = true;
    let mut notes = Vec::new();
    for (name, prob, l) in [
        ("logmono1d", instances::log_monomial_1d(), vec![1.5]),
        ("logmono2d", instances::log_monomial_2d(), vec![1.0, 1.0]),
    ] {
        let l = DualPoint::from_slice(&l).unwrap();
        let h1 = dual_limit_objective(&prob, &l);
        let diffs: Vec<f64> = [1e2, 1e4, 1e6]
            .iter()
            .map(|&p| (dual_lbf(&prob, &l, par(p)).value - h1).abs())
            .collect();
        let ok = diffs.windows(2).all(|w| w[1] * 10.0 <= w[0]);
        pass &= ok;
        notes.push(format!(
            "{name}: |φ_p − h1| = {:.2e}, {:.2e}, {:.2e}",
            diffs[0], diffs[1], diffs[2]
        ));
    }
    report(11, "Stirling limit", pass, notes.join("; "));
}
