//! Damped Newton minimization and barrier path following on both sides.

use nalgebra::{DMatrix, DVector};

use crate::barriers::{
    dual_lbf_vec, dual_limit_objective_vec, primal_lbf, BarrierEval, BarrierParameter,
};
use crate::error::{Error, Result};
use crate::linalg::{PivotedCholesky, PIVOT_FLOOR};
use crate::problems::{DualPoint, ProblemInstance};

/// Geometric schedule `p_k = p0 · growth^k`, `k = 0..stages`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSchedule {
    p0: f64,
    growth: f64,
    stages: usize,
}

impl PathSchedule {
    pub fn new(p0: f64, growth: f64, stages: usize) -> Result<Self> {
        if !(p0.is_finite() && p0 >= 1.0) {
            return Err(Error::invariant(
                "p0",
                format!("must be finite and ≥ 1, got {p0}"),
            ));
        }
        if !(growth.is_finite() && growth > 1.0) {
            return Err(Error::invariant(
                "growth",
                format!("must be finite and > 1, got {growth}"),
            ));
        }
        if stages < 1 {
            return Err(Error::invariant("stages", "need at least one stage"));
        }
        Ok(Self { p0, growth, stages })
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn growth(&self) -> f64 {
        self.growth
    }

    pub fn stages(&self) -> usize {
        self.stages
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.stages)
            .map(|k| self.p0 * self.growth.powi(k as i32))
            .collect()
    }
}

impl Default for PathSchedule {
    fn default() -> Self {
        Self {
            p0: 2.0,
            growth: 4.0,
            stages: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig {
    pub grad_tol: f64,
    pub max_iters: usize,
    pub armijo_c: f64,
    pub backtrack_factor: f64,
    /// Fraction of the maximal feasible step taken when the full step leaves the domain.
    pub boundary_fraction: f64,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self {
            grad_tol: 1e-10,
            max_iters: 200,
            armijo_c: 1e-4,
            backtrack_factor: 0.5,
            boundary_fraction: 0.99,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NewtonStatus {
    Converged,
    MaxItersExceeded,
    /// The line search could not make progress before the gradient tolerance was met.
    Stalled,
}

#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub point: DVector<f64>,
    pub eval: BarrierEval,
    pub iterations: usize,
    pub status: NewtonStatus,
    /// Set when a Hessian could not be factorized and a gradient step was taken.
    pub gradient_fallback: bool,
    /// Every accepted iterate satisfied the domain predicate.
    pub iterates_feasible: bool,
}

impl NewtonOutcome {
    pub fn converged(&self) -> bool {
        self.status == NewtonStatus::Converged
    }
}

/// Below this Newton decrement (relative to `1 + |value|`) the Armijo test is
/// dominated by rounding, and a full step that reduces the gradient is accepted.
const ROUNDOFF_DECREMENT: f64 = 1e-10;

/// Convergence is also declared once `g'H⁻¹g ≤ DECREMENT_FACTOR · grad_tol²`:
/// at large `p` the gradient itself has a rounding floor near `grad_tol`.
const DECREMENT_FACTOR: f64 = 1e-3;

fn newton_direction(eval: &BarrierEval) -> (DVector<f64>, bool) {
    let h = &eval.hessian;
    let g = &eval.gradient;
    if let Some(ch) = PivotedCholesky::new(h, PIVOT_FLOOR) {
        return (-ch.solve(g), false);
    }
    let m = h.nrows().max(1) as f64;
    let shift = 1e-12 * h.trace().abs().max(1.0) / m;
    let reg = h + DMatrix::identity(h.nrows(), h.ncols()) * shift;
    if let Some(ch) = PivotedCholesky::new(&reg, 0.0) {
        return (-ch.solve(g), false);
    }
    (-g.clone(), true)
}

/// Largest `t ∈ (0, t_hi]` with `x + t d` in the domain, by bisection.
fn max_feasible_step<D: Fn(&DVector<f64>) -> bool>(
    x: &DVector<f64>,
    d: &DVector<f64>,
    t_hi: f64,
    domain: &D,
) -> f64 {
    if domain(&(x + d * t_hi)) {
        return t_hi;
    }
    let (mut lo, mut hi) = (0.0, t_hi);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if domain(&(x + d * mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Minimizes a self-concordant-like barrier from a strictly interior start.
pub fn newton_minimize<F, D>(
    objective: F,
    start: &DVector<f64>,
    domain: D,
    cfg: &NewtonConfig,
) -> Result<NewtonOutcome>
where
    F: Fn(&DVector<f64>) -> BarrierEval,
    D: Fn(&DVector<f64>) -> bool,
{
    if !domain(start) {
        return Err(Error::InfeasibleStart);
    }
    let mut x = start.clone();
    let mut ev = objective(&x);
    if !ev.in_domain || !ev.value.is_finite() {
        return Err(Error::InfeasibleStart);
    }
    let mut fallback = false;
    let mut feasible = true;
    let mut status = NewtonStatus::MaxItersExceeded;
    let mut iterations = cfg.max_iters;

    for it in 0..cfg.max_iters {
        let gnorm = ev.gradient.norm();
        if gnorm <= cfg.grad_tol {
            status = NewtonStatus::Converged;
            iterations = it;
            break;
        }
        let (mut d, used_gradient) = newton_direction(&ev);
        fallback |= used_gradient;
        let mut slope = ev.gradient.dot(&d);
        if !used_gradient && -slope <= DECREMENT_FACTOR * cfg.grad_tol * cfg.grad_tol {
            status = NewtonStatus::Converged;
            iterations = it;
            break;
        }
        if !(slope < 0.0) {
            d = -ev.gradient.clone();
            slope = -gnorm * gnorm;
            fallback = true;
        }

        let t_max = max_feasible_step(&x, &d, 1.0 / cfg.boundary_fraction, &domain);
        let mut alpha = (cfg.boundary_fraction * t_max).min(1.0);
        let tiny = -slope <= ROUNDOFF_DECREMENT * (1.0 + ev.value.abs());

        let mut accepted = None;
        while alpha > 1e-20 {
            let xn = &x + &d * alpha;
            if domain(&xn) {
                let en = objective(&xn);
                if en.in_domain
                    && (en.value <= ev.value + cfg.armijo_c * alpha * slope
                        || (tiny && en.gradient.norm() < gnorm))
                {
                    accepted = Some((xn, en));
                    break;
                }
            }
            alpha *= cfg.backtrack_factor;
        }
        match accepted {
            Some((xn, en)) => {
                feasible &= domain(&xn);
                x = xn;
                ev = en;
            }
            None => {
                status = NewtonStatus::Stalled;
                iterations = it;
                break;
            }
        }
    }
    if status == NewtonStatus::MaxItersExceeded && ev.gradient.norm() <= cfg.grad_tol {
        status = NewtonStatus::Converged;
    }
    Ok(NewtonOutcome {
        point: x,
        eval: ev,
        iterations,
        status,
        gradient_fallback: fallback,
        iterates_feasible: feasible,
    })
}

// ---------------------------------------------------------------------------
// Starting points
// ---------------------------------------------------------------------------

/// A point of `ri D`: `λ = t·1` with `t` doubled until `A'λ − c > 1 + ‖c‖∞`
/// (linear classes) or `Q_λ ≻ 0` (quadratic class).
pub fn default_dual_start(prob: &ProblemInstance) -> Result<DualPoint> {
    let m = prob.m();
    let mut t = 1.0;
    for _ in 0..=60 {
        let lambda = DVector::from_element(m, t);
        let ok = match prob.dual_slack(&lambda) {
            Some(s) => {
                let c = prob.linear_parts().map(|(_, c)| c.amax()).unwrap_or(0.0);
                s.iter().all(|v| *v > 1.0 + c)
            }
            None => prob.in_dual_domain_vec(&lambda),
        };
        if ok {
            return DualPoint::new(lambda);
        }
        t *= 2.0;
    }
    Err(Error::InfeasibleStart)
}

// ---------------------------------------------------------------------------
// Path following
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Primal,
    Dual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    /// At least one stage hit the iteration limit or stalled.
    Partial,
}

/// One stage of a path-following run.
#[derive(Debug, Clone, PartialEq)]
pub struct StageRecord {
    pub p: f64,
    pub point: DVector<f64>,
    /// `φ_p` (dual) or `ψ_p` (primal) at the stage minimizer/maximizer.
    pub objective: f64,
    /// `h₁(λ_p)` on the dual side, `f(x_p)` on the primal side.
    pub limit_objective: f64,
    pub grad_norm: f64,
    pub newton_iters: usize,
    pub converged: bool,
    pub gradient_fallback: bool,
    pub iterates_feasible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub side: Side,
    pub stages: Vec<StageRecord>,
    pub status: SolveStatus,
}

impl SolveReport {
    pub fn last(&self) -> &StageRecord {
        self.stages.last().expect("at least one stage")
    }

    /// Estimate of `g(y)`: the last barrier value.
    pub fn estimate(&self) -> f64 {
        self.last().objective
    }
}

fn run_path<F, L, D>(
    side: Side,
    sched: &PathSchedule,
    cfg: &NewtonConfig,
    start: DVector<f64>,
    domain: D,
    objective: F,
    limit: L,
) -> Result<SolveReport>
where
    D: Fn(&DVector<f64>) -> bool,
    F: Fn(f64, &DVector<f64>) -> BarrierEval,
    L: Fn(&DVector<f64>) -> f64,
{
    let sign = if side == Side::Primal { -1.0 } else { 1.0 };
    let mut point = start;
    let mut stages = Vec::with_capacity(sched.stages());
    let mut status = SolveStatus::Converged;
    for p in sched.values() {
        let out = newton_minimize(|x| objective(p, x), &point, &domain, cfg)?;
        if !out.converged() {
            status = SolveStatus::Partial;
        }
        stages.push(StageRecord {
            p,
            objective: sign * out.eval.value,
            limit_objective: limit(&out.point),
            grad_norm: out.eval.gradient.norm(),
            newton_iters: out.iterations,
            converged: out.converged(),
            gradient_fallback: out.gradient_fallback,
            iterates_feasible: out.iterates_feasible,
            point: out.point.clone(),
        });
        point = out.point;
    }
    Ok(SolveReport {
        side,
        stages,
        status,
    })
}

/// Minimizes `φ_p` for each `p` in the schedule, warm-starting each stage.
pub fn solve_dual_path(
    prob: &ProblemInstance,
    sched: &PathSchedule,
    cfg: &NewtonConfig,
    start: &DualPoint,
) -> Result<SolveReport> {
    if start.len() != prob.m() {
        return Err(Error::dims("start", prob.m(), start.len()));
    }
    run_path(
        Side::Dual,
        sched,
        cfg,
        start.as_vector().clone(),
        |l: &DVector<f64>| prob.in_dual_domain_vec(l),
        |p, l| dual_lbf_vec(prob, l, p),
        |l| dual_limit_objective_vec(prob, l),
    )
}

/// Maximizes `ψ_p` for each `p` in the schedule from a strictly feasible start.
pub fn solve_primal_path(
    prob: &ProblemInstance,
    sched: &PathSchedule,
    cfg: &NewtonConfig,
    start: &DVector<f64>,
) -> Result<SolveReport> {
    if start.len() != prob.n() {
        return Err(Error::dims("start", prob.n(), start.len()));
    }
    run_path(
        Side::Primal,
        sched,
        cfg,
        start.clone(),
        |x: &DVector<f64>| prob.is_strictly_feasible_primal(x),
        |p, x| {
            let par = BarrierParameter::new(p).expect("schedule values are ≥ 1");
            primal_lbf(prob, x, par).negated()
        },
        |x| prob.objective(x),
    )
}

/// Minimizer of `φ_p` for a single `p`.
pub fn minimize_dual(
    prob: &ProblemInstance,
    par: BarrierParameter,
    cfg: &NewtonConfig,
    start: &DualPoint,
) -> Result<NewtonOutcome> {
    if start.len() != prob.m() {
        return Err(Error::dims("start", prob.m(), start.len()));
    }
    let p = par.value();
    newton_minimize(
        |l| dual_lbf_vec(prob, l, p),
        start.as_vector(),
        |l| prob.in_dual_domain_vec(l),
        cfg,
    )
}

/// `g_p(y) = min_λ φ_p(λ)`.
///
/// Errors with [`Error::InfeasibleStart`] for a start outside `ri D`, and with
/// [`Error::DomainError`] when Newton fails to converge.
pub fn g_p_value(
    prob: &ProblemInstance,
    par: BarrierParameter,
    cfg: &NewtonConfig,
    start: &DualPoint,
) -> Result<f64> {
    let out = minimize_dual(prob, par, cfg, start)?;
    if !out.converged() {
        return Err(Error::DomainError(format!(
            "dual Newton did not converge at p = {} (gradient norm {:.3e})",
            par.value(),
            out.eval.gradient.norm()
        )));
    }
    Ok(out.eval.value)
}
