//! Closed-form logarithmic barrier functions.
//!
//! * [`primal_lbf`]: `ψ_p(x) = f(x) + (1/p)(−Δ(x) + Σ_j ln(y − ω(x))_j)`, maximized.
//! * [`dual_lbf`]: `φ_p(λ) = λ'y + ln‖e^{f − λ'ω}‖_{L^p(X)} − Σ_j ln(pλ_j)/p`, minimized,
//!   in closed form per problem class with every constant term kept.
//! * [`dual_limit_objective`]: the pointwise limit `h₁(λ) = lim_{p→∞} φ_p(λ) = λ'y − g*(λ)`.
//!
//! All derivatives are hand-derived. Out-of-domain evaluations carry
//! `in_domain = false`, an infinite value (`+∞` for the minimized dual side,
//! `−∞` for the maximized primal side) and empty derivative storage.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{PivotedCholesky, PIVOT_FLOOR};
use crate::problems::{DualPoint, LinearData, LogMonomialData, ProblemInstance, QuadraticData};
use crate::special::ln_gamma;

/// Value, gradient and Hessian of a barrier at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct BarrierEval {
    pub value: f64,
    /// Empty when `in_domain` is false.
    pub gradient: DVector<f64>,
    /// Empty when `in_domain` is false.
    pub hessian: DMatrix<f64>,
    pub in_domain: bool,
}

impl BarrierEval {
    fn inside(value: f64, gradient: DVector<f64>, hessian: DMatrix<f64>) -> Self {
        Self {
            value,
            gradient,
            hessian,
            in_domain: true,
        }
    }

    /// Out-of-domain marker for a minimized function.
    pub fn outside_min() -> Self {
        Self::outside(f64::INFINITY)
    }

    /// Out-of-domain marker for a maximized function.
    pub fn outside_max() -> Self {
        Self::outside(f64::NEG_INFINITY)
    }

    fn outside(value: f64) -> Self {
        Self {
            value,
            gradient: DVector::zeros(0),
            hessian: DMatrix::zeros(0, 0),
            in_domain: false,
        }
    }

    /// Flips a maximization evaluation into a minimization one (and back).
    pub fn negated(self) -> Self {
        Self {
            value: -self.value,
            gradient: -self.gradient,
            hessian: -self.hessian,
            in_domain: self.in_domain,
        }
    }
}

/// The barrier parameter `p ≥ 1` (real-valued).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BarrierParameter(f64);

impl BarrierParameter {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && p >= 1.0 {
            Ok(Self(p))
        } else {
            Err(Error::invariant(
                "p",
                format!("barrier parameter must be finite and ≥ 1, got {p}"),
            ))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Universal barrier of the nonnegative orthant, `Δ(x) = ln ∫_{R^n_+} e^{−x'y} dy = −Σ ln x_i`.
pub fn universal_barrier_orthant(x: &DVector<f64>) -> BarrierEval {
    if x.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return BarrierEval::outside_min();
    }
    let value = -x.iter().map(|v| v.ln()).sum::<f64>();
    let gradient = x.map(|v| -1.0 / v);
    let hessian = DMatrix::from_diagonal(&x.map(|v| 1.0 / (v * v)));
    BarrierEval::inside(value, gradient, hessian)
}

/// `A diag(w) A'` for `A` of shape m×n and weights of length n.
fn weighted_gram(a: &DMatrix<f64>, w: &DVector<f64>) -> DMatrix<f64> {
    let scaled = DMatrix::from_fn(a.nrows(), a.ncols(), |i, k| a[(i, k)] * w[k]);
    scaled * a.transpose()
}

// ---------------------------------------------------------------------------
// Primal side
// ---------------------------------------------------------------------------

/// Primal barrier `ψ_p(x)`; `X = R^n_+` contributes `−Δ(x) = Σ ln x_i`, the
/// quadratic class (`X = R^n`) has no cone term.
pub fn primal_lbf(prob: &ProblemInstance, x: &DVector<f64>, par: BarrierParameter) -> BarrierEval {
    let p = par.value();
    if !prob.is_strictly_feasible_primal(x) {
        return BarrierEval::outside_max();
    }
    match prob {
        ProblemInstance::Lp(d) | ProblemInstance::Conic(d) => {
            primal_linear(d.a(), d.c(), d.y(), None, x, p)
        }
        ProblemInstance::LogMonomial(d) => primal_linear(d.a(), d.c(), d.y(), Some(d.b()), x, p),
        ProblemInstance::Qp(d) => primal_quadratic(d, x, p),
    }
}

fn primal_linear(
    a: &DMatrix<f64>,
    c: &DVector<f64>,
    y: &DVector<f64>,
    b: Option<&DVector<f64>>,
    x: &DVector<f64>,
    p: f64,
) -> BarrierEval {
    let cone = universal_barrier_orthant(x);
    let slack = y - a * x;
    let inv_s = slack.map(|s| 1.0 / s);

    let mut f = c.dot(x);
    let mut grad_f = c.clone();
    let mut hess_f = DMatrix::zeros(x.len(), x.len());
    if let Some(b) = b {
        for k in 0..x.len() {
            if b[k] != 0.0 {
                f += b[k] * x[k].ln();
                grad_f[k] += b[k] / x[k];
                hess_f[(k, k)] -= b[k] / (x[k] * x[k]);
            }
        }
    }

    let log_slack: f64 = slack.iter().map(|s| s.ln()).sum();
    let value = f + (-cone.value + log_slack) / p;
    let gradient = grad_f + (-&cone.gradient - a.transpose() * &inv_s) / p;
    let at = a.transpose();
    let hessian = hess_f - (&cone.hessian + weighted_gram(&at, &inv_s.map(|v| v * v))) / p;
    BarrierEval::inside(value, gradient, hessian)
}

fn primal_quadratic(d: &QuadraticData, x: &DVector<f64>, p: f64) -> BarrierEval {
    let n = x.len();
    let q0x = &d.q()[0] * x;
    let mut value = -x.dot(&q0x) - 2.0 * d.c()[0].dot(x);
    let mut gradient = -2.0 * &q0x - 2.0 * &d.c()[0];
    let mut hessian = -2.0 * &d.q()[0];
    for j in 0..d.y().len() {
        let qj = &d.q()[j + 1];
        let qjx = qj * x;
        let s = d.y()[j] - x.dot(&qjx) - 2.0 * d.c()[j + 1].dot(x);
        let grad_w = 2.0 * &qjx + 2.0 * &d.c()[j + 1];
        value += s.ln() / p;
        gradient -= &grad_w / (p * s);
        hessian -= (2.0 * qj / s + &grad_w * grad_w.transpose() / (s * s)) / p;
    }
    debug_assert_eq!(gradient.len(), n);
    BarrierEval::inside(value, gradient, hessian)
}

/// `f(x) − ψ_p(x) = (1/p)(Δ(x) − Σ_j ln(y − ω(x))_j)`; tends to 0 as `p → ∞`.
pub fn barrier_gap(prob: &ProblemInstance, x: &DVector<f64>, par: BarrierParameter) -> Result<f64> {
    if !prob.is_strictly_feasible_primal(x) {
        return Err(Error::DomainError("x is not strictly feasible".into()));
    }
    let cone = if prob.on_orthant() {
        universal_barrier_orthant(x).value
    } else {
        0.0
    };
    let slack = prob.y() - prob.constraint_map(x);
    let log_slack: f64 = slack.iter().map(|s| s.ln()).sum();
    Ok((cone - log_slack) / par.value())
}

// ---------------------------------------------------------------------------
// Dual side
// ---------------------------------------------------------------------------

/// Dual barrier `φ_p(λ)` in closed form.
pub fn dual_lbf(prob: &ProblemInstance, lambda: &DualPoint, par: BarrierParameter) -> BarrierEval {
    dual_lbf_vec(prob, lambda.as_vector(), par.value())
}

pub(crate) fn dual_lbf_vec(prob: &ProblemInstance, lambda: &DVector<f64>, p: f64) -> BarrierEval {
    if !prob.in_dual_domain_vec(lambda) {
        return BarrierEval::outside_min();
    }
    match prob {
        ProblemInstance::Lp(d) => dual_lp(d, lambda, p),
        ProblemInstance::Conic(d) => dual_conic(d, lambda, p),
        ProblemInstance::LogMonomial(d) => dual_log_monomial(d, lambda, p),
        ProblemInstance::Qp(d) => dual_quadratic(d, lambda, p),
    }
}

/// Terms shared by every linear-map class: `λ'y − Σ_k ln s_k/p − Σ_j ln λ_j/p − (m+n) ln p/p`
/// with `s = A'λ − c`.
fn dual_linear_terms(
    a: &DMatrix<f64>,
    c: &DVector<f64>,
    y: &DVector<f64>,
    lambda: &DVector<f64>,
    p: f64,
) -> (f64, DVector<f64>, DMatrix<f64>, DVector<f64>) {
    let (m, n) = a.shape();
    let slack = a.transpose() * lambda - c;
    let inv_s = slack.map(|s| 1.0 / s);
    let inv_l = lambda.map(|l| 1.0 / l);

    let log_s: f64 = slack.iter().map(|s| s.ln()).sum();
    let log_l: f64 = lambda.iter().map(|l| l.ln()).sum();
    let value = lambda.dot(y) - log_s / p - log_l / p - (m + n) as f64 * p.ln() / p;
    let gradient = y - (a * &inv_s) / p - &inv_l / p;
    let hessian = (weighted_gram(a, &inv_s.map(|v| v * v))
        + DMatrix::from_diagonal(&inv_l.map(|v| v * v)))
        / p;
    (value, gradient, hessian, slack)
}

fn dual_lp(d: &LinearData, lambda: &DVector<f64>, p: f64) -> BarrierEval {
    let (value, gradient, hessian, _) = dual_linear_terms(d.a(), d.c(), d.y(), lambda, p);
    BarrierEval::inside(value, gradient, hessian)
}

/// Universal-barrier route: `λ'y + Δ(A'λ − c)/p − Σ ln λ_j/p − (m+n) ln p/p`.
fn dual_conic(d: &LinearData, lambda: &DVector<f64>, p: f64) -> BarrierEval {
    let a = d.a();
    let (m, n) = a.shape();
    let cone = universal_barrier_orthant(&(a.transpose() * lambda - d.c()));
    let inv_l = lambda.map(|l| 1.0 / l);
    let log_l: f64 = lambda.iter().map(|l| l.ln()).sum();
    let value = lambda.dot(d.y()) + cone.value / p - log_l / p - (m + n) as f64 * p.ln() / p;
    let gradient = d.y() + (a * &cone.gradient) / p - &inv_l / p;
    let hessian =
        (a * &cone.hessian * a.transpose() + DMatrix::from_diagonal(&inv_l.map(|v| v * v))) / p;
    BarrierEval::inside(value, gradient, hessian)
}

/// Linear-class terms plus `Σ_k [ln Γ(1 + p b_k)/p − b_k ln(p s_k)]`; `b_k = 0` terms are skipped
/// so the class reduces exactly to the LP formula.
fn dual_log_monomial(d: &LogMonomialData, lambda: &DVector<f64>, p: f64) -> BarrierEval {
    let a = d.a();
    let (mut value, mut gradient, mut hessian, slack) =
        dual_linear_terms(a, d.c(), d.y(), lambda, p);
    for (k, bk) in d.b().iter().enumerate() {
        if *bk == 0.0 {
            continue;
        }
        let sk = slack[k];
        let ak = a.column(k);
        value += ln_gamma(1.0 + p * bk) / p - bk * (p * sk).ln();
        gradient -= ak * (bk / sk);
        hessian += ak * ak.transpose() * (bk / (sk * sk));
    }
    BarrierEval::inside(value, gradient, hessian)
}

/// `λ'y + c_λ'Q_λ⁻¹c_λ − ln det Q_λ/(2p) − Σ ln λ_j/p + n(ln π − ln p)/(2p) − m ln p/p`.
fn dual_quadratic(d: &QuadraticData, lambda: &DVector<f64>, p: f64) -> BarrierEval {
    let m = lambda.len();
    let q = d.q_lambda(lambda);
    let n = q.nrows();
    let Some(chol) = PivotedCholesky::new(&q, PIVOT_FLOOR) else {
        return BarrierEval::outside_min();
    };
    let c = d.c_lambda(lambda);
    let u = chol.solve(&c);
    let q_inv = chol.inverse();
    let log_l: f64 = lambda.iter().map(|l| l.ln()).sum();

    let value = lambda.dot(d.y()) + c.dot(&u) - chol.ln_det() / (2.0 * p) - log_l / p
        + n as f64 * (PI.ln() - p.ln()) / (2.0 * p)
        - m as f64 * p.ln() / p;

    // w_j = c_j − Q_j u,  d/dλ_j [c_λ'Q_λ⁻¹c_λ] = 2c_j'u − u'Q_j u
    let w: Vec<DVector<f64>> = (0..m).map(|j| &d.c()[j + 1] - &d.q()[j + 1] * &u).collect();
    let qinv_w: Vec<DVector<f64>> = w.iter().map(|wj| &q_inv * wj).collect();
    let qinv_qj: Vec<DMatrix<f64>> = (0..m).map(|j| &q_inv * &d.q()[j + 1]).collect();

    let gradient = DVector::from_fn(m, |j, _| {
        let qj = &d.q()[j + 1];
        d.y()[j] + 2.0 * d.c()[j + 1].dot(&u)
            - u.dot(&(qj * &u))
            - qinv_qj[j].trace() / (2.0 * p)
            - 1.0 / (p * lambda[j])
    });
    let mut hessian = DMatrix::from_fn(m, m, |i, j| {
        2.0 * w[j].dot(&qinv_w[i]) + (&qinv_qj[i] * &qinv_qj[j]).trace() / (2.0 * p)
    });
    for j in 0..m {
        hessian[(j, j)] += 1.0 / (p * lambda[j] * lambda[j]);
    }
    // exact symmetry
    let hessian = (&hessian + hessian.transpose()) * 0.5;
    BarrierEval::inside(value, gradient, hessian)
}

/// `h₁(λ) = λ'y − g*(λ)`: finite on `ri D`, `+∞` outside the closure of `D`.
pub fn dual_limit_objective(prob: &ProblemInstance, lambda: &DualPoint) -> f64 {
    dual_limit_objective_vec(prob, lambda.as_vector())
}

pub(crate) fn dual_limit_objective_vec(prob: &ProblemInstance, lambda: &DVector<f64>) -> f64 {
    if lambda.len() != prob.m() || lambda.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
        return f64::INFINITY;
    }
    let ly = lambda.dot(prob.y());
    match prob {
        ProblemInstance::Lp(_) | ProblemInstance::Conic(_) => {
            let slack = prob.dual_slack(lambda).expect("linear class");
            if slack.iter().all(|s| *s >= 0.0) {
                ly
            } else {
                f64::INFINITY
            }
        }
        ProblemInstance::LogMonomial(d) => {
            let slack = prob.dual_slack(lambda).expect("linear class");
            if slack.iter().any(|s| *s < 0.0) {
                return f64::INFINITY;
            }
            let mut v = ly;
            for (bk, sk) in d.b().iter().zip(slack.iter()) {
                if *bk == 0.0 {
                    continue;
                }
                if *sk == 0.0 {
                    return f64::INFINITY;
                }
                // b ln[s / (e⁻¹ b)] = b (ln s + 1 − ln b)
                v -= bk * (sk.ln() + 1.0 - bk.ln());
            }
            v
        }
        ProblemInstance::Qp(d) => match PivotedCholesky::new(&d.q_lambda(lambda), PIVOT_FLOOR) {
            Some(chol) => {
                let c = d.c_lambda(lambda);
                ly + c.dot(&chol.solve(&c))
            }
            // boundary points with singular Q_λ are not evaluated
            None => f64::INFINITY,
        },
    }
}
