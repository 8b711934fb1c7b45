//! Numerical L^p norms, Laplace and concave Fenchel transforms on grids, and
//! their composition into a discrete Cramér transform.
//!
//! These are computed by quadrature and grid scans only, independently of the
//! closed forms in [`crate::barriers`], so the two can be checked against each other.

mod cramer;
mod grid;
mod quadrature;

pub use cramer::{
    cramer_transform, fenchel_concave, log_laplace_closed_form, log_laplace_of_grid,
    verify_cramer_identity, CramerCheck, CramerGrids, GRID_DECAY_NATS,
};
pub use grid::{GridFunction, GridSpec};
pub use quadrature::{log_integrate_1d, QuadratureConfig};

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::problems::{DualPoint, ProblemInstance};

/// Integration domain for [`log_lp_norm`].
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    /// `R^d_+`.
    Orthant(usize),
    /// `R^d`.
    Whole(usize),
    /// Product of intervals; ends may be infinite.
    Box(Vec<(f64, f64)>),
}

impl Domain {
    fn bounds(&self) -> Vec<(f64, f64)> {
        match self {
            Domain::Orthant(d) => vec![(0.0, f64::INFINITY); *d],
            Domain::Whole(d) => vec![(f64::NEG_INFINITY, f64::INFINITY); *d],
            Domain::Box(b) => b.clone(),
        }
    }
}

/// `ln ∫ e^{h(x)} dx` over a product of intervals, `d ∈ {1, 2}`.
pub fn log_integrate<F>(
    log_integrand: F,
    bounds: &[(f64, f64)],
    cfg: &QuadratureConfig,
) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    match bounds {
        [(lo, hi)] => log_integrate_1d(|x| Ok(log_integrand(&[x])), *lo, *hi, cfg),
        [(lo0, hi0), (lo1, hi1)] => log_integrate_1d(
            |x0| log_integrate_1d(|x1| Ok(log_integrand(&[x0, x1])), *lo1, *hi1, cfg),
            *lo0,
            *hi0,
            cfg,
        ),
        _ => Err(Error::Unsupported(format!(
            "integration in dimension {}",
            bounds.len()
        ))),
    }
}

/// `ln ‖e^h‖_{L^p} = (1/p) ln ∫ e^{p·h}`.
pub fn log_lp_norm<F>(
    log_integrand: F,
    domain: &Domain,
    p: f64,
    cfg: &QuadratureConfig,
) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::invariant(
            "p",
            format!("must be finite and ≥ 1, got {p}"),
        ));
    }
    cfg.validate()?;
    let v = log_integrate(|x| scaled(p, log_integrand(x)), &domain.bounds(), cfg)?;
    Ok(v / p)
}

/// `p·h` with `p·(−∞) = −∞`.
fn scaled(p: f64, h: f64) -> f64 {
    if h == f64::NEG_INFINITY {
        h
    } else {
        p * h
    }
}

fn primal_domain(prob: &ProblemInstance) -> Result<Domain> {
    let n = prob.n();
    if n > 2 {
        return Err(Error::Unsupported(format!(
            "quadrature needs n ≤ 2, got {n}"
        )));
    }
    Ok(if prob.on_orthant() {
        Domain::Orthant(n)
    } else {
        Domain::Whole(n)
    })
}

/// `φ_p(λ)` with the L^p norm evaluated by quadrature.
pub fn numeric_dual_lbf(
    prob: &ProblemInstance,
    lambda: &DualPoint,
    p: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let domain = primal_domain(prob)?;
    if !prob.in_dual_domain(lambda) {
        return Err(Error::DomainError("λ is not in ri D".into()));
    }
    let l = lambda.as_vector();
    let h = |x: &[f64]| {
        let x = DVector::from_column_slice(x);
        prob.objective(&x) - l.dot(&prob.constraint_map(&x))
    };
    let norm = log_lp_norm(h, &domain, p, cfg)?;
    let log_pl: f64 = l.iter().map(|lj| (p * lj).ln()).sum();
    Ok(l.dot(prob.y()) + norm - log_pl / p)
}

/// `{t : α t² + β t + γ ≤ 0}` for `α ≥ 0`, as a closed interval with possibly infinite ends.
fn quadratic_sublevel(alpha: f64, beta: f64, gamma: f64) -> Option<(f64, f64)> {
    if alpha <= 0.0 {
        return if beta > 0.0 {
            Some((f64::NEG_INFINITY, -gamma / beta))
        } else if beta < 0.0 {
            Some((-gamma / beta, f64::INFINITY))
        } else if gamma <= 0.0 {
            Some((f64::NEG_INFINITY, f64::INFINITY))
        } else {
            None
        };
    }
    let disc = beta * beta - 4.0 * alpha * gamma;
    if disc < 0.0 {
        return None;
    }
    let q = -0.5 * (beta + beta.signum() * disc.sqrt());
    if q == 0.0 {
        return Some((0.0, 0.0));
    }
    let (r1, r2) = (q / alpha, gamma / q);
    Some((r1.min(r2), r1.max(r2)))
}

/// Section of `Ω(y) = {x ∈ X : ω(x) ≤ y}` in the last coordinate, the others fixed to `prefix`.
fn section(prob: &ProblemInstance, y: &[f64], prefix: &[f64]) -> Option<(f64, f64)> {
    let last = prefix.len();
    let (mut lo, mut hi) = if prob.on_orthant() {
        if prefix.iter().any(|v| *v < 0.0) {
            return None;
        }
        (0.0, f64::INFINITY)
    } else {
        (f64::NEG_INFINITY, f64::INFINITY)
    };
    for (j, yj) in y.iter().enumerate() {
        let (alpha, beta, gamma) = match prob {
            ProblemInstance::Qp(d) => {
                let (q, c) = (&d.q()[j + 1], &d.c()[j + 1]);
                let mut beta = 2.0 * c[last];
                let mut gamma = -yj;
                for (k, uk) in prefix.iter().enumerate() {
                    beta += 2.0 * q[(k, last)] * uk;
                    gamma += 2.0 * c[k] * uk;
                    for (l, ul) in prefix.iter().enumerate() {
                        gamma += uk * q[(k, l)] * ul;
                    }
                }
                (q[(last, last)].max(0.0), beta, gamma)
            }
            _ => {
                let (a, _) = prob.linear_parts().expect("linear class");
                let gamma = prefix
                    .iter()
                    .enumerate()
                    .map(|(k, u)| a[(j, k)] * u)
                    .sum::<f64>()
                    - yj;
                (0.0, a[(j, last)], gamma)
            }
        };
        let (a, b) = quadratic_sublevel(alpha, beta, gamma)?;
        lo = lo.max(a);
        hi = hi.min(b);
    }
    (lo < hi).then_some((lo, hi))
}

/// Projection of `Ω(y)` on the first coordinate (`n = 2`), located on a geometric
/// anchor set and refined by bisection.
fn first_coordinate_range(prob: &ProblemInstance, y: &[f64]) -> Option<(f64, f64)> {
    let pow = |k: i32| 2f64.powi(k);
    let anchors: Vec<f64> = if prob.on_orthant() {
        std::iter::once(0.0).chain((-40..=60).map(pow)).collect()
    } else {
        (-40..=60)
            .rev()
            .map(|k| -pow(k))
            .chain(std::iter::once(0.0))
            .chain((-40..=60).map(pow))
            .collect()
    };
    let feasible = |x0: f64| section(prob, y, &[x0]).is_some();
    let flags: Vec<bool> = anchors.iter().map(|&a| feasible(a)).collect();
    let first = flags.iter().position(|f| *f)?;
    let last = flags.iter().rposition(|f| *f)?;
    let bisect = |mut inside: f64, mut outside: f64| {
        for _ in 0..200 {
            let mid = 0.5 * (inside + outside);
            if mid == inside || mid == outside {
                break;
            }
            if feasible(mid) {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        inside
    };
    let lo = if first > 0 {
        bisect(anchors[first], anchors[first - 1])
    } else if prob.on_orthant() {
        0.0
    } else {
        f64::NEG_INFINITY
    };
    let hi = if last + 1 < anchors.len() {
        bisect(anchors[last], anchors[last + 1])
    } else {
        f64::INFINITY
    };
    (lo < hi).then_some((lo, hi))
}

/// `ln g̃_p(y) = ln ∫_{Ω(y)} e^{p f(x)} dx` (`−∞` for empty or null `Ω(y)`).
pub fn log_tilde_g_p(
    prob: &ProblemInstance,
    p: f64,
    y: &[f64],
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if y.len() != prob.m() {
        return Err(Error::dims("y", prob.m(), y.len()));
    }
    let f = |x: &[f64]| scaled(p, prob.objective(&DVector::from_column_slice(x)));
    match prob.n() {
        1 => match section(prob, y, &[]) {
            Some((a, b)) => log_integrate_1d(|t| Ok(f(&[t])), a, b, cfg),
            None => Ok(f64::NEG_INFINITY),
        },
        2 => match first_coordinate_range(prob, y) {
            Some((lo, hi)) => log_integrate_1d(
                |x0| match section(prob, y, &[x0]) {
                    Some((a, b)) => log_integrate_1d(|t| Ok(f(&[x0, t])), a, b, cfg),
                    None => Ok(f64::NEG_INFINITY),
                },
                lo,
                hi,
                cfg,
            ),
            None => Ok(f64::NEG_INFINITY),
        },
        n => Err(Error::Unsupported(format!(
            "quadrature needs n ≤ 2, got {n}"
        ))),
    }
}

/// Samples `ln g̃_p` on a grid over `y` (grid dimension must equal `m ≤ 2`).
pub fn sample_tilde_g_p(
    prob: &ProblemInstance,
    p: f64,
    y_grid: &GridSpec,
    cfg: &QuadratureConfig,
) -> Result<GridFunction> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::invariant(
            "p",
            format!("must be finite and ≥ 1, got {p}"),
        ));
    }
    if y_grid.dim() != prob.m() {
        return Err(Error::dims("y_grid", prob.m(), y_grid.dim()));
    }
    cfg.validate()?;
    GridFunction::from_fn(y_grid.clone(), |y| log_tilde_g_p(prob, p, y, cfg))
}
