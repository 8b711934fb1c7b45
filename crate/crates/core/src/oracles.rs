//! Ground-truth value-function computations that never touch a barrier: LP vertex
//! enumeration, dense grid search, and duality checks.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::barriers::dual_limit_objective;
use crate::error::{Error, Result};
use crate::linalg::solve_dense;
use crate::problems::{DualPoint, ProblemInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    VertexEnumeration,
    GridSearch,
    ClosedForm1d,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    /// `g(y)`; `+∞` when unbounded, `−∞` when infeasible.
    pub g_value: f64,
    pub maximizer: Option<DVector<f64>>,
    pub method: OracleMethod,
}

const FEAS_TOL: f64 = 1e-9;
const MAX_ENUMERATION: usize = 12;

/// All `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Rows of the stacked system `[A; −I] x ≤ [y; 0]`.
fn stacked(a: &DMatrix<f64>, y: &DVector<f64>) -> (DMatrix<f64>, DVector<f64>) {
    let (m, n) = a.shape();
    let g = DMatrix::from_fn(m + n, n, |i, k| {
        if i < m {
            a[(i, k)]
        } else if i - m == k {
            -1.0
        } else {
            0.0
        }
    });
    let h = DVector::from_fn(m + n, |i, _| if i < m { y[i] } else { 0.0 });
    (g, h)
}

/// Exact LP optimum by enumerating basic points of `{Ax ≤ y, x ≥ 0}`.
///
/// Unboundedness is detected through the edge directions of the recession cone
/// (`n − 1` active homogeneous constraints); degenerate bases are skipped.
pub fn lp_vertex_optimum(prob: &ProblemInstance) -> Result<GroundTruth> {
    let (a, c) = prob
        .linear_parts()
        .filter(|_| prob.on_orthant() && !matches!(prob, ProblemInstance::LogMonomial(_)))
        .ok_or_else(|| Error::Unsupported("vertex enumeration needs a linear program".into()))?;
    let (m, n) = a.shape();
    if m + n > MAX_ENUMERATION {
        return Err(Error::TooLarge(m + n));
    }
    let (g, h) = stacked(a, prob.y());
    let scale = |x: &DVector<f64>| 1.0 + x.amax();

    let mut best: Option<(f64, DVector<f64>)> = None;
    for rows in subsets(m + n, n) {
        let sub = DMatrix::from_fn(n, n, |i, k| g[(rows[i], k)]);
        let rhs = DVector::from_fn(n, |i, _| h[rows[i]]);
        let Some(x) = solve_dense(&sub, &rhs, 1e-12) else {
            continue;
        };
        let slack = &h - &g * &x;
        if slack.iter().all(|s| *s >= -FEAS_TOL * scale(&x)) {
            let v = c.dot(&x);
            if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
                best = Some((v, x));
            }
        }
    }
    let Some((value, x)) = best else {
        return Ok(GroundTruth {
            g_value: f64::NEG_INFINITY,
            maximizer: None,
            method: OracleMethod::VertexEnumeration,
        });
    };

    // edge directions d of {G d ≤ 0}: n − 1 active rows, d in their null space
    let improving_ray = |d: &DVector<f64>| {
        let d = d / d.amax();
        (&g * &d).iter().all(|v| *v <= FEAS_TOL) && c.dot(&d) > FEAS_TOL
    };
    let unbounded = if n == 1 {
        improving_ray(&DVector::from_element(1, 1.0))
            || improving_ray(&DVector::from_element(1, -1.0))
    } else {
        subsets(m + n, n - 1).into_iter().any(|rows| {
            // pad with a zero row so the SVD yields a full n×n V'
            let sub = DMatrix::from_fn(n, n, |i, k| if i + 1 < n { g[(rows[i], k)] } else { 0.0 });
            let svd = sub.svd(false, true);
            let v_t = svd.v_t.expect("requested");
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
            // rank n − 1 means exactly one (near-)zero singular value
            if svd.singular_values[order[1]] <= 1e-10 {
                return false;
            }
            let d: DVector<f64> = v_t.row(order[0]).transpose().into_owned();
            improving_ray(&d) || improving_ray(&-d)
        })
    };
    if unbounded {
        return Ok(GroundTruth {
            g_value: f64::INFINITY,
            maximizer: None,
            method: OracleMethod::VertexEnumeration,
        });
    }
    Ok(GroundTruth {
        g_value: value,
        maximizer: Some(x),
        method: OracleMethod::VertexEnumeration,
    })
}

fn grid_nodes(bounds: &[(f64, f64)], nodes: usize) -> Vec<Vec<f64>> {
    bounds
        .iter()
        .map(|(lo, hi)| {
            (0..nodes)
                .map(|i| lo + (hi - lo) * i as f64 / (nodes - 1) as f64)
                .collect()
        })
        .collect()
}

/// Exhaustive maximization of `value(x)` over a box grid, `n ≤ 2`.
///
/// Faces where the box meets the orthant boundary (`lo = 0`) are not treated as
/// box boundary, since optima on the cone boundary are genuine.
fn grid_argmax<F: Fn(&DVector<f64>) -> f64>(
    value: F,
    bounds: &[(f64, f64)],
    nodes: usize,
    orthant: bool,
) -> Result<Option<(f64, DVector<f64>)>> {
    let n = bounds.len();
    if !(1..=2).contains(&n) {
        return Err(Error::Unsupported(format!(
            "grid search needs n ≤ 2, got {n}"
        )));
    }
    if nodes < 3
        || bounds
            .iter()
            .any(|(lo, hi)| !(lo.is_finite() && hi.is_finite() && lo < hi))
    {
        return Err(Error::invariant(
            "box",
            "need finite bounds lo < hi and at least 3 nodes",
        ));
    }
    let axes = grid_nodes(bounds, nodes);
    let mut best: Option<(f64, Vec<usize>)> = None;
    let total = nodes.pow(n as u32);
    for flat in 0..total {
        let idx: Vec<usize> = if n == 1 {
            vec![flat]
        } else {
            vec![flat / nodes, flat % nodes]
        };
        let x = DVector::from_fn(n, |k, _| axes[k][idx[k]]);
        let v = value(&x);
        if v > f64::NEG_INFINITY && best.as_ref().is_none_or(|(bv, _)| v > *bv) {
            best = Some((v, idx));
        }
    }
    let Some((v, idx)) = best else {
        return Ok(None);
    };
    let on_box_face = idx.iter().enumerate().any(|(k, &i)| {
        let cone_face = orthant && bounds[k].0 == 0.0;
        (i == 0 && !cone_face) || i + 1 == nodes
    });
    if on_box_face {
        return Err(Error::OptimumOnBoundary);
    }
    let x = DVector::from_fn(n, |k, _| axes[k][idx[k]]);
    Ok(Some((v, x)))
}

/// Best feasible node of a box grid (`n ≤ 2`); `−∞` when no node is feasible.
pub fn grid_search_optimum(
    prob: &ProblemInstance,
    bounds: &[(f64, f64)],
    nodes_per_axis: usize,
) -> Result<GroundTruth> {
    if bounds.len() != prob.n() {
        return Err(Error::dims("box", prob.n(), bounds.len()));
    }
    let best = grid_argmax(
        |x| {
            if prob.is_feasible_primal(x, 0.0) {
                prob.objective(x)
            } else {
                f64::NEG_INFINITY
            }
        },
        bounds,
        nodes_per_axis,
        prob.on_orthant(),
    )?;
    Ok(match best {
        Some((v, x)) => GroundTruth {
            g_value: v,
            maximizer: Some(x),
            method: OracleMethod::GridSearch,
        },
        None => GroundTruth {
            g_value: f64::NEG_INFINITY,
            maximizer: None,
            method: OracleMethod::GridSearch,
        },
    })
}

/// Grid search on `[−R, R]^n` (or `[0, R]^n` on the orthant), doubling `R` from 4
/// while the optimum sits on the box boundary.
pub fn grid_search_auto(prob: &ProblemInstance, nodes_per_axis: usize) -> Result<GroundTruth> {
    let mut r = 4.0;
    for _ in 0..20 {
        let lo = if prob.on_orthant() { 0.0 } else { -r };
        match grid_search_optimum(prob, &vec![(lo, r); prob.n()], nodes_per_axis) {
            Err(Error::OptimumOnBoundary) => r *= 2.0,
            other => return other,
        }
    }
    Err(Error::OptimumOnBoundary)
}

/// Grid maximum of `f(x) − λ'ω(x)` over `X ∩ box`, i.e. `−g*(λ)`.
pub fn gstar_numeric(
    prob: &ProblemInstance,
    lambda: &DualPoint,
    bounds: &[(f64, f64)],
    nodes_per_axis: usize,
) -> Result<f64> {
    if lambda.len() != prob.m() {
        return Err(Error::dims("lambda", prob.m(), lambda.len()));
    }
    if bounds.len() != prob.n() {
        return Err(Error::dims("box", prob.n(), bounds.len()));
    }
    let l = lambda.as_vector();
    let best = grid_argmax(
        |x| {
            if prob.on_orthant() && x.iter().any(|v| *v < 0.0) {
                return f64::NEG_INFINITY;
            }
            prob.objective(x) - l.dot(&prob.constraint_map(x))
        },
        bounds,
        nodes_per_axis,
        prob.on_orthant(),
    )?;
    Ok(best.map_or(f64::NEG_INFINITY, |(v, _)| v))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakDuality {
    pub holds: bool,
    /// `h₁(λ) − f(x)`.
    pub margin: f64,
}

/// Checks `f(x) ≤ h₁(λ) + 1e-9` for feasible `x` and `λ ∈ ri D`.
pub fn check_weak_duality(
    prob: &ProblemInstance,
    x: &DVector<f64>,
    lambda: &DualPoint,
) -> Result<WeakDuality> {
    if !prob.is_feasible_primal(x, FEAS_TOL) {
        return Err(Error::DomainError("x is not feasible".into()));
    }
    if !prob.in_dual_domain(lambda) {
        return Err(Error::DomainError("λ is not in ri D".into()));
    }
    let margin = dual_limit_objective(prob, lambda) - prob.objective(x);
    Ok(WeakDuality {
        holds: margin >= -1e-9,
        margin,
    })
}

fn rejection_sample<R: Rng, F: Fn(&DVector<f64>) -> bool>(
    bounds: &[(f64, f64)],
    count: usize,
    max_draws: usize,
    rng: &mut R,
    accept: F,
) -> Option<Vec<DVector<f64>>> {
    let mut out = Vec::with_capacity(count);
    for _ in 0..max_draws {
        let x = DVector::from_fn(bounds.len(), |k, _| {
            rng.random_range(bounds[k].0..bounds[k].1)
        });
        if accept(&x) {
            out.push(x);
            if out.len() == count {
                return Some(out);
            }
        }
    }
    None
}

/// Uniform draws from the box kept when strictly feasible; `None` if fewer than
/// `count` are found in `max_draws` draws.
pub fn sample_feasible_points<R: Rng>(
    prob: &ProblemInstance,
    bounds: &[(f64, f64)],
    count: usize,
    max_draws: usize,
    rng: &mut R,
) -> Option<Vec<DVector<f64>>> {
    rejection_sample(bounds, count, max_draws, rng, |x| {
        prob.is_strictly_feasible_primal(x)
    })
}

/// Uniform draws from the box kept when in `ri D`.
pub fn sample_dual_points<R: Rng>(
    prob: &ProblemInstance,
    bounds: &[(f64, f64)],
    count: usize,
    max_draws: usize,
    rng: &mut R,
) -> Option<Vec<DualPoint>> {
    rejection_sample(bounds, count, max_draws, rng, |l| {
        prob.in_dual_domain_vec(l)
    })
    .map(|v| {
        v.into_iter()
            .map(|l| DualPoint::new(l).expect("finite draw"))
            .collect()
    })
}

/// Best available ground truth: vertex enumeration for linear programs, grid search
/// with box doubling for `n ≤ 2` otherwise.
pub fn ground_truth(prob: &ProblemInstance) -> Result<GroundTruth> {
    match prob {
        ProblemInstance::Lp(_) | ProblemInstance::Conic(_) => lp_vertex_optimum(prob),
        _ if prob.n() <= 2 => grid_search_auto(prob, if prob.n() == 1 { 200_001 } else { 1001 }),
        _ => Err(Error::TooLarge(prob.n() + prob.m())),
    }
}
