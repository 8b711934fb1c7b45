//! Grid Laplace transform, concave Fenchel transform and the Cramér identity check.

use crate::barriers::{dual_lbf_vec, BarrierParameter};
use crate::error::{Error, Result};
use crate::linalg::log_sum_exp;
use crate::problems::ProblemInstance;
use crate::solve::{default_dual_start, minimize_dual, NewtonConfig};

use super::grid::{GridFunction, GridSpec};
use super::quadrature::QuadratureConfig;
use super::sample_tilde_g_p;

/// Default decay (nats below the peak) required of a grid Laplace integrand at the
/// grid boundary.
pub const GRID_DECAY_NATS: f64 = 20.0;

/// `ln ∫ e^{−z'y + gf(y)} dy` by the trapezoid rule over the grid of `gf`.
///
/// The grid is taken as the support of `gf` from below; the upper faces cut the
/// tail, so the call fails with [`Error::GridTooSmall`] unless every node on an upper
/// face sits at least `decay_nats` below the integrand maximum. All-`−∞` input gives `−∞`.
pub fn log_laplace_of_grid(gf: &GridFunction, z: &[f64], decay_nats: f64) -> Result<f64> {
    let spec = gf.spec();
    if z.len() != spec.dim() {
        return Err(Error::dims("z", spec.dim(), z.len()));
    }
    let integrand: Vec<f64> = gf
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if *v == f64::NEG_INFINITY {
                return *v;
            }
            let y = spec.node(i);
            v - z.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>()
        })
        .collect();
    let max = integrand.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Ok(max);
    }
    let boundary = (0..spec.len())
        .filter(|&i| spec.is_upper_boundary(i))
        .map(|i| integrand[i])
        .fold(f64::NEG_INFINITY, f64::max);
    if boundary > max - decay_nats {
        return Err(Error::GridTooSmall {
            drop: max - boundary,
        });
    }
    Ok(log_sum_exp(
        integrand
            .iter()
            .enumerate()
            .map(|(i, v)| v + spec.trapezoid_weight(i).ln()),
    ))
}

/// Concave Fenchel transform on grids: `out(λ) = min_y {λ'y + gf(y)}` over nodes with
/// finite or `+∞` values; `+∞` when every node is `−∞`.
pub fn fenchel_concave(gf: &GridFunction, lambda_grid: &GridSpec) -> Result<GridFunction> {
    let spec = gf.spec();
    if lambda_grid.dim() != spec.dim() {
        return Err(Error::dims("lambda_grid", spec.dim(), lambda_grid.dim()));
    }
    let nodes: Vec<(Vec<f64>, f64)> = gf
        .values()
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != f64::NEG_INFINITY)
        .map(|(i, v)| (spec.node(i), *v))
        .collect();
    GridFunction::from_fn(lambda_grid.clone(), |l| {
        Ok(nodes
            .iter()
            .map(|(y, v)| l.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() + v)
            .fold(f64::INFINITY, f64::min))
    })
}

/// Discrete `[F ∘ ln ∘ L](gf)` at `y_eval`: the minimum over z-grid nodes of
/// `z'y_eval + ln L(gf)(z)`.
pub fn cramer_transform(
    gf: &GridFunction,
    z_grid: &GridSpec,
    y_eval: &[f64],
    decay_nats: f64,
) -> Result<f64> {
    let laplace =
        GridFunction::from_fn(z_grid.clone(), |z| log_laplace_of_grid(gf, z, decay_nats))?;
    let point = GridSpec::new(
        y_eval.to_vec(),
        vec![1.0; y_eval.len()],
        vec![1; y_eval.len()],
    )?;
    Ok(fenchel_concave(&laplace, &point)?.values()[0])
}

/// `ln L(g̃_p)(pλ) = p·ln‖e^{f − λ'ω}‖_p − Σ ln(pλ_j) = p·(φ_p(λ) − λ'y)`.
pub fn log_laplace_closed_form(prob: &ProblemInstance, lambda: &[f64], p: f64) -> f64 {
    let l = nalgebra::DVector::from_column_slice(lambda);
    let phi = dual_lbf_vec(prob, &l, p).value;
    p * (phi - l.dot(prob.y()))
}

/// Grids for [`verify_cramer_identity`].
#[derive(Debug, Clone, PartialEq)]
pub struct CramerGrids {
    pub y_grid: GridSpec,
    /// When absent, `z_nodes` points over `[0.75, 1.5]·pλ*`.
    pub z_grid: Option<GridSpec>,
    pub z_nodes: usize,
    pub decay_nats: f64,
}

impl Default for CramerGrids {
    fn default() -> Self {
        Self {
            y_grid: GridSpec::uniform(0.0, 30.0, 2001).expect("valid grid"),
            z_grid: None,
            z_nodes: 2001,
            decay_nats: GRID_DECAY_NATS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CramerCheck {
    /// `p·g_p(y)` from the dual Newton solve.
    pub lhs: f64,
    /// Discrete Cramér transform of sampled `g̃_p` at `y`.
    pub rhs: f64,
    pub residual: f64,
    /// Dual minimizer `λ*` of `φ_p`.
    pub lambda: Vec<f64>,
}

/// Compares `p·g_p(y)` with the discrete Cramér transform of `g̃_p` (`m = 1`, `n ≤ 2`).
pub fn verify_cramer_identity(
    prob: &ProblemInstance,
    p: f64,
    grids: &CramerGrids,
    cfg: &QuadratureConfig,
) -> Result<CramerCheck> {
    if prob.m() != 1 {
        return Err(Error::Unsupported(format!(
            "Cramér check needs m = 1, got {}",
            prob.m()
        )));
    }
    let par = BarrierParameter::new(p)?;
    let start = default_dual_start(prob)?;
    let out = minimize_dual(prob, par, &NewtonConfig::default(), &start)?;
    if !out.converged() {
        return Err(Error::DomainError(format!(
            "dual Newton did not converge at p = {p}"
        )));
    }
    let lhs = p * out.eval.value;
    let lambda: Vec<f64> = out.point.iter().copied().collect();

    let gf = sample_tilde_g_p(prob, p, &grids.y_grid, cfg)?;
    let z_grid = match &grids.z_grid {
        Some(z) => z.clone(),
        None => {
            let z = p * lambda[0];
            GridSpec::uniform(0.75 * z, 1.5 * z, grids.z_nodes)?
        }
    };
    let rhs = cramer_transform(&gf, &z_grid, prob.y().as_slice(), grids.decay_nats)?;
    Ok(CramerCheck {
        lhs,
        rhs,
        residual: (lhs - rhs).abs() / (1.0 + lhs.abs()),
        lambda,
    })
}
