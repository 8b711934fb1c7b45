//! Convergence study: dual path values against an oracle, with a fitted
//! `C·(1 + ln p)/p` envelope.

use crate::error::{Error, Result};
use crate::oracles::{ground_truth, GroundTruth};
use crate::problems::ProblemInstance;
use crate::solve::{default_dual_start, solve_dual_path, NewtonConfig, PathSchedule, SolveReport};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyRow {
    pub p: f64,
    pub g_p: f64,
    pub h1_at_opt: f64,
    pub oracle_g: f64,
    pub abs_error: f64,
    pub fitted_bound: f64,
}

#[derive(Debug, Clone)]
pub struct Study {
    pub rows: Vec<StudyRow>,
    /// `C`, fixed from the first stage: `abs_error₁ · p₁ / (1 + ln p₁)`.
    pub constant: f64,
    pub oracle: GroundTruth,
    pub report: SolveReport,
}

/// `C` such that `C(1 + ln p)/p` passes through `(p, err)`.
pub fn fit_constant(p: f64, err: f64) -> f64 {
    err * p / (1.0 + p.ln())
}

pub fn fitted_bound(constant: f64, p: f64) -> f64 {
    constant * (1.0 + p.ln()) / p
}

/// Runs the dual path from the default start and tabulates `|g_p − g|` per stage.
pub fn convergence_study(
    prob: &ProblemInstance,
    sched: &PathSchedule,
    cfg: &NewtonConfig,
) -> Result<Study> {
    let oracle = ground_truth(prob)?;
    if !oracle.g_value.is_finite() {
        return Err(Error::Unsupported(format!(
            "oracle value is {}",
            oracle.g_value
        )));
    }
    let start = default_dual_start(prob)?;
    let report = solve_dual_path(prob, sched, cfg, &start)?;
    let first = &report.stages[0];
    let constant = fit_constant(first.p, (first.objective - oracle.g_value).abs());
    let rows = report
        .stages
        .iter()
        .map(|s| StudyRow {
            p: s.p,
            g_p: s.objective,
            h1_at_opt: s.limit_objective,
            oracle_g: oracle.g_value,
            abs_error: (s.objective - oracle.g_value).abs(),
            fitted_bound: fitted_bound(constant, s.p),
        })
        .collect();
    Ok(Study {
        rows,
        constant,
        oracle,
        report,
    })
}
