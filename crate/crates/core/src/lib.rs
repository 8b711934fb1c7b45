//! Logarithmic barrier functions built from L^p norms of the integrand `e^f`
//! over the primal feasible set, and tools to check them numerically.
//!
//! The crate covers four problem classes (linear, conic over the orthant,
//! convex quadratic and log-monomial programs), closed-form primal and dual
//! barriers, damped-Newton path following, numerical L^p norms and Cramér
//! transforms, and brute-force ground-truth oracles.

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod barriers;
pub mod error;
pub mod instances;
pub mod linalg;
pub mod oracles;
pub mod problems;
pub mod solve;
pub mod special;
pub mod study;
pub mod transforms;

pub use barriers::{
    barrier_gap, dual_lbf, dual_limit_objective, primal_lbf, universal_barrier_orthant,
    BarrierEval, BarrierParameter,
};
pub use error::{Error, Result};
pub use oracles::{GroundTruth, OracleMethod};
pub use problems::{parse_problem, DualPoint, ProblemInstance, ProblemKind};
pub use solve::{
    default_dual_start, g_p_value, minimize_dual, newton_minimize, solve_dual_path,
    solve_primal_path, NewtonConfig, NewtonOutcome, NewtonStatus, PathSchedule, Side, SolveReport,
    SolveStatus, StageRecord,
};
pub use study::{convergence_study, Study, StudyRow};
pub use transforms::{GridFunction, GridSpec, QuadratureConfig};
