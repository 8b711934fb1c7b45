//! `lpnorm verify`: numerical checks with one CSV row per case.

use std::io;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use lpnorm::oracles::{check_weak_duality, sample_dual_points, sample_feasible_points};
use lpnorm::transforms::{
    log_lp_norm, numeric_dual_lbf, verify_cramer_identity, CramerGrids, Domain, GRID_DECAY_NATS,
};
use lpnorm::{dual_lbf, BarrierParameter, GridSpec, ProblemInstance, QuadratureConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::load_problem;
use crate::table::{num, vector, Table};

const EXIT_FAIL: u8 = 3;
const CRAMER_TOL: f64 = 1e-2;
const CLOSED_FORM_REL: f64 = 1e-6;
const LEMMA1_TOL: f64 = 1e-8;
const WEAK_DUALITY_TOL: f64 = 1e-9;
const CLOSED_FORM_CASES: usize = 10;
const DUALITY_PAIRS: usize = 100;
const MAX_DRAWS: usize = 1_000_000;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    /// p·g_p(y) against the discrete Cramér transform of the sampled g̃_p (m = 1).
    Cramer,
    /// Closed-form dual barrier against quadrature at random interior points.
    Closedform,
    /// ln‖e^{−x}‖_p on the half line against −ln p/p for p = 1, 2, ..., 1024.
    Lemma1,
    /// f(x) ≤ h1(λ) on rejection-sampled feasible pairs.
    Duality,
}

impl Check {
    fn name(self) -> &'static str {
        match self {
            Check::Cramer => "cramer",
            Check::Closedform => "closedform",
            Check::Lemma1 => "lemma1",
            Check::Duality => "duality",
        }
    }
}

/// `LO:HI:N`, a uniform 1-D grid.
#[derive(Clone, Debug)]
pub struct GridArg {
    lo: f64,
    hi: f64,
    nodes: usize,
}

impl FromStr for GridArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts.as_slice() else {
            return Err(format!("expected LO:HI:N, got `{s}`"));
        };
        let f = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad number `{t}`"))
        };
        Ok(Self {
            lo: f(lo)?,
            hi: f(hi)?,
            nodes: n
                .trim()
                .parse()
                .map_err(|_| format!("bad node count `{n}`"))?,
        })
    }
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    check: Check,
    /// Problem file; not used by `lemma1`.
    #[arg(long)]
    problem: Option<PathBuf>,
    /// Barrier parameter (cramer: default 1; closedform: random in [1, 50] when absent).
    #[arg(long)]
    p: Option<f64>,
    /// y-grid for the Cramér check.
    #[arg(long, default_value = "0:30:2001")]
    grid_spec: GridArg,
    /// Nodes of the z-grid around pλ*.
    #[arg(long, default_value_t = 2001)]
    z_nodes: usize,
    /// Required integrand drop (nats) at the upper grid faces.
    #[arg(long, default_value_t = GRID_DECAY_NATS)]
    decay: f64,
    /// Half-width of the sampling boxes for closedform and duality.
    #[arg(long = "box", default_value_t = 4.0)]
    box_size: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

struct Case {
    label: String,
    value: f64,
    reference: f64,
    residual: f64,
    tolerance: f64,
}

impl Case {
    fn pass(&self) -> bool {
        self.residual <= self.tolerance
    }
}

fn problem(a: &VerifyArgs) -> Result<ProblemInstance> {
    let path = a
        .problem
        .as_ref()
        .ok_or_else(|| anyhow!("--check {} requires --problem", a.check.name()))?;
    load_problem(path)
}

fn p_arg(p: f64) -> Result<BarrierParameter> {
    BarrierParameter::new(p).with_context(|| format!("invalid --p {p}"))
}

fn cramer(a: &VerifyArgs, t: &mut Table, q: &QuadratureConfig) -> Result<Vec<Case>> {
    let prob = problem(a)?;
    let p = a.p.unwrap_or(1.0);
    p_arg(p)?;
    let g = &a.grid_spec;
    let grids = CramerGrids {
        y_grid: GridSpec::uniform(g.lo, g.hi, g.nodes).context("invalid --grid-spec")?,
        z_grid: None,
        z_nodes: a.z_nodes,
        decay_nats: a.decay,
    };
    t.config_num("p", p)
        .config("grid_spec", format!("{}:{}:{}", g.lo, g.hi, g.nodes))
        .config("z_nodes", a.z_nodes)
        .config_num("decay", a.decay);
    let r = verify_cramer_identity(&prob, p, &grids, q).context("Cramér check failed to run")?;
    Ok(vec![Case {
        label: format!("p={p:?} lambda*={}", vector(r.lambda.iter().copied())),
        value: r.rhs,
        reference: r.lhs,
        residual: r.residual,
        tolerance: CRAMER_TOL,
    }])
}

fn closed_form(a: &VerifyArgs, t: &mut Table, q: &QuadratureConfig) -> Result<Vec<Case>> {
    let prob = problem(a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let bounds = vec![(0.05, a.box_size); prob.m()];
    let lambdas = sample_dual_points(&prob, &bounds, CLOSED_FORM_CASES, MAX_DRAWS, &mut rng)
        .ok_or_else(|| {
            anyhow!(
                "could not draw interior dual points in [0.05, {}]^m",
                a.box_size
            )
        })?;
    t.config("seed", a.seed).config_num("box", a.box_size);
    if let Some(p) = a.p {
        t.config_num("p", p);
    }
    lambdas
        .iter()
        .map(|l| {
            let p = a.p.unwrap_or_else(|| rng.random_range(1.0..50.0));
            let closed = dual_lbf(&prob, l, p_arg(p)?).value;
            let numeric = numeric_dual_lbf(&prob, l, p, q).context("quadrature failed")?;
            Ok(Case {
                label: format!("p={p:?} lambda={}", vector(l.as_vector().iter().copied())),
                value: numeric,
                reference: closed,
                residual: (numeric - closed).abs() / closed.abs(),
                tolerance: CLOSED_FORM_REL,
            })
        })
        .collect()
}

fn lemma1(q: &QuadratureConfig) -> Result<Vec<Case>> {
    (0..=10)
        .map(|k| {
            let p = 2f64.powi(k);
            let v = log_lp_norm(|x| -x[0], &Domain::Orthant(1), p, q)?;
            let reference = -p.ln() / p;
            Ok(Case {
                label: format!("p={p:?}"),
                value: v,
                reference,
                residual: (v - reference).abs(),
                tolerance: LEMMA1_TOL,
            })
        })
        .collect()
}

fn duality(a: &VerifyArgs, t: &mut Table) -> Result<Vec<Case>> {
    let prob = problem(a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let lo = if prob.on_orthant() { 0.0 } else { -a.box_size };
    let xs = sample_feasible_points(
        &prob,
        &vec![(lo, a.box_size); prob.n()],
        DUALITY_PAIRS,
        MAX_DRAWS,
        &mut rng,
    )
    .ok_or_else(|| {
        anyhow!("could not draw {DUALITY_PAIRS} strictly feasible points; adjust --box")
    })?;
    let ls = sample_dual_points(
        &prob,
        &vec![(0.0, a.box_size); prob.m()],
        DUALITY_PAIRS,
        MAX_DRAWS,
        &mut rng,
    )
    .ok_or_else(|| anyhow!("could not draw {DUALITY_PAIRS} interior dual points; adjust --box"))?;
    t.config("seed", a.seed).config_num("box", a.box_size);
    xs.iter()
        .zip(&ls)
        .enumerate()
        .map(|(i, (x, l))| {
            let w = check_weak_duality(&prob, x, l)?;
            let f = prob.objective(x);
            Ok(Case {
                label: format!("pair {}", i + 1),
                value: f,
                reference: f + w.margin,
                residual: (-w.margin).max(0.0),
                tolerance: WEAK_DUALITY_TOL,
            })
        })
        .collect()
}

pub fn run(a: &VerifyArgs) -> Result<u8> {
    let q = QuadratureConfig::default();
    let mut t = Table::new([
        "check",
        "case",
        "value",
        "reference",
        "residual",
        "tolerance",
        "result",
    ]);
    t.config("command", "verify")
        .config("check", a.check.name());
    if let Some(p) = &a.problem {
        t.config("problem", p.display());
    }
    t.config_num("truncation_drop", q.truncation_drop)
        .config_num("panel_tol", q.panel_tol)
        .config("max_depth", q.max_depth);
    let cases = match a.check {
        Check::Cramer => cramer(a, &mut t, &q)?,
        Check::Closedform => closed_form(a, &mut t, &q)?,
        Check::Lemma1 => lemma1(&q)?,
        Check::Duality => duality(a, &mut t)?,
    };
    if cases.is_empty() {
        bail!("no cases were run");
    }
    for c in &cases {
        t.row(vec![
            a.check.name().into(),
            c.label.clone(),
            num(c.value),
            num(c.reference),
            num(c.residual),
            num(c.tolerance),
            if c.pass() { "PASS" } else { "FAIL" }.into(),
        ]);
    }
    t.write(io::stdout().lock())?;
    let failed = cases.iter().filter(|c| !c.pass()).count();
    let worst = cases.iter().map(|c| c.residual).fold(0.0, f64::max);
    let verdict = if failed == 0 { "PASS" } else { "FAIL" };
    eprintln!(
        "{}: {verdict} ({} cases, {failed} failed, max residual {worst:.3e})",
        a.check.name(),
        cases.len()
    );
    Ok(if failed == 0 { 0 } else { EXIT_FAIL })
}
