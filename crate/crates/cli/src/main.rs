#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod table;
mod verify;

use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lpnorm::{
    convergence_study, default_dual_start, parse_problem, solve_dual_path, solve_primal_path,
    DualPoint, NewtonConfig, PathSchedule, ProblemInstance, Side as PathSide, SolveReport,
    SolveStatus,
};
use nalgebra::DVector;

use table::{num, vector, Table};

const EXIT_PARTIAL: u8 = 2;

#[derive(Parser)]
#[command(
    name = "lpnorm",
    version,
    about = "L^p-norm barrier paths, convergence studies and transform checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Follow the primal or dual barrier path and print one row per stage.
    Solve(SolveArgs),
    /// Dual path errors against an exact or grid-search oracle.
    Study(StudyArgs),
    /// Run a numerical verification and print PASS/FAIL per case.
    Verify(verify::VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Primal,
    Dual,
}

#[derive(Args)]
struct ScheduleArgs {
    #[arg(long, default_value_t = 2.0)]
    p0: f64,
    #[arg(long, default_value_t = 4.0)]
    growth: f64,
    #[arg(long, default_value_t = 10)]
    stages: usize,
    #[arg(long, default_value_t = NewtonConfig::default().grad_tol)]
    grad_tol: f64,
    #[arg(long, default_value_t = NewtonConfig::default().max_iters)]
    max_iters: usize,
}

impl ScheduleArgs {
    fn schedule(&self) -> Result<PathSchedule> {
        PathSchedule::new(self.p0, self.growth, self.stages).context("invalid schedule")
    }

    fn newton(&self) -> Result<NewtonConfig> {
        if !(self.grad_tol > 0.0) || self.max_iters == 0 {
            return Err(anyhow!("--grad-tol and --max-iters must be positive"));
        }
        Ok(NewtonConfig {
            grad_tol: self.grad_tol,
            max_iters: self.max_iters,
            ..NewtonConfig::default()
        })
    }

    fn describe(&self, t: &mut Table, cfg: &NewtonConfig) {
        t.config_num("p0", self.p0)
            .config_num("growth", self.growth)
            .config("stages", self.stages)
            .config_num("grad_tol", cfg.grad_tol)
            .config("max_iters", cfg.max_iters)
            .config_num("armijo_c", cfg.armijo_c)
            .config_num("backtrack_factor", cfg.backtrack_factor)
            .config_num("boundary_fraction", cfg.boundary_fraction);
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    problem: PathBuf,
    #[arg(long, value_enum)]
    side: Side,
    #[command(flatten)]
    schedule: ScheduleArgs,
    /// Starting point, comma separated; required for the primal side.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    start: Option<Vec<f64>>,
}

#[derive(Args)]
struct StudyArgs {
    #[arg(long)]
    problem: PathBuf,
    #[command(flatten)]
    schedule: ScheduleArgs,
}

pub(crate) fn load_problem(path: &Path) -> Result<ProblemInstance> {
    let text = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_problem(&text).with_context(|| format!("invalid problem file {}", path.display()))
}

fn partial_warning(report: &SolveReport) -> u8 {
    if report.status == SolveStatus::Converged {
        return 0;
    }
    let ps: Vec<String> = report
        .stages
        .iter()
        .filter(|s| !s.converged)
        .map(|s| s.p.to_string())
        .collect();
    eprintln!("warning: Newton did not converge at p = {}", ps.join(", "));
    EXIT_PARTIAL
}

fn cmd_solve(a: &SolveArgs) -> Result<u8> {
    let prob = load_problem(&a.problem)?;
    let sched = a.schedule.schedule()?;
    let cfg = a.schedule.newton()?;
    let (report, start) = match a.side {
        Side::Dual => {
            let start = match &a.start {
                Some(v) => DualPoint::from_slice(v).context("invalid --start")?,
                None => default_dual_start(&prob).context("no default dual start")?,
            };
            let r = solve_dual_path(&prob, &sched, &cfg, &start).context("dual path failed")?;
            (r, start.into_vector())
        }
        Side::Primal => {
            let v = a
                .start
                .as_ref()
                .ok_or_else(|| anyhow!("primal start required: pass --start X1,X2,..."))?;
            let start = DVector::from_column_slice(v);
            let r = solve_primal_path(&prob, &sched, &cfg, &start).context("primal path failed")?;
            (r, start)
        }
    };

    let name = if report.side == PathSide::Dual {
        "lambda"
    } else {
        "x"
    };
    let dim = start.len();
    let header = ["stage", "p", "objective", "h1", "grad_norm", "iters"]
        .map(String::from)
        .into_iter()
        .chain((1..=dim).map(|i| format!("{name}{i}")));
    let mut t = Table::new(header);
    t.config("command", "solve")
        .config("problem", a.problem.display())
        .config(
            "side",
            if report.side == PathSide::Dual {
                "dual"
            } else {
                "primal"
            },
        );
    a.schedule.describe(&mut t, &cfg);
    t.config("start", vector(start.iter().copied()));
    for (i, s) in report.stages.iter().enumerate() {
        let mut row = vec![
            (i + 1).to_string(),
            num(s.p),
            num(s.objective),
            num(s.limit_objective),
            num(s.grad_norm),
            s.newton_iters.to_string(),
        ];
        row.extend(s.point.iter().map(|v| num(*v)));
        t.row(row);
    }
    t.write(io::stdout().lock())?;
    Ok(partial_warning(&report))
}

fn cmd_study(a: &StudyArgs) -> Result<u8> {
    let prob = load_problem(&a.problem)?;
    let sched = a.schedule.schedule()?;
    let cfg = a.schedule.newton()?;
    let study = convergence_study(&prob, &sched, &cfg).context("study failed")?;
    let mut t = Table::new([
        "stage",
        "p",
        "g_p",
        "h1_at_opt",
        "oracle_g",
        "abs_error",
        "fitted_bound",
    ]);
    t.config("command", "study")
        .config("problem", a.problem.display());
    a.schedule.describe(&mut t, &cfg);
    t.config("oracle", format!("{:?}", study.oracle.method))
        .config_num("C", study.constant);
    for (i, r) in study.rows.iter().enumerate() {
        t.row(vec![
            (i + 1).to_string(),
            num(r.p),
            num(r.g_p),
            num(r.h1_at_opt),
            num(r.oracle_g),
            num(r.abs_error),
            num(r.fitted_bound),
        ]);
    }
    t.write(io::stdout().lock())?;
    Ok(partial_warning(&study.report))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Study(a) => cmd_study(a),
        Command::Verify(a) => verify::run(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
