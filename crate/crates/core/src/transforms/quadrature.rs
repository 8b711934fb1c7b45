//! Log-domain adaptive Gauss–Legendre quadrature on intervals, half-lines and the line.
//!
//! Everything is accumulated as logarithms; `exp` is only applied to differences
//! from a running maximum.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::{log_add_exp, log_sum_exp};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Nats below the integrand maximum at which infinite ranges are cut off.
    pub truncation_drop: f64,
    /// Relative accuracy requested from each panel, measured against the whole integral.
    pub panel_tol: f64,
    pub max_depth: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            truncation_drop: 40.0,
            panel_tol: 1e-10,
            max_depth: 30,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.truncation_drop > 0.0 && self.truncation_drop.is_finite()) {
            return Err(Error::invariant("truncation_drop", "must be positive"));
        }
        if !(self.panel_tol > 0.0) {
            return Err(Error::invariant("panel_tol", "must be positive"));
        }
        if self.max_depth == 0 {
            return Err(Error::invariant("max_depth", "must be positive"));
        }
        Ok(())
    }
}

const GL_ORDER: usize = 15;

struct Rule {
    nodes: [f64; GL_ORDER],
    log_weights: [f64; GL_ORDER],
}

/// Gauss–Legendre nodes on [−1, 1] by Newton's method on `P_15`.
fn rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut nodes = [0.0; GL_ORDER];
        let mut log_weights = [0.0; GL_ORDER];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = x;
            log_weights[i] = (2.0 / ((1.0 - x * x) * dp * dp)).ln();
        }
        Rule { nodes, log_weights }
    })
}

fn panel<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64) -> Result<f64> {
    let r = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut terms = [f64::NEG_INFINITY; GL_ORDER];
    for ((t, x), w) in terms.iter_mut().zip(&r.nodes).zip(&r.log_weights) {
        let v = f(mid + half * x)?;
        if v == f64::INFINITY {
            return Err(Error::DomainError("integrand is +∞".into()));
        }
        *t = w + v;
    }
    Ok(log_sum_exp(terms) + half.ln())
}

/// `ln |e^a − e^b|`, `−∞` when equal.
fn log_abs_diff(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY || lo == hi {
        return f64::NEG_INFINITY;
    }
    hi + (-(lo - hi).exp()).ln_1p()
}

struct Adaptive {
    log_tol: f64,
    max_depth: usize,
}

impl Adaptive {
    fn refine<F: FnMut(f64) -> Result<f64>>(
        &self,
        f: &mut F,
        a: f64,
        b: f64,
        whole: f64,
        depth: usize,
    ) -> Result<f64> {
        let m = 0.5 * (a + b);
        let left = panel(f, a, m)?;
        let right = panel(f, m, b)?;
        let halves = log_add_exp(left, right);
        if log_abs_diff(whole, halves) <= self.log_tol || m <= a || m >= b {
            return Ok(halves);
        }
        if depth >= self.max_depth {
            return Err(Error::DepthExceeded(self.max_depth));
        }
        let l = self.refine(f, a, m, left, depth + 1)?;
        let r = self.refine(f, m, b, right, depth + 1)?;
        Ok(log_add_exp(l, r))
    }
}

fn anchors(lo: f64, hi: f64) -> Vec<f64> {
    let pow = |k: i32| 2f64.powi(k);
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => (0..=64).map(|i| lo + (hi - lo) * i as f64 / 64.0).collect(),
        (true, false) => std::iter::once(lo)
            .chain((-40..=60).map(|k| lo + pow(k)))
            .collect(),
        (false, true) => (-40..=60)
            .rev()
            .map(|k| hi - pow(k))
            .chain(std::iter::once(hi))
            .collect(),
        (false, false) => (-40..=60)
            .rev()
            .map(|k| -pow(k))
            .chain(std::iter::once(0.0))
            .chain((-40..=60).map(pow))
            .collect(),
    }
}

/// Golden-section search for a maximum inside `[a, b]`.
fn golden_max<F: FnMut(f64) -> Result<f64>>(
    f: &mut F,
    mut a: f64,
    mut b: f64,
) -> Result<(f64, f64)> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    for _ in 0..200 {
        if (b - a) <= 1e-14 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1)?;
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}

/// `ln ∫_lo^hi e^{f(x)} dx` for a log-integrand `f` (extended real, `−∞` = zero mass).
///
/// Either end may be infinite. The integrand is assumed unimodal (log-concave
/// integrands in practice): the peak is bracketed on a coarse anchor set, refined
/// by golden section, and infinite ends are cut where `f` falls `truncation_drop`
/// nats below the peak.
pub fn log_integrate_1d<F>(mut f: F, lo: f64, hi: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Ok(f64::NEG_INFINITY);
    }
    let xs = anchors(lo, hi);
    let mut vals = Vec::with_capacity(xs.len());
    for &x in &xs {
        vals.push(f(x)?);
    }
    let (best, &fbest) = vals
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("anchor set is never empty");
    if fbest == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    let left = if best > 0 { xs[best - 1] } else { xs[best] };
    let right = if best + 1 < xs.len() {
        xs[best + 1]
    } else {
        xs[best]
    };
    let (mut peak, mut fmax) = (xs[best], fbest);
    if right > left {
        let (x, v) = golden_max(&mut f, left, right)?;
        if v > fmax {
            peak = x;
            fmax = v;
        }
    }
    let cut = fmax - cfg.truncation_drop;

    let mut b = hi;
    if !hi.is_finite() {
        b = f64::NAN;
        for k in -40..=60 {
            let t = peak + 2f64.powi(k);
            if f(t)? < cut {
                b = t;
                break;
            }
        }
        if b.is_nan() {
            return Err(Error::NonDecayingTail {
                at: peak + 2f64.powi(60),
            });
        }
    }
    let mut a = lo;
    if !lo.is_finite() {
        a = f64::NAN;
        for k in -40..=60 {
            let t = peak - 2f64.powi(k);
            if f(t)? < cut {
                a = t;
                break;
            }
        }
        if a.is_nan() {
            return Err(Error::NonDecayingTail {
                at: peak - 2f64.powi(60),
            });
        }
    }

    let mut breaks = vec![a];
    if peak > a && peak < b {
        breaks.push(peak);
    }
    breaks.push(b);
    let mut pieces = Vec::new();
    for w in breaks.windows(2) {
        for i in 0..4 {
            let s = w[0] + (w[1] - w[0]) * i as f64 / 4.0;
            let e = if i == 3 {
                w[1]
            } else {
                w[0] + (w[1] - w[0]) * (i + 1) as f64 / 4.0
            };
            if e > s {
                pieces.push((s, e));
            }
        }
    }
    let mut coarse = Vec::with_capacity(pieces.len());
    for &(s, e) in &pieces {
        coarse.push(panel(&mut f, s, e)?);
    }
    let mut reference = log_sum_exp(coarse.iter().copied());
    if reference == f64::NEG_INFINITY {
        reference = fmax + (b - a).ln();
    }
    let adaptive = Adaptive {
        log_tol: cfg.panel_tol.ln() + reference,
        max_depth: cfg.max_depth,
    };
    let mut total = f64::NEG_INFINITY;
    for (&(s, e), &whole) in pieces.iter().zip(&coarse) {
        total = log_add_exp(total, adaptive.refine(&mut f, s, e, whole, 0)?);
    }
    Ok(total)
}
