//! The four supported program classes, their feasible sets and dual domains,
//! and the canonical JSON problem file format.
//!
//! Every class is a parametric maximization `g(y) = sup { f(x) : ω(x) ≤ y, x ∈ X }`.
//! `X` is the nonnegative orthant for the linear, conic and log-monomial classes
//! and all of `R^n` for the quadratic class.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, PivotedCholesky, PIVOT_FLOOR};

const SYMMETRY_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    Lp,
    Conic,
    Qp,
    LogMonomial,
}

impl ProblemKind {
    pub fn tag(self) -> &'static str {
        match self {
            ProblemKind::Lp => "lp",
            ProblemKind::Conic => "conic",
            ProblemKind::Qp => "qp",
            ProblemKind::LogMonomial => "logmonomial",
        }
    }
}

/// `maximize c'x  s.t.  Ax ≤ y, x ≥ 0` (shared by the LP and conic classes).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearData {
    a: DMatrix<f64>,
    c: DVector<f64>,
    y: DVector<f64>,
}

/// `maximize −x'Q₀x − 2c₀'x  s.t.  x'Q_j x + 2c_j'x ≤ y_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticData {
    q: Vec<DMatrix<f64>>,
    c: Vec<DVector<f64>>,
    y: DVector<f64>,
}

/// `maximize c'x + Σ b_k ln x_k  s.t.  Ax ≤ y, x > 0`, with `b ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogMonomialData {
    a: DMatrix<f64>,
    c: DVector<f64>,
    b: DVector<f64>,
    y: DVector<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemInstance {
    Lp(LinearData),
    Conic(LinearData),
    Qp(QuadraticData),
    LogMonomial(LogMonomialData),
}

/// Dual multipliers `λ ∈ R^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPoint(DVector<f64>);

impl DualPoint {
    pub fn new(lambda: DVector<f64>) -> Result<Self> {
        if lambda.iter().any(|v| !v.is_finite()) {
            return Err(Error::invariant("lambda", "entries must be finite"));
        }
        Ok(Self(lambda))
    }

    pub fn from_slice(values: &[f64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(values))
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn into_vector(self) -> DVector<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl LinearData {
    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }
    pub fn c(&self) -> &DVector<f64> {
        &self.c
    }
    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }
}

impl QuadraticData {
    /// `Q₀, …, Q_m`.
    pub fn q(&self) -> &[DMatrix<f64>] {
        &self.q
    }
    /// `c₀, …, c_m`.
    pub fn c(&self) -> &[DVector<f64>] {
        &self.c
    }
    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    /// `Q_λ = Q₀ + Σ λ_j Q_j`.
    pub fn q_lambda(&self, lambda: &DVector<f64>) -> DMatrix<f64> {
        let mut q = self.q[0].clone();
        for (j, l) in lambda.iter().enumerate() {
            q += &self.q[j + 1] * *l;
        }
        q
    }

    /// `c_λ = c₀ + Σ λ_j c_j`.
    pub fn c_lambda(&self, lambda: &DVector<f64>) -> DVector<f64> {
        let mut c = self.c[0].clone();
        for (j, l) in lambda.iter().enumerate() {
            c += &self.c[j + 1] * *l;
        }
        c
    }
}

impl LogMonomialData {
    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }
    pub fn c(&self) -> &DVector<f64> {
        &self.c
    }
    pub fn b(&self) -> &DVector<f64> {
        &self.b
    }
    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }
}

fn check_finite(field: &str, values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::invariant(field, "entries must be finite"))
    }
}

fn check_linear(a: &DMatrix<f64>, c: &DVector<f64>, y: &DVector<f64>) -> Result<()> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Err(Error::invariant("A", "empty problem (m = 0 or n = 0)"));
    }
    if c.len() != n {
        return Err(Error::dims("c", n, c.len()));
    }
    if y.len() != m {
        return Err(Error::dims("y", m, y.len()));
    }
    check_finite("A", a.as_slice())?;
    check_finite("c", c.as_slice())?;
    check_finite("y", y.as_slice())
}

impl ProblemInstance {
    pub fn lp(a: DMatrix<f64>, c: DVector<f64>, y: DVector<f64>) -> Result<Self> {
        check_linear(&a, &c, &y)?;
        Ok(Self::Lp(LinearData { a, c, y }))
    }

    pub fn conic(a: DMatrix<f64>, c: DVector<f64>, y: DVector<f64>) -> Result<Self> {
        check_linear(&a, &c, &y)?;
        Ok(Self::Conic(LinearData { a, c, y }))
    }

    pub fn log_monomial(
        a: DMatrix<f64>,
        c: DVector<f64>,
        b: DVector<f64>,
        y: DVector<f64>,
    ) -> Result<Self> {
        check_linear(&a, &c, &y)?;
        if b.len() != a.ncols() {
            return Err(Error::dims("b", a.ncols(), b.len()));
        }
        check_finite("b", b.as_slice())?;
        if let Some(k) = b.iter().position(|v| *v < 0.0) {
            return Err(Error::invariant(
                "b",
                format!(
                    "b[{k}] = {} is negative; b ≥ 0 is required for concavity",
                    b[k]
                ),
            ));
        }
        Ok(Self::LogMonomial(LogMonomialData { a, c, b, y }))
    }

    pub fn qp(q: Vec<DMatrix<f64>>, c: Vec<DVector<f64>>, y: DVector<f64>) -> Result<Self> {
        let m = y.len();
        if m == 0 {
            return Err(Error::invariant("y", "empty problem (m = 0)"));
        }
        if q.len() != m + 1 {
            return Err(Error::dims("Q", m + 1, q.len()));
        }
        if c.len() != m + 1 {
            return Err(Error::dims("c", m + 1, c.len()));
        }
        let n = q[0].nrows();
        if n == 0 {
            return Err(Error::invariant("Q", "empty problem (n = 0)"));
        }
        check_finite("y", y.as_slice())?;
        for (j, (qj, cj)) in q.iter().zip(&c).enumerate() {
            if qj.nrows() != n {
                return Err(Error::dims(&format!("Q[{j}]"), n, qj.nrows()));
            }
            if qj.ncols() != n {
                return Err(Error::dims(&format!("Q[{j}]"), n, qj.ncols()));
            }
            if cj.len() != n {
                return Err(Error::dims(&format!("c[{j}]"), n, cj.len()));
            }
            check_finite(&format!("Q[{j}]"), qj.as_slice())?;
            check_finite(&format!("c[{j}]"), cj.as_slice())?;
            let scale = linalg::max_abs(qj).max(1.0);
            let asym = linalg::max_abs(&(qj - qj.transpose()));
            if asym > SYMMETRY_TOL * scale {
                return Err(Error::invariant(
                    &format!("Q[{j}]"),
                    format!("not symmetric (max |Q - Q'| = {asym:e})"),
                ));
            }
            if j >= 1 {
                let min_eig = linalg::min_eigenvalue(qj);
                if min_eig < -PSD_TOL * qj.norm() {
                    return Err(Error::invariant(
                        &format!("Q[{j}]"),
                        format!("not positive semidefinite (min eigenvalue {min_eig:e})"),
                    ));
                }
            }
        }
        Ok(Self::Qp(QuadraticData { q, c, y }))
    }

    pub fn kind(&self) -> ProblemKind {
        match self {
            Self::Lp(_) => ProblemKind::Lp,
            Self::Conic(_) => ProblemKind::Conic,
            Self::Qp(_) => ProblemKind::Qp,
            Self::LogMonomial(_) => ProblemKind::LogMonomial,
        }
    }

    /// Number of constraints `m`.
    pub fn m(&self) -> usize {
        self.y().len()
    }

    /// Number of variables `n`.
    pub fn n(&self) -> usize {
        match self {
            Self::Lp(d) | Self::Conic(d) => d.a.ncols(),
            Self::Qp(d) => d.q[0].nrows(),
            Self::LogMonomial(d) => d.a.ncols(),
        }
    }

    pub fn y(&self) -> &DVector<f64> {
        match self {
            Self::Lp(d) | Self::Conic(d) => &d.y,
            Self::Qp(d) => &d.y,
            Self::LogMonomial(d) => &d.y,
        }
    }

    /// Same data with a different right-hand side.
    pub fn with_rhs(&self, y: DVector<f64>) -> Result<Self> {
        if y.len() != self.m() {
            return Err(Error::dims("y", self.m(), y.len()));
        }
        check_finite("y", y.as_slice())?;
        let mut out = self.clone();
        match &mut out {
            Self::Lp(d) | Self::Conic(d) => d.y = y,
            Self::Qp(d) => d.y = y,
            Self::LogMonomial(d) => d.y = y,
        }
        Ok(out)
    }

    /// Whether `X` is the nonnegative orthant (otherwise `X = R^n`).
    pub fn on_orthant(&self) -> bool {
        !matches!(self, Self::Qp(_))
    }

    /// `(A, c)` for the classes with a linear constraint map.
    pub fn linear_parts(&self) -> Option<(&DMatrix<f64>, &DVector<f64>)> {
        match self {
            Self::Lp(d) | Self::Conic(d) => Some((&d.a, &d.c)),
            Self::LogMonomial(d) => Some((&d.a, &d.c)),
            Self::Qp(_) => None,
        }
    }

    /// The objective `f(x)`; `-inf` where a log term is undefined.
    pub fn objective(&self, x: &DVector<f64>) -> f64 {
        match self {
            Self::Lp(d) | Self::Conic(d) => d.c.dot(x),
            Self::Qp(d) => -(x.dot(&(&d.q[0] * x))) - 2.0 * d.c[0].dot(x),
            Self::LogMonomial(d) => {
                let mut v = d.c.dot(x);
                for (bk, xk) in d.b.iter().zip(x.iter()) {
                    if *bk != 0.0 {
                        v += if *xk > 0.0 {
                            bk * xk.ln()
                        } else {
                            f64::NEG_INFINITY
                        };
                    }
                }
                v
            }
        }
    }

    /// The constraint map `ω(x)`.
    pub fn constraint_map(&self, x: &DVector<f64>) -> DVector<f64> {
        match self {
            Self::Lp(d) | Self::Conic(d) => &d.a * x,
            Self::LogMonomial(d) => &d.a * x,
            Self::Qp(d) => DVector::from_fn(d.y.len(), |j, _| {
                x.dot(&(&d.q[j + 1] * x)) + 2.0 * d.c[j + 1].dot(x)
            }),
        }
    }

    /// Membership in `H = { x : ω(x) < y, x ∈ int X }`.
    pub fn is_strictly_feasible_primal(&self, x: &DVector<f64>) -> bool {
        if x.len() != self.n() || x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        if self.on_orthant() && x.iter().any(|v| *v <= 0.0) {
            return false;
        }
        let w = self.constraint_map(x);
        w.iter().zip(self.y().iter()).all(|(wj, yj)| wj < yj)
    }

    /// Closed feasibility `ω(x) ≤ y + tol, x ∈ X` (log-monomial needs `x > 0`).
    pub fn is_feasible_primal(&self, x: &DVector<f64>, tol: f64) -> bool {
        if x.len() != self.n() || x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        let cone_ok = match self {
            Self::Qp(_) => true,
            Self::LogMonomial(d) => {
                x.iter()
                    .zip(d.b.iter())
                    .all(|(xk, bk)| if *bk > 0.0 { *xk > 0.0 } else { *xk >= -tol })
            }
            _ => x.iter().all(|v| *v >= -tol),
        };
        cone_ok
            && self
                .constraint_map(x)
                .iter()
                .zip(self.y().iter())
                .all(|(wj, yj)| *wj <= yj + tol)
    }

    /// `A'λ − c` for the linear-map classes.
    pub fn dual_slack(&self, lambda: &DVector<f64>) -> Option<DVector<f64>> {
        self.linear_parts().map(|(a, c)| a.transpose() * lambda - c)
    }

    /// Membership in the relative interior of the dual domain.
    ///
    /// Linear-map classes: `λ > 0` and `A'λ > c`. Quadratic class: `λ > 0` and
    /// `Q_λ ≻ 0`, decided by a pivoted Cholesky factorization with pivot floor.
    pub fn in_dual_domain(&self, lambda: &DualPoint) -> bool {
        self.in_dual_domain_vec(lambda.as_vector())
    }

    pub(crate) fn in_dual_domain_vec(&self, lambda: &DVector<f64>) -> bool {
        if lambda.len() != self.m() || lambda.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return false;
        }
        match self {
            Self::Qp(d) => PivotedCholesky::new(&d.q_lambda(lambda), PIVOT_FLOOR).is_some(),
            _ => self
                .dual_slack(lambda)
                .map(|s| s.iter().all(|v| *v > 0.0))
                .unwrap_or(false),
        }
    }

    /// Serializes to the canonical JSON problem format.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&RawProblem::from(self)).expect("problem serializes")
    }
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn matrix_from_rows(field: &str, rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let m = rows.len();
    let n = rows.first().map(Vec::len).unwrap_or(0);
    for r in rows {
        if r.len() != n {
            return Err(Error::dims(field, n, r.len()));
        }
    }
    Ok(DMatrix::from_fn(m, n, |i, j| rows[i][j]))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum RawProblem {
    Lp {
        #[serde(rename = "A")]
        a: Vec<Vec<f64>>,
        c: Vec<f64>,
        y: Vec<f64>,
    },
    Conic {
        #[serde(rename = "A")]
        a: Vec<Vec<f64>>,
        c: Vec<f64>,
        y: Vec<f64>,
    },
    Qp {
        #[serde(rename = "Q")]
        q: Vec<Vec<Vec<f64>>>,
        c: Vec<Vec<f64>>,
        y: Vec<f64>,
    },
    Logmonomial {
        #[serde(rename = "A")]
        a: Vec<Vec<f64>>,
        c: Vec<f64>,
        b: Vec<f64>,
        y: Vec<f64>,
    },
}

impl From<&ProblemInstance> for RawProblem {
    fn from(p: &ProblemInstance) -> Self {
        let v = |x: &DVector<f64>| x.iter().copied().collect::<Vec<_>>();
        match p {
            ProblemInstance::Lp(d) => RawProblem::Lp {
                a: rows(&d.a),
                c: v(&d.c),
                y: v(&d.y),
            },
            ProblemInstance::Conic(d) => RawProblem::Conic {
                a: rows(&d.a),
                c: v(&d.c),
                y: v(&d.y),
            },
            ProblemInstance::Qp(d) => RawProblem::Qp {
                q: d.q.iter().map(rows).collect(),
                c: d.c.iter().map(v).collect(),
                y: v(&d.y),
            },
            ProblemInstance::LogMonomial(d) => RawProblem::Logmonomial {
                a: rows(&d.a),
                c: v(&d.c),
                b: v(&d.b),
                y: v(&d.y),
            },
        }
    }
}

/// Parses and validates a problem in the canonical JSON format.
pub fn parse_problem(text: &[u8]) -> Result<ProblemInstance> {
    let raw: RawProblem =
        serde_json::from_slice(text).map_err(|e| Error::MalformedInput(e.to_string()))?;
    let vec = |x: Vec<f64>| DVector::from_vec(x);
    match raw {
        RawProblem::Lp { a, c, y } => {
            ProblemInstance::lp(matrix_from_rows("A", &a)?, vec(c), vec(y))
        }
        RawProblem::Conic { a, c, y } => {
            ProblemInstance::conic(matrix_from_rows("A", &a)?, vec(c), vec(y))
        }
        RawProblem::Logmonomial { a, c, b, y } => {
            ProblemInstance::log_monomial(matrix_from_rows("A", &a)?, vec(c), vec(b), vec(y))
        }
        RawProblem::Qp { q, c, y } => {
            let q = q
                .iter()
                .enumerate()
                .map(|(j, qj)| matrix_from_rows(&format!("Q[{j}]"), qj))
                .collect::<Result<Vec<_>>>()?;
            ProblemInstance::qp(q, c.into_iter().map(vec).collect(), vec(y))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lp1() -> ProblemInstance {
        parse_problem(br#"{"type":"lp","A":[[1.0]],"c":[1.0],"y":[2.0]}"#).unwrap()
    }

    #[test]
    fn parses_smallest_lp() {
        let p = lp1();
        assert_eq!(p.kind(), ProblemKind::Lp);
        assert_eq!((p.m(), p.n()), (1, 1));
    }

    #[test]
    fn rhs_length_conflict_is_dimension_mismatch() {
        let err =
            parse_problem(br#"{"type":"lp","A":[[1.0]],"c":[1.0],"y":[2.0,3.0]}"#).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { ref field, .. } if field == "y"));
    }

    #[test]
    fn negative_b_is_rejected() {
        let err =
            parse_problem(br#"{"type":"logmonomial","A":[[1.0]],"c":[0.0],"b":[-1.0],"y":[1.0]}"#)
                .unwrap_err();
        assert!(matches!(err, Error::InvariantViolation { ref field, .. } if field == "b"));
    }

    #[test]
    fn malformed_and_ragged_inputs() {
        assert!(matches!(
            parse_problem(b"{not json").unwrap_err(),
            Error::MalformedInput(_)
        ));
        assert!(matches!(
            parse_problem(br#"{"type":"simplex","A":[[1.0]],"c":[1.0],"y":[1.0]}"#).unwrap_err(),
            Error::MalformedInput(_)
        ));
        let err =
            parse_problem(br#"{"type":"lp","A":[[1.0,2.0],[1.0]],"c":[1.0,1.0],"y":[1.0,1.0]}"#)
                .unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { ref field, .. } if field == "A"));
    }

    #[test]
    fn empty_problems_are_rejected() {
        let err = parse_problem(br#"{"type":"lp","A":[],"c":[],"y":[]}"#).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation { .. }));
    }

    #[test]
    fn qp_checks_symmetry_and_psd() {
        let asym = br#"{"type":"qp","Q":[[[1.0,0.5],[0.0,1.0]],[[0.0,0.0],[0.0,0.0]]],
            "c":[[0.0,0.0],[1.0,0.0]],"y":[1.0]}"#;
        let err = parse_problem(asym).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation { ref field, .. } if field == "Q[0]"));
        let indef = br#"{"type":"qp","Q":[[[1.0]],[[-1.0]]],"c":[[0.0],[1.0]],"y":[1.0]}"#;
        let err = parse_problem(indef).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation { ref field, .. } if field == "Q[1]"));
        // Q₀ may be indefinite
        let ok = br#"{"type":"qp","Q":[[[-1.0]],[[2.0]]],"c":[[0.0],[0.0]],"y":[1.0]}"#;
        assert!(parse_problem(ok).is_ok());
        let wrong_count = br#"{"type":"qp","Q":[[[1.0]]],"c":[[0.0],[1.0]],"y":[1.0]}"#;
        assert!(matches!(
            parse_problem(wrong_count).unwrap_err(),
            Error::DimensionMismatch { .. }
        ));
    }

    #[test]
    fn strict_primal_feasibility() {
        let p = lp1();
        let x = |v: f64| DVector::from_vec(vec![v]);
        assert!(p.is_strictly_feasible_primal(&x(1.0)));
        assert!(!p.is_strictly_feasible_primal(&x(2.0)));
        assert!(!p.is_strictly_feasible_primal(&x(0.0)));
        assert!(p.is_feasible_primal(&x(2.0), 0.0));
        assert!(p.is_feasible_primal(&x(0.0), 0.0));
    }

    #[test]
    fn dual_domain_membership() {
        let p = lp1();
        assert!(p.in_dual_domain(&DualPoint::from_slice(&[2.0]).unwrap()));
        assert!(!p.in_dual_domain(&DualPoint::from_slice(&[1.0]).unwrap()));
        assert!(!p.in_dual_domain(&DualPoint::from_slice(&[1.0, 2.0]).unwrap()));

        // Q_λ = 1 + 0·λ ≻ 0 for any λ > 0
        let qp =
            parse_problem(br#"{"type":"qp","Q":[[[1.0]],[[0.0]]],"c":[[0.0],[1.0]],"y":[-2.0]}"#)
                .unwrap();
        assert!(qp.in_dual_domain(&DualPoint::from_slice(&[0.5]).unwrap()));
        assert!(!qp.in_dual_domain(&DualPoint::from_slice(&[0.0]).unwrap()));

        // Q_λ = 2λ − 1 ≻ 0 iff λ > 1/2
        let qp =
            parse_problem(br#"{"type":"qp","Q":[[[-1.0]],[[2.0]]],"c":[[0.0],[1.0]],"y":[1.0]}"#)
                .unwrap();
        assert!(!qp.in_dual_domain(&DualPoint::from_slice(&[0.4]).unwrap()));
        assert!(qp.in_dual_domain(&DualPoint::from_slice(&[0.6]).unwrap()));
    }

    #[test]
    fn non_finite_dual_point_is_rejected() {
        assert!(DualPoint::from_slice(&[f64::NAN]).is_err());
    }

    fn arb_lp() -> impl Strategy<Value = ProblemInstance> {
        (1usize..4, 1usize..4).prop_flat_map(|(m, n)| {
            (
                prop::collection::vec(-1e6f64..1e6, m * n),
                prop::collection::vec(-1e6f64..1e6, n),
                prop::collection::vec(-1e6f64..1e6, m),
                prop::bool::ANY,
            )
                .prop_map(move |(a, c, y, conic)| {
                    let a = DMatrix::from_row_slice(m, n, &a);
                    let (c, y) = (DVector::from_vec(c), DVector::from_vec(y));
                    if conic {
                        ProblemInstance::conic(a, c, y).unwrap()
                    } else {
                        ProblemInstance::lp(a, c, y).unwrap()
                    }
                })
        })
    }

    proptest! {
        #[test]
        fn json_round_trip_is_exact(p in arb_lp()) {
            let text = p.to_json();
            let back = parse_problem(text.as_bytes()).unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn strict_feasibility_implies_positive_slack(
            x in prop::collection::vec(-3.0f64..3.0, 2),
        ) {
            let p = ProblemInstance::lp(
                DMatrix::from_row_slice(2, 2, &[1.0, 2.0, -1.0, 1.0]),
                DVector::from_vec(vec![1.0, 1.0]),
                DVector::from_vec(vec![4.0, 1.0]),
            ).unwrap();
            let x = DVector::from_vec(x);
            if p.is_strictly_feasible_primal(&x) {
                let slack = p.y() - p.constraint_map(&x);
                prop_assert!(slack.iter().all(|s| *s > 0.0));
            }
        }

        #[test]
        fn lp_dual_domain_scales_up_when_c_nonpositive(
            l in prop::collection::vec(0.01f64..5.0, 2),
            t in 1.0f64..100.0,
        ) {
            let p = ProblemInstance::lp(
                DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.2, 1.0]),
                DVector::from_vec(vec![-1.0, 0.0]),
                DVector::from_vec(vec![1.0, 1.0]),
            ).unwrap();
            let lam = DualPoint::from_slice(&l).unwrap();
            if p.in_dual_domain(&lam) {
                let scaled = DualPoint::new(lam.as_vector() * t).unwrap();
                prop_assert!(p.in_dual_domain(&scaled));
            }
        }
    }

    #[test]
    fn qp_and_logmonomial_round_trip() {
        let texts: [&[u8]; 2] = [
            br#"{"type":"qp","Q":[[[1.0,0.25],[0.25,2.0]],[[1.0,0.0],[0.0,0.0]]],"c":[[0.1,-0.2],[1.0,0.5]],"y":[0.3]}"#,
            br#"{"type":"logmonomial","A":[[1.0,2.0]],"c":[0.5,0.0],"b":[1.0,0.0],"y":[3.0]}"#,
        ];
        for t in texts {
            let p = parse_problem(t).unwrap();
            assert_eq!(parse_problem(p.to_json().as_bytes()).unwrap(), p);
        }
    }
}
