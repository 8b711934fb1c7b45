//! Small reference instances shared by tests, benches and the CLI examples.

use nalgebra::{DMatrix, DVector};

use crate::problems::ProblemInstance;

fn m(rows: usize, cols: usize, data: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(rows, cols, data)
}

fn v(data: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(data)
}

/// max x s.t. x ≤ 2, x ≥ 0. Value 2.
pub fn lp_1d() -> ProblemInstance {
    ProblemInstance::lp(m(1, 1, &[1.0]), v(&[1.0]), v(&[2.0])).unwrap()
}

/// max −x s.t. x ≤ 1, x ≥ 0. Value 0; `g̃_p(y) = (1 − e^{−py})/p` on `y ≥ 0`.
pub fn lp_neg_1d() -> ProblemInstance {
    ProblemInstance::lp(m(1, 1, &[1.0]), v(&[-1.0]), v(&[1.0])).unwrap()
}

/// max x₁ + x₂ s.t. x₁ + 2x₂ ≤ 4, 3x₁ + x₂ ≤ 6. Value 2.8 at (1.6, 1.2).
pub fn lp_2x2() -> ProblemInstance {
    ProblemInstance::lp(lp_2x2_a(), v(&[1.0, 1.0]), v(&[4.0, 6.0])).unwrap()
}

/// The same data as [`lp_2x2`] tagged as a conic program over the orthant.
pub fn conic_2x2() -> ProblemInstance {
    ProblemInstance::conic(lp_2x2_a(), v(&[1.0, 1.0]), v(&[4.0, 6.0])).unwrap()
}

fn lp_2x2_a() -> DMatrix<f64> {
    m(2, 2, &[1.0, 2.0, 3.0, 1.0])
}

/// An LP and the log-monomial program with identical data and `b = 0`.
pub fn lp_and_zero_b_log_monomial() -> (ProblemInstance, ProblemInstance) {
    let a = lp_2x2_a();
    let c = v(&[1.0, 1.0]);
    let y = v(&[4.0, 6.0]);
    (
        ProblemInstance::lp(a.clone(), c.clone(), y.clone()).unwrap(),
        ProblemInstance::log_monomial(a, c, v(&[0.0, 0.0]), y).unwrap(),
    )
}

/// max −x² s.t. 2x ≤ −2 on `R`. Value −1 at x = −1; `h₁(λ) = λ² − 2λ`.
pub fn qp_1d() -> ProblemInstance {
    ProblemInstance::qp(
        vec![m(1, 1, &[1.0]), m(1, 1, &[0.0])],
        vec![v(&[0.0]), v(&[1.0])],
        v(&[-2.0]),
    )
    .unwrap()
}

/// Indefinite objective, `Q_λ = 2λ − 1`: singular at λ = 1/2.
pub fn qp_singular_face() -> ProblemInstance {
    ProblemInstance::qp(
        vec![m(1, 1, &[-1.0]), m(1, 1, &[2.0])],
        vec![v(&[0.0]), v(&[0.0])],
        v(&[1.0]),
    )
    .unwrap()
}

/// Two variables, one quadratic and one linear constraint.
pub fn qp_2d() -> ProblemInstance {
    ProblemInstance::qp(
        vec![
            m(2, 2, &[2.0, 0.5, 0.5, 1.0]),
            m(2, 2, &[1.0, 0.0, 0.0, 0.5]),
            m(2, 2, &[0.0, 0.0, 0.0, 0.0]),
        ],
        vec![v(&[0.2, -0.3]), v(&[0.1, 0.2]), v(&[0.5, 0.5])],
        v(&[1.0, 1.0]),
    )
    .unwrap()
}

/// max ln x s.t. x ≤ 1. Value 0 at x = 1; `h₁(λ) = λ − ln λ − 1`.
pub fn log_monomial_1d() -> ProblemInstance {
    ProblemInstance::log_monomial(m(1, 1, &[1.0]), v(&[0.0]), v(&[1.0]), v(&[1.0])).unwrap()
}

pub fn log_monomial_2d() -> ProblemInstance {
    ProblemInstance::log_monomial(
        m(2, 2, &[1.0, 2.0, 2.0, 1.0]),
        v(&[0.1, -0.2]),
        v(&[1.0, 0.5]),
        v(&[3.0, 3.0]),
    )
    .unwrap()
}

/// One instance per class, used by randomized derivative and duality tests.
pub fn random_test_instances() -> Vec<ProblemInstance> {
    vec![lp_2x2(), conic_2x2(), qp_2d(), log_monomial_2d()]
}
