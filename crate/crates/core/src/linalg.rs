//! Small dense helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};

/// Pivot floor used when deciding positive definiteness.
pub const PIVOT_FLOOR: f64 = 1e-12;

/// Cholesky factorization with diagonal (symmetric) pivoting: `P' A P = L L'`.
#[derive(Debug, Clone)]
pub struct PivotedCholesky {
    l: DMatrix<f64>,
    perm: Vec<usize>,
}

impl PivotedCholesky {
    /// Factorizes a symmetric matrix. Fails when a pivot drops to `floor` or below.
    pub fn new(a: &DMatrix<f64>, floor: f64) -> Option<Self> {
        let n = a.nrows();
        debug_assert_eq!(n, a.ncols());
        let mut w = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            // largest remaining diagonal entry
            let mut piv = k;
            for i in k + 1..n {
                if w[(i, i)] > w[(piv, piv)] {
                    piv = i;
                }
            }
            if piv != k {
                w.swap_rows(k, piv);
                w.swap_columns(k, piv);
                perm.swap(k, piv);
            }
            let d = w[(k, k)];
            if !(d > floor) || !d.is_finite() {
                return None;
            }
            let d = d.sqrt();
            w[(k, k)] = d;
            for i in k + 1..n {
                w[(i, k)] /= d;
            }
            for j in k + 1..n {
                let ljk = w[(j, k)];
                for i in j..n {
                    let lik = w[(i, k)];
                    w[(i, j)] -= lik * ljk;
                }
            }
        }
        let l = DMatrix::from_fn(n, n, |i, j| if i >= j { w[(i, j)] } else { 0.0 });
        Some(Self { l, perm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// `ln det A`, summed in log domain from the factor diagonal.
    pub fn ln_det(&self) -> f64 {
        2.0 * (0..self.dim()).map(|i| self.l[(i, i)].ln()).sum::<f64>()
    }

    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        let n = self.dim();
        let mut z = DVector::from_fn(n, |i, _| b[self.perm[i]]);
        // forward: L w = P' b
        for i in 0..n {
            let mut s = z[i];
            for k in 0..i {
                s -= self.l[(i, k)] * z[k];
            }
            z[i] = s / self.l[(i, i)];
        }
        // backward: L' v = w
        for i in (0..n).rev() {
            let mut s = z[i];
            for k in i + 1..n {
                s -= self.l[(k, i)] * z[k];
            }
            z[i] = s / self.l[(i, i)];
        }
        let mut x = DVector::zeros(n);
        for i in 0..n {
            x[self.perm[i]] = z[i];
        }
        x
    }

    pub fn solve_matrix(&self, b: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(b.nrows(), b.ncols());
        for j in 0..b.ncols() {
            let col = self.solve(&b.column(j).into_owned());
            out.set_column(j, &col);
        }
        out
    }

    pub fn inverse(&self) -> DMatrix<f64> {
        self.solve_matrix(&DMatrix::identity(self.dim(), self.dim()))
    }
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(a: &DMatrix<f64>) -> f64 {
    a.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Largest absolute entry; used as a cheap matrix scale.
pub fn max_abs(a: &DMatrix<f64>) -> f64 {
    a.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Solves a square system by Gaussian elimination with partial pivoting.
/// Returns `None` when a pivot falls below `tol` times the largest entry.
pub fn solve_dense(a: &DMatrix<f64>, b: &DVector<f64>, tol: f64) -> Option<DVector<f64>> {
    let n = a.nrows();
    let scale = max_abs(a).max(f64::MIN_POSITIVE);
    let mut m = a.clone();
    let mut r = b.clone();
    for k in 0..n {
        let (piv, pval) = (k..n)
            .map(|i| (i, m[(i, k)].abs()))
            .fold((k, -1.0), |acc, v| if v.1 > acc.1 { v } else { acc });
        if pval <= tol * scale {
            return None;
        }
        if piv != k {
            m.swap_rows(k, piv);
            r.swap_rows(k, piv);
        }
        for i in k + 1..n {
            let f = m[(i, k)] / m[(k, k)];
            if f != 0.0 {
                for j in k..n {
                    m[(i, j)] -= f * m[(k, j)];
                }
                r[i] -= f * r[k];
            }
        }
    }
    let mut x = DVector::zeros(n);
    for i in (0..n).rev() {
        let mut s = r[i];
        for j in i + 1..n {
            s -= m[(i, j)] * x[j];
        }
        x[i] = s / m[(i, i)];
    }
    Some(x)
}

/// Numerically stable `ln(exp(a) + exp(b))`, treating `-inf` as zero mass.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln Σ exp(v_i)`; never exponentiates above the running maximum.
pub fn log_sum_exp<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let vals: Vec<f64> = values.into_iter().collect();
    let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max.is_infinite() {
        return max;
    }
    let s: f64 = vals.iter().map(|v| (v - max).exp()).sum();
    max + s.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_solves_and_reports_log_det() {
        let a = DMatrix::from_row_slice(3, 3, &[4.0, 1.0, 0.5, 1.0, 9.0, 2.0, 0.5, 2.0, 3.0]);
        let ch = PivotedCholesky::new(&a, PIVOT_FLOOR).unwrap();
        let b = DVector::from_vec(vec![1.0, -2.0, 0.25]);
        let x = ch.solve(&b);
        assert!((&a * &x - &b).norm() < 1e-13);
        let det = a.determinant();
        assert!((ch.ln_det() - det.ln()).abs() < 1e-13);
        assert!((ch.inverse() * &a - DMatrix::identity(3, 3)).norm() < 1e-13);
    }

    #[test]
    fn cholesky_rejects_indefinite_and_semidefinite() {
        let indef = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(PivotedCholesky::new(&indef, PIVOT_FLOOR).is_none());
        let semi = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(PivotedCholesky::new(&semi, PIVOT_FLOOR).is_none());
    }

    #[test]
    fn dense_solve_detects_singularity() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(solve_dense(&a, &DVector::from_vec(vec![1.0, 1.0]), 1e-12).is_none());
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let x = solve_dense(&a, &DVector::from_vec(vec![3.0, 4.0]), 1e-12).unwrap();
        assert_eq!(x.as_slice(), &[4.0, 3.0]);
    }

    #[test]
    fn log_sum_exp_shift_invariance() {
        let v = [-3.0, 0.5, 2.0, f64::NEG_INFINITY];
        let base = log_sum_exp(v);
        for k in [500.0, -500.0] {
            let shifted = log_sum_exp(v.iter().map(|x| x + k)) - k;
            assert!((shifted - base).abs() <= 1e-12 * base.abs());
        }
        assert_eq!(log_sum_exp([f64::NEG_INFINITY; 3]), f64::NEG_INFINITY);
        assert!((log_add_exp(0.0, 0.0) - 2f64.ln()).abs() < 1e-15);
    }
}
