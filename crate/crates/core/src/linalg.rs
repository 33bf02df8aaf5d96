//! Small dense linear algebra: pivoted LU for (possibly indefinite) metrics,
//! null spaces of constraint systems, and an exact integer rank used as a
//! cross-check on the floating-point one.

use alloc::vec;
use alloc::vec::Vec;

use crate::dual::Scalar;
use crate::error::{Error, Result};
use crate::tensor::{TensorValue, Variance};

/// Metrics with `|det g|` at or below this are treated as degenerate.
pub const DET_TOL: f64 = 1e-10;

/// Default relative cutoff for [`null_space`].
pub const NULL_SPACE_TOL: f64 = 1e-9;

/// LU factorization with partial pivoting of a square row-major matrix.
///
/// Valid for symmetric indefinite matrices, which is all a semi-Riemannian
/// metric needs.
#[derive(Clone, Debug)]
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    det: f64,
}

impl Lu {
    pub fn factor(a: &[f64], n: usize) -> Result<Self> {
        if a.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: a.len(),
            });
        }
        let mut lu = a.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut det = 1.0;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| lu[r * n + col].abs().total_cmp(&lu[s * n + col].abs()))
                .unwrap_or(col);
            if lu[pivot * n + col] == 0.0 {
                return Err(Error::NearSingularMetric {
                    point: Vec::new(),
                    det: 0.0,
                });
            }
            if pivot != col {
                for k in 0..n {
                    lu.swap(pivot * n + k, col * n + k);
                }
                perm.swap(pivot, col);
                det = -det;
            }
            let p = lu[col * n + col];
            det *= p;
            for r in col + 1..n {
                let factor = lu[r * n + col] / p;
                lu[r * n + col] = factor;
                for k in col + 1..n {
                    lu[r * n + k] -= factor * lu[col * n + k];
                }
            }
        }
        Ok(Lu { n, lu, perm, det })
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for r in 0..n {
            for k in 0..r {
                x[r] -= self.lu[r * n + k] * x[k];
            }
        }
        for r in (0..n).rev() {
            for k in r + 1..n {
                x[r] -= self.lu[r * n + k] * x[k];
            }
            x[r] /= self.lu[r * n + r];
        }
        x
    }
}

/// Solves `g·x = rhs` for a symmetric, possibly indefinite, metric `g`.
pub fn solve_spd(g: &TensorValue, rhs: &[f64]) -> Result<Vec<f64>> {
    if g.rank() != 2 || g.variance() != [Variance::Lower, Variance::Lower] {
        return Err(Error::InvalidArgument("metric must be a rank-2 covariant tensor"));
    }
    let n = g.dims()[0];
    if g.dims()[1] != n || rhs.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rhs.len(),
        });
    }
    let lu = Lu::factor(g.data(), n)?;
    if lu.det().abs() <= DET_TOL {
        return Err(Error::NearSingularMetric {
            point: Vec::new(),
            det: lu.det(),
        });
    }
    Ok(lu.solve(rhs))
}

/// Inverse of a small square matrix over any [`Scalar`] (pivoting on the real part).
pub fn inverse<S: Scalar>(a: &[S], n: usize) -> Result<Vec<S>> {
    let mut m = a.to_vec();
    let mut inv: Vec<S> = (0..n * n)
        .map(|k| if k / n == k % n { S::one() } else { S::zero() })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| {
                m[r * n + col]
                    .value()
                    .abs()
                    .total_cmp(&m[s * n + col].value().abs())
            })
            .unwrap_or(col);
        if m[pivot * n + col].value().abs() <= f64::EPSILON {
            return Err(Error::InvalidArgument("matrix is singular"));
        }
        if pivot != col {
            for k in 0..n {
                m.swap(pivot * n + k, col * n + k);
                inv.swap(pivot * n + k, col * n + k);
            }
        }
        let p = m[col * n + col].recip();
        for k in 0..n {
            m[col * n + k] = m[col * n + k] * p;
            inv[col * n + k] = inv[col * n + k] * p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = m[r * n + col];
            for k in 0..n {
                m[r * n + k] = m[r * n + k] - factor * m[col * n + k];
                inv[r * n + k] = inv[r * n + k] - factor * inv[col * n + k];
            }
        }
    }
    Ok(inv)
}

/// Row-major product of two `n×n` matrices.
pub fn matmul<S: Scalar>(a: &[S], b: &[S], n: usize) -> Vec<S> {
    let mut out = vec![S::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            for j in 0..n {
                out[i * n + j] = out[i * n + j] + aik * b[k * n + j];
            }
        }
    }
    out
}

/// Determinant via [`Lu`]; zero for exactly singular input.
pub fn determinant(a: &[f64], n: usize) -> f64 {
    Lu::factor(a, n).map(|lu| lu.det()).unwrap_or(0.0)
}

/// A homogeneous linear system `A·x = 0` given by sparse rows.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearConstraintSystem {
    n_unknowns: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

impl LinearConstraintSystem {
    pub fn new(n_unknowns: usize) -> Self {
        LinearConstraintSystem {
            n_unknowns,
            rows: Vec::new(),
        }
    }

    pub fn n_unknowns(&self) -> usize {
        self.n_unknowns
    }

    pub fn rows(&self) -> &[Vec<(usize, f64)>] {
        &self.rows
    }

    /// Appends a row, merging repeated indices and dropping zero coefficients.
    pub fn push_row(&mut self, entries: impl IntoIterator<Item = (usize, f64)>) {
        let mut row: Vec<(usize, f64)> = Vec::new();
        for (i, c) in entries {
            assert!(i < self.n_unknowns, "unknown index out of range");
            match row.iter_mut().find(|(j, _)| *j == i) {
                Some(slot) => slot.1 += c,
                None => row.push((i, c)),
            }
        }
        row.retain(|&(_, c)| c != 0.0);
        row.sort_by_key(|&(i, _)| i);
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: &LinearConstraintSystem) {
        assert_eq!(self.n_unknowns, other.n_unknowns);
        self.rows.extend(other.rows.iter().cloned());
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .map(|row| {
                let mut dense = vec![0.0; self.n_unknowns];
                for &(i, c) in row {
                    dense[i] = c;
                }
                dense
            })
            .collect()
    }

    /// Largest `|row · x|` over all rows.
    pub fn max_residual(&self, x: &[f64]) -> f64 {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(i, c)| c * x[i]).sum::<f64>().abs())
            .fold(0.0, f64::max)
    }
}

/// Orthonormal basis of a null space.
#[derive(Clone, Debug, PartialEq)]
pub struct NullSpace {
    pub dimension: usize,
    pub basis: Vec<Vec<f64>>,
}

/// Gauss-Jordan elimination, column by column with partial pivoting.
/// Returns the reduced rows (pivot entries 1) and the pivot column of each.
fn reduce(sys: &LinearConstraintSystem, tol: f64) -> (Vec<Vec<f64>>, Vec<usize>) {
    let n = sys.n_unknowns;
    let mut a = sys.to_dense();
    a.retain(|row| row.iter().any(|&v| v != 0.0));
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let cutoff = tol * scale;
    let mut pivot_cols = Vec::new();
    let m = a.len();
    for col in 0..n {
        let r = pivot_cols.len();
        if r == m {
            break;
        }
        let (pr, best) = (r..m)
            .map(|i| (i, a[i][col].abs()))
            .fold((r, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= cutoff {
            continue;
        }
        a.swap(r, pr);
        let inv = 1.0 / a[r][col];
        a[r].iter_mut().for_each(|v| *v *= inv);
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[col];
            if f != 0.0 {
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
                row[col] = 0.0;
            }
        }
        pivot_cols.push(col);
    }
    a.truncate(pivot_cols.len());
    (a, pivot_cols)
}

/// Numerical rank with cutoff `tol` relative to the largest coefficient.
pub fn rank(sys: &LinearConstraintSystem, tol: f64) -> usize {
    reduce(sys, tol).1.len()
}

/// Orthonormal basis of `{x : A·x = 0}`.
pub fn null_space(sys: &LinearConstraintSystem, tol: f64) -> Result<NullSpace> {
    if sys.n_unknowns == 0 {
        return Err(Error::DegenerateSystem);
    }
    if tol <= 0.0 || tol.is_nan() {
        return Err(Error::InvalidArgument("null-space tolerance must be positive"));
    }
    let n = sys.n_unknowns;
    let (reduced, pivots) = reduce(sys, tol);
    let mut is_pivot = vec![false; n];
    pivots.iter().for_each(|&c| is_pivot[c] = true);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0.0; n];
        v[free] = 1.0;
        for (row, &pc) in reduced.iter().zip(&pivots) {
            v[pc] = -row[free];
        }
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for b in &basis {
                let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
            }
        }
        let norm = libm::sqrt(v.iter().map(|x| x * x).sum::<f64>());
        v.iter_mut().for_each(|x| *x /= norm);
        basis.push(v);
    }
    Ok(NullSpace {
        dimension: basis.len(),
        basis,
    })
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Exact rank over ℚ of a system whose coefficients are all integers.
///
/// Fraction-free elimination in `i128`, dividing each updated row by the
/// gcd of its entries to keep growth in check.
pub fn exact_rank(sys: &LinearConstraintSystem) -> Result<usize> {
    let n = sys.n_unknowns;
    let mut rows: Vec<Vec<i128>> = Vec::with_capacity(sys.rows.len());
    for row in &sys.rows {
        let mut dense = vec![0i128; n];
        for &(i, c) in row {
            if libm::trunc(c) != c || c.abs() > 1e15 {
                return Err(Error::InvalidArgument(
                    "exact rank needs integer coefficients",
                ));
            }
            dense[i] = c as i128;
        }
        if dense.iter().any(|&v| v != 0) {
            rows.push(dense);
        }
    }
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        let a = pivot_row[col];
        for row in rows.iter_mut().skip(rank + 1) {
            let b = row[col];
            if b == 0 {
                continue;
            }
            let g = gcd(a, b);
            let (fa, fb) = (a / g, b / g);
            let mut content = 0i128;
            for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                let lhs = v.checked_mul(fa).ok_or(Error::ExactArithmeticOverflow)?;
                let rhs = pv.checked_mul(fb).ok_or(Error::ExactArithmeticOverflow)?;
                *v = lhs.checked_sub(rhs).ok_or(Error::ExactArithmeticOverflow)?;
                content = gcd(content, *v);
            }
            if content > 1 {
                row.iter_mut().for_each(|v| *v /= content);
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    Ok(rank)
}
