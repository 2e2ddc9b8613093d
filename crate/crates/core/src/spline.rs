//! Not-a-knot cubic spline interpolation.

use crate::error::{Error, Result};

/// Interpolating cubic spline whose third derivative is continuous across
/// the second and penultimate knots.
#[derive(Debug, Clone)]
pub struct NotAKnotSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Second derivative at each knot.
    curvature: Vec<f64>,
}

/// Dense Gaussian elimination with partial pivoting; `a` is row-major n×n.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        if a[pivot][col].abs() < 1e-300 {
            return Err(Error::InvalidParameter("singular spline system".into()));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Ok(x)
}

impl NotAKnotSpline {
    /// Requires at least four strictly increasing knots.
    pub fn new(xs: &[f64], ys: &[f64]) -> Result<Self> {
        let n = xs.len();
        if n != ys.len() || n < 4 {
            return Err(Error::InvalidParameter(format!(
                "not-a-knot spline needs >= 4 matching points, got {} x and {} y",
                n,
                ys.len()
            )));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("spline knots must increase".into()));
        }
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let mut a = vec![vec![0.0; n]; n];
        let mut b = vec![0.0; n];
        // jump in third derivative vanishes at x[1] and x[n-2]
        a[0][0] = h[1];
        a[0][1] = -(h[0] + h[1]);
        a[0][2] = h[0];
        a[n - 1][n - 3] = h[n - 2];
        a[n - 1][n - 2] = -(h[n - 3] + h[n - 2]);
        a[n - 1][n - 1] = h[n - 3];
        for i in 1..n - 1 {
            a[i][i - 1] = h[i - 1];
            a[i][i] = 2.0 * (h[i - 1] + h[i]);
            a[i][i + 1] = h[i];
            b[i] = 6.0 * ((ys[i + 1] - ys[i]) / h[i] - (ys[i] - ys[i - 1]) / h[i - 1]);
        }
        let curvature = solve_dense(a, b)?;
        Ok(NotAKnotSpline {
            xs: xs.to_vec(),
            ys: ys.to_vec(),
            curvature,
        })
    }

    fn segment_of(&self, x: f64) -> usize {
        let last = self.xs.len() - 2;
        self.xs[1..=last]
            .iter()
            .position(|&k| x < k)
            .unwrap_or(last)
    }

    fn eval_segment(&self, i: usize, x: f64) -> f64 {
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let (m0, m1) = (self.curvature[i], self.curvature[i + 1]);
        let h = x1 - x0;
        let (l, r) = (x1 - x, x - x0);
        m0 * l.powi(3) / (6.0 * h)
            + m1 * r.powi(3) / (6.0 * h)
            + (self.ys[i] / h - m0 * h / 6.0) * l
            + (self.ys[i + 1] / h - m1 * h / 6.0) * r
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_segment(self.segment_of(x), x)
    }

    /// Root of the cubic piece on knot interval `[xs[i], xs[i+1]]` by
    /// bisection to `tol`.
    pub fn segment_root(&self, i: usize, tol: f64) -> Result<f64> {
        let (mut lo, mut hi) = (self.xs[i], self.xs[i + 1]);
        let (mut flo, fhi) = (self.ys[i], self.ys[i + 1]);
        if flo == 0.0 {
            return Ok(lo);
        }
        if fhi == 0.0 {
            return Ok(hi);
        }
        if flo.signum() == fhi.signum() {
            return Err(Error::NoRootInBracket { lower: lo, upper: hi });
        }
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let fm = self.eval_segment(i, mid);
            if fm == 0.0 {
                return Ok(mid);
            }
            if fm.signum() == flo.signum() {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    pub fn knots(&self) -> &[f64] {
        &self.xs
    }
}
