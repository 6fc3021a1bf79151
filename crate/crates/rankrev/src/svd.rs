//! Self-contained singular value decomposition and the volume primitive.
//!
//! The SVD reduces the input to upper bidiagonal form with Householder
//! reflectors and then runs the implicit-shift (Golub-Kahan) QR iteration
//! on the bidiagonal, accumulating the rotations into the singular vector
//! factors. No external numerical library is involved.

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, EPS};

/// Hard cap on implicit QR steps, proportional to the bidiagonal size.
const MAX_QR_STEPS_PER_DIM: usize = 80;

/// Full (thin) SVD: `min(m, n)` singular triplets.
#[derive(Debug, Clone)]
pub struct SvdResult {
    /// Nonincreasing, nonnegative singular values.
    pub singular_values: Vec<f64>,
    /// `m x min(m, n)` matrix with orthonormal columns.
    pub left_vectors: DenseMatrix,
    /// `n x min(m, n)` matrix with orthonormal columns.
    pub right_vectors: DenseMatrix,
}

impl SvdResult {
    /// `U * diag(sigma) * V^T`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let k = self.singular_values.len();
        let mut scaled = self.left_vectors.clone();
        for j in 0..k {
            for i in 0..scaled.rows() {
                scaled[(i, j)] *= self.singular_values[j];
            }
        }
        scaled.matmul(&self.right_vectors.transpose())
    }

    /// Numerical rank: count of singular values above
    /// `eps * sigma_1 * max(m, n)`.
    pub fn numerical_rank(&self) -> usize {
        let m = self.left_vectors.rows();
        let n = self.right_vectors.rows();
        let tol = singular_value_floor(&self.singular_values, m, n);
        self.singular_values.iter().filter(|&&s| s > tol).count()
    }
}

/// Threshold below which singular values are treated as exactly zero for
/// rank decisions: `eps * sigma_1 * max(m, n)`.
pub fn singular_value_floor(singular_values: &[f64], m: usize, n: usize) -> f64 {
    let sigma1 = singular_values.first().copied().unwrap_or(0.0);
    EPS * sigma1 * m.max(n) as f64
}

/// Compute the SVD of `a`.
///
/// Errors with [`Error::SvdNonConvergence`] if the QR iteration exceeds its
/// step cap, and [`Error::InvalidArgument`] on non-finite input.
pub fn svd(a: &DenseMatrix) -> Result<SvdResult> {
    if !a.is_finite() {
        return Err(Error::InvalidArgument(
            "svd input contains NaN or infinity".into(),
        ));
    }
    let (m, n) = (a.rows(), a.cols());
    if m == 0 || n == 0 {
        return Ok(SvdResult {
            singular_values: vec![],
            left_vectors: DenseMatrix::zeros(m, 0),
            right_vectors: DenseMatrix::zeros(n, 0),
        });
    }
    if m < n {
        let t = svd(&a.transpose())?;
        return Ok(SvdResult {
            singular_values: t.singular_values,
            left_vectors: t.right_vectors,
            right_vectors: t.left_vectors,
        });
    }

    // m >= n from here on. Entries far outside [1e-100, 1e100] would
    // underflow or overflow the squared quantities inside the reduction,
    // so such input is rescaled and the singular values scaled back.
    let magnitude = a.max_abs();
    if magnitude > 0.0 && !(1e-100..=1e100).contains(&magnitude) {
        let mut result = svd(&a.scale(1.0 / magnitude))?;
        for s in &mut result.singular_values {
            *s *= magnitude;
        }
        return Ok(result);
    }

    let mut work = a.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n.saturating_sub(1)];
    let mut tau_left = vec![0.0; n];
    let mut tau_right = vec![0.0; n.saturating_sub(1)];
    bidiagonalize(&mut work, &mut d, &mut e, &mut tau_left, &mut tau_right);

    let mut u = accumulate_left(&work, &tau_left);
    let mut v = accumulate_right(&work, &tau_right);

    bidiagonal_qr(&mut d, &mut e, &mut u, &mut v)?;

    Ok(SvdResult {
        singular_values: d,
        left_vectors: u,
        right_vectors: v,
    })
}

/// Volume of a matrix: the product of all `min(m, n)` singular values.
/// Equals `|det|` for square input and 0 for rank-deficient input.
///
/// A competing convention for rectangular matrices uses `det(A^T A)`; this
/// crate always takes the plain product of singular values.
pub fn volume(a: &DenseMatrix) -> Result<f64> {
    Ok(svd(a)?.singular_values.iter().product())
}

/// Overflow-safe volume: the sum of `ln sigma_j`, `-inf` when the matrix is
/// numerically rank deficient (any singular value at or below the
/// [`singular_value_floor`]).
pub fn log_volume(a: &DenseMatrix) -> Result<f64> {
    let result = svd(a)?;
    Ok(log_volume_of_singular_values(
        &result.singular_values,
        a.rows(),
        a.cols(),
    ))
}

/// `log_volume` evaluated on precomputed singular values.
pub fn log_volume_of_singular_values(singular_values: &[f64], m: usize, n: usize) -> f64 {
    let floor = singular_value_floor(singular_values, m, n);
    let mut acc = 0.0;
    for &s in singular_values {
        if s <= floor {
            return f64::NEG_INFINITY;
        }
        acc += s.ln();
    }
    acc
}

// ── Householder bidiagonalization ───────────────────────────────────

/// Generate a Householder reflector for `x`: on return `x[0]` is unused,
/// `x[1..]` holds the tail of `v` (with implicit `v[0] = 1`), and the
/// function returns `(beta, tau)` so that `(I - tau*v*v^T) x = beta*e1`.
pub(crate) fn make_reflector(x: &mut [f64]) -> (f64, f64) {
    let alpha = x[0];
    let sigma: f64 = x[1..].iter().map(|t| t * t).sum();
    if sigma == 0.0 {
        return (alpha, 0.0);
    }
    let norm = (alpha * alpha + sigma).sqrt();
    let beta = if alpha <= 0.0 { norm } else { -norm };
    let v0 = alpha - beta;
    for t in &mut x[1..] {
        *t /= v0;
    }
    let tau = -v0 / beta;
    (beta, tau)
}

/// Reduce `work` (m >= n) to upper bidiagonal form. Reflector tails are
/// stored in place of the annihilated entries; `d` and `e` receive the
/// bidiagonal.
fn bidiagonalize(
    work: &mut DenseMatrix,
    d: &mut [f64],
    e: &mut [f64],
    tau_left: &mut [f64],
    tau_right: &mut [f64],
) {
    let (m, n) = (work.rows(), work.cols());
    for j in 0..n {
        // Left reflector annihilating work[j+1.., j].
        let mut col: Vec<f64> = (j..m).map(|i| work[(i, j)]).collect();
        let (beta, tau) = make_reflector(&mut col);
        d[j] = beta;
        tau_left[j] = tau;
        for (offset, &v) in col.iter().enumerate().skip(1) {
            work[(j + offset, j)] = v;
        }
        if tau != 0.0 {
            // Apply I - tau*v*v^T to the trailing columns.
            for c in j + 1..n {
                let mut dot = work[(j, c)];
                for i in j + 1..m {
                    dot += work[(i, j)] * work[(i, c)];
                }
                dot *= tau;
                work[(j, c)] -= dot;
                for i in j + 1..m {
                    let v = work[(i, j)];
                    work[(i, c)] -= dot * v;
                }
            }
        }

        if j + 1 < n {
            // Right reflector annihilating work[j, j+2..].
            let mut row: Vec<f64> = (j + 1..n).map(|c| work[(j, c)]).collect();
            let (beta, tau) = make_reflector(&mut row);
            e[j] = beta;
            tau_right[j] = tau;
            for (offset, &v) in row.iter().enumerate().skip(1) {
                work[(j, j + 1 + offset)] = v;
            }
            if tau != 0.0 {
                for r in j + 1..m {
                    let mut dot = work[(r, j + 1)];
                    for c in j + 2..n {
                        dot += work[(j, c)] * work[(r, c)];
                    }
                    dot *= tau;
                    work[(r, j + 1)] -= dot;
                    for c in j + 2..n {
                        let v = work[(j, c)];
                        work[(r, c)] -= dot * v;
                    }
                }
            }
        }
    }
}

/// Backward accumulation of the left reflectors into a thin `m x n` factor.
fn accumulate_left(work: &DenseMatrix, tau_left: &[f64]) -> DenseMatrix {
    let (m, n) = (work.rows(), work.cols());
    let mut u = DenseMatrix::identity(m, n);
    for j in (0..n).rev() {
        let tau = tau_left[j];
        if tau == 0.0 {
            continue;
        }
        for c in j..n {
            let mut dot = u[(j, c)];
            for i in j + 1..m {
                dot += work[(i, j)] * u[(i, c)];
            }
            dot *= tau;
            u[(j, c)] -= dot;
            for i in j + 1..m {
                let v = work[(i, j)];
                u[(i, c)] -= dot * v;
            }
        }
    }
    u
}

/// Backward accumulation of the right reflectors into an `n x n` factor.
fn accumulate_right(work: &DenseMatrix, tau_right: &[f64]) -> DenseMatrix {
    let n = work.cols();
    let mut v = DenseMatrix::identity(n, n);
    if n < 2 {
        return v;
    }
    for j in (0..n - 1).rev() {
        let tau = tau_right[j];
        if tau == 0.0 {
            continue;
        }
        // Reflector vector lives in row j, entries j+1..n (v[j+1] = 1).
        // Columns left of j+1 are still unit vectors untouched by later
        // reflectors, so they need no update.
        for c in j + 1..n {
            let mut dot = v[(j + 1, c)];
            for r in j + 2..n {
                dot += work[(j, r)] * v[(r, c)];
            }
            dot *= tau;
            v[(j + 1, c)] -= dot;
            for r in j + 2..n {
                let w = work[(j, r)];
                v[(r, c)] -= dot * w;
            }
        }
    }
    v
}

// ── Implicit-shift QR on the bidiagonal ─────────────────────────────

/// Givens rotation with `c*a + s*b = r`, `-s*a + c*b = 0`.
fn givens(a: f64, b: f64) -> (f64, f64, f64) {
    if b == 0.0 {
        (1.0, 0.0, a)
    } else if a == 0.0 {
        (0.0, 1.0, b)
    } else {
        let r = a.hypot(b);
        (a / r, b / r, r)
    }
}

fn rotate_cols(mat: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64) {
    for i in 0..mat.rows() {
        let vp = mat[(i, p)];
        let vq = mat[(i, q)];
        mat[(i, p)] = c * vp + s * vq;
        mat[(i, q)] = c * vq - s * vp;
    }
}

/// Diagonalize the upper bidiagonal `(d, e)`, rotating `u` and `v` along.
/// On success `d` holds nonnegative singular values sorted descending.
fn bidiagonal_qr(
    d: &mut [f64],
    e: &mut [f64],
    u: &mut DenseMatrix,
    v: &mut DenseMatrix,
) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let bnorm = d
        .iter()
        .chain(e.iter())
        .fold(0.0_f64, |acc, x| acc.max(x.abs()));
    if bnorm == 0.0 {
        return Ok(());
    }
    let zero_tol = EPS * bnorm;
    let max_steps = MAX_QR_STEPS_PER_DIM * n;
    let mut steps = 0usize;
    let mut hi = n - 1;

    'outer: while hi > 0 {
        // Deflate converged trailing entries.
        let negligible =
            |ev: f64, da: f64, db: f64| ev.abs() <= EPS * (da.abs() + db.abs()) || ev.abs() <= zero_tol;
        if negligible(e[hi - 1], d[hi - 1], d[hi]) {
            e[hi - 1] = 0.0;
            hi -= 1;
            continue;
        }
        // Active block lo..=hi with nonzero superdiagonal.
        let mut lo = hi - 1;
        while lo > 0 {
            if negligible(e[lo - 1], d[lo - 1], d[lo]) {
                e[lo - 1] = 0.0;
                break;
            }
            lo -= 1;
        }

        steps += 1;
        if steps > max_steps {
            return Err(Error::SvdNonConvergence { max_steps });
        }

        // A negligible diagonal entry decouples the block: chase the
        // adjacent superdiagonal entry away before shifting.
        for idx in lo..hi {
            if d[idx].abs() <= zero_tol {
                d[idx] = 0.0;
                // Left rotations push e[idx] down and off the block.
                let mut z = e[idx];
                e[idx] = 0.0;
                for j in idx + 1..=hi {
                    let (c, s, r) = givens(d[j], z);
                    d[j] = r;
                    if j < hi {
                        z = -s * e[j];
                        e[j] *= c;
                    }
                    // Row mix (j, idx) corresponds to U := U * R on
                    // columns (j, idx).
                    rotate_cols(u, j, idx, c, s);
                }
                continue 'outer;
            }
        }
        if d[hi].abs() <= zero_tol {
            d[hi] = 0.0;
            // Right rotations push e[hi-1] up and off the block.
            let mut z = e[hi - 1];
            e[hi - 1] = 0.0;
            for j in (lo..hi).rev() {
                let (c, s, r) = givens(d[j], z);
                d[j] = r;
                if j > lo {
                    z = -s * e[j - 1];
                    e[j - 1] *= c;
                }
                rotate_cols(v, j, hi, c, s);
            }
            continue 'outer;
        }

        // Wilkinson shift from the trailing 2x2 of B^T B.
        let e_prev = if hi >= 2 && hi - 1 > lo { e[hi - 2] } else { 0.0 };
        let t11 = d[hi - 1] * d[hi - 1] + e_prev * e_prev;
        let t12 = d[hi - 1] * e[hi - 1];
        let t22 = d[hi] * d[hi] + e[hi - 1] * e[hi - 1];
        let delta = 0.5 * (t11 - t22);
        let sign = if delta >= 0.0 { 1.0 } else { -1.0 };
        let denom = delta + sign * (delta * delta + t12 * t12).sqrt();
        let mu = if denom == 0.0 { t22 } else { t22 - t12 * t12 / denom };

        // Bulge chase.
        let mut x = d[lo] * d[lo] - mu;
        let mut z = d[lo] * e[lo];
        for k in lo..hi {
            let (c, s, r) = givens(x, z);
            if k > lo {
                e[k - 1] = r;
            }
            let dk = d[k];
            let ek = e[k];
            let dk1 = d[k + 1];
            d[k] = c * dk + s * ek;
            e[k] = c * ek - s * dk;
            let bulge = s * dk1;
            d[k + 1] = c * dk1;
            rotate_cols(v, k, k + 1, c, s);

            let (c2, s2, r2) = givens(d[k], bulge);
            d[k] = r2;
            let ek_new = e[k];
            let dk1_new = d[k + 1];
            e[k] = c2 * ek_new + s2 * dk1_new;
            d[k + 1] = c2 * dk1_new - s2 * ek_new;
            if k + 1 < hi {
                let ek1 = e[k + 1];
                x = e[k];
                z = s2 * ek1;
                e[k + 1] = c2 * ek1;
            }
            rotate_cols(u, k, k + 1, c2, s2);
        }
    }

    // Fix signs, then sort descending.
    for i in 0..n {
        if d[i] < 0.0 {
            d[i] = -d[i];
            for r in 0..v.rows() {
                v[(r, i)] = -v[(r, i)];
            }
        }
    }
    for i in 0..n {
        let mut best = i;
        for j in i + 1..n {
            if d[j] > d[best] {
                best = j;
            }
        }
        if best != i {
            d.swap(i, best);
            u.swap_cols(i, best);
            v.swap_cols(i, best);
        }
    }
    Ok(())
}
