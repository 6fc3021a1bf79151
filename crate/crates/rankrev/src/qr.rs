//! Partial QR factorizations: column-pivoted QR (CPQR) with norm
//! downdating, and the cached quantities for O(1) column-swap volume
//! ratios.

use crate::error::{Error, Result};
use crate::ge::degenerate_threshold;
use crate::matrix::{identity_perm, DenseMatrix, Selection, Side, Triangle, EPS};
use crate::svd;

/// A rank-`k` partial QR factorization of `A`.
///
/// `col_perm` is a full permutation (`position -> original column`); its
/// leading `k` entries are the selected columns. `A P = Q R` after `k`
/// Householder steps, with:
///
/// * `q1`: `m x k`, orthonormal columns,
/// * `r11`: `k x k` upper triangular with nonnegative diagonal,
/// * `r12`: `k x (n-k)`,
/// * `r22_gram`: `(n-k) x (n-k)` Gram matrix of the residual columns
///   (`R22^T R22`; `R22` itself is not kept).
#[derive(Debug, Clone)]
pub struct PartialQr {
    pub col_perm: Vec<usize>,
    pub k: usize,
    pub q1: DenseMatrix,
    pub r11: DenseMatrix,
    pub r12: DenseMatrix,
    pub r22_gram: DenseMatrix,
    /// Cached `R11^-1 R12`.
    pub z: DenseMatrix,
    /// Cached diagonal of `(R11^T R11)^-1`.
    pub inv_gram_diag: Vec<f64>,
    /// `ln vol(A(:, selected)) = sum ln R11[i, i]`.
    pub log_volume: f64,
}

impl PartialQr {
    /// The selected columns (all rows) as a selection.
    pub fn selection(&self) -> Selection {
        Selection::columns(self.q1.rows(), self.col_perm[..self.k].to_vec())
    }

    pub fn trailing_cols(&self) -> usize {
        self.z.cols()
    }
}

/// A column swap in QR mode: selected slot `i` (in `0..k`) exchanged with
/// trailing column `t` (in `0..n-k`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct QrMove {
    pub i: usize,
    pub t: usize,
}

/// `vol(new subset) / vol(current subset)` for a single column swap.
pub fn qr_ratio(qr: &PartialQr, mv: &QrMove) -> f64 {
    let z = qr.z[(mv.i, mv.t)];
    (z * z + qr.inv_gram_diag[mv.i] * qr.r22_gram[(mv.t, mv.t)]).sqrt()
}

/// Interpolative bound `max|R11^-1 R12|`.
pub fn interpolative_bound_qr(qr: &PartialQr) -> f64 {
    qr.z.max_abs()
}

/// Spectral norm of `R11^-1`, i.e. `1/sigma_k(R11)`; the quantity DEIM
/// selections are judged by.
pub fn r11_inverse_spectral_norm(qr: &PartialQr) -> Result<f64> {
    let sv = svd::svd(&qr.r11)?.singular_values;
    let smallest = sv.last().copied().unwrap_or(0.0);
    if smallest == 0.0 {
        return Err(Error::RankDeficient {
            step: qr.k,
            magnitude: 0.0,
        });
    }
    Ok(1.0 / smallest)
}

/// Rank-`<= k` factors `(X, Y)` with `A_k = X * Y^T = Q1 [R11 R12] P^-1`
/// in original column order.
pub fn qr_lowrank(qr: &PartialQr) -> (DenseMatrix, DenseMatrix) {
    let k = qr.k;
    let n = k + qr.trailing_cols();
    let x = qr.q1.clone();
    let mut y = DenseMatrix::zeros(n, k);
    for q in 0..n {
        for p in 0..k {
            let v = if q < k { qr.r11[(p, q)] } else { qr.r12[(p, q - k)] };
            y[(qr.col_perm[q], p)] = v;
        }
    }
    (x, y)
}

/// Build a partial QR for a fixed column order (unpivoted Householder on
/// the permuted columns). Used for search restarts and explicit
/// selections.
pub fn partial_qr_given(a: &DenseMatrix, col_perm: &[usize], k: usize) -> Result<PartialQr> {
    let (m, n) = (a.rows(), a.cols());
    assert_eq!(col_perm.len(), n, "col_perm must be a full permutation");
    assert!(k >= 1 && k <= m.min(n), "need 1 <= k <= min(m, n)");
    let mut work = a.gather(&identity_perm(m), col_perm);
    let threshold = degenerate_threshold(a);
    let mut taus = vec![0.0; k];
    for step in 0..k {
        householder_step(&mut work, step, &mut taus);
        let diag = work[(step, step)].abs();
        if diag <= threshold {
            return Err(Error::RankDeficient {
                step,
                magnitude: diag,
            });
        }
    }
    Ok(assemble(col_perm.to_vec(), k, work, taus))
}

/// `k` steps of Householder QR with column pivoting on the largest
/// residual column norm. Residual norms are downdated and recomputed from
/// scratch whenever cancellation makes the downdated square untrustworthy.
pub fn cpqr_partial(a: &DenseMatrix, k: usize) -> Result<PartialQr> {
    let (m, n) = (a.rows(), a.cols());
    assert!(k >= 1 && k <= m.min(n), "need 1 <= k <= min(m, n)");
    let mut work = a.clone();
    let mut col_perm = identity_perm(n);
    let threshold = degenerate_threshold(a);
    let mut taus = vec![0.0; k];

    let mut current: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|i| work[(i, j)].powi(2)).sum::<f64>().sqrt())
        .collect();
    let mut reference = current.clone();
    let sqrt_eps = EPS.sqrt();

    for step in 0..k {
        let mut pivot = step;
        for j in step + 1..n {
            if current[j] > current[pivot] {
                pivot = j;
            }
        }
        if current[pivot] <= threshold {
            return Err(Error::RankDeficient {
                step,
                magnitude: current[pivot],
            });
        }
        work.swap_cols(step, pivot);
        col_perm.swap(step, pivot);
        current.swap(step, pivot);
        reference.swap(step, pivot);

        householder_step(&mut work, step, &mut taus);

        // Downdate the residual norms of the remaining columns; fall back
        // to a fresh computation when the downdated square has lost
        // sqrt(eps) of its reference value.
        for j in step + 1..n {
            if current[j] == 0.0 {
                continue;
            }
            let r = work[(step, j)].abs() / current[j];
            let temp = ((1.0 + r) * (1.0 - r)).max(0.0);
            let ratio = current[j] / reference[j];
            if temp * ratio * ratio <= sqrt_eps {
                let fresh = (step + 1..m)
                    .map(|i| work[(i, j)].powi(2))
                    .sum::<f64>()
                    .sqrt();
                current[j] = fresh;
                reference[j] = fresh;
            } else {
                current[j] *= temp.sqrt();
            }
        }
    }
    Ok(assemble(col_perm, k, work, taus))
}

/// One Householder reflector on column `step`, applied to the trailing
/// columns; the reflector tail is stored below the diagonal.
fn householder_step(work: &mut DenseMatrix, step: usize, taus: &mut [f64]) {
    let (m, n) = (work.rows(), work.cols());
    let mut col: Vec<f64> = (step..m).map(|i| work[(i, step)]).collect();
    let (beta, tau) = svd::make_reflector(&mut col);
    taus[step] = tau;
    work[(step, step)] = beta;
    for (offset, &v) in col.iter().enumerate().skip(1) {
        work[(step + offset, step)] = v;
    }
    if tau == 0.0 {
        return;
    }
    for c in step + 1..n {
        let mut dot = work[(step, c)];
        for i in step + 1..m {
            dot += work[(i, step)] * work[(i, c)];
        }
        dot *= tau;
        work[(step, c)] -= dot;
        for i in step + 1..m {
            let v = work[(i, step)];
            work[(i, c)] -= dot * v;
        }
    }
}

/// Assemble the public factorization from the in-place Householder state.
fn assemble(col_perm: Vec<usize>, k: usize, work: DenseMatrix, taus: Vec<f64>) -> PartialQr {
    let (m, n) = (work.rows(), work.cols());

    // Thin Q1 by backward accumulation.
    let mut q1 = DenseMatrix::identity(m, k);
    for j in (0..k).rev() {
        let tau = taus[j];
        if tau == 0.0 {
            continue;
        }
        for c in j..k {
            let mut dot = q1[(j, c)];
            for i in j + 1..m {
                dot += work[(i, j)] * q1[(i, c)];
            }
            dot *= tau;
            q1[(j, c)] -= dot;
            for i in j + 1..m {
                let v = work[(i, j)];
                q1[(i, c)] -= dot * v;
            }
        }
    }

    let mut r11 = DenseMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            r11[(i, j)] = work[(i, j)];
        }
    }
    let mut r12 = DenseMatrix::zeros(k, n - k);
    for i in 0..k {
        for j in k..n {
            r12[(i, j - k)] = work[(i, j)];
        }
    }

    // Sign convention: nonnegative R11 diagonal for deterministic output.
    for i in 0..k {
        if r11[(i, i)] < 0.0 {
            for j in i..k {
                r11[(i, j)] = -r11[(i, j)];
            }
            for j in 0..n - k {
                r12[(i, j)] = -r12[(i, j)];
            }
            for r in 0..m {
                q1[(r, i)] = -q1[(r, i)];
            }
        }
    }

    // Gram matrix of the transformed residual block.
    let mut r22_gram = DenseMatrix::zeros(n - k, n - k);
    for p in 0..n - k {
        for q in p..n - k {
            let mut dot = 0.0;
            for i in k..m {
                dot += work[(i, k + p)] * work[(i, k + q)];
            }
            r22_gram[(p, q)] = dot;
            r22_gram[(q, p)] = dot;
        }
    }

    let z = crate::matrix::solve_triangular(&r11, &r12, Side::Left, Triangle::Upper)
        .expect("R11 diagonal validated during elimination");
    let r11_inv =
        crate::matrix::solve_triangular(&r11, &DenseMatrix::identity(k, k), Side::Left, Triangle::Upper)
            .expect("R11 diagonal validated during elimination");
    let inv_gram_diag: Vec<f64> = (0..k)
        .map(|i| (0..k).map(|j| r11_inv[(i, j)].powi(2)).sum())
        .collect();
    let log_volume = (0..k).map(|i| r11[(i, i)].ln()).sum();

    PartialQr {
        col_perm,
        k,
        q1,
        r11,
        r12,
        r22_gram,
        z,
        inv_gram_diag,
        log_volume,
    }
}

/// Apply a column swap and rebuild the factorization by re-running
/// unpivoted Householder QR on the permuted columns.
pub fn apply_qr_move(a: &DenseMatrix, qr: &PartialQr, mv: &QrMove) -> Result<PartialQr> {
    let mut col_perm = qr.col_perm.clone();
    col_perm.swap(mv.i, qr.k + mv.t);
    partial_qr_given(a, &col_perm, qr.k)
}

/// First column swap (lexicographic in `(i, t)`) with ratio strictly
/// above `gamma`.
pub fn first_improving_qr(qr: &PartialQr, gamma: f64) -> Option<(QrMove, f64)> {
    for i in 0..qr.k {
        for t in 0..qr.trailing_cols() {
            let mv = QrMove { i, t };
            let r = qr_ratio(qr, &mv);
            if r > gamma {
                return Some((mv, r));
            }
        }
    }
    None
}

/// Exact maximum swap ratio and an attaining move.
pub fn max_neighbor_ratio_qr(qr: &PartialQr) -> (f64, Option<QrMove>) {
    let mut best = 0.0_f64;
    let mut best_move = None;
    for i in 0..qr.k {
        for t in 0..qr.trailing_cols() {
            let mv = QrMove { i, t };
            let r = qr_ratio(qr, &mv);
            if r > best {
                best = r;
                best_move = Some(mv);
            }
        }
    }
    (best, best_move)
}

/// Unpivoted Householder QR of a tall thin factor, returning only the
/// `k x k` R block. Used for the `O(k^2 (m+n))` thin-factor singular
/// value route.
pub fn thin_r(x: &DenseMatrix) -> DenseMatrix {
    let (m, k) = (x.rows(), x.cols());
    assert!(m >= k, "thin_r expects a tall factor");
    let mut work = x.clone();
    let mut taus = vec![0.0; k];
    for step in 0..k {
        householder_step(&mut work, step, &mut taus);
    }
    let mut r = DenseMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            r[(i, j)] = work[(i, j)];
        }
    }
    r
}

/// Check that a column subset certifies as locally maximal for `A` in QR
/// mode exactly when the matching pivot block of `A^T A` certifies under
/// symmetric (same row and column) GE swaps. Returns whether the two
/// certificates agree.
pub fn cholesky_link_check(a: &DenseMatrix, k: usize, cols: &[usize]) -> Result<bool> {
    let n = a.cols();
    let col_perm = extend_to_permutation(cols, n)?;

    let qr = partial_qr_given(a, &col_perm, k)?;
    let (qr_max, _) = max_neighbor_ratio_qr(&qr);
    let qr_cert = qr_max <= 1.0 + crate::tol::CERT_REL_TOL;

    let gram = a.transpose().matmul(a);
    let lu = crate::ge::partial_lu_given(&gram, &col_perm, &col_perm, k)?;
    let mut ge_max = 0.0_f64;
    for i in 0..k {
        for j in 0..n - k {
            let r = crate::ge::ge_ratio(&lu, &crate::ge::GeMove::Both { i, j, s: i, t: j });
            ge_max = ge_max.max(r);
        }
    }
    let ge_cert = ge_max <= 1.0 + crate::tol::CERT_REL_TOL;
    Ok(qr_cert == ge_cert)
}

/// Extend `k` distinct leading indices to a full permutation of `0..n`
/// by appending the remaining indices in ascending order.
pub fn extend_to_permutation(leading: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut used = vec![false; n];
    for &c in leading {
        if c >= n {
            return Err(Error::IndexOutOfRange { index: c, dim: n });
        }
        if used[c] {
            return Err(Error::InvalidArgument(format!("duplicate index {c}")));
        }
        used[c] = true;
    }
    let mut perm = leading.to_vec();
    perm.extend((0..n).filter(|&c| !used[c]));
    Ok(perm)
}
