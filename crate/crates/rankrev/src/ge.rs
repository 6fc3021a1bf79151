//! Partial LU factorizations: complete pivoting (GECP) and the cached
//! block quantities needed for O(1) volume-ratio evaluation of single
//! row/column swaps.

use crate::error::{Error, Result};
use crate::matrix::{identity_perm, DenseMatrix, Selection, Side, Triangle, EPS};

/// Degenerate-pivot threshold: `eps * max|A| * max(m, n)`.
pub fn degenerate_threshold(a: &DenseMatrix) -> f64 {
    EPS * a.max_abs() * a.rows().max(a.cols()) as f64
}

/// A rank-`k` partial LU factorization of `A` together with the cached
/// quantities used by swap-ratio formulas.
///
/// `row_perm` and `col_perm` are full permutations stored as
/// `position -> original index`; their leading `k` entries identify the
/// pivot block. With `P1 A P2` permuted accordingly:
///
/// * `a11` is the `k x k` pivot block,
/// * `w = A21 * A11^-1` is `(m-k) x k`,
/// * `z = A11^-1 * A12` is `k x (n-k)`,
/// * `schur = A22 - A21 * A11^-1 * A12` is `(m-k) x (n-k)`.
#[derive(Debug, Clone)]
pub struct PartialLu {
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
    pub k: usize,
    pub a11: DenseMatrix,
    pub a11_inverse: DenseMatrix,
    pub w: DenseMatrix,
    pub z: DenseMatrix,
    pub schur: DenseMatrix,
    /// `ln vol(A11) = ln |det(A11)|`.
    pub log_volume: f64,
}

impl PartialLu {
    /// The pivot block as a selection of the original matrix.
    pub fn selection(&self) -> Selection {
        Selection::new(
            self.row_perm[..self.k].to_vec(),
            self.col_perm[..self.k].to_vec(),
        )
    }

    pub fn trailing_rows(&self) -> usize {
        self.w.rows()
    }

    pub fn trailing_cols(&self) -> usize {
        self.z.cols()
    }
}

/// A single move on the volume submatrix graph in GE mode (0-based):
/// pivot slot indices run over `0..k`, trailing indices over `0..m-k`
/// and `0..n-k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum GeMove {
    /// Replace pivot row slot `i` by trailing row `j`.
    Row { i: usize, j: usize },
    /// Replace pivot column slot `s` by trailing column `t`.
    Col { s: usize, t: usize },
    /// Replace a row and a column simultaneously.
    Both { i: usize, j: usize, s: usize, t: usize },
}

/// `vol(swapped A11) / vol(A11)` for a single move, evaluated in O(1)
/// from the cached blocks.
///
/// The combined-swap case is the rank-two update formula; the one-sided
/// cases reduce to a single entry of `W` or `Z` (the rank-one matrix
/// determinant lemma applied to the replaced row or column).
pub fn ge_ratio(lu: &PartialLu, mv: &GeMove) -> f64 {
    match *mv {
        GeMove::Row { i, j } => lu.w[(j, i)].abs(),
        GeMove::Col { s, t } => lu.z[(s, t)].abs(),
        GeMove::Both { i, j, s, t } => {
            (lu.z[(s, t)] * lu.w[(j, i)] + lu.a11_inverse[(s, i)] * lu.schur[(j, t)]).abs()
        }
    }
}

/// Interpolative bounds of the factorization: `(max|W|, max|Z|)`.
pub fn interpolative_bounds_ge(lu: &PartialLu) -> (f64, f64) {
    (lu.w.max_abs(), lu.z.max_abs())
}

/// Rank-`k` factors `(X, Y)` with `A_k = X * Y^T`, written in original
/// (unpermuted) coordinates. The residual `A - A_k` vanishes on the pivot
/// rows and columns.
pub fn ge_lowrank(lu: &PartialLu) -> (DenseMatrix, DenseMatrix) {
    let k = lu.k;
    let m = k + lu.trailing_rows();
    let n = k + lu.trailing_cols();
    let wa11 = lu.w.matmul(&lu.a11);
    let mut x = DenseMatrix::zeros(m, k);
    for p in 0..m {
        for q in 0..k {
            let v = if p < k { lu.a11[(p, q)] } else { wa11[(p - k, q)] };
            x[(lu.row_perm[p], q)] = v;
        }
    }
    let mut y = DenseMatrix::zeros(n, k);
    for q in 0..n {
        for p in 0..k {
            let v = if q < k {
                if p == q {
                    1.0
                } else {
                    0.0
                }
            } else {
                lu.z[(p, q - k)]
            };
            y[(lu.col_perm[q], p)] = v;
        }
    }
    (x, y)
}

/// Build the partial LU for a given pivot order. The leading `k` entries
/// of the permutations select the pivot block; the blocks are recomputed
/// from scratch (no incremental updating).
pub fn partial_lu_given(
    a: &DenseMatrix,
    row_perm: &[usize],
    col_perm: &[usize],
    k: usize,
) -> Result<PartialLu> {
    let (m, n) = (a.rows(), a.cols());
    assert_eq!(row_perm.len(), m, "row_perm must be a full permutation");
    assert_eq!(col_perm.len(), n, "col_perm must be a full permutation");
    assert!(k >= 1 && k <= m.min(n), "need 1 <= k <= min(m, n)");

    let a11 = a.gather(&row_perm[..k], &col_perm[..k]);
    let a12 = a.gather(&row_perm[..k], &col_perm[k..]);
    let a21 = a.gather(&row_perm[k..], &col_perm[..k]);
    let a22 = a.gather(&row_perm[k..], &col_perm[k..]);

    let threshold = degenerate_threshold(a);
    let fac = LuFactors::compute(&a11, threshold)?;
    let a11_inverse = fac.solve(&DenseMatrix::identity(k, k));
    let z = fac.solve(&a12);
    // W * A11 = A21  =>  A11^T W^T = A21^T.
    let w = fac.solve_transposed(&a21.transpose()).transpose();
    let schur = a22.sub(&a21.matmul(&z));

    Ok(PartialLu {
        row_perm: row_perm.to_vec(),
        col_perm: col_perm.to_vec(),
        k,
        a11,
        a11_inverse,
        w,
        z,
        schur,
        log_volume: fac.log_abs_det,
    })
}

/// `k` steps of Gaussian elimination with complete pivoting. The
/// permutations record the pivot order; blocks are then rebuilt through
/// [`partial_lu_given`].
pub fn gecp_partial(a: &DenseMatrix, k: usize) -> Result<PartialLu> {
    let (row_perm, col_perm) = gecp_pivot_order(a, k)?;
    partial_lu_given(a, &row_perm, &col_perm, k)
}

/// Run `k` steps of complete-pivoted elimination and return the
/// permutations it chooses (position -> original index).
pub fn gecp_pivot_order(a: &DenseMatrix, k: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    let (m, n) = (a.rows(), a.cols());
    assert!(k >= 1 && k <= m.min(n), "need 1 <= k <= min(m, n)");
    let threshold = degenerate_threshold(a);
    let mut work = a.clone();
    let mut row_perm = identity_perm(m);
    let mut col_perm = identity_perm(n);

    for step in 0..k {
        // Largest entry of the current Schur complement; first hit wins
        // on exact ties (row-major scan).
        let mut best = (step, step);
        let mut best_val = 0.0_f64;
        for i in step..m {
            for j in step..n {
                let v = work[(i, j)].abs();
                if v > best_val {
                    best_val = v;
                    best = (i, j);
                }
            }
        }
        if best_val <= threshold {
            return Err(Error::RankDeficient {
                step,
                magnitude: best_val,
            });
        }
        work.swap_rows(step, best.0);
        work.swap_cols(step, best.1);
        row_perm.swap(step, best.0);
        col_perm.swap(step, best.1);

        let pivot = work[(step, step)];
        for i in step + 1..m {
            let factor = work[(i, step)] / pivot;
            work[(i, step)] = factor;
            for j in step + 1..n {
                let upper = work[(step, j)];
                work[(i, j)] -= factor * upper;
            }
        }
    }
    Ok((row_perm, col_perm))
}

/// Apply a move to the permutations of an existing factorization and
/// rebuild the cached blocks.
pub fn apply_ge_move(a: &DenseMatrix, lu: &PartialLu, mv: &GeMove) -> Result<PartialLu> {
    let k = lu.k;
    let mut row_perm = lu.row_perm.clone();
    let mut col_perm = lu.col_perm.clone();
    match *mv {
        GeMove::Row { i, j } => row_perm.swap(i, k + j),
        GeMove::Col { s, t } => col_perm.swap(s, k + t),
        GeMove::Both { i, j, s, t } => {
            row_perm.swap(i, k + j);
            col_perm.swap(s, k + t);
        }
    }
    partial_lu_given(a, &row_perm, &col_perm, k)
}

/// First move (in scan order: row-only, column-only, then combined, each
/// lexicographic) whose ratio strictly exceeds `gamma`.
#[allow(clippy::needless_range_loop)] // indices are the move descriptors
pub fn first_improving_ge(lu: &PartialLu, gamma: f64) -> Option<(GeMove, f64)> {
    let k = lu.k;
    let tr = lu.trailing_rows();
    let tc = lu.trailing_cols();
    for i in 0..k {
        for j in 0..tr {
            let r = lu.w[(j, i)].abs();
            if r > gamma {
                return Some((GeMove::Row { i, j }, r));
            }
        }
    }
    for s in 0..k {
        for t in 0..tc {
            let r = lu.z[(s, t)].abs();
            if r > gamma {
                return Some((GeMove::Col { s, t }, r));
            }
        }
    }
    // Combined swaps, pruned per (i, j) block: within a block
    // |z[s,t]*w[j,i] + inv[s,i]*schur[j,t]| <= |w[j,i]|*max|z| +
    // max_s|inv[s,i]| * max_t|schur[j,t]|, so blocks whose bound stays at
    // or below gamma cannot contain an improving move.
    let z_max = lu.z.max_abs();
    let inv_col_max = col_abs_max(&lu.a11_inverse);
    let schur_row_max = row_abs_max(&lu.schur);
    for i in 0..k {
        for j in 0..tr {
            let w_ji = lu.w[(j, i)];
            let bound = w_ji.abs() * z_max + inv_col_max[i] * schur_row_max[j];
            if bound <= gamma {
                continue;
            }
            let schur_row = lu.schur.row(j);
            for s in 0..k {
                let inv_si = lu.a11_inverse[(s, i)];
                let z_row = lu.z.row(s);
                for t in 0..tc {
                    let r = (z_row[t] * w_ji + inv_si * schur_row[t]).abs();
                    if r > gamma {
                        return Some((GeMove::Both { i, j, s, t }, r));
                    }
                }
            }
        }
    }
    None
}

/// Exact maximum neighbor ratio and an attaining move. Blocks are visited
/// in descending bound order so most are pruned against the running
/// maximum; the result is exact.
#[allow(clippy::needless_range_loop)] // indices are the move descriptors
pub fn max_neighbor_ratio_ge(lu: &PartialLu) -> (f64, Option<GeMove>) {
    let k = lu.k;
    let tr = lu.trailing_rows();
    let tc = lu.trailing_cols();
    let mut best = 0.0_f64;
    let mut best_move = None;
    for i in 0..k {
        for j in 0..tr {
            let r = lu.w[(j, i)].abs();
            if r > best {
                best = r;
                best_move = Some(GeMove::Row { i, j });
            }
        }
    }
    for s in 0..k {
        for t in 0..tc {
            let r = lu.z[(s, t)].abs();
            if r > best {
                best = r;
                best_move = Some(GeMove::Col { s, t });
            }
        }
    }
    if tr == 0 || tc == 0 {
        return (best, best_move);
    }
    let z_max = lu.z.max_abs();
    let inv_col_max = col_abs_max(&lu.a11_inverse);
    let schur_row_max = row_abs_max(&lu.schur);
    let mut blocks: Vec<(f64, usize, usize)> = Vec::with_capacity(k * tr);
    for i in 0..k {
        for j in 0..tr {
            let bound = lu.w[(j, i)].abs() * z_max + inv_col_max[i] * schur_row_max[j];
            blocks.push((bound, i, j));
        }
    }
    blocks.sort_by(|a, b| b.0.total_cmp(&a.0));
    for (bound, i, j) in blocks {
        if bound <= best {
            break;
        }
        let w_ji = lu.w[(j, i)];
        let schur_row = lu.schur.row(j);
        for s in 0..k {
            let inv_si = lu.a11_inverse[(s, i)];
            let z_row = lu.z.row(s);
            // Track the block maximum first; indices are recovered only
            // when the block actually improves the running best.
            let mut block_best = best;
            let mut block_t = usize::MAX;
            for (t, (&z_st, &s_jt)) in z_row.iter().zip(schur_row).enumerate() {
                let r = (z_st * w_ji + inv_si * s_jt).abs();
                if r > block_best {
                    block_best = r;
                    block_t = t;
                }
            }
            if block_t != usize::MAX {
                best = block_best;
                best_move = Some(GeMove::Both { i, j, s, t: block_t });
            }
        }
    }
    (best, best_move)
}

fn col_abs_max(a: &DenseMatrix) -> Vec<f64> {
    let mut out = vec![0.0_f64; a.cols()];
    for i in 0..a.rows() {
        for (j, o) in out.iter_mut().enumerate() {
            *o = f64::max(*o, a[(i, j)].abs());
        }
    }
    out
}

fn row_abs_max(a: &DenseMatrix) -> Vec<f64> {
    (0..a.rows())
        .map(|i| a.row(i).iter().fold(0.0_f64, |acc, v| acc.max(v.abs())))
        .collect()
}

// ── Small dense LU with partial pivoting (for A11 solves) ───────────

struct LuFactors {
    lu: DenseMatrix,
    perm: Vec<usize>,
    log_abs_det: f64,
}

impl LuFactors {
    fn compute(a: &DenseMatrix, threshold: f64) -> Result<Self> {
        let n = a.rows();
        assert_eq!(n, a.cols());
        let mut lu = a.clone();
        let mut perm = identity_perm(n);
        let mut log_abs_det = 0.0;
        for s in 0..n {
            let mut piv = s;
            for i in s + 1..n {
                if lu[(i, s)].abs() > lu[(piv, s)].abs() {
                    piv = i;
                }
            }
            let magnitude = lu[(piv, s)].abs();
            if magnitude <= threshold {
                return Err(Error::RankDeficient { step: s, magnitude });
            }
            lu.swap_rows(s, piv);
            perm.swap(s, piv);
            log_abs_det += magnitude.ln();
            let pivot = lu[(s, s)];
            for i in s + 1..n {
                let factor = lu[(i, s)] / pivot;
                lu[(i, s)] = factor;
                for j in s + 1..n {
                    let upper = lu[(s, j)];
                    lu[(i, j)] -= factor * upper;
                }
            }
        }
        Ok(Self { lu, perm, log_abs_det })
    }

    /// Solve `A X = B`.
    fn solve(&self, b: &DenseMatrix) -> DenseMatrix {
        let pb = b.gather(&self.perm, &identity_perm(b.cols()));
        let y = unit_lower_solve(&self.lu, &pb);
        crate::matrix::solve_triangular(&self.lu, &y, Side::Left, Triangle::Upper)
            .expect("pivots already validated")
    }

    /// Solve `A^T X = B` using the same factors: `A^T = U^T L^T P`.
    fn solve_transposed(&self, b: &DenseMatrix) -> DenseMatrix {
        let y = crate::matrix::solve_triangular(
            &self.lu.transpose(),
            b,
            Side::Left,
            Triangle::Lower,
        )
        .expect("pivots already validated");
        let z = unit_upper_solve(&self.lu.transpose(), &y);
        // x = P^T z: position perm[i] of x receives row i of z.
        let mut x = DenseMatrix::zeros(z.rows(), z.cols());
        for i in 0..z.rows() {
            for j in 0..z.cols() {
                x[(self.perm[i], j)] = z[(i, j)];
            }
        }
        x
    }
}

/// Solve `L y = b` where `L` is unit lower triangular (stored below the
/// diagonal of a compact LU).
fn unit_lower_solve(lu: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let n = lu.rows();
    let mut y = b.clone();
    for i in 0..n {
        for l in 0..i {
            let f = lu[(i, l)];
            for j in 0..y.cols() {
                let v = y[(l, j)];
                y[(i, j)] -= f * v;
            }
        }
    }
    y
}

/// Solve `U y = b` where `U` is unit upper triangular (the transpose of a
/// compact L factor).
fn unit_upper_solve(ut: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let n = ut.rows();
    let mut y = b.clone();
    for i in (0..n).rev() {
        for l in i + 1..n {
            let f = ut[(i, l)];
            for j in 0..y.cols() {
                let v = y[(l, j)];
                y[(i, j)] -= f * v;
            }
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::matrix::identity_perm;

    fn reconstruction_check(a: &DenseMatrix, lu: &PartialLu, tol: f64) {
        // P1 A P2 == [I 0; W I] [A11 A12; 0 S]
        let permuted = a.gather(&lu.row_perm, &lu.col_perm);
        let k = lu.k;
        let a12 = lu.a11.matmul(&lu.z);
        let a21 = lu.w.matmul(&lu.a11);
        let wa12 = lu.w.matmul(&a12);
        for i in 0..permuted.rows() {
            for j in 0..permuted.cols() {
                let v = match (i < k, j < k) {
                    (true, true) => lu.a11[(i, j)],
                    (true, false) => a12[(i, j - k)],
                    (false, true) => a21[(i - k, j)],
                    (false, false) => wa12[(i - k, j - k)] + lu.schur[(i - k, j - k)],
                };
                assert!(
                    (permuted[(i, j)] - v).abs() <= tol,
                    "block reconstruction off at ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn gecp_on_diagonal_matrix() {
        let a = DenseMatrix::diag(&[1.0, 2.0, 3.0]);
        let lu = gecp_partial(&a, 2).unwrap();
        assert_eq!(lu.a11, DenseMatrix::diag(&[3.0, 2.0]));
        assert_eq!(lu.schur.rows(), 1);
        assert!((lu.schur[(0, 0)] - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn gecp_first_pivot_is_largest_magnitude() {
        let a = gen::example_2_1();
        let lu = gecp_partial(&a, 1).unwrap();
        assert!((lu.a11[(0, 0)].abs() - 3.0).abs() <= 1e-15);
    }

    #[test]
    fn gecp_does_not_pivot_on_scaled_kahan_gram() {
        let n = 10;
        let a = gen::kahan_gram(n, gen::DEFAULT_KAHAN_S, gen::DEFAULT_KAHAN_TAU);
        let lu = gecp_partial(&a, n - 1).unwrap();
        assert_eq!(&lu.row_perm[..n - 1], &identity_perm(n)[..n - 1]);
        assert_eq!(&lu.col_perm[..n - 1], &identity_perm(n)[..n - 1]);
    }

    #[test]
    fn schur_and_reconstruction_invariants() {
        let a = gen::gaussian(8, 6, 3);
        let lu = gecp_partial(&a, 3).unwrap();
        let tol = 1e-10 * a.max_abs() * lu.k as f64;
        // Direct Schur complement.
        let a21 = a.gather(&lu.row_perm[3..], &lu.col_perm[..3]);
        let a12 = a.gather(&lu.row_perm[..3], &lu.col_perm[3..]);
        let a22 = a.gather(&lu.row_perm[3..], &lu.col_perm[3..]);
        let direct = a22.sub(&a21.matmul(&lu.a11_inverse).matmul(&a12));
        assert!(direct.sub(&lu.schur).max_abs() <= tol);
        reconstruction_check(&a, &lu, tol);
    }

    #[test]
    fn ratio_reduces_on_block_diagonal_input() {
        let a = gen::example_2_1();
        let lu = partial_lu_given(&a, &identity_perm(4), &identity_perm(4), 2).unwrap();
        assert_eq!(interpolative_bounds_ge(&lu), (0.0, 0.0));
        for s in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    for t in 0..2 {
                        let mv = GeMove::Both { i, j, s, t };
                        let expected =
                            (lu.a11_inverse[(s, i)] * lu.schur[(j, t)]).abs();
                        assert!((ge_ratio(&lu, &mv) - expected).abs() <= 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn ratio_matches_determinant_oracle() {
        let a = gen::gaussian(8, 8, 21);
        let k = 3;
        let lu = gecp_partial(&a, k).unwrap();
        let base = crate::oracle::det_lu(&lu.a11).abs();
        let all_moves = crate::search::neighbor_moves_ge(k, 8, 8);
        for mv in all_moves {
            let fast = ge_ratio(&lu, &mv);
            let mut rp = lu.row_perm.clone();
            let mut cp = lu.col_perm.clone();
            match mv {
                GeMove::Row { i, j } => rp.swap(i, k + j),
                GeMove::Col { s, t } => cp.swap(s, k + t),
                GeMove::Both { i, j, s, t } => {
                    rp.swap(i, k + j);
                    cp.swap(s, k + t);
                }
            }
            let block = a.gather(&rp[..k], &cp[..k]);
            let slow = crate::oracle::det_lu(&block).abs() / base;
            assert!(
                (fast - slow).abs() <= 1e-9 * slow.max(1.0),
                "move {mv:?}: fast {fast} vs slow {slow}"
            );
        }
    }

    #[test]
    fn sharpness_single_diagonal_swap_ratio_is_half() {
        let a = gen::sharpness_ge(8, 8, 4);
        let lu = partial_lu_given(&a, &identity_perm(8), &identity_perm(8), 4).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let r = ge_ratio(&lu, &GeMove::Row { i, j });
                assert!((r - 0.5).abs() <= 1e-12, "row swap ratio {r}");
            }
        }
        // Combined swap hitting the same slot index reproduces the block.
        let r = ge_ratio(&lu, &GeMove::Both { i: 1, j: 0, s: 1, t: 0 });
        assert!((r - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn lowrank_exact_at_full_rank() {
        let a = gen::gaussian(6, 6, 9);
        let lu = gecp_partial(&a, 6).unwrap();
        let (x, y) = ge_lowrank(&lu);
        let err = x.matmul(&y.transpose()).sub(&a).max_abs();
        assert!(err <= 1e-10 * a.max_abs());
    }

    #[test]
    fn lowrank_residual_on_sharpness_example() {
        let (m, n, k) = (9, 8, 4);
        let a = gen::sharpness_ge(m, n, k);
        let lu = partial_lu_given(&a, &identity_perm(m), &identity_perm(n), k).unwrap();
        let (x, y) = ge_lowrank(&lu);
        let resid = a.sub(&x.matmul(&y.transpose()));
        let expected = (k + 2) as f64 / 2.0;
        for i in 0..m {
            for j in 0..n {
                let want = if i >= k && j >= k { expected } else { 0.0 };
                assert!((resid[(i, j)] - want).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn lowrank_recovers_exact_rank() {
        let x = gen::gaussian(20, 5, 31);
        let y = gen::gaussian(5, 12, 32);
        let a = x.matmul(&y);
        let lu = gecp_partial(&a, 5).unwrap();
        let (xf, yf) = ge_lowrank(&lu);
        let err = a.sub(&xf.matmul(&yf.transpose())).max_abs();
        assert!(err <= 1e-10, "residual {err}");
    }

    #[test]
    fn residual_spectrum_equals_schur_spectrum() {
        let a = gen::gaussian(8, 6, 71);
        let lu = gecp_partial(&a, 3).unwrap();
        let (x, y) = ge_lowrank(&lu);
        let residual = a.sub(&x.matmul(&y.transpose()));
        let sv_res = crate::svd::svd(&residual).unwrap().singular_values;
        let sv_schur = crate::svd::svd(&lu.schur).unwrap().singular_values;
        for (j, &s) in sv_schur.iter().enumerate() {
            assert!(
                (sv_res[j] - s).abs() <= 1e-10 * sv_schur[0].max(1.0),
                "sigma_{j}: residual {} vs schur {s}",
                sv_res[j]
            );
        }
    }

    #[test]
    fn rank_deficient_is_reported() {
        let x = gen::gaussian(6, 2, 41);
        let y = gen::gaussian(2, 6, 42);
        let a = x.matmul(&y);
        match gecp_partial(&a, 3) {
            Err(Error::RankDeficient { step, .. }) => assert_eq!(step, 2),
            other => panic!("expected RankDeficient, got {other:?}"),
        }
    }

    #[test]
    fn first_improving_and_max_agree_with_exhaustive() {
        let a = gen::gaussian(7, 6, 55);
        let k = 3;
        let lu = gecp_partial(&a, k).unwrap();
        let exhaustive = crate::search::neighbor_moves_ge(k, 7, 6)
            .map(|mv| ge_ratio(&lu, &mv))
            .fold(0.0_f64, f64::max);
        let (max_ratio, _) = max_neighbor_ratio_ge(&lu);
        assert!((max_ratio - exhaustive).abs() <= 1e-12 * exhaustive.max(1.0));
        if let Some((_, r)) = first_improving_ge(&lu, 1.0) {
            assert!(r > 1.0);
        } else {
            assert!(exhaustive <= 1.0);
        }
    }
}
