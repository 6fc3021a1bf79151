//! Slow reference implementations used to cross-check the fast paths.
//!
//! Nothing here shares code with the cached-block ratio formulas or the
//! search machinery; these routines exist so tests can compare against an
//! independent computation.

use crate::matrix::DenseMatrix;

/// Determinant by textbook LU with partial pivoting. Returns 0 when a
/// pivot vanishes exactly.
pub fn det_lu(a: &DenseMatrix) -> f64 {
    let n = a.rows();
    assert_eq!(n, a.cols(), "determinant needs a square matrix");
    let mut work = a.clone();
    let mut det = 1.0_f64;
    for s in 0..n {
        let mut piv = s;
        for i in s + 1..n {
            if work[(i, s)].abs() > work[(piv, s)].abs() {
                piv = i;
            }
        }
        if work[(piv, s)] == 0.0 {
            return 0.0;
        }
        if piv != s {
            work.swap_rows(s, piv);
            det = -det;
        }
        let pivot = work[(s, s)];
        det *= pivot;
        for i in s + 1..n {
            let factor = work[(i, s)] / pivot;
            for j in s + 1..n {
                let upper = work[(s, j)];
                work[(i, j)] -= factor * upper;
            }
        }
    }
    det
}
