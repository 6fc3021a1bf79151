//! Pivot-quality assessment: the neighbor-ratio metric, the closed-form
//! sandwich factors, singular-value sandwich validation, and the
//! necessity bounds that tie metric, spectrum, and interpolative bounds
//! together.

use crate::error::{Error, Result};
use crate::ge::{self, PartialLu};
use crate::matrix::{DenseMatrix, Selection};
use crate::qr::{self, PartialQr};
use crate::search::Mode;
use crate::svd;
use crate::tol::SANDWICH_REL_TOL;

/// Pivot-quality metric of a selection: the largest neighbor volume
/// ratio, clamped below at 1. Evaluated with the O(1) ratio formulas
/// (including one-sided swaps in GE mode).
pub fn mu_metric(a: &DenseMatrix, selection: &Selection, mode: Mode) -> Result<f64> {
    selection.validate(a.rows(), a.cols())?;
    match mode {
        Mode::Ge => {
            let k = selection.row_idx.len();
            if selection.col_idx.len() != k {
                return Err(Error::InvalidArgument(
                    "GE-mode selection must be square".into(),
                ));
            }
            let rp = qr::extend_to_permutation(&selection.row_idx, a.rows())?;
            let cp = qr::extend_to_permutation(&selection.col_idx, a.cols())?;
            let lu = ge::partial_lu_given(a, &rp, &cp, k)?;
            Ok(ge::max_neighbor_ratio_ge(&lu).0.max(1.0))
        }
        Mode::Qr => {
            let k = selection.col_idx.len();
            let cp = qr::extend_to_permutation(&selection.col_idx, a.cols())?;
            let qr_state = qr::partial_qr_given(a, &cp, k)?;
            Ok(qr::max_neighbor_ratio_qr(&qr_state).0.max(1.0))
        }
    }
}

/// Closed-form sandwich factor for a mode and relaxation level.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct BoundProfile {
    pub mode: Mode,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    /// Relaxation parameter: the search gamma, or a measured metric.
    pub gamma_or_mu: f64,
    /// The sandwich factor: `1 + 5 g^2 k sqrt(mn)` for GE,
    /// `sqrt(1 + 5 g^2 k n)` for QR. Always at least 1; `k = 0` gives
    /// exactly 1.
    pub mu_factor: f64,
}

/// Evaluate the closed-form factor.
pub fn mu_factor(mode: Mode, m: usize, n: usize, k: usize, gamma_or_mu: f64) -> BoundProfile {
    let g2 = gamma_or_mu * gamma_or_mu;
    let kf = k as f64;
    let mu_factor = match mode {
        Mode::Ge => 1.0 + 5.0 * g2 * kf * ((m * n) as f64).sqrt(),
        Mode::Qr => (1.0 + 5.0 * g2 * kf * n as f64).sqrt(),
    };
    BoundProfile {
        mode,
        m,
        n,
        k,
        gamma_or_mu,
        mu_factor,
    }
}

/// Which closed form of the necessity bounds to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NecessityForm {
    /// Bound on the metric from pivot-level conditions:
    /// `nu^2 + mu^2` (GE), `sqrt(nu^2 + mu^4)` (QR).
    Pivot,
    /// Bound from low-rank-approximation-level conditions:
    /// `nu^2 + mu^2 (1 + sqrt(k(m-k)) nu)(1 + sqrt(k(n-k)) nu)` (GE),
    /// `sqrt(nu^2 + (1 + sqrt(k(n-k)) nu)^2 mu^4)` (QR).
    LowRank,
}

/// Largest metric value compatible with spectral accuracy `mu` and
/// interpolative bound `nu`.
pub fn necessity_gamma_bound(
    mode: Mode,
    form: NecessityForm,
    mu: f64,
    nu: f64,
    m: usize,
    n: usize,
    k: usize,
) -> f64 {
    let mu2 = mu * mu;
    let nu2 = nu * nu;
    match (mode, form) {
        (Mode::Ge, NecessityForm::Pivot) => nu2 + mu2,
        (Mode::Qr, NecessityForm::Pivot) => (nu2 + mu2 * mu2).sqrt(),
        (Mode::Ge, NecessityForm::LowRank) => {
            let left = 1.0 + ((k * (m - k)) as f64).sqrt() * nu;
            let right = 1.0 + ((k * (n - k)) as f64).sqrt() * nu;
            nu2 + mu2 * left * right
        }
        (Mode::Qr, NecessityForm::LowRank) => {
            let right = 1.0 + ((k * (n - k)) as f64).sqrt() * nu;
            (nu2 + right * right * mu2 * mu2).sqrt()
        }
    }
}

/// Spectral-accuracy and interpolative measurements of a partial LU,
/// as consumed by the necessity bounds: `mu = max(sigma_k(A)/sigma_k(A11),
/// |S|_2 / sigma_{k+1}(A))` and `nu = max(max|W|, max|Z|)`.
pub fn measure_necessity_ge(a: &DenseMatrix, lu: &PartialLu) -> Result<(f64, f64)> {
    let sv_a = svd::svd(a)?.singular_values;
    let floor = svd::singular_value_floor(&sv_a, a.rows(), a.cols());
    let sv_a11 = svd::svd(&lu.a11)?.singular_values;
    let sigma_k_a = sv_a[lu.k - 1];
    let sigma_k_a11 = sv_a11[lu.k - 1];
    let spectral = if sigma_k_a11 > 0.0 { sigma_k_a / sigma_k_a11 } else { f64::INFINITY };
    let schur_norm = if lu.schur.rows() == 0 || lu.schur.cols() == 0 {
        0.0
    } else {
        svd::svd(&lu.schur)?.singular_values[0]
    };
    let sigma_next = sv_a.get(lu.k).copied().unwrap_or(0.0);
    let tail = if sigma_next > floor {
        schur_norm / sigma_next
    } else {
        1.0
    };
    let mu = spectral.max(tail).max(1.0);
    let (w, z) = ge::interpolative_bounds_ge(lu);
    Ok((mu, w.max(z)))
}

/// QR analogue of [`measure_necessity_ge`]: `mu = max(sigma_k(A)/
/// sigma_k(R11), |R22|_2 / sigma_{k+1}(A))`, `nu = max|R11^-1 R12|`.
pub fn measure_necessity_qr(a: &DenseMatrix, qr_state: &PartialQr) -> Result<(f64, f64)> {
    let sv_a = svd::svd(a)?.singular_values;
    let floor = svd::singular_value_floor(&sv_a, a.rows(), a.cols());
    let sv_r11 = svd::svd(&qr_state.r11)?.singular_values;
    let sigma_k_a = sv_a[qr_state.k - 1];
    let sigma_k_r11 = sv_r11[qr_state.k - 1];
    let spectral = if sigma_k_r11 > 0.0 { sigma_k_a / sigma_k_r11 } else { f64::INFINITY };
    let r22_norm = if qr_state.r22_gram.rows() == 0 {
        0.0
    } else {
        svd::svd(&qr_state.r22_gram)?.singular_values[0].max(0.0).sqrt()
    };
    let sigma_next = sv_a.get(qr_state.k).copied().unwrap_or(0.0);
    let tail = if sigma_next > floor { r22_norm / sigma_next } else { 1.0 };
    let mu = spectral.max(tail).max(1.0);
    Ok((mu, qr::interpolative_bound_qr(qr_state)))
}

/// Singular values of a rank-`k` product `X Y^T` through the thin-factor
/// route: orthogonalize `X`, fold its R factor into `Y^T`, and take the
/// small SVD. Costs `O(k^2 (m + n))`.
pub fn thin_singular_values(x: &DenseMatrix, y: &DenseMatrix) -> Result<Vec<f64>> {
    assert_eq!(x.cols(), y.cols(), "factor ranks must agree");
    let r = qr::thin_r(x);
    let small = r.matmul(&y.transpose());
    Ok(svd::svd(&small)?.singular_values)
}

/// Row of a sandwich validation table.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SandwichRow {
    pub j: usize,
    pub sigma_a: f64,
    pub sigma_ak: Option<f64>,
    pub sigma_residual: Option<f64>,
}

/// Outcome of checking the two-sided singular value sandwich for a given
/// factor `mu`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SandwichReport {
    pub schema_version: u32,
    pub mu: f64,
    pub k: usize,
    /// Numerical-zero floor of the host spectrum, used as the absolute
    /// allowance in all comparisons.
    pub floor: f64,
    /// Worst observed ratio `max(sigma_j(A)/sigma_j(A_k),
    /// sigma_j(A_k)/sigma_j(A))` over the leading `j <= k`.
    pub worst_leading: f64,
    /// Worst observed ratio `sigma_j(A - A_k) / sigma_{k+j}(A)`.
    pub worst_trailing: f64,
    /// Largest violation of the Eckart-Young lower bound
    /// `sigma_{k+j}(A) <= sigma_j(A - A_k)` in relative terms (0 if none).
    pub trailing_lower_violation: f64,
    pub passed: bool,
    pub rows: Vec<SandwichRow>,
}

impl SandwichReport {
    /// Per-index spectra as CSV with columns `j,sigma_a,sigma_ak,
    /// sigma_resid` (empty cells where a value does not exist).
    pub fn to_csv(&self) -> String {
        let mut csv = String::from("j,sigma_a,sigma_ak,sigma_resid\n");
        for row in &self.rows {
            csv.push_str(&format!(
                "{},{:.17e},{},{}\n",
                row.j,
                row.sigma_a,
                row.sigma_ak.map_or(String::new(), |v| format!("{v:.17e}")),
                row.sigma_residual
                    .map_or(String::new(), |v| format!("{v:.17e}")),
            ));
        }
        csv
    }

    /// Re-check the stored spectra against a different factor.
    pub fn passes_with(&self, mu: f64) -> bool {
        let slack = 1.0 + SANDWICH_REL_TOL;
        for row in &self.rows {
            if let Some(sk) = row.sigma_ak {
                let sa = row.sigma_a;
                if sk > mu * sa * slack + self.floor || sk < sa / mu / slack - self.floor {
                    return false;
                }
            }
            if row.j >= self.k {
                let target = row.sigma_a;
                if let Some(got) = self.rows[row.j - self.k].sigma_residual {
                    if got > mu * target * slack + self.floor
                        || got < target / slack - self.floor
                    {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Validate the sandwich inequalities for `A` and the rank-`k` factors
/// `(X, Y)` with `A_k = X Y^T`, against a claimed factor `mu`.
///
/// Leading singular values of `A_k` come from the thin-factor route;
/// residual singular values from a dense SVD of `A - X Y^T`. Values below
/// the numerical-zero floor of `A` are treated as exact zeros.
pub fn validate_sandwich(
    a: &DenseMatrix,
    x: &DenseMatrix,
    y: &DenseMatrix,
    mu: f64,
) -> Result<SandwichReport> {
    let k = x.cols();
    let sv_a = svd::svd(a)?.singular_values;
    let sv_ak = thin_singular_values(x, y)?;
    let residual = a.sub(&x.matmul(&y.transpose()));
    let sv_res = svd::svd(&residual)?.singular_values;
    let floor = svd::singular_value_floor(&sv_a, a.rows(), a.cols());

    let minmn = sv_a.len();
    let mut rows = Vec::new();
    for j in 0..minmn {
        rows.push(SandwichRow {
            j,
            sigma_a: sv_a[j],
            sigma_ak: if j < k { Some(sv_ak[j]) } else { None },
            sigma_residual: sv_res.get(j).copied(),
        });
    }
    let mut report = SandwichReport {
        schema_version: 1,
        mu,
        k,
        floor,
        worst_leading: 1.0,
        worst_trailing: 1.0,
        trailing_lower_violation: 0.0,
        passed: true,
        rows,
    };

    // Inequalities are checked (in `passes_with`) with relative slack
    // plus one unit of the numerical-zero floor as absolute allowance;
    // singular values at the floor carry no information. Worst ratios are
    // reported over pairs comfortably above the floor.
    let slack = 1.0 + SANDWICH_REL_TOL;
    let clean = 10.0 * floor;
    for j in 0..k.min(minmn) {
        let sa = sv_a[j];
        let sk = sv_ak[j];
        if sa > clean && sk > clean {
            report.worst_leading = report.worst_leading.max((sa / sk).max(sk / sa));
        }
    }
    for j in 0..minmn.saturating_sub(k) {
        let target = sv_a[k + j];
        let got = sv_res[j];
        if got < target / slack - floor {
            report.trailing_lower_violation = report
                .trailing_lower_violation
                .max((target - got) / target);
        }
        if target > clean && got > clean {
            report.worst_trailing = report.worst_trailing.max(got / target);
        }
    }

    report.passed = report.passes_with(mu);
    Ok(report)
}
