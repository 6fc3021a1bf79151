//! The maxvol search skeleton shared by GE and QR modes: neighbor
//! enumeration on the volume submatrix graph, the greedy-ascent control
//! flow, brute-force enumeration, and independent certification.
//!
//! Volumes along the ascent are tracked in log space; raw volumes appear
//! only in reports.

use crate::error::{Error, Result};
use crate::ge::{self, GeMove, PartialLu};
use crate::gen::Rng;
use crate::matrix::{DenseMatrix, Selection};
use crate::qr::{self, PartialQr, QrMove};
use crate::svd;
use crate::tol::CERT_REL_TOL;

/// Factorization mode a search or metric operates in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Mode {
    /// `k x k` pivot blocks, row and column swaps.
    Ge,
    /// `m x k` column subsets, column swaps only.
    Qr,
}

/// A move on the volume submatrix graph in either mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Move {
    Ge(GeMove),
    Qr(QrMove),
}

/// How a search chooses its starting submatrix.
#[derive(Debug, Clone)]
pub enum Init {
    /// GECP (GE mode) or CPQR (QR mode).
    Greedy,
    /// Explicit starting selection.
    Given(Selection),
    /// Uniformly random nonsingular selection, up to 50 resampling
    /// attempts.
    RandomSeeded(u64),
}

/// Search parameters. The neighbor scan order is fixed: one-sided row
/// swaps, then one-sided column swaps, then combined swaps, each block in
/// lexicographic index order; the first improving move is taken.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Acceptance factor: a move is taken only if it grows the volume by
    /// strictly more than `gamma`. `gamma = 1` searches for a local
    /// maximum volume submatrix.
    pub gamma: f64,
    pub init: Init,
    /// Cap on accepted swaps; `None` picks a mode-dependent default.
    pub max_swaps: Option<usize>,
}

impl SearchConfig {
    pub fn new(gamma: f64) -> Self {
        assert!(gamma >= 1.0, "gamma must be >= 1");
        Self {
            gamma,
            init: Init::Greedy,
            max_swaps: None,
        }
    }

    pub fn with_init(mut self, init: Init) -> Self {
        self.init = init;
        self
    }

    pub fn with_max_swaps(mut self, cap: usize) -> Self {
        assert!(cap >= 1, "swap cap must be at least 1");
        self.max_swaps = Some(cap);
        self
    }
}

/// Default swap cap: generous multiple of the logarithmic path bounds.
pub fn default_swap_cap(k: usize, m: usize, n: usize) -> usize {
    let dim = m.max(n).max(2) as f64;
    4 * ((k as f64 * dim.log2()).ceil() as usize + k + 64)
}

/// Cap for a greedy-initialized QR search with `gamma > 1`:
/// `ceil(k log_gamma 2 + log_gamma(n-k)/2)` plus slack.
pub fn qr_greedy_swap_cap(k: usize, n: usize, gamma: f64) -> usize {
    let lg = gamma.ln();
    let extra = if n > k { ((n - k) as f64).ln() / (2.0 * lg) } else { 0.0 };
    (k as f64 * 2.0_f64.ln() / lg + extra).ceil() as usize + 8
}

/// Wilkinson-style bound on the complete-pivoting growth factor:
/// `rho_k <= k^{1/2} (2 * 3^{1/2} * 4^{1/3} ... k^{1/(k-1)})^{1/2}`.
pub fn wilkinson_growth_bound(k: usize) -> f64 {
    if k <= 1 {
        return 1.0;
    }
    let kf = k as f64;
    let mut log_prod = 0.0;
    for j in 2..=k {
        log_prod += (j as f64).ln() / (j as f64 - 1.0);
    }
    (0.5 * kf.ln() + 0.5 * log_prod).exp()
}

/// Theoretical path-length bound for a greedy-initialized GE search with
/// `gamma > 1`:
/// `(k+1) log_gamma 4 + log_gamma(k + rho) + log_gamma(n-k)/2 +
/// log_gamma(m-k)/2`, with `rho` the growth-factor constant (defaulting
/// to [`wilkinson_growth_bound`] at `k+1`). Reported for context only;
/// the constant is far too pessimistic to enforce.
pub fn ge_theoretical_path_bound(
    m: usize,
    n: usize,
    k: usize,
    gamma: f64,
    rho: Option<f64>,
) -> f64 {
    assert!(gamma > 1.0, "the bound needs gamma > 1");
    let lg = gamma.ln();
    let rho = rho.unwrap_or_else(|| wilkinson_growth_bound(k + 1));
    let mut bound = (k as f64 + 1.0) * 4.0_f64.ln() / lg + (k as f64 + rho).ln() / lg;
    if n > k {
        bound += ((n - k) as f64).ln() / (2.0 * lg);
    }
    if m > k {
        bound += ((m - k) as f64).ln() / (2.0 * lg);
    }
    bound
}

/// One accepted swap along a search path.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct SwapRecord {
    pub mv: Move,
    pub ratio: f64,
    pub log_volume_before: f64,
    pub log_volume_after: f64,
}

/// Outcome of a maxvol search.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct SearchReport {
    pub schema_version: u32,
    pub mode: Mode,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub gamma: f64,
    /// Number of accepted swaps.
    pub path_length: usize,
    pub swaps: Vec<SwapRecord>,
    /// Exact maximum neighbor ratio at termination: the smallest factor
    /// `gamma'` such that no neighbor exceeds `gamma' * vol(B)`. Equals
    /// the pivot-quality metric when clamped below at 1.
    pub certified_gamma: f64,
    pub start_log_volume: f64,
    pub end_log_volume: f64,
}

impl SearchReport {
    /// JSON-lines rendering: one record per swap plus a summary record.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for (index, swap) in self.swaps.iter().enumerate() {
            let rec = serde_json::json!({
                "schema_version": self.schema_version,
                "kind": "swap",
                "index": index,
                "move": swap.mv,
                "ratio": swap.ratio,
                "log_volume_before": swap.log_volume_before,
                "log_volume_after": swap.log_volume_after,
            });
            out.push_str(&rec.to_string());
            out.push('\n');
        }
        let summary = serde_json::json!({
            "schema_version": self.schema_version,
            "kind": "summary",
            "mode": self.mode,
            "m": self.m,
            "n": self.n,
            "k": self.k,
            "gamma": self.gamma,
            "path_length": self.path_length,
            "certified_gamma": self.certified_gamma,
            "start_log_volume": self.start_log_volume,
            "end_log_volume": self.end_log_volume,
        });
        out.push_str(&summary.to_string());
        out.push('\n');
        out
    }
}

// ── Neighbor enumeration ────────────────────────────────────────────

/// All GE-mode moves for a `k x k` block of an `m x n` matrix, lazily in
/// scan order. There are `(k(m-k)+1)(k(n-k)+1)-1` of them, so the
/// enumeration is never materialized.
pub fn neighbor_moves_ge(k: usize, m: usize, n: usize) -> impl Iterator<Item = GeMove> {
    let tr = m - k;
    let tc = n - k;
    let rows = (0..k).flat_map(move |i| (0..tr).map(move |j| GeMove::Row { i, j }));
    let cols = (0..k).flat_map(move |s| (0..tc).map(move |t| GeMove::Col { s, t }));
    let both = (0..k).flat_map(move |i| {
        (0..tr).flat_map(move |j| {
            (0..k).flat_map(move |s| (0..tc).map(move |t| GeMove::Both { i, j, s, t }))
        })
    });
    rows.chain(cols).chain(both)
}

/// All QR-mode moves for an `m x k` column subset, lazily: `k(n-k)`
/// single-column swaps.
pub fn neighbor_moves_qr(k: usize, n: usize) -> impl Iterator<Item = QrMove> {
    let tc = n - k;
    (0..k).flat_map(move |i| (0..tc).map(move |t| QrMove { i, t }))
}

/// Number of neighbors in the given mode without materializing them.
pub fn neighbor_count(mode: Mode, k: usize, m: usize, n: usize) -> u128 {
    match mode {
        Mode::Ge => {
            let r = (k * (m - k)) as u128;
            let c = (k * (n - k)) as u128;
            (r + 1) * (c + 1) - 1
        }
        Mode::Qr => (k * (n - k)) as u128,
    }
}

// ── Search engine ───────────────────────────────────────────────────

/// GE-mode search: ascend the volume submatrix graph from the configured
/// start until no neighbor beats `gamma`, refreshing the cached blocks
/// after every accepted swap.
pub fn ge_local_maxvol(
    a: &DenseMatrix,
    k: usize,
    config: &SearchConfig,
) -> Result<(PartialLu, SearchReport)> {
    assert!(config.gamma >= 1.0, "gamma must be >= 1");
    let (m, n) = (a.rows(), a.cols());
    let mut lu = match &config.init {
        Init::Greedy => ge::gecp_partial(a, k)?,
        Init::Given(sel) => {
            sel.validate(m, n)?;
            if sel.row_idx.len() != k || sel.col_idx.len() != k {
                return Err(Error::InvalidArgument(format!(
                    "GE selection must pick k = {k} rows and columns"
                )));
            }
            let rp = qr::extend_to_permutation(&sel.row_idx, m)?;
            let cp = qr::extend_to_permutation(&sel.col_idx, n)?;
            ge::partial_lu_given(a, &rp, &cp, k)?
        }
        Init::RandomSeeded(seed) => random_ge_start(a, k, *seed)?,
    };
    let cap = config.max_swaps.unwrap_or_else(|| default_swap_cap(k, m, n));

    // Exact volume ties on structured matrices evaluate to 1 +/- a few
    // ulps; the strict acceptance test gets the same relative headroom as
    // certification so ties are never taken.
    let threshold = config.gamma * (1.0 + CERT_REL_TOL);
    let start_log_volume = lu.log_volume;
    let mut swaps = Vec::new();
    while let Some((mv, ratio)) = ge::first_improving_ge(&lu, threshold) {
        if swaps.len() >= cap {
            return Err(Error::IterationCap { cap });
        }
        let before = lu.log_volume;
        lu = ge::apply_ge_move(a, &lu, &mv)?;
        swaps.push(SwapRecord {
            mv: Move::Ge(mv),
            ratio,
            log_volume_before: before,
            log_volume_after: lu.log_volume,
        });
    }
    let (certified_gamma, _) = ge::max_neighbor_ratio_ge(&lu);
    let report = SearchReport {
        schema_version: 1,
        mode: Mode::Ge,
        m,
        n,
        k,
        gamma: config.gamma,
        path_length: swaps.len(),
        end_log_volume: lu.log_volume,
        start_log_volume,
        swaps,
        certified_gamma,
    };
    Ok((lu, report))
}

/// QR-mode search over column subsets, CPQR-initialized by default.
pub fn qr_local_maxvol(
    a: &DenseMatrix,
    k: usize,
    config: &SearchConfig,
) -> Result<(PartialQr, SearchReport)> {
    assert!(config.gamma >= 1.0, "gamma must be >= 1");
    let (m, n) = (a.rows(), a.cols());
    let mut greedy_start = false;
    let mut qr_state = match &config.init {
        Init::Greedy => {
            greedy_start = true;
            qr::cpqr_partial(a, k)?
        }
        Init::Given(sel) => {
            sel.validate(m, n)?;
            if sel.col_idx.len() != k {
                return Err(Error::InvalidArgument(format!(
                    "QR selection must pick k = {k} columns"
                )));
            }
            let cp = qr::extend_to_permutation(&sel.col_idx, n)?;
            qr::partial_qr_given(a, &cp, k)?
        }
        Init::RandomSeeded(seed) => random_qr_start(a, k, *seed)?,
    };
    let cap = config.max_swaps.unwrap_or_else(|| {
        if greedy_start && config.gamma > 1.0 {
            qr_greedy_swap_cap(k, n, config.gamma)
        } else {
            default_swap_cap(k, m, n)
        }
    });

    let threshold = config.gamma * (1.0 + CERT_REL_TOL);
    let start_log_volume = qr_state.log_volume;
    let mut swaps = Vec::new();
    while let Some((mv, ratio)) = qr::first_improving_qr(&qr_state, threshold) {
        if swaps.len() >= cap {
            return Err(Error::IterationCap { cap });
        }
        let before = qr_state.log_volume;
        qr_state = qr::apply_qr_move(a, &qr_state, &mv)?;
        swaps.push(SwapRecord {
            mv: Move::Qr(mv),
            ratio,
            log_volume_before: before,
            log_volume_after: qr_state.log_volume,
        });
    }
    let (certified_gamma, _) = qr::max_neighbor_ratio_qr(&qr_state);
    let report = SearchReport {
        schema_version: 1,
        mode: Mode::Qr,
        m,
        n,
        k,
        gamma: config.gamma,
        path_length: swaps.len(),
        end_log_volume: qr_state.log_volume,
        start_log_volume,
        swaps,
        certified_gamma,
    };
    Ok((qr_state, report))
}

/// Mode-dispatching wrapper returning only the report.
pub fn run_search(mode: Mode, a: &DenseMatrix, k: usize, config: &SearchConfig) -> Result<SearchReport> {
    match mode {
        Mode::Ge => ge_local_maxvol(a, k, config).map(|(_, r)| r),
        Mode::Qr => qr_local_maxvol(a, k, config).map(|(_, r)| r),
    }
}

fn random_ge_start(a: &DenseMatrix, k: usize, seed: u64) -> Result<PartialLu> {
    let (m, n) = (a.rows(), a.cols());
    let mut rng = Rng::seeded(seed);
    let mut last = None;
    for _ in 0..50 {
        let rows = sample_distinct(&mut rng, m, k);
        let cols = sample_distinct(&mut rng, n, k);
        let rp = qr::extend_to_permutation(&rows, m)?;
        let cp = qr::extend_to_permutation(&cols, n)?;
        match ge::partial_lu_given(a, &rp, &cp, k) {
            Ok(lu) => return Ok(lu),
            Err(e @ Error::RankDeficient { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or(Error::RankDeficient { step: 0, magnitude: 0.0 }))
}

fn random_qr_start(a: &DenseMatrix, k: usize, seed: u64) -> Result<PartialQr> {
    let n = a.cols();
    let mut rng = Rng::seeded(seed);
    let mut last = None;
    for _ in 0..50 {
        let cols = sample_distinct(&mut rng, n, k);
        let cp = qr::extend_to_permutation(&cols, n)?;
        match qr::partial_qr_given(a, &cp, k) {
            Ok(qr_state) => return Ok(qr_state),
            Err(e @ Error::RankDeficient { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or(Error::RankDeficient { step: 0, magnitude: 0.0 }))
}

fn sample_distinct(rng: &mut Rng, bound: usize, count: usize) -> Vec<usize> {
    assert!(count <= bound);
    let mut pool: Vec<usize> = (0..bound).collect();
    for i in 0..count {
        let j = i + rng.below(bound - i);
        pool.swap(i, j);
    }
    pool.truncate(count);
    pool
}

// ── Brute force and independent verification ────────────────────────

/// Size guard for exhaustive enumeration.
pub const BRUTE_FORCE_LIMIT: u128 = 10_000_000;

/// Exhaustively enumerate all `p x q` submatrices and return a selection
/// of globally maximal volume together with its log-volume. Volumes come
/// from the SVD oracle. Errors with [`Error::SizeGuard`] when
/// `C(m,p) * C(n,q)` exceeds [`BRUTE_FORCE_LIMIT`].
pub fn brute_force_global_maxvol(
    a: &DenseMatrix,
    p: usize,
    q: usize,
) -> Result<(Selection, f64)> {
    let (m, n) = (a.rows(), a.cols());
    assert!(p >= 1 && p <= m && q >= 1 && q <= n);
    let candidates = binomial(m, p).saturating_mul(binomial(n, q));
    if candidates > BRUTE_FORCE_LIMIT {
        return Err(Error::SizeGuard {
            candidates,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let row_sets = combinations(m, p);
    let col_sets = combinations(n, q);
    let mut best: Option<(Selection, f64)> = None;
    for rows in &row_sets {
        for cols in &col_sets {
            let block = a.gather(rows, cols);
            let sv = svd::svd(&block)?.singular_values;
            let lv = svd::log_volume_of_singular_values(&sv, p, q);
            if best.as_ref().is_none_or(|(_, b)| lv > *b) {
                best = Some((Selection::new(rows.clone(), cols.clone()), lv));
            }
        }
    }
    Ok(best.expect("at least one submatrix"))
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // Advance to the next combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Result of exhaustive certification.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Verification {
    /// No neighbor exceeded `gamma` (up to the certification tolerance).
    pub passed: bool,
    /// Maximum ratio over neighbors that actually change the submatrix
    /// values. Swaps that reproduce the same block entrywise (possible on
    /// structured matrices) are ties at ratio 1 and are not reported as
    /// the worst neighbor.
    pub worst_ratio: f64,
    /// An attaining move; its pivot-slot indices address the selection
    /// as given and its trailing indices address the ascending
    /// complement of the selection.
    pub worst_move: Option<Move>,
    /// Number of neighbors inspected.
    pub neighbors: usize,
}

/// Exhaustively verify that `selection` is a `gamma`-local maximum volume
/// submatrix, recomputing every neighbor volume from scratch with the SVD
/// oracle. This path shares no code with the fast ratio formulas.
pub fn verify_local_maxvol(
    mode: Mode,
    a: &DenseMatrix,
    selection: &Selection,
    gamma: f64,
) -> Result<Verification> {
    let (m, n) = (a.rows(), a.cols());
    selection.validate(m, n)?;
    let base = a.extract(&selection.canonical())?;
    let base_sv = svd::svd(&base)?.singular_values;
    let base_lv = svd::log_volume_of_singular_values(&base_sv, base.rows(), base.cols());
    if base_lv == f64::NEG_INFINITY {
        return Err(Error::RankDeficient {
            step: selection.col_idx.len(),
            magnitude: 0.0,
        });
    }

    let k = selection.col_idx.len();
    let mut worst_ratio = 0.0_f64;
    let mut worst_move = None;
    let mut neighbors = 0usize;

    let mut consider = |mv: Move, cand: Selection| -> Result<()> {
        neighbors += 1;
        let block = a.extract(&cand.canonical())?;
        if block == base {
            // Identical entries: a tie at ratio exactly 1, never a
            // certificate failure.
            return Ok(());
        }
        let sv = svd::svd(&block)?.singular_values;
        let lv = svd::log_volume_of_singular_values(&sv, block.rows(), block.cols());
        let ratio = if lv == f64::NEG_INFINITY {
            0.0
        } else {
            (lv - base_lv).exp()
        };
        if ratio > worst_ratio {
            worst_ratio = ratio;
            worst_move = Some(mv);
        }
        Ok(())
    };

    match mode {
        Mode::Ge => {
            if selection.row_idx.len() != k {
                return Err(Error::InvalidArgument(
                    "GE-mode selection must be square".into(),
                ));
            }
            let in_rows = &selection.row_idx;
            let in_cols = &selection.col_idx;
            let out_rows: Vec<usize> = (0..m).filter(|r| !in_rows.contains(r)).collect();
            let out_cols: Vec<usize> = (0..n).filter(|c| !in_cols.contains(c)).collect();
            for mv in neighbor_moves_ge(k, m, n) {
                let mut rows = in_rows.clone();
                let mut cols = in_cols.clone();
                match mv {
                    GeMove::Row { i, j } => rows[i] = out_rows[j],
                    GeMove::Col { s, t } => cols[s] = out_cols[t],
                    GeMove::Both { i, j, s, t } => {
                        rows[i] = out_rows[j];
                        cols[s] = out_cols[t];
                    }
                }
                consider(Move::Ge(mv), Selection::new(rows, cols))?;
            }
        }
        Mode::Qr => {
            if selection.row_idx.len() != m {
                return Err(Error::InvalidArgument(
                    "QR-mode selection must take all rows".into(),
                ));
            }
            let in_cols = &selection.col_idx;
            let out_cols: Vec<usize> = (0..n).filter(|c| !in_cols.contains(c)).collect();
            for mv in neighbor_moves_qr(k, n) {
                let mut cols = in_cols.clone();
                cols[mv.i] = out_cols[mv.t];
                consider(Move::Qr(mv), Selection::columns(m, cols))?;
            }
        }
    }

    Ok(Verification {
        passed: worst_ratio <= gamma * (1.0 + CERT_REL_TOL),
        worst_ratio,
        worst_move,
        neighbors,
    })
}
