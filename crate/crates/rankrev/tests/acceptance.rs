//! Acceptance suite.
//!
//! Each test checks one acceptance criterion end to end and prints a
//! `[acceptance NN] PASS/WARN ...` line (visible with
//! `cargo test --test acceptance -- --nocapture`). Soft criteria print
//! WARN instead of failing; everything else is a hard assertion.

use rankrev::assess::{
    measure_necessity_ge, measure_necessity_qr, mu_factor, mu_metric, necessity_gamma_bound,
    validate_sandwich, NecessityForm,
};
use rankrev::ge::{self, GeMove};
use rankrev::matrix::{DenseMatrix, Selection};
use rankrev::qr;
use rankrev::search::{
    brute_force_global_maxvol, ge_local_maxvol, neighbor_count, neighbor_moves_ge,
    neighbor_moves_qr, qr_local_maxvol, verify_local_maxvol, Mode, SearchConfig,
};
use rankrev::{gen, oracle, svd, Error};
use std::sync::OnceLock;
use std::time::Instant;

/// Default relaxation factors used throughout the sweep.
const GE_GAMMA: f64 = 3.0;
const QR_GAMMA: f64 = 2.0;
const BLOCK_SIZES: [usize; 4] = [1, 3, 5, 10];

struct CorpusMatrix {
    id: String,
    a: DenseMatrix,
}

fn corpus() -> &'static Vec<CorpusMatrix> {
    static CORPUS: OnceLock<Vec<CorpusMatrix>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut out = Vec::new();
        let mut push = |id: String, a: DenseMatrix| out.push(CorpusMatrix { id, a });

        let gaussian_plan: [(usize, usize, u64); 9] = [
            (20, 20, 30),
            (25, 25, 20),
            (30, 20, 20),
            (20, 35, 20),
            (35, 35, 15),
            (50, 50, 40),
            (40, 60, 20),
            (75, 75, 15),
            (100, 100, 12),
        ];
        for (m, n, count) in gaussian_plan {
            for seed in 0..count {
                push(
                    format!("gaussian-{m}x{n}-s{seed}"),
                    gen::gaussian(m, n, 1000 * m as u64 + seed),
                );
            }
        }
        push("gaussian-60x100-s0".into(), gen::gaussian(60, 100, 9001));
        push("gaussian-60x100-s1".into(), gen::gaussian(60, 100, 9002));
        push("gaussian-100x50-s0".into(), gen::gaussian(100, 50, 9003));

        for beta in [1.0, 10.0, 100.0] {
            push(
                format!("runge-beta{beta}-200"),
                gen::kernel_matrix(&gen::KernelSpec {
                    kernel: gen::Kernel::RungeLike { beta },
                    grid: 200,
                }),
            );
        }
        for s in [0u8, 1, 3] {
            push(
                format!("wendland-{s}-200"),
                gen::kernel_matrix(&gen::KernelSpec {
                    kernel: gen::Kernel::Wendland { s },
                    grid: 200,
                }),
            );
        }
        push(
            "runge-ring-200".into(),
            gen::kernel_matrix(&gen::KernelSpec {
                kernel: gen::Kernel::RungeRing,
                grid: 200,
            }),
        );

        push("example-blockdiag".into(), gen::example_2_1());
        push("sharpness-ge-20x20-k5".into(), gen::sharpness_ge(20, 20, 5));
        push("sharpness-ge-12x10-k3".into(), gen::sharpness_ge(12, 10, 3));
        push("sharpness-ge-30x25-k8".into(), gen::sharpness_ge(30, 25, 8));
        push("sharpness-qr-k5-n12".into(), gen::sharpness_qr(5, 12));
        push("sharpness-qr-k3-n8".into(), gen::sharpness_qr(3, 8));
        push("kahan-10".into(), gen::kahan(10, gen::DEFAULT_KAHAN_S));
        push(
            "kahan-10-perturbed".into(),
            gen::kahan_perturbed(10, gen::DEFAULT_KAHAN_S, gen::DEFAULT_KAHAN_TAU),
        );
        push(
            "kahan-gram-10".into(),
            gen::kahan_gram(10, gen::DEFAULT_KAHAN_S, gen::DEFAULT_KAHAN_TAU),
        );
        push("kahan-16".into(), gen::kahan(16, 0.35));
        for mu in [2.0, 4.0] {
            push(
                format!("necessity-spectral-mu{mu}"),
                gen::necessity_example(gen::NecessityExample::SpectralGap { mu }),
            );
        }
        for nu in [2.0, 3.0] {
            push(
                format!("necessity-interp-nu{nu}"),
                gen::necessity_example(gen::NecessityExample::InterpolativeGap { nu }),
            );
        }
        out
    })
}

struct SweepRecord {
    id: String,
    mode: Mode,
    m: usize,
    n: usize,
    k: usize,
    gamma: f64,
    path_length: usize,
    metric: f64,
    interp: (f64, f64),
    sandwich_passed: bool,
    worst_leading: f64,
    worst_trailing: f64,
    necessity_ok: bool,
    necessity_margin: f64,
    path_bound_ok: bool,
}

fn sweep() -> &'static Vec<SweepRecord> {
    static SWEEP: OnceLock<Vec<SweepRecord>> = OnceLock::new();
    SWEEP.get_or_init(|| {
        let mut records = Vec::new();
        for item in corpus() {
            let a = &item.a;
            let (m, n) = (a.rows(), a.cols());
            for &k in BLOCK_SIZES.iter().filter(|&&k| k <= m.min(n)) {
                match ge_local_maxvol(a, k, &SearchConfig::new(GE_GAMMA)) {
                    Ok((lu, report)) => {
                        let (x, y) = ge::ge_lowrank(&lu);
                        let profile = mu_factor(Mode::Ge, m, n, k, GE_GAMMA);
                        let sandwich =
                            validate_sandwich(a, &x, &y, profile.mu_factor).unwrap();
                        let interp = ge::interpolative_bounds_ge(&lu);
                        let (mu_meas, nu_meas) = measure_necessity_ge(a, &lu).unwrap();
                        let metric = report.certified_gamma.max(1.0);
                        // The tighter sandwich built from the measured
                        // metric must hold as well.
                        let measured_factor = mu_factor(Mode::Ge, m, n, k, metric).mu_factor;
                        assert!(
                            sandwich.passes_with(measured_factor),
                            "{}: GE k={k} fails the measured-metric sandwich",
                            item.id
                        );
                        let bound = necessity_gamma_bound(
                            Mode::Ge,
                            NecessityForm::Pivot,
                            mu_meas,
                            nu_meas,
                            m,
                            n,
                            k,
                        );
                        records.push(SweepRecord {
                            id: item.id.clone(),
                            mode: Mode::Ge,
                            m,
                            n,
                            k,
                            gamma: GE_GAMMA,
                            path_length: report.path_length,
                            metric,
                            interp,
                            sandwich_passed: sandwich.passed,
                            worst_leading: sandwich.worst_leading,
                            worst_trailing: sandwich.worst_trailing,
                            necessity_ok: metric <= bound * (1.0 + 1e-8),
                            necessity_margin: bound - metric,
                            path_bound_ok: true,
                        });
                    }
                    Err(Error::RankDeficient { .. }) => {}
                    Err(e) => panic!("{}: GE search failed: {e}", item.id),
                }

                match qr_local_maxvol(a, k, &SearchConfig::new(QR_GAMMA)) {
                    Ok((qr_state, report)) => {
                        let (x, y) = qr::qr_lowrank(&qr_state);
                        let profile = mu_factor(Mode::Qr, m, n, k, QR_GAMMA);
                        let sandwich =
                            validate_sandwich(a, &x, &y, profile.mu_factor).unwrap();
                        let nu = qr::interpolative_bound_qr(&qr_state);
                        let (mu_meas, nu_meas) = measure_necessity_qr(a, &qr_state).unwrap();
                        let metric = report.certified_gamma.max(1.0);
                        let measured_factor = mu_factor(Mode::Qr, m, n, k, metric).mu_factor;
                        assert!(
                            sandwich.passes_with(measured_factor),
                            "{}: QR k={k} fails the measured-metric sandwich",
                            item.id
                        );
                        let bound = necessity_gamma_bound(
                            Mode::Qr,
                            NecessityForm::Pivot,
                            mu_meas,
                            nu_meas,
                            m,
                            n,
                            k,
                        );
                        // CPQR-initialized path bound:
                        // l <= k log_gamma(2) + log_gamma(n - k) / 2.
                        let path_bound = k as f64 * 2.0_f64.ln() / QR_GAMMA.ln()
                            + if n > k {
                                ((n - k) as f64).ln() / (2.0 * QR_GAMMA.ln())
                            } else {
                                0.0
                            };
                        records.push(SweepRecord {
                            id: item.id.clone(),
                            mode: Mode::Qr,
                            m,
                            n,
                            k,
                            gamma: QR_GAMMA,
                            path_length: report.path_length,
                            metric,
                            interp: (nu, nu),
                            sandwich_passed: sandwich.passed,
                            worst_leading: sandwich.worst_leading,
                            worst_trailing: sandwich.worst_trailing,
                            necessity_ok: metric <= bound * (1.0 + 1e-8),
                            necessity_margin: bound - metric,
                            path_bound_ok: (report.path_length as f64) <= path_bound + 1e-9,
                        });
                    }
                    Err(Error::RankDeficient { .. }) => {}
                    Err(e) => panic!("{}: QR search failed: {e}", item.id),
                }
            }
        }
        records
    })
}

/// Criterion 1: every near-local maxvol factorization over the corpus
/// satisfies the two-sided singular value sandwich with the closed-form
/// factor, and its interpolative bounds stay within gamma.
#[test]
fn c01_sufficiency_sandwich() {
    assert!(
        corpus().len() >= 200,
        "corpus has {} matrices, need at least 200",
        corpus().len()
    );
    let records = sweep();
    assert!(records.len() >= 400, "only {} factorizations", records.len());
    let mut worst_leading = 1.0_f64;
    let mut worst_trailing = 1.0_f64;
    for r in records.iter() {
        assert!(
            r.sandwich_passed,
            "{} ({}x{}) mode {:?} k={} failed the sandwich (leading {:.3e}, trailing {:.3e})",
            r.id, r.m, r.n, r.mode, r.k, r.worst_leading, r.worst_trailing
        );
        // Termination certificate: no neighbor beats gamma.
        assert!(
            r.metric <= r.gamma * (1.0 + 2e-9),
            "{} mode {:?} k={}: certified metric {} exceeds gamma {}",
            r.id,
            r.mode,
            r.k,
            r.metric,
            r.gamma
        );
        let limit = r.gamma + 1e-8;
        assert!(
            r.interp.0 <= limit && r.interp.1 <= limit,
            "{} mode {:?} k={}: interpolative bounds {:?} exceed gamma {}",
            r.id,
            r.mode,
            r.k,
            r.interp,
            r.gamma
        );
        worst_leading = worst_leading.max(r.worst_leading);
        worst_trailing = worst_trailing.max(r.worst_trailing);
    }
    println!(
        "[acceptance 01] PASS sufficiency sandwich: {} matrices, {} factorizations, worst leading ratio {:.3}, worst trailing ratio {:.3}",
        corpus().len(),
        records.len(),
        worst_leading,
        worst_trailing
    );
}

/// Criterion 2: the O(1) swap-ratio formulas match determinant/SVD
/// volume-ratio oracles over all neighbors of small random instances.
#[test]
fn c02_ratio_formula_oracles() {
    let mut rng = gen::Rng::seeded(20_202);
    let mut ge_instances = 0;
    let mut ge_moves = 0usize;
    while ge_instances < 55 {
        let m = 4 + rng.below(5); // 4..8
        let n = 4 + rng.below(5);
        let k = 1 + rng.below(4.min(m.min(n) - 1));
        let a = gen::gaussian(m, n, rng.next_u64());
        let lu = match ge::gecp_partial(&a, k) {
            Ok(lu) => lu,
            Err(_) => continue,
        };
        ge_instances += 1;
        let base = oracle::det_lu(&lu.a11).abs();
        for mv in neighbor_moves_ge(k, m, n) {
            let mut rows = lu.row_perm[..k].to_vec();
            let mut cols = lu.col_perm[..k].to_vec();
            match mv {
                GeMove::Row { i, j } => rows[i] = lu.row_perm[k + j],
                GeMove::Col { s, t } => cols[s] = lu.col_perm[k + t],
                GeMove::Both { i, j, s, t } => {
                    rows[i] = lu.row_perm[k + j];
                    cols[s] = lu.col_perm[k + t];
                }
            }
            let block = a.extract(&Selection::new(rows, cols)).unwrap();
            let slow = oracle::det_lu(&block).abs() / base;
            let fast = ge::ge_ratio(&lu, &mv);
            assert!(
                (fast - slow).abs() <= 1e-9 * slow.max(1.0),
                "GE {m}x{n} k={k} move {mv:?}: {fast} vs {slow}"
            );
            ge_moves += 1;
        }
    }

    let mut qr_instances = 0;
    let mut qr_moves = 0usize;
    while qr_instances < 55 {
        let m = 5 + rng.below(4); // 5..8
        let n = 3 + rng.below(3); // 3..5
        let k = 1 + rng.below(3.min(n - 1));
        let a = gen::gaussian(m, n, rng.next_u64());
        let qr_state = match qr::cpqr_partial(&a, k) {
            Ok(q) => q,
            Err(_) => continue,
        };
        qr_instances += 1;
        let base = svd::log_volume(&a.extract(&qr_state.selection().canonical()).unwrap()).unwrap();
        for mv in neighbor_moves_qr(k, n) {
            let mut cols = qr_state.col_perm[..k].to_vec();
            cols[mv.i] = qr_state.col_perm[k + mv.t];
            let block = a.extract(&Selection::columns(m, cols)).unwrap();
            let lv = svd::log_volume(&block).unwrap();
            let slow = if lv == f64::NEG_INFINITY {
                0.0
            } else {
                (lv - base).exp()
            };
            let fast = qr::qr_ratio(&qr_state, &mv);
            assert!(
                (fast - slow).abs() <= 1e-9 * slow.max(1.0),
                "QR {m}x{n} k={k} move {mv:?}: {fast} vs {slow}"
            );
            qr_moves += 1;
        }
    }
    println!(
        "[acceptance 02] PASS ratio-formula oracles: {ge_instances} GE instances ({ge_moves} moves), {qr_instances} QR instances ({qr_moves} moves) matched to 1e-9"
    );
}

/// Criterion 3: search terminations pass the independent exhaustive
/// verifier; brute-force global maxima always certify at gamma = 1.
#[test]
fn c03_certification() {
    let mut verified = 0usize;
    let mut rng = gen::Rng::seeded(33_003);
    for _ in 0..14 {
        let m = 6 + rng.below(6); // 6..12
        let n = 6 + rng.below(6);
        let a = gen::gaussian(m, n, rng.next_u64());
        for k in [1usize, 2, 3] {
            for gamma in [1.0, 2.0] {
                // Keep the exhaustive verification affordable.
                if neighbor_count(Mode::Ge, k, m, n) > 200_000 {
                    continue;
                }
                let (lu, _) = ge_local_maxvol(&a, k, &SearchConfig::new(gamma)).unwrap();
                let v = verify_local_maxvol(Mode::Ge, &a, &lu.selection(), gamma).unwrap();
                assert!(
                    v.passed,
                    "GE {m}x{n} k={k} gamma={gamma}: worst {}",
                    v.worst_ratio
                );
                // Interpolative bounds follow the certified gamma; at
                // gamma = 1 this is the entrywise Cramer bound.
                let (wb, zb) = ge::interpolative_bounds_ge(&lu);
                assert!(wb <= gamma + 1e-8 && zb <= gamma + 1e-8);
                verified += 1;

                let (qrf, _) = qr_local_maxvol(&a, k, &SearchConfig::new(gamma)).unwrap();
                let v = verify_local_maxvol(Mode::Qr, &a, &qrf.selection(), gamma).unwrap();
                assert!(
                    v.passed,
                    "QR {m}x{n} k={k} gamma={gamma}: worst {}",
                    v.worst_ratio
                );
                verified += 1;
            }
        }
    }
    // Structured matrices with exact ties exercise the tie handling.
    for (id, a, k) in [
        ("example-blockdiag", gen::example_2_1(), 2usize),
        ("sharpness", gen::sharpness_ge(9, 9, 4), 4),
        ("kahan-gram", gen::kahan_gram(8, 0.6, gen::DEFAULT_KAHAN_TAU), 3),
    ] {
        let (lu, _) = ge_local_maxvol(&a, k, &SearchConfig::new(1.0)).unwrap();
        let v = verify_local_maxvol(Mode::Ge, &a, &lu.selection(), 1.0).unwrap();
        assert!(v.passed, "{id}: worst {}", v.worst_ratio);
        verified += 1;
    }

    // Brute-force global maxima (instance sizes within the 1e5 guard)
    // certify locally at gamma = 1.
    let mut brute = 0usize;
    let brute_plan: [(usize, usize, usize, usize); 5] =
        [(6, 6, 2, 2), (7, 7, 3, 3), (8, 6, 2, 2), (9, 9, 2, 2), (5, 8, 2, 3)];
    for (m, n, p, q) in brute_plan {
        let a = gen::gaussian(m, n, 500 + (m * n) as u64);
        let (sel, _) = brute_force_global_maxvol(&a, p, q).unwrap();
        if p == q {
            let v = verify_local_maxvol(Mode::Ge, &a, &sel, 1.0).unwrap();
            assert!(v.passed, "{m}x{n} p={p} q={q}: worst {}", v.worst_ratio);
        } else {
            // Rectangular blocks fall outside the GE/QR move types; check
            // the neighbor definition directly. A "row option" is either
            // keeping the rows or swapping one out for one in, likewise
            // for columns.
            let base = svd::log_volume(&a.extract(&sel).unwrap()).unwrap();
            let rows = &sel.row_idx;
            let cols = &sel.col_idx;
            let out_rows: Vec<usize> = (0..m).filter(|r| !rows.contains(r)).collect();
            let out_cols: Vec<usize> = (0..n).filter(|c| !cols.contains(c)).collect();
            let mut row_options = vec![rows.clone()];
            for ri in 0..rows.len() {
                for &rin in &out_rows {
                    let mut r2 = rows.clone();
                    r2[ri] = rin;
                    row_options.push(r2);
                }
            }
            let mut col_options = vec![cols.clone()];
            for ci in 0..cols.len() {
                for &cin in &out_cols {
                    let mut c2 = cols.clone();
                    c2[ci] = cin;
                    col_options.push(c2);
                }
            }
            for r2 in &row_options {
                for c2 in &col_options {
                    let lv = svd::log_volume(
                        &a.extract(&Selection::new(r2.clone(), c2.clone())).unwrap(),
                    )
                    .unwrap();
                    assert!(lv <= base + 1e-9, "neighbor log-volume {lv} beats {base}");
                }
            }
        }
        // Global maxvol output is also a gamma = 1 output of the graph.
        brute += 1;
    }
    let a = gen::example_2_1();
    let (sel, _) = brute_force_global_maxvol(&a, 2, 2).unwrap();
    let v = verify_local_maxvol(Mode::Ge, &a, &sel, 1.0).unwrap();
    assert!(v.passed);
    brute += 1;

    println!(
        "[acceptance 03] PASS certification: {verified} search terminations verified exhaustively, {brute} brute-force maxima certified at gamma=1"
    );
}

/// Criterion 4: the GE sharpness matrix at m = n = 20, k = 5.
#[test]
fn c04_sharpness_reproduction() {
    let (m, n, k) = (20usize, 20usize, 5usize);
    let a = gen::sharpness_ge(m, n, k);
    let sel = Selection::new((0..k).collect(), (0..k).collect());

    let v = verify_local_maxvol(Mode::Ge, &a, &sel, 1.0).unwrap();
    assert!(v.passed, "principal pivot must certify at gamma = 1");
    assert!(
        (v.worst_ratio - 0.5).abs() <= 1e-10,
        "worst neighbor ratio {} != 1/2",
        v.worst_ratio
    );

    let rp: Vec<usize> = (0..m).collect();
    let lu = ge::partial_lu_given(&a, &rp, &rp, k).unwrap();
    let (x, y) = ge::ge_lowrank(&lu);
    let residual = a.sub(&x.matmul(&y.transpose()));
    let sigma1_resid = svd::svd(&residual).unwrap().singular_values[0];
    let expected = (k + 2) as f64 / 2.0 * (((m - k) * (n - k)) as f64).sqrt();
    assert!(
        (sigma1_resid - expected).abs() <= 1e-8,
        "sigma1(A - A_k) = {sigma1_resid}, expected {expected}"
    );

    let sigma6 = svd::svd(&a).unwrap().singular_values[k];
    assert!(sigma6 <= 2.0, "sigma_(k+1) = {sigma6} > 2");

    let floor_ratio = (k + 2) as f64 * (((m - k) * (n - k)) as f64).sqrt() / 4.0;
    assert!(sigma1_resid / sigma6 >= floor_ratio);
    println!(
        "[acceptance 04] PASS sharpness: worst neighbor ratio {:.12}, sigma1(A-A_k) = {sigma1_resid:.6}, sigma_(k+1) = {sigma6:.6} <= 2, gap ratio {:.2} >= {floor_ratio}",
        v.worst_ratio,
        sigma1_resid / sigma6
    );
}

/// Criterion 5: necessity bounds hold on every corpus factorization, and
/// the two witnesses attain them exactly.
#[test]
fn c05_necessity() {
    let records = sweep();
    let mut min_margin = f64::INFINITY;
    for r in records.iter() {
        assert!(
            r.necessity_ok,
            "{} mode {:?} k={}: metric exceeds the necessity bound by {:.3e}",
            r.id, r.mode, r.k, -r.necessity_margin
        );
        min_margin = min_margin.min(r.necessity_margin);
    }

    let mu = 3.0;
    let a = gen::necessity_example(gen::NecessityExample::SpectralGap { mu });
    let sel = Selection::new(vec![0, 1], vec![0, 1]);
    let metric = mu_metric(&a, &sel, Mode::Ge).unwrap();
    assert!((metric - mu * mu).abs() <= 1e-10, "witness metric {metric}");

    let nu = 2.5;
    let b = gen::necessity_example(gen::NecessityExample::InterpolativeGap { nu });
    let sel = Selection::new(vec![0, 1, 2], vec![0, 1, 2]);
    let metric_b = mu_metric(&b, &sel, Mode::Ge).unwrap();
    assert!((metric_b - nu * nu).abs() <= 1e-10, "witness metric {metric_b}");

    println!(
        "[acceptance 05] PASS necessity: {} factorizations within bound (smallest margin {:.3e}); witnesses attain mu^2 = {:.6} and nu^2 = {:.6} exactly",
        records.len(),
        min_margin,
        metric,
        metric_b
    );
}

/// Criterion 6: adversarial triangular family, n = 10, s = 0.6. The
/// leading-9 selection has exponentially large metric in both modes.
#[test]
fn c06_adversarial_triangular() {
    let n = 10;
    let s = gen::DEFAULT_KAHAN_S;
    let k = n - 1;

    let kn = gen::kahan(n, s);
    let qr_sel = Selection::columns(n, (0..k).collect());
    let qr_metric = mu_metric(&kn, &qr_sel, Mode::Qr).unwrap();
    let qr_bound = s * (1.0 + s).powi(k as i32 - 1);
    assert!(qr_metric >= qr_bound, "QR metric {qr_metric} < {qr_bound}");
    let v = verify_local_maxvol(Mode::Qr, &kn, &qr_sel, 1.0).unwrap();
    assert!(!v.passed);
    assert!(
        (v.worst_ratio - qr_metric).abs() <= 1e-8 * qr_metric,
        "verifier {} vs fast {qr_metric}",
        v.worst_ratio
    );

    let gram = gen::kahan_gram(n, s, 0.0);
    let ge_sel = Selection::new((0..k).collect(), (0..k).collect());
    let ge_metric = mu_metric(&gram, &ge_sel, Mode::Ge).unwrap();
    let ge_bound = s * s * (1.0 + s).powi(2 * (k as i32 - 1));
    assert!(ge_metric >= ge_bound, "GE metric {ge_metric} < {ge_bound}");
    let v = verify_local_maxvol(Mode::Ge, &gram, &ge_sel, 1.0).unwrap();
    assert!(
        (v.worst_ratio - ge_metric).abs() <= 1e-8 * ge_metric,
        "verifier {} vs fast {ge_metric}",
        v.worst_ratio
    );

    println!(
        "[acceptance 06] PASS adversarial triangular: QR metric {qr_metric:.3} >= {qr_bound:.3}, GE metric {ge_metric:.1} >= {ge_bound:.1}, verifier agrees to 1e-8"
    );
}

/// Criterion 7 (soft): metric distribution over 500 seeded Gaussian
/// trials at 50x50, k = 20.
#[test]
fn c07_metric_histograms() {
    let trials = 500;
    let (m, n, k) = (50usize, 50usize, 20usize);
    let mut max_ge = 0.0_f64;
    let mut max_qr = 0.0_f64;
    for t in 0..trials {
        let seed = gen::Rng::stream(7_777, t).next_u64();
        let a = gen::gaussian(m, n, seed);
        let lu = ge::gecp_partial(&a, k).unwrap();
        max_ge = max_ge.max(ge::max_neighbor_ratio_ge(&lu).0.max(1.0));
        let qr_state = qr::cpqr_partial(&a, k).unwrap();
        max_qr = max_qr.max(qr::max_neighbor_ratio_qr(&qr_state).0.max(1.0));
    }
    // Observed ceilings in the source experiments: 2 for complete
    // pivoting, sqrt(2) for column pivoting. Statistical claim, so only
    // warn outside the soft thresholds.
    let mut status = "PASS";
    if max_ge > 2.5 || max_qr > 1.6 {
        status = "WARN";
    }
    println!(
        "[acceptance 07] {status} metric histograms: {trials} trials, max GE-pivot metric {max_ge:.4} (soft limit 2.5, observed ceiling 2), max QR-pivot metric {max_qr:.4} (soft limit 1.6, observed ceiling sqrt(2) = {:.4})",
        2.0_f64.sqrt()
    );
}

/// Criterion 8: hard path-length bound for greedy-initialized QR
/// searches at gamma = 2 over the whole corpus sweep.
#[test]
fn c08_qr_path_bound() {
    let records = sweep();
    let mut checked = 0usize;
    let mut longest = 0usize;
    for r in records.iter().filter(|r| r.mode == Mode::Qr) {
        assert!(
            r.path_bound_ok,
            "{} k={}: path length {} exceeds the greedy-start bound",
            r.id, r.k, r.path_length
        );
        checked += 1;
        longest = longest.max(r.path_length);
    }
    // A larger instance from the search examples: 500x500 Gaussian,
    // k = 20, gamma = 2.
    let a = gen::gaussian(500, 500, 4242);
    let (_, report) = qr_local_maxvol(&a, 20, &SearchConfig::new(2.0)).unwrap();
    let bound = 20.0 + (480.0_f64).log2() / 2.0;
    assert!(
        (report.path_length as f64) <= bound,
        "path {} exceeds {bound}",
        report.path_length
    );
    println!(
        "[acceptance 08] PASS QR path bound: {checked} greedy gamma=2 searches within k + log2(n-k)/2 (longest path {longest}; 500x500 path {} <= {bound:.1})",
        report.path_length
    );
}

/// Criterion 9 (soft): wall-clock comparison of near-maxvol searches vs
/// their greedy baselines on a 500x500 Gaussian matrix.
#[test]
fn c09_timing_comparison() {
    let a = gen::gaussian(500, 500, 31_337);
    let mut lines = Vec::new();
    let mut worst_ratio = 0.0_f64;
    for k in [50usize, 150, 300, 500] {
        let t0 = Instant::now();
        let _ = ge::gecp_partial(&a, k).unwrap();
        let ge_base = t0.elapsed().as_secs_f64();
        let t1 = Instant::now();
        let (_, ge_report) = ge_local_maxvol(&a, k, &SearchConfig::new(GE_GAMMA)).unwrap();
        let ge_search = t1.elapsed().as_secs_f64();

        let t2 = Instant::now();
        let _ = qr::cpqr_partial(&a, k).unwrap();
        let qr_base = t2.elapsed().as_secs_f64();
        let t3 = Instant::now();
        let (_, qr_report) = qr_local_maxvol(&a, k, &SearchConfig::new(QR_GAMMA)).unwrap();
        let qr_search = t3.elapsed().as_secs_f64();

        let ge_ratio = ge_search / ge_base;
        let qr_ratio = qr_search / qr_base;
        worst_ratio = worst_ratio.max(ge_ratio).max(qr_ratio);
        lines.push(format!(
            "k={k}: GE {ge_ratio:.2}x ({} swaps), QR {qr_ratio:.2}x ({} swaps)",
            ge_report.path_length, qr_report.path_length
        ));
    }
    let status = if worst_ratio <= 4.0 { "PASS" } else { "WARN" };
    println!(
        "[acceptance 09] {status} timing comparison (soft limit 4x; searches rebuild their cached blocks after every swap): {}",
        lines.join("; ")
    );
}

/// Criterion 10: kernel matrices on a 300-point grid, k = 5: the greedy
/// pivot's measured metric stays small (soft), and the sandwich holds
/// with the measured metric (hard).
#[test]
fn c10_kernel_experiment() {
    let k = 5;
    let kernels: [(String, gen::Kernel); 6] = [
        ("runge-1".into(), gen::Kernel::RungeLike { beta: 1.0 }),
        ("runge-10".into(), gen::Kernel::RungeLike { beta: 10.0 }),
        ("runge-100".into(), gen::Kernel::RungeLike { beta: 100.0 }),
        ("wendland-0".into(), gen::Kernel::Wendland { s: 0 }),
        ("wendland-1".into(), gen::Kernel::Wendland { s: 1 }),
        ("wendland-3".into(), gen::Kernel::Wendland { s: 3 }),
    ];
    let mut max_metric = 0.0_f64;
    let mut warned = false;
    for (id, kernel) in kernels {
        let a = gen::kernel_matrix(&gen::KernelSpec { kernel, grid: 300 });
        let lu = ge::gecp_partial(&a, k).unwrap();
        let metric = ge::max_neighbor_ratio_ge(&lu).0.max(1.0);
        max_metric = max_metric.max(metric);
        if metric > 2.0 {
            warned = true;
        }
        let (x, y) = ge::ge_lowrank(&lu);
        let profile = mu_factor(Mode::Ge, 300, 300, k, metric);
        let sandwich = validate_sandwich(&a, &x, &y, profile.mu_factor).unwrap();
        assert!(
            sandwich.passed,
            "{id}: sandwich with measured metric {metric} failed (leading {:.3e}, trailing {:.3e})",
            sandwich.worst_leading, sandwich.worst_trailing
        );
    }
    let status = if warned { "WARN" } else { "PASS" };
    println!(
        "[acceptance 10] {status} kernel experiment: 6 kernels at 300x300, k=5, max greedy-pivot metric {max_metric:.4} (soft limit 2), sandwich with measured metric holds on all"
    );
}
