//! Command-line front end.
//!
//! Subcommands: `gen`, `factor`, `metric`, `svd`, `verify`, `experiment`.
//! Matrices travel as Matrix Market files; experiment artifacts are CSV
//! and JSON(-lines) with a `schema_version` field.
//!
//! Exit codes: 0 success, 1 verification reported a failed certificate,
//! 2 usage or I/O problems, 3 rank deficiency, 4 iteration cap.

mod experiments;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rankrev::assess::{mu_factor, mu_metric};
use rankrev::matrix::{DenseMatrix, Selection};
use rankrev::search::{ge_local_maxvol, qr_local_maxvol, verify_local_maxvol, Init, Mode, SearchConfig};
use rankrev::{gen, ge, mm, qr, store, svd, Error};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "rankrev", version, about = "Rank-revealing factorizations with near-local maximum volume pivoting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a corpus matrix and write it as Matrix Market.
    Gen(GenArgs),
    /// Factorize a matrix (greedy pivoting or maxvol search) and store
    /// the blocks plus the search report.
    Factor(FactorArgs),
    /// Evaluate the pivot-quality metric of a selection and the derived
    /// sandwich factors.
    Metric(MetricArgs),
    /// Compute singular values of a matrix.
    Svd(SvdArgs),
    /// Exhaustively verify a gamma-local maxvol certificate.
    Verify(VerifyArgs),
    /// Run one of the named desk-scale experiments.
    Experiment(experiments::ExperimentArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CliMode {
    Ge,
    Qr,
}

impl From<CliMode> for Mode {
    fn from(m: CliMode) -> Mode {
        match m {
            CliMode::Ge => Mode::Ge,
            CliMode::Qr => Mode::Qr,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CliInit {
    Greedy,
    Given,
    Random,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PivotKind {
    /// Near-local maxvol search (greedy start unless overridden).
    Maxvol,
    /// Greedy baseline only (complete pivoting / column pivoting).
    Greedy,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MatrixKind {
    Gaussian,
    Kahan,
    KahanGram,
    SharpnessGe,
    SharpnessQr,
    NecessitySpectral,
    NecessityInterp,
    ExampleBlockdiag,
    Kernel,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KernelKind {
    Runge,
    Wendland,
    RungeRing,
}

#[derive(Args)]
struct GenArgs {
    /// Which generator to run.
    #[arg(long, value_enum)]
    matrix: MatrixKind,
    #[arg(long, default_value_t = 50)]
    m: usize,
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[arg(long, default_value_t = 5)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Kahan parameter with 0 < s < 1.
    #[arg(long, default_value_t = gen::DEFAULT_KAHAN_S)]
    s: f64,
    /// Diagonal perturbation for the Kahan family (0 disables it).
    #[arg(long, default_value_t = gen::DEFAULT_KAHAN_TAU)]
    tau: f64,
    /// Spectral-gap parameter of the first necessity witness.
    #[arg(long, default_value_t = 4.0)]
    mu: f64,
    /// Interpolative parameter of the second necessity witness.
    #[arg(long, default_value_t = 3.0)]
    nu: f64,
    #[arg(long, value_enum, default_value_t = KernelKind::Runge)]
    kernel: KernelKind,
    #[arg(long, default_value_t = 100.0)]
    beta: f64,
    /// Wendland smoothness index (0, 1, or 3).
    #[arg(long, default_value_t = 0)]
    smoothness: u8,
    /// Chebyshev points per dimension.
    #[arg(long, default_value_t = 300)]
    grid: usize,
    /// Output directory (the filename is parameter-stamped) or full path
    /// ending in .mtx.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct FactorArgs {
    /// Input matrix (Matrix Market).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    mode: CliMode,
    #[arg(long)]
    k: usize,
    /// Relaxation factor; defaults to 3 for GE and 2 for QR.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, value_enum, default_value_t = PivotKind::Maxvol)]
    pivot: PivotKind,
    #[arg(long, value_enum, default_value_t = CliInit::Greedy)]
    init: CliInit,
    /// Selection JSON file (for --init given).
    #[arg(long)]
    selection: Option<PathBuf>,
    /// Seed (for --init random).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory for the factor blocks and report.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MetricArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    mode: CliMode,
    /// Use the leading-k selection when no selection file is given.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    selection: Option<PathBuf>,
}

#[derive(Args)]
struct SvdArgs {
    #[arg(long)]
    input: PathBuf,
    /// Write sigma as CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    mode: CliMode,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Use the leading-k selection when no selection file is given.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    selection: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::RankDeficient { .. } => ExitCode::from(3),
                Error::IterationCap { .. } => ExitCode::from(4),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Factor(args) => cmd_factor(args),
        Command::Metric(args) => cmd_metric(args),
        Command::Svd(args) => cmd_svd(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Experiment(args) => experiments::run(args),
    }
}

// ── gen ─────────────────────────────────────────────────────────────

fn cmd_gen(args: GenArgs) -> Result<ExitCode, Error> {
    let (stem, matrix) = build_matrix(&args)?;
    let path = if args.out.extension().is_some_and(|e| e == "mtx") {
        args.out.clone()
    } else {
        std::fs::create_dir_all(&args.out).map_err(|e| Error::Io {
            path: args.out.display().to_string(),
            source: e,
        })?;
        args.out.join(format!("{stem}.mtx"))
    };
    mm::write_matrix(&path, &matrix)?;
    println!("{}", path.display());
    Ok(ExitCode::SUCCESS)
}

fn build_matrix(args: &GenArgs) -> Result<(String, DenseMatrix), Error> {
    let invalid = |msg: &str| Err(Error::InvalidArgument(msg.into()));
    match args.matrix {
        MatrixKind::Kahan | MatrixKind::KahanGram if args.n < 1 => {
            return invalid("--n must be at least 1");
        }
        MatrixKind::Kahan | MatrixKind::KahanGram if !(args.s > 0.0 && args.s < 1.0) => {
            return invalid("--s must satisfy 0 < s < 1");
        }
        MatrixKind::SharpnessGe if args.k < 2 || args.k > args.m.min(args.n) => {
            return invalid("sharpness-ge needs 2 <= k <= min(m, n)");
        }
        MatrixKind::SharpnessQr if args.k < 2 || args.n < args.k + 1 => {
            return invalid("sharpness-qr needs k >= 2 and n >= k + 1");
        }
        MatrixKind::NecessitySpectral if args.mu <= 1.0 => {
            return invalid("--mu must exceed 1");
        }
        MatrixKind::NecessityInterp if args.nu <= 1.0 => {
            return invalid("--nu must exceed 1");
        }
        MatrixKind::Kernel if args.grid < 2 => {
            return invalid("--grid must be at least 2");
        }
        MatrixKind::Kernel
            if args.kernel == KernelKind::Wendland && ![0, 1, 3].contains(&args.smoothness) =>
        {
            return invalid("--smoothness must be 0, 1, or 3");
        }
        MatrixKind::Gaussian if args.m < 1 || args.n < 1 => {
            return invalid("--m and --n must be at least 1");
        }
        _ => {}
    }
    let out = match args.matrix {
        MatrixKind::Gaussian => (
            format!("gaussian_m{}_n{}_seed{}", args.m, args.n, args.seed),
            gen::gaussian(args.m, args.n, args.seed),
        ),
        MatrixKind::Kahan => (
            format!("kahan_n{}_s{}_tau{:e}", args.n, args.s, args.tau),
            gen::kahan_perturbed(args.n, args.s, args.tau),
        ),
        MatrixKind::KahanGram => (
            format!("kahan_gram_n{}_s{}_tau{:e}", args.n, args.s, args.tau),
            gen::kahan_gram(args.n, args.s, args.tau),
        ),
        MatrixKind::SharpnessGe => (
            format!("sharpness_ge_m{}_n{}_k{}", args.m, args.n, args.k),
            gen::sharpness_ge(args.m, args.n, args.k),
        ),
        MatrixKind::SharpnessQr => (
            format!("sharpness_qr_k{}_n{}", args.k, args.n),
            gen::sharpness_qr(args.k, args.n),
        ),
        MatrixKind::NecessitySpectral => (
            format!("necessity_spectral_mu{}", args.mu),
            gen::necessity_example(gen::NecessityExample::SpectralGap { mu: args.mu }),
        ),
        MatrixKind::NecessityInterp => (
            format!("necessity_interp_nu{}", args.nu),
            gen::necessity_example(gen::NecessityExample::InterpolativeGap { nu: args.nu }),
        ),
        MatrixKind::ExampleBlockdiag => ("example_blockdiag".to_string(), gen::example_2_1()),
        MatrixKind::Kernel => {
            let (name, kernel) = match args.kernel {
                KernelKind::Runge => (
                    format!("kernel_runge_beta{}", args.beta),
                    gen::Kernel::RungeLike { beta: args.beta },
                ),
                KernelKind::Wendland => (
                    format!("kernel_wendland_s{}", args.smoothness),
                    gen::Kernel::Wendland { s: args.smoothness },
                ),
                KernelKind::RungeRing => ("kernel_runge_ring".to_string(), gen::Kernel::RungeRing),
            };
            (
                format!("{name}_grid{}", args.grid),
                gen::kernel_matrix(&gen::KernelSpec {
                    kernel,
                    grid: args.grid,
                }),
            )
        }
    };
    Ok(out)
}

// ── factor ──────────────────────────────────────────────────────────

fn load_selection(path: &Path) -> Result<Selection, Error> {
    store::read_selection(path)
}

fn search_init(args: &FactorArgs, a: &DenseMatrix, mode: Mode) -> Result<Init, Error> {
    Ok(match args.init {
        CliInit::Greedy => Init::Greedy,
        CliInit::Random => Init::RandomSeeded(args.seed),
        CliInit::Given => {
            let path = args.selection.as_ref().ok_or_else(|| {
                Error::InvalidArgument("--init given requires --selection".into())
            })?;
            let mut sel = load_selection(path)?;
            if mode == Mode::Qr {
                sel = Selection::columns(a.rows(), sel.col_idx);
            }
            Init::Given(sel)
        }
    })
}

fn cmd_factor(args: FactorArgs) -> Result<ExitCode, Error> {
    let a = mm::read_matrix(&args.input)?;
    let mode: Mode = args.mode.into();
    let gamma = args.gamma.unwrap_or(match mode {
        Mode::Ge => 3.0,
        Mode::Qr => 2.0,
    });
    if gamma < 1.0 {
        return Err(Error::InvalidArgument("--gamma must be at least 1".into()));
    }
    let limit = a.rows().min(a.cols());
    if args.k < 1 || args.k > limit {
        return Err(Error::InvalidArgument(format!(
            "--k must be between 1 and min(m, n) = {limit}"
        )));
    }

    let summary = match (mode, args.pivot) {
        (Mode::Ge, PivotKind::Greedy) => {
            let lu = ge::gecp_partial(&a, args.k)?;
            store::write_partial_lu(&args.out, &lu, None)?;
            serde_json::json!({
                "schema_version": 1,
                "mode": "ge",
                "pivot": "greedy",
                "k": args.k,
                "selection": lu.selection(),
                "log_volume": lu.log_volume,
            })
        }
        (Mode::Qr, PivotKind::Greedy) => {
            let qr_state = qr::cpqr_partial(&a, args.k)?;
            store::write_partial_qr(&args.out, &qr_state, None)?;
            serde_json::json!({
                "schema_version": 1,
                "mode": "qr",
                "pivot": "greedy",
                "k": args.k,
                "selection": qr_state.selection(),
                "log_volume": qr_state.log_volume,
            })
        }
        (Mode::Ge, PivotKind::Maxvol) => {
            let config = SearchConfig {
                gamma,
                init: search_init(&args, &a, mode)?,
                max_swaps: None,
            };
            let (lu, report) = ge_local_maxvol(&a, args.k, &config)?;
            store::write_partial_lu(&args.out, &lu, Some(&report))?;
            // Path-length bound from the greedy-start volume guarantee,
            // with the growth-factor constant; reporting only.
            let theoretical_cap = (gamma > 1.0).then(|| {
                rankrev::search::ge_theoretical_path_bound(a.rows(), a.cols(), args.k, gamma, None)
            });
            serde_json::json!({
                "schema_version": 1,
                "mode": "ge",
                "pivot": "maxvol",
                "k": args.k,
                "gamma": gamma,
                "path_length": report.path_length,
                "certified_gamma": report.certified_gamma,
                "theoretical_path_bound": theoretical_cap,
                "selection": lu.selection(),
                "log_volume": lu.log_volume,
            })
        }
        (Mode::Qr, PivotKind::Maxvol) => {
            let config = SearchConfig {
                gamma,
                init: search_init(&args, &a, mode)?,
                max_swaps: None,
            };
            let (qr_state, report) = qr_local_maxvol(&a, args.k, &config)?;
            store::write_partial_qr(&args.out, &qr_state, Some(&report))?;
            serde_json::json!({
                "schema_version": 1,
                "mode": "qr",
                "pivot": "maxvol",
                "k": args.k,
                "gamma": gamma,
                "path_length": report.path_length,
                "certified_gamma": report.certified_gamma,
                "selection": qr_state.selection(),
                "log_volume": qr_state.log_volume,
            })
        }
    };
    println!("{summary}");
    Ok(ExitCode::SUCCESS)
}

// ── metric ──────────────────────────────────────────────────────────

fn resolve_selection(
    input: &DenseMatrix,
    mode: Mode,
    k: Option<usize>,
    selection: Option<&PathBuf>,
) -> Result<Selection, Error> {
    match selection {
        Some(path) => {
            let sel = load_selection(path)?;
            Ok(match mode {
                Mode::Qr => Selection::columns(input.rows(), sel.col_idx),
                Mode::Ge => sel,
            })
        }
        None => {
            let k = k.ok_or_else(|| {
                Error::InvalidArgument("either --selection or --k is required".into())
            })?;
            Ok(match mode {
                Mode::Ge => Selection::new((0..k).collect(), (0..k).collect()),
                Mode::Qr => Selection::columns(input.rows(), (0..k).collect()),
            })
        }
    }
}

fn cmd_metric(args: MetricArgs) -> Result<ExitCode, Error> {
    let a = mm::read_matrix(&args.input)?;
    let mode: Mode = args.mode.into();
    let sel = resolve_selection(&a, mode, args.k, args.selection.as_ref())?;
    let k = sel.col_idx.len();
    let metric = mu_metric(&a, &sel, mode)?;
    let profile = mu_factor(mode, a.rows(), a.cols(), k, metric);
    // Conditioning of the selected columns, as interpolation-style
    // consumers judge it.
    let r11_inverse_norm = match mode {
        Mode::Qr => {
            let cp = qr::extend_to_permutation(&sel.col_idx, a.cols())?;
            let qr_state = qr::partial_qr_given(&a, &cp, k)?;
            Some(qr::r11_inverse_spectral_norm(&qr_state)?)
        }
        Mode::Ge => None,
    };
    let out = serde_json::json!({
        "schema_version": 1,
        "mode": match mode { Mode::Ge => "ge", Mode::Qr => "qr" },
        "m": a.rows(),
        "n": a.cols(),
        "k": k,
        "mu_b": metric,
        "sandwich_factor": profile.mu_factor,
        "r11_inverse_norm": r11_inverse_norm,
    });
    println!("{out}");
    Ok(ExitCode::SUCCESS)
}

// ── svd ─────────────────────────────────────────────────────────────

fn cmd_svd(args: SvdArgs) -> Result<ExitCode, Error> {
    let a = mm::read_matrix(&args.input)?;
    let result = svd::svd(&a)?;
    let mut csv = String::from("j,sigma\n");
    for (j, s) in result.singular_values.iter().enumerate() {
        csv.push_str(&format!("{j},{s:.17e}\n"));
    }
    match args.out {
        Some(path) => {
            std::fs::write(&path, csv).map_err(|e| Error::Io {
                path: path.display().to_string(),
                source: e,
            })?;
            println!("{}", path.display());
        }
        None => print!("{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}

// ── verify ──────────────────────────────────────────────────────────

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Error> {
    let a = mm::read_matrix(&args.input)?;
    let mode: Mode = args.mode.into();
    let sel = resolve_selection(&a, mode, args.k, args.selection.as_ref())?;
    let v = verify_local_maxvol(mode, &a, &sel, args.gamma)?;
    let out = serde_json::json!({
        "schema_version": 1,
        "gamma": args.gamma,
        "passed": v.passed,
        "worst_ratio": v.worst_ratio,
        "worst_move": v.worst_move,
        "neighbors": v.neighbors,
    });
    println!("{out}");
    Ok(if v.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
