//! Rank-revealing dense factorizations built on (near-)local maximum
//! volume pivoting.
//!
//! The crate provides partial LU and QR factorizations whose pivot blocks
//! are searched for on the volume submatrix graph, the O(1) swap-ratio
//! formulas that make that search cheap, a self-contained SVD oracle for
//! volumes and verification, the neighbor-ratio pivot-quality metric with
//! its closed-form sandwich factors, and deterministic generators for the
//! adversarial and kernel test corpus.

pub mod assess;
pub mod error;
pub mod ge;
pub mod gen;
pub mod matrix;
pub mod mm;
pub mod oracle;
pub mod qr;
pub mod search;
pub mod store;
pub mod svd;
pub mod tol;

pub use error::{Error, Result};
pub use ge::{ge_lowrank, ge_ratio, gecp_partial, interpolative_bounds_ge, GeMove, PartialLu};
pub use matrix::{solve_triangular, DenseMatrix, Selection, Side, Triangle};
pub use qr::{
    cpqr_partial, interpolative_bound_qr, qr_lowrank, qr_ratio, PartialQr, QrMove,
};
pub use search::{
    brute_force_global_maxvol, ge_local_maxvol, neighbor_count, qr_local_maxvol, run_search,
    verify_local_maxvol, Init, Mode, Move, SearchConfig, SearchReport,
};
pub use svd::{log_volume, svd, volume, SvdResult};
