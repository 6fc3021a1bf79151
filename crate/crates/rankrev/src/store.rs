//! On-disk layout for factorizations: a directory of Matrix Market block
//! files plus a small metadata text file and the selection as JSON.

use crate::error::{Error, Result};
use crate::ge::PartialLu;
use crate::matrix::Selection;
use crate::mm;
use crate::qr::PartialQr;
use crate::search::SearchReport;
use std::fmt::Write as _;
use std::path::Path;

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

fn write_metadata(
    dir: &Path,
    kind: &str,
    k: usize,
    row_perm: Option<&[usize]>,
    col_perm: &[usize],
    report: Option<&SearchReport>,
) -> Result<()> {
    let mut text = String::new();
    writeln!(text, "kind = {kind}").unwrap();
    writeln!(text, "k = {k}").unwrap();
    if let Some(rp) = row_perm {
        writeln!(text, "row_perm = {}", join(rp)).unwrap();
    }
    writeln!(text, "col_perm = {}", join(col_perm)).unwrap();
    if let Some(r) = report {
        writeln!(text, "gamma = {}", r.gamma).unwrap();
        writeln!(text, "path_length = {}", r.path_length).unwrap();
    }
    let path = dir.join("metadata.txt");
    std::fs::write(&path, text).map_err(|e| io_err(&path, e))
}

fn join(idx: &[usize]) -> String {
    idx.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn write_selection(dir: &Path, sel: &Selection) -> Result<()> {
    let path = dir.join("selection.json");
    let body = serde_json::to_string_pretty(sel).expect("selection serializes");
    std::fs::write(&path, body).map_err(|e| io_err(&path, e))
}

/// Read back a `selection.json` file.
pub fn read_selection(path: &Path) -> Result<Selection> {
    let body = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&body)
        .map_err(|e| Error::InvalidArgument(format!("bad selection file {}: {e}", path.display())))
}

/// Write a partial LU factorization: `a11`, `w`, `z`, `schur` blocks plus
/// metadata, selection, and (optionally) the search report as JSON lines.
pub fn write_partial_lu(dir: &Path, lu: &PartialLu, report: Option<&SearchReport>) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    mm::write_matrix(&dir.join("a11.mtx"), &lu.a11)?;
    if lu.trailing_rows() > 0 {
        mm::write_matrix(&dir.join("w.mtx"), &lu.w)?;
    }
    if lu.trailing_cols() > 0 {
        mm::write_matrix(&dir.join("z.mtx"), &lu.z)?;
    }
    if lu.trailing_rows() > 0 && lu.trailing_cols() > 0 {
        mm::write_matrix(&dir.join("schur.mtx"), &lu.schur)?;
    }
    write_metadata(dir, "ge", lu.k, Some(&lu.row_perm), &lu.col_perm, report)?;
    write_selection(dir, &lu.selection())?;
    if let Some(r) = report {
        let path = dir.join("report.jsonl");
        std::fs::write(&path, r.to_jsonl()).map_err(|e| io_err(&path, e))?;
    }
    Ok(())
}

/// Write a partial QR factorization: `q1`, `r11`, `r12`, `r22_gram`
/// blocks plus metadata, selection, and the optional report.
pub fn write_partial_qr(dir: &Path, qr: &PartialQr, report: Option<&SearchReport>) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    mm::write_matrix(&dir.join("q1.mtx"), &qr.q1)?;
    mm::write_matrix(&dir.join("r11.mtx"), &qr.r11)?;
    if qr.trailing_cols() > 0 {
        mm::write_matrix(&dir.join("r12.mtx"), &qr.r12)?;
        mm::write_matrix(&dir.join("r22_gram.mtx"), &qr.r22_gram)?;
    }
    write_metadata(dir, "qr", qr.k, None, &qr.col_perm, report)?;
    write_selection(dir, &qr.selection())?;
    if let Some(r) = report {
        let path = dir.join("report.jsonl");
        std::fs::write(&path, r.to_jsonl()).map_err(|e| io_err(&path, e))?;
    }
    Ok(())
}
