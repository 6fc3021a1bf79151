//! Matrix Market reader and writer for dense real matrices.
//!
//! The writer emits the dense layout (`%%MatrixMarket matrix array real
//! general`), entries in column-major order per the format. The reader
//! accepts both `array` and `coordinate` variants of real general
//! matrices; coordinate entries not listed are zero.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::MatrixMarket {
        line,
        message: message.into(),
    }
}

/// Write `a` in array format with full round-trip precision.
pub fn write_matrix(path: &Path, a: &DenseMatrix) -> Result<()> {
    let mut out = Vec::with_capacity(32 + 24 * a.rows() * a.cols());
    writeln!(out, "%%MatrixMarket matrix array real general").unwrap();
    writeln!(out, "{} {}", a.rows(), a.cols()).unwrap();
    for j in 0..a.cols() {
        for i in 0..a.rows() {
            writeln!(out, "{:.17e}", a[(i, j)]).unwrap();
        }
    }
    std::fs::write(path, out).map_err(|e| io_err(path, e))
}

/// Read a dense or coordinate real general matrix.
pub fn read_matrix(path: &Path) -> Result<DenseMatrix> {
    let file = std::fs::File::open(path).map_err(|e| io_err(path, e))?;
    let reader = BufReader::new(file);
    let mut lines = reader.lines().enumerate();

    let (lineno, header) = match lines.next() {
        Some((i, l)) => (i + 1, l.map_err(|e| io_err(path, e))?),
        None => return Err(parse_err(0, "empty file")),
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() < 4 || fields[0] != "%%MatrixMarket" || fields[1] != "matrix" {
        return Err(parse_err(lineno, "expected '%%MatrixMarket matrix ...' header"));
    }
    let layout = fields[2];
    if layout != "array" && layout != "coordinate" {
        return Err(parse_err(lineno, format!("unsupported layout '{layout}'")));
    }
    if fields[3] != "real" && fields[3] != "integer" {
        return Err(parse_err(lineno, format!("unsupported field type '{}'", fields[3])));
    }
    let symmetry = fields.get(4).copied().unwrap_or("general");
    if symmetry != "general" && symmetry != "symmetric" {
        return Err(parse_err(lineno, format!("unsupported symmetry '{symmetry}'")));
    }

    // Size line (skipping comments and blanks).
    let mut size_line = None;
    for (i, line) in lines.by_ref() {
        let line = line.map_err(|e| io_err(path, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        size_line = Some((i + 1, trimmed.to_string()));
        break;
    }
    let (lineno, size_line) = size_line.ok_or_else(|| parse_err(0, "missing size line"))?;
    let dims: Vec<&str> = size_line.split_whitespace().collect();
    let need = if layout == "array" { 2 } else { 3 };
    if dims.len() < need {
        return Err(parse_err(lineno, "size line too short"));
    }
    let m: usize = dims[0]
        .parse()
        .map_err(|_| parse_err(lineno, "cannot parse row count"))?;
    let n: usize = dims[1]
        .parse()
        .map_err(|_| parse_err(lineno, "cannot parse column count"))?;
    if m < 1 || n < 1 {
        return Err(parse_err(lineno, "dimensions must be at least 1"));
    }

    let mut a = DenseMatrix::zeros(m, n);
    if layout == "array" {
        let mut idx = 0usize;
        let total = m * n;
        for (i, line) in lines {
            let line = line.map_err(|e| io_err(path, e))?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('%') {
                continue;
            }
            for tok in trimmed.split_whitespace() {
                if idx >= total {
                    return Err(parse_err(i + 1, "more entries than the size line allows"));
                }
                let v: f64 = tok
                    .parse()
                    .map_err(|_| parse_err(i + 1, format!("cannot parse value '{tok}'")))?;
                if !v.is_finite() {
                    return Err(parse_err(i + 1, "non-finite value"));
                }
                // Column-major order.
                let col = idx / m;
                let row = idx % m;
                a[(row, col)] = v;
                idx += 1;
            }
        }
        if idx != total {
            return Err(parse_err(0, format!("expected {total} entries, found {idx}")));
        }
    } else {
        let nnz: usize = dims[2]
            .parse()
            .map_err(|_| parse_err(lineno, "cannot parse entry count"))?;
        let mut seen = 0usize;
        for (i, line) in lines {
            let line = line.map_err(|e| io_err(path, e))?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('%') {
                continue;
            }
            let toks: Vec<&str> = trimmed.split_whitespace().collect();
            if toks.len() < 3 {
                return Err(parse_err(i + 1, "coordinate entry needs 'row col value'"));
            }
            let r: usize = toks[0]
                .parse()
                .map_err(|_| parse_err(i + 1, "cannot parse row index"))?;
            let c: usize = toks[1]
                .parse()
                .map_err(|_| parse_err(i + 1, "cannot parse column index"))?;
            let v: f64 = toks[2]
                .parse()
                .map_err(|_| parse_err(i + 1, "cannot parse value"))?;
            if !v.is_finite() {
                return Err(parse_err(i + 1, "non-finite value"));
            }
            if r < 1 || r > m || c < 1 || c > n {
                return Err(parse_err(i + 1, "index out of range"));
            }
            a[(r - 1, c - 1)] = v;
            if symmetry == "symmetric" {
                a[(c - 1, r - 1)] = v;
            }
            seen += 1;
        }
        if seen != nnz {
            return Err(parse_err(0, format!("expected {nnz} entries, found {seen}")));
        }
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    fn tmpdir() -> std::path::PathBuf {
        let dir = std::env::temp_dir().join(format!(
            "rankrev-mm-{}-{}",
            std::process::id(),
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .unwrap()
                .as_nanos()
        ));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn round_trip_is_exact() {
        let dir = tmpdir();
        let path = dir.join("a.mtx");
        let a = gen::gaussian(7, 5, 3);
        write_matrix(&path, &a).unwrap();
        let b = read_matrix(&path).unwrap();
        assert_eq!(a, b);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("%%MatrixMarket matrix array real general\n"));
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn reads_coordinate_format() {
        let dir = tmpdir();
        let path = dir.join("c.mtx");
        std::fs::write(
            &path,
            "%%MatrixMarket matrix coordinate real general\n% comment\n3 4 2\n1 2 5.0\n3 4 -1.5\n",
        )
        .unwrap();
        let a = read_matrix(&path).unwrap();
        assert_eq!(a.rows(), 3);
        assert_eq!(a.cols(), 4);
        assert_eq!(a[(0, 1)], 5.0);
        assert_eq!(a[(2, 3)], -1.5);
        assert_eq!(a[(0, 0)], 0.0);
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn rejects_bad_headers_and_values() {
        let dir = tmpdir();
        let path = dir.join("bad.mtx");
        std::fs::write(&path, "%%MatrixMarket matrix array complex general\n2 2\n").unwrap();
        assert!(matches!(
            read_matrix(&path),
            Err(Error::MatrixMarket { .. })
        ));
        std::fs::write(
            &path,
            "%%MatrixMarket matrix array real general\n2 1\n1.0\nnan\n",
        )
        .unwrap();
        assert!(read_matrix(&path).is_err());
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn missing_file_names_path() {
        let err = read_matrix(Path::new("/nonexistent/foo.mtx")).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("/nonexistent/foo.mtx"), "{msg}");
    }
}
