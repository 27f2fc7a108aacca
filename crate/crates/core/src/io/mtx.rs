//! Matrix Market coordinate files with every stored entry equal to 1.

use std::fmt::Write as _;

use crate::gf2::SparseMatrix;

use super::FormatError;

const BANNER: &str = "%%MatrixMarket matrix coordinate integer general";

pub fn export_mtx(h: &SparseMatrix) -> String {
    let mut out = String::new();
    writeln!(out, "{BANNER}").unwrap();
    writeln!(out, "{} {} {}", h.rows(), h.cols(), h.nnz()).unwrap();
    for (r, c) in h.entries() {
        writeln!(out, "{} {} 1", r + 1, c + 1).unwrap();
    }
    out
}

pub fn import_mtx(text: &str) -> Result<SparseMatrix, FormatError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, banner)) if banner.starts_with("%%MatrixMarket matrix coordinate") => {}
        _ => return Err(FormatError::new(1, "missing MatrixMarket coordinate banner")),
    }
    let mut body = lines.filter(|(_, l)| !l.starts_with('%') && !l.trim().is_empty());
    let parse = |i: usize, l: &str| -> Result<Vec<usize>, FormatError> {
        l.split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| FormatError::new(i + 1, format!("bad number {t:?}")))
            })
            .collect()
    };
    let (i, size) = body
        .next()
        .ok_or_else(|| FormatError::new(2, "missing size line"))?;
    let [rows, cols, nnz] = parse(i, size)?[..] else {
        return Err(FormatError::new(i + 1, "size line needs three numbers"));
    };
    let mut entries = Vec::with_capacity(nnz);
    let mut last = i;
    for (i, l) in body {
        last = i;
        let [r, c, v] = parse(i, l)?[..] else {
            return Err(FormatError::new(i + 1, "entry needs row, column and value"));
        };
        if r == 0 || c == 0 {
            return Err(FormatError::new(i + 1, "indices are 1-based"));
        }
        if v % 2 == 1 {
            entries.push((r - 1, c - 1));
        }
    }
    if entries.len() > nnz {
        return Err(FormatError::new(last + 1, format!("more than {nnz} entries")));
    }
    SparseMatrix::new(rows, cols, entries).map_err(|e| FormatError::new(last + 1, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let h = SparseMatrix::new(3, 5, [(0, 0), (0, 4), (2, 1)]).unwrap();
        let text = export_mtx(&h);
        assert!(text.starts_with(BANNER));
        assert_eq!(text.lines().nth(1), Some("3 5 3"));
        assert_eq!(import_mtx(&text).unwrap(), h);
    }

    #[test]
    fn rejects_out_of_range_entries() {
        let text = format!("{BANNER}\n2 2 1\n3 1 1\n");
        assert!(import_mtx(&text).is_err());
        assert!(import_mtx("2 2 0\n").is_err());
    }
}
