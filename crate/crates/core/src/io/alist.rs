//! The alist text format for sparse binary matrices.
//!
//! ```text
//! n m
//! max_col_weight max_row_weight
//! col weights (n values)
//! row weights (m values)
//! n lines: 1-based row indices of each column, zero-padded
//! m lines: 1-based column indices of each row, zero-padded
//! ```

use std::fmt::Write as _;

use crate::gf2::SparseMatrix;

use super::FormatError;

fn join_padded(indices: &[usize], width: usize) -> String {
    let mut parts: Vec<String> = indices.iter().map(|i| (i + 1).to_string()).collect();
    parts.resize(width, "0".to_string());
    parts.join(" ")
}

pub fn export_alist(h: &SparseMatrix) -> String {
    let cols = h.transpose();
    let col_weights = cols.row_weights();
    let row_weights = h.row_weights();
    let max_col = col_weights.iter().copied().max().unwrap_or(0);
    let max_row = row_weights.iter().copied().max().unwrap_or(0);
    let list = |w: &[usize]| w.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");

    let mut out = String::new();
    writeln!(out, "{} {}", h.cols(), h.rows()).unwrap();
    writeln!(out, "{max_col} {max_row}").unwrap();
    writeln!(out, "{}", list(&col_weights)).unwrap();
    writeln!(out, "{}", list(&row_weights)).unwrap();
    for c in cols.iter_rows() {
        writeln!(out, "{}", join_padded(c, max_col)).unwrap();
    }
    for r in h.iter_rows() {
        writeln!(out, "{}", join_padded(r, max_row)).unwrap();
    }
    out
}

struct Lines<'a> {
    lines: Vec<&'a str>,
    next: usize,
}

impl<'a> Lines<'a> {
    fn numbers(&mut self, what: &str) -> Result<Vec<usize>, FormatError> {
        let line_no = self.next + 1;
        let line = self
            .lines
            .get(self.next)
            .ok_or_else(|| FormatError::new(line_no, format!("missing {what}")))?;
        self.next += 1;
        line.split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| FormatError::new(line_no, format!("bad number {t:?} in {what}")))
            })
            .collect()
    }

    fn exactly(&mut self, count: usize, what: &str) -> Result<Vec<usize>, FormatError> {
        let line_no = self.next + 1;
        let v = self.numbers(what)?;
        if v.len() != count {
            return Err(FormatError::new(
                line_no,
                format!("{what}: expected {count} values, found {}", v.len()),
            ));
        }
        Ok(v)
    }

    /// A 1-based index list with trailing zero padding.
    fn index_list(&mut self, weight: usize, bound: usize, what: &str) -> Result<Vec<usize>, FormatError> {
        let line_no = self.next + 1;
        let v = self.numbers(what)?;
        let (entries, padding) = v.split_at(v.iter().position(|&x| x == 0).unwrap_or(v.len()));
        if padding.iter().any(|&x| x != 0) || entries.len() != weight {
            return Err(FormatError::new(
                line_no,
                format!("{what}: expected {weight} nonzero indices"),
            ));
        }
        if let Some(&bad) = entries.iter().find(|&&x| x > bound) {
            return Err(FormatError::new(line_no, format!("{what}: index {bad} exceeds {bound}")));
        }
        Ok(entries.iter().map(|x| x - 1).collect())
    }
}

pub fn import_alist(text: &str) -> Result<SparseMatrix, FormatError> {
    let mut lines = Lines {
        lines: text.lines().collect(),
        next: 0,
    };
    let [n, m] = lines.exactly(2, "dimensions")?[..] else {
        unreachable!()
    };
    lines.exactly(2, "maximum weights")?;
    let col_weights = lines.exactly(n, "column weights")?;
    let row_weights = lines.exactly(m, "row weights")?;
    let mut entries = Vec::new();
    for (c, &w) in col_weights.iter().enumerate() {
        for r in lines.index_list(w, m, "column list")? {
            entries.push((r, c));
        }
    }
    let mut rows = Vec::with_capacity(m);
    for &w in &row_weights {
        rows.push(lines.index_list(w, n, "row list")?);
    }
    let line_no = lines.next;
    let h = SparseMatrix::new(m, n, entries).map_err(|e| FormatError::new(line_no, e.to_string()))?;
    for (r, mut row) in rows.into_iter().enumerate() {
        row.sort_unstable();
        if row != h.row(r) {
            return Err(FormatError::new(
                line_no,
                format!("row list {} disagrees with the column lists", r + 1),
            ));
        }
    }
    Ok(h)
}
