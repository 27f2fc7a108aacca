use std::collections::HashMap;

use super::{BitMatrix, Gf2Error, SPARSE_DENSITY_THRESHOLD, SPARSE_MIN_COLS};

/// GF(2) matrix stored as the sorted column positions of the ones in each row.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_cols: Vec<Vec<usize>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            row_cols: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            row_cols: (0..n).map(|i| vec![i]).collect(),
        }
    }

    /// Builds a matrix from `(row, col)` positions of its ones. Positions must
    /// be in bounds and distinct.
    pub fn new(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, Gf2Error> {
        let mut row_cols = vec![Vec::new(); rows];
        for (r, c) in entries {
            if r >= rows || c >= cols {
                return Err(Gf2Error::OutOfBounds {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            row_cols[r].push(c);
        }
        for (r, row) in row_cols.iter_mut().enumerate() {
            row.sort_unstable();
            if let Some(w) = row.windows(2).find(|w| w[0] == w[1]) {
                return Err(Gf2Error::DuplicateEntry { row: r, col: w[0] });
            }
        }
        Ok(Self {
            rows,
            cols,
            row_cols,
        })
    }

    /// Builds a matrix from per-row column lists, summing repeated columns
    /// over GF(2) (pairs cancel).
    ///
    /// Panics if a column is out of range.
    pub fn from_rows_xor(cols: usize, rows: Vec<Vec<usize>>) -> Self {
        let row_cols = rows
            .into_iter()
            .map(|mut row| {
                assert!(row.iter().all(|&c| c < cols), "column out of range");
                cancel_pairs(&mut row);
                row
            })
            .collect::<Vec<_>>();
        Self {
            rows: row_cols.len(),
            cols,
            row_cols,
        }
    }

    pub fn from_dense(m: &BitMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            row_cols: (0..m.rows()).map(|r| m.row_support(r)).collect(),
        }
    }

    pub fn to_dense(&self) -> BitMatrix {
        BitMatrix::from_row_supports(self.cols, &self.row_cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.row_cols[r]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.row_cols.iter().map(Vec::as_slice)
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.row_cols[r].binary_search(&c).is_ok()
    }

    /// All `(row, col)` positions holding a one, row-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.row_cols
            .iter()
            .enumerate()
            .flat_map(|(r, cs)| cs.iter().map(move |&c| (r, c)))
    }

    pub fn nnz(&self) -> usize {
        self.row_cols.iter().map(Vec::len).sum()
    }

    pub fn density(&self) -> f64 {
        if self.rows == 0 || self.cols == 0 {
            0.0
        } else {
            self.nnz() as f64 / (self.rows as f64 * self.cols as f64)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.row_cols.iter().all(Vec::is_empty)
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.row_cols.iter().map(Vec::len).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for (_, c) in self.entries() {
            w[c] += 1;
        }
        w
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut row_cols = vec![Vec::new(); self.cols];
        for (r, c) in self.entries() {
            row_cols[c].push(r);
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            row_cols,
        }
    }

    pub fn vstack(&self, other: &SparseMatrix) -> Result<SparseMatrix, Gf2Error> {
        if self.cols != other.cols {
            return Err(Gf2Error::DimensionMismatch {
                op: "vstack",
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut row_cols = self.row_cols.clone();
        row_cols.extend(other.row_cols.iter().cloned());
        Ok(SparseMatrix {
            rows: row_cols.len(),
            cols: self.cols,
            row_cols,
        })
    }

    /// Relabels columns: column `c` of `self` becomes column `map[c]`.
    pub fn relabel_columns(&self, map: &[usize]) -> Result<SparseMatrix, Gf2Error> {
        if map.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                op: "relabel_columns",
                expected: self.cols,
                found: map.len(),
            });
        }
        let row_cols = self
            .row_cols
            .iter()
            .map(|row| {
                let mut out: Vec<usize> = row.iter().map(|&c| map[c]).collect();
                out.sort_unstable();
                out
            })
            .collect();
        Ok(SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            row_cols,
        })
    }

    /// GF(2) product `self * other`.
    pub fn matmul(&self, other: &SparseMatrix) -> Result<SparseMatrix, Gf2Error> {
        if self.cols != other.rows {
            return Err(Gf2Error::DimensionMismatch {
                op: "matmul",
                expected: self.cols,
                found: other.rows,
            });
        }
        let row_cols = self
            .row_cols
            .iter()
            .map(|row| {
                let mut acc: Vec<usize> = row
                    .iter()
                    .flat_map(|&k| other.row_cols[k].iter().copied())
                    .collect();
                cancel_pairs(&mut acc);
                acc
            })
            .collect();
        Ok(SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            row_cols,
        })
    }

    /// Rank over GF(2). Very sparse wide matrices go through sparse
    /// elimination; everything else through the dense kernel.
    pub fn rank(&self) -> usize {
        if self.density() < SPARSE_DENSITY_THRESHOLD && self.cols > SPARSE_MIN_COLS {
            sparse_rank(self.row_cols.iter().map(Vec::as_slice))
        } else {
            self.to_dense().rank()
        }
    }

    pub fn rowspace_equal(&self, other: &SparseMatrix) -> Result<bool, Gf2Error> {
        self.to_dense().rowspace_equal(&other.to_dense())
    }
}

/// Sorts and removes entries occurring an even number of times.
pub(crate) fn cancel_pairs(v: &mut Vec<usize>) {
    v.sort_unstable();
    let mut out = 0;
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            v[out] = v[i];
            out += 1;
        }
        i = j;
    }
    v.truncate(out);
}

/// Incremental echelon elimination: each incoming row is reduced by the pivot
/// row owning its leading column until it vanishes or claims a new pivot.
fn sparse_rank<'a>(rows: impl Iterator<Item = &'a [usize]>) -> usize {
    let mut pivot_of: HashMap<usize, usize> = HashMap::new();
    let mut pivots: Vec<Vec<usize>> = Vec::new();
    let mut scratch = Vec::new();
    for row in rows {
        let mut cur = row.to_vec();
        while let Some(&lead) = cur.first() {
            match pivot_of.get(&lead) {
                Some(&p) => {
                    symmetric_difference_into(&cur, &pivots[p], &mut scratch);
                    std::mem::swap(&mut cur, &mut scratch);
                }
                None => {
                    pivot_of.insert(lead, pivots.len());
                    pivots.push(cur);
                    break;
                }
            }
        }
    }
    pivots.len()
}

fn symmetric_difference_into(a: &[usize], b: &[usize], out: &mut Vec<usize>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_rejects_duplicates_and_out_of_bounds() {
        assert!(matches!(
            SparseMatrix::new(2, 2, [(0, 0), (0, 0)]),
            Err(Gf2Error::DuplicateEntry { row: 0, col: 0 })
        ));
        assert!(matches!(
            SparseMatrix::new(2, 2, [(2, 0)]),
            Err(Gf2Error::OutOfBounds { .. })
        ));
        let m = SparseMatrix::new(2, 3, [(1, 2), (0, 1), (1, 0)]).unwrap();
        assert_eq!(m.row(1), &[0, 2]);
        assert_eq!(m.nnz(), 3);
    }

    #[test]
    fn xor_construction_cancels_pairs() {
        let m = SparseMatrix::from_rows_xor(4, vec![vec![1, 3, 1, 1], vec![2, 2]]);
        assert_eq!(m.row(0), &[1, 3]);
        assert!(m.row(1).is_empty());
    }

    #[test]
    fn matmul_and_transpose() {
        let h = SparseMatrix::new(3, 3, [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 0)]).unwrap();
        assert_eq!(h.matmul(&SparseMatrix::identity(3)).unwrap(), h);
        let ones = SparseMatrix::new(3, 1, [(0, 0), (1, 0), (2, 0)]).unwrap();
        assert!(h.matmul(&ones).unwrap().is_zero());
        assert_eq!(h.transpose().transpose(), h);
        assert_eq!(h.to_dense().transpose(), h.transpose().to_dense());
        assert!(h.matmul(&SparseMatrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn sparse_rank_path_agrees_with_dense() {
        // a long cycle: rank n - 1, wide enough to take the sparse route
        let n = 5000;
        let m = SparseMatrix::from_rows_xor(n, (0..n).map(|i| vec![i, (i + 1) % n]).collect());
        assert!(m.density() < SPARSE_DENSITY_THRESHOLD && m.cols() > SPARSE_MIN_COLS);
        assert_eq!(m.rank(), n - 1);
        assert_eq!(m.to_dense().rank(), n - 1);
    }
}
