use std::fmt;

use rayon::prelude::*;

use super::{words_for, Gf2Error, WORD_BITS};

/// Rows times words above which elimination steps are split across threads.
const PAR_ELIM_WORDS: usize = 1 << 16;

/// A vector over GF(2), packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            v.toggle(i);
        }
        v
    }

    pub(crate) fn from_words(len: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(len));
        Self { len, words }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn support(&self) -> Vec<usize> {
        support_of(&self.words)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len);
        xor_into(&mut self.words, &other.words);
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

pub(crate) fn support_of(words: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (wi, &w) in words.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            let b = w.trailing_zeros() as usize;
            out.push(wi * WORD_BITS + b);
            w &= w - 1;
        }
    }
    out
}

/// Dense GF(2) matrix, row-major, each row padded to whole words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

/// Reduced row-echelon form of a matrix together with its pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub reduced: BitMatrix,
    pub pivot_cols: Vec<usize>,
    pub rank: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows written as 0/1 values.
    ///
    /// Panics if the rows have different lengths.
    pub fn from_rows<R: AsRef<[u8]>>(cols: usize, rows: &[R]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "row {r} has length {}", row.len());
            for (c, &b) in row.iter().enumerate() {
                if b & 1 == 1 {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Builds a matrix whose row `r` has ones at the listed columns. Repeated
    /// columns cancel in pairs.
    pub fn from_row_supports<I, R>(cols: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = R>,
        R: AsRef<[usize]>,
    {
        let stride = words_for(cols);
        let mut data = Vec::new();
        let mut n = 0;
        for row in rows {
            let start = data.len();
            data.resize(start + stride, 0);
            for &c in row.as_ref() {
                assert!(c < cols, "column {c} out of range for {cols} columns");
                data[start + c / WORD_BITS] ^= 1u64 << (c % WORD_BITS);
            }
            n += 1;
        }
        Self {
            rows: n,
            cols,
            stride,
            data,
        }
    }

    pub fn from_bitvecs(cols: usize, rows: &[BitVec]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, v) in rows.iter().enumerate() {
            assert_eq!(v.len(), cols);
            m.row_words_mut(r).copy_from_slice(v.words());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / WORD_BITS];
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec::from_words(self.cols, self.row_words(r).to_vec())
    }

    pub fn row_support(&self, r: usize) -> Vec<usize> {
        support_of(self.row_words(r))
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = BitVec> + '_ {
        (0..self.rows).map(|r| self.row(r))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row_support(r) {
                t.data[c * t.stride + r / WORD_BITS] |= 1u64 << (r % WORD_BITS);
            }
        }
        t
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.cols != other.cols {
            return Err(Gf2Error::DimensionMismatch {
                op: "vstack",
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(BitMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            stride: self.stride,
            data,
        })
    }

    /// Column `c` of the result is column `perm[c]` of `self`.
    pub fn select_columns(&self, perm: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, perm.len());
        for r in 0..self.rows {
            for (c, &src) in perm.iter().enumerate() {
                if self.get(r, src) {
                    out.data[r * out.stride + c / WORD_BITS] |= 1u64 << (c % WORD_BITS);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec, Gf2Error> {
        if v.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                op: "mul_vec",
                expected: self.cols,
                found: v.len(),
            });
        }
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(v.words())
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones());
            if parity & 1 == 1 {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// GF(2) product `self * other`.
    pub fn matmul(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.cols != other.rows {
            return Err(Gf2Error::DimensionMismatch {
                op: "matmul",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        let stride = out.stride;
        out.data
            .par_chunks_mut(stride.max(1))
            .enumerate()
            .for_each(|(r, dst)| {
                for k in support_of(self.row_words(r)) {
                    xor_into(dst, other.row_words(k));
                }
            });
        Ok(out)
    }

    /// Reduced row-echelon form. Pivots are taken in column order, always
    /// from the first remaining row holding a one in that column.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivot_cols = m.eliminate(true);
        Rref {
            rank: pivot_cols.len(),
            reduced: m,
            pivot_cols,
        }
    }

    /// Row-echelon form (no back-substitution) in place; returns pivot columns.
    fn eliminate(&mut self, full: bool) -> Vec<usize> {
        let stride = self.stride;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let w = c / WORD_BITS;
            let mask = 1u64 << (c % WORD_BITS);
            let Some(found) = (r..self.rows).find(|&i| self.data[i * stride + w] & mask != 0) else {
                continue;
            };
            if found != r {
                for k in 0..stride {
                    self.data.swap(r * stride + k, found * stride + k);
                }
            }
            let (before, rest) = self.data.split_at_mut(r * stride);
            let (pivot, after) = rest.split_at_mut(stride);
            let pivot = &pivot[w..];
            let work = if full { before.len() + after.len() } else { after.len() };
            let reduce = |row: &mut [u64]| {
                if row[w] & mask != 0 {
                    xor_into(&mut row[w..], pivot);
                }
            };
            if work >= PAR_ELIM_WORDS {
                after.par_chunks_mut(stride).for_each(reduce);
                if full {
                    before.par_chunks_mut(stride).for_each(reduce);
                }
            } else {
                after.chunks_mut(stride).for_each(reduce);
                if full {
                    before.chunks_mut(stride).for_each(reduce);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Rank by forward elimination on whichever orientation has fewer rows.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let mut m = if self.rows > self.cols {
            self.transpose()
        } else {
            self.clone()
        };
        m.eliminate(false).len()
    }

    /// Basis of `{v : self * v = 0}`, one vector per row, ordered by the
    /// free column each vector is anchored on.
    pub fn nullspace_basis(&self) -> BitMatrix {
        let Rref {
            reduced,
            pivot_cols,
            ..
        } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = BitMatrix::zeros(free.len(), self.cols);
        for (i, &f) in free.iter().enumerate() {
            basis.set(i, f, true);
            for (pr, &pc) in pivot_cols.iter().enumerate() {
                if reduced.get(pr, f) {
                    basis.set(i, pc, true);
                }
            }
        }
        basis
    }

    pub fn rowspace_contains(&self, v: &BitVec) -> Result<bool, Gf2Error> {
        if v.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                op: "rowspace_contains",
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(RowReducer::new(self).reduce(v).is_zero())
    }

    pub fn rowspace_equal(&self, other: &BitMatrix) -> Result<bool, Gf2Error> {
        if self.cols != other.cols {
            return Err(Gf2Error::DimensionMismatch {
                op: "rowspace_equal",
                expected: self.cols,
                found: other.cols,
            });
        }
        let a = RowReducer::new(self);
        if a.rank() != other.rank() {
            return Ok(false);
        }
        Ok(other.iter_rows().all(|row| a.reduce(&row).is_zero()))
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Echelon basis of a row space, kept for repeated membership queries.
#[derive(Debug, Clone)]
pub(crate) struct RowReducer {
    echelon: BitMatrix,
    pivots: Vec<usize>,
}

impl RowReducer {
    pub(crate) fn new(m: &BitMatrix) -> Self {
        let Rref {
            reduced,
            pivot_cols,
            rank,
        } = m.rref();
        let mut echelon = BitMatrix::zeros(rank, m.cols);
        echelon
            .data
            .copy_from_slice(&reduced.data[..rank * reduced.stride]);
        Self {
            echelon,
            pivots: pivot_cols,
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Remainder of `v` modulo the row space.
    pub(crate) fn reduce(&self, v: &BitVec) -> BitVec {
        let mut words = v.words().to_vec();
        self.reduce_words(&mut words);
        BitVec::from_words(v.len(), words)
    }

    pub(crate) fn reduce_words(&self, words: &mut [u64]) {
        for (i, &c) in self.pivots.iter().enumerate() {
            if words[c / WORD_BITS] >> (c % WORD_BITS) & 1 == 1 {
                xor_into(words, self.echelon.row_words(i));
            }
        }
    }
}

/// A row space grown one vector at a time, kept in echelon form.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    cols: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(cols: usize) -> Self {
        Self {
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// The current basis vectors, fully reduced against each other.
    pub fn vectors(&self) -> Vec<BitVec> {
        self.rows
            .iter()
            .map(|w| BitVec::from_words(self.cols, w.clone()))
            .collect()
    }

    fn reduce_words(&self, words: &mut [u64]) {
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            if words[c / WORD_BITS] >> (c % WORD_BITS) & 1 == 1 {
                xor_into(words, row);
            }
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        assert_eq!(v.len(), self.cols);
        let mut w = v.words().to_vec();
        self.reduce_words(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span; returns whether it was independent of what was
    /// already there.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        assert_eq!(v.len(), self.cols);
        let mut w = v.words().to_vec();
        self.reduce_words(&mut w);
        let Some(lead) = support_of(&w).first().copied() else {
            return false;
        };
        // keep earlier rows free of the new pivot so reduction stays one pass
        for row in &mut self.rows {
            if row[lead / WORD_BITS] >> (lead % WORD_BITS) & 1 == 1 {
                xor_into(row, &w);
            }
        }
        self.rows.push(w);
        self.pivots.push(lead);
        true
    }
}
