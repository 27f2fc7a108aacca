//! Linear algebra over GF(2).
//!
//! [`BitMatrix`] is a row-major bit-packed dense matrix with word-parallel
//! elimination. [`SparseMatrix`] stores the positions of ones row by row and
//! is used for the large check matrices produced by code assembly. Both are
//! immutable values once built; every operation returns a new value.

mod dense;
mod sparse;

pub use dense::{BitMatrix, BitVec, EchelonBasis, Rref};
pub use sparse::SparseMatrix;
pub(crate) use dense::RowReducer;
pub(crate) use sparse::cancel_pairs;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("dimension mismatch in {op}: expected {expected}, found {found}")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("entry ({row}, {col}) is outside a {rows}x{cols} matrix")]
    OutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("duplicate entry ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },
}

pub(crate) const WORD_BITS: usize = 64;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// Sparse matrices below this density with more than this many columns are
/// ranked by sparse elimination instead of the dense kernel.
pub(crate) const SPARSE_DENSITY_THRESHOLD: f64 = 0.01;
pub(crate) const SPARSE_MIN_COLS: usize = 4096;
