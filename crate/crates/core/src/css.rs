//! CSS codes given by a pair of check matrices over a shared qubit set.

use std::ops::Range;

use thiserror::Error;

use crate::assembly::TensorBasisIndex;
use crate::gf2::{Gf2Error, SparseMatrix};
use crate::lattice::CellIndex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CssError {
    #[error("X and Z checks do not commute")]
    NotCommuting,
    #[error("{what}: expected {expected}, found {found}")]
    Mismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

/// Where a qubit lives: a tensor-product basis element or a lattice cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QubitLabel {
    Tensor(TensorBasisIndex),
    Cell(CellIndex),
}

/// A contiguous run of Z-check rows produced by one boundary component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZBlock {
    /// 1-based input-code (or lattice direction) indices the block lives on.
    pub support: Vec<usize>,
    pub generator_index: usize,
    pub generator: String,
    pub rows: Range<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CssCode {
    h_x: SparseMatrix,
    h_z: SparseMatrix,
    qubit_labels: Vec<QubitLabel>,
    z_blocks: Vec<ZBlock>,
}

impl CssCode {
    /// Checks shapes, labels and commutation. `qubit_labels` may be empty
    /// for unlabeled codes; `z_blocks` may be empty or must tile the Z rows.
    pub fn new(
        h_x: SparseMatrix,
        h_z: SparseMatrix,
        qubit_labels: Vec<QubitLabel>,
        z_blocks: Vec<ZBlock>,
    ) -> Result<Self, CssError> {
        if h_x.cols() != h_z.cols() {
            return Err(CssError::Mismatch {
                what: "qubit count of h_z",
                expected: h_x.cols(),
                found: h_z.cols(),
            });
        }
        if !qubit_labels.is_empty() && qubit_labels.len() != h_x.cols() {
            return Err(CssError::Mismatch {
                what: "qubit label count",
                expected: h_x.cols(),
                found: qubit_labels.len(),
            });
        }
        if !z_blocks.is_empty() {
            let mut next = 0;
            for b in &z_blocks {
                if b.rows.start != next {
                    return Err(CssError::Mismatch {
                        what: "Z block start row",
                        expected: next,
                        found: b.rows.start,
                    });
                }
                next = b.rows.end;
            }
            if next != h_z.rows() {
                return Err(CssError::Mismatch {
                    what: "rows covered by Z blocks",
                    expected: h_z.rows(),
                    found: next,
                });
            }
        }
        if !commutes(&h_x, &h_z)? {
            return Err(CssError::NotCommuting);
        }
        Ok(Self {
            h_x,
            h_z,
            qubit_labels,
            z_blocks,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.h_x.cols()
    }

    pub fn h_x(&self) -> &SparseMatrix {
        &self.h_x
    }

    pub fn h_z(&self) -> &SparseMatrix {
        &self.h_z
    }

    pub fn qubit_labels(&self) -> &[QubitLabel] {
        &self.qubit_labels
    }

    pub fn z_blocks(&self) -> &[ZBlock] {
        &self.z_blocks
    }
}

/// Whether `h_x * h_z^T` vanishes.
pub fn commutes(h_x: &SparseMatrix, h_z: &SparseMatrix) -> Result<bool, Gf2Error> {
    Ok(h_x.matmul(&h_z.transpose())?.is_zero())
}
