//! Tetra-digit codes built directly on the periodic hypercubic lattice.
//!
//! A `k`-cell is a direction set `A` with `|A| = k` and a base position `x`
//! in `Z_L^D`; it spans `x + sum_{a in A} [0, 1] e_a`. Cells of one
//! dimension are indexed by direction set in lexicographic order, then by
//! position in mixed radix with the first coordinate most significant.

use std::fmt;

use thiserror::Error;

use crate::assembly::TensorBasisIndex;
use crate::css::{CssCode, CssError, QubitLabel, ZBlock};
use crate::gf2::SparseMatrix;
use crate::poly::{Monomial, MAX_VARS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("invalid label [{d_n},{d_s},{d_l},{dim}]: need d_n < d_s < d_l <= D")]
    Ordering {
        d_n: usize,
        d_s: usize,
        d_l: usize,
        dim: usize,
    },
    #[error("label {0} does not give commuting checks")]
    Invalid(TdLabel),
    #[error("lattice size must be at least 2, got {0}")]
    Size(usize),
    #[error("lattice dimension {0} is too large")]
    Dimension(usize),
    #[error("qubit bijection is not a permutation of {0} qubits")]
    Bijection(usize),
    #[error(transparent)]
    Css(#[from] CssError),
}

/// `[d_n, d_s, d_l, D]`: qubits on `d_s`-cells, X-checks on `D`-cells and
/// Z-checks on `d_n`-cells restricted to `d_l`-dimensional subsystems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TdLabel {
    pub d_n: usize,
    pub d_s: usize,
    pub d_l: usize,
    pub dim: usize,
}

impl TdLabel {
    pub fn new(d_n: usize, d_s: usize, d_l: usize, dim: usize) -> Result<Self, LatticeError> {
        if !(d_n < d_s && d_s < d_l && d_l <= dim) {
            return Err(LatticeError::Ordering { d_n, d_s, d_l, dim });
        }
        if dim > MAX_VARS {
            return Err(LatticeError::Dimension(dim));
        }
        Ok(Self { d_n, d_s, d_l, dim })
    }
}

impl fmt::Display for TdLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{},{}]", self.d_n, self.d_s, self.d_l, self.dim)
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Whether the label's checks commute: `C(d_l - d_n, d_s - d_n)` is even.
pub fn td_valid(label: TdLabel) -> bool {
    binomial(label.d_l - label.d_n, label.d_s - label.d_n).is_multiple_of(2)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellIndex {
    pub directions: Monomial,
    pub position: Vec<usize>,
}

impl fmt::Display for CellIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.position.len();
        let name = |i: usize| -> String {
            if d <= 3 {
                ["x", "y", "z"][i - 1].to_string()
            } else if d == 4 {
                ["x", "y", "z", "w"][i - 1].to_string()
            } else {
                i.to_string()
            }
        };
        let dirs: Vec<String> = self.directions.indices().map(name).collect();
        let pos: Vec<String> = self.position.iter().map(usize::to_string).collect();
        write!(f, "A={{{}}}@({})", dirs.join(","), pos.join(","))
    }
}

/// Complement the direction set, keeping the position.
pub fn dual_map(cell: &CellIndex, dim: usize) -> CellIndex {
    CellIndex {
        directions: Monomial::first(dim).difference(cell.directions),
        position: cell.position.clone(),
    }
}

/// Cell indexing for the periodic lattice `Z_L^D`.
#[derive(Debug, Clone)]
pub struct Lattice {
    dim: usize,
    size: usize,
    volume: usize,
}

impl Lattice {
    pub fn new(dim: usize, size: usize) -> Result<Self, LatticeError> {
        if size < 2 {
            return Err(LatticeError::Size(size));
        }
        if dim > MAX_VARS {
            return Err(LatticeError::Dimension(dim));
        }
        let volume = size
            .checked_pow(dim as u32)
            .ok_or(LatticeError::Dimension(dim))?;
        Ok(Self { dim, size, volume })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn orientations(&self, k: usize) -> Vec<Monomial> {
        Monomial::first(self.dim).subsets(k)
    }

    pub fn cell_count(&self, k: usize) -> usize {
        binomial(self.dim, k) as usize * self.volume
    }

    fn position_rank(&self, position: &[usize]) -> usize {
        position.iter().fold(0, |r, &x| r * self.size + x % self.size)
    }

    fn position_at(&self, mut r: usize) -> Vec<usize> {
        let mut pos = vec![0; self.dim];
        for slot in pos.iter_mut().rev() {
            *slot = r % self.size;
            r /= self.size;
        }
        pos
    }

    /// Position of a cell among cells of its dimension. Coordinates are
    /// reduced mod `L`.
    pub fn rank_of(&self, cell: &CellIndex) -> usize {
        let k = cell.directions.degree();
        let orientation = self
            .orientations(k)
            .binary_search(&cell.directions)
            .expect("direction set lies in 1..=D");
        orientation * self.volume + self.position_rank(&cell.position)
    }

    pub fn cell(&self, k: usize, index: usize) -> CellIndex {
        let orientations = self.orientations(k);
        CellIndex {
            directions: orientations[index / self.volume],
            position: self.position_at(index % self.volume),
        }
    }

    pub fn cells(&self, k: usize) -> impl Iterator<Item = CellIndex> + '_ {
        (0..self.cell_count(k)).map(move |i| self.cell(k, i))
    }

    fn shifted(&self, position: &[usize], directions: Monomial, sign: Shift) -> Vec<usize> {
        let mut p = position.to_vec();
        for a in directions.indices() {
            p[a - 1] = match sign {
                Shift::Up => (p[a - 1] + 1) % self.size,
                Shift::Down => (p[a - 1] + self.size - 1) % self.size,
            };
        }
        p
    }

    /// Faces of dimension `k` of a cell, in a fixed but unspecified order.
    pub fn faces(&self, cell: &CellIndex, k: usize) -> Vec<CellIndex> {
        let mut out = Vec::new();
        for sub in cell.directions.subsets(k) {
            let rest = cell.directions.difference(sub);
            for eps in rest.subsets_all() {
                out.push(CellIndex {
                    directions: sub,
                    position: self.shifted(&cell.position, eps, Shift::Up),
                });
            }
        }
        out
    }

    /// Boundary map from `k`-cells to `(k-1)`-cells (rows are `(k-1)`-cells).
    pub fn boundary(&self, k: usize) -> SparseMatrix {
        assert!(k >= 1 && k <= self.dim, "boundary degree {k} out of range");
        let columns = self
            .cells(k)
            .map(|c| self.faces(&c, k - 1).iter().map(|f| self.rank_of(f)).collect())
            .collect();
        SparseMatrix::from_rows_xor(self.cell_count(k - 1), columns).transpose()
    }
}

#[derive(Clone, Copy)]
enum Shift {
    Up,
    Down,
}

trait AllSubsets {
    fn subsets_all(self) -> Vec<Monomial>;
}

impl AllSubsets for Monomial {
    fn subsets_all(self) -> Vec<Monomial> {
        (0..=self.degree()).flat_map(|k| self.subsets(k)).collect()
    }
}

/// The tetra-digit code with label `label` on `Z_L^D`.
pub fn td_build(label: TdLabel, size: usize) -> Result<CssCode, LatticeError> {
    if !td_valid(label) {
        return Err(LatticeError::Invalid(label));
    }
    let lat = Lattice::new(label.dim, size)?;
    let TdLabel { d_n, d_s, d_l, dim } = label;

    let x_rows: Vec<Vec<usize>> = lat
        .cells(dim)
        .map(|c| lat.faces(&c, d_s).iter().map(|f| lat.rank_of(f)).collect())
        .collect();

    let mut z_rows = Vec::new();
    let mut z_blocks = Vec::new();
    let full = Monomial::first(dim);
    for a in full.subsets(d_n) {
        let supersets: Vec<Monomial> = full
            .difference(a)
            .subsets(d_l - d_n)
            .into_iter()
            .map(|extra| a.union(extra))
            .collect();
        for (bi, b) in supersets.into_iter().enumerate() {
            let start = z_rows.len();
            let between: Vec<Monomial> = b
                .difference(a)
                .subsets(d_s - d_n)
                .into_iter()
                .map(|extra| a.union(extra))
                .collect();
            for r in 0..lat.volume {
                let x = lat.position_at(r);
                let mut row = Vec::new();
                for &a2 in &between {
                    for eps in a2.difference(a).subsets_all() {
                        row.push(lat.rank_of(&CellIndex {
                            directions: a2,
                            position: lat.shifted(&x, eps, Shift::Down),
                        }));
                    }
                }
                z_rows.push(row);
            }
            z_blocks.push(ZBlock {
                support: b.indices().collect(),
                generator_index: bi,
                generator: format!("A={}<B={}", set_string(a), set_string(b)),
                rows: start..z_rows.len(),
            });
        }
    }

    let n = lat.cell_count(d_s);
    let labels = lat.cells(d_s).map(QubitLabel::Cell).collect();
    Ok(CssCode::new(
        SparseMatrix::from_rows_xor(n, x_rows),
        SparseMatrix::from_rows_xor(n, z_rows),
        labels,
        z_blocks,
    )?)
}

fn set_string(m: Monomial) -> String {
    let parts: Vec<String> = m.indices().map(|i| i.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Lattice cell of a tensor basis element over repetition codes: bit `b`
/// of code `i` is the edge from `b - 1` to `b`, check `c` is the vertex `c`.
pub fn tensor_to_cell(element: &TensorBasisIndex, size: usize) -> CellIndex {
    let position = element
        .locals
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            if element.directions.contains(i + 1) {
                (x + size - 1) % size
            } else {
                x
            }
        })
        .collect();
    CellIndex {
        directions: element.directions,
        position,
    }
}

/// Qubit bijection from a product code over repetition codes of length `size`
/// to the tetra-digit code on the dual lattice: entry `i` is the index of
/// the lattice qubit matched with qubit `i`.
pub fn dual_bijection(code: &CssCode, label: TdLabel, size: usize) -> Result<Vec<usize>, LatticeError> {
    let lat = Lattice::new(label.dim, size)?;
    code.qubit_labels()
        .iter()
        .map(|q| match q {
            QubitLabel::Tensor(t) if t.locals.len() == label.dim => {
                let cell = CellIndex {
                    directions: t.directions,
                    position: t.locals.clone(),
                };
                let dual = dual_map(&cell, label.dim);
                if dual.directions.degree() != label.d_s || t.locals.iter().any(|&x| x >= size) {
                    return Err(LatticeError::Bijection(code.n_qubits()));
                }
                Ok(lat.rank_of(&dual))
            }
            _ => Err(LatticeError::Bijection(code.n_qubits())),
        })
        .collect()
}

/// Whether `b`, with qubit `bijection[i]` renamed to `i`, has the same X and
/// Z stabilizer groups as `a`. Codes with different qubit counts are never
/// equivalent.
pub fn codes_equivalent(a: &CssCode, b: &CssCode, bijection: &[usize]) -> Result<bool, LatticeError> {
    let n = a.n_qubits();
    if n != b.n_qubits() {
        return Ok(false);
    }
    if bijection.len() != n {
        return Err(LatticeError::Bijection(n));
    }
    let mut inverse = vec![usize::MAX; n];
    for (i, &j) in bijection.iter().enumerate() {
        if j >= n || inverse[j] != usize::MAX {
            return Err(LatticeError::Bijection(n));
        }
        inverse[j] = i;
    }
    let same = |x: &SparseMatrix, y: &SparseMatrix| -> Result<bool, LatticeError> {
        let y = y.relabel_columns(&inverse).map_err(CssError::from)?;
        Ok(x.rowspace_equal(&y).map_err(CssError::from)?)
    };
    Ok(same(a.h_x(), b.h_x())? && same(a.h_z(), b.h_z())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{build_css, instantiate, ClassicalCode, TensorBasis};
    use crate::poly::BoundaryPolynomial;
    use crate::solver::{solve_fork, Triple};

    #[test]
    fn validity_examples() {
        assert!(td_valid(TdLabel::new(0, 1, 2, 3).unwrap()));
        assert!(td_valid(TdLabel::new(1, 2, 3, 4).unwrap()));
        assert!(!td_valid(TdLabel::new(0, 1, 3, 3).unwrap()));
        assert!(TdLabel::new(1, 1, 2, 3).is_err());
        assert!(TdLabel::new(0, 1, 4, 3).is_err());
    }

    #[test]
    fn dual_map_examples() {
        let c = CellIndex {
            directions: Monomial::new(&[1]).unwrap(),
            position: vec![0, 1, 2],
        };
        assert_eq!(dual_map(&c, 3).directions, Monomial::new(&[2, 3]).unwrap());
        assert_eq!(dual_map(&dual_map(&c, 3), 3), c);
        let v = CellIndex {
            directions: Monomial::ONE,
            position: vec![1, 1],
        };
        assert_eq!(dual_map(&v, 2).directions, Monomial::first(2));
    }

    #[test]
    fn cell_label_format() {
        let c = CellIndex {
            directions: Monomial::new(&[1, 3]).unwrap(),
            position: vec![0, 1, 2],
        };
        assert_eq!(c.to_string(), "A={x,z}@(0,1,2)");
    }

    #[test]
    fn boundary_squares_to_zero() {
        let lat = Lattice::new(3, 3).unwrap();
        for k in 2..=3 {
            let prod = lat.boundary(k - 1).matmul(&lat.boundary(k)).unwrap();
            assert!(prod.is_zero());
        }
        assert_eq!(lat.cell_count(1), 81);
    }

    #[test]
    fn xcube_counts() {
        let code = td_build(TdLabel::new(0, 1, 2, 3).unwrap(), 3).unwrap();
        assert_eq!(code.n_qubits(), 81);
        assert_eq!(code.h_x().rows(), 27);
        assert!(code.h_x().row_weights().iter().all(|&w| w == 12));
        assert_eq!(code.h_z().rows(), 81);
        assert!(code.h_z().row_weights().iter().all(|&w| w == 4));
        assert!(matches!(
            td_build(TdLabel::new(0, 1, 3, 3).unwrap(), 3),
            Err(LatticeError::Invalid(_))
        ));
    }

    #[test]
    fn vertex_link_incidence_matches_instantiation() {
        let size = 3;
        let codes = vec![ClassicalCode::repetition(size).unwrap(); 2];
        let e1 = BoundaryPolynomial::elementary_symmetric(2, 1).unwrap();
        let m = instantiate(&e1, &codes, 1).unwrap();
        let lat = Lattice::new(2, size).unwrap();
        let rows = TensorBasis::new(&codes, 0).unwrap();
        let cols = TensorBasis::new(&codes, 1).unwrap();
        let row_map: Vec<usize> = rows.iter().map(|t| lat.rank_of(&tensor_to_cell(&t, size))).collect();
        let col_map: Vec<usize> = cols.iter().map(|t| lat.rank_of(&tensor_to_cell(&t, size))).collect();
        let relabeled = m.relabel_columns(&col_map)
            .unwrap()
            .transpose()
            .relabel_columns(&row_map)
            .unwrap()
            .transpose();
        assert_eq!(relabeled, lat.boundary(1));
    }

    #[test]
    fn xcube_matches_product_code() {
        let size = 3;
        let spec = solve_fork(Triple::new(3, 2, 0).unwrap()).unwrap();
        let qbp = build_css(&spec, &vec![ClassicalCode::repetition(size).unwrap(); 3]).unwrap();
        let label = TdLabel::new(0, 1, 2, 3).unwrap();
        let td = td_build(label, size).unwrap();
        let bij = dual_bijection(&qbp, label, size).unwrap();
        assert!(codes_equivalent(&qbp, &td, &bij).unwrap());
        let identity: Vec<usize> = (0..td.n_qubits()).collect();
        assert!(codes_equivalent(&td, &td, &identity).unwrap());
        let mut swapped = identity.clone();
        swapped.swap(0, 1);
        swapped[2] = 0;
        assert!(codes_equivalent(&td, &td, &swapped).is_err());
    }

    #[test]
    fn different_sizes_are_not_equivalent() {
        let toric = td_build(TdLabel::new(0, 1, 2, 2).unwrap(), 3).unwrap();
        let xcube = td_build(TdLabel::new(0, 1, 2, 3).unwrap(), 3).unwrap();
        assert!(!codes_equivalent(&toric, &xcube, &[]).unwrap());
    }
}
