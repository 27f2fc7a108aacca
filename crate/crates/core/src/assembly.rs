//! Turning boundary polynomials into explicit check matrices.
//!
//! The degree-`k` part of the tensor-product complex of `p` classical codes
//! has one sector per direction set `S` with `|S| = k`: bits of code `i` for
//! `i` in `S`, checks of code `j` otherwise. A monomial `d^S'` maps an element
//! of sector `S` to zero unless `S'` is contained in `S`, and otherwise
//! replaces each bit in `S'` by the checks incident to it.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::css::{CssCode, CssError, QubitLabel, ZBlock};
use crate::gf2::{Gf2Error, SparseMatrix};
use crate::poly::{BoundaryPolynomial, Monomial, PolyError, MAX_VARS};
use crate::solver::ForkComplexSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssemblyError {
    #[error("expected {expected} input codes, got {found}")]
    CodeCount { expected: usize, found: usize },
    #[error("degree {degree} is out of range for {p} input codes")]
    Degree { degree: usize, p: usize },
    #[error("polynomial of degree {poly} cannot act on degree {from}")]
    DegreeMismatch { poly: usize, from: usize },
    #[error("repetition code needs at least 2 bits, got {0}")]
    RepetitionLength(usize),
    #[error("assembled checks do not commute")]
    NotCommuting,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Css(CssError),
}

impl From<CssError> for AssemblyError {
    fn from(e: CssError) -> Self {
        match e {
            CssError::NotCommuting => AssemblyError::NotCommuting,
            other => AssemblyError::Css(other),
        }
    }
}

/// A classical linear code given by its parity-check matrix (checks x bits).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalCode {
    h: SparseMatrix,
    bit_checks: Vec<Vec<usize>>,
}

impl ClassicalCode {
    pub fn new(h: SparseMatrix) -> Self {
        let t = h.transpose();
        let bit_checks = t.iter_rows().map(<[usize]>::to_vec).collect();
        Self { h, bit_checks }
    }

    /// Cyclic repetition code on `l` bits: check `i` couples bits `i` and
    /// `i + 1 mod l`.
    pub fn repetition(l: usize) -> Result<Self, AssemblyError> {
        if l < 2 {
            return Err(AssemblyError::RepetitionLength(l));
        }
        let h = SparseMatrix::new(l, l, (0..l).flat_map(|i| [(i, i), (i, (i + 1) % l)]))?;
        Ok(Self::new(h))
    }

    pub fn n_bits(&self) -> usize {
        self.h.cols()
    }

    pub fn n_checks(&self) -> usize {
        self.h.rows()
    }

    pub fn h(&self) -> &SparseMatrix {
        &self.h
    }

    /// Checks incident to bit `b`.
    pub fn checks_of_bit(&self, b: usize) -> &[usize] {
        &self.bit_checks[b]
    }
}

/// A basis element of one degree of the tensor-product complex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorBasisIndex {
    /// Codes contributing a bit.
    pub directions: Monomial,
    /// One local index per code, 0-based: a bit index for codes in
    /// `directions`, a check index for the rest.
    pub locals: Vec<usize>,
}

#[derive(Debug, Clone)]
struct Sector {
    directions: Monomial,
    offset: usize,
    radices: Vec<usize>,
    len: usize,
}

/// Canonical indexing of one degree: sectors in lexicographic order of their
/// direction sets, elements within a sector in mixed radix with the first
/// code most significant.
#[derive(Debug, Clone)]
pub struct TensorBasis {
    degree: usize,
    sectors: Vec<Sector>,
    by_directions: HashMap<Monomial, usize>,
    len: usize,
}

impl TensorBasis {
    pub fn new(codes: &[ClassicalCode], degree: usize) -> Result<Self, AssemblyError> {
        let p = codes.len();
        if degree > p || p > MAX_VARS {
            return Err(AssemblyError::Degree { degree, p });
        }
        let mut sectors = Vec::new();
        let mut by_directions = HashMap::new();
        let mut offset = 0;
        for directions in Monomial::first(p).subsets(degree) {
            let radices: Vec<usize> = codes
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if directions.contains(i + 1) {
                        c.n_bits()
                    } else {
                        c.n_checks()
                    }
                })
                .collect();
            let len = radices.iter().product();
            by_directions.insert(directions, sectors.len());
            sectors.push(Sector {
                directions,
                offset,
                radices,
                len,
            });
            offset += len;
        }
        Ok(Self {
            degree,
            sectors,
            by_directions,
            len: offset,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Index range occupied by the sector with the given direction set.
    pub fn sector_range(&self, directions: Monomial) -> Option<std::ops::Range<usize>> {
        self.by_directions.get(&directions).map(|&s| {
            let sec = &self.sectors[s];
            sec.offset..sec.offset + sec.len
        })
    }

    pub fn rank_of(&self, element: &TensorBasisIndex) -> Option<usize> {
        let sec = &self.sectors[*self.by_directions.get(&element.directions)?];
        if element.locals.len() != sec.radices.len() {
            return None;
        }
        let mut r = 0;
        for (&x, &radix) in element.locals.iter().zip(&sec.radices) {
            if x >= radix {
                return None;
            }
            r = r * radix + x;
        }
        Some(sec.offset + r)
    }

    pub fn element(&self, index: usize) -> TensorBasisIndex {
        assert!(index < self.len, "basis index {index} out of range");
        let s = self.sectors.partition_point(|sec| sec.offset + sec.len <= index);
        let sec = &self.sectors[s];
        let mut rest = index - sec.offset;
        let mut locals = vec![0; sec.radices.len()];
        for (slot, &radix) in locals.iter_mut().zip(&sec.radices).rev() {
            *slot = rest % radix;
            rest /= radix;
        }
        TensorBasisIndex {
            directions: sec.directions,
            locals,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = TensorBasisIndex> + '_ {
        (0..self.len).map(|i| self.element(i))
    }
}

/// All basis elements of degree `k`, in canonical order.
pub fn enumerate_basis(
    codes: &[ClassicalCode],
    k: usize,
) -> Result<Vec<TensorBasisIndex>, AssemblyError> {
    Ok(TensorBasis::new(codes, k)?.iter().collect())
}

/// Image of one basis element under a polynomial, as target-basis indices
/// with GF(2) cancellation applied (sorted).
fn apply(
    f: &BoundaryPolynomial,
    codes: &[ClassicalCode],
    element: &TensorBasisIndex,
    target: &TensorBasis,
) -> Vec<usize> {
    let mut out = Vec::new();
    for m in f.terms() {
        if !m.is_subset_of(element.directions) {
            continue;
        }
        let directions = element.directions.difference(m);
        let acting: Vec<usize> = m.indices().map(|i| i - 1).collect();
        let mut locals = element.locals.clone();
        expand(codes, &acting, 0, &element.locals, &mut locals, &mut |locals| {
            let t = TensorBasisIndex {
                directions,
                locals: locals.to_vec(),
            };
            out.push(target.rank_of(&t).expect("image lies in the target basis"));
        });
    }
    crate::gf2::cancel_pairs(&mut out);
    out
}

fn expand(
    codes: &[ClassicalCode],
    acting: &[usize],
    depth: usize,
    source: &[usize],
    locals: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if depth == acting.len() {
        emit(locals);
        return;
    }
    let i = acting[depth];
    for &c in codes[i].checks_of_bit(source[i]) {
        locals[i] = c;
        expand(codes, acting, depth + 1, source, locals, emit);
    }
    locals[i] = source[i];
}

/// Matrix of `f` from degree `from_degree` to `from_degree - deg f`
/// (rows are the target basis, columns the source basis).
pub fn instantiate(
    f: &BoundaryPolynomial,
    codes: &[ClassicalCode],
    from_degree: usize,
) -> Result<SparseMatrix, AssemblyError> {
    if f.degree() > from_degree {
        return Err(AssemblyError::DegreeMismatch {
            poly: f.degree(),
            from: from_degree,
        });
    }
    if f.variables().indices().any(|i| i > codes.len()) {
        return Err(AssemblyError::Poly(PolyError::OutsideSupport));
    }
    let source = TensorBasis::new(codes, from_degree)?;
    let target = TensorBasis::new(codes, from_degree - f.degree())?;
    let columns: Vec<Vec<usize>> = (0..source.len())
        .into_par_iter()
        .map(|j| apply(f, codes, &source.element(j), &target))
        .collect();
    Ok(SparseMatrix::from_rows_xor(target.len(), columns).transpose())
}

fn check_code_count(expected: usize, codes: &[ClassicalCode]) -> Result<(), AssemblyError> {
    if codes.len() != expected {
        return Err(AssemblyError::CodeCount {
            expected,
            found: codes.len(),
        });
    }
    Ok(())
}

fn tensor_labels(basis: &TensorBasis) -> Vec<QubitLabel> {
    basis.iter().map(QubitLabel::Tensor).collect()
}

/// The CSS code of a solved fork complex over concrete input codes.
pub fn build_css(spec: &ForkComplexSpec, codes: &[ClassicalCode]) -> Result<CssCode, AssemblyError> {
    let triple = spec.triple;
    let p = triple.p();
    check_code_count(p, codes)?;
    let h_x = instantiate(&triple.x_boundary(), codes, triple.q())?;
    let qubits = TensorBasis::new(codes, triple.q())?;

    let mut rows: Vec<Vec<usize>> = Vec::new();
    let mut z_blocks = Vec::new();
    for level in &spec.levels {
        if level.generators.is_empty() {
            continue;
        }
        let checks = TensorBasis::new(codes, level.t)?;
        for subset in Monomial::first(p).subsets(level.t) {
            let range = checks
                .sector_range(subset)
                .expect("every subset of the right size is a sector");
            for (gi, g) in spec.generators_on(level, subset)?.into_iter().enumerate() {
                let start = rows.len();
                let block: Vec<Vec<usize>> = range
                    .clone()
                    .into_par_iter()
                    .map(|e| apply(&g, codes, &checks.element(e), &qubits))
                    .collect();
                rows.extend(block);
                z_blocks.push(ZBlock {
                    support: subset.indices().collect(),
                    generator_index: gi,
                    generator: g.to_string(),
                    rows: start..rows.len(),
                });
            }
        }
    }
    let h_z = SparseMatrix::from_rows_xor(qubits.len(), rows);
    Ok(CssCode::new(h_x, h_z, tensor_labels(&qubits), z_blocks)?)
}

/// The hypergraph-product segment `C_{q+1} -> C_q -> C_{q-1}` of the tensor
/// complex, with both maps given by `e_1`.
pub fn hgp_reference(codes: &[ClassicalCode], q: usize) -> Result<CssCode, AssemblyError> {
    let p = codes.len();
    if q == 0 || q >= p {
        return Err(AssemblyError::Degree { degree: q, p });
    }
    let e1 = BoundaryPolynomial::elementary_symmetric(p, 1)?;
    let h_x = instantiate(&e1, codes, q)?;
    let h_z = instantiate(&e1, codes, q + 1)?.transpose();
    let qubits = TensorBasis::new(codes, q)?;
    let checks = TensorBasis::new(codes, q + 1)?;
    let z_blocks = Monomial::first(p)
        .subsets(q + 1)
        .into_iter()
        .map(|s| {
            let targets: Vec<usize> = s.indices().collect();
            ZBlock {
                generator: e1.restrict(s).to_string(),
                support: targets,
                generator_index: 0,
                rows: checks.sector_range(s).expect("sector exists"),
            }
        })
        .collect();
    Ok(CssCode::new(h_x, h_z, tensor_labels(&qubits), z_blocks)?)
}
