//! Squarefree polynomials in formal boundary variables `d1, d2, ..., dp`.
//!
//! A monomial is a set of variable indices; multiplying two monomials that
//! share an index gives zero, because every extended boundary operator squares
//! to zero. Polynomials have GF(2) coefficients and are homogeneous. All bases
//! are ordered lexicographically on the sorted index tuples.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::gf2::BitMatrix;

/// Largest usable variable index.
pub const MAX_VARS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable index {0} outside 1..={MAX_VARS}")]
    IndexOutOfRange(usize),
    #[error("variable index {0} repeated in a monomial")]
    RepeatedIndex(usize),
    #[error("invalid degree {k} for {t} variables")]
    InvalidDegree { k: usize, t: usize },
    #[error("term of degree {found} in a polynomial of degree {expected}")]
    NotHomogeneous { expected: usize, found: usize },
    #[error("relabeling maps two indices onto {0}")]
    NonInjective(usize),
    #[error("relabeling has no image for index {0}")]
    Unmapped(usize),
    #[error("polynomial uses variables outside the given support")]
    OutsideSupport,
    #[error("cannot parse polynomial {0:?}")]
    Parse(String),
}

/// A squarefree monomial: the product of the variables in an index set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn new(indices: &[usize]) -> Result<Self, PolyError> {
        let mut bits = 0u64;
        for &i in indices {
            if i == 0 || i > MAX_VARS {
                return Err(PolyError::IndexOutOfRange(i));
            }
            let b = 1u64 << (i - 1);
            if bits & b != 0 {
                return Err(PolyError::RepeatedIndex(i));
            }
            bits |= b;
        }
        Ok(Monomial(bits))
    }

    pub fn var(i: usize) -> Self {
        assert!((1..=MAX_VARS).contains(&i), "variable index {i} out of range");
        Monomial(1u64 << (i - 1))
    }

    /// The monomial `d1 * d2 * ... * dt`.
    pub fn first(t: usize) -> Self {
        assert!(t <= MAX_VARS);
        if t == MAX_VARS {
            Monomial(u64::MAX)
        } else {
            Monomial((1u64 << t) - 1)
        }
    }

    pub fn from_bits(bits: u64) -> Self {
        Monomial(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=MAX_VARS).contains(&i) && self.0 >> (i - 1) & 1 == 1
    }

    pub fn is_subset_of(self, other: Monomial) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Monomial) -> Monomial {
        Monomial(self.0 | other.0)
    }

    pub fn difference(self, other: Monomial) -> Monomial {
        Monomial(self.0 & !other.0)
    }

    /// Ascending variable indices.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(b + 1)
            }
        })
    }

    /// Product in the squarefree algebra; `None` when the index sets overlap.
    pub fn product(self, other: Monomial) -> Option<Monomial> {
        (self.0 & other.0 == 0).then_some(Monomial(self.0 | other.0))
    }

    /// All size-`k` subsets of this index set, in lexicographic order.
    pub fn subsets(self, k: usize) -> Vec<Monomial> {
        let idx: Vec<usize> = self.indices().collect();
        let mut out = Vec::new();
        if k > idx.len() {
            return out;
        }
        let n = idx.len();
        let mut pick: Vec<usize> = (0..k).collect();
        loop {
            out.push(Monomial(pick.iter().fold(0u64, |acc, &p| acc | 1u64 << (idx[p] - 1))));
            let Some(i) = (0..k).rev().find(|&i| pick[i] < n - k + i) else {
                return out;
            };
            pick[i] += 1;
            for j in i + 1..k {
                pick[j] = pick[j - 1] + 1;
            }
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.indices().cmp(other.indices())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.indices().map(|i| format!("d{i}")).collect();
        f.write_str(&parts.join("*"))
    }
}

/// Homogeneous GF(2) polynomial over squarefree monomials.
///
/// The zero polynomial keeps the degree tag it was created with, but is
/// accepted wherever a polynomial of any degree is expected.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoundaryPolynomial {
    degree: usize,
    terms: BTreeSet<Monomial>,
}

impl BoundaryPolynomial {
    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            terms: BTreeSet::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::ONE)
    }

    pub fn monomial(m: Monomial) -> Self {
        Self {
            degree: m.degree(),
            terms: BTreeSet::from([m]),
        }
    }

    /// Sum of the given monomials over GF(2); repeated terms cancel in pairs.
    pub fn from_terms(
        degree: usize,
        terms: impl IntoIterator<Item = Monomial>,
    ) -> Result<Self, PolyError> {
        let mut p = Self::zero(degree);
        for m in terms {
            if m.degree() != degree {
                return Err(PolyError::NotHomogeneous {
                    expected: degree,
                    found: m.degree(),
                });
            }
            p.toggle(m);
        }
        Ok(p)
    }

    /// Sum of all `C(t, k)` degree-`k` monomials on variables `1..=t`.
    pub fn elementary_symmetric(t: usize, k: usize) -> Result<Self, PolyError> {
        if k > t || t > MAX_VARS {
            return Err(PolyError::InvalidDegree { k, t });
        }
        Ok(Self {
            degree: k,
            terms: Monomial::first(t).subsets(k).into_iter().collect(),
        })
    }

    fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of monomial terms.
    pub fn weight(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.iter().copied()
    }

    /// Union of the index sets of all terms.
    pub fn variables(&self) -> Monomial {
        self.terms.iter().fold(Monomial::ONE, |acc, &m| acc.union(m))
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.degree != other.degree {
            return Err(PolyError::NotHomogeneous {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(Self {
            degree: self.degree,
            terms: self
                .terms
                .symmetric_difference(&other.terms)
                .copied()
                .collect(),
        })
    }

    /// Product in the squarefree algebra; overlapping monomials vanish and
    /// equal products cancel in pairs.
    pub fn product(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for &a in &self.terms {
            for &b in &other.terms {
                if let Some(m) = a.product(b) {
                    out.toggle(m);
                }
            }
        }
        out
    }

    /// Keeps only the terms whose variables all lie in `support`.
    pub fn restrict(&self, support: Monomial) -> Self {
        Self {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|m| m.is_subset_of(support))
                .collect(),
        }
    }

    /// Renames variables through `map`. Every variable used by `self` must be
    /// mapped, and no two of them to the same index.
    pub fn relabel(&self, map: &BTreeMap<usize, usize>) -> Result<Self, PolyError> {
        let used = self.variables();
        let mut images = BTreeSet::new();
        for i in used.indices() {
            let &j = map.get(&i).ok_or(PolyError::Unmapped(i))?;
            if j == 0 || j > MAX_VARS {
                return Err(PolyError::IndexOutOfRange(j));
            }
            if !images.insert(j) {
                return Err(PolyError::NonInjective(j));
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|m| Monomial(m.indices().fold(0u64, |acc, i| acc | 1u64 << (map[&i] - 1))))
            .collect();
        Ok(Self {
            degree: self.degree,
            terms,
        })
    }

    /// Relabels a polynomial on `1..=targets.len()` by sending `i` to
    /// `targets[i - 1]`.
    pub fn embed(&self, targets: &[usize]) -> Result<Self, PolyError> {
        let map: BTreeMap<usize, usize> = targets
            .iter()
            .enumerate()
            .map(|(i, &j)| (i + 1, j))
            .collect();
        self.relabel(&map)
    }

    /// Coefficient vector over `basis` (which must contain every term).
    pub fn to_coefficients(&self, basis: &[Monomial]) -> Result<Vec<u8>, PolyError> {
        let mut v = vec![0u8; basis.len()];
        for m in &self.terms {
            let i = basis
                .binary_search(m)
                .map_err(|_| PolyError::OutsideSupport)?;
            v[i] = 1;
        }
        Ok(v)
    }

    pub fn from_coefficients(degree: usize, basis: &[Monomial], coeffs: impl IntoIterator<Item = bool>) -> Self {
        Self {
            degree,
            terms: basis
                .iter()
                .zip(coeffs)
                .filter_map(|(&m, c)| c.then_some(m))
                .collect(),
        }
    }

    /// Parses the rendered form, e.g. `d1*d2 + d1*d3`, with an explicit degree
    /// for the zero polynomial `0`.
    pub fn parse_with_degree(s: &str, degree: usize) -> Result<Self, PolyError> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero(degree));
        }
        let mut terms = Vec::new();
        for term in s.split('+') {
            let term = term.trim();
            if term == "1" {
                terms.push(Monomial::ONE);
                continue;
            }
            let mut idx = Vec::new();
            for factor in term.split('*') {
                let factor = factor.trim();
                let n = factor
                    .strip_prefix('d')
                    .and_then(|n| n.parse::<usize>().ok())
                    .ok_or_else(|| PolyError::Parse(s.to_string()))?;
                idx.push(n);
            }
            terms.push(Monomial::new(&idx)?);
        }
        Self::from_terms(terms[0].degree(), terms)
    }
}

impl FromStr for BoundaryPolynomial {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_with_degree(s, 0)
    }
}

impl fmt::Display for BoundaryPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|m| m.to_string()).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for BoundaryPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[deg {}] {}", self.degree, self)
    }
}

/// Matrix of the linear map `xi -> tau * xi` on homogeneous polynomials of a
/// fixed degree over a support set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicationMatrix {
    /// Rows index `out_basis`, columns index `in_basis`.
    pub matrix: BitMatrix,
    pub in_basis: Vec<Monomial>,
    pub out_basis: Vec<Monomial>,
}

pub fn multiplication_matrix(
    tau: &BoundaryPolynomial,
    d_sol: usize,
    support: Monomial,
) -> Result<MultiplicationMatrix, PolyError> {
    if !tau.variables().is_subset_of(support) {
        return Err(PolyError::OutsideSupport);
    }
    let in_basis = support.subsets(d_sol);
    let out_basis = support.subsets(d_sol + tau.degree());
    let mut matrix = BitMatrix::zeros(out_basis.len(), in_basis.len());
    for (j, &m) in in_basis.iter().enumerate() {
        let image = tau.product(&BoundaryPolynomial::monomial(m));
        for t in image.terms() {
            let i = out_basis
                .binary_search(&t)
                .expect("product stays inside the support");
            matrix.set(i, j, true);
        }
    }
    Ok(MultiplicationMatrix {
        matrix,
        in_basis,
        out_basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(idx: &[usize]) -> Monomial {
        Monomial::new(idx).unwrap()
    }

    fn poly(s: &str) -> BoundaryPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn monomial_products() {
        assert_eq!(m(&[1]).product(m(&[2])), Some(m(&[1, 2])));
        assert_eq!(m(&[1]).product(m(&[1])), None);
        assert_eq!(m(&[1, 2]).product(m(&[2, 3])), None);
    }

    #[test]
    fn monomial_validation() {
        assert_eq!(Monomial::new(&[0]), Err(PolyError::IndexOutOfRange(0)));
        assert_eq!(Monomial::new(&[2, 2]), Err(PolyError::RepeatedIndex(2)));
    }

    #[test]
    fn subsets_are_lexicographic() {
        let s: Vec<String> = Monomial::first(4).subsets(2).iter().map(|m| m.to_string()).collect();
        assert_eq!(s, ["d1*d2", "d1*d3", "d1*d4", "d2*d3", "d2*d4", "d3*d4"]);
        assert_eq!(Monomial::first(3).subsets(0), vec![Monomial::ONE]);
        assert!(Monomial::first(2).subsets(3).is_empty());
        assert_eq!(m(&[2, 5, 7]).subsets(3), vec![m(&[2, 5, 7])]);
    }

    #[test]
    fn polynomial_products() {
        let f = poly("d1 + d2");
        assert!(f.product(&f).is_zero());
        assert_eq!(f.product(&poly("d3")), poly("d1*d3 + d2*d3"));
        let e2 = poly("d1*d2 + d1*d3 + d2*d3");
        let p = e2.product(&f);
        assert!(p.is_zero());
        assert_eq!(p.degree(), 3);
    }

    #[test]
    fn elementary_symmetric_examples() {
        assert_eq!(BoundaryPolynomial::elementary_symmetric(3, 1).unwrap(), poly("d1 + d2 + d3"));
        assert_eq!(
            BoundaryPolynomial::elementary_symmetric(3, 2).unwrap().to_string(),
            "d1*d2 + d1*d3 + d2*d3"
        );
        assert_eq!(BoundaryPolynomial::elementary_symmetric(6, 3).unwrap().weight(), 20);
        assert_eq!(BoundaryPolynomial::elementary_symmetric(3, 0).unwrap(), BoundaryPolynomial::one());
        assert_eq!(
            BoundaryPolynomial::elementary_symmetric(2, 3),
            Err(PolyError::InvalidDegree { k: 3, t: 2 })
        );
    }

    #[test]
    fn restrict_examples() {
        let e1 = BoundaryPolynomial::elementary_symmetric(4, 1).unwrap();
        assert_eq!(e1.restrict(Monomial::first(3)), poly("d1 + d2 + d3"));
        let e2 = BoundaryPolynomial::elementary_symmetric(4, 2).unwrap();
        assert_eq!(
            e2.restrict(Monomial::first(3)),
            BoundaryPolynomial::elementary_symmetric(3, 2).unwrap()
        );
        assert!(poly("d1*d2").restrict(m(&[3, 4])).is_zero());
    }

    #[test]
    fn relabel_examples() {
        let f = poly("d1 + d2");
        let map = BTreeMap::from([(1, 3), (2, 4)]);
        assert_eq!(f.relabel(&map).unwrap(), poly("d3 + d4"));
        let id = BTreeMap::from([(1, 1), (2, 2)]);
        assert_eq!(f.relabel(&id).unwrap(), f);
        let inverse = BTreeMap::from([(3, 1), (4, 2)]);
        assert_eq!(f.relabel(&map).unwrap().relabel(&inverse).unwrap(), f);
        assert_eq!(
            f.relabel(&BTreeMap::from([(1, 3), (2, 3)])),
            Err(PolyError::NonInjective(3))
        );
        assert_eq!(f.relabel(&BTreeMap::from([(1, 3)])), Err(PolyError::Unmapped(2)));
    }

    #[test]
    fn rendering_round_trips() {
        let f = poly("d2*d3 + d1*d2");
        assert_eq!(f.to_string(), "d1*d2 + d2*d3");
        assert_eq!(f.to_string().parse::<BoundaryPolynomial>().unwrap(), f);
        assert_eq!(BoundaryPolynomial::zero(2).to_string(), "0");
        assert!(BoundaryPolynomial::from_str("d1 + x2").is_err());
        assert!(BoundaryPolynomial::from_str("d1 + d1*d2").is_err());
    }

    #[test]
    fn add_respects_homogeneity_except_for_zero() {
        let a = poly("d1 + d2");
        assert!(a.add(&poly("d1*d2")).is_err());
        assert_eq!(a.add(&BoundaryPolynomial::zero(5)).unwrap(), a);
        assert_eq!(a.add(&poly("d2 + d3")).unwrap(), poly("d1 + d3"));
    }
}
