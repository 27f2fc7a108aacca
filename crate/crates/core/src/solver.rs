//! Solving the bootstrap equation level by level.
//!
//! For a triple `(p, q, w)` the X-side boundary is `e_{q-w}` on `p`
//! variables. On a support of size `t` its restriction is `e_{q-w}(t)`, and a
//! Z-side component is any degree `t - q` polynomial annihilated by it. Each
//! level keeps only the solutions that do not come from smaller supports, then
//! lowers their weight greedily. Because the restriction depends only on `t`,
//! every level is solved once on `{1..t}` and relabeled onto each size-`t`
//! subset when the code is assembled.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{BitVec, EchelonBasis};
use crate::poly::{multiplication_matrix, BoundaryPolynomial, Monomial, PolyError, MAX_VARS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("invalid triple (p={p}, q={q}, w={w}): need p > q > w >= 0 and p <= {MAX_VARS}")]
    InvalidTriple { p: usize, q: usize, w: usize },
    #[error("support size {t} is not in q+1..=p for q={q}, p={p}")]
    InvalidLevel { t: usize, q: usize, p: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("malformed fork complex description: {0}")]
    Format(String),
}

/// The `(p, q, w)` triple: `p` input codes, qubits in degree `q`, X-checks in
/// degree `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    p: usize,
    q: usize,
    w: usize,
}

impl Triple {
    pub fn new(p: usize, q: usize, w: usize) -> Result<Self, SolverError> {
        if p > q && q > w && p <= MAX_VARS {
            Ok(Self { p, q, w })
        } else {
            Err(SolverError::InvalidTriple { p, q, w })
        }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn w(&self) -> usize {
        self.w
    }

    /// The X-check boundary `e_{q-w}` on all `p` variables.
    pub fn x_boundary(&self) -> BoundaryPolynomial {
        BoundaryPolynomial::elementary_symmetric(self.p, self.q - self.w)
            .expect("q - w <= p for a valid triple")
    }
}

impl std::fmt::Display for Triple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.p, self.q, self.w)
    }
}

/// Primitive generators for one support size, written on `{1..t}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSolution {
    pub t: usize,
    pub generators: Vec<BoundaryPolynomial>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForkComplexSpec {
    pub triple: Triple,
    /// One entry per support size `t = q+1..=p`, possibly with no generators.
    pub levels: Vec<LevelSolution>,
}

impl ForkComplexSpec {
    /// Generators of `level` relabeled onto the support `subset`.
    pub fn generators_on(
        &self,
        level: &LevelSolution,
        subset: Monomial,
    ) -> Result<Vec<BoundaryPolynomial>, PolyError> {
        let targets: Vec<usize> = subset.indices().collect();
        level.generators.iter().map(|g| g.embed(&targets)).collect()
    }

    pub fn generator_count(&self) -> usize {
        self.levels.iter().map(|l| l.generators.len()).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ForkComplexJson::from(self)).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, SolverError> {
        let raw: ForkComplexJson =
            serde_json::from_str(s).map_err(|e| SolverError::Format(e.to_string()))?;
        let triple = Triple::new(raw.p, raw.q, raw.w)?;
        let levels = raw
            .levels
            .into_iter()
            .map(|l| {
                if l.t <= triple.q || l.t > triple.p {
                    return Err(SolverError::InvalidLevel {
                        t: l.t,
                        q: triple.q,
                        p: triple.p,
                    });
                }
                let generators = l
                    .generators
                    .iter()
                    .map(|g| BoundaryPolynomial::parse_with_degree(g, l.t - triple.q))
                    .collect::<Result<_, _>>()?;
                Ok(LevelSolution { t: l.t, generators })
            })
            .collect::<Result<_, SolverError>>()?;
        Ok(Self { triple, levels })
    }
}

#[derive(Serialize, Deserialize)]
struct ForkComplexJson {
    p: usize,
    q: usize,
    w: usize,
    levels: Vec<LevelJson>,
}

#[derive(Serialize, Deserialize)]
struct LevelJson {
    t: usize,
    generators: Vec<String>,
}

impl From<&ForkComplexSpec> for ForkComplexJson {
    fn from(spec: &ForkComplexSpec) -> Self {
        Self {
            p: spec.triple.p,
            q: spec.triple.q,
            w: spec.triple.w,
            levels: spec
                .levels
                .iter()
                .map(|l| LevelJson {
                    t: l.t,
                    generators: l.generators.iter().map(|g| g.to_string()).collect(),
                })
                .collect(),
        }
    }
}

fn check_level(triple: Triple, t: usize) -> Result<(), SolverError> {
    if t <= triple.q || t > triple.p {
        return Err(SolverError::InvalidLevel {
            t,
            q: triple.q,
            p: triple.p,
        });
    }
    Ok(())
}

/// Basis of all degree `t - q` polynomials on `{1..t}` annihilated by the
/// restricted X boundary.
pub fn solve_level(triple: Triple, t: usize) -> Result<Vec<BoundaryPolynomial>, SolverError> {
    check_level(triple, t)?;
    let support = Monomial::first(t);
    let tau = triple.x_boundary().restrict(support);
    let d_sol = t - triple.q;
    let mm = multiplication_matrix(&tau, d_sol, support)?;
    let kernel = mm.matrix.nullspace_basis();
    Ok(kernel
        .iter_rows()
        .map(|v| {
            BoundaryPolynomial::from_coefficients(d_sol, &mm.in_basis, (0..v.len()).map(|i| v.get(i)))
        })
        .collect())
}

/// Spanning set of the solutions at size `t` inherited from smaller supports:
/// every lower generator placed on every smaller subset of `{1..t}`, times
/// the monomial on the remaining indices.
pub fn embedded_products(
    lower: &[LevelSolution],
    t: usize,
    q: usize,
) -> Result<Vec<BoundaryPolynomial>, PolyError> {
    let full = Monomial::first(t);
    let mut out = Vec::new();
    for level in lower.iter().filter(|l| l.t < t) {
        for subset in full.subsets(level.t) {
            let targets: Vec<usize> = subset.indices().collect();
            let cofactor = BoundaryPolynomial::monomial(full.difference(subset));
            for g in &level.generators {
                let product = g.embed(&targets)?.product(&cofactor);
                debug_assert_eq!(product.degree(), t - q);
                out.push(product);
            }
        }
    }
    Ok(out)
}

/// Keeps the members of `v_sol` that are independent of the inherited span,
/// scanning with the inherited vectors first and `v_sol` in order after them.
pub fn filter_primitive(
    v_sol: &[BoundaryPolynomial],
    lower: &[LevelSolution],
    t: usize,
    q: usize,
) -> Result<Vec<BoundaryPolynomial>, PolyError> {
    let basis = Monomial::first(t).subsets(t - q);
    let to_vec = |f: &BoundaryPolynomial| -> Result<BitVec, PolyError> {
        let c = f.to_coefficients(&basis)?;
        Ok(BitVec::from_bools(&c.iter().map(|&b| b == 1).collect::<Vec<_>>()))
    };
    let mut span = EchelonBasis::new(basis.len());
    for f in embedded_products(lower, t, q)? {
        span.insert(&to_vec(&f)?);
    }
    let mut primitive = Vec::new();
    for f in v_sol {
        if span.insert(&to_vec(f)?) {
            primitive.push(f.clone());
        }
    }
    Ok(primitive)
}

/// Replaces `g[i]` by `g[i] + g[j]` whenever that strictly lowers its term
/// count, sweeping pairs in ascending order until a sweep changes nothing.
pub fn greedy_reduce(mut basis: Vec<BoundaryPolynomial>) -> Vec<BoundaryPolynomial> {
    loop {
        let mut changed = false;
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                if i == j {
                    continue;
                }
                let sum = basis[i]
                    .add(&basis[j])
                    .expect("basis elements share a degree");
                if sum.weight() < basis[i].weight() {
                    basis[i] = sum;
                    changed = true;
                }
            }
        }
        if !changed {
            return basis;
        }
    }
}

pub fn solve_fork(triple: Triple) -> Result<ForkComplexSpec, SolverError> {
    let mut levels: Vec<LevelSolution> = Vec::new();
    for t in triple.q + 1..=triple.p {
        let v_sol = solve_level(triple, t)?;
        let primitive = filter_primitive(&v_sol, &levels, t, triple.q)?;
        levels.push(LevelSolution {
            t,
            generators: greedy_reduce(primitive),
        });
    }
    Ok(ForkComplexSpec { triple, levels })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &str) -> BoundaryPolynomial {
        s.parse().unwrap()
    }

    fn triple(p: usize, q: usize, w: usize) -> Triple {
        Triple::new(p, q, w).unwrap()
    }

    #[test]
    fn triple_validation() {
        assert!(Triple::new(2, 3, 0).is_err());
        assert!(Triple::new(3, 2, 2).is_err());
        assert!(Triple::new(3, 2, 0).is_ok());
    }

    #[test]
    fn level_bounds() {
        assert!(matches!(
            solve_level(triple(4, 2, 1), 2),
            Err(SolverError::InvalidLevel { .. })
        ));
        assert!(solve_level(triple(4, 2, 1), 5).is_err());
    }

    #[test]
    fn unique_solution_for_four_dimensional_toric() {
        let sol = solve_level(triple(4, 2, 1), 3).unwrap();
        assert_eq!(sol, vec![poly("d1 + d2 + d3")]);
    }

    #[test]
    fn two_solutions_for_xcube() {
        let sol = solve_level(triple(3, 2, 0), 3).unwrap();
        assert_eq!(sol, vec![poly("d1 + d2"), poly("d1 + d3")]);
    }

    #[test]
    fn no_lower_levels_means_everything_is_primitive() {
        let sol = solve_level(triple(5, 3, 0), 4).unwrap();
        assert_eq!(filter_primitive(&sol, &[], 4, 3).unwrap(), sol);
    }

    #[test]
    fn greedy_examples() {
        // the first element drops to d3 on the first pass, then the second
        // is rewritten against it
        assert_eq!(
            greedy_reduce(vec![poly("d1 + d2"), poly("d1 + d2 + d3")]),
            vec![poly("d3"), poly("d1 + d2")]
        );
        let b = vec![poly("d1 + d2"), poly("d2 + d3")];
        assert_eq!(greedy_reduce(b.clone()), b);
        assert_eq!(greedy_reduce(vec![poly("d1*d2")]), vec![poly("d1*d2")]);
    }

    #[test]
    fn fork_examples() {
        let spec = solve_fork(triple(3, 2, 0)).unwrap();
        assert_eq!(spec.levels.len(), 1);
        assert_eq!(spec.levels[0].generators.len(), 2);

        for (p, q) in [(3, 2), (4, 2), (4, 3), (5, 2)] {
            let spec = solve_fork(triple(p, q, q - 1)).unwrap();
            assert_eq!(spec.levels[0].t, q + 1);
            assert_eq!(
                spec.levels[0].generators,
                vec![BoundaryPolynomial::elementary_symmetric(q + 1, 1).unwrap()]
            );
            assert!(spec.levels[1..].iter().all(|l| l.generators.is_empty()));
        }

        let spec = solve_fork(triple(4, 2, 0)).unwrap();
        assert_eq!(spec.levels[0].generators.len(), 2);
        assert!(spec.levels[1].generators.is_empty());
    }

    #[test]
    fn json_round_trip() {
        let spec = solve_fork(triple(5, 2, 0)).unwrap();
        let json = spec.to_json();
        assert_eq!(ForkComplexSpec::from_json(&json).unwrap(), spec);
        assert!(ForkComplexSpec::from_json("{\"p\":2,\"q\":3,\"w\":0,\"levels\":[]}").is_err());
    }
}
