//! Code parameters: logical count, exact distances for small kernels and
//! randomized upper bounds otherwise.

mod sweep;

pub use sweep::{parse_family, sweep_table, write_csv, Family, SweepRow, CSV_HEADER};

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::css::CssCode;
use crate::gf2::{BitVec, EchelonBasis, RowReducer, SparseMatrix};

pub const DEFAULT_EXACT_THRESHOLD: usize = 28;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("kernel dimension {dim} exceeds the exact-enumeration limit {threshold}")]
    TooLarge { dim: usize, threshold: usize },
    #[error("the code has no logical qubits")]
    NoLogicals,
    #[error("at least one trial is required")]
    NoTrials,
}

/// Which logical operators a distance refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// X-type logicals: in `ker(h_z)`, outside `rowspace(h_x)`.
    X,
    /// Z-type logicals: in `ker(h_x)`, outside `rowspace(h_z)`.
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Exactness {
    Exact,
    UpperBound { trials: usize, seed: u64 },
}

impl fmt::Display for Exactness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exactness::Exact => write!(f, "exact"),
            Exactness::UpperBound { trials, seed } => {
                write!(f, "upper-bound(trials={trials};seed={seed})")
            }
        }
    }
}

/// A distance, with `None` standing for infinity (no logicals).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceValue {
    pub value: Option<usize>,
    pub exactness: Exactness,
}

impl fmt::Display for DistanceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            Some(d) => write!(f, "{d}"),
            None => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub d_x: DistanceValue,
    pub d_z: DistanceValue,
}

impl CodeParams {
    /// `min(d_x, d_z)`, `None` when both are infinite.
    pub fn distance(&self) -> Option<usize> {
        match (self.d_x.value, self.d_z.value) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceMethod {
    Exact { threshold: usize },
    Estimate { trials: usize, seed: u64 },
    /// Exact when the kernel is small enough, otherwise an estimate.
    Auto {
        threshold: usize,
        trials: usize,
        seed: u64,
    },
}

pub fn logical_count(code: &CssCode) -> usize {
    code.n_qubits() - code.h_x().rank() - code.h_z().rank()
}

fn sides(code: &CssCode, side: Side) -> (&SparseMatrix, &SparseMatrix) {
    match side {
        Side::X => (code.h_z(), code.h_x()),
        Side::Z => (code.h_x(), code.h_z()),
    }
}

/// Basis of `ker(check)` ordered as `rank(stab)` stabilizer vectors followed
/// by `k` logical representatives.
fn adapted_kernel(check: &SparseMatrix, stab: &SparseMatrix) -> (Vec<BitVec>, usize) {
    let n = check.cols();
    let mut span = EchelonBasis::new(n);
    for row in stab.iter_rows() {
        span.insert(&BitVec::from_support(n, row));
    }
    let mut out = span.vectors();
    let r = out.len();
    for v in check.to_dense().nullspace_basis().iter_rows() {
        if span.insert(&v) {
            out.push(v);
        }
    }
    (out, r)
}

/// Minimum weight of a logical operator on `side`, by enumerating the whole
/// kernel of the opposite check matrix. `None` when there are no logicals.
pub fn distance_exact(
    code: &CssCode,
    side: Side,
    threshold: usize,
) -> Result<Option<usize>, MetricsError> {
    let (check, stab) = sides(code, side);
    let n = code.n_qubits();
    let dim = n - check.rank();
    if dim > threshold.min(63) {
        return Err(MetricsError::TooLarge { dim, threshold });
    }
    let (basis, r) = adapted_kernel(check, stab);
    if basis.len() == r {
        return Ok(None);
    }
    let m = basis.len();
    let words: Vec<&[u64]> = basis.iter().map(BitVec::words).collect();
    let width = words.first().map_or(0, |w| w.len());
    // high bits index parallel chunks, low bits are walked in Gray order
    let high = m.min(6);
    let low = m - high;
    let best = (0u64..1 << high)
        .into_par_iter()
        .map(|prefix| {
            let mut acc = vec![0u64; width];
            for j in 0..high {
                if prefix >> j & 1 == 1 {
                    xor_words(&mut acc, words[low + j]);
                }
            }
            let mut best = usize::MAX;
            let mut mask = prefix << low;
            if mask >> r != 0 {
                best = weight(&acc);
            }
            for step in 1u64..1 << low {
                let j = step.trailing_zeros() as usize;
                xor_words(&mut acc, words[j]);
                mask ^= 1 << j;
                if mask >> r != 0 {
                    best = best.min(weight(&acc));
                }
            }
            best
        })
        .min()
        .unwrap_or(usize::MAX);
    Ok(Some(best))
}

fn xor_words(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn weight(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

/// Trial RNG: one ChaCha stream per trial under the master seed.
fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Upper bound on the distance on `side`: each trial reduces the kernel
/// basis under a random column order and keeps the lightest reduced vector
/// that is a nontrivial logical. The minimum over trials is returned.
pub fn distance_estimate(
    code: &CssCode,
    side: Side,
    trials: usize,
    seed: u64,
) -> Result<usize, MetricsError> {
    if trials == 0 {
        return Err(MetricsError::NoTrials);
    }
    let (check, stab) = sides(code, side);
    let n = code.n_qubits();
    let kernel = check.to_dense().nullspace_basis();
    let stabilizers = RowReducer::new(&stab.to_dense());
    if kernel.rows() == stabilizers.rank() {
        return Err(MetricsError::NoLogicals);
    }
    let best = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut trial_rng(seed, trial));
            let reduced = kernel.select_columns(&perm).rref();
            let mut candidates: Vec<(usize, usize)> = (0..reduced.rank)
                .map(|i| (reduced.reduced.row_weight(i), i))
                .collect();
            candidates.sort_unstable();
            for (w, i) in candidates {
                let support: Vec<usize> = reduced
                    .reduced
                    .row_support(i)
                    .into_iter()
                    .map(|c| perm[c])
                    .collect();
                if !stabilizers.reduce(&BitVec::from_support(n, &support)).is_zero() {
                    return w;
                }
            }
            unreachable!("a kernel basis outside the stabilizer span contains a logical")
        })
        .min()
        .expect("at least one trial");
    Ok(best)
}

fn side_distance(code: &CssCode, side: Side, method: DistanceMethod) -> Result<DistanceValue, MetricsError> {
    let estimate = |trials, seed| -> Result<DistanceValue, MetricsError> {
        Ok(DistanceValue {
            value: Some(distance_estimate(code, side, trials, seed)?),
            exactness: Exactness::UpperBound { trials, seed },
        })
    };
    let exact = |value| DistanceValue {
        value,
        exactness: Exactness::Exact,
    };
    match method {
        DistanceMethod::Exact { threshold } => Ok(exact(distance_exact(code, side, threshold)?)),
        DistanceMethod::Estimate { trials, seed } => estimate(trials, seed),
        DistanceMethod::Auto {
            threshold,
            trials,
            seed,
        } => match distance_exact(code, side, threshold) {
            Ok(d) => Ok(exact(d)),
            Err(MetricsError::TooLarge { .. }) => estimate(trials, seed),
            Err(e) => Err(e),
        },
    }
}

/// `n`, `k` and both distances. Codes without logicals get infinite exact
/// distances whatever the method.
pub fn code_params(code: &CssCode, method: DistanceMethod) -> Result<CodeParams, MetricsError> {
    let n = code.n_qubits();
    let k = logical_count(code);
    let (d_x, d_z) = if k == 0 {
        let inf = DistanceValue {
            value: None,
            exactness: Exactness::Exact,
        };
        (inf, inf)
    } else {
        (
            side_distance(code, Side::X, method)?,
            side_distance(code, Side::Z, method)?,
        )
    };
    Ok(CodeParams { n, k, d_x, d_z })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{build_css, ClassicalCode};
    use crate::solver::{solve_fork, Triple};

    fn product(p: usize, q: usize, w: usize, l: usize) -> CssCode {
        let spec = solve_fork(Triple::new(p, q, w).unwrap()).unwrap();
        build_css(&spec, &vec![ClassicalCode::repetition(l).unwrap(); p]).unwrap()
    }

    #[test]
    fn toric_code_parameters() {
        let toric = product(2, 1, 0, 3);
        assert_eq!(toric.h_x().rank(), 8);
        assert_eq!(toric.h_z().rank(), 8);
        assert_eq!(logical_count(&toric), 2);
        assert_eq!(distance_exact(&toric, Side::X, 28).unwrap(), Some(3));
        assert_eq!(distance_exact(&toric, Side::Z, 28).unwrap(), Some(3));
        assert_eq!(distance_estimate(&toric, Side::Z, 1000, 7).unwrap(), 3);
        assert_eq!(distance_estimate(&toric, Side::X, 1000, 7).unwrap(), 3);
    }

    #[test]
    fn no_logicals_means_infinite_distance() {
        let h = SparseMatrix::new(2, 2, [(0, 0), (1, 1)]).unwrap();
        let code = CssCode::new(h.clone(), SparseMatrix::zeros(0, 2), vec![], vec![]).unwrap();
        assert_eq!(logical_count(&code), 0);
        assert_eq!(distance_exact(&code, Side::Z, 28).unwrap(), None);
        assert_eq!(distance_estimate(&code, Side::Z, 5, 1), Err(MetricsError::NoLogicals));
        let params = code_params(&code, DistanceMethod::Estimate { trials: 3, seed: 0 }).unwrap();
        assert_eq!(params.distance(), None);
    }

    #[test]
    fn unchecked_qubit_has_distance_one() {
        let x = SparseMatrix::new(1, 3, [(0, 0), (0, 1)]).unwrap();
        let z = SparseMatrix::new(1, 3, [(0, 0), (0, 1)]).unwrap();
        let code = CssCode::new(x, z, vec![], vec![]).unwrap();
        assert_eq!(distance_exact(&code, Side::X, 28).unwrap(), Some(1));
        assert_eq!(distance_exact(&code, Side::Z, 28).unwrap(), Some(1));
    }

    #[test]
    fn threshold_is_enforced() {
        let toric = product(2, 1, 0, 3);
        assert_eq!(
            distance_exact(&toric, Side::Z, 4),
            Err(MetricsError::TooLarge { dim: 10, threshold: 4 })
        );
        let auto = DistanceMethod::Auto {
            threshold: 4,
            trials: 200,
            seed: 3,
        };
        let params = code_params(&toric, auto).unwrap();
        assert_eq!(params.d_z.exactness, Exactness::UpperBound { trials: 200, seed: 3 });
    }

    #[test]
    fn estimate_is_deterministic() {
        let code = product(3, 2, 0, 3);
        let a = distance_estimate(&code, Side::Z, 40, 11).unwrap();
        let b = distance_estimate(&code, Side::Z, 40, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn xcube_estimate_reaches_lattice_size() {
        let code = product(3, 2, 0, 3);
        assert_eq!(logical_count(&code), 15);
        assert_eq!(distance_estimate(&code, Side::Z, 200, 7).unwrap(), 3);
        assert_eq!(distance_estimate(&code, Side::X, 200, 7).unwrap(), 3);
    }
}
