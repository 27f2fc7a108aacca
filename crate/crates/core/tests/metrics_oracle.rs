use qbp::assembly::{build_css, hgp_reference, ClassicalCode};
use qbp::css::CssCode;
use qbp::gf2::SparseMatrix;
use qbp::metrics::{distance_estimate, distance_exact, logical_count, Side};
use qbp::solver::{solve_fork, Triple};

fn product(p: usize, q: usize, w: usize, l: usize) -> CssCode {
    let spec = solve_fork(Triple::new(p, q, w).unwrap()).unwrap();
    build_css(&spec, &vec![ClassicalCode::repetition(l).unwrap(); p]).unwrap()
}

/// Row-by-row elimination on `u128` masks; enough for up to 128 columns.
fn naive_rank(h: &SparseMatrix) -> usize {
    assert!(h.cols() <= 128);
    let mut pivots: Vec<u128> = Vec::new();
    for row in h.iter_rows() {
        let mut v = row.iter().fold(0u128, |acc, &c| acc | 1 << c);
        for &p in &pivots {
            v = v.min(v ^ p);
        }
        if v != 0 {
            pivots.push(v);
            pivots.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    pivots.len()
}

fn masks(h: &SparseMatrix) -> Vec<u32> {
    h.iter_rows().map(|r| r.iter().fold(0u32, |a, &c| a | 1 << c)).collect()
}

#[test]
fn toric_distance_by_full_enumeration() {
    let code = product(2, 1, 0, 3);
    assert_eq!(code.n_qubits(), 18);
    let x = masks(code.h_x());
    let z = masks(code.h_z());
    let span = |gens: &[u32]| -> std::collections::HashSet<u32> {
        (0u32..1 << gens.len())
            .map(|c| (0..gens.len()).filter(|i| c >> i & 1 == 1).fold(0, |a, i| a ^ gens[i]))
            .collect()
    };
    let (span_x, span_z) = (span(&x), span(&z));
    let mut d_x = u32::MAX;
    let mut d_z = u32::MAX;
    for v in 1u32..1 << 18 {
        let w = v.count_ones();
        if x.iter().all(|r| (r & v).count_ones() % 2 == 0) && !span_z.contains(&v) {
            d_z = d_z.min(w);
        }
        if z.iter().all(|r| (r & v).count_ones() % 2 == 0) && !span_x.contains(&v) {
            d_x = d_x.min(w);
        }
    }
    assert_eq!((d_x, d_z), (3, 3));
    assert_eq!(distance_exact(&code, Side::X, 28).unwrap(), Some(3));
    assert_eq!(distance_exact(&code, Side::Z, 28).unwrap(), Some(3));
    assert_eq!(logical_count(&code), 18 - naive_rank(code.h_x()) - naive_rank(code.h_z()));
}

#[test]
fn xcube_dimension_is_affine_in_size() {
    for l in 3..=6 {
        assert_eq!(logical_count(&product(3, 2, 0, l)), 6 * l - 3, "L={l}");
    }
    // small sizes through an independent elimination
    for l in [2, 3] {
        let code = product(3, 2, 0, l);
        if code.n_qubits() <= 128 {
            let k = code.n_qubits() - naive_rank(code.h_x()) - naive_rank(code.h_z());
            assert_eq!(k, logical_count(&code));
        }
    }
}

#[test]
fn four_dimensional_toric_code() {
    let code = product(4, 2, 1, 3);
    assert_eq!(code.n_qubits(), 486);
    assert_eq!(logical_count(&code), 6);
}

#[test]
fn dependent_rows_do_not_change_k() {
    let code = product(3, 2, 0, 3);
    let mut rows: Vec<Vec<usize>> = code.h_z().iter_rows().map(<[usize]>::to_vec).collect();
    let mut extra: Vec<usize> = rows[0].iter().chain(&rows[1]).copied().collect();
    extra.sort_unstable();
    rows.push(extra);
    let h_z = SparseMatrix::from_rows_xor(code.n_qubits(), rows);
    let bigger = CssCode::new(code.h_x().clone(), h_z, vec![], vec![]).unwrap();
    assert_eq!(logical_count(&bigger), logical_count(&code));
}

#[test]
fn consecutive_triples_match_segment_dimension() {
    for p in 2..=4 {
        for q in 1..p {
            let codes = vec![ClassicalCode::repetition(3).unwrap(); p];
            let hgp = hgp_reference(&codes, q).unwrap();
            assert_eq!(logical_count(&product(p, q, q - 1, 3)), logical_count(&hgp));
        }
    }
}

#[test]
fn estimates_bound_exact_distances() {
    let codes = [
        product(2, 1, 0, 3),
        product(2, 1, 0, 4),
        product(3, 2, 0, 2),
        product(3, 1, 0, 2),
        product(3, 2, 1, 2),
    ];
    for code in &codes {
        for side in [Side::X, Side::Z] {
            let Ok(Some(exact)) = distance_exact(code, side, 24) else {
                continue;
            };
            for seed in 0..3 {
                assert!(distance_estimate(code, side, 30, seed).unwrap() >= exact);
            }
        }
    }
}

#[test]
fn sparse_rank_agrees_with_dense_on_a_wide_check_matrix() {
    let codes = vec![ClassicalCode::repetition(6).unwrap(); 4];
    let t = Triple::new(4, 2, 0).unwrap();
    let h_x = qbp::assembly::instantiate(&t.x_boundary(), &codes, 2).unwrap();
    assert!(h_x.cols() > 4096 && h_x.density() < 0.01);
    assert_eq!(h_x.rank(), h_x.to_dense().rank());
}
