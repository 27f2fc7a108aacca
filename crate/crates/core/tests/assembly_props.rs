use proptest::prelude::*;
use qbp::assembly::{build_css, enumerate_basis, hgp_reference, instantiate, ClassicalCode};
use qbp::css::commutes;
use qbp::gf2::SparseMatrix;
use qbp::lattice::{codes_equivalent, dual_bijection, td_build, td_valid, Lattice, TdLabel};
use qbp::poly::{BoundaryPolynomial, Monomial};
use qbp::solver::{solve_fork, Triple};

fn reps(l: usize, p: usize) -> Vec<ClassicalCode> {
    vec![ClassicalCode::repetition(l).unwrap(); p]
}

fn product(p: usize, q: usize, w: usize, codes: &[ClassicalCode]) -> qbp::css::CssCode {
    build_css(&solve_fork(Triple::new(p, q, w).unwrap()).unwrap(), codes).unwrap()
}

fn classical_code() -> impl Strategy<Value = ClassicalCode> {
    (1usize..=4, 1usize..=3).prop_flat_map(|(bits, checks)| {
        proptest::collection::vec(any::<bool>(), bits * checks).prop_map(move |cells| {
            let entries = cells
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| (i / bits, i % bits));
            ClassicalCode::new(SparseMatrix::new(checks, bits, entries).unwrap())
        })
    })
}

fn triple_and_codes() -> impl Strategy<Value = (Triple, Vec<ClassicalCode>)> {
    (2usize..=4)
        .prop_flat_map(|p| (Just(p), 1..p))
        .prop_flat_map(|(p, q)| (Just(p), Just(q), 0..q))
        .prop_flat_map(|(p, q, w)| {
            (
                Just(Triple::new(p, q, w).unwrap()),
                proptest::collection::vec(classical_code(), p),
            )
        })
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn checks_commute_for_random_inputs((triple, codes) in triple_and_codes()) {
        let code = build_css(&solve_fork(triple).unwrap(), &codes).unwrap();
        prop_assert!(commutes(code.h_x(), code.h_z()).unwrap());
        let expected: usize = Monomial::first(triple.p())
            .subsets(triple.q())
            .iter()
            .map(|s| {
                codes.iter().enumerate().map(|(i, c)| {
                    if s.contains(i + 1) { c.n_bits() } else { c.n_checks() }
                }).product::<usize>()
            })
            .sum();
        prop_assert_eq!(code.n_qubits(), expected);
    }

    #[test]
    fn instantiation_is_linear(
        codes in proptest::collection::vec(classical_code(), 3),
        f in proptest::collection::vec(any::<bool>(), 3),
        g in proptest::collection::vec(any::<bool>(), 3),
    ) {
        let basis = Monomial::first(3).subsets(2);
        let f = BoundaryPolynomial::from_coefficients(2, &basis, f);
        let g = BoundaryPolynomial::from_coefficients(2, &basis, g);
        let sum = instantiate(&f.add(&g).unwrap(), &codes, 3).unwrap();
        let a = instantiate(&f, &codes, 3).unwrap().to_dense();
        let b = instantiate(&g, &codes, 3).unwrap().to_dense();
        let mut expected = a.clone();
        for r in 0..a.rows() {
            for c in 0..a.cols() {
                expected.set(r, c, a.get(r, c) ^ b.get(r, c));
            }
        }
        prop_assert_eq!(sum.to_dense(), expected);
    }
}

#[test]
fn qubit_count_closed_form() {
    for l in 2..=4 {
        for p in 2..=4 {
            for q in 1..p {
                let code = product(p, q, 0, &reps(l, p));
                assert_eq!(code.n_qubits(), binomial(p, q) * l.pow(p as u32));
                assert_eq!(enumerate_basis(&reps(l, p), q).unwrap().len(), code.n_qubits());
            }
        }
    }
}

#[test]
fn consecutive_triples_reproduce_the_product_segment() {
    for p in 2..=4 {
        for q in 1..p {
            let codes = reps(3, p);
            let a = product(p, q, q - 1, &codes);
            let b = hgp_reference(&codes, q).unwrap();
            assert!(a.h_x().rowspace_equal(b.h_x()).unwrap(), "({p},{q},{})", q - 1);
            assert!(a.h_z().rowspace_equal(b.h_z()).unwrap(), "({p},{q},{})", q - 1);
        }
    }
}

#[test]
fn product_codes_match_dual_lattice_codes() {
    for (p, q) in [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3)] {
        let size = 3;
        let code = product(p, q, 0, &reps(size, p));
        let label = TdLabel::new(p - q - 1, p - q, p - q + 1, p).unwrap();
        let td = td_build(label, size).unwrap();
        let bijection = dual_bijection(&code, label, size).unwrap();
        assert!(codes_equivalent(&code, &td, &bijection).unwrap(), "({p},{q},0) vs {label}");
    }
    let xcube = product(3, 2, 0, &reps(4, 3));
    let label = TdLabel::new(0, 1, 2, 3).unwrap();
    let td = td_build(label, 4).unwrap();
    assert!(codes_equivalent(&xcube, &td, &dual_bijection(&xcube, label, 4).unwrap()).unwrap());
}

#[test]
fn tetra_digit_codes_commute_when_valid() {
    for dim in 1..=4 {
        for d_l in 2..=dim {
            for d_s in 1..d_l {
                for d_n in 0..d_s {
                    let label = TdLabel::new(d_n, d_s, d_l, dim).unwrap();
                    for size in [2, 3] {
                        match td_build(label, size) {
                            Ok(code) => {
                                assert!(td_valid(label));
                                assert!(commutes(code.h_x(), code.h_z()).unwrap());
                                assert_eq!(code.n_qubits(), binomial(dim, d_s) * size.pow(dim as u32));
                                assert_eq!(code.n_qubits(), Lattice::new(dim, size).unwrap().cell_count(d_s));
                            }
                            Err(_) => assert!(!td_valid(label), "{label}"),
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn toric_lattice_labels() {
    let toric3d = td_build(TdLabel::new(1, 2, 3, 3).unwrap(), 3).unwrap();
    assert_eq!(toric3d.n_qubits(), 81);
    assert!(toric3d.h_x().row_weights().iter().all(|&w| w == 6));
    assert!(toric3d.h_z().row_weights().iter().all(|&w| w == 4));
}
