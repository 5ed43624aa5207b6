//! Invariants over random relations and matrices.

use nalgebra::DMatrix;
use proptest::prelude::*;

use relcalc::corpus::{admissible_sum_pair, item_rng, random_relation_with_dims};
use relcalc::decomposition::{gamma, hus_constant, moore_penrose, regular_part};
use relcalc::linalg::{c, rel_diff};
use relcalc::spectral::point_spectrum;
use relcalc::stability::{check_product_stability, check_sum_stability, hus_oracle};
use relcalc::{Field, LinearRelation, Matrix, RelationDocument, Subspace};

const ANGLE: f64 = 1e-8;

fn field(complex: bool) -> Field {
    if complex {
        Field::Complex
    } else {
        Field::Real
    }
}

prop_compose! {
    fn relation()(seed in any::<u64>(), h in 1usize..=6, k in 1usize..=6, complex in any::<bool>()) -> LinearRelation {
        random_relation_with_dims(&mut item_rng(seed, 0), h, k, field(complex))
    }
}

prop_compose! {
    fn real_matrix()(rows in 1usize..=5, cols in 1usize..=5)
        (entries in prop::collection::vec(-3.0..3.0f64, rows * cols), rows in Just(rows), cols in Just(cols)) -> DMatrix<f64> {
        DMatrix::from_vec(rows, cols, entries)
    }
}

fn angle(a: &Subspace, b: &Subspace) -> f64 {
    a.max_principal_angle(b).unwrap()
}

fn lift(a: &DMatrix<f64>) -> Matrix {
    a.map(c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjoint_and_inverse_are_involutions(t in relation()) {
        prop_assert!(angle(t.adjoint().adjoint().graph(), t.graph()) < ANGLE);
        prop_assert!(angle(t.inverse().inverse().graph(), t.graph()) < ANGLE);
        prop_assert!(angle(t.inverse().adjoint().graph(), t.adjoint().inverse().graph()) < ANGLE);
    }

    #[test]
    fn adjoint_swaps_parts_with_complements(t in relation()) {
        let adj = t.adjoint();
        prop_assert!(angle(&adj.kernel(), &t.range().complement()) < ANGLE);
        prop_assert!(angle(&adj.mulpart(), &t.domain().complement()) < ANGLE);
        let (d, r, n, m) = t.part_dims();
        // dim T = dim D + dim M = dim R + dim N.
        prop_assert_eq!(d + m, r + n);
        prop_assert_eq!(t.graph().rank(), d + m);
    }

    #[test]
    fn splits_into_operator_and_multivalued_part(t in relation()) {
        let op = regular_part(&t);
        prop_assert!(op.as_relation.is_operator());
        let rebuilt = op.as_relation.minkowski_sum(&LinearRelation::pure_multivalued(t.dim_h(), &t.mulpart()).unwrap()).unwrap();
        prop_assert!(angle(rebuilt.graph(), t.graph()) < ANGLE);
        // The regular part maps into M(T)⊥.
        let leak = t.mulpart().projector() * op.full_matrix();
        prop_assert!(leak.norm() < 1e-8 * (1.0 + op.norm()));
    }

    #[test]
    fn hus_constant_is_reciprocal_gamma(t in relation()) {
        let g = gamma(&t);
        let m = hus_constant(&t);
        if g.is_finite() {
            prop_assert!(rel_diff(m * g, 1.0) < 1e-8);
        } else {
            prop_assert_eq!(m, 0.0);
        }
        prop_assert!(rel_diff(m, moore_penrose(&t).norm()) < 1e-12);
    }

    #[test]
    fn oracle_never_beats_hus_constant(t in relation(), seed in any::<u64>()) {
        prop_assume!(!t.range().is_zero());
        let o = hus_oracle(&t, 64, seed).unwrap();
        let m = hus_constant(&t);
        prop_assert!(o.max_sampled_ratio <= m * (1.0 + 1e-9) + 1e-12);
        prop_assert!((o.sup_ratio - m).abs() <= 1e-6 * m + 1e-12);
    }

    #[test]
    fn gamma_of_a_matrix_is_its_smallest_nonzero_singular_value(a in real_matrix()) {
        // Independent route: eigenvalues of AᵀA from nalgebra's symmetric solver.
        let ata = a.transpose() * &a;
        let eig = ata.symmetric_eigen().eigenvalues;
        let top = eig.iter().cloned().fold(0.0, f64::max);
        let smallest = eig.iter().cloned().filter(|&x| x > 1e-9 * top.max(1e-300)).fold(f64::INFINITY, f64::min);
        prop_assume!(smallest.is_infinite() || smallest > 1e-6 * top);
        let t = LinearRelation::from_matrix(&lift(&a), Field::Real).unwrap();
        let g = gamma(&t);
        if smallest.is_infinite() {
            prop_assert!(g.is_infinite());
        } else {
            prop_assert!(rel_diff(g, smallest.sqrt()) < 1e-8, "gamma {} vs {}", g, smallest.sqrt());
        }
    }

    #[test]
    fn eigenvalues_of_a_matrix_sum_to_its_trace(a in real_matrix()) {
        let n = a.nrows().min(a.ncols());
        let a = a.view((0, 0), (n, n)).into_owned();
        let t = LinearRelation::from_matrix(&lift(&a), Field::Real).unwrap();
        let s = point_spectrum(&t).unwrap();
        prop_assert_eq!(s.eigenvalues.iter().map(|e| e.multiplicity).sum::<usize>(), n);
        let total: relcalc::C64 = s.values().into_iter().sum();
        prop_assert!((total.re - a.trace()).abs() < 1e-6 * (1.0 + a.norm()));
        prop_assert!(total.im.abs() < 1e-6 * (1.0 + a.norm()));
        prop_assert!(!s.resolvent_empty);
    }

    #[test]
    fn compose_and_sum_agree_with_matrices(a in real_matrix(), b in real_matrix()) {
        prop_assume!(a.ncols() == b.nrows() || a.shape() == b.shape());
        let ta = LinearRelation::from_matrix(&lift(&a), Field::Real).unwrap();
        let tb = LinearRelation::from_matrix(&lift(&b), Field::Real).unwrap();
        if a.ncols() == b.nrows() {
            let direct = LinearRelation::from_matrix(&lift(&(&a * &b)), Field::Real).unwrap();
            prop_assert!(angle(ta.compose(&tb).unwrap().graph(), direct.graph()) < 1e-8);
        }
        if a.shape() == b.shape() {
            let direct = LinearRelation::from_matrix(&lift(&(&a + &b)), Field::Real).unwrap();
            prop_assert!(angle(ta.sum(&tb).unwrap().graph(), direct.graph()) < 1e-8);
        }
    }

    #[test]
    fn documents_round_trip(t in relation(), chain in prop::collection::vec("[a-z(), .]{0,12}", 0..3)) {
        let doc = RelationDocument::with_chain(t, chain);
        let back = RelationDocument::parse(&doc.to_json()).unwrap();
        prop_assert!(angle(back.relation.graph(), doc.relation.graph()) < 1e-12);
        prop_assert_eq!(back.relation.field(), doc.relation.field());
        prop_assert_eq!(back.chain, doc.chain);
    }

    #[test]
    fn product_constant_is_the_larger_one(s in relation(), t in relation()) {
        let r = check_product_stability(&t, &s).unwrap();
        prop_assert!(rel_diff(r.m_product, r.m_t.max(r.m_s)) <= 1e-9);
    }

    #[test]
    fn admissible_sums_stay_stable(seed in any::<u64>(), complex in any::<bool>()) {
        let (t, s) = admissible_sum_pair(&mut item_rng(seed, 1), 5, field(complex));
        let r = check_sum_stability(&t, &s, 50, seed).unwrap();
        prop_assert!(r.applicable, "{:?}", r.violated());
        let b = r.b_star.unwrap();
        prop_assert!(r.m_sum.unwrap() <= r.m_t / (1.0 - b) * (1.0 + 1e-9));
        for (id, v) in &r.verdicts {
            prop_assert!(v.holds, "{}: {}", id, v.detail);
        }
    }
}
