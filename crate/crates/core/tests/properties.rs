use proptest::prelude::*;

use sptri::constants::{b_mat, sigma4};
use sptri::{
    bruhat_cell, classify_subalgebra, gamma_dual, gamma_l, parse_mat2, parse_mat4, parse_qelement,
    parse_sym, q_compose, q_conj, q_invert, q_member, Ambient, LieSub, Mat2, QElement, Scalar,
    SubLabel, SymMat2, WeylElement,
};

fn rational() -> impl Strategy<Value = Scalar> {
    (-20i64..=20, 1i64..=9).prop_map(|(p, q)| Scalar::ratio(p, q))
}

fn nonzero() -> impl Strategy<Value = Scalar> {
    rational().prop_filter("nonzero", |x| !x.is_zero())
}

fn sym() -> impl Strategy<Value = SymMat2> {
    (rational(), rational(), rational()).prop_map(|(c, b, a)| SymMat2::new(c, b, a))
}

fn gl2() -> impl Strategy<Value = Mat2> {
    (rational(), rational(), rational(), rational())
        .prop_map(|(a, b, c, d)| Mat2::new(a, b, c, d))
        .prop_filter("invertible", |m| !m.det().is_zero())
}

fn lower() -> impl Strategy<Value = Mat2> {
    (nonzero(), rational(), nonzero()).prop_map(|(a, c, d)| Mat2::new(a, Scalar::zero(), c, d))
}

fn q_elem() -> impl Strategy<Value = QElement> {
    (sym(), gl2()).prop_map(|(s, h)| QElement::new(s, h).unwrap())
}

fn p_elem() -> impl Strategy<Value = QElement> {
    (sym(), lower()).prop_map(|(s, h)| QElement::new(s, h).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn group_law_is_matrix_product(x in q_elem(), y in q_elem()) {
        let xy = q_compose(&x, &y);
        prop_assert_eq!(xy.realization(), &(x.realization() * y.realization()));
        prop_assert!(xy.realization().is_symplectic(0.0));
    }

    #[test]
    fn associativity(x in q_elem(), y in q_elem(), z in q_elem()) {
        prop_assert_eq!(q_compose(&x, &q_compose(&y, &z)), q_compose(&q_compose(&x, &y), &z));
    }

    #[test]
    fn inverse_both_sides(x in q_elem()) {
        let inv = q_invert(&x);
        prop_assert_eq!(q_compose(&x, &inv), QElement::identity());
        prop_assert_eq!(q_compose(&inv, &x), QElement::identity());
    }

    #[test]
    fn conjugation_stays_in_q(x in q_elem(), y in q_elem()) {
        let c = q_conj(&x, &y);
        let back = q_member(c.realization(), 0.0).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn display_round_trips(x in q_elem()) {
        prop_assert_eq!(parse_qelement(&x.to_string()).unwrap(), x.clone());
        prop_assert_eq!(&parse_mat2(&x.h().to_string()).unwrap(), x.h());
        prop_assert_eq!(&parse_sym(&x.sigma().to_mat2().to_string()).unwrap(), x.sigma());
        prop_assert_eq!(&parse_mat4(&x.realization().to_string()).unwrap(), x.realization());
    }

    #[test]
    fn gamma_maps_are_involutions(g in rational()) {
        if let Some(d) = gamma_dual(&g) {
            prop_assert_eq!(gamma_dual(&d), Some(g.clone()));
        }
        if let Some(l) = gamma_l(&g) {
            prop_assert_eq!(gamma_l(&l), Some(g));
        }
    }

    #[test]
    fn p_elements_in_identity_cell(x in p_elem()) {
        prop_assert_eq!(bruhat_cell(x.realization(), 0.0).unwrap(), WeylElement::IDENTITY);
    }

    #[test]
    fn double_cosets_keep_their_cell(x in p_elem(), y in p_elem(), i in 0usize..8) {
        let w = WeylElement::all()[i];
        let g = &(x.realization() * &w.realize()) * y.realization();
        prop_assert_eq!(bruhat_cell(&g, 0.0).unwrap(), w);
    }

    #[test]
    fn l_gamma_is_a_conjugation_invariant(g in rational(), t in lower()) {
        let x = &Mat2::identity().scale(&g) + &sigma4().to_mat2();
        let s = LieSub::new(Ambient::Sigma3, vec![b_mat(), x], 0.0).unwrap();
        let moved = LieSub::new(Ambient::Sigma3, s.conjugate(&t).unwrap(), 0.0).unwrap();
        prop_assert_eq!(classify_subalgebra(&moved, 0.0).unwrap().label, SubLabel::L(g));
    }
}
