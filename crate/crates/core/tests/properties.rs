//! Randomized invariants for the exact-arithmetic layer and the diagram
//! combinatorics.

use proptest::prelude::*;

use homtl_core::coeff::{DeltaPoly, DeltaRational, Matrix, Rational};
use homtl_core::diagram::{enumerate_diagrams, TLDiagram};

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| Rational::new(n, d))
}

fn arb_poly() -> impl Strategy<Value = DeltaPoly> {
    proptest::collection::vec((0u32..6, -9i64..=9), 0..5).prop_map(|terms| {
        terms.into_iter().fold(DeltaPoly::zero(), |acc, (e, c)| {
            &acc + &DeltaPoly::monomial(e, Rational::from_int(c))
        })
    })
}

fn arb_matrix(max: usize) -> impl Strategy<Value = Matrix<Rational>> {
    (1..=max).prop_flat_map(move |n| {
        proptest::collection::vec(
            proptest::collection::vec((-6i64..=6).prop_map(Rational::from_int), n),
            n,
        )
        .prop_map(|rows| Matrix::from_rows(rows).expect("square"))
    })
}

proptest! {
    #[test]
    fn evaluation_is_a_ring_map(p in arb_poly(), q in arb_poly(), x in arb_rational()) {
        let sum = &p + &q;
        let prod = &p * &q;
        prop_assert_eq!(sum.eval(&x), &p.eval(&x) + &q.eval(&x));
        prop_assert_eq!(prod.eval(&x), &p.eval(&x) * &q.eval(&x));
    }

    #[test]
    fn rank_plus_nullity_is_the_column_count(m in arb_matrix(5)) {
        prop_assert_eq!(m.rank() + m.nullspace().len(), m.cols());
        // and every nullspace vector really is annihilated
        for v in m.nullspace() {
            for i in 0..m.rows() {
                let mut acc = Rational::zero();
                for (j, x) in v.iter().enumerate() {
                    acc = &acc + &(&m[(i, j)] * x);
                }
                prop_assert!(acc.is_zero());
            }
        }
    }

    #[test]
    fn determinant_detects_full_rank(m in arb_matrix(4)) {
        let det = m.det().expect("square");
        prop_assert_eq!(!det.is_zero(), m.rank() == m.cols());
    }

    #[test]
    fn fraction_normalization_is_canonical(
        p in arb_poly(),
        q in arb_poly(),
        r in arb_poly(),
    ) {
        prop_assume!(!q.is_zero());
        prop_assume!(!r.is_zero());
        // equal fractions compare equal right after construction
        let plain = DeltaRational::new(p.clone(), q.clone());
        let blown = DeltaRational::new(&p * &r, &q * &r);
        prop_assert_eq!(plain, blown);
    }

    #[test]
    fn composition_loop_counts_are_associative(
        i in 0usize..5,
        j in 0usize..5,
        k in 0usize..5,
    ) {
        let basis = enumerate_diagrams(3).expect("enumeration");
        let (a, b, c) = (&basis[i], &basis[j], &basis[k]);
        let (ab, l1) = a.compose(b).expect("same size");
        let (ab_c, l2) = ab.compose(c).expect("same size");
        let (bc, l3) = b.compose(c).expect("same size");
        let (a_bc, l4) = a.compose(&bc).expect("same size");
        prop_assert_eq!(&ab_c, &a_bc);
        prop_assert_eq!(l1 + l2, l3 + l4);
        // and the mirror is an anti-map on the result
        let (mirrored, l5) = b.involute().compose(&a.involute()).expect("same size");
        prop_assert_eq!(mirrored, ab.involute());
        prop_assert_eq!(l5, l1);
    }

    #[test]
    fn diagram_json_round_trips(i in 0usize..14) {
        let basis = enumerate_diagrams(4).expect("enumeration");
        let d = &basis[i];
        let json = serde_json::to_string(d).expect("serialize");
        let back: TLDiagram = serde_json::from_str(&json).expect("deserialize");
        prop_assert_eq!(&back, d);
    }
}
