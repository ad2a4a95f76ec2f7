//! Property tests for the exact polynomial layer.

use proptest::prelude::*;
use symsos::poly::{parse_poly, rat, ExpVec, Rat, SparsePoly};

fn arb_rat() -> impl Strategy<Value = Rat> {
    (-40i64..=40, 1i64..=12).prop_map(|(p, q)| Rat::new(p.into(), q.into()))
}

fn arb_poly(n: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec(
        (
            prop::collection::vec(0..=max_deg, n),
            arb_rat(),
        ),
        0..=max_terms,
    )
    .prop_map(move |terms| {
        let mut p = SparsePoly::zero(n);
        for (exps, c) in terms {
            p.add_term(ExpVec(exps), c);
        }
        p
    })
}

fn arb_matrix(n: usize) -> impl Strategy<Value = Vec<Vec<Rat>>> {
    prop::collection::vec(prop::collection::vec(arb_rat(), n), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parse_render_round_trip(p in arb_poly(3, 4, 6)) {
        let rendered = p.render();
        let back = parse_poly(&rendered, 3).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn eval_is_multiplicative(
        f in arb_poly(2, 3, 4),
        g in arb_poly(2, 3, 4),
        px in arb_rat(),
        py in arb_rat(),
    ) {
        let point = vec![px, py];
        let lhs = (&f * &g).eval(&point).unwrap();
        let rhs = f.eval(&point).unwrap() * g.eval(&point).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn eval_is_additive(
        f in arb_poly(2, 3, 4),
        g in arb_poly(2, 3, 4),
        px in arb_rat(),
        py in arb_rat(),
    ) {
        let point = vec![px, py];
        let lhs = (&f + &g).eval(&point).unwrap();
        let rhs = f.eval(&point).unwrap() + g.eval(&point).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_composes(
        f in arb_poly(2, 3, 3),
        a in arb_matrix(2),
        b in arb_matrix(2),
    ) {
        // Substituting B then A equals substituting the product B * A in the
        // row-substitution convention x -> Mx.
        let two_step = f
            .apply_linear_substitution(&b)
            .unwrap()
            .apply_linear_substitution(&a)
            .unwrap();
        let mut ba = vec![vec![rat(0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    ba[i][j] += &b[i][k] * &a[k][j];
                }
            }
        }
        let one_step = f.apply_linear_substitution(&ba).unwrap();
        prop_assert_eq!(two_step, one_step);
    }

    #[test]
    fn substitute_squares_matches_eval(
        f in arb_poly(2, 3, 4),
        px in arb_rat(),
        py in arb_rat(),
    ) {
        let sq = f.substitute_squares();
        let lhs = sq.eval(&[px.clone(), py.clone()]).unwrap();
        let rhs = f.eval(&[px.clone() * &px, py.clone() * &py]).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
