//! Property checks of the public invariants: parse round trips, evaluation
//! homomorphisms, minimum-face consistency, normal-cone duality, partition
//! totality, and additivity of series limits.

use std::collections::BTreeSet;

use num_traits::Zero;
use proptest::prelude::*;

use newton_zeta::linalg::{dot, Int, Rat};
use newton_zeta::poly::{parse_poly, Dims, SparsePoly};
use newton_zeta::polyhedron::NewtonPolyhedron;
use newton_zeta::series::{LaurentL, SrSeries};

// --- strategies ---

fn rat(v: i64) -> Rat {
    Rat::from(Int::from(v))
}

/// Nonempty support sets in up to three variables with small exponents.
fn support_strategy() -> impl Strategy<Value = (usize, Vec<Vec<u32>>)> {
    (1usize..=3).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec(prop::collection::vec(0u32..=4, n), 1..=4),
        )
    })
}

/// Sparse polynomials with small integer coefficients, never the zero
/// polynomial, in `n` variables.
fn poly_strategy(n: usize) -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec(
        (prop::collection::vec(0u32..=3, n), (1i64..=3), prop::bool::ANY),
        1..=4,
    )
    .prop_map(move |terms| {
        let mut p = SparsePoly::zero(n);
        for (exp, c, neg) in terms {
            p.add_term(exp, rat(if neg { -c } else { c }));
        }
        p
    })
    .prop_filter("nonzero", |p| !p.is_zero())
}

fn laurent_strategy() -> impl Strategy<Value = LaurentL> {
    prop::collection::vec(((-3i64..=3), (-3i64..=3)), 0..=3).prop_map(|ts| {
        let mut l = LaurentL::zero();
        for (e, c) in ts {
            l.add_term(e, &Int::from(c));
        }
        l
    })
}

fn sr_strategy() -> impl Strategy<Value = SrSeries> {
    prop::collection::vec(
        (
            prop::collection::vec(((-3i64..=-1), (1u32..=3)), 0..=2),
            laurent_strategy(),
        ),
        0..=3,
    )
    .prop_map(|terms| {
        let mut s = SrSeries::zero();
        for (key, coef) in terms {
            s.add_assign_term(key, &coef);
        }
        s
    })
}

fn int_point(p: &[u32]) -> Vec<Int> {
    p.iter().map(|&x| Int::from(x)).collect()
}

// --- polynomial layer ---

proptest! {
    #[test]
    fn parse_render_round_trip(p in poly_strategy(2)) {
        let dims = Dims::new(vec![1, 1]).unwrap();
        let rendered = p.render(&dims.var_names());
        let back = parse_poly(&rendered, &dims).unwrap();
        prop_assert_eq!(back.terms, p.terms);
    }

    #[test]
    fn eval_is_a_ring_homomorphism(
        f in poly_strategy(2),
        g in poly_strategy(2),
        x in 0u64..7,
        y in 0u64..7,
    ) {
        let q = 7;
        let pt = [x, y];
        let fv = f.eval_mod_q(&pt, q).unwrap();
        let gv = g.eval_mod_q(&pt, q).unwrap();
        prop_assert_eq!(f.add(&g).eval_mod_q(&pt, q).unwrap(), (fv + gv) % q);
        prop_assert_eq!(f.mul(&g).eval_mod_q(&pt, q).unwrap(), (fv * gv) % q);
    }

    #[test]
    fn faces_of_balanced_polynomials_are_balanced(
        diag in prop::collection::vec(1u32..=4, 1..=3),
    ) {
        // Support on the diagonal is balanced under weights (1, -1).
        let mut p = SparsePoly::zero(2);
        for k in diag {
            p.add_term(vec![k, k], rat(1));
        }
        let weights = [1i64, -1];
        prop_assert!(p.balance_violation(&weights).is_none());
        let gamma = NewtonPolyhedron::from_poly(&p).unwrap();
        for fi in 0..gamma.faces.len() {
            let exps = gamma.face_support_exps(fi).unwrap();
            let face_poly = p.face_poly(&exps);
            prop_assert!(face_poly.balance_violation(&weights).is_none());
        }
    }
}

// --- polyhedron layer ---

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn minimum_face_attains_the_minimum((n, support) in support_strategy(), seed in prop::collection::vec(0u32..=6, 3)) {
        let rows: Vec<Vec<Int>> = support.iter().map(|p| int_point(p)).collect();
        let gamma = NewtonPolyhedron::from_support(n, rows.clone()).unwrap();
        let a: Vec<Int> = seed[..n].iter().map(|&x| Int::from(x)).collect();
        prop_assume!(a.iter().any(|c| !c.is_zero()));
        let (value, face) = gamma.min_face(&a).unwrap();
        let dots: Vec<Int> = gamma.support.iter().map(|p| dot(&a, p)).collect();
        let min = dots.iter().min().unwrap().clone();
        prop_assert_eq!(&value, &min);
        // The face's support is exactly the attaining set.
        let face_exps = gamma.face_support_exps(face).unwrap();
        let attaining: BTreeSet<Vec<u32>> = gamma
            .support
            .iter()
            .zip(&dots)
            .filter(|(_, d)| *d == &min)
            .map(|(p, _)| p.iter().map(|c| u32::try_from(c).unwrap()).collect())
            .collect();
        prop_assert_eq!(face_exps, attaining);
    }

    #[test]
    fn normal_cone_dimension_is_complementary((n, support) in support_strategy()) {
        use newton_zeta::cone::relopen_info;
        let rows: Vec<Vec<Int>> = support.iter().map(|p| int_point(p)).collect();
        let gamma = NewtonPolyhedron::from_support(n, rows).unwrap();
        for fi in 0..gamma.faces.len() {
            let info = relopen_info(&gamma.sigma_hrep(fi)).unwrap();
            prop_assert!(!info.empty, "dual cone of a face is nonempty");
            prop_assert_eq!(info.dim + gamma.faces[fi].dim, n);
        }
    }

    #[test]
    fn partition_covers_each_point_once(
        (n, support) in support_strategy(),
        mask in 0usize..8,
        seed in prop::collection::vec(0u32..=6, 3),
    ) {
        let rows: Vec<Vec<Int>> = support.iter().map(|p| int_point(p)).collect();
        let gamma = NewtonPolyhedron::from_support(n, rows).unwrap();
        let block1: BTreeSet<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let cells = gamma.canonical_cells(&block1).unwrap();
        // A lattice point of the region: block1 coordinates may vanish.
        let a: Vec<Int> = (0..n)
            .map(|i| {
                let v = seed[i];
                if block1.contains(&i) {
                    Int::from(v)
                } else {
                    Int::from(v + 1)
                }
            })
            .collect();
        prop_assume!(a.iter().any(|c| !c.is_zero()));
        let hits: Vec<usize> = (0..cells.len())
            .filter(|&i| cells[i].cone.contains_relopen(&a))
            .collect();
        prop_assert_eq!(hits.len(), 1, "point {:?} hit cells {:?}", a, hits);
        let cell = &cells[hits[0]];
        let (value, face) = gamma.min_face(&a).unwrap();
        prop_assert_eq!(cell.face, face);
        prop_assert_eq!(dot(&a, &cell.l_vec), value);
    }
}

// --- series layer ---

proptest! {
    #[test]
    fn laurent_eval_is_a_ring_homomorphism(a in laurent_strategy(), b in laurent_strategy()) {
        let q = Rat::from(Int::from(3));
        let left = a.add(&b).eval_at(&q);
        prop_assert_eq!(left, a.eval_at(&q) + b.eval_at(&q));
        let prod = a.mul(&b).eval_at(&q);
        prop_assert_eq!(prod, a.eval_at(&q) * b.eval_at(&q));
    }

    #[test]
    fn series_limit_is_additive(a in sr_strategy(), b in sr_strategy()) {
        let sum_limit = a.add(&b).limit();
        prop_assert_eq!(sum_limit, a.limit().add(&b.limit()));
    }

    #[test]
    fn series_negation_cancels(a in sr_strategy()) {
        prop_assert!(a.add(&a.neg()).is_zero());
        prop_assert!(a.limit().add(&a.neg().limit()).is_zero());
    }
}
