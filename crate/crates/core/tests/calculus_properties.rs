use std::sync::OnceLock;

use ncfib_core::dga::Calculus;
use ncfib_core::examples::{m2_calculus, m3_calculus, s3_calculus};
use ncfib_core::linalg::{axpy, is_zero_vec};
use ncfib_core::Scalar;
use proptest::prelude::*;

fn calculi() -> &'static [Calculus; 3] {
    static C: OnceLock<[Calculus; 3]> = OnceLock::new();
    C.get_or_init(|| {
        [
            s3_calculus(&Scalar::one(), 4).unwrap(),
            m3_calculus(4).unwrap(),
            m2_calculus(4).unwrap(),
        ]
    })
}

/// A sparse random form of the given degree with small integer coefficients.
fn form(c: &Calculus, n: usize, seed: &[(usize, i64)]) -> Vec<Scalar> {
    let dim = c.dim(n);
    let mut v = vec![Scalar::zero(); dim];
    if dim == 0 {
        return v;
    }
    for &(i, x) in seed {
        let slot = &mut v[i % dim];
        *slot = &*slot + &Scalar::from_int(x);
    }
    v
}

fn seed() -> impl Strategy<Value = Vec<(usize, i64)>> {
    proptest::collection::vec((0usize..10_000, -3i64..=3), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn d_squared_vanishes(which in 0usize..3, n in 0usize..=2, s in seed()) {
        let c = &calculi()[which];
        let x = form(c, n, &s);
        prop_assert!(is_zero_vec(&c.d(n + 1, &c.d(n, &x))));
    }

    #[test]
    fn graded_leibniz(which in 0usize..3, p in 0usize..=2, q in 0usize..=2, s in seed(), t in seed()) {
        prop_assume!(p + q <= 2);
        let c = &calculi()[which];
        let x = form(c, p, &s);
        let y = form(c, q, &t);
        let lhs = c.d(p + q, &c.wedge(p, &x, q, &y));
        let mut rhs = c.wedge(p + 1, &c.d(p, &x), q, &y);
        let sign = if p % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        axpy(&mut rhs, &sign, &c.wedge(p, &x, q + 1, &c.d(q, &y)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn wedge_is_associative(which in 0usize..3, p in 0usize..=3, q in 0usize..=3, r in 0usize..=3,
                            s in seed(), t in seed(), u in seed()) {
        prop_assume!(p + q + r <= 3);
        let c = &calculi()[which];
        let (x, y, z) = (form(c, p, &s), form(c, q, &t), form(c, r, &u));
        let left = c.wedge(p + q, &c.wedge(p, &x, q, &y), r, &z);
        let right = c.wedge(p, &x, q + r, &c.wedge(q, &y, r, &z));
        prop_assert_eq!(left, right);
    }
}

#[test]
fn rewriting_is_confluent_up_to_degree_three() {
    for c in calculi() {
        c.rewrite().check_confluence(3).unwrap();
        c.check_leibniz(3).unwrap();
    }
}
