//! Randomized invariants.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ufss::algebra::roots::QUPoly;
use ufss::algebra::{precedes, root_isolate, sigma, sigma_inv, AlgebraicReal, Rational};
use ufss::gen;
use ufss::pipeline::{self, parse_instance, Instance};
use ufss::verify::{verify_against_brute, verify_all, SampleGrid};

fn rat() -> impl Strategy<Value = Rational> {
    (-40i64..40, 1i64..12).prop_map(|(n, d)| Rational::new(n, d).unwrap())
}

fn linear_product(roots: &[Rational]) -> QUPoly {
    roots.iter().fold(QUPoly::constant(Rational::from_int(1)), |acc, r| {
        &acc * &QUPoly::new(vec![-r.clone(), Rational::from_int(1)])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_field_laws(a in rat(), b in rat(), c in rat()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a - &a, Rational::from_int(0));
        if b.sign() != 0 {
            prop_assert_eq!(&(&a / &b) * &b, a.clone());
        }
        prop_assert_eq!(a < b, (&b - &a).is_positive());
    }

    #[test]
    fn sigma_round_trip(n in 0u64..200_000, k in 0usize..5) {
        let alpha = sigma(n, k);
        prop_assert_eq!(sigma_inv(&alpha), n);
        let next = sigma(n + 1, k);
        prop_assert!(precedes(&alpha, &next).unwrap());
        prop_assert!(!precedes(&next, &alpha).unwrap());
    }

    #[test]
    fn order_is_transitive(a in 0u64..5000, b in 0u64..5000, c in 0u64..5000, k in 1usize..4) {
        let (x, y, z) = (sigma(a, k), sigma(b, k), sigma(c, k));
        if precedes(&x, &y).unwrap() && precedes(&y, &z).unwrap() {
            prop_assert!(precedes(&x, &z).unwrap());
        }
    }

    #[test]
    fn isolation_finds_every_linear_factor(roots in prop::collection::vec(rat(), 1..6)) {
        let mut expected: Vec<Rational> = roots.clone();
        expected.sort();
        expected.dedup();
        let found = root_isolate(&linear_product(&roots)).unwrap();
        let expected: Vec<AlgebraicReal> = expected.into_iter().map(AlgebraicReal::from_rational).collect();
        prop_assert_eq!(found, expected);
    }

    #[test]
    fn algebraic_arithmetic_matches_squares(a in 1i64..30, b in 1i64..30) {
        // sqrt(a) * sqrt(b) squared is a*b, and sqrt(a) + sqrt(b) exceeds either
        let sqrt = |n: i64| {
            let p = QUPoly::new(vec![Rational::from_int(-n), Rational::from_int(0), Rational::from_int(1)]);
            root_isolate(&p).unwrap().pop().unwrap()
        };
        let (x, y) = (sqrt(a), sqrt(b));
        let prod = x.mul(&y);
        prop_assert_eq!(prod.mul(&prod), AlgebraicReal::from_int(a * b));
        let sum = x.add(&y);
        prop_assert!(sum > x && sum > y);
        prop_assert_eq!(sum.sub(&y), x);
    }

    #[test]
    fn division_identity(num in prop::collection::vec(rat(), 1..6), den in prop::collection::vec(rat(), 1..4)) {
        let (n, d) = (QUPoly::new(num), QUPoly::new(den));
        prop_assume!(!d.is_zero());
        let (quot, rem) = n.div_rem(&d);
        prop_assert_eq!(&(&quot * &d) + &rem, n);
        prop_assert!(rem.is_zero() || rem.degree() < d.degree());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn instances_round_trip(seed in any::<u64>()) {
        for (_, inst) in gen::corpus(6, seed) {
            let text = inst.to_json();
            let back = parse_instance(&text).unwrap();
            prop_assert_eq!(back.to_json(), text);
            prop_assert_eq!(back, inst);
        }
    }

    #[test]
    fn random_rcf_decompositions_verify(seed in any::<u64>(), template in 0usize..9) {
        let inst = gen::rcf_instance(&mut ChaCha8Rng::seed_from_u64(seed), template);
        let Instance::Rcf { ufss } = &inst else { unreachable!() };
        let out = pipeline::decompose(&inst).unwrap();
        let grid = SampleGrid::parse("-2:2:1/3", seed).unwrap();
        let rep = verify_all(ufss, &out.result, &grid).merge(verify_against_brute(ufss, &out.result, &grid));
        prop_assert!(rep.passed(), "{:?}", rep.first_failure());
    }
}
