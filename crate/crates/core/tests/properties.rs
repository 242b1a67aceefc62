use kzh_core::chevalley::build_chain_complex;
use kzh_core::liealg::{lyndon_basis, ColorMap, MultiDegree, RootData};
use kzh_core::logforms::{alt, evaluate, is_skew, LogForm, LogGenerator};
use kzh_core::oracle::free_lie_dim_brute_force;
use kzh_core::scalars::{rat, ExactMatrix, KappaPoly, KappaScalar, SeededSampler};
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = kzh_core::scalars::Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(p, q)| rat(p, q))
}

fn poly() -> impl Strategy<Value = KappaPoly> {
    prop::collection::vec(small_rat(), 0..4).prop_map(KappaPoly::from_coeffs)
}

fn scalar() -> impl Strategy<Value = KappaScalar> {
    (poly(), poly()).prop_map(|(a, b)| {
        if b.is_zero() {
            KappaScalar::from_poly(a)
        } else {
            KappaScalar::from_parts(a, b)
        }
    })
}

fn matrix() -> impl Strategy<Value = ExactMatrix> {
    (1usize..4, 1usize..4).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop_oneof![3 => Just(KappaScalar::zero()), 2 => scalar()], r * c)
            .prop_map(move |d| ExactMatrix::new(r, c, d))
    })
}

fn generator(n: usize, big_n: usize) -> impl Strategy<Value = LogGenerator> {
    prop_oneof![
        (0..n, 0..big_n).prop_map(|(i, a)| LogGenerator::ZT(i, a)),
        (0..big_n, 0..big_n).prop_filter_map("distinct", |(a, b)| (a != b).then(|| LogGenerator::tt(a, b))),
    ]
}

fn form(n: usize, big_n: usize, deg: usize) -> impl Strategy<Value = LogForm> {
    prop::collection::vec((prop::collection::vec(generator(n, big_n), deg), small_rat()), 1..4).prop_map(|terms| {
        let mut w = LogForm::zero();
        for (gens, c) in terms {
            w = w.add(&LogForm::monomial(gens, KappaScalar::from_rational(c)));
        }
        w
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !b.is_zero() {
            prop_assert_eq!(&(&a * &b) / &b, a);
        }
    }

    #[test]
    fn display_parse_round_trip(a in scalar()) {
        let back: KappaScalar = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn bareiss_and_gauss_ranks_agree(m in matrix()) {
        prop_assert_eq!(m.rank(), m.rank_gauss());
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn kernel_vectors_are_annihilated(m in matrix()) {
        let k = m.kernel_basis();
        prop_assert_eq!(k.len() + m.rank(), m.cols());
        for v in k {
            prop_assert!(m.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn lyndon_count_matches_brute_force(a in 0usize..4, b in 0usize..3, c in 0usize..2) {
        prop_assume!(a + b + c >= 1 && a + b + c <= 5);
        let k = MultiDegree(vec![a, b, c]);
        let rd = RootData::new(
            vec![vec![rat(2, 1), rat(-1, 1), rat(0, 1)], vec![rat(-1, 1), rat(2, 1), rat(-1, 1)], vec![rat(0, 1), rat(-1, 1), rat(2, 1)]],
            vec![vec![rat(1, 1), rat(0, 1), rat(0, 1)]],
            vec![vec![rat(1, 1)]],
        ).unwrap();
        prop_assert_eq!(lyndon_basis(&rd, &k).len(), free_lie_dim_brute_force(&k));
    }

    #[test]
    fn alt_is_skew_and_idempotent_up_to_factorial(w in form(2, 3, 2)) {
        let a = alt(&w, 3);
        prop_assert!(is_skew(&a, &ColorMap(vec![0, 0, 0])));
        prop_assert_eq!(alt(&a, 3), a.scale(&KappaScalar::from_int(6)));
    }

    #[test]
    fn evaluation_is_a_homomorphism(x in form(2, 2, 1), y in form(2, 2, 1), seed in 0u64..1000) {
        let mut s = SeededSampler::new(seed);
        let p = s.sample_point(2, 2).unwrap();
        prop_assert_eq!(evaluate(&x.wedge(&y), &p), evaluate(&x, &p).wedge(&evaluate(&y, &p)));
        prop_assert_eq!(evaluate(&x.add(&y), &p), evaluate(&x, &p).add(&evaluate(&y, &p)));
    }

    #[test]
    fn chevalley_square_zero(m1 in small_rat(), m2 in small_rat(), big_n in 1usize..4) {
        let rd = RootData::sl2(&[m1, m2]).unwrap();
        let c = build_chain_complex(&rd, &MultiDegree(vec![big_n])).unwrap();
        prop_assert!(c.complex.check_square_zero().is_ok());
    }

    #[test]
    fn sampler_is_deterministic(seed in any::<u64>()) {
        let mut a = SeededSampler::new(seed);
        let mut b = SeededSampler::new(seed);
        prop_assert_eq!(a.sample_point(3, 2).unwrap(), b.sample_point(3, 2).unwrap());
    }
}
