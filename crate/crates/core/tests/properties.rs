use hermsph::exact_arith::{exact_divide, weyl_substitute, GaussianRational, MultiLaurent, Scalar};
use hermsph::padic_cartan::sample::{random_integral, random_k};
use hermsph::padic_cartan::{
    cartan_reduce, ell, make_x_lambda, mat_mul, orbit_invariants, Field, PadicNum, QMat, QuadExt,
};
use hermsph::weyl_roots::{enumerate_group, Signature};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn laurent(n: usize) -> impl Strategy<Value = MultiLaurent> {
    prop::collection::vec(
        (prop::collection::vec(-2i32..=2, n), -2i32..=2, -3i64..=3, -2i64..=2),
        0..5,
    )
    .prop_map(move |terms| {
        let mut acc = MultiLaurent::zero(n);
        for (exps, v, re, im) in terms {
            let c = Scalar::monomial(&GaussianRational::from_int(re) + &(&GaussianRational::i() * &GaussianRational::from_int(im)), v);
            acc = &acc + &MultiLaurent::monomial(n, &exps, &c);
        }
        acc
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in laurent(2), b in laurent(2), c in laurent(2)) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn exact_division_round_trip(a in laurent(2), b in laurent(2)) {
        prop_assume!(!b.is_zero());
        let prod = &a * &b;
        prop_assert_eq!(exact_divide(&prod, &b).unwrap(), a);
    }

    #[test]
    fn substitution_is_a_homomorphism(a in laurent(2), b in laurent(2), i in 0usize..8, j in 0usize..8) {
        let w = enumerate_group(2).unwrap();
        let (s, t) = (&w[i], &w[j]);
        prop_assert_eq!(
            weyl_substitute(&(&a * &b), s).unwrap(),
            &weyl_substitute(&a, s).unwrap() * &weyl_substitute(&b, s).unwrap()
        );
        prop_assert_eq!(
            weyl_substitute(&weyl_substitute(&a, t).unwrap(), s).unwrap(),
            weyl_substitute(&a, &s.compose(t)).unwrap()
        );
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in laurent(2), b in laurent(2), re in -0.4f64..0.4, im in -2.0f64..2.0) {
        let z = [Complex64::new(re, im), Complex64::new(-re / 2.0, im * 0.7)];
        let q = 3.0;
        let lhs = (&a * &b).eval_complex(q, &z);
        let rhs = a.eval_complex(q, &z) * b.eval_complex(q, &z);
        prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
        let sum = (&a + &b).eval_complex(q, &z);
        prop_assert!((sum - a.eval_complex(q, &z) - b.eval_complex(q, &z)).norm() <= 1e-9 * (1.0 + sum.norm()));
    }

    #[test]
    fn padic_matches_integer_arithmetic(x in -100_000i64..100_000, y in -100_000i64..100_000, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let pr = 12;
        let a = PadicNum::from_i64(p, x, pr);
        let b = PadicNum::from_i64(p, y, pr);
        prop_assert!(a.mul(&b).sub(&PadicNum::from_i64(p, x * y, pr)).is_negligible());
        prop_assert!(a.add(&b).sub(&PadicNum::from_i64(p, x + y, pr)).is_negligible());
    }
}

fn random_matrix(f: Field, m: usize, lo: i32, hi: i32, rng: &mut ChaCha8Rng) -> QMat {
    use rand::Rng;
    (0..m)
        .map(|_| {
            (0..m)
                .map(|_| random_integral(f, rng).shift(rng.gen_range(lo..=hi)))
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ell_is_submultiplicative(seed in any::<u64>(), m in 2usize..=5, p in prop::sample::select(vec![2u64, 3])) {
        let f = Field::new(p, 30).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(f, m, 0, 2, &mut rng);
        let b = random_matrix(f, m, -3, 3, &mut rng);
        if let (Ok(lab), Ok(lb)) = (ell(&mat_mul(&a, &b)), ell(&b)) {
            prop_assert!(lab <= lb);
        }
        let k = random_k(f, m, 4, &mut rng);
        prop_assert_eq!(ell(&mat_mul(&k, &b)).unwrap(), ell(&b).unwrap());
        prop_assert_eq!(ell(&k).unwrap(), 0);
    }

    #[test]
    fn reduction_is_constant_on_orbits(seed in any::<u64>(), m in prop::sample::select(vec![3usize, 5]), p in prop::sample::select(vec![2u64, 3]), idx in 0usize..64) {
        let f = Field::new(p, 30).unwrap();
        let sigs = Signature::enumerate_box(m / 2, f.e as i32, 3);
        let lam = &sigs[idx % sigs.len()];
        let x = make_x_lambda(f, m, lam).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y = x.act(&random_k(f, m, 6, &mut rng));
        prop_assert_eq!(&cartan_reduce(&y).unwrap(), lam);
        let (a, b) = (orbit_invariants(&x).unwrap(), orbit_invariants(&y).unwrap());
        prop_assert_eq!(a, b);
        prop_assert_eq!(b.parity, Some(lam.size().rem_euclid(2) as u8));
        if b.jtype {
            prop_assert!(lam.entries().iter().all(|&l| l < 0));
        }
    }
}

#[test]
fn conjugation_fixes_j() {
    let f = Field::new(3, 20).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let k = random_k(f, 5, 6, &mut rng);
    let x = hermsph::padic_cartan::j_matrix(f, 5);
    let y = hermsph::padic_cartan::act(&k, &x);
    for (r, s) in x.iter().zip(&y) {
        for (u, v) in r.iter().zip(s) {
            assert!(u.eq_approx(v));
        }
    }
    assert!(QuadExt::one(f).eq_approx(&y[2][2]));
}
