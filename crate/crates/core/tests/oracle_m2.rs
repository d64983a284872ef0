use hermsph::padic_cartan::{omega_bruteforce_m2, valuation_distribution_m2};
use hermsph::spherical::{omega_closed_rank1, s_to_z, SpaceParams};
use num_complex::Complex64;

fn closed(lambda: i32, e: u32, p: u64, s: Complex64) -> Complex64 {
    let params = SpaceParams::new(2, e).unwrap();
    let q = p as f64;
    let z = s_to_z(&[s], &params, q);
    omega_closed_rank1(lambda, 2, e).unwrap().eval_complex(q, &z).unwrap()
}

#[test]
fn bruteforce_matches_closed_form() {
    let ss = [
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(2.0, 0.0),
        Complex64::new(1.0, 1.0),
    ];
    for (p, e) in [(3u64, 0u32), (2, 1)] {
        for lambda in -(e as i32)..=2 {
            for s in ss {
                let brute = omega_bruteforce_m2(lambda, s, p, 16).unwrap();
                let want = closed(lambda, e, p, s);
                assert!(
                    (brute - want).norm() < 1e-12,
                    "p={} lambda={} s={}: {} vs {}",
                    p,
                    lambda,
                    s,
                    brute,
                    want
                );
            }
        }
    }
}

#[test]
fn stationary_under_precision_doubling() {
    for (p, lambda) in [(3u64, 2), (2, -1), (2, 2), (5, 1)] {
        let a = valuation_distribution_m2(lambda, p, 12).unwrap();
        let b = valuation_distribution_m2(lambda, p, 24).unwrap();
        assert_eq!(a, b);
    }
}
