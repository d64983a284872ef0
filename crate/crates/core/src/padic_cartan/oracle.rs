use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::matrix::QMat;
use super::padic::max_precision;
use super::quad::{Field, QuadExt};
use super::CartanError;

/// Exact distribution of `v(d_1(h . x_lambda))` for `h` Haar-random in
/// `K_1 = U(j_2)(O_{k'})`, computed by refining `(u, v)` cells of the
/// two-cell parametrization until the valuation is constant on each cell.
pub fn valuation_distribution_m2(
    lambda: i32,
    p: u64,
    depth: u32,
) -> Result<BTreeMap<i32, BigRational>, CartanError> {
    let f = Field::new(p, max_precision(p))?;
    let e = f.e as i32;
    if lambda < -e {
        return Err(CartanError::InvalidInput(format!("lambda < -e = {}", -e)));
    }
    let need = 2 * (e + lambda + 1) + 1;
    if (depth as i32) < need {
        return Err(CartanError::PrecisionExhausted(format!(
            "precision {} too small; need N >= {}",
            depth, need
        )));
    }
    // pi^shift * x_lambda is integral.
    let s = QuadExt::sqrt_eps(f);
    let (x, shift): (QMat, i32) = if lambda >= 0 {
        (
            vec![
                vec![QuadExt::pi_pow(f, 2 * lambda), QuadExt::zero(f)],
                vec![QuadExt::zero(f), QuadExt::one(f)],
            ],
            lambda,
        )
    } else {
        let x = super::matrix::make_x_lambda(
            f,
            2,
            &crate::weyl_roots::Signature::new(vec![lambda], e).unwrap(),
        )?;
        let sh = -lambda;
        let x = x
            .entries
            .iter()
            .map(|r| r.iter().map(|c| c.shift(sh)).collect())
            .collect();
        (x, sh)
    };
    let s_inv = s.inv()?;
    let one = QuadExt::one(f);
    let q = BigRational::from_integer(BigInt::from(p));
    let stratum_weight = [
        one_over(&q, false),
        one_over(&q, true),
    ];
    let mut dist: BTreeMap<i32, BigRational> = BTreeMap::new();
    for (cell, weight) in stratum_weight.iter().enumerate() {
        let row = |u: i64, v: i64| -> [QuadExt; 2] {
            let u = QuadExt::from_int(f, u);
            let v = QuadExt::from_int(f, v);
            if cell == 0 {
                [u.mul(&s), one.add(&u.mul(&v))]
            } else {
                [one, v.mul(&s_inv)]
            }
        };
        let d1 = |u: i64, v: i64| -> QuadExt {
            let r = row(u, v);
            let mut acc = QuadExt::zero(f);
            for a in 0..2 {
                for b in 0..2 {
                    acc = acc.add(&r[a].mul(&x[a][b]).mul(&r[b].conj()));
                }
            }
            acc
        };
        let mut stack: Vec<(i64, i64, u32)> = vec![(0, 0, 0)];
        while let Some((u0, v0, k)) = stack.pop() {
            let val = d1(u0, v0).valuation();
            if let Some(vv) = val {
                if vv < k as i32 {
                    let vol = weight / pow_rat(&q, 2 * k);
                    *dist.entry(vv - shift).or_insert_with(BigRational::zero) += vol;
                    continue;
                }
            }
            if k >= depth {
                return Err(CartanError::PrecisionExhausted(format!(
                    "cells unresolved at depth {}; increase N",
                    depth
                )));
            }
            let step = (p as i64).pow(k);
            for a in 0..p as i64 {
                for b in 0..p as i64 {
                    stack.push((u0 + a * step, v0 + b * step, k + 1));
                }
            }
        }
    }
    Ok(dist)
}

fn pow_rat(q: &BigRational, k: u32) -> BigRational {
    (0..k).fold(BigRational::one(), |acc, _| acc * q)
}

/// `vol(K_{1,1}) = 1/(1+q^{-1})`, `vol(K_{1,2}) = q^{-1}/(1+q^{-1})`.
fn one_over(q: &BigRational, second: bool) -> BigRational {
    let qi = q.recip();
    let base = (BigRational::one() + &qi).recip();
    if second {
        base * qi
    } else {
        base
    }
}

/// `omega(x_lambda; s) = integral over K_1 of |d_1(h . x_lambda)|^s`, for `m = 2`.
pub fn omega_bruteforce_m2(
    lambda: i32,
    s: Complex64,
    p: u64,
    depth: u32,
) -> Result<Complex64, CartanError> {
    if s.re < 0.0 {
        return Err(CartanError::InvalidInput("Re s must be >= 0".into()));
    }
    let dist = valuation_distribution_m2(lambda, p, depth)?;
    let q = p as f64;
    Ok(dist
        .iter()
        .map(|(v, w)| Complex64::new(q, 0.0).powc(-s * *v as f64) * w.to_f64().unwrap())
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_mass_is_one() {
        for (p, lam) in [(3u64, 0), (3, 2), (2, -1), (2, 1)] {
            let d = valuation_distribution_m2(lam, p, 12).unwrap();
            let total: BigRational = d.values().cloned().sum();
            assert!(total.is_one(), "p={} lambda={}", p, lam);
        }
    }

    #[test]
    fn trivial_orbit_at_zero() {
        let w = omega_bruteforce_m2(0, Complex64::new(0.0, 0.0), 5, 6).unwrap();
        assert!((w - 1.0).norm() < 1e-15);
    }

    #[test]
    fn depth_bound_enforced() {
        assert!(valuation_distribution_m2(2, 3, 4).is_err());
    }
}
