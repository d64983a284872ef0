//! The spherical function `omega(x_lambda; z)`, its normalization `Psi`, the
//! rank-one closed forms, Gamma factors, and the `s <-> z` change of variables.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::exact_arith::{weyl_substitute, ArithError, MultiLaurent, RationalFn, Scalar};
use crate::hall_littlewood::{check_invariant, p_poly, q_poly, HlError, TSpec};
use crate::weyl_roots::{
    enumerate_group, inversion_set, poincare_w, w_tilde, Parity, RootDatum, Signature,
    SignedPermutation, WeylError,
};

#[derive(Debug, thiserror::Error)]
pub enum SphError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Hl(#[from] HlError),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("odd matrix size requires e <= 1 (the explicit formula is only established there), got e = {0}")]
    OddDyadic(u32),
    #[error("signature {0} is not in the parameter set for e = {1}")]
    BadSignature(String, u32),
    #[error("no admissible sample point after {0} attempts")]
    Resampling(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpaceParams {
    pub m: usize,
    pub n: usize,
    pub e: u32,
    pub parity: Parity,
}

impl SpaceParams {
    pub fn new(m: usize, e: u32) -> Result<Self, SphError> {
        if m < 2 {
            return Err(SphError::InvalidParams(format!("matrix size m = {m} must be >= 2")));
        }
        let parity = Parity::of(m);
        if e > 1 {
            if parity == Parity::Odd {
                return Err(SphError::OddDyadic(e));
            }
            return Err(SphError::InvalidParams(format!(
                "e = {e}: only base fields Q_p (e in {{0,1}}) are supported"
            )));
        }
        Ok(SpaceParams {
            m,
            n: m / 2,
            e,
            parity,
        })
    }

    pub fn t_spec(&self) -> TSpec {
        TSpec::spherical(self.parity)
    }

    /// Validate `lambda` as an element of the signature set with floor `e`.
    pub fn signature(&self, lambda: &[i32]) -> Result<Signature, SphError> {
        if lambda.len() != self.n {
            return Err(SphError::InvalidParams(format!(
                "signature has {} parts, expected {}",
                lambda.len(),
                self.n
            )));
        }
        Signature::new(lambda.to_vec(), self.e as i32)
            .map_err(|_| SphError::BadSignature(format!("{lambda:?}"), self.e))
    }

    fn ones(&self) -> Vec<i32> {
        vec![self.e as i32; self.n]
    }
}

/// `q^{z_{0,i}}` as exact scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaPoint {
    pub values: Vec<Scalar>,
}

impl ZetaPoint {
    pub fn new(p: &SpaceParams) -> Self {
        let n = p.n as i32;
        let values = (1..=n)
            .map(|i| {
                let sign = if (n - i) % 2 == 0 { 1 } else { -1 };
                match p.parity {
                    Parity::Even => Scalar::v_pow(-(2 * (n - i) + 1)).scale(&sign_gr(sign)),
                    Parity::Odd => {
                        &Scalar::v_pow(-2 * (n - i + 1)).scale(&sign_gr(sign)) * &Scalar::i()
                    }
                }
            })
            .collect();
        ZetaPoint { values }
    }

    /// The complex point `z_0` itself.
    pub fn complex(p: &SpaceParams, q_val: f64) -> Vec<Complex64> {
        let lq = q_val.ln();
        (1..=p.n)
            .map(|i| {
                let k = (p.n - i) as f64;
                match p.parity {
                    Parity::Even => Complex64::new(-(k + 0.5), k * PI / lq),
                    Parity::Odd => Complex64::new(-(k + 1.0), (k + 0.5) * PI / lq),
                }
            })
            .collect()
    }

    /// `q^{<a, z_0>}`.
    pub fn pow(&self, a: &[i32]) -> Scalar {
        let mut acc = Scalar::one();
        for (val, k) in self.values.iter().zip(a) {
            acc = &acc * &val.powi(*k).expect("monomial");
        }
        acc
    }

    /// Twice the real part of `z_0`, an integer vector.
    pub fn twice_real(p: &SpaceParams) -> Vec<i32> {
        let n = p.n as i32;
        (1..=n)
            .map(|i| match p.parity {
                Parity::Even => -(2 * (n - i) + 1),
                Parity::Odd => -2 * (n - i + 1),
            })
            .collect()
    }
}

fn sign_gr(s: i64) -> crate::exact_arith::GaussianRational {
    crate::exact_arith::GaussianRational::from_int(s)
}

pub fn s_to_z(s: &[Complex64], p: &SpaceParams, q_val: f64) -> Vec<Complex64> {
    let n = p.n;
    let lq = q_val.ln();
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    z[n - 1] = match p.parity {
        Parity::Even => -s[n - 1] - 0.5,
        Parity::Odd => -s[n - 1] - 1.0 + Complex64::new(0.0, PI / (2.0 * lq)),
    };
    for i in (0..n - 1).rev() {
        z[i] = z[i + 1] - s[i] - 1.0 + Complex64::new(0.0, PI / lq);
    }
    z
}

pub fn z_to_s(z: &[Complex64], p: &SpaceParams, q_val: f64) -> Vec<Complex64> {
    let n = p.n;
    let lq = q_val.ln();
    let mut s: Vec<Complex64> = (0..n - 1)
        .map(|i| -z[i] + z[i + 1] - 1.0 + Complex64::new(0.0, PI / lq))
        .collect();
    s.push(match p.parity {
        Parity::Even => -z[n - 1] - 0.5,
        Parity::Odd => -z[n - 1] - 1.0 + Complex64::new(0.0, PI / (2.0 * lq)),
    });
    s
}

fn one_plus(n: usize, a: &[i32], c: &Scalar) -> MultiLaurent {
    &MultiLaurent::one(n) + &MultiLaurent::monomial(n, a, c)
}

fn one_minus(n: usize, a: &[i32], c: &Scalar) -> MultiLaurent {
    &MultiLaurent::one(n) - &MultiLaurent::monomial(n, a, c)
}

/// `G(z) = prod (1 + X^a) / (1 - q^{-1} X^a)` over the short positive roots
/// (even m) or all positive roots (odd m).
pub fn g_factor(p: &SpaceParams) -> RationalFn {
    let n = p.n;
    let roots = RootDatum::new(n);
    let set: Vec<&Vec<i32>> = match p.parity {
        Parity::Even => roots.short_pos.iter().collect(),
        Parity::Odd => roots.positive().collect(),
    };
    let mut num = MultiLaurent::one(n);
    let mut den = MultiLaurent::one(n);
    for a in set {
        num = &num * &one_plus(n, a, &Scalar::one());
        den = &den * &one_minus(n, a, &Scalar::q_pow(-1));
    }
    RationalFn::new(num, den).expect("nonzero")
}

/// The factor `gamma_a^{(e)}(z)` attached to one positive root.
pub fn gamma_alpha(a: &[i32], p: &SpaceParams) -> RationalFn {
    let n = p.n;
    let e = p.e as i32;
    let short = || {
        RationalFn::new(
            one_minus(n, a, &Scalar::q_pow(-1)),
            &MultiLaurent::x_mono(n, a) - &MultiLaurent::constant(n, &Scalar::q_pow(-1)),
        )
        .expect("nonzero")
    };
    let ea: Vec<i32> = a.iter().map(|x| x * e).collect();
    if !RootDatum::is_long(a) {
        return short();
    }
    let lead = RationalFn::from_laurent(MultiLaurent::x_mono(n, &ea));
    match p.parity {
        Parity::Even => lead,
        Parity::Odd => &lead * &short(),
    }
}

/// `prod_{a in Sigma^+(sigma)} gamma_a(z)`.
pub fn gamma_sigma(s: &SignedPermutation, p: &SpaceParams) -> Result<RationalFn, SphError> {
    let roots = RootDatum::new(p.n);
    let mut acc = RationalFn::one(p.n);
    for a in inversion_set(s, &roots)? {
        acc = &acc * &gamma_alpha(&a, p);
    }
    Ok(acc)
}

/// `f(sigma z)` as a function of `z`.
pub fn compose_with(f: &RationalFn, s: &SignedPermutation) -> Result<RationalFn, SphError> {
    Ok(f.weyl_substitute(&s.inverse())?)
}

/// `[q^{<e,z>} / G(z)] * [G(sigma z) / q^{<e, sigma z>}]`.
pub fn gamma_sigma_from_g(s: &SignedPermutation, p: &SpaceParams) -> Result<RationalFn, SphError> {
    let n = p.n;
    let g = g_factor(p);
    let eg = &RationalFn::from_laurent(MultiLaurent::x_mono(n, &p.ones())) * &g.inv()?;
    let moved = compose_with(&eg, s)?;
    Ok(eg.checked_div(&moved)?)
}

/// `c_n` as (numerator, denominator).
pub fn c_n(p: &SpaceParams) -> (Scalar, Scalar) {
    let one = Scalar::one();
    let mut num = (&one - &Scalar::q_pow(-2)).pow(p.n as u32);
    if p.parity == Parity::Odd {
        num = &num * &(&one + &Scalar::q_pow(-1));
    }
    (num, poincare_w(p.m, &-&Scalar::q_pow(-1)))
}

/// `c_n q^{<lambda, z_0>} q^{<e,z>} / G(z) * Q_{lambda+e}(z;{t})`.
pub fn omega_explicit(lambda: &[i32], p: &SpaceParams) -> Result<RationalFn, SphError> {
    let sig = p.signature(lambda)?;
    let n = p.n;
    let mu = sig.shifted(p.e as i32);
    let q = q_poly(&Signature::dominant(mu.entries().to_vec())?, n, &p.t_spec())?;
    let (cn, cd) = c_n(p);
    let scal = &cn * &ZetaPoint::new(p).pow(lambda);
    let g = g_factor(p);
    let num = &q.shift_x(&p.ones()).scale(&scal) * g.den();
    let den = g.num().scale(&cd);
    Ok(RationalFn::new(num, den)?)
}

fn rank1_sum(lambda: i32, e: i32, inner: &dyn Fn(i32) -> MultiLaurent) -> RationalFn {
    // X^{-(l+e)} f(X) / (1 - X^2) + X^{l+e} f(X^{-1}) / (1 - X^{-2})
    let k = lambda + e;
    let a = RationalFn::new(
        &MultiLaurent::x_mono(1, &[-k]) * &inner(1),
        one_minus(1, &[2], &Scalar::one()),
    )
    .expect("nonzero");
    let b = RationalFn::new(
        &MultiLaurent::x_mono(1, &[k]) * &inner(-1),
        one_minus(1, &[-2], &Scalar::one()),
    )
    .expect("nonzero");
    &a + &b
}

/// The rank-one closed forms for `m = 2` and `m = 3`, transcribed directly.
pub fn omega_closed_rank1(lambda: i32, m: usize, e: u32) -> Result<RationalFn, SphError> {
    let p = SpaceParams::new(m, e)?;
    if p.n != 1 {
        return Err(SphError::InvalidParams(format!("closed form needs m in {{2,3}}, got {m}")));
    }
    let ei = e as i32;
    if lambda < -ei {
        return Err(SphError::BadSignature(format!("[{lambda}]"), e));
    }
    let one = Scalar::one();
    let xe = RationalFn::from_laurent(MultiLaurent::x_mono(1, &[ei]));
    match p.parity {
        Parity::Even => {
            let inner = |sgn: i32| one_minus(1, &[2 * sgn], &Scalar::q_pow(-1));
            let sum = rank1_sum(lambda, ei, &inner);
            let pref = RationalFn::new(
                MultiLaurent::constant(1, &Scalar::v_pow(-lambda)),
                MultiLaurent::constant(1, &(&one + &Scalar::q_pow(-1))),
            )?;
            Ok(&(&pref * &xe) * &sum)
        }
        Parity::Odd => {
            let inner = |sgn: i32| one_plus(1, &[2 * sgn], &Scalar::q_pow(-2));
            let sum = rank1_sum(lambda, ei, &inner);
            let c = &Scalar::i().powi(lambda).expect("unit") * &Scalar::q_pow(-lambda);
            let pref = RationalFn::new(
                one_minus(1, &[2], &Scalar::q_pow(-1)).scale(&c),
                one_plus(1, &[2], &one).scale(&(&one + &Scalar::q_pow(-3))),
            )?;
            Ok(&(&pref * &xe) * &sum)
        }
    }
}

/// `Psi(x_lambda; z) = q^{<lambda+e, z_0>} w~_{lambda+e} / w~_0 * P_{lambda+e}`,
/// returned with an X-free scalar denominator.
pub fn psi_normalized(lambda: &[i32], p: &SpaceParams) -> Result<RationalFn, SphError> {
    let (poly, num, den) = psi_parts(lambda, p)?;
    Ok(RationalFn::new(
        poly.scale(&num),
        MultiLaurent::constant(p.n, &den),
    )?)
}

/// `(P_{lambda+e}, scalar numerator, scalar denominator)` of `Psi`.
pub fn psi_parts(lambda: &[i32], p: &SpaceParams) -> Result<(MultiLaurent, Scalar, Scalar), SphError> {
    let sig = p.signature(lambda)?;
    let mu = Signature::dominant(sig.shifted(p.e as i32).entries().to_vec())?;
    let t = -&Scalar::q_pow(-1);
    let wm = w_tilde(&mu, p.parity, &t)?;
    let w0 = w_tilde(&Signature::zero(p.n), p.parity, &t)?;
    let zp = ZetaPoint::new(p).pow(mu.entries());
    let poly = p_poly(&mu, p.n, &p.t_spec())?;
    Ok((poly, &zp * &wm, w0))
}

/// `omega(x_lambda; z) / omega(x_{(-e)}; z)`.
pub fn psi_quotient(lambda: &[i32], p: &SpaceParams) -> Result<RationalFn, SphError> {
    let base = vec![-(p.e as i32); p.n];
    Ok(omega_explicit(lambda, p)?.checked_div(&omega_explicit(&base, p)?)?)
}

/// Exact value check `omega(x_lambda; z_0) = 1`.
pub fn omega_at_z0_is_one(lambda: &[i32], p: &SpaceParams) -> Result<bool, SphError> {
    let w = omega_explicit(lambda, p)?;
    let (num, den) = w.specialize(&ZetaPoint::new(p).values)?;
    Ok(!den.is_zero() && num == den)
}

/// Checks `q^{-<e,z>} G(z) omega(x_lambda; z)` is a W-invariant Laurent
/// polynomial (up to an X-free scalar denominator).
pub fn check_holomorphic_invariant(lambda: &[i32], p: &SpaceParams) -> Result<(), SphError> {
    let n = p.n;
    let neg_e: Vec<i32> = p.ones().iter().map(|x| -x).collect();
    let h = &(&RationalFn::from_laurent(MultiLaurent::x_mono(n, &neg_e)) * &g_factor(p))
        * &omega_explicit(lambda, p)?;
    let (poly, _) = h.laurent_in_x()?;
    check_invariant(&poly)?;
    Ok(())
}

/// Sample points near the unitary axis: `z_j = delta_j + i theta_j`.
pub fn sample_point(rng: &mut ChaCha8Rng, n: usize, q_val: f64, jitter: f64) -> Vec<Complex64> {
    let period = 2.0 * PI / q_val.ln();
    (0..n)
        .map(|_| {
            Complex64::new(
                rng.gen_range(-jitter..=jitter),
                rng.gen_range(0.0..period),
            )
        })
        .collect()
}

pub const MAX_RESAMPLES: usize = 100;

/// Max relative residual of `omega(z) - Gamma_sigma(z) omega(sigma z)`.
pub fn check_functional_equation(
    lambda: &[i32],
    s: &SignedPermutation,
    p: &SpaceParams,
    q_val: f64,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<f64, SphError> {
    let w = omega_explicit(lambda, p)?.compile(q_val);
    let gam = gamma_sigma(s, p)?.compile(q_val);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let mut tries = 0;
        loop {
            tries += 1;
            if tries > MAX_RESAMPLES {
                return Err(SphError::Resampling(MAX_RESAMPLES));
            }
            let z = sample_point(rng, p.n, q_val, 0.05);
            let sz = s.act_complex(&z);
            let (Ok(a), Ok(b), Ok(g)) = (w.eval(&z), w.eval(&sz), gam.eval(&z)) else {
                continue;
            };
            let r = (a - g * b).norm() / a.norm().max(1e-300);
            worst = worst.max(r);
            break;
        }
    }
    Ok(worst)
}

/// All of `W` for the rank of `p`.
pub fn weyl_group(p: &SpaceParams) -> Result<&'static [SignedPermutation], SphError> {
    Ok(enumerate_group(p.n)?)
}

/// `f(sigma z)` for a Laurent polynomial.
pub fn compose_laurent(f: &MultiLaurent, s: &SignedPermutation) -> Result<MultiLaurent, SphError> {
    Ok(weyl_substitute(f, &s.inverse())?)
}
