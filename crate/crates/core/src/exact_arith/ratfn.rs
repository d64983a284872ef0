use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use super::laurent::{exact_divide, MultiLaurent, NumericLaurent};
use super::scalar::Scalar;
use super::ArithError;

pub const DEFAULT_POLE_THRESHOLD: f64 = 1e-9;

/// Unreduced quotient of two [`MultiLaurent`]s.
#[derive(Clone, Debug)]
pub struct RationalFn {
    num: MultiLaurent,
    den: MultiLaurent,
}

impl RationalFn {
    pub fn new(num: MultiLaurent, den: MultiLaurent) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        if num.n() != den.n() {
            return Err(ArithError::RankMismatch {
                expected: num.n(),
                got: den.n(),
            });
        }
        Ok(RationalFn { num, den })
    }

    pub fn from_laurent(p: MultiLaurent) -> Self {
        let n = p.n();
        RationalFn {
            num: p,
            den: MultiLaurent::one(n),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::from_laurent(MultiLaurent::one(n))
    }

    pub fn constant(n: usize, c: &Scalar) -> Self {
        Self::from_laurent(MultiLaurent::constant(n, c))
    }

    pub fn n(&self) -> usize {
        self.num.n()
    }

    pub fn num(&self) -> &MultiLaurent {
        &self.num
    }

    pub fn den(&self) -> &MultiLaurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn inv(&self) -> Result<RationalFn, ArithError> {
        RationalFn::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, o: &RationalFn) -> Result<RationalFn, ArithError> {
        if o.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        Ok(RationalFn {
            num: &self.num * &o.den,
            den: &self.den * &o.num,
        })
    }

    pub fn scale(&self, s: &Scalar) -> RationalFn {
        RationalFn {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    pub fn map_exponents<F: Fn(&[i32]) -> Vec<i32>>(&self, f: F) -> RationalFn {
        RationalFn {
            num: self.num.map_exponents(&f),
            den: self.den.map_exponents(&f),
        }
    }

    pub fn weyl_substitute(
        &self,
        s: &crate::weyl_roots::SignedPermutation,
    ) -> Result<RationalFn, ArithError> {
        Ok(RationalFn {
            num: super::weyl_substitute(&self.num, s)?,
            den: super::weyl_substitute(&self.den, s)?,
        })
    }

    /// Exact equality by cross-multiplication.
    pub fn equals(&self, o: &RationalFn) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }

    /// The quotient as a Laurent polynomial, if the division is exact.
    pub fn to_laurent(&self) -> Result<MultiLaurent, ArithError> {
        exact_divide(&self.num, &self.den)
    }

    /// Write the function as `p / d` with `p` a Laurent polynomial in X and
    /// `d` an X-free scalar. Fails if the X-dependent part of the denominator
    /// does not divide the numerator.
    pub fn laurent_in_x(&self) -> Result<(MultiLaurent, Scalar), ArithError> {
        let c = self.den.content();
        let prim = self.den.div_scalar_exact(&c)?;
        let p = exact_divide(&self.num, &prim)?;
        Ok((p, c))
    }

    /// Substitute `X_j -> vals[j]`, returning (numerator, denominator).
    pub fn specialize(&self, vals: &[Scalar]) -> Result<(Scalar, Scalar), ArithError> {
        Ok((self.num.specialize(vals)?, self.den.specialize(vals)?))
    }

    pub fn compile(&self, q_val: f64) -> CompiledRationalFn {
        CompiledRationalFn {
            q_val,
            num: self.num.compile(q_val),
            den: self.den.compile(q_val),
            threshold: DEFAULT_POLE_THRESHOLD,
        }
    }

    pub fn eval_complex(&self, q_val: f64, z: &[Complex64]) -> Result<Complex64, ArithError> {
        self.eval_complex_with(q_val, z, DEFAULT_POLE_THRESHOLD)
    }

    pub fn eval_complex_with(
        &self,
        q_val: f64,
        z: &[Complex64],
        threshold: f64,
    ) -> Result<Complex64, ArithError> {
        let d = self.den.eval_complex(q_val, z);
        if d.norm() < threshold {
            return Err(ArithError::NearPole {
                magnitude: d.norm(),
            });
        }
        Ok(self.num.eval_complex(q_val, z) / d)
    }
}

/// A [`RationalFn`] with `v` fixed at a numeric `q`.
#[derive(Clone, Debug)]
pub struct CompiledRationalFn {
    q_val: f64,
    num: NumericLaurent,
    den: NumericLaurent,
    pub threshold: f64,
}

impl CompiledRationalFn {
    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64, ArithError> {
        let lq = self.q_val.ln();
        let x: Vec<Complex64> = z.iter().map(|zj| (zj * lq).exp()).collect();
        self.eval_at_x(&x)
    }

    pub fn eval_at_x(&self, x: &[Complex64]) -> Result<Complex64, ArithError> {
        let d = self.den.eval_at_x(x);
        if d.norm() < self.threshold {
            return Err(ArithError::NearPole {
                magnitude: d.norm(),
            });
        }
        Ok(self.num.eval_at_x(x) / d)
    }
}

impl<'a> Add<&'a RationalFn> for &'a RationalFn {
    type Output = RationalFn;
    fn add(self, o: &RationalFn) -> RationalFn {
        if self.den == o.den {
            return RationalFn {
                num: &self.num + &o.num,
                den: self.den.clone(),
            };
        }
        RationalFn {
            num: &(&self.num * &o.den) + &(&o.num * &self.den),
            den: &self.den * &o.den,
        }
    }
}

impl<'a> Sub<&'a RationalFn> for &'a RationalFn {
    type Output = RationalFn;
    fn sub(self, o: &RationalFn) -> RationalFn {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RationalFn> for &'a RationalFn {
    type Output = RationalFn;
    fn mul(self, o: &RationalFn) -> RationalFn {
        RationalFn {
            num: &self.num * &o.num,
            den: &self.den * &o.den,
        }
    }
}

impl<'a> Div<&'a RationalFn> for &'a RationalFn {
    type Output = RationalFn;
    /// Panics on a zero divisor; see [`RationalFn::checked_div`].
    fn div(self, o: &RationalFn) -> RationalFn {
        self.checked_div(o).expect("zero denominator")
    }
}

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] / [{}]", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation() {
        let one = MultiLaurent::one(1);
        let a = &one - &MultiLaurent::var(1, 0);
        let r = RationalFn::new(a.clone(), a).unwrap();
        assert!(r.equals(&RationalFn::one(1)));
        assert!(RationalFn::new(one, MultiLaurent::zero(1)).is_err());
    }

    #[test]
    fn scalar_denominator_extraction() {
        let x = MultiLaurent::var(1, 0);
        let two = Scalar::from_int(2);
        let one = MultiLaurent::one(1);
        let d = (&one - &x).scale(&two);
        let n = &one - &x.pow(2);
        let r = RationalFn::new(n, d).unwrap();
        let (p, c) = r.laurent_in_x().unwrap();
        assert!(p.terms().keys().all(|k| k.len() == 1));
        let back = RationalFn::new(p, MultiLaurent::constant(1, &c)).unwrap();
        assert!(back.equals(&r));
    }

    #[test]
    fn near_pole() {
        let one = MultiLaurent::one(1);
        let r = RationalFn::new(one.clone(), &one - &MultiLaurent::var(1, 0)).unwrap();
        let z = [Complex64::new(0.0, 0.0)];
        assert!(matches!(
            r.eval_complex(2.0, &z),
            Err(ArithError::NearPole { .. })
        ));
    }
}
