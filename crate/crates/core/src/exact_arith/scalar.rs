use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::gaussian::GaussianRational;
use super::ArithError;

/// Laurent polynomial in the formal symbol `v = q^{1/2}` over Q(i).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scalar {
    coeffs: BTreeMap<i32, GaussianRational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(k: i64) -> Self {
        Self::constant(GaussianRational::from_int(k))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::constant(GaussianRational::from_frac(num, den))
    }

    pub fn i() -> Self {
        Self::constant(GaussianRational::i())
    }

    pub fn monomial(c: GaussianRational, k: i32) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        Scalar { coeffs }
    }

    /// `v^k`.
    pub fn v_pow(k: i32) -> Self {
        Self::monomial(GaussianRational::one(), k)
    }

    /// `q^k = v^{2k}`.
    pub fn q_pow(k: i32) -> Self {
        Self::v_pow(2 * k)
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, GaussianRational)>>(it: I) -> Self {
        let mut s = Scalar::zero();
        for (k, c) in it {
            s.add_term(k, &c);
        }
        s
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &GaussianRational)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, k: i32) -> GaussianRational {
        self.coeffs
            .get(&k)
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    /// The constant value if no positive or negative power of `v` occurs.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.coeffs.len() {
            0 => Some(GaussianRational::zero()),
            1 => self.coeffs.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    pub(crate) fn add_term(&mut self, k: i32, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&k) {
            Some(x) => {
                let s = &*x + c;
                if s.is_zero() {
                    self.coeffs.remove(&k);
                } else {
                    *x = s;
                }
            }
            None => {
                self.coeffs.insert(k, c.clone());
            }
        }
    }

    pub fn add_assign_ref(&mut self, o: &Scalar) {
        for (k, c) in &o.coeffs {
            self.add_term(*k, c);
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            coeffs: self.coeffs.iter().map(|(k, x)| (*k, x * c)).collect(),
        }
    }

    pub fn shift(&self, k: i32) -> Scalar {
        Scalar {
            coeffs: self.coeffs.iter().map(|(j, x)| (j + k, x.clone())).collect(),
        }
    }

    pub fn conj(&self) -> Scalar {
        Scalar {
            coeffs: self.coeffs.iter().map(|(k, x)| (*k, x.conj())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Inverse of a unit, i.e. of a single-term Laurent polynomial.
    pub fn inv_monomial(&self) -> Option<Scalar> {
        if self.coeffs.len() != 1 {
            return None;
        }
        let (k, c) = self.coeffs.iter().next().unwrap();
        Some(Scalar::monomial(c.inv()?, -k))
    }

    /// Integer power allowing negative exponents for units.
    pub fn powi(&self, e: i32) -> Option<Scalar> {
        if e >= 0 {
            Some(self.pow(e as u32))
        } else {
            Some(self.inv_monomial()?.pow((-e) as u32))
        }
    }

    pub fn eval(&self, v: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in &self.coeffs {
            acc += c.to_complex() * v.powi(*k);
        }
        acc
    }

    fn dense(&self) -> (i32, Vec<GaussianRational>) {
        let lo = self.min_degree().unwrap_or(0);
        let hi = self.max_degree().unwrap_or(0);
        let mut v = vec![GaussianRational::zero(); (hi - lo + 1) as usize];
        for (k, c) in &self.coeffs {
            v[(k - lo) as usize] = c.clone();
        }
        (lo, v)
    }

    fn from_dense(lo: i32, v: &[GaussianRational]) -> Scalar {
        Scalar::from_terms(
            v.iter()
                .enumerate()
                .map(|(i, c)| (lo + i as i32, c.clone())),
        )
    }

    /// Exact quotient `self / d` in the Laurent ring, or the nonzero remainder.
    pub fn exact_div(&self, d: &Scalar) -> Result<Scalar, ArithError> {
        if d.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        if self.is_zero() {
            return Ok(Scalar::zero());
        }
        let (alo, a) = self.dense();
        let (blo, b) = d.dense();
        let (q, r) = poly_divrem(&a, &b);
        if r.iter().any(|c| !c.is_zero()) {
            return Err(ArithError::InexactScalar {
                remainder: Scalar::from_dense(alo, &r).to_string(),
            });
        }
        Ok(Scalar::from_dense(alo - blo, &q))
    }

    /// Monic gcd in the Laurent ring (normalized to lowest degree 0).
    pub fn gcd(&self, o: &Scalar) -> Scalar {
        if self.is_zero() {
            return o.normalized_unit();
        }
        if o.is_zero() {
            return self.normalized_unit();
        }
        let (_, mut a) = self.dense();
        let (_, mut b) = o.dense();
        while b.iter().any(|c| !c.is_zero()) {
            let (_, r) = poly_divrem(&a, &b);
            a = b;
            b = trim(r);
        }
        Scalar::from_dense(0, &a).normalized_unit()
    }

    /// Shift to lowest degree 0 and make the leading coefficient 1.
    fn normalized_unit(&self) -> Scalar {
        let lo = match self.min_degree() {
            Some(l) => l,
            None => return Scalar::zero(),
        };
        let lead = self.coeffs.values().next_back().unwrap().inv().unwrap();
        self.shift(-lo).scale(&lead)
    }
}

fn trim(mut v: Vec<GaussianRational>) -> Vec<GaussianRational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Dense polynomial division over Q(i); coefficient vectors are low-to-high.
fn poly_divrem(
    a: &[GaussianRational],
    b: &[GaussianRational],
) -> (Vec<GaussianRational>, Vec<GaussianRational>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (vec![GaussianRational::zero()], r);
    }
    let lead_inv = b.last().unwrap().inv().expect("nonzero divisor");
    let mut q = vec![GaussianRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() * &lead_inv;
        for (i, bc) in b.iter().enumerate() {
            let t = bc * &c;
            r[shift + i] = &r[shift + i] - &t;
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
    }
    (q, r)
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        let mut s = self.clone();
        s.add_assign_ref(o);
        s
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        let mut s = self.clone();
        for (k, c) in &o.coeffs {
            s.add_term(*k, &-c);
        }
        s
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        let mut s = Scalar::zero();
        for (i, a) in &self.coeffs {
            for (j, b) in &o.coeffs {
                s.add_term(i + j, &(a * b));
            }
        }
        s
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(k, c)| format!("({})*v^{}", c, k))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(terms: &[(i32, i64)]) -> Scalar {
        Scalar::from_terms(terms.iter().map(|(k, c)| (*k, GaussianRational::from_int(*c))))
    }

    #[test]
    fn division_exact_and_inexact() {
        // (1 - v^4) / (1 - v^2) = 1 + v^2
        let a = s(&[(0, 1), (4, -1)]);
        let b = s(&[(0, 1), (2, -1)]);
        assert_eq!(a.exact_div(&b).unwrap(), s(&[(0, 1), (2, 1)]));
        // Laurent shift: v^-3 (1 - v^2) / (1 - v^2) = v^-3
        let c = &a.shift(-3) * &Scalar::one();
        assert_eq!(c.exact_div(&a).unwrap(), Scalar::v_pow(-3));
        assert!(s(&[(0, 1), (1, 1)]).exact_div(&b).is_err());
        assert!(a.exact_div(&Scalar::zero()).is_err());
    }

    #[test]
    fn gcd_of_shared_factor() {
        let f = s(&[(0, 1), (1, 1)]); // 1+v
        let g = &f * &s(&[(0, 2), (1, -1)]);
        let h = &f * &s(&[(-2, 3), (0, 1)]);
        assert_eq!(g.gcd(&h), f);
    }

    #[test]
    fn eval_matches_float() {
        let x = s(&[(-2, 1), (0, 3), (1, -2)]);
        let v = 1.5f64;
        let want = 1.0 / (v * v) + 3.0 - 2.0 * v;
        assert!((x.eval(v).re - want).abs() < 1e-12);
    }
}
