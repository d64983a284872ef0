use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::gaussian::GaussianRational;
use super::scalar::Scalar;
use super::ArithError;

/// Laurent polynomial in `X_1..X_n` (with `X_j = q^{z_j}`) over [`Scalar`].
///
/// Terms are stored flat: the key is `[e_1, .., e_n, k]` for the monomial
/// `v^k X_1^{e_1} .. X_n^{e_n}`. The lexicographic key order groups terms by
/// their X-exponent vector, which is also the serialization order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiLaurent {
    n: usize,
    terms: BTreeMap<Vec<i32>, GaussianRational>,
}

impl MultiLaurent {
    pub fn zero(n: usize) -> Self {
        MultiLaurent {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, &Scalar::one())
    }

    pub fn constant(n: usize, c: &Scalar) -> Self {
        Self::monomial(n, &vec![0; n], c)
    }

    pub fn from_int(n: usize, k: i64) -> Self {
        Self::constant(n, &Scalar::from_int(k))
    }

    /// `c * X^exps`.
    pub fn monomial(n: usize, exps: &[i32], c: &Scalar) -> Self {
        assert_eq!(exps.len(), n, "exponent length must equal the rank");
        let mut p = Self::zero(n);
        for (k, a) in c.terms() {
            let mut key = exps.to_vec();
            key.push(k);
            p.terms.insert(key, a.clone());
        }
        p
    }

    /// `X^exps` with coefficient 1.
    pub fn x_mono(n: usize, exps: &[i32]) -> Self {
        Self::monomial(n, exps, &Scalar::one())
    }

    /// The variable `X_j` (0-based `j`).
    pub fn var(n: usize, j: usize) -> Self {
        let mut e = vec![0; n];
        e[j] = 1;
        Self::x_mono(n, &e)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_flat_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn flat_terms(&self) -> impl Iterator<Item = (&Vec<i32>, &GaussianRational)> {
        self.terms.iter()
    }

    /// Terms grouped by X-exponent vector.
    pub fn terms(&self) -> BTreeMap<Vec<i32>, Scalar> {
        let mut out: BTreeMap<Vec<i32>, Scalar> = BTreeMap::new();
        for (key, c) in &self.terms {
            let (x, k) = key.split_at(self.n);
            out.entry(x.to_vec())
                .or_insert_with(Scalar::zero)
                .add_term(k[0], c);
        }
        out
    }

    pub fn coeff(&self, exps: &[i32]) -> Scalar {
        let mut lo = exps.to_vec();
        lo.push(i32::MIN);
        let mut hi = exps.to_vec();
        hi.push(i32::MAX);
        Scalar::from_terms(
            self.terms
                .range(lo..=hi)
                .map(|(key, c)| (key[self.n], c.clone())),
        )
    }

    /// The value as a [`Scalar`] when no X-variable occurs.
    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.terms.keys().all(|k| k[..self.n].iter().all(|e| *e == 0)) {
            Some(self.coeff(&vec![0; self.n]))
        } else {
            None
        }
    }

    fn check_rank(&self, o: &MultiLaurent) {
        assert_eq!(self.n, o.n, "rank mismatch in polynomial arithmetic");
    }

    fn add_flat(&mut self, key: Vec<i32>, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add_assign_ref(&mut self, o: &MultiLaurent) {
        self.check_rank(o);
        for (k, c) in &o.terms {
            self.add_flat(k.clone(), c.clone());
        }
    }

    pub fn scale(&self, s: &Scalar) -> MultiLaurent {
        &MultiLaurent::constant(self.n, s) * self
    }

    /// Multiply by `X^exps`.
    pub fn shift_x(&self, exps: &[i32]) -> MultiLaurent {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mut key = k.clone();
                for (a, b) in key.iter_mut().zip(exps) {
                    *a += b;
                }
                (key, c.clone())
            })
            .collect();
        MultiLaurent { n: self.n, terms }
    }

    pub fn pow(&self, e: u32) -> MultiLaurent {
        let mut acc = MultiLaurent::one(self.n);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Apply an integer linear map to every X-exponent vector.
    pub fn map_exponents<F: Fn(&[i32]) -> Vec<i32>>(&self, f: F) -> MultiLaurent {
        let mut out = MultiLaurent::zero(self.n);
        for (k, c) in &self.terms {
            let mut key = f(&k[..self.n]);
            key.push(k[self.n]);
            out.add_flat(key, c.clone());
        }
        out
    }

    /// Coefficient-wise complex conjugation (v is real).
    pub fn conj_coeffs(&self) -> MultiLaurent {
        MultiLaurent {
            n: self.n,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.conj())).collect(),
        }
    }

    /// gcd of all coefficients, as a monic Laurent polynomial in `v`.
    pub fn content(&self) -> Scalar {
        let mut g = Scalar::zero();
        for c in self.terms().values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide every coefficient exactly by a scalar.
    pub fn div_scalar_exact(&self, s: &Scalar) -> Result<MultiLaurent, ArithError> {
        let mut out = MultiLaurent::zero(self.n);
        for (x, c) in self.terms() {
            let q = c.exact_div(s)?;
            out.add_assign_ref(&MultiLaurent::monomial(self.n, &x, &q));
        }
        Ok(out)
    }

    /// Substitute `X_j -> vals[j]`; each value must be a unit when negative
    /// powers occur.
    pub fn specialize(&self, vals: &[Scalar]) -> Result<Scalar, ArithError> {
        assert_eq!(vals.len(), self.n);
        let mut out = Scalar::zero();
        for (x, c) in self.terms() {
            let mut t = c;
            for (e, val) in x.iter().zip(vals) {
                let p = val.powi(*e).ok_or(ArithError::NotUnit)?;
                t = &t * &p;
            }
            out.add_assign_ref(&t);
        }
        Ok(out)
    }

    /// Evaluate at `v = sqrt(q_val)` and `X_j = q_val^{z_j}`.
    pub fn eval_complex(&self, q_val: f64, z: &[Complex64]) -> Complex64 {
        self.compile(q_val).eval(q_val, z)
    }

    /// Collapse the `v`-dependence at a fixed numeric `q`.
    pub fn compile(&self, q_val: f64) -> NumericLaurent {
        let v = q_val.sqrt();
        let terms = self
            .terms()
            .into_iter()
            .map(|(x, c)| (x, c.eval(v)))
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
            .collect();
        NumericLaurent { n: self.n, terms }
    }

    fn max_key(&self) -> Option<&Vec<i32>> {
        self.terms.keys().next_back()
    }

    /// Per-coordinate (min, max) over all flat keys.
    fn bounds(&self) -> Vec<(i32, i32)> {
        let mut b = vec![(i32::MAX, i32::MIN); self.n + 1];
        for k in self.terms.keys() {
            for (i, e) in k.iter().enumerate() {
                b[i].0 = b[i].0.min(*e);
                b[i].1 = b[i].1.max(*e);
            }
        }
        b
    }
}

/// Exact quotient `num / den` in the Laurent ring over Q(i)[v, v^{-1}].
///
/// Division runs in lexicographic order on flat keys. Any exact quotient has
/// its exponents inside the box `[min(num)-min(den), max(num)-max(den)]`, so a
/// quotient term leaving the box certifies inexactness.
pub fn exact_divide(num: &MultiLaurent, den: &MultiLaurent) -> Result<MultiLaurent, ArithError> {
    num.check_rank(den);
    if den.is_zero() {
        return Err(ArithError::ZeroDenominator);
    }
    let n = num.n;
    if num.is_zero() {
        return Ok(MultiLaurent::zero(n));
    }
    let nb = num.bounds();
    let db = den.bounds();
    let bx: Vec<(i32, i32)> = nb
        .iter()
        .zip(&db)
        .map(|(a, b)| (a.0 - b.0, a.1 - b.1))
        .collect();
    let lead = den.max_key().unwrap().clone();
    let lead_inv = den.terms[&lead].inv().unwrap();
    let mut r = num.clone();
    let mut q = MultiLaurent::zero(n);
    while let Some(m) = r.max_key().cloned() {
        let t: Vec<i32> = m.iter().zip(&lead).map(|(a, b)| a - b).collect();
        if t.iter().zip(&bx).any(|(e, (lo, hi))| e < lo || e > hi) {
            return Err(ArithError::InexactDivision {
                remainder: Box::new(r),
            });
        }
        let c = &r.terms[&m] * &lead_inv;
        for (dk, dc) in &den.terms {
            let key: Vec<i32> = dk.iter().zip(&t).map(|(a, b)| a + b).collect();
            r.add_flat(key, -(dc * &c));
        }
        debug_assert!(!r.terms.contains_key(&m));
        q.terms.insert(t, c);
    }
    Ok(q)
}

/// Divide by each factor in turn; valid whenever the full product divides.
pub fn exact_divide_by_factors(
    num: &MultiLaurent,
    factors: &[MultiLaurent],
) -> Result<MultiLaurent, ArithError> {
    let mut acc = num.clone();
    for f in factors {
        acc = exact_divide(&acc, f)?;
    }
    Ok(acc)
}

impl<'a> Add<&'a MultiLaurent> for &'a MultiLaurent {
    type Output = MultiLaurent;
    fn add(self, o: &MultiLaurent) -> MultiLaurent {
        let mut s = self.clone();
        s.add_assign_ref(o);
        s
    }
}

impl<'a> Sub<&'a MultiLaurent> for &'a MultiLaurent {
    type Output = MultiLaurent;
    fn sub(self, o: &MultiLaurent) -> MultiLaurent {
        self.check_rank(o);
        let mut s = self.clone();
        for (k, c) in &o.terms {
            s.add_flat(k.clone(), -c);
        }
        s
    }
}

impl<'a> Mul<&'a MultiLaurent> for &'a MultiLaurent {
    type Output = MultiLaurent;
    fn mul(self, o: &MultiLaurent) -> MultiLaurent {
        self.check_rank(o);
        let mut s = MultiLaurent::zero(self.n);
        for (ka, a) in &self.terms {
            for (kb, b) in &o.terms {
                let key: Vec<i32> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
                s.add_flat(key, a * b);
            }
        }
        s
    }
}

impl Neg for &MultiLaurent {
    type Output = MultiLaurent;
    fn neg(self) -> MultiLaurent {
        MultiLaurent {
            n: self.n,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for MultiLaurent {
    /// Canonical text: `(coef)*v^k*X1^e1*...*Xn^en` joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mut s = format!("({})*v^{}", c, k[self.n]);
                for (j, e) in k[..self.n].iter().enumerate() {
                    s.push_str(&format!("*X{}^{}", j + 1, e));
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A Laurent polynomial in X with complex coefficients at a fixed `q`.
#[derive(Clone, Debug)]
pub struct NumericLaurent {
    n: usize,
    terms: Vec<(Vec<i32>, Complex64)>,
}

impl NumericLaurent {
    pub fn eval(&self, q_val: f64, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.n);
        let lq = q_val.ln();
        let x: Vec<Complex64> = z.iter().map(|zj| (zj * lq).exp()).collect();
        self.eval_at_x(&x)
    }

    /// Evaluate at explicit values of `X_j`.
    pub fn eval_at_x(&self, x: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = *c;
            for (xj, ej) in x.iter().zip(e) {
                t *= xj.powi(*ej);
            }
            acc += t;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x1() -> MultiLaurent {
        MultiLaurent::var(1, 0)
    }

    #[test]
    fn difference_of_squares() {
        let one = MultiLaurent::one(1);
        let a = &one - &x1();
        let b = &one + &x1();
        let want = &one - &x1().pow(2);
        assert_eq!(&a * &b, want);
    }

    #[test]
    fn divisions() {
        let one = MultiLaurent::one(1);
        let num = &one - &x1().pow(2);
        let den = &one - &x1();
        assert_eq!(exact_divide(&num, &den).unwrap(), &one + &x1());
        let q = exact_divide(&den, &x1()).unwrap();
        assert_eq!(q, &MultiLaurent::x_mono(1, &[-1]) - &one);
        let bad = exact_divide(&(&one + &x1()), &(&one - &x1()));
        assert!(matches!(bad, Err(ArithError::InexactDivision { .. })));
        assert!(matches!(
            exact_divide(&one, &MultiLaurent::zero(1)),
            Err(ArithError::ZeroDenominator)
        ));
    }

    #[test]
    fn eval_simple() {
        let z = [Complex64::new(0.5, 0.0)];
        assert!((x1().eval_complex(4.0, &z) - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        let v = MultiLaurent::constant(1, &Scalar::v_pow(1));
        assert!((v.eval_complex(9.0, &z) - Complex64::new(3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn canonical_text() {
        let p = &MultiLaurent::monomial(2, &[1, -1], &Scalar::from_frac(1, 2))
            + &MultiLaurent::monomial(2, &[0, 0], &Scalar::v_pow(-2));
        assert_eq!(p.to_string(), "(1)*v^-2*X1^0*X2^0 + (1/2)*v^0*X1^1*X2^-1");
    }
}
