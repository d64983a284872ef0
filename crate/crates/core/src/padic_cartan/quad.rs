use std::fmt;

use super::padic::{is_prime, max_precision, PadicNum};
use super::CartanError;

/// The base field `Q_p` at a fixed working precision together with the
/// unramified quadratic extension `k' = k(sqrt(eps))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Field {
    pub p: u64,
    pub prec: u32,
    pub eps: i64,
    /// `v_pi(2)`.
    pub e: u32,
}

fn is_square_mod(a: i64, p: u64) -> bool {
    let a = a.rem_euclid(p as i64) as u64;
    (0..p).any(|x| x * x % p == a)
}

impl Field {
    pub fn new(p: u64, prec: u32) -> Result<Self, CartanError> {
        if !is_prime(p) {
            return Err(CartanError::InvalidInput(format!("{} is not prime", p)));
        }
        let cap = max_precision(p);
        if prec == 0 || prec > cap {
            return Err(CartanError::InvalidInput(format!(
                "precision {} out of range 1..={} for p = {}",
                prec, cap, p
            )));
        }
        let (eps, e) = if p == 2 {
            (5, 1)
        } else {
            ((2..).find(|&a| !is_square_mod(a, p)).unwrap(), 0)
        };
        Ok(Field { p, prec, eps, e })
    }

    pub fn k(&self, n: i64) -> PadicNum {
        PadicNum::from_i64(self.p, n, self.prec)
    }

    pub fn k_frac(&self, num: i64, den: i64) -> PadicNum {
        PadicNum::from_frac(self.p, num, den, self.prec)
    }

    /// `(eps - 1) / 4`, so that `omega^2 = omega + delta`.
    pub fn delta(&self) -> PadicNum {
        self.k_frac(self.eps - 1, 4)
    }

    pub fn is_dyadic(&self) -> bool {
        self.p == 2
    }
}

/// `a + b*omega` with `omega = (1 + sqrt(eps)) / 2`, an integral basis of `O_{k'}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadExt {
    pub f: Field,
    pub a: PadicNum,
    pub b: PadicNum,
}

impl QuadExt {
    pub fn new(f: Field, a: PadicNum, b: PadicNum) -> Self {
        QuadExt { f, a, b }
    }

    pub fn zero(f: Field) -> Self {
        Self::new(f, PadicNum::zero(f.p), PadicNum::zero(f.p))
    }

    pub fn from_k(f: Field, a: PadicNum) -> Self {
        Self::new(f, a, PadicNum::zero(f.p))
    }

    pub fn from_int(f: Field, n: i64) -> Self {
        Self::from_k(f, f.k(n))
    }

    pub fn one(f: Field) -> Self {
        Self::from_int(f, 1)
    }

    pub fn omega(f: Field) -> Self {
        Self::new(f, PadicNum::zero(f.p), f.k(1))
    }

    pub fn from_ints(f: Field, a: i64, b: i64) -> Self {
        Self::new(f, f.k(a), f.k(b))
    }

    /// `sqrt(eps) = 2*omega - 1`.
    pub fn sqrt_eps(f: Field) -> Self {
        Self::from_ints(f, -1, 2)
    }

    /// `pi^k` with `pi = p`.
    pub fn pi_pow(f: Field, k: i32) -> Self {
        Self::from_k(f, PadicNum::from_parts(f.p, k, 1, f.prec))
    }

    pub fn add(&self, o: &QuadExt) -> QuadExt {
        Self::new(self.f, self.a.add(&o.a), self.b.add(&o.b))
    }

    pub fn sub(&self, o: &QuadExt) -> QuadExt {
        Self::new(self.f, self.a.sub(&o.a), self.b.sub(&o.b))
    }

    pub fn neg(&self) -> QuadExt {
        Self::new(self.f, self.a.neg(), self.b.neg())
    }

    pub fn mul(&self, o: &QuadExt) -> QuadExt {
        let bd = self.b.mul(&o.b);
        let a = self.a.mul(&o.a).add(&bd.mul(&self.f.delta()));
        let b = self.a.mul(&o.b).add(&self.b.mul(&o.a)).add(&bd);
        Self::new(self.f, a, b)
    }

    pub fn scale(&self, c: &PadicNum) -> QuadExt {
        Self::new(self.f, self.a.mul(c), self.b.mul(c))
    }

    pub fn shift(&self, k: i32) -> QuadExt {
        Self::new(self.f, self.a.shift(k), self.b.shift(k))
    }

    /// Galois conjugate; `omega* = 1 - omega`.
    pub fn conj(&self) -> QuadExt {
        Self::new(self.f, self.a.add(&self.b), self.b.neg())
    }

    pub fn norm(&self) -> PadicNum {
        self.a
            .mul(&self.a)
            .add(&self.a.mul(&self.b))
            .sub(&self.f.delta().mul(&self.b.mul(&self.b)))
    }

    pub fn trace(&self) -> PadicNum {
        self.a.add(&self.a).add(&self.b)
    }

    pub fn is_negligible(&self) -> bool {
        self.a.is_negligible() && self.b.is_negligible()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.a.is_exact_zero() && self.b.is_exact_zero()
    }

    /// Absolute precision, `None` for an exact zero.
    pub fn abs_prec(&self) -> Option<i32> {
        match (self.a.abs_prec(), self.b.abs_prec()) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    }

    /// `min(v(a), v(b))`, the valuation in the unramified extension; `None`
    /// when it cannot be determined at the available precision.
    pub fn valuation(&self) -> Option<i32> {
        let known = [self.a.valuation(), self.b.valuation()]
            .into_iter()
            .flatten()
            .min()?;
        let blocked = [self.a, self.b]
            .iter()
            .any(|c| !c.is_exact_zero() && c.is_negligible() && c.abs_prec().unwrap() <= known);
        (!blocked).then_some(known)
    }

    pub fn inv(&self) -> Result<QuadExt, CartanError> {
        let n = self.norm();
        if n.is_negligible() {
            return Err(CartanError::PrecisionExhausted(
                "inverse of an element indistinguishable from 0".into(),
            ));
        }
        Ok(self.conj().scale(&n.inv()))
    }

    pub fn div(&self, o: &QuadExt) -> Result<QuadExt, CartanError> {
        Ok(self.mul(&o.inv()?))
    }

    /// Real part as an element of `k`, if `self` lies in `k`.
    pub fn as_k(&self) -> Option<PadicNum> {
        self.b.is_negligible().then_some(self.a)
    }

    /// Residue in `F_p x F_p` of an integral element.
    pub fn residue(&self) -> Option<(u64, u64)> {
        Some((self.a.residue()?, self.b.residue()?))
    }

    pub fn eq_approx(&self, o: &QuadExt) -> bool {
        self.sub(o).is_negligible()
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; {}]", self.a, self.b)
    }
}

/// Solves `N(alpha) = w` for a unit `w` of `O_k` by a residue search followed
/// by Newton steps `alpha <- alpha (1 + d omega)`, `d = w / N(alpha) - 1`.
pub fn solve_norm(f: Field, w: &PadicNum) -> Result<QuadExt, CartanError> {
    if w.valuation() != Some(0) {
        return Err(CartanError::InvalidInput(format!(
            "norm equation needs a unit right-hand side, got {}",
            w
        )));
    }
    let p = f.p as i64;
    let target = w.residue().unwrap();
    let mut alpha = None;
    'search: for a in 0..p {
        for b in 0..p {
            let c = QuadExt::from_ints(f, a, b);
            if c.norm().residue() == Some(target) {
                alpha = Some(c);
                break 'search;
            }
        }
    }
    let mut alpha = alpha.expect("norm map is onto the residue units");
    for _ in 0..12 {
        let d = w.div(&alpha.norm()).sub(&f.k(1));
        if d.is_negligible() {
            return Ok(alpha);
        }
        let step = QuadExt::one(f).add(&QuadExt::omega(f).scale(&d));
        alpha = alpha.mul(&step);
    }
    Err(CartanError::PrecisionExhausted("norm equation did not converge".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_constants() {
        let f2 = Field::new(2, 40).unwrap();
        assert_eq!((f2.eps, f2.e), (5, 1));
        let f3 = Field::new(3, 20).unwrap();
        assert_eq!(f3.eps, 2);
        let f7 = Field::new(7, 15).unwrap();
        assert_eq!(f7.eps, 3);
        assert!(Field::new(4, 10).is_err());
    }

    #[test]
    fn sqrt_eps_squares_to_eps() {
        for p in [2, 3, 5] {
            let f = Field::new(p, 12).unwrap();
            let s = QuadExt::sqrt_eps(f);
            assert!(s.mul(&s).eq_approx(&QuadExt::from_int(f, f.eps)));
            assert!(s.conj().eq_approx(&s.neg()));
            assert_eq!(QuadExt::omega(f).trace(), f.k(1));
            let one_minus_eps = QuadExt::from_int(f, 1 - f.eps);
            assert_eq!(one_minus_eps.valuation(), Some(2 * f.e as i32));
        }
    }

    #[test]
    fn norm_equation_solutions() {
        for p in [2, 3, 5] {
            let f = Field::new(p, 16).unwrap();
            for w in [1i64, -1, 3, 7, 11] {
                let w = f.k(w);
                if w.valuation() != Some(0) {
                    continue;
                }
                let a = solve_norm(f, &w).unwrap();
                assert!(a.norm().sub(&w).is_negligible());
            }
        }
    }

    #[test]
    fn inverse_and_conj() {
        let f = Field::new(3, 16).unwrap();
        let x = QuadExt::from_ints(f, 4, 9).shift(-2);
        let y = x.inv().unwrap();
        assert!(x.mul(&y).eq_approx(&QuadExt::one(f)));
        assert!(x.mul(&x.conj()).eq_approx(&QuadExt::from_k(f, x.norm())));
    }
}
