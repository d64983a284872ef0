use std::fmt;

/// Largest `k` with `p^k <= 2^62`.
pub fn max_precision(p: u64) -> u32 {
    let mut k = 0;
    let mut acc: u128 = 1;
    while acc * p as u128 <= 1u128 << 62 {
        acc *= p as u128;
        k += 1;
    }
    k
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn pow(p: u64, k: u32) -> u128 {
    (p as u128).pow(k)
}

fn mod_inv(a: u128, m: u128) -> u128 {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "not invertible");
    t0.rem_euclid(m as i128) as u128
}

/// Element of `Q_p` known modulo `p^{val + rel}`, stored as `p^val * unit`.
///
/// `rel = 0` encodes `O(p^val)`: a value indistinguishable from zero at the
/// available precision. Exact zeros are tracked separately so that literal
/// zero entries never degrade precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PadicNum {
    p: u64,
    val: i32,
    rel: u32,
    unit: u64,
    exact_zero: bool,
}

impl PadicNum {
    pub fn zero(p: u64) -> Self {
        PadicNum {
            p,
            val: 0,
            rel: 0,
            unit: 0,
            exact_zero: true,
        }
    }

    /// `O(p^a)`.
    pub fn big_o(p: u64, a: i32) -> Self {
        PadicNum {
            p,
            val: a,
            rel: 0,
            unit: 0,
            exact_zero: false,
        }
    }

    /// `p^val * unit` with relative precision `prec`; `unit` need not be
    /// coprime to `p`.
    pub fn from_parts(p: u64, val: i32, unit: i64, prec: u32) -> Self {
        if unit == 0 {
            return Self::zero(p);
        }
        let mut u = unit;
        let mut v = val;
        while u % p as i64 == 0 {
            u /= p as i64;
            v += 1;
        }
        let m = pow(p, prec) as i128;
        PadicNum {
            p,
            val: v,
            rel: prec,
            unit: (u as i128).rem_euclid(m) as u64,
            exact_zero: false,
        }
    }

    pub fn from_i64(p: u64, n: i64, prec: u32) -> Self {
        Self::from_parts(p, 0, n, prec)
    }

    pub fn from_frac(p: u64, num: i64, den: i64, prec: u32) -> Self {
        Self::from_i64(p, num, prec).div(&Self::from_i64(p, den, prec))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_exact_zero(&self) -> bool {
        self.exact_zero
    }

    /// True when the value is zero to the available precision.
    pub fn is_negligible(&self) -> bool {
        self.exact_zero || self.rel == 0
    }

    /// Valuation, if it can be told apart from zero.
    pub fn valuation(&self) -> Option<i32> {
        if self.is_negligible() {
            None
        } else {
            Some(self.val)
        }
    }

    /// Absolute precision `a` (the value is known mod `p^a`); `None` if exact zero.
    pub fn abs_prec(&self) -> Option<i32> {
        if self.exact_zero {
            None
        } else {
            Some(self.val + self.rel as i32)
        }
    }

    pub fn rel_prec(&self) -> u32 {
        self.rel
    }

    /// `(val, unit)`, or `None` when negligible.
    pub fn parts(&self) -> Option<(i32, u64)> {
        self.valuation().map(|v| (v, self.unit))
    }

    /// Residue of a unit-or-integral value modulo `p`.
    pub fn residue(&self) -> Option<u64> {
        match self.valuation() {
            None => (self.exact_zero || self.val >= 1).then_some(0),
            Some(v) if v > 0 => Some(0),
            Some(0) => Some(self.unit % self.p),
            Some(_) => None,
        }
    }

    fn normalize(p: u64, mut v: i32, mut k: u32, mut s: u128) -> Self {
        if s == 0 {
            return Self::big_o(p, v + k as i32);
        }
        while s % p as u128 == 0 {
            s /= p as u128;
            v += 1;
            k -= 1;
        }
        PadicNum {
            p,
            val: v,
            rel: k,
            unit: s as u64,
            exact_zero: false,
        }
    }

    pub fn add(&self, o: &PadicNum) -> PadicNum {
        if self.exact_zero {
            return *o;
        }
        if o.exact_zero {
            return *self;
        }
        let abs = self.abs_prec().unwrap().min(o.abs_prec().unwrap());
        let vmin = self.val.min(o.val);
        if abs <= vmin {
            return Self::big_o(self.p, abs);
        }
        let k = (abs - vmin) as u32;
        let m = pow(self.p, k);
        let term = |x: &PadicNum| -> u128 {
            if x.rel == 0 {
                return 0;
            }
            let sh = (x.val - vmin) as u32;
            if sh >= k {
                0
            } else {
                (x.unit as u128 % m) * pow(x.p, sh) % m
            }
        };
        Self::normalize(self.p, vmin, k, (term(self) + term(o)) % m)
    }

    pub fn neg(&self) -> PadicNum {
        if self.is_negligible() {
            return *self;
        }
        let m = pow(self.p, self.rel);
        PadicNum {
            unit: ((m - self.unit as u128) % m) as u64,
            ..*self
        }
    }

    pub fn sub(&self, o: &PadicNum) -> PadicNum {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &PadicNum) -> PadicNum {
        if self.exact_zero || o.exact_zero {
            return Self::zero(self.p);
        }
        if self.rel == 0 || o.rel == 0 {
            return Self::big_o(self.p, self.val + o.val);
        }
        let rel = self.rel.min(o.rel);
        let m = pow(self.p, rel);
        PadicNum {
            p: self.p,
            val: self.val + o.val,
            rel,
            unit: ((self.unit as u128 % m) * (o.unit as u128 % m) % m) as u64,
            exact_zero: false,
        }
    }

    /// Panics on a negligible value; callers check valuations first.
    pub fn inv(&self) -> PadicNum {
        assert!(!self.is_negligible(), "inverse of a value indistinguishable from 0");
        let m = pow(self.p, self.rel);
        PadicNum {
            p: self.p,
            val: -self.val,
            rel: self.rel,
            unit: mod_inv(self.unit as u128 % m, m) as u64,
            exact_zero: false,
        }
    }

    pub fn div(&self, o: &PadicNum) -> PadicNum {
        self.mul(&o.inv())
    }

    /// Multiply by `p^k`.
    pub fn shift(&self, k: i32) -> PadicNum {
        if self.exact_zero {
            return *self;
        }
        PadicNum {
            val: self.val + k,
            ..*self
        }
    }

    /// Reduce the relative precision to at most `rel`.
    pub fn truncate(&self, rel: u32) -> PadicNum {
        if self.is_negligible() || self.rel <= rel {
            return *self;
        }
        PadicNum {
            rel,
            unit: (self.unit as u128 % pow(self.p, rel)) as u64,
            ..*self
        }
    }

    /// Integer representative in `[0, p^k)` of an integral value mod `p^k`.
    pub fn residue_mod(&self, k: u32) -> Option<u128> {
        if self.exact_zero {
            return Some(0);
        }
        if self.abs_prec().unwrap() < k as i32 {
            return None;
        }
        if self.rel == 0 || self.val >= k as i32 {
            return Some(0);
        }
        if self.val < 0 {
            return None;
        }
        let m = pow(self.p, k);
        Some(self.unit as u128 * pow(self.p, self.val as u32) % m)
    }
}

impl fmt::Display for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact_zero {
            write!(f, "0")
        } else if self.rel == 0 {
            write!(f, "O({}^{})", self.p, self.val)
        } else {
            write!(f, "{},{}", self.val, self.unit)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_mod_p_power() {
        let p = 3;
        let a = PadicNum::from_i64(p, 18, 10);
        assert_eq!(a.valuation(), Some(2));
        let b = PadicNum::from_frac(p, 1, 2, 10);
        let c = a.mul(&b);
        assert_eq!(c, PadicNum::from_i64(p, 9, 10));
        let d = c.sub(&PadicNum::from_i64(p, 9, 10));
        assert!(d.is_negligible());
        assert_eq!(a.inv().mul(&a), PadicNum::from_i64(p, 1, 10));
        assert_eq!(max_precision(2), 62);
    }

    #[test]
    fn precision_tracking() {
        let p = 2;
        let a = PadicNum::from_i64(p, 1, 8);
        let b = PadicNum::from_i64(p, -1, 8);
        let s = a.add(&b);
        assert_eq!(s, PadicNum::big_o(2, 8));
        let tiny = PadicNum::from_parts(p, 20, 1, 8);
        assert_eq!(a.add(&tiny), a);
        assert!(PadicNum::zero(2).add(&a) == a);
    }
}
