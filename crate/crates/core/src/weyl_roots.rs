//! The hyperoctahedral group `W = S_n x| {+-1}^n`, positive roots of type C,
//! signatures, and Poincare polynomials.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::exact_arith::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeylError {
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("not a signed permutation: {0}")]
    InvalidPermutation(String),
    #[error("signature {0:?} is not weakly decreasing with last part >= {1}")]
    NotDominant(Vec<i32>, i32),
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(m: usize) -> Parity {
        if m % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// `m' = [(m+1)/2]` for `m = 2n` or `2n+1`.
    pub fn m_prime(self, n: usize) -> usize {
        match self {
            Parity::Even => n,
            Parity::Odd => n + 1,
        }
    }
}

/// `e_i -> signs[i] * e_{perm[i]}` (0-based indices).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self, WeylError> {
        let n = perm.len();
        if signs.len() != n {
            return Err(WeylError::InvalidPermutation("length mismatch".into()));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(WeylError::InvalidPermutation(format!("{perm:?}")));
            }
            seen[p] = true;
        }
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(WeylError::InvalidPermutation(format!("signs {signs:?}")));
        }
        Ok(SignedPermutation { perm, signs })
    }

    pub fn identity(n: usize) -> Self {
        SignedPermutation {
            perm: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    /// Negation of the last coordinate.
    pub fn tau(n: usize) -> Self {
        let mut s = Self::identity(n);
        s.signs[n - 1] = -1;
        s
    }

    /// The transposition `(i i+1)`, 0-based.
    pub fn simple_transposition(n: usize, i: usize) -> Self {
        let mut s = Self::identity(n);
        s.perm.swap(i, i + 1);
        s
    }

    /// Negation of every coordinate (the longest element).
    pub fn longest(n: usize) -> Self {
        SignedPermutation {
            perm: (0..n).collect(),
            signs: vec![-1; n],
        }
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rank())
    }

    pub fn act(&self, a: &[i32]) -> Vec<i32> {
        let mut out = vec![0; a.len()];
        for i in 0..a.len() {
            out[self.perm[i]] = self.signs[i] as i32 * a[i];
        }
        out
    }

    pub fn act_complex(&self, z: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); z.len()];
        for i in 0..z.len() {
            out[self.perm[i]] = z[i] * self.signs[i] as f64;
        }
        out
    }

    /// `self o other`.
    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        let n = self.rank();
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for i in 0..n {
            let j = other.perm[i];
            perm[i] = self.perm[j];
            signs[i] = other.signs[i] * self.signs[j];
        }
        SignedPermutation { perm, signs }
    }

    pub fn inverse(&self) -> SignedPermutation {
        let n = self.rank();
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for i in 0..n {
            perm[self.perm[i]] = i;
            signs[self.perm[i]] = self.signs[i];
        }
        SignedPermutation { perm, signs }
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.rank())
            .map(|i| {
                let s = if self.signs[i] < 0 { "-" } else { "" };
                format!("{s}{}", self.perm[i] + 1)
            })
            .collect();
        write!(f, "[{}]", parts.join(","))
    }
}

fn permutations_lex(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

fn build_group(n: usize) -> Vec<SignedPermutation> {
    let mut out = Vec::with_capacity((1 << n) * (1..=n).product::<usize>());
    for perm in permutations_lex(n) {
        for mask in 0u32..(1 << n) {
            let signs = (0..n)
                .map(|i| if mask >> (n - 1 - i) & 1 == 1 { -1 } else { 1 })
                .collect();
            out.push(SignedPermutation {
                perm: perm.clone(),
                signs,
            });
        }
    }
    out
}

const CACHED_RANKS: usize = 4;

/// All `2^n n!` elements, lexicographic on (perm, signs) with `+` before `-`.
pub fn enumerate_group(n: usize) -> Result<&'static [SignedPermutation], WeylError> {
    static CACHE: [OnceLock<Vec<SignedPermutation>>; CACHED_RANKS] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    if n == 0 {
        return Err(WeylError::ZeroRank);
    }
    if n > CACHED_RANKS {
        return Ok(Box::leak(build_group(n).into_boxed_slice()));
    }
    Ok(CACHE[n - 1].get_or_init(|| build_group(n)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    pub n: usize,
    pub short_pos: Vec<Vec<i32>>,
    pub long_pos: Vec<Vec<i32>>,
}

impl RootDatum {
    pub fn new(n: usize) -> Self {
        let unit = |i: usize| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        };
        let mut minus = Vec::new();
        let mut plus = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut a = unit(i);
                a[j] = -1;
                minus.push(a);
                let mut b = unit(i);
                b[j] = 1;
                plus.push(b);
            }
        }
        let mut short_pos = minus;
        short_pos.extend(plus);
        let long_pos = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 2;
                v
            })
            .collect();
        RootDatum {
            n,
            short_pos,
            long_pos,
        }
    }

    /// Short roots first, then long.
    pub fn positive(&self) -> impl Iterator<Item = &Vec<i32>> {
        self.short_pos.iter().chain(self.long_pos.iter())
    }

    pub fn is_long(a: &[i32]) -> bool {
        a.iter().filter(|x| **x != 0).count() == 1
    }
}

/// Positive iff the first nonzero coordinate is positive.
pub fn is_positive(a: &[i32]) -> bool {
    a.iter().find(|x| **x != 0).is_some_and(|x| *x > 0)
}

/// `{a in Sigma^+ : sigma(a) in -Sigma^+}`.
pub fn inversion_set(s: &SignedPermutation, roots: &RootDatum) -> Result<Vec<Vec<i32>>, WeylError> {
    if s.rank() != roots.n {
        return Err(WeylError::RankMismatch {
            expected: roots.n,
            got: s.rank(),
        });
    }
    Ok(roots
        .positive()
        .filter(|a| !is_positive(&s.act(a)))
        .cloned()
        .collect())
}

/// Word length in the generators `s_1..s_{n-1}, tau`, by breadth-first search.
pub fn coxeter_lengths(n: usize) -> Result<HashMap<SignedPermutation, usize>, WeylError> {
    if n == 0 {
        return Err(WeylError::ZeroRank);
    }
    let mut gens: Vec<SignedPermutation> = (0..n - 1)
        .map(|i| SignedPermutation::simple_transposition(n, i))
        .collect();
    gens.push(SignedPermutation::tau(n));
    let mut dist = HashMap::new();
    let id = SignedPermutation::identity(n);
    dist.insert(id.clone(), 0);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        let d = dist[&g];
        for s in &gens {
            let h = g.compose(s);
            if !dist.contains_key(&h) {
                dist.insert(h.clone(), d + 1);
                queue.push_back(h);
            }
        }
    }
    Ok(dist)
}

/// `lambda_1 >= ... >= lambda_n >= -floor`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    entries: Vec<i32>,
    floor: i32,
}

impl Signature {
    pub fn new(entries: Vec<i32>, floor: i32) -> Result<Self, WeylError> {
        let ok = entries.windows(2).all(|w| w[0] >= w[1])
            && entries.last().map_or(true, |l| *l >= -floor);
        if !ok || entries.is_empty() {
            return Err(WeylError::NotDominant(entries, -floor));
        }
        Ok(Signature { entries, floor })
    }

    /// A dominant weight (`mu_n >= 0`).
    pub fn dominant(entries: Vec<i32>) -> Result<Self, WeylError> {
        Self::new(entries, 0)
    }

    pub fn zero(n: usize) -> Self {
        Signature {
            entries: vec![0; n],
            floor: 0,
        }
    }

    pub fn entries(&self) -> &[i32] {
        &self.entries
    }

    pub fn floor(&self) -> i32 {
        self.floor
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn size(&self) -> i32 {
        self.entries.iter().sum()
    }

    /// Add `k` to every part; the floor moves accordingly.
    pub fn shifted(&self, k: i32) -> Signature {
        Signature {
            entries: self.entries.iter().map(|x| x + k).collect(),
            floor: self.floor - k,
        }
    }

    /// `n_l = #{i : mu_i = l}`.
    pub fn multiplicities(&self) -> BTreeMap<i32, usize> {
        let mut m = BTreeMap::new();
        for x in &self.entries {
            *m.entry(*x).or_insert(0) += 1;
        }
        m
    }

    /// All signatures with floor `floor` and parts in `[-floor, max_part]`.
    pub fn enumerate_box(n: usize, floor: i32, max_part: i32) -> Vec<Signature> {
        fn rec(n: usize, lo: i32, hi: i32, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            for x in lo..=hi {
                cur.push(x);
                rec(n, lo, x, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, -floor, max_part, &mut Vec::new(), &mut out);
        out.into_iter()
            .map(|entries| Signature { entries, floor })
            .collect()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.entries.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// `w_m(t) = prod_{i=1}^m (1 - t^i)`.
pub fn poincare_w(m_size: usize, t: &Scalar) -> Scalar {
    let mut acc = Scalar::one();
    let mut tp = Scalar::one();
    for _ in 0..m_size {
        tp = &tp * t;
        acc = &acc * &(&Scalar::one() - &tp);
    }
    acc
}

/// The product `w~_mu(t)` of Poincare factors attached to the multiplicities
/// of `mu`. For odd matrix size the zero block always contributes
/// `w_{n_0+1} w_{n_0}`, including `n_0 = 0`.
pub fn w_tilde(mu: &Signature, parity: Parity, t: &Scalar) -> Result<Scalar, WeylError> {
    check_dominant(mu)?;
    let mult = mu.multiplicities();
    let n0 = mult.get(&0).copied().unwrap_or(0);
    let mut acc = match parity {
        Parity::Even => poincare_w(n0, t).pow(2),
        Parity::Odd => &poincare_w(n0 + 1, t) * &poincare_w(n0, t),
    };
    for (l, k) in &mult {
        if *l >= 1 {
            acc = &acc * &poincare_w(*k, t);
        }
    }
    Ok(acc)
}

fn check_dominant(mu: &Signature) -> Result<(), WeylError> {
    if mu.entries.last().is_some_and(|x| *x < 0) {
        return Err(WeylError::NotDominant(mu.entries.clone(), 0));
    }
    Ok(())
}

/// `W_mu = w~_mu(t) / (1 - t)^{m'}`.
pub fn stabilizer_poincare(mu: &Signature, parity: Parity, t: &Scalar) -> Result<Scalar, WeylError> {
    let w = w_tilde(mu, parity, t)?;
    let d = (&Scalar::one() - t).pow(parity.m_prime(mu.n()) as u32);
    Ok(w.exact_div(&d).expect("(1-t)^{m'} divides w~_mu"))
}

/// Two-parameter Poincare polynomial of the stabilizer of `mu` in `W`
/// (type `B_{n_0} x prod A_{n_l - 1}`).
pub fn stabilizer_poincare_generic(
    mu: &Signature,
    t_short: &Scalar,
    t_long: &Scalar,
) -> Result<Scalar, WeylError> {
    check_dominant(mu)?;
    let one = Scalar::one();
    // [k]_t = 1 + t + ... + t^{k-1}
    let qint = |k: usize| {
        let mut s = Scalar::zero();
        let mut tp = Scalar::one();
        for _ in 0..k {
            s.add_assign_ref(&tp);
            tp = &tp * t_short;
        }
        s
    };
    let mut acc = one.clone();
    for (l, k) in mu.multiplicities() {
        if l == 0 {
            let mut tp = one.clone();
            for i in 1..=k {
                acc = &(&acc * &qint(i)) * &(&one + &(t_long * &tp));
                tp = &tp * t_short;
            }
        } else {
            for i in 1..=k {
                acc = &acc * &qint(i);
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_orders() {
        assert_eq!(enumerate_group(1).unwrap().len(), 2);
        assert_eq!(enumerate_group(2).unwrap().len(), 8);
        assert_eq!(enumerate_group(3).unwrap().len(), 48);
        assert!(enumerate_group(0).is_err());
        let g = enumerate_group(3).unwrap();
        let mut sorted = g.to_vec();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 48);
    }

    #[test]
    fn inversion_examples() {
        let r1 = RootDatum::new(1);
        assert!(inversion_set(&SignedPermutation::identity(1), &r1).unwrap().is_empty());
        assert_eq!(inversion_set(&SignedPermutation::tau(1), &r1).unwrap(), vec![vec![2]]);
        let r2 = RootDatum::new(2);
        let best = enumerate_group(2)
            .unwrap()
            .iter()
            .max_by_key(|s| inversion_set(s, &r2).unwrap().len())
            .unwrap();
        assert_eq!(inversion_set(best, &r2).unwrap().len(), 4);
        assert_eq!(*best, SignedPermutation::longest(2));
    }

    #[test]
    fn root_counts() {
        for n in 1..5 {
            let r = RootDatum::new(n);
            assert_eq!(r.short_pos.len(), n * (n - 1));
            assert_eq!(r.long_pos.len(), n);
        }
    }

    #[test]
    fn length_equals_inversions() {
        for n in 1..=3 {
            let r = RootDatum::new(n);
            let lens = coxeter_lengths(n).unwrap();
            assert_eq!(lens.len(), enumerate_group(n).unwrap().len());
            for (s, l) in lens {
                assert_eq!(inversion_set(&s, &r).unwrap().len(), l, "{s}");
            }
        }
    }

    #[test]
    fn poincare_small() {
        let t = -&Scalar::q_pow(-1);
        assert!(poincare_w(0, &t).is_one());
        assert_eq!(poincare_w(1, &t), &Scalar::one() + &Scalar::q_pow(-1));
        let want = &(&Scalar::one() + &Scalar::q_pow(-1)) * &(&Scalar::one() - &Scalar::q_pow(-2));
        assert_eq!(poincare_w(2, &t), want);
    }

    #[test]
    fn stabilizer_examples() {
        let t = -&Scalar::q_pow(-1);
        let w0 = stabilizer_poincare(&Signature::zero(1), Parity::Even, &t).unwrap();
        assert_eq!(w0, &Scalar::one() + &Scalar::q_pow(-1));
        let w1 = stabilizer_poincare(&Signature::dominant(vec![1]).unwrap(), Parity::Even, &t).unwrap();
        assert!(w1.is_one());
        let distinct = Signature::dominant(vec![3, 2, 1]).unwrap();
        assert!(stabilizer_poincare(&distinct, Parity::Even, &t).unwrap().is_one());
    }

    #[test]
    fn spherical_weights_match_two_parameter_formula() {
        let ts = -&Scalar::q_pow(-1);
        for n in 1..=3 {
            for (parity, tl) in [(Parity::Even, Scalar::q_pow(-1)), (Parity::Odd, -&Scalar::q_pow(-2))] {
                for mu in Signature::enumerate_box(n, 0, 2) {
                    let a = stabilizer_poincare(&mu, parity, &ts).unwrap();
                    let b = stabilizer_poincare_generic(&mu, &ts, &tl).unwrap();
                    assert_eq!(a, b, "{mu} {parity:?}");
                }
            }
        }
    }

    #[test]
    fn group_law() {
        let g = enumerate_group(2).unwrap();
        let a = [3, -5];
        for s in g {
            for r in g {
                assert_eq!(r.act(&s.act(&a)), r.compose(s).act(&a));
            }
            assert!(s.compose(&s.inverse()).is_identity());
        }
    }
}
