//! Type-C Hall-Littlewood polynomials, the c-function, expansion in the
//! P-basis, and the inner product against `1/|c|^2` by torus quadrature.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::exact_arith::{
    exact_divide_by_factors, weyl_substitute, ArithError, MultiLaurent, RationalFn, Scalar,
};
use crate::weyl_roots::{
    enumerate_group, stabilizer_poincare_generic, Parity, RootDatum, Signature, SignedPermutation,
    WeylError,
};

#[derive(Debug, thiserror::Error)]
pub enum HlError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error("not W-invariant (witness {witness})")]
    NotInvariant { witness: SignedPermutation },
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("quadrature grid must be at least 8, got {0}")]
    GridTooSmall(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TSpec {
    pub t_short: Scalar,
    pub t_long: Scalar,
}

impl TSpec {
    pub fn new(t_short: Scalar, t_long: Scalar) -> Self {
        TSpec { t_short, t_long }
    }

    /// `t_short = -q^{-1}`; `t_long = q^{-1}` (even m) or `-q^{-2}` (odd m).
    pub fn spherical(parity: Parity) -> Self {
        let t_long = match parity {
            Parity::Even => Scalar::q_pow(-1),
            Parity::Odd => -&Scalar::q_pow(-2),
        };
        TSpec {
            t_short: -&Scalar::q_pow(-1),
            t_long,
        }
    }

    pub fn zero() -> Self {
        TSpec {
            t_short: Scalar::zero(),
            t_long: Scalar::zero(),
        }
    }

    pub fn for_root(&self, a: &[i32]) -> &Scalar {
        if RootDatum::is_long(a) {
            &self.t_long
        } else {
            &self.t_short
        }
    }
}

fn binomial(n: usize, a: &[i32], t: &Scalar) -> MultiLaurent {
    &MultiLaurent::one(n) - &MultiLaurent::monomial(n, a, t)
}

fn neg(a: &[i32]) -> Vec<i32> {
    a.iter().map(|x| -x).collect()
}

/// `c(z;{t}) = prod_{a > 0} (1 - t_a X^a) / (1 - X^a)`.
pub fn c_function(n: usize, t: &TSpec) -> RationalFn {
    let roots = RootDatum::new(n);
    let mut num = MultiLaurent::one(n);
    let mut den = MultiLaurent::one(n);
    for a in roots.positive() {
        num = &num * &binomial(n, a, t.for_root(a));
        den = &den * &binomial(n, a, &Scalar::one());
    }
    RationalFn::new(num, den).expect("nonzero denominator")
}

/// `Q_mu = sum_{sigma in W} sigma(X^{-mu} c(z;{t}))`.
pub fn q_poly(mu: &Signature, n: usize, t: &TSpec) -> Result<MultiLaurent, HlError> {
    if mu.n() != n {
        return Err(HlError::RankMismatch {
            expected: n,
            got: mu.n(),
        });
    }
    let mu = Signature::dominant(mu.entries().to_vec())?;
    let roots = RootDatum::new(n);
    let one = Scalar::one();
    // c = F0 / D with D = prod_{a > 0} (1 - X^a)(1 - X^{-a}) invariant under W.
    let mut f = MultiLaurent::x_mono(n, &neg(mu.entries()));
    let mut den_factors = Vec::new();
    for a in roots.positive() {
        f = &f * &binomial(n, a, t.for_root(a));
        f = &f * &binomial(n, &neg(a), &one);
        den_factors.push(binomial(n, a, &one));
        den_factors.push(binomial(n, &neg(a), &one));
    }
    let mut sum = MultiLaurent::zero(n);
    for s in enumerate_group(n)? {
        sum.add_assign_ref(&weyl_substitute(&f, s)?);
    }
    Ok(exact_divide_by_factors(&sum, &den_factors)?)
}

/// `W_mu({t})`, the Poincare polynomial of the stabilizer of `mu`.
pub fn stabilizer_weight(mu: &Signature, t: &TSpec) -> Result<Scalar, HlError> {
    Ok(stabilizer_poincare_generic(mu, &t.t_short, &t.t_long)?)
}

/// `P_mu = Q_mu / W_mu({t})`.
pub fn p_poly(mu: &Signature, n: usize, t: &TSpec) -> Result<MultiLaurent, HlError> {
    let q = q_poly(mu, n, t)?;
    let w = stabilizer_weight(mu, t)?;
    if w.is_zero() {
        return Err(ArithError::ZeroDenominator.into());
    }
    Ok(q.div_scalar_exact(&w)?)
}

/// Invariance under the generators `s_1..s_{n-1}, tau`.
pub fn check_invariant(f: &MultiLaurent) -> Result<(), HlError> {
    let n = f.n();
    let mut gens: Vec<SignedPermutation> = (0..n.saturating_sub(1))
        .map(|i| SignedPermutation::simple_transposition(n, i))
        .collect();
    gens.push(SignedPermutation::tau(n));
    for s in gens {
        if weyl_substitute(f, &s)? != *f {
            return Err(HlError::NotInvariant { witness: s });
        }
    }
    Ok(())
}

/// Dominant representative of the W-orbit of an exponent vector.
pub fn dominant_rep(a: &[i32]) -> Vec<i32> {
    let mut v: Vec<i32> = a.iter().map(|x| x.abs()).collect();
    v.sort_unstable_by(|x, y| y.cmp(x));
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PBasisExpansion {
    pub coeffs: BTreeMap<Signature, Scalar>,
}

impl PBasisExpansion {
    pub fn reconstruct(&self, n: usize, t: &TSpec) -> Result<MultiLaurent, HlError> {
        let mut acc = MultiLaurent::zero(n);
        for (mu, c) in &self.coeffs {
            acc.add_assign_ref(&p_poly(mu, n, t)?.scale(c));
        }
        Ok(acc)
    }
}

/// Greedy elimination from the lexicographically largest dominant exponent.
pub fn expand_in_p_basis(f: &MultiLaurent, n: usize, t: &TSpec) -> Result<PBasisExpansion, HlError> {
    if f.n() != n {
        return Err(HlError::RankMismatch {
            expected: n,
            got: f.n(),
        });
    }
    check_invariant(f)?;
    let mut rest = f.clone();
    let mut out = PBasisExpansion::default();
    while !rest.is_zero() {
        let top = rest
            .terms()
            .keys()
            .map(|a| dominant_rep(a))
            .max()
            .expect("nonzero");
        let c = rest.coeff(&top);
        let mu = Signature::dominant(top.clone())?;
        let p = p_poly(&mu, n, t)?;
        let lead = p.coeff(&top);
        let k = c.exact_div(&lead)?;
        rest = &rest - &p.scale(&k);
        out.coeffs.insert(mu, k);
    }
    Ok(out)
}

/// `1/|c(z;{t})|^2` on the unitary torus at a fixed numeric `q`.
#[derive(Clone, Debug)]
pub struct PlancherelDensity {
    roots: Vec<(Vec<i32>, f64)>,
    pub normalization: f64,
}

impl PlancherelDensity {
    /// Includes the constant `W_0({t}) / (2^n n!)`, so the total mass is 1.
    pub fn new(n: usize, t: &TSpec, q_val: f64) -> Result<Self, HlError> {
        let v = q_val.sqrt();
        let roots = RootDatum::new(n)
            .positive()
            .map(|a| (a.clone(), t.for_root(a).eval(v).re))
            .collect();
        let w0 = stabilizer_weight(&Signature::zero(n), t)?.eval(v).re;
        let order = (1u64 << n) as f64 * (1..=n as u64).product::<u64>() as f64;
        Ok(PlancherelDensity {
            roots,
            normalization: w0 / order,
        })
    }

    pub fn at(&self, x: &[Complex64]) -> Result<f64, ArithError> {
        let mut acc = self.normalization;
        for (a, ta) in &self.roots {
            let mut xa = Complex64::new(1.0, 0.0);
            for (xj, e) in x.iter().zip(a) {
                xa *= xj.powi(*e);
            }
            let den = (Complex64::new(1.0, 0.0) - xa * ta).norm_sqr();
            if den < crate::exact_arith::DEFAULT_POLE_THRESHOLD {
                return Err(ArithError::NearPole { magnitude: den });
            }
            acc *= (Complex64::new(1.0, 0.0) - xa).norm_sqr() / den;
        }
        Ok(acc)
    }
}

/// Trapezoid rule over the torus `X_j = exp(2 pi i k_j / grid)`, i.e.
/// `z_j = i theta_j` with `theta_j` uniform on `[0, 2 pi / log q)`.
/// Points are visited in lexicographic order so the sum is reproducible.
pub fn torus_quadrature<F>(n: usize, grid: usize, mut f: F) -> Result<Complex64, ArithError>
where
    F: FnMut(&[Complex64]) -> Result<Complex64, ArithError>,
{
    let roots: Vec<Complex64> = (0..grid)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * (k as f64 + 0.5) / grid as f64))
        .collect();
    let total = grid.pow(n as u32);
    let mut idx = vec![0usize; n];
    let mut x = vec![Complex64::new(1.0, 0.0); n];
    let mut acc = Complex64::new(0.0, 0.0);
    for _ in 0..total {
        for j in 0..n {
            x[j] = roots[idx[j]];
        }
        acc += f(&x)?;
        for j in (0..n).rev() {
            idx[j] += 1;
            if idx[j] < grid {
                break;
            }
            idx[j] = 0;
        }
    }
    Ok(acc / total as f64)
}

/// `<f, g> = int f conj(g) dmu` over the unitary torus.
pub fn inner_product_numeric(
    f: &MultiLaurent,
    g: &MultiLaurent,
    n: usize,
    t: &TSpec,
    q_val: f64,
    grid: usize,
) -> Result<Complex64, HlError> {
    if grid < 8 {
        return Err(HlError::GridTooSmall(grid));
    }
    let dens = PlancherelDensity::new(n, t, q_val)?;
    let fc = f.compile(q_val);
    let gc = g.compile(q_val);
    Ok(torus_quadrature(n, grid, |x| {
        Ok(fc.eval_at_x(x) * gc.eval_at_x(x).conj() * dens.at(x)?)
    })?)
}

/// `<P_mu, P_mu> = W_0({t}) / W_mu({t})`.
pub fn expected_norm(mu: &Signature, t: &TSpec) -> Result<(Scalar, Scalar), HlError> {
    let n = mu.n();
    Ok((
        stabilizer_weight(&Signature::zero(n), t)?,
        stabilizer_weight(mu, t)?,
    ))
}
