//! Finitely supported K-invariant functions, orbit volumes, the spherical
//! Fourier transform, and numerical Plancherel / inversion / rank checks.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::exact_arith::{MultiLaurent, NumericLaurent, Scalar};
use crate::hall_littlewood::{p_poly, torus_quadrature, PlancherelDensity};
use crate::spherical::{psi_parts, SpaceParams, SphError, ZetaPoint};
use crate::weyl_roots::{w_tilde, Signature};

/// Finite linear combination of orbit indicators `ch_lambda`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchwartzFn {
    pub params: SpaceParams,
    support: BTreeMap<Vec<i32>, Complex64>,
}

impl SchwartzFn {
    pub fn zero(params: SpaceParams) -> Self {
        SchwartzFn {
            params,
            support: BTreeMap::new(),
        }
    }

    pub fn indicator(params: SpaceParams, lambda: &[i32]) -> Result<Self, SphError> {
        let mut f = Self::zero(params);
        f.add_term(lambda, Complex64::new(1.0, 0.0))?;
        Ok(f)
    }

    pub fn add_term(&mut self, lambda: &[i32], c: Complex64) -> Result<(), SphError> {
        self.params.signature(lambda)?;
        let slot = self.support.entry(lambda.to_vec()).or_insert(Complex64::new(0.0, 0.0));
        *slot += c;
        if *slot == Complex64::new(0.0, 0.0) {
            self.support.remove(lambda);
        }
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &Complex64)> {
        self.support.iter()
    }

    pub fn value(&self, lambda: &[i32]) -> Complex64 {
        self.support.get(lambda).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn scale(&self, c: Complex64) -> SchwartzFn {
        let mut out = Self::zero(self.params);
        for (l, v) in &self.support {
            out.add_term(l, v * c).expect("validated");
        }
        out
    }

    pub fn add(&self, o: &SchwartzFn) -> SchwartzFn {
        let mut out = self.clone();
        for (l, v) in &o.support {
            out.add_term(l, *v).expect("validated");
        }
        out
    }
}

fn shifted(lambda: &[i32], p: &SpaceParams) -> Signature {
    Signature::dominant(lambda.iter().map(|x| x + p.e as i32).collect()).expect("validated")
}

/// `v(K x_lambda) = q^{-2<lambda+e, Re z_0>} w~_0 / w~_{lambda+e}`.
pub fn volume_orbit(lambda: &[i32], p: &SpaceParams) -> Result<Scalar, SphError> {
    p.signature(lambda)?;
    let mu = shifted(lambda, p);
    let t = -&Scalar::q_pow(-1);
    let w0 = w_tilde(&Signature::zero(p.n), p.parity, &t)?;
    let wm = w_tilde(&mu, p.parity, &t)?;
    let two_re: i32 = mu
        .entries()
        .iter()
        .zip(ZetaPoint::twice_real(p))
        .map(|(a, b)| a * b)
        .sum();
    // q^{-2<mu, Re z_0>} = v^{-2 <mu, 2 Re z_0>}
    Ok(&Scalar::v_pow(-2 * two_re) * &w0.exact_div(&wm)?)
}

/// One P-basis term of a Fourier image: `scalar * coeff * P_mu`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierTerm {
    pub scalar: Scalar,
    pub coeff: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FourierImage {
    pub params: SpaceParams,
    pub expansion: BTreeMap<Signature, FourierTerm>,
}

impl FourierImage {
    /// Coefficients on `P_mu` at a numeric `q`.
    pub fn numeric(&self, q_val: f64) -> BTreeMap<Signature, Complex64> {
        let v = q_val.sqrt();
        self.expansion
            .iter()
            .map(|(mu, t)| (mu.clone(), t.scalar.eval(v) * t.coeff))
            .collect()
    }

    pub fn compile(&self, q_val: f64) -> Result<CompiledFourier, SphError> {
        let t = self.params.t_spec();
        let mut terms = Vec::new();
        for (mu, c) in self.numeric(q_val) {
            terms.push((c, p_poly(&mu, self.params.n, &t)?.compile(q_val)));
        }
        Ok(CompiledFourier { terms })
    }
}

pub struct CompiledFourier {
    terms: Vec<(Complex64, NumericLaurent)>,
}

impl CompiledFourier {
    pub fn eval_at_x(&self, x: &[Complex64]) -> Complex64 {
        self.terms.iter().map(|(c, p)| c * p.eval_at_x(x)).sum()
    }
}

/// `F(ch_lambda) = q^{<mu,z_0>} (w~_mu / w~_0) v(K x_lambda) P_mu`, `mu = lambda+e`,
/// which simplifies to `q^{<mu,z_0> - 2<mu, Re z_0>} P_mu`.
pub fn fourier(phi: &SchwartzFn) -> Result<FourierImage, SphError> {
    let p = &phi.params;
    let mut expansion = BTreeMap::new();
    for (lambda, c) in phi.terms() {
        let (_, num, den) = psi_parts(lambda, p)?;
        let vol = volume_orbit(lambda, p)?;
        let scalar = (&num * &vol).exact_div(&den)?;
        expansion.insert(
            shifted(lambda, p),
            FourierTerm {
                scalar,
                coeff: *c,
            },
        );
    }
    Ok(FourierImage {
        params: *p,
        expansion,
    })
}

/// `(sum phi conj(psi) v(K x), int F(phi) conj(F(psi)) dmu)`.
pub fn plancherel_check(
    phi: &SchwartzFn,
    psi: &SchwartzFn,
    q_val: f64,
    grid: usize,
) -> Result<(Complex64, Complex64), SphError> {
    let p = &phi.params;
    let v = q_val.sqrt();
    let mut lhs = Complex64::new(0.0, 0.0);
    for (l, a) in phi.terms() {
        let b = psi.value(l);
        lhs += a * b.conj() * volume_orbit(l, p)?.eval(v);
    }
    let fa = fourier(phi)?.compile(q_val)?;
    let fb = fourier(psi)?.compile(q_val)?;
    let dens = PlancherelDensity::new(p.n, &p.t_spec(), q_val)?;
    let rhs = torus_quadrature(p.n, grid, |x| {
        Ok(fa.eval_at_x(x) * fb.eval_at_x(x).conj() * dens.at(x)?)
    })?;
    Ok((lhs, rhs))
}

/// Reconstruct `phi(x_lambda)` as `int F(phi)(z) conj(Psi(x_lambda; z)) dmu(z)`.
pub fn inversion_check(
    phi: &SchwartzFn,
    lambda_eval: &[i32],
    q_val: f64,
    grid: usize,
) -> Result<(Complex64, Complex64), SphError> {
    let p = &phi.params;
    let (poly, num, den) = psi_parts(lambda_eval, p)?;
    let v = q_val.sqrt();
    let psi_c = num.eval(v) / den.eval(v);
    let psi_poly = poly.compile(q_val);
    let fa = fourier(phi)?.compile(q_val)?;
    let dens = PlancherelDensity::new(p.n, &p.t_spec(), q_val)?;
    let rec = torus_quadrature(p.n, grid, |x| {
        Ok(fa.eval_at_x(x) * (psi_c * psi_poly.eval_at_x(x)).conj() * dens.at(x)?)
    })?;
    Ok((rec, phi.value(lambda_eval)))
}

/// The `2^n` signatures `lambda` with `lambda + e = sum_i eps_i varpi_i`,
/// `varpi_i = (1,..,1,0,..,0)` with `i` ones and `eps in {0,1}^n`.
pub fn rank_basis(p: &SpaceParams) -> Vec<Vec<i32>> {
    let n = p.n;
    (0u32..(1 << n))
        .map(|mask| {
            (0..n)
                .map(|i| {
                    let mu_i = (i..n).filter(|j| mask >> j & 1 == 1).count() as i32;
                    mu_i - p.e as i32
                })
                .collect()
        })
        .collect()
}

/// `|det [Psi(x_{lambda_j}; z + u_k)]|` with rows scaled to unit max-norm,
/// over the shifts `u in {0, pi i / log q}^n`.
pub fn rank_basis_check(p: &SpaceParams, q_val: f64, z: &[Complex64]) -> Result<f64, SphError> {
    let n = p.n;
    let lq = q_val.ln();
    let shifts: Vec<Vec<Complex64>> = (0u32..(1 << n))
        .map(|mask| {
            (0..n)
                .map(|i| {
                    let u = if mask >> i & 1 == 1 { PI / lq } else { 0.0 };
                    z[i] + Complex64::new(0.0, u)
                })
                .collect()
        })
        .collect();
    let v = q_val.sqrt();
    let mut rows = Vec::new();
    for lambda in rank_basis(p) {
        let (poly, num, den) = psi_parts(&lambda, p)?;
        let c = num.eval(v) / den.eval(v);
        let row: Vec<Complex64> = shifts.iter().map(|zz| c * poly.eval_complex(q_val, zz)).collect();
        let scale = row.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return Ok(0.0);
        }
        rows.push(row.into_iter().map(|x| x / scale).collect::<Vec<_>>());
    }
    Ok(determinant(rows).norm())
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(mut a: Vec<Vec<Complex64>>) -> Complex64 {
    let n = a.len();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .unwrap();
        if a[piv][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                let t = a[col][c];
                a[r][c] -= f * t;
            }
        }
    }
    det
}

/// `|I(grid) - I(grid/2)|` for a quadrature value, as a convergence diagnostic.
pub fn grid_doubling_delta<F>(grid: usize, mut f: F) -> Result<f64, SphError>
where
    F: FnMut(usize) -> Result<Complex64, SphError>,
{
    Ok((f(grid)? - f(grid / 2)?).norm())
}

/// The Laurent polynomial `F(phi)` with exact scalars, for a real-coefficient `phi`.
pub fn fourier_exact(phi: &SchwartzFn) -> Result<MultiLaurent, SphError> {
    let img = fourier(phi)?;
    let t = phi.params.t_spec();
    let mut acc = MultiLaurent::zero(phi.params.n);
    for (mu, term) in &img.expansion {
        if term.coeff.im != 0.0 || term.coeff.re.fract() != 0.0 {
            return Err(SphError::InvalidParams("exact transform needs integer coefficients".into()));
        }
        let c = Scalar::from_int(term.coeff.re as i64);
        acc.add_assign_ref(&p_poly(mu, phi.params.n, &t)?.scale(&(&term.scalar * &c)));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volumes() {
        let p = SpaceParams::new(2, 0).unwrap();
        assert!(volume_orbit(&[0], &p).unwrap().is_one());
        assert_eq!(volume_orbit(&[1], &p).unwrap(), &Scalar::q_pow(1) + &Scalar::one());
        let p = SpaceParams::new(3, 1).unwrap();
        assert!(volume_orbit(&[-1], &p).unwrap().is_one());
    }

    #[test]
    fn volume_ratio_law() {
        for m in [2, 3, 4, 5] {
            for e in [0u32, 1] {
                let p = SpaceParams::new(m, e).unwrap();
                let t = -&Scalar::q_pow(-1);
                let sigs = Signature::enumerate_box(p.n, e as i32, 2);
                for a in &sigs {
                    for b in &sigs {
                        if (a.size() - b.size()) % 2 != 0 {
                            continue;
                        }
                        let va = volume_orbit(a.entries(), &p).unwrap();
                        let vb = volume_orbit(b.entries(), &p).unwrap();
                        let tr = ZetaPoint::twice_real(&p);
                        let d: i32 = b.entries().iter().zip(a.entries()).zip(&tr).map(|((x, y), r)| (x - y) * r).sum();
                        let wa = w_tilde(&shifted(a.entries(), &p), p.parity, &t).unwrap();
                        let wb = w_tilde(&shifted(b.entries(), &p), p.parity, &t).unwrap();
                        // va / vb = q^{2<b-a, Re z_0>} wb / wa
                        assert_eq!(&va * &wa, &(&vb * &wb) * &Scalar::v_pow(2 * d));
                    }
                }
            }
        }
    }

    #[test]
    fn base_indicator_transform() {
        for (m, e) in [(2, 0), (2, 1), (3, 1), (4, 1)] {
            let p = SpaceParams::new(m, e).unwrap();
            let base = vec![-(e as i32); p.n];
            let f = fourier_exact(&SchwartzFn::indicator(p, &base).unwrap()).unwrap();
            assert_eq!(f, MultiLaurent::one(p.n));
        }
    }

    #[test]
    fn plancherel_rank_one() {
        let p = SpaceParams::new(2, 1).unwrap();
        let a = SchwartzFn::indicator(p, &[1]).unwrap();
        let (l, r) = plancherel_check(&a, &a, 3.0, 256).unwrap();
        assert!((l - r).norm() < 1e-8 * l.norm().max(1.0), "{l} {r}");
        let b = SchwartzFn::indicator(p, &[0]).unwrap();
        let (l, r) = plancherel_check(&a, &b, 3.0, 256).unwrap();
        assert!(l.norm() == 0.0 && r.norm() < 1e-8);
    }

    #[test]
    fn inversion_rank_one() {
        let p = SpaceParams::new(3, 0).unwrap();
        let mut f = SchwartzFn::zero(p);
        f.add_term(&[0], Complex64::new(0.5, 1.0)).unwrap();
        f.add_term(&[1], Complex64::new(-2.0, 0.0)).unwrap();
        f.add_term(&[3], Complex64::new(0.0, 0.25)).unwrap();
        for l in 0..4 {
            let (rec, orig) = inversion_check(&f, &[l], 2.0, 256).unwrap();
            assert!((rec - orig).norm() < 1e-6, "{l}: {rec} vs {orig}");
        }
    }

    #[test]
    fn rank_basis_shape() {
        let p = SpaceParams::new(4, 0).unwrap();
        assert_eq!(rank_basis(&p), vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![2, 1]]);
        let z = [Complex64::new(0.0, 0.37), Complex64::new(0.0, 1.21)];
        assert!(rank_basis_check(&p, 3.0, &z).unwrap() > 1e-8);
    }
}
