use std::fmt;

use super::padic::PadicNum;
use super::quad::{Field, QuadExt};
use super::CartanError;
use crate::weyl_roots::Signature;

pub type QMat = Vec<Vec<QuadExt>>;

pub fn zeros(f: Field, m: usize) -> QMat {
    vec![vec![QuadExt::zero(f); m]; m]
}

pub fn identity(f: Field, m: usize) -> QMat {
    let mut a = zeros(f, m);
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = QuadExt::one(f);
    }
    a
}

/// Anti-diagonal identity `j_m`.
pub fn j_matrix(f: Field, m: usize) -> QMat {
    let mut a = zeros(f, m);
    for (i, row) in a.iter_mut().enumerate() {
        row[m - 1 - i] = QuadExt::one(f);
    }
    a
}

pub fn mat_mul(a: &QMat, b: &QMat) -> QMat {
    let f = a[0][0].f;
    let (r, k, c) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![QuadExt::zero(f); c]; r];
    for i in 0..r {
        for l in 0..k {
            if a[i][l].is_exact_zero() {
                continue;
            }
            for j in 0..c {
                if !b[l][j].is_exact_zero() {
                    out[i][j] = out[i][j].add(&a[i][l].mul(&b[l][j]));
                }
            }
        }
    }
    out
}

pub fn mat_sub(a: &QMat, b: &QMat) -> QMat {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(u, v)| u.sub(v)).collect())
        .collect()
}

pub fn mat_add(a: &QMat, b: &QMat) -> QMat {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(u, v)| u.add(v)).collect())
        .collect()
}

pub fn conj_transpose(a: &QMat) -> QMat {
    let (r, c) = (a.len(), a[0].len());
    (0..c).map(|j| (0..r).map(|i| a[i][j].conj()).collect()).collect()
}

/// `k . x = k x k*`.
pub fn act(k: &QMat, x: &QMat) -> QMat {
    mat_mul(&mat_mul(k, x), &conj_transpose(k))
}

/// Minimal absolute precision among entries that are not exact zeros.
pub fn min_abs_prec(a: &QMat) -> Option<i32> {
    a.iter().flatten().filter_map(|x| x.abs_prec()).min()
}

/// True if every entry is zero at precision and the check is meaningful,
/// i.e. known at least modulo `pi`.
fn negligible_matrix(a: &QMat) -> Result<bool, CartanError> {
    if let Some(pr) = min_abs_prec(a) {
        if pr < 1 {
            return Err(CartanError::PrecisionExhausted(format!(
                "residual known only modulo pi^{}",
                pr
            )));
        }
    }
    Ok(a.iter().flatten().all(|x| x.is_negligible()))
}

/// `g* j g = j` at the working precision.
pub fn is_in_group(g: &QMat) -> Result<bool, CartanError> {
    let f = g[0][0].f;
    let j = j_matrix(f, g.len());
    negligible_matrix(&mat_sub(&mat_mul(&mat_mul(&conj_transpose(g), &j), g), &j))
}

/// `-min v(a_ij)`.
pub fn ell(a: &QMat) -> Result<i32, CartanError> {
    let known = a.iter().flatten().filter_map(|x| x.valuation()).min();
    let hidden = a
        .iter()
        .flatten()
        .filter(|x| x.valuation().is_none() && !x.is_exact_zero())
        .filter_map(|x| x.abs_prec())
        .min();
    match (known, hidden) {
        (None, _) => Err(CartanError::PrecisionExhausted(
            "all entries are zero at the working precision".into(),
        )),
        (Some(k), Some(h)) if h <= k => Err(CartanError::PrecisionExhausted(format!(
            "minimal valuation {} not separated from precision {}",
            k, h
        ))),
        (Some(k), _) => Ok(-k),
    }
}

/// Hermitian matrix over `k'` of size `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct PadicHermitian {
    pub field: Field,
    pub entries: QMat,
}

impl PadicHermitian {
    /// Wraps `entries` after checking hermitian symmetry at precision.
    pub fn new(field: Field, entries: QMat) -> Result<Self, CartanError> {
        let m = entries.len();
        if m == 0 || entries.iter().any(|r| r.len() != m) {
            return Err(CartanError::InvalidInput("matrix must be square".into()));
        }
        let diff = mat_sub(&entries, &conj_transpose(&entries));
        if !negligible_matrix(&diff)? {
            return Err(CartanError::NotHermitian);
        }
        Ok(PadicHermitian { field, entries })
    }

    pub fn m(&self) -> usize {
        self.entries.len()
    }

    pub fn n(&self) -> usize {
        self.m() / 2
    }

    pub fn get(&self, i: usize, j: usize) -> &QuadExt {
        &self.entries[i][j]
    }

    /// Membership in `X`: `x j x = j` and the characteristic polynomial of
    /// `x j` equals that of `j`, which for an involution amounts to
    /// `tr(x j) = tr(j) = m - 2n`.
    pub fn check_in_x(&self) -> Result<(), CartanError> {
        let f = self.field;
        let m = self.m();
        let j = j_matrix(f, m);
        let xj = mat_mul(&self.entries, &j);
        if !negligible_matrix(&mat_sub(&mat_mul(&xj, &xj), &identity(f, m)))? {
            return Err(CartanError::NotInX("x j x j != 1".into()));
        }
        let tr = (0..m).fold(QuadExt::zero(f), |acc, i| acc.add(&xj[i][i]));
        let want = QuadExt::from_int(f, (m - 2 * self.n()) as i64);
        if !tr.sub(&want).is_negligible() {
            return Err(CartanError::NotInX(format!("tr(xj) = {} differs from tr(j)", tr)));
        }
        Ok(())
    }

    pub fn act(&self, k: &QMat) -> PadicHermitian {
        PadicHermitian {
            field: self.field,
            entries: act(k, &self.entries),
        }
    }

    pub fn ell(&self) -> Result<i32, CartanError> {
        ell(&self.entries)
    }
}

impl fmt::Display for PadicHermitian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            writeln!(f, "{}", cells.join("  "))?;
        }
        Ok(())
    }
}

/// Representative `x_lambda` for `lambda` with `lambda_n >= -e`.
pub fn make_x_lambda(f: Field, m: usize, lambda: &Signature) -> Result<PadicHermitian, CartanError> {
    let n = m / 2;
    let parts = lambda.entries();
    if parts.len() != n || m < 2 {
        return Err(CartanError::InvalidInput(format!(
            "signature of length {} does not fit m = {}",
            parts.len(),
            m
        )));
    }
    if parts.windows(2).any(|w| w[0] < w[1]) {
        return Err(CartanError::InvalidInput("signature is not decreasing".into()));
    }
    if parts.last().is_some_and(|&l| l < -(f.e as i32)) {
        return Err(CartanError::InvalidInput(format!(
            "lambda_n < -e = -{} for p = {}",
            f.e, f.p
        )));
    }
    let mut x = zeros(f, m);
    let s = QuadExt::sqrt_eps(f);
    let one_minus_eps = QuadExt::from_int(f, 1 - f.eps);
    for (i, &l) in parts.iter().enumerate() {
        let c = m - 1 - i;
        if l >= 0 {
            x[i][i] = QuadExt::pi_pow(f, l);
            x[c][c] = QuadExt::pi_pow(f, -l);
        } else {
            x[i][i] = one_minus_eps.mul(&QuadExt::pi_pow(f, l));
            x[i][c] = s.neg();
            x[c][i] = s;
            x[c][c] = QuadExt::pi_pow(f, -l);
        }
    }
    if m % 2 == 1 {
        x[n][n] = QuadExt::one(f);
    }
    PadicHermitian::new(f, x)
}

/// K- and G-orbit invariants of a point of `X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitInvariants {
    /// `|lambda| mod 2`, read off the hermitian form on the `+1`-eigenspace of `x j`.
    pub parity: Option<u8>,
    /// `x` integral and `x = j mod pi`.
    pub jtype: bool,
    /// `min v(x - j)` when `jtype`.
    pub r: Option<i32>,
}

fn det_valuation(a: &QMat) -> Result<Option<i32>, CartanError> {
    let n = a.len();
    let mut a = a.clone();
    let mut v = 0;
    for col in 0..n {
        let mut best: Option<(usize, i32)> = None;
        for (row, r) in a.iter().enumerate().skip(col) {
            if let Some(vv) = r[col].valuation() {
                if best.is_none_or(|(_, b)| vv < b) {
                    best = Some((row, vv));
                }
            }
        }
        let Some((piv, pv)) = best else {
            return Ok(None);
        };
        a.swap(col, piv);
        v += pv;
        let inv = a[col][col].inv()?;
        for row in col + 1..n {
            let factor = a[row][col].mul(&inv);
            for k in col..n {
                let t = factor.mul(&a[col][k]);
                a[row][k] = a[row][k].sub(&t);
            }
        }
    }
    Ok(Some(v))
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if m < k {
        return vec![];
    }
    let mut out = subsets(m - 1, k);
    for mut s in subsets(m - 1, k - 1) {
        s.push(m - 1);
        out.push(s);
    }
    out
}

/// Smallest valuation of a nonzero principal minor of size `m - n` of
/// `j (1 + x j)`, the Gram matrix (up to 2) of the `+1`-eigenspace of `x j`.
fn gram_det_valuation(f: Field, x: &QMat) -> Result<Option<i32>, CartanError> {
    let m = x.len();
    let j = j_matrix(f, m);
    let a = mat_mul(&j, &mat_add(&identity(f, m), &mat_mul(x, &j)));
    let mut best: Option<i32> = None;
    for c in subsets(m, m - m / 2) {
        let minor: QMat = c.iter().map(|&i| c.iter().map(|&k| a[i][k]).collect()).collect();
        if let Some(v) = det_valuation(&minor)? {
            best = Some(best.map_or(v, |b| b.min(v)));
        }
    }
    Ok(best)
}

pub fn orbit_invariants(x: &PadicHermitian) -> Result<OrbitInvariants, CartanError> {
    let f = x.field;
    let m = x.m();
    let parity = match (
        gram_det_valuation(f, &x.entries)?,
        gram_det_valuation(f, &identity(f, m))?,
    ) {
        (Some(a), Some(b)) => Some((a - b).rem_euclid(2) as u8),
        _ => None,
    };
    let diff = mat_sub(&x.entries, &j_matrix(f, m));
    let integral = x
        .entries
        .iter()
        .flatten()
        .all(|c| c.is_exact_zero() || c.valuation().map_or(c.abs_prec().unwrap() >= 0, |v| v >= 0));
    let close = diff
        .iter()
        .flatten()
        .all(|c| c.is_exact_zero() || c.valuation().map_or(c.abs_prec().unwrap() >= 1, |v| v >= 1));
    let jtype = integral && close;
    let r = if jtype { Some(-ell(&diff)?) } else { None };
    Ok(OrbitInvariants { parity, jtype, r })
}

/// Parses an entry `"val,unit"` (or `"0"`) into an element of `k`.
pub fn parse_k(f: Field, s: &str) -> Result<PadicNum, CartanError> {
    let s = s.trim();
    if s == "0" {
        return Ok(PadicNum::zero(f.p));
    }
    let bad = || CartanError::InvalidInput(format!("cannot parse p-adic entry {:?}", s));
    let (v, u) = s.split_once(',').ok_or_else(bad)?;
    let v: i32 = v.trim().parse().map_err(|_| bad())?;
    let u: i64 = u.trim().parse().map_err(|_| bad())?;
    Ok(PadicNum::from_parts(f.p, v, u, f.prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(v: &[i32], e: i32) -> Signature {
        Signature::new(v.to_vec(), e).unwrap()
    }

    #[test]
    fn x_lambda_examples() {
        let f = Field::new(2, 30).unwrap();
        let x = make_x_lambda(f, 3, &sig(&[-1], 1)).unwrap();
        x.check_in_x().unwrap();
        assert_eq!(x.get(0, 0).valuation(), Some(1));
        assert!(x.get(0, 2).eq_approx(&QuadExt::sqrt_eps(f).neg()));
        assert!(x.get(2, 2).eq_approx(&QuadExt::pi_pow(f, 1)));
        let inv = orbit_invariants(&x).unwrap();
        assert!(inv.jtype);
        assert_eq!(inv.r, Some(1));
        let id = make_x_lambda(f, 4, &sig(&[0, 0], 1)).unwrap();
        assert_eq!(id.entries, identity(f, 4));
        assert!(!orbit_invariants(&id).unwrap().jtype);
        assert!(make_x_lambda(f, 3, &sig(&[-2], 2)).is_err());
    }

    #[test]
    fn every_x_lambda_is_in_x_with_parity() {
        for (p, e) in [(2u64, 1i32), (3, 0), (5, 0)] {
            let f = Field::new(p, 12).unwrap();
            for m in 2..=5usize {
                let n = m / 2;
                for lam in Signature::enumerate_box(n, e, 2) {
                    let x = make_x_lambda(f, m, &lam).unwrap();
                    x.check_in_x().unwrap();
                    let inv = orbit_invariants(&x).unwrap();
                    assert_eq!(inv.parity, Some(lam.size().rem_euclid(2) as u8), "{} m={}", lam, m);
                    let l0 = lam.entries()[0];
                    assert_eq!(x.ell().unwrap(), l0.max(0));
                }
            }
        }
    }

    #[test]
    fn ell_of_examples() {
        let f = Field::new(3, 10).unwrap();
        let x = make_x_lambda(f, 2, &sig(&[2], 0)).unwrap();
        assert_eq!(x.ell().unwrap(), 2);
        assert!(ell(&zeros(f, 2)).is_err());
    }

    #[test]
    fn not_hermitian_rejected() {
        let f = Field::new(3, 10).unwrap();
        let mut a = identity(f, 2);
        a[0][1] = QuadExt::omega(f);
        assert!(matches!(PadicHermitian::new(f, a), Err(CartanError::NotHermitian)));
    }
}
