use rand::Rng;

use super::matrix::{identity, mat_mul, QMat};
use super::quad::{Field, QuadExt};

fn random_int<R: Rng>(f: Field, rng: &mut R) -> i64 {
    rng.gen_range(0..(f.p as i64).pow(3))
}

/// Random element of `O_{k'}`.
pub fn random_integral<R: Rng>(f: Field, rng: &mut R) -> QuadExt {
    QuadExt::from_ints(f, random_int(f, rng), random_int(f, rng))
}

/// Random element of `O_{k'}^x`.
pub fn random_unit<R: Rng>(f: Field, rng: &mut R) -> QuadExt {
    loop {
        let x = random_integral(f, rng);
        if x.valuation() == Some(0) {
            return x;
        }
    }
}

/// Random element of the norm-one group `O_{k'}^1`.
pub fn random_norm_one<R: Rng>(f: Field, rng: &mut R) -> QuadExt {
    let b = random_unit(f, rng);
    b.div(&b.conj()).expect("unit")
}

/// `c` with `N(b) + c + c* = 0`, randomized by a multiple of `scale * sqrt(eps)`.
fn null_partner<R: Rng>(b: &QuadExt, scale: i32, rng: &mut R) -> QuadExt {
    let f = b.f;
    let s = f.k(random_int(f, rng)).shift(scale);
    QuadExt::omega(f)
        .scale(&b.norm())
        .neg()
        .add(&QuadExt::sqrt_eps(f).scale(&s))
}

/// Random element of `K_1 = U(j_3)(O_{k'})` from the explicit coordinates of
/// the Bruhat cells `K_{1,1}` and `K_{1,2}`.
pub fn random_k1<R: Rng>(f: Field, rng: &mut R) -> QMat {
    let alpha = random_unit(f, rng);
    let u = random_norm_one(f, rng);
    let zero = QuadExt::zero(f);
    let one = QuadExt::one(f);
    let diag = vec![
        vec![alpha, zero, zero],
        vec![zero, u, zero],
        vec![zero, zero, alpha.conj().inv().expect("unit")],
    ];
    let d = random_integral(f, rng);
    let fd = null_partner(&d, 0, rng);
    if rng.gen_bool(0.5) {
        let b = random_integral(f, rng);
        let c = null_partner(&b, 0, rng);
        let upper = vec![
            vec![one, d.conj().neg(), fd],
            vec![zero, one, d],
            vec![zero, zero, one],
        ];
        let w = vec![
            vec![zero, zero, one],
            vec![zero, one, b.conj().neg()],
            vec![one, b, c],
        ];
        mat_mul(&mat_mul(&diag, &upper), &w)
    } else {
        let b = random_integral(f, rng).shift(1);
        let c = null_partner(&b, 1, rng);
        let lower = vec![
            vec![one, zero, zero],
            vec![b, one, zero],
            vec![c, b.conj().neg(), one],
        ];
        let upper = vec![
            vec![one, d, fd],
            vec![zero, one, d.conj().neg()],
            vec![zero, zero, one],
        ];
        mat_mul(&mat_mul(&diag, &lower), &upper)
    }
}

/// Random element of `U(j_2)(O_{k'})` from the two-cell parametrization.
pub fn random_k0<R: Rng>(f: Field, rng: &mut R) -> QMat {
    let alpha = random_unit(f, rng);
    let u = QuadExt::from_k(f, f.k(random_int(f, rng)));
    let v = QuadExt::from_k(f, f.k(random_int(f, rng)));
    let s = QuadExt::sqrt_eps(f);
    let s_inv = s.inv().expect("unit");
    let one = QuadExt::one(f);
    let zero = QuadExt::zero(f);
    let diag = vec![vec![alpha, zero], vec![zero, alpha.conj().inv().expect("unit")]];
    let h = if rng.gen_bool(0.5) {
        vec![vec![one, v.mul(&s_inv)], vec![u.mul(&s), one.add(&u.mul(&v))]]
    } else {
        let pu = u.shift(1);
        vec![vec![pu.mul(&s), one.add(&pu.mul(&v))], vec![one, v.mul(&s_inv)]]
    };
    mat_mul(&diag, &h)
}

/// Random element of `W`: a permutation of mirror pairs with random flips.
pub fn random_weyl<R: Rng>(f: Field, m: usize, rng: &mut R) -> QMat {
    let n = m / 2;
    let mut pairs: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        pairs.swap(i, rng.gen_range(0..=i));
    }
    let mut perm: Vec<usize> = (0..m).collect();
    for (i, &t) in pairs.iter().enumerate() {
        let flip = rng.gen_bool(0.5);
        let (a, b) = if flip { (m - 1 - t, t) } else { (t, m - 1 - t) };
        perm[i] = a;
        perm[m - 1 - i] = b;
    }
    let mut w = vec![vec![QuadExt::zero(f); m]; m];
    for (i, &t) in perm.iter().enumerate() {
        w[t][i] = QuadExt::one(f);
    }
    w
}

/// Random elementary element of the `GL_n(O_{k'})` embedding
/// `A -> diag(A, 1, j A*^{-1} j)`.
pub fn random_gl<R: Rng>(f: Field, m: usize, rng: &mut R) -> QMat {
    let n = m / 2;
    let mut g = identity(f, m);
    if n == 0 {
        return g;
    }
    if n >= 2 && rng.gen_bool(0.7) {
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let t = random_integral(f, rng);
        g[a][b] = t;
        g[m - 1 - b][m - 1 - a] = t.conj().neg();
    } else {
        let a = rng.gen_range(0..n);
        let d = random_unit(f, rng);
        g[a][a] = d;
        g[m - 1 - a][m - 1 - a] = d.conj().inv().expect("unit");
    }
    g
}

/// Random unipotent `1 + N` with `N` in an off-diagonal block of the Lie
/// algebra of `U(j)`: `N = t E_{m-1-b,a} - t* E_{m-1-a,b}` or its transpose type.
pub fn random_nilpotent<R: Rng>(f: Field, m: usize, rng: &mut R) -> QMat {
    let n = m / 2;
    let mut g = identity(f, m);
    if n < 2 {
        return g;
    }
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    let t = random_integral(f, rng);
    if rng.gen_bool(0.5) {
        g[m - 1 - b][a] = t;
        g[m - 1 - a][b] = t.conj().neg();
    } else {
        g[a][m - 1 - b] = t;
        g[b][m - 1 - a] = t.conj().neg();
    }
    g
}

/// Embeds a `3x3` element on the coordinates `(i, center, m-1-i)`, or a `2x2`
/// element on `(i, m-1-i)`.
pub fn embed(f: Field, m: usize, i: usize, h: &QMat) -> QMat {
    let idx: Vec<usize> = if h.len() == 3 {
        vec![i, m / 2, m - 1 - i]
    } else {
        vec![i, m - 1 - i]
    };
    let mut g = identity(f, m);
    for (a, &ia) in idx.iter().enumerate() {
        for (b, &ib) in idx.iter().enumerate() {
            g[ia][ib] = h[a][b];
        }
    }
    g
}

/// Random product of `steps` generators of `K`.
pub fn random_k<R: Rng>(f: Field, m: usize, steps: usize, rng: &mut R) -> QMat {
    let n = m / 2;
    let mut k = identity(f, m);
    for _ in 0..steps {
        let g = match rng.gen_range(0..5) {
            0 => random_weyl(f, m, rng),
            1 => random_gl(f, m, rng),
            2 if m >= 4 => random_nilpotent(f, m, rng),
            _ if m % 2 == 1 => embed(f, m, rng.gen_range(0..n), &random_k1(f, rng)),
            _ => embed(f, m, rng.gen_range(0..n), &random_k0(f, rng)),
        };
        k = mat_mul(&k, &g);
    }
    k
}
