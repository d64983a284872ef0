//! Acceptance criteria, one PASS/FAIL line each.

use std::time::{Duration, Instant};

use hermsph::exact_arith::{MultiLaurent, RationalFn, Scalar};
use hermsph::hall_littlewood::{
    c_function, expected_norm, inner_product_numeric, p_poly, q_poly, stabilizer_weight,
    torus_quadrature, PlancherelDensity, TSpec,
};
use hermsph::padic_cartan::sample::random_k;
use hermsph::padic_cartan::{
    cartan_reduce, make_x_lambda, omega_bruteforce_m2, orbit_invariants,
    valuation_distribution_m2, Field,
};
use hermsph::schwartz_plancherel::{inversion_check, plancherel_check, rank_basis_check, SchwartzFn};
use hermsph::spherical::{
    check_functional_equation, check_holomorphic_invariant, omega_at_z0_is_one, omega_closed_rank1,
    omega_explicit, s_to_z, sample_point, weyl_group, SpaceParams,
};
use hermsph::weyl_roots::{enumerate_group, stabilizer_poincare, Parity, Signature};
use num_complex::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn box_sigs(n: usize, e: u32, max_part: i32) -> Vec<Signature> {
    Signature::enumerate_box(n, e as i32, max_part)
}

fn p0_is_one() -> Outcome {
    for n in 1..=3 {
        for m in [2 * n, 2 * n + 1] {
            let t = TSpec::spherical(Parity::of(m));
            let p = p_poly(&Signature::zero(n), n, &t).map_err(err)?;
            ensure(p == MultiLaurent::one(n), || format!("P_0 = {p} for m = {m}"))?;
        }
    }
    Ok("n = 1..3, both parities".into())
}

fn poincare_identity() -> Outcome {
    for n in 1..=3 {
        for m in [2 * n, 2 * n + 1] {
            let parity = Parity::of(m);
            let t = TSpec::spherical(parity);
            let zero = Signature::zero(n);
            let sum = q_poly(&zero, n, &t).map_err(err)?;
            let w0 = stabilizer_weight(&zero, &t).map_err(err)?;
            let w0_tilde = stabilizer_poincare(&zero, parity, &-&Scalar::q_pow(-1)).map_err(err)?;
            ensure(sum == MultiLaurent::constant(n, &w0), || format!("m = {m}: sum = {sum}"))?;
            ensure(w0 == w0_tilde, || format!("m = {m}: W_0 = {w0} but w~ gives {w0_tilde}"))?;
            if n <= 2 {
                // Independent route: add the rational functions sigma(c) directly.
                let c = c_function(n, &t);
                let mut acc = RationalFn::constant(n, &Scalar::zero());
                for s in enumerate_group(n).map_err(err)? {
                    acc = &acc + &c.weyl_substitute(s).map_err(err)?;
                }
                ensure(acc.equals(&RationalFn::constant(n, &w0)), || {
                    format!("m = {m}: direct sum {acc}")
                })?;
            }
        }
    }
    Ok("n = 1..3, both parities; direct rational sum for n <= 2".into())
}

fn orthogonality() -> Outcome {
    let mut worst: f64 = 0.0;
    for (n, grid, tol) in [(1usize, 256usize, 1e-8), (2, 64, 1e-6)] {
        for m in [2 * n, 2 * n + 1] {
            let t = TSpec::spherical(Parity::of(m));
            let sigs = box_sigs(n, 0, 3);
            let polys: Vec<MultiLaurent> =
                sigs.iter().map(|s| p_poly(s, n, &t)).collect::<Result<_, _>>().map_err(err)?;
            for q in [2.0f64, 3.0] {
                let v = q.sqrt();
                for i in 0..sigs.len() {
                    for j in i..sigs.len() {
                        let got = inner_product_numeric(&polys[i], &polys[j], n, &t, q, grid)
                            .map_err(err)?;
                        let want = if i == j {
                            let (a, b) = expected_norm(&sigs[i], &t).map_err(err)?;
                            a.eval(v) / b.eval(v)
                        } else {
                            Complex64::new(0.0, 0.0)
                        };
                        let r = (got - want).norm();
                        worst = worst.max(r / tol);
                        ensure(r < tol, || {
                            format!("m = {m} q = {q} <P{}, P{}>: residual {r:e}", sigs[i], sigs[j])
                        })?;
                    }
                }
            }
        }
    }
    Ok(format!("worst residual/tolerance {worst:.1e}"))
}

fn rank_one_closed_forms() -> Outcome {
    let mut count = 0;
    for m in [2, 3] {
        for e in [0u32, 1] {
            let p = SpaceParams::new(m, e).map_err(err)?;
            for l in -(e as i32)..=4 {
                let a = omega_explicit(&[l], &p).map_err(err)?;
                let b = omega_closed_rank1(l, m, e).map_err(err)?;
                ensure(a.equals(&b), || format!("m = {m} e = {e} lambda = {l}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} exact identities"))
}

fn oracle() -> Outcome {
    let ss = [
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(2.0, 0.0),
        Complex64::new(1.0, 1.0),
    ];
    let mut worst: f64 = 0.0;
    for (p, e) in [(3u64, 0u32), (2, 1)] {
        let params = SpaceParams::new(2, e).map_err(err)?;
        let q = p as f64;
        for l in [-(e as i32), 0, 1, 2] {
            let a = valuation_distribution_m2(l, p, 12).map_err(err)?;
            let b = valuation_distribution_m2(l, p, 24).map_err(err)?;
            ensure(a == b, || format!("p = {p} lambda = {l}: not stationary"))?;
            for s in ss {
                let brute = omega_bruteforce_m2(l, s, p, 12).map_err(err)?;
                let closed = omega_closed_rank1(l, 2, e)
                    .map_err(err)?
                    .eval_complex(q, &s_to_z(&[s], &params, q))
                    .map_err(err)?;
                let r = (brute - closed).norm();
                worst = worst.max(r);
                ensure(r < 1e-12, || format!("p = {p} lambda = {l} s = {s}: residual {r:e}"))?;
            }
        }
    }
    Ok(format!("max residual {worst:.1e}, depth 12 = depth 24"))
}

fn functional_equations() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for m in [2, 3, 4, 5] {
        for e in [0u32, 1] {
            let p = SpaceParams::new(m, e).map_err(err)?;
            let q = if e == 1 { 2.0 } else { 3.0 };
            for sig in box_sigs(p.n, e, 2) {
                for s in weyl_group(&p).map_err(err)? {
                    let r = check_functional_equation(sig.entries(), s, &p, q, 20, &mut rng)
                        .map_err(err)?;
                    worst = worst.max(r);
                    ensure(r < 1e-10, || format!("m = {m} e = {e} {sig} {s}: residual {r:e}"))?;
                }
                check_holomorphic_invariant(sig.entries(), &p)
                    .map_err(|x| format!("m = {m} e = {e} {sig}: {x}"))?;
            }
        }
    }
    Ok(format!("max residual {worst:.1e}"))
}

fn normalization() -> Outcome {
    let mut count = 0;
    for m in [2, 3, 4, 5] {
        for e in [0u32, 1] {
            let p = SpaceParams::new(m, e).map_err(err)?;
            for sig in box_sigs(p.n, e, 3) {
                ensure(omega_at_z0_is_one(sig.entries(), &p).map_err(err)?, || {
                    format!("m = {m} e = {e} {sig}")
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} signatures"))
}

fn cartan() -> Outcome {
    let mut count = 0;
    for m in [3, 5] {
        for (e, prime, prec) in [(0u32, 3u64, 30u32), (1, 2, 40)] {
            let f = Field::new(prime, prec).map_err(err)?;
            let mut rng = ChaCha8Rng::seed_from_u64(100 + m as u64 + e as u64);
            for sig in box_sigs(m / 2, e, 2) {
                let x = make_x_lambda(f, m, &sig).map_err(err)?;
                let inv = orbit_invariants(&x).map_err(err)?;
                let parity = Some(sig.size().rem_euclid(2) as u8);
                ensure(inv.parity == parity, || format!("m = {m} {sig}: parity {:?}", inv.parity))?;
                for trial in 0..50 {
                    let y = x.act(&random_k(f, m, 6, &mut rng));
                    let got = cartan_reduce(&y).map_err(err)?;
                    ensure(got == sig, || format!("m = {m} e = {e} {sig} trial {trial}: got {got}"))?;
                    let yinv = orbit_invariants(&y).map_err(err)?;
                    ensure(yinv == inv, || format!("m = {m} {sig} trial {trial}: invariants moved"))?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} conjugates"))
}

fn plancherel_inversion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst_parseval: f64 = 0.0;
    let mut worst_inv: f64 = 0.0;
    for m in [2, 3, 4, 5] {
        for e in [0u32, 1] {
            let p = SpaceParams::new(m, e).map_err(err)?;
            let q = if e == 1 { 2.0 } else { 3.0 };
            let (grid, tol) = if p.n == 1 { (256, 1e-8) } else { (128, 1e-5) };
            let sigs = box_sigs(p.n, e, 2);
            for a in &sigs {
                for b in &sigs {
                    let fa = SchwartzFn::indicator(p, a.entries()).map_err(err)?;
                    let fb = SchwartzFn::indicator(p, b.entries()).map_err(err)?;
                    let (l, r) = plancherel_check(&fa, &fb, q, grid).map_err(err)?;
                    let d = (l - r).norm();
                    worst_parseval = worst_parseval.max(d);
                    ensure(d < tol, || format!("m = {m} e = {e} <ch{a}, ch{b}>: {d:e}"))?;
                }
            }
            if p.n == 1 {
                let dens = PlancherelDensity::new(1, &p.t_spec(), q).map_err(err)?;
                let mass = torus_quadrature(1, grid, |x| Ok(Complex64::new(dens.at(x)?, 0.0)))
                    .map_err(err)?;
                ensure((mass - 1.0).norm() < 1e-10, || format!("m = {m}: total mass {mass}"))?;
                let pool = box_sigs(1, e, 3);
                let mut phi = SchwartzFn::zero(p);
                for i in sample(&mut rng, pool.len(), 3) {
                    let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    phi.add_term(pool[i].entries(), c).map_err(err)?;
                }
                for s in box_sigs(1, e, 4) {
                    let (rec, orig) = inversion_check(&phi, s.entries(), q, grid).map_err(err)?;
                    let d = (rec - orig).norm();
                    worst_inv = worst_inv.max(d);
                    ensure(d < 1e-6, || format!("m = {m} e = {e} phi{s}: {d:e}"))?;
                }
            }
        }
    }
    Ok(format!("Parseval {worst_parseval:.1e}, inversion {worst_inv:.1e}"))
}

fn rank_determinants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut least = f64::INFINITY;
    for m in [2, 3, 4, 5] {
        for e in [0u32, 1] {
            let p = SpaceParams::new(m, e).map_err(err)?;
            let q = if e == 1 { 2.0 } else { 3.0 };
            for k in 0..10 {
                let z = sample_point(&mut rng, p.n, q, 0.25);
                let d = rank_basis_check(&p, q, &z).map_err(err)?;
                least = least.min(d);
                ensure(d > 1e-8, || format!("m = {m} e = {e} sample {k}: |det| = {d:e}"))?;
            }
        }
    }
    Ok(format!("min |det| {least:.1e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 10] = [
        ("hall-littlewood base case", p0_is_one, 1),
        ("poincare identity", poincare_identity, 30),
        ("orthogonality", orthogonality, 120),
        ("rank-one closed forms", rank_one_closed_forms, 5),
        ("brute-force oracle", oracle, 60),
        ("functional equations", functional_equations, 60),
        ("normalization at z0", normalization, 10),
        ("cartan reduction", cartan, 120),
        ("plancherel and inversion", plancherel_inversion, 120),
        ("free-module rank", rank_determinants, 10),
    ];
    let mut failed = 0;
    for (i, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = f();
        let took = start.elapsed();
        let over = took > Duration::from_secs(*budget);
        let (status, detail) = match (&res, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {budget}s budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} {:>2} {name}: {detail} ({:.2}s)", i + 1, took.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
